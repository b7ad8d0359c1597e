//! Seeded generator of synthetic bow-tie networks with planted IN, SCC, OUT and TT blocks.
//!
//! Node ids are laid out as `IN | SCC | OUT | TT`. IN nodes only point to later IN nodes or
//! the core, OUT nodes only receive edges from the core or earlier OUT nodes, and TT nodes
//! hang off IN (as targets) or OUT (as sources) without touching the core.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};
use serde::{Deserialize, Serialize};

use crate::bowtie::BowTieClass;
use crate::error::{Error, Result};
use crate::graph::{NodeValues, WeightedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightDistribution {
    Uniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ValueDistribution {
    Uniform { low: f64, high: f64 },
    Pareto { scale: f64, shape: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BowTieSpec {
    pub n_in: usize,
    pub n_scc: usize,
    pub n_out: usize,
    pub n_tt: usize,
    /// Mean out-degree of IN nodes (at least one edge each).
    pub in_degree: f64,
    /// Mean number of extra core edges per core node, on top of a Hamiltonian cycle.
    pub scc_degree: f64,
    /// Mean in-degree of OUT nodes (at least one edge each).
    pub out_degree: f64,
    /// Mean attachments per TT node (at least one each).
    pub tt_degree: f64,
    pub weights: WeightDistribution,
    pub values: ValueDistribution,
    /// Columns whose in-weight exceeds this are scaled down to it.
    pub max_column_sum: f64,
    pub seed: u64,
}

impl Default for BowTieSpec {
    fn default() -> Self {
        Self {
            n_in: 10,
            n_scc: 10,
            n_out: 10,
            n_tt: 0,
            in_degree: 2.0,
            scc_degree: 2.0,
            out_degree: 2.0,
            tt_degree: 1.0,
            weights: WeightDistribution::Uniform { low: 0.01, high: 1.0 },
            values: ValueDistribution::Pareto { scale: 1.0, shape: 1.16 },
            max_column_sum: 0.95,
            seed: 0,
        }
    }
}

impl BowTieSpec {
    pub fn with_sizes(n_in: usize, n_scc: usize, n_out: usize, n_tt: usize) -> Self {
        Self {
            n_in,
            n_scc,
            n_out,
            n_tt,
            ..Self::default()
        }
    }

    pub fn node_count(&self) -> usize {
        self.n_in + self.n_scc + self.n_out + self.n_tt
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_owned()));
        if self.n_scc == 0 && self.node_count() > 0 {
            return bad("a non-empty network needs n_scc >= 1");
        }
        if self.n_tt > 0 && self.n_in + self.n_out == 0 {
            return bad("TT nodes need IN or OUT nodes to attach to");
        }
        for (name, d) in [
            ("in_degree", self.in_degree),
            ("scc_degree", self.scc_degree),
            ("out_degree", self.out_degree),
            ("tt_degree", self.tt_degree),
        ] {
            if !(d.is_finite() && d >= 0.0) {
                return bad(&format!("{name} must be finite and non-negative"));
            }
        }
        let core_pairs = self.n_scc * self.n_scc.saturating_sub(1);
        let extra = (self.scc_degree * self.n_scc as f64).round() as usize;
        if self.n_scc >= 2 && extra + self.n_scc > core_pairs {
            return bad(&format!(
                "scc_degree {} asks for more core edges than the {} available pairs",
                self.scc_degree, core_pairs
            ));
        }
        let WeightDistribution::Uniform { low, high } = self.weights;
        if !(low > 0.0 && low <= high && high.is_finite()) {
            return bad("weights need 0 < low <= high");
        }
        match self.values {
            ValueDistribution::Uniform { low, high } if !(low >= 0.0 && low <= high && high.is_finite()) => {
                return bad("values need 0 <= low <= high");
            }
            ValueDistribution::Pareto { scale, shape } if !(scale > 0.0 && shape > 0.0) => {
                return bad("pareto values need positive scale and shape");
            }
            _ => {}
        }
        if !(self.max_column_sum > 0.0 && self.max_column_sum <= 1.0) {
            return bad("max_column_sum must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticNetwork {
    pub graph: WeightedDigraph,
    pub values: NodeValues,
    pub planted: Vec<BowTieClass>,
}

/// `floor(mean)` plus one with probability `fract(mean)`, at least `min`.
fn draw_count(rng: &mut ChaCha8Rng, mean: f64, min: usize) -> usize {
    let base = mean.floor() as usize;
    let extra = usize::from(rng.gen_bool(mean.fract()));
    (base + extra).max(min)
}

/// Builds a network from `spec`; identical specs give identical graphs.
pub fn generate(spec: &BowTieSpec) -> Result<SyntheticNetwork> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n_in, n_scc, n_out) = (spec.n_in, spec.n_scc, spec.n_out);
    let core = n_in..n_in + n_scc;
    let out = core.end..core.end + n_out;
    let n = spec.node_count();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    // Core: random Hamiltonian cycle plus distinct extra edges.
    if n_scc == 1 {
        pairs.push((core.start, core.start));
    } else if n_scc >= 2 {
        let order: Vec<usize> = sample(&mut rng, n_scc, n_scc).into_iter().map(|k| core.start + k).collect();
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for k in 0..n_scc {
            let e = (order[k], order[(k + 1) % n_scc]);
            seen.insert(e);
            pairs.push(e);
        }
        let extra = (spec.scc_degree * n_scc as f64).round() as usize;
        while pairs.len() < n_scc + extra {
            let u = rng.gen_range(core.clone());
            let w = rng.gen_range(core.clone());
            if u != w && seen.insert((u, w)) {
                pairs.push((u, w));
            }
        }
    }

    // IN: targets among later IN nodes and the core.
    for i in 0..n_in {
        let pool = core.end - i - 1;
        let k = draw_count(&mut rng, spec.in_degree, 1).min(pool);
        for t in sample(&mut rng, pool, k) {
            pairs.push((i, i + 1 + t));
        }
    }

    // OUT: sources among the core and earlier OUT nodes.
    for o in out.clone() {
        let pool = o - core.start;
        let k = draw_count(&mut rng, spec.out_degree, 1).min(pool);
        for s in sample(&mut rng, pool, k) {
            pairs.push((core.start + s, o));
        }
    }

    // TT: fed by IN nodes or feeding OUT nodes, never both.
    for t in out.end..n {
        let from_in = n_out == 0 || (n_in > 0 && rng.gen_bool(0.5));
        let pool = if from_in { n_in } else { n_out };
        let k = draw_count(&mut rng, spec.tt_degree, 1).min(pool);
        for a in sample(&mut rng, pool, k) {
            pairs.push(if from_in { (a, t) } else { (t, out.start + a) });
        }
    }

    let WeightDistribution::Uniform { low, high } = spec.weights;
    let mut edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(u, w)| (u, w, if low == high { low } else { rng.gen_range(low..high) }))
        .collect();
    normalize_columns(&mut edges, n, spec.max_column_sum, core.clone());

    let values: Vec<f64> = match spec.values {
        ValueDistribution::Uniform { low, high } => (0..n)
            .map(|_| if low == high { low } else { rng.gen_range(low..high) })
            .collect(),
        ValueDistribution::Pareto { scale, shape } => {
            let d = Pareto::new(scale, shape).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
    };

    let planted = (0..n)
        .map(|i| {
            if i < core.start {
                BowTieClass::In
            } else if i < core.end {
                BowTieClass::Scc
            } else if i < out.end {
                BowTieClass::Out
            } else {
                BowTieClass::Tt
            }
        })
        .collect();

    Ok(SyntheticNetwork {
        graph: WeightedDigraph::from_edges_unchecked((0..n).map(|i| i.to_string()).collect(), edges)?,
        values: NodeValues::new(values)?,
        planted,
    })
}

/// Caps every column sum at `cap` and makes sure some core column stays below 1.
fn normalize_columns(edges: &mut [(usize, usize, f64)], n: usize, cap: f64, core: std::ops::Range<usize>) {
    let mut sums = vec![0.0; n];
    for &(_, j, w) in edges.iter() {
        sums[j] += w;
    }
    let mut scale: Vec<f64> = sums.iter().map(|&s| if s > cap { cap / s } else { 1.0 }).collect();
    let leaks = core.clone().any(|j| sums[j] * scale[j] < 1.0 - 1e-6);
    if !leaks && !core.is_empty() {
        scale[core.start] *= 0.5;
    }
    for e in edges.iter_mut() {
        e.2 *= scale[e.1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bowtie::{bowtie_decompose, strongly_connected_components, CoreRule};
    use crate::validate::validate;

    #[test]
    fn two_cycle() {
        let spec = BowTieSpec {
            scc_degree: 0.0,
            ..BowTieSpec::with_sizes(0, 2, 0, 0)
        };
        let net = generate(&spec).unwrap();
        assert_eq!(net.graph.edge_count(), 2);
        assert!(validate(&net.graph).passed());
    }

    #[test]
    fn too_dense_core_is_rejected() {
        let spec = BowTieSpec {
            scc_degree: 5.0,
            ..BowTieSpec::with_sizes(0, 3, 0, 0)
        };
        assert!(matches!(generate(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn planted_classes_are_recovered() {
        let spec = BowTieSpec {
            seed: 7,
            ..BowTieSpec::with_sizes(20, 15, 25, 6)
        };
        let net = generate(&spec).unwrap();
        assert!(validate(&net.graph).passed());
        let p = strongly_connected_components(&net.graph);
        let d = bowtie_decompose(&net.graph, &p, CoreRule::LargestScc, false).unwrap();
        assert_eq!(d.classes, net.planted);
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = BowTieSpec::with_sizes(5, 5, 5, 2);
        let bytes = |s: &BowTieSpec| {
            let mut buf = Vec::new();
            generate(s).unwrap().graph.write_edge_list(&mut buf).unwrap();
            buf
        };
        assert_eq!(bytes(&spec), bytes(&spec));
        let other = BowTieSpec { seed: 1, ..spec.clone() };
        assert_ne!(bytes(&spec), bytes(&other));
    }
}
