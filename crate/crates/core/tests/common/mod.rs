#![allow(dead_code)]

use bowtie_centrality::influence::enumerate_simple_paths;
use bowtie_centrality::{validate, NodeId, NodeValues, WeightedDigraph};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Caps every column sum at a per-column bound; `unit_share` of the columns may sum to 1.
fn cap_columns(rng: &mut ChaCha8Rng, n: usize, edges: &mut [(usize, usize, f64)], unit_share: f64) {
    let mut sums = vec![0.0; n];
    for e in edges.iter() {
        sums[e.1] += e.2;
    }
    let caps: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(unit_share) { 1.0 } else { rng.gen_range(0.2..0.99) })
        .collect();
    for e in edges.iter_mut() {
        if sums[e.1] > caps[e.1] {
            e.2 *= caps[e.1] / sums[e.1];
        }
    }
}

fn random_values(rng: &mut ChaCha8Rng, n: usize) -> NodeValues {
    NodeValues::new(
        (0..n)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..10.0) })
            .collect(),
    )
    .unwrap()
}

/// Random graph with cycles and self-loops that passes validation.
pub fn random_valid(rng: &mut ChaCha8Rng, n: usize, unit_share: f64) -> (WeightedDigraph, NodeValues) {
    loop {
        let p = rng.gen_range(0.1..0.5);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let prob = if i == j { 0.05 } else { p };
                if rng.gen_bool(prob) {
                    edges.push((i, j, rng.gen_range(0.01..1.0)));
                }
            }
        }
        cap_columns(rng, n, &mut edges, unit_share);
        let g = WeightedDigraph::with_index_labels(n, edges).unwrap();
        if validate(&g).passed() {
            return (g, random_values(rng, n));
        }
    }
}

/// Random DAG: edges only go forward in a random node order.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize) -> (WeightedDigraph, NodeValues) {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let p = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((order[a], order[b], rng.gen_range(0.01..1.0)));
            }
        }
    }
    cap_columns(rng, n, &mut edges, 0.5);
    let g = WeightedDigraph::with_index_labels(n, edges).unwrap();
    (g, random_values(rng, n))
}

pub fn dense(g: &WeightedDigraph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for (i, j, w) in g.matrix().triplets() {
        m[(i, j)] = w;
    }
    m
}

/// `(I - W)^-1` by dense LU.
pub fn dense_resolvent(g: &WeightedDigraph) -> DMatrix<f64> {
    let n = g.node_count();
    (DMatrix::identity(n, n) - dense(g)).try_inverse().expect("I - W invertible")
}

pub struct DenseMeasures {
    pub access: Vec<f64>,
    pub corrected: Vec<f64>,
    pub bowtie: Vec<f64>,
    pub resolvent_diagonal: Vec<f64>,
}

/// Access, corrected and bow-tie centralities from an explicit dense inverse.
pub fn dense_measures(g: &WeightedDigraph, v: &NodeValues) -> DenseMeasures {
    let w = dense(g);
    let inv = dense_resolvent(g);
    let v = DVector::from_column_slice(v.as_slice());
    let access = &inv * &w * &v;
    let diag: Vec<f64> = inv.diagonal().iter().copied().collect();
    let corrected: Vec<f64> = access.iter().zip(&diag).map(|(c, d)| c / d).collect();
    let vv = &inv * &v;
    let scaled = DVector::from_iterator(vv.len(), vv.iter().zip(&diag).map(|(x, d)| x / d));
    let bowtie = &w * scaled;
    DenseMeasures {
        access: access.iter().copied().collect(),
        corrected,
        bowtie: bowtie.iter().copied().collect(),
        resolvent_diagonal: diag,
    }
}

/// `sum_{k >= 1} W^k v`, summed until the terms stop mattering.
pub fn series_access(g: &WeightedDigraph, v: &NodeValues) -> Vec<f64> {
    let w = dense(g);
    let mut term = DVector::from_column_slice(v.as_slice());
    let mut total = DVector::zeros(term.len());
    for _ in 0..2_000_000 {
        term = &w * term;
        total += &term;
        let t = term.amax();
        if t == 0.0 || t <= 1e-17 * total.amax() {
            break;
        }
    }
    total.iter().copied().collect()
}

/// Influence index by explicit enumeration of all simple paths.
pub fn brute_force_influence(g: &WeightedDigraph, v: &NodeValues) -> Vec<f64> {
    g.nodes()
        .map(|s| {
            enumerate_simple_paths(g, s, None)
                .unwrap()
                .iter()
                .map(|p| p.weight * v.get(p.end()))
                .sum::<f64>()
                + 0.0
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `max |a - b| / max(1e-300, ||b||_inf)`.
pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    max_abs_diff(a, b) / norm_inf(b).max(1e-300)
}

pub fn node(i: usize) -> NodeId {
    NodeId::new(i)
}
