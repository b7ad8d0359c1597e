//! Checks of the preconditions that make `(1 - W)` invertible with a non-negative inverse.
//!
//! Column sums must not exceed one, and every strongly connected component needs at
//! least one node whose in-component column sum is strictly below one. Together these
//! bound the Perron root of `W` below one.

use serde::Serialize;

use crate::bowtie::{scc_of_matrix, SccId, SccPartition};
use crate::error::WeightOffender;
use crate::graph::{NodeId, WeightedDigraph, EPS_STOCHASTIC};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronCheck {
    pub scc: SccId,
    pub satisfied: bool,
    /// First member (ascending) whose in-component column sum is below `1 - EPS_STOCHASTIC`.
    pub witness: Option<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `(target, excess over 1)` for every column summing above `1 + EPS_STOCHASTIC`.
    pub column_sum_violations: Vec<(NodeId, f64)>,
    pub weight_range_violations: Vec<WeightOffender>,
    pub self_loops: Vec<NodeId>,
    pub perron_condition: Vec<PerronCheck>,
    pub spectral_radius_estimate: f64,
    pub spectral_radius_converged: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.column_sum_violations.is_empty()
            && self.weight_range_violations.is_empty()
            && self.perron_condition.iter().all(|p| p.satisfied)
    }

    pub fn perron_failures(&self) -> impl Iterator<Item = &PerronCheck> {
        self.perron_condition.iter().filter(|p| !p.satisfied)
    }

    /// One-line description of the failures, empty when the report passed.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.column_sum_violations.is_empty() {
            parts.push(format!("{} column sum(s) above 1", self.column_sum_violations.len()));
        }
        if !self.weight_range_violations.is_empty() {
            parts.push(format!("{} weight(s) outside [0, 1]", self.weight_range_violations.len()));
        }
        let perron = self.perron_failures().count();
        if perron > 0 {
            parts.push(format!("{perron} strongly connected component(s) without a leaking node"));
        }
        parts.join("; ")
    }
}

/// Power-iteration settings for the spectral radius estimate.
#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    pub max_iterations: usize,
    pub relative_tolerance: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            relative_tolerance: 1e-6,
        }
    }
}

/// Bracket on the spectral radius of a non-negative matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub lower: f64,
    pub upper: f64,
    pub estimate: f64,
    pub converged: bool,
}

/// Collatz-Wielandt bounds from power iteration on `I + B` for each irreducible block.
///
/// The shift makes each block primitive, so the bounds close in on the Perron root even
/// for periodic blocks. The radius of the whole matrix is the maximum over blocks.
pub fn spectral_radius_bounds(
    matrix: &SparseMatrix,
    partition: &SccPartition,
    options: SpectralOptions,
) -> SpectralEstimate {
    let mut total = SpectralEstimate {
        lower: 0.0,
        upper: 0.0,
        estimate: 0.0,
        converged: true,
    };
    let mut scratch = vec![usize::MAX; matrix.dim()];
    for scc in partition.nontrivial() {
        let members: Vec<usize> = partition.members(scc).iter().map(|m| m.index()).collect();
        let block = if members.len() == 1 {
            let w = matrix.get(members[0], members[0]);
            SpectralEstimate {
                lower: w,
                upper: w,
                estimate: w,
                converged: true,
            }
        } else {
            let sub = matrix.principal_submatrix(&members, &mut scratch);
            block_bounds(&sub, options)
        };
        total.lower = total.lower.max(block.lower);
        total.upper = total.upper.max(block.upper);
        total.estimate = total.estimate.max(block.estimate);
        total.converged &= block.converged;
    }
    total
}

fn block_bounds(block: &SparseMatrix, options: SpectralOptions) -> SpectralEstimate {
    let m = block.dim();
    let mut x = vec![1.0; m];
    let mut est = SpectralEstimate {
        lower: 0.0,
        upper: f64::INFINITY,
        estimate: 0.0,
        converged: false,
    };
    for _ in 0..options.max_iterations {
        let bx = block.mul_vec(&x);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut scale = 0.0f64;
        let y: Vec<f64> = x
            .iter()
            .zip(&bx)
            .map(|(&xi, &bi)| {
                let yi = xi + bi;
                let r = yi / xi;
                lo = lo.min(r);
                hi = hi.max(r);
                scale = scale.max(yi);
                yi
            })
            .collect();
        est.lower = est.lower.max(lo - 1.0);
        est.upper = est.upper.min(hi - 1.0);
        est.estimate = 0.5 * (est.lower + est.upper);
        if est.upper - est.lower <= options.relative_tolerance * est.upper.abs().max(f64::MIN_POSITIVE) {
            est.converged = true;
            break;
        }
        x = y.into_iter().map(|v| v / scale).collect();
    }
    est
}

pub fn validate(graph: &WeightedDigraph) -> ValidationReport {
    validate_with(graph, &scc_of_matrix(graph.matrix()), SpectralOptions::default())
}

pub fn validate_with(
    graph: &WeightedDigraph,
    partition: &SccPartition,
    options: SpectralOptions,
) -> ValidationReport {
    let m = graph.matrix();
    let column_sum_violations = m
        .column_sums()
        .into_iter()
        .enumerate()
        .filter(|&(_, s)| s > 1.0 + EPS_STOCHASTIC)
        .map(|(j, s)| (NodeId::new(j), s - 1.0))
        .collect();

    let perron_condition = partition
        .ids()
        .map(|scc| {
            let witness = partition.members(scc).iter().copied().find(|&j| {
                let (rows, vals) = m.col(j.index());
                let inner: f64 = rows
                    .iter()
                    .zip(vals)
                    .filter(|(&i, _)| partition.component_of(NodeId::new(i)) == scc)
                    .map(|(_, &w)| w)
                    .sum();
                inner < 1.0 - EPS_STOCHASTIC
            });
            PerronCheck {
                scc,
                satisfied: witness.is_some(),
                witness,
            }
        })
        .collect();

    let spectral = spectral_radius_bounds(m, partition, options);

    ValidationReport {
        column_sum_violations,
        weight_range_violations: graph.weight_offenders(),
        self_loops: graph.self_loops(),
        perron_condition,
        spectral_radius_estimate: spectral.estimate,
        spectral_radius_converged: spectral.converged,
    }
}
