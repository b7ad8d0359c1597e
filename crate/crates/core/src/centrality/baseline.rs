//! Classical eigenvector-family baselines on the binary or weighted adjacency.

use crate::bowtie::scc_of_matrix;
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::numeric::norm_1;
use crate::solver::{ResolventSolver, SolverConfig};
use crate::sparse::SparseMatrix;
use crate::validate::{spectral_radius_bounds, SpectralOptions};

use super::{CentralityVector, Measure};

/// Which matrix the baselines operate on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdjacencyOptions {
    /// Use `W` instead of the 0/1 adjacency.
    pub weighted: bool,
    /// Use the transpose (scores flow along in-edges).
    pub transpose: bool,
    /// Symmetrize: every edge counts in both directions.
    pub undirected: bool,
}

impl AdjacencyOptions {
    pub fn matrix(&self, graph: &WeightedDigraph) -> SparseMatrix {
        let base = graph.matrix();
        let mut m = if self.weighted {
            base.clone()
        } else {
            base.map_values(|_| 1.0)
        };
        if self.undirected {
            let triplets = m.triplets().flat_map(|(i, j, w)| [(i, j, w), (j, i, w)]).collect();
            m = SparseMatrix::from_triplets(m.dim(), triplets);
            if !self.weighted {
                m = m.map_values(|_| 1.0);
            }
        }
        if self.transpose {
            m = m.transpose();
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCentrality {
    pub centrality: CentralityVector,
    /// Dominant eigenvalue of the adjacency.
    pub eigenvalue: f64,
    pub iterations: usize,
}

const EIGEN_TOLERANCE: f64 = 1e-8;

/// Dominant eigenvector of `A` (`lambda c = A c`), unit 1-norm, by power iteration on `A + I`.
///
/// The shift leaves eigenvectors unchanged and removes the oscillation of periodic graphs.
pub fn eigenvector_centrality(
    graph: &WeightedDigraph,
    options: AdjacencyOptions,
    config: SolverConfig,
) -> Result<EigenCentrality> {
    let a = options.matrix(graph);
    let n = a.dim();
    if n == 0 || a.nnz() == 0 {
        return Err(Error::ZeroMatrix);
    }
    if scc_of_matrix(&a).nontrivial().next().is_none() {
        return Err(Error::Nilpotent);
    }
    let cap = config.max_iterations.unwrap_or(100_000.max(10 * n));
    let mut x = vec![1.0 / n as f64; n];
    for iteration in 1..=cap {
        let ax = a.mul_vec(&x);
        let mut y: Vec<f64> = x.iter().zip(&ax).map(|(xi, ai)| xi + ai).collect();
        let norm = norm_1(&y);
        y.iter_mut().for_each(|e| *e /= norm);
        let delta: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        if delta < EIGEN_TOLERANCE {
            let ax = a.mul_vec(&x);
            let eigenvalue = norm_1(&ax) / norm_1(&x);
            return Ok(EigenCentrality {
                centrality: CentralityVector::new(Measure::Eigenvector, x),
                eigenvalue,
                iterations: iteration,
            });
        }
    }
    Err(Error::EigenNotConverged { iterations: cap })
}

fn check_spectral(scaled: &SparseMatrix) -> Result<crate::bowtie::SccPartition> {
    let partition = scc_of_matrix(scaled);
    let est = spectral_radius_bounds(scaled, &partition, SpectralOptions::default());
    if est.upper < 1.0 || (!est.converged && est.estimate < 1.0) {
        Ok(partition)
    } else {
        Err(Error::SpectralCondition { estimate: est.estimate })
    }
}

/// Alpha centrality `c = (I - alpha A)^-1 e`, refused unless `alpha * lambda(A) < 1`.
pub fn alpha_centrality(
    graph: &WeightedDigraph,
    alpha: f64,
    e: &[f64],
    options: AdjacencyOptions,
    config: SolverConfig,
) -> Result<CentralityVector> {
    let n = graph.node_count();
    if e.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: e.len(),
        });
    }
    let scaled = options.matrix(graph).map_values(|w| alpha * w);
    let partition = check_spectral(&scaled)?;
    let solver = ResolventSolver::new(&scaled, partition, config);
    Ok(CentralityVector {
        measure: Measure::Alpha,
        values: solver.solve(e)?,
        params: Some((alpha, 0.0)),
    })
}

/// Bonacich power centrality `c = alpha (I - beta A)^-1 A e`; `e` defaults to ones.
pub fn bonacich_centrality(
    graph: &WeightedDigraph,
    alpha: f64,
    beta: f64,
    e: Option<&[f64]>,
    options: AdjacencyOptions,
    config: SolverConfig,
) -> Result<CentralityVector> {
    let n = graph.node_count();
    let ones = vec![1.0; n];
    let e = e.unwrap_or(&ones);
    if e.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: e.len(),
        });
    }
    let a = options.matrix(graph);
    let ae = a.mul_vec(e);
    let scaled = a.map_values(|w| beta * w);
    let partition = check_spectral(&scaled)?;
    let solver = ResolventSolver::new(&scaled, partition, config);
    let values = solver.solve(&ae)?.into_iter().map(|x| alpha * x).collect();
    Ok(CentralityVector {
        measure: Measure::BonacichAb,
        values,
        params: Some((alpha, beta)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::access_centrality;
    use crate::graph::NodeValues;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedDigraph {
        WeightedDigraph::with_index_labels(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn two_cycle_eigenvector_is_uniform() {
        let g = graph(2, &[(0, 1, 0.3), (1, 0, 0.9)]);
        let r = eigenvector_centrality(&g, AdjacencyOptions::default(), SolverConfig::default()).unwrap();
        assert_eq!(r.centrality.values, vec![0.5, 0.5]);
        assert!((r.eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_hub_is_maximal_when_undirected() {
        let k = 5;
        let edges: Vec<_> = (1..=k).map(|i| (i, 0, 0.2)).collect();
        let g = graph(k + 1, &edges);
        let opts = AdjacencyOptions {
            undirected: true,
            ..AdjacencyOptions::default()
        };
        let r = eigenvector_centrality(&g, opts, SolverConfig::default()).unwrap();
        let hub = r.centrality.values[0];
        assert!(r.centrality.values[1..].iter().all(|&leaf| leaf < hub));
        assert!((r.eigenvalue - (k as f64).sqrt()).abs() < 1e-6);
        // Directed, the star is acyclic.
        assert!(matches!(
            eigenvector_centrality(&g, AdjacencyOptions::default(), SolverConfig::default()),
            Err(Error::Nilpotent)
        ));
    }

    #[test]
    fn empty_adjacency_is_rejected() {
        let g = graph(2, &[]);
        assert!(matches!(
            eigenvector_centrality(&g, AdjacencyOptions::default(), SolverConfig::default()),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn alpha_zero_returns_exogenous_vector() {
        let g = graph(2, &[(0, 1, 0.5), (1, 0, 0.5)]);
        let c = alpha_centrality(&g, 0.0, &[3.0, 4.0], AdjacencyOptions::default(), SolverConfig::default()).unwrap();
        assert_eq!(c.values, vec![3.0, 4.0]);
    }

    #[test]
    fn alpha_chain() {
        let g = graph(2, &[(0, 1, 0.7)]);
        let c = alpha_centrality(&g, 0.5, &[1.0, 1.0], AdjacencyOptions::default(), SolverConfig::default()).unwrap();
        assert_eq!(c.values, vec![1.5, 1.0]);
    }

    #[test]
    fn alpha_spectral_condition_is_enforced() {
        // Binary 2-cycle has lambda = 1.
        let g = graph(2, &[(0, 1, 0.5), (1, 0, 0.5)]);
        let err = alpha_centrality(&g, 1.2, &[1.0, 1.0], AdjacencyOptions::default(), SolverConfig::default());
        assert!(matches!(err, Err(Error::SpectralCondition { .. })));
        let ok = alpha_centrality(&g, 0.5, &[1.0, 1.0], AdjacencyOptions::default(), SolverConfig::default()).unwrap();
        assert!((ok.values[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bonacich_beta_zero_is_out_degree() {
        let g = graph(3, &[(0, 1, 0.5), (0, 2, 0.1), (1, 2, 0.2)]);
        let c = bonacich_centrality(&g, 1.0, 0.0, None, AdjacencyOptions::default(), SolverConfig::default()).unwrap();
        assert_eq!(c.values, vec![2.0, 1.0, 0.0]);
        assert_eq!(c.params, Some((1.0, 0.0)));
    }

    #[test]
    fn bonacich_unit_parameters_on_weights_is_access() {
        let g = graph(3, &[(0, 1, 0.5), (1, 2, 0.4), (2, 1, 0.3)]);
        let v = NodeValues::new(vec![1.0, 2.0, 3.0]).unwrap();
        let opts = AdjacencyOptions {
            weighted: true,
            ..AdjacencyOptions::default()
        };
        let b = bonacich_centrality(&g, 1.0, 1.0, Some(v.as_slice()), opts, SolverConfig::default()).unwrap();
        let chi = access_centrality(&g, &v, SolverConfig::default()).unwrap();
        for (x, y) in b.values.iter().zip(&chi.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn transpose_flag_reverses_flow() {
        let g = graph(2, &[(0, 1, 0.7)]);
        let opts = AdjacencyOptions {
            transpose: true,
            ..AdjacencyOptions::default()
        };
        let c = bonacich_centrality(&g, 1.0, 0.0, None, opts, SolverConfig::default()).unwrap();
        assert_eq!(c.values, vec![0.0, 1.0]);
    }
}
