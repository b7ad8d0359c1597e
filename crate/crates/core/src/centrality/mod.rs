//! Value-weighted centralities built on the resolvent `V = (I - W)^-1`.
//!
//! * access `chi = V W v`, the total (direct and indirect) portfolio value;
//! * corrected `chi_hat = D chi`, with `D = diag(V)^-1` damping value that cycles back;
//! * bow-tie `zeta = W D V v`, the same correction applied on the other side of `W`.
//!
//! Only nodes on a cycle have `V_kk > 1`, so `D` costs one block inverse per cyclic
//! component and is exactly 1 elsewhere.

mod baseline;
mod cache;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bowtie::{scc_of_matrix, SccPartition};
use crate::error::{Error, Result};
use crate::graph::{header_writer, NodeId, NodeValues, WeightedDigraph};
use crate::numeric::norm_inf;
use crate::solver::{ResolventSolver, SolverConfig};
use crate::validate::{validate_with, SpectralOptions, ValidationReport};

pub use baseline::{
    alpha_centrality, bonacich_centrality, eigenvector_centrality, AdjacencyOptions, EigenCentrality,
};
pub use cache::{CorrectionDiagonal, OperatorCache, ResolventColumn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Access,
    Corrected,
    Bowtie,
    Influence,
    Eigenvector,
    Alpha,
    Hubbell,
    BonacichAb,
    PortfolioDir,
    PortfolioTot,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Access => "access",
            Self::Corrected => "corrected",
            Self::Bowtie => "bowtie",
            Self::Influence => "influence",
            Self::Eigenvector => "eigenvector",
            Self::Alpha => "alpha",
            Self::Hubbell => "hubbell",
            Self::BonacichAb => "bonacich",
            Self::PortfolioDir => "portfolio_dir",
            Self::PortfolioTot => "portfolio_tot",
        }
    }

    pub const ALL: [Measure; 10] = [
        Self::Access,
        Self::Corrected,
        Self::Bowtie,
        Self::Influence,
        Self::Eigenvector,
        Self::Alpha,
        Self::Hubbell,
        Self::BonacichAb,
        Self::PortfolioDir,
        Self::PortfolioTot,
    ];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown measure `{s}`"))
    }
}

/// Scores of one measure over all nodes, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub values: Vec<f64>,
    /// `(alpha, beta)` for parameterized baselines.
    pub params: Option<(f64, f64)>,
}

impl CentralityVector {
    pub fn new(measure: Measure, values: Vec<f64>) -> Self {
        Self {
            measure,
            values,
            params: None,
        }
    }

    pub fn get(&self, id: NodeId) -> f64 {
        self.values[id.index()]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Writes `node,score` rows in id order.
    pub fn write_csv<W: Write>(&self, graph: &WeightedDigraph, writer: W, precision: Option<usize>) -> Result<()> {
        let mut out = header_writer(writer)?;
        out.write_record(["node", "score"])?;
        for (label, &score) in graph.labels().iter().zip(&self.values) {
            out.write_record([label.as_str(), &format_score(score, precision)])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub(crate) fn format_score(score: f64, precision: Option<usize>) -> String {
    let text = match precision {
        Some(p) => format!("{score:.p$}"),
        None => score.to_string(),
    };
    // Never print a negative zero, whether exact or rounded.
    match text.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => text,
    }
}

/// Centrality calculator for one graph and solver configuration.
///
/// Holds the SCC partition, lazily factored resolvent blocks and the [`OperatorCache`],
/// so computing several measures on the same graph reuses the expensive parts.
pub struct CentralityEngine<'g> {
    graph: &'g WeightedDigraph,
    solver: ResolventSolver<'g>,
    cache: OperatorCache,
}

impl<'g> CentralityEngine<'g> {
    /// Validates `graph` and refuses it if the resolvent is not guaranteed to exist.
    pub fn new(graph: &'g WeightedDigraph, config: SolverConfig) -> Result<Self> {
        Self::with_partition(graph, scc_of_matrix(graph.matrix()), config)
    }

    pub fn with_partition(graph: &'g WeightedDigraph, partition: SccPartition, config: SolverConfig) -> Result<Self> {
        let report = check(graph, &partition);
        if !report.passed() {
            return Err(Error::ValidationFailed(report.summary()));
        }
        Ok(Self::new_unchecked(graph, partition, config))
    }

    /// Skips validation; solves on an invalid graph may fail or return meaningless values.
    pub fn new_unchecked(graph: &'g WeightedDigraph, partition: SccPartition, config: SolverConfig) -> Self {
        Self {
            graph,
            solver: ResolventSolver::new(graph.matrix(), partition, config),
            cache: OperatorCache::default(),
        }
    }

    pub fn graph(&self) -> &WeightedDigraph {
        self.graph
    }

    pub fn partition(&self) -> &SccPartition {
        self.solver.partition()
    }

    pub fn config(&self) -> &SolverConfig {
        self.solver.config()
    }

    pub fn cache(&self) -> &OperatorCache {
        &self.cache
    }

    fn values<'v>(&self, v: &'v NodeValues) -> Result<&'v [f64]> {
        v.check_len(self.graph.node_count())?;
        Ok(v.as_slice())
    }

    /// `x = (I - W)^-1 rhs`.
    pub fn solve_resolvent(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solver.solve(rhs)
    }

    /// Access centrality `chi = (I - W)^-1 W v`.
    pub fn access(&self, v: &NodeValues) -> Result<CentralityVector> {
        let wv = self.graph.matrix().mul_vec(self.values(v)?);
        Ok(CentralityVector::new(Measure::Access, self.solver.solve(&wv)?))
    }

    /// Hubbell index `c = (I - W)^-1 c0`.
    pub fn hubbell(&self, c0: &[f64]) -> Result<CentralityVector> {
        Ok(CentralityVector::new(Measure::Hubbell, self.solver.solve(c0)?))
    }

    /// The correction diagonal, computed once per engine.
    pub fn correction_diagonal(&self) -> Result<&CorrectionDiagonal> {
        if let Some(c) = self.cache.correction() {
            return Ok(c);
        }
        let n = self.graph.node_count();
        let partition = self.solver.partition();
        let cyclic: Vec<_> = partition.nontrivial().collect();
        let per_block = cyclic
            .par_iter()
            .map(|&scc| self.solver.inverse_diagonal(scc))
            .collect::<Result<Vec<_>>>()?;

        let mut values = vec![1.0; n];
        let mut resolvent_diagonal = vec![None; n];
        for (scc, diag) in cyclic.iter().zip(per_block) {
            for (node, vkk) in partition.members(*scc).iter().zip(diag) {
                values[node.index()] = 1.0 / vkk;
                resolvent_diagonal[node.index()] = Some(vkk);
            }
        }
        Ok(self.cache.correction_or_insert(CorrectionDiagonal {
            values,
            resolvent_diagonal,
        }))
    }

    /// Column `k` of `V`, solved on demand and cached.
    pub fn resolvent_column(&self, k: NodeId) -> Result<ResolventColumn> {
        let n = self.graph.node_count();
        if k.index() >= n {
            return Err(Error::NodeOutOfRange { index: k.index(), n });
        }
        if let Some(col) = self.cache.column(k.index()) {
            return Ok(col);
        }
        let mut e = vec![0.0; n];
        e[k.index()] = 1.0;
        let x = self.solver.solve(&e)?;
        let sparse = x.into_iter().enumerate().filter(|&(_, v)| v != 0.0).collect();
        Ok(self.cache.insert_column(k.index(), sparse))
    }

    /// Corrected centrality `chi_hat_k = D_kk chi_k`.
    pub fn corrected(&self, v: &NodeValues) -> Result<CentralityVector> {
        let chi = self.access(v)?;
        let d = &self.correction_diagonal()?.values;
        let values = chi.values.iter().zip(d).map(|(c, dk)| dk * c).collect();
        Ok(CentralityVector::new(Measure::Corrected, values))
    }

    /// Bow-tie centrality `zeta = W (D ⊙ (I - W)^-1 v)`.
    pub fn bowtie(&self, v: &NodeValues) -> Result<CentralityVector> {
        let y = self.solver.solve(self.values(v)?)?;
        let d = &self.correction_diagonal()?.values;
        let scaled: Vec<f64> = y.iter().zip(d).map(|(yk, dk)| dk * yk).collect();
        Ok(CentralityVector::new(Measure::Bowtie, self.graph.matrix().mul_vec(&scaled)))
    }

    /// The same bow-tie centrality through the corrected operator: `zeta = W (chi_hat + D v)`.
    pub fn bowtie_via_corrected(&self, v: &NodeValues) -> Result<CentralityVector> {
        let chi_hat = self.corrected(v)?;
        let d = &self.correction_diagonal()?.values;
        let inner: Vec<f64> = chi_hat
            .values
            .iter()
            .zip(d)
            .zip(self.values(v)?)
            .map(|((ch, dk), vk)| ch + dk * vk)
            .collect();
        Ok(CentralityVector::new(Measure::Bowtie, self.graph.matrix().mul_vec(&inner)))
    }

    pub fn direct_portfolio(&self, v: &NodeValues) -> Result<CentralityVector> {
        direct_portfolio(self.graph, v)
    }
}

fn check(graph: &WeightedDigraph, partition: &SccPartition) -> ValidationReport {
    // The pass/fail verdict does not depend on the spectral estimate.
    let options = SpectralOptions {
        max_iterations: 0,
        ..SpectralOptions::default()
    };
    validate_with(graph, partition, options)
}

/// `x = (I - W)^-1 rhs` on a validated graph.
pub fn solve_resolvent(graph: &WeightedDigraph, rhs: &[f64], config: SolverConfig) -> Result<Vec<f64>> {
    CentralityEngine::new(graph, config)?.solve_resolvent(rhs)
}

pub fn access_centrality(graph: &WeightedDigraph, v: &NodeValues, config: SolverConfig) -> Result<CentralityVector> {
    CentralityEngine::new(graph, config)?.access(v)
}

pub fn correction_diagonal(graph: &WeightedDigraph, partition: &SccPartition, config: SolverConfig) -> Result<Vec<f64>> {
    let engine = CentralityEngine::with_partition(graph, partition.clone(), config)?;
    Ok(engine.correction_diagonal()?.values.clone())
}

pub fn corrected_centrality(
    graph: &WeightedDigraph,
    v: &NodeValues,
    partition: &SccPartition,
    config: SolverConfig,
) -> Result<CentralityVector> {
    CentralityEngine::with_partition(graph, partition.clone(), config)?.corrected(v)
}

pub fn bowtie_centrality(
    graph: &WeightedDigraph,
    v: &NodeValues,
    partition: &SccPartition,
    config: SolverConfig,
) -> Result<CentralityVector> {
    CentralityEngine::with_partition(graph, partition.clone(), config)?.bowtie(v)
}

pub fn hubbell_centrality(graph: &WeightedDigraph, c0: &[f64], config: SolverConfig) -> Result<CentralityVector> {
    CentralityEngine::new(graph, config)?.hubbell(c0)
}

/// Direct portfolio value `p_i = sum_j W_ij v_j`.
pub fn direct_portfolio(graph: &WeightedDigraph, v: &NodeValues) -> Result<CentralityVector> {
    v.check_len(graph.node_count())?;
    Ok(CentralityVector::new(
        Measure::PortfolioDir,
        graph.matrix().mul_vec(v.as_slice()),
    ))
}

/// Total portfolio value as the truncated series `sum_{k >= 1} W^k v`.
///
/// Stops once a term's max-norm falls below `1e-14 * ||v||_inf`; fails after
/// `config.series_max_terms` terms. Independent of the resolvent solver.
pub fn total_portfolio_series(graph: &WeightedDigraph, v: &NodeValues, config: SolverConfig) -> Result<CentralityVector> {
    v.check_len(graph.node_count())?;
    let m = graph.matrix();
    let scale = norm_inf(v.as_slice());
    let mut total = vec![0.0; graph.node_count()];
    if scale == 0.0 {
        return Ok(CentralityVector::new(Measure::PortfolioTot, total));
    }
    let threshold = 1e-14 * scale;
    let mut term = v.as_slice().to_vec();
    let mut last = f64::INFINITY;
    for _ in 0..config.series_max_terms {
        term = m.mul_vec(&term);
        for (t, x) in total.iter_mut().zip(&term) {
            *t += x;
        }
        last = norm_inf(&term);
        if last < threshold {
            return Ok(CentralityVector::new(Measure::PortfolioTot, total));
        }
    }
    Err(Error::SeriesNotConverged {
        terms: config.series_max_terms,
        last_term_norm: last,
    })
}
