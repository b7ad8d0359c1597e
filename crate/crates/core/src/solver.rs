//! Solves `(I - W) x = b` for non-negative `W` with spectral radius below one.
//!
//! The system is block upper triangular once nodes are grouped by strongly connected
//! component: a component only depends on the components it reaches. Components are
//! therefore solved sink-first. Acyclic nodes reduce to a scalar update; each cyclic
//! component is a small square system solved either by dense LU (faer) or BiCGSTAB.

use std::sync::OnceLock;

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bowtie::{SccId, SccPartition};
use crate::error::{Error, Result};
use crate::numeric::{dot, norm_2};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    /// Dense LU for components up to `direct_threshold` nodes, BiCGSTAB above.
    #[default]
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: SolverMethod,
    /// Relative residual `||(I - W) x - b|| / ||b||` every solve must reach.
    pub tolerance: f64,
    /// Iteration cap for BiCGSTAB; `None` means `10 * n`.
    pub max_iterations: Option<usize>,
    /// Term cap for the Neumann-series oracle.
    pub series_max_terms: usize,
    /// Largest component solved by dense factorization under [`SolverMethod::Auto`].
    pub direct_threshold: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: SolverMethod::Auto,
            tolerance: 1e-10,
            max_iterations: None,
            series_max_terms: 10_000,
            direct_threshold: 10_000,
        }
    }
}

impl SolverConfig {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        assert!(tolerance > 0.0, "tolerance must be positive");
        self.tolerance = tolerance;
        self
    }

    pub fn with_method(mut self, method: SolverMethod) -> Self {
        self.method = method;
        self
    }

    pub(crate) fn iteration_cap(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n.max(1))
    }
}

enum Factor {
    Dense(PartialPivLu<f64>),
    Iterative,
}

struct Block {
    /// Global node indices, ascending.
    members: Vec<usize>,
    /// `W` restricted to the component.
    inner: SparseMatrix,
    factor: Factor,
}

/// Resolvent solver bound to one matrix and its SCC partition.
///
/// Block factorizations are computed on first use and shared by later solves.
pub struct ResolventSolver<'a> {
    matrix: &'a SparseMatrix,
    partition: SccPartition,
    config: SolverConfig,
    local_index: Vec<usize>,
    blocks: Vec<OnceLock<Block>>,
}

const REFINEMENT_STEPS: usize = 3;

impl<'a> ResolventSolver<'a> {
    pub fn new(matrix: &'a SparseMatrix, partition: SccPartition, config: SolverConfig) -> Self {
        assert!(config.tolerance > 0.0, "tolerance must be positive");
        let mut local_index = vec![0usize; matrix.dim()];
        for scc in partition.ids() {
            for (pos, m) in partition.members(scc).iter().enumerate() {
                local_index[m.index()] = pos;
            }
        }
        let blocks = (0..partition.len()).map(|_| OnceLock::new()).collect();
        Self {
            matrix,
            partition,
            config,
            local_index,
            blocks,
        }
    }

    pub fn partition(&self) -> &SccPartition {
        &self.partition
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn matrix(&self) -> &SparseMatrix {
        self.matrix
    }

    fn use_dense(&self, size: usize) -> bool {
        match self.config.method {
            SolverMethod::Direct => true,
            SolverMethod::Iterative => false,
            SolverMethod::Auto => size <= self.config.direct_threshold,
        }
    }

    fn block(&self, scc: SccId) -> &Block {
        self.blocks[scc.index()].get_or_init(|| {
            let members: Vec<usize> = self.partition.members(scc).iter().map(|m| m.index()).collect();
            let triplets = members
                .iter()
                .enumerate()
                .flat_map(|(local, &g)| {
                    let (cols, vals) = self.matrix.row(g);
                    cols.iter()
                        .zip(vals)
                        .filter(|(&j, _)| self.partition.component_of(j.into()) == scc)
                        .map(move |(&j, &w)| (local, self.local_index[j], w))
                })
                .collect();
            let inner = SparseMatrix::from_triplets(members.len(), triplets);
            let factor = if self.use_dense(members.len()) {
                let m = members.len();
                let mut a = Mat::<f64>::identity(m, m);
                for (i, j, w) in inner.triplets() {
                    a[(i, j)] -= w;
                }
                Factor::Dense(a.partial_piv_lu())
            } else {
                Factor::Iterative
            };
            Block { members, inner, factor }
        })
    }

    fn solve_block(&self, block: &Block, rhs: &[f64]) -> Result<Vec<f64>> {
        match &block.factor {
            Factor::Dense(lu) => {
                let b = Mat::<f64>::from_fn(rhs.len(), 1, |i, _| rhs[i]);
                let x = lu.solve(&b);
                Ok((0..rhs.len()).map(|i| x[(i, 0)]).collect())
            }
            Factor::Iterative => bicgstab(
                &block.inner,
                rhs,
                0.1 * self.config.tolerance,
                self.config.iteration_cap(self.matrix.dim()),
            ),
        }
    }

    /// One sink-first sweep without residual control.
    fn sweep(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.matrix.dim()];
        for &scc in self.partition.sink_first() {
            let members = self.partition.members(scc);
            if members.len() == 1 {
                let k = members[0].index();
                let (cols, vals) = self.matrix.row(k);
                let mut acc = rhs[k];
                let mut diag = 0.0;
                for (&j, &w) in cols.iter().zip(vals) {
                    if j == k {
                        diag = w;
                    } else {
                        acc += w * x[j];
                    }
                }
                x[k] = acc / (1.0 - diag);
                continue;
            }
            let block = self.block(scc);
            let local_rhs: Vec<f64> = block
                .members
                .iter()
                .map(|&g| {
                    let (cols, vals) = self.matrix.row(g);
                    rhs[g]
                        + cols
                            .iter()
                            .zip(vals)
                            .filter(|(&j, _)| self.partition.component_of(j.into()) != scc)
                            .map(|(&j, &w)| w * x[j])
                            .sum::<f64>()
                })
                .collect();
            let y = self.solve_block(block, &local_rhs)?;
            for (&g, yi) in block.members.iter().zip(y) {
                x[g] = yi;
            }
        }
        Ok(x)
    }

    fn relative_residual(&self, x: &[f64], rhs: &[f64], rhs_norm: f64) -> (Vec<f64>, f64) {
        let applied = self.matrix.resolvent_apply(x);
        let r: Vec<f64> = rhs.iter().zip(applied).map(|(b, a)| b - a).collect();
        let norm = norm_2(&r) / rhs_norm;
        (r, norm)
    }

    /// Solves `(I - W) x = rhs` to the configured relative residual.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.matrix.dim();
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: rhs.len(),
            });
        }
        let rhs_norm = norm_2(rhs);
        if rhs_norm == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let mut x = self.sweep(rhs)?;
        let (mut r, mut res) = self.relative_residual(&x, rhs, rhs_norm);
        let mut steps = 0;
        while res > self.config.tolerance && res.is_finite() && steps < REFINEMENT_STEPS {
            let d = self.sweep(&r)?;
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += di;
            }
            (r, res) = self.relative_residual(&x, rhs, rhs_norm);
            steps += 1;
        }
        if !res.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular { residual: res });
        }
        if res > self.config.tolerance {
            return Err(Error::NotConverged {
                iterations: steps,
                residual: res,
            });
        }
        Ok(x)
    }

    /// Diagonal entries `V_kk` of `V = (I - W)^-1` for the members of a cyclic component,
    /// in member order. Only the component's own block contributes to `V_kk`.
    pub fn inverse_diagonal(&self, scc: SccId) -> Result<Vec<f64>> {
        let members = self.partition.members(scc);
        if members.len() == 1 {
            let k = members[0].index();
            return Ok(vec![1.0 / (1.0 - self.matrix.get(k, k))]);
        }
        let block = self.block(scc);
        let m = members.len();
        let diag = match &block.factor {
            Factor::Dense(lu) => {
                const BATCH: usize = 128;
                let starts: Vec<usize> = (0..m).step_by(BATCH).collect();
                let parts: Vec<Vec<f64>> = starts
                    .par_iter()
                    .map(|&start| {
                        let width = BATCH.min(m - start);
                        let e = Mat::<f64>::from_fn(m, width, |i, c| if i == start + c { 1.0 } else { 0.0 });
                        let x = lu.solve(&e);
                        (0..width).map(|c| x[(start + c, c)]).collect()
                    })
                    .collect();
                parts.concat()
            }
            Factor::Iterative => (0..m)
                .into_par_iter()
                .map(|k| {
                    let mut e = vec![0.0; m];
                    e[k] = 1.0;
                    let tol = 0.1 * self.config.tolerance;
                    let cap = self.config.iteration_cap(self.matrix.dim());
                    bicgstab(&block.inner, &e, tol, cap).map(|x| x[k])
                })
                .collect::<Result<Vec<f64>>>()?,
        };
        if let Some(bad) = diag.iter().find(|v| !(v.is_finite() && **v >= 1.0 - 1e-9)) {
            return Err(Error::Singular { residual: *bad });
        }
        Ok(diag)
    }
}

/// BiCGSTAB for `(I - A) x = b`, restarting on breakdown.
fn bicgstab(a: &SparseMatrix, b: &[f64], tolerance: f64, max_iterations: usize) -> Result<Vec<f64>> {
    let n = b.len();
    let apply = |x: &[f64]| a.resolvent_apply(x);
    let b_norm = norm_2(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(x);
    }
    let target = tolerance * b_norm;

    let mut r = b.to_vec();
    let mut r_hat = r.clone();
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;
        let rho_next = dot(&r_hat, &r);
        if rho_next.abs() < f64::MIN_POSITIVE || omega == 0.0 {
            // Breakdown: restart from the current residual.
            r_hat = r.clone();
            p.iter_mut().for_each(|e| *e = 0.0);
            v.iter_mut().for_each(|e| *e = 0.0);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            if norm_2(&r) <= target {
                break;
            }
            continue;
        }
        let beta = (rho_next / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        v = apply(&p);
        let denom = dot(&r_hat, &v);
        if denom == 0.0 {
            omega = 0.0;
            continue;
        }
        alpha = rho_next / denom;
        let s: Vec<f64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm_2(&s) <= target {
            for i in 0..n {
                x[i] += alpha * p[i];
            }
            r = s;
        } else {
            let t = apply(&s);
            let tt = dot(&t, &t);
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
            for i in 0..n {
                x[i] += alpha * p[i] + omega * s[i];
                r[i] = s[i] - omega * t[i];
            }
            rho = rho_next;
        }
        if norm_2(&r) <= target {
            // Guard against drift of the recursive residual.
            let applied = apply(&x);
            r = b.iter().zip(applied).map(|(bi, ai)| bi - ai).collect();
            if norm_2(&r) <= target {
                return Ok(x);
            }
            r_hat = r.clone();
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            p.iter_mut().for_each(|e| *e = 0.0);
            v.iter_mut().for_each(|e| *e = 0.0);
        }
    }
    let applied = apply(&x);
    let res: Vec<f64> = b.iter().zip(applied).map(|(bi, ai)| bi - ai).collect();
    let rel = norm_2(&res) / b_norm;
    if rel <= tolerance {
        Ok(x)
    } else {
        Err(Error::NotConverged {
            iterations,
            residual: rel,
        })
    }
}
