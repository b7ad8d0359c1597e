//! Influence index: value reachable along trails, i.e. directed paths that never
//! revisit a node.
//!
//! For a start node `i`, every trail `i -> j1 -> ... -> jm` contributes
//! `W[i][j1] * ... * W[j(m-1)][jm] * v[jm]`, for every length `m >= 1`. Edges that would
//! close a cycle back onto the current trail are never traversed.
//!
//! A trail that leaves a strongly connected component can never come back to it, so the
//! trails continuing from a node `w` in a later component do not depend on how `w` was
//! reached. Entering `w` therefore contributes `acc * W[u][w] * (v[w] + xi[w])`, and the
//! exhaustive search is confined to the interior of each component, processed sink-first.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bowtie::{scc_of_matrix, SccPartition};
use crate::centrality::{CentralityVector, Measure};
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeValues, WeightedDigraph};

#[derive(Debug, Clone, Copy, Default)]
pub struct InfluenceOptions {
    /// Abort with [`Error::InfluenceTimeout`] once this much wall time has passed.
    pub time_budget: Option<Duration>,
}

/// Depth-first trail state: the current path, a membership mask and the weight products.
#[derive(Debug)]
pub(crate) struct TrailState {
    /// `(node, next out-edge position, product of weights from the start to node)`.
    path: Vec<(usize, usize, f64)>,
    on_path: Vec<bool>,
}

impl TrailState {
    fn new(n: usize) -> Self {
        Self {
            path: Vec::new(),
            on_path: vec![false; n],
        }
    }

    fn push(&mut self, node: usize, weight: f64) {
        debug_assert!(!self.on_path[node], "node {node} revisited");
        self.on_path[node] = true;
        self.path.push((node, 0, weight));
    }

    fn pop(&mut self) {
        if let Some((node, _, _)) = self.path.pop() {
            self.on_path[node] = false;
        }
    }

    #[cfg(test)]
    fn accumulated_weight(&self) -> f64 {
        self.path.last().map_or(1.0, |f| f.2)
    }

    #[cfg(test)]
    fn current_path(&self) -> impl Iterator<Item = usize> + '_ {
        self.path.iter().map(|f| f.0)
    }
}

const CLOCK_CHECK_INTERVAL: u64 = 1 << 14;

/// Influence index of every node with default options.
pub fn influence_index(graph: &WeightedDigraph, v: &NodeValues) -> Result<CentralityVector> {
    influence_index_with(graph, v, &scc_of_matrix(graph.matrix()), InfluenceOptions::default())
}

pub fn influence_index_with(
    graph: &WeightedDigraph,
    v: &NodeValues,
    partition: &SccPartition,
    options: InfluenceOptions,
) -> Result<CentralityVector> {
    let n = graph.node_count();
    v.check_len(n)?;
    let m = graph.matrix();
    let v = v.as_slice();
    let deadline = options.time_budget.map(|b| Instant::now() + b);
    let mut xi = vec![0.0; n];

    for &scc in partition.sink_first() {
        let members = partition.members(scc);
        if members.len() == 1 {
            let k = members[0].index();
            let (cols, vals) = m.row(k);
            xi[k] = cols
                .iter()
                .zip(vals)
                .filter(|(&w, _)| w != k)
                .fold(0.0, |acc, (&w, &wt)| acc + wt * (v[w] + xi[w]));
            continue;
        }

        let scores = members
            .par_iter()
            .map(|&start| trail_sum_within(graph, partition, v, &xi, start, deadline))
            .collect::<Result<Vec<f64>>>()?;
        for (node, s) in members.iter().zip(scores) {
            xi[node.index()] = s;
        }
    }
    Ok(CentralityVector::new(Measure::Influence, xi))
}

/// Exhaustive trail search from `start` inside its component; exits use the memo `xi`.
fn trail_sum_within(
    graph: &WeightedDigraph,
    partition: &SccPartition,
    v: &[f64],
    xi: &[f64],
    start: NodeId,
    deadline: Option<Instant>,
) -> Result<f64> {
    let m = graph.matrix();
    let scc = partition.component_of(start);
    let mut state = TrailState::new(graph.node_count());
    let mut total = 0.0;
    let mut expansions: u64 = 0;
    state.push(start.index(), 1.0);

    while let Some(frame) = state.path.last_mut() {
        let (u, pos, acc) = *frame;
        let (cols, vals) = m.row(u);
        if pos == cols.len() {
            state.pop();
            continue;
        }
        frame.1 += 1;
        let (w, wt) = (cols[pos], vals[pos]);
        if partition.component_of(NodeId::new(w)) != scc {
            total += acc * wt * (v[w] + xi[w]);
        } else if !state.on_path[w] {
            let a = acc * wt;
            total += a * v[w];
            state.push(w, a);
            debug_assert!(state.path.len() <= graph.node_count());
            expansions += 1;
            if expansions.is_multiple_of(CLOCK_CHECK_INTERVAL) {
                if let Some(d) = deadline {
                    if Instant::now() >= d {
                        return Err(Error::InfluenceTimeout);
                    }
                }
            }
        }
    }
    Ok(total)
}

/// A node-simple path and the product of its edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub nodes: Vec<NodeId>,
    pub weight: f64,
}

impl WeightedPath {
    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("paths are non-empty")
    }
}

/// Enumeration refuses to produce more paths than this.
pub const PATH_LIMIT: usize = 10_000_000;

/// Every node-simple path with at least one edge that starts at `start`, optionally
/// capped at `max_len` edges. Fails once more than [`PATH_LIMIT`] paths are found.
pub fn enumerate_simple_paths(
    graph: &WeightedDigraph,
    start: NodeId,
    max_len: Option<usize>,
) -> Result<Vec<WeightedPath>> {
    let n = graph.node_count();
    if start.index() >= n {
        return Err(Error::NodeOutOfRange { index: start.index(), n });
    }
    let max_len = max_len.unwrap_or(n);
    let mut out = Vec::new();
    let mut path = vec![start];
    let mut visited = vec![false; n];
    visited[start.index()] = true;
    extend_paths(graph, &mut path, 1.0, &mut visited, max_len, &mut out)?;
    Ok(out)
}

fn extend_paths(
    graph: &WeightedDigraph,
    path: &mut Vec<NodeId>,
    weight: f64,
    visited: &mut [bool],
    max_len: usize,
    out: &mut Vec<WeightedPath>,
) -> Result<()> {
    if path.len() > max_len {
        return Ok(());
    }
    let last = *path.last().expect("non-empty");
    for (next, w) in graph.neighbors_out(last)? {
        if visited[next.index()] {
            continue;
        }
        if out.len() >= PATH_LIMIT {
            return Err(Error::PathLimit { limit: PATH_LIMIT });
        }
        path.push(next);
        visited[next.index()] = true;
        out.push(WeightedPath {
            nodes: path.clone(),
            weight: weight * w,
        });
        extend_paths(graph, path, weight * w, visited, max_len, out)?;
        visited[next.index()] = false;
        path.pop();
    }
    Ok(())
}
