//! Rankings and top-n overlap between centrality measures.

use std::collections::HashSet;
use std::hash::Hash;
use std::io::Write;

use crate::centrality::{format_score, CentralityVector, Measure};
use crate::error::{Error, Result};
use crate::graph::{header_writer, NodeId, WeightedDigraph};

/// Nodes ordered by descending score, ties broken by ascending id.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub measure: Measure,
    pub order: Vec<NodeId>,
    /// Scores aligned with `order`.
    pub scores: Vec<f64>,
    /// Node count of the graph the scores belong to.
    pub universe: usize,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn top(&self, k: usize) -> &[NodeId] {
        &self.order[..k.min(self.order.len())]
    }
}

/// Ranks every node, or only those with a strictly positive score.
pub fn rank_nodes(c: &CentralityVector, positive_only: bool) -> Result<Ranking> {
    if let Some(i) = c.values.iter().position(|x| x.is_nan()) {
        return Err(Error::NanScore(i));
    }
    let mut order: Vec<usize> = (0..c.len()).filter(|&i| !positive_only || c.values[i] > 0.0).collect();
    order.sort_by(|&a, &b| c.values[b].total_cmp(&c.values[a]).then(a.cmp(&b)));
    Ok(Ranking {
        measure: c.measure,
        scores: order.iter().map(|&i| c.values[i]).collect(),
        order: order.into_iter().map(NodeId::new).collect(),
        universe: c.len(),
    })
}

/// `|A ∩ B| / |A ∪ B|`, defined as 1 for two empty sets.
pub fn jaccard<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Jaccard index of the top-`n` sets for `n = 1..=max(len)`.
///
/// A ranking shorter than `n` contributes all of its nodes.
pub fn truncated_jaccard_curve(a: &Ranking, b: &Ranking) -> Result<Vec<f64>> {
    if a.universe != b.universe {
        return Err(Error::UniverseMismatch(a.universe, b.universe));
    }
    let mut in_a = vec![false; a.universe];
    let mut in_b = vec![false; b.universe];
    let (mut size_a, mut size_b, mut common) = (0usize, 0usize, 0usize);
    let steps = a.len().max(b.len());
    let mut curve = Vec::with_capacity(steps);
    for n in 0..steps {
        if let Some(x) = a.order.get(n) {
            in_a[x.index()] = true;
            size_a += 1;
            common += usize::from(in_b[x.index()]);
        }
        if let Some(y) = b.order.get(n) {
            in_b[y.index()] = true;
            size_b += 1;
            common += usize::from(in_a[y.index()]);
        }
        curve.push(common as f64 / (size_a + size_b - common) as f64);
    }
    Ok(curve)
}

/// Writes `n,pair,jaccard` rows for every pair of rankings, `pair` being `a~b`.
pub fn write_jaccard_curves<W: Write>(rankings: &[Ranking], writer: W) -> Result<()> {
    let mut w = header_writer(writer)?;
    w.write_record(["n", "pair", "jaccard"])?;
    for (i, a) in rankings.iter().enumerate() {
        for b in &rankings[i + 1..] {
            let pair = format!("{}~{}", a.measure, b.measure);
            for (n, j) in truncated_jaccard_curve(a, b)?.into_iter().enumerate() {
                w.write_record([(n + 1).to_string(), pair.clone(), format_score(j, None)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per `(measure, rank)`: the node holding that rank and its score.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedRow {
    pub measure: Measure,
    pub rank: usize,
    pub node: NodeId,
    pub score: f64,
}

/// Top `k` of every ranking, or all ranked nodes when `k` is `None`.
pub fn ranked_value_table(rankings: &[Ranking], k: Option<usize>) -> Vec<RankedRow> {
    rankings
        .iter()
        .flat_map(|r| {
            let k = k.unwrap_or(r.len());
            r.top(k).iter().zip(&r.scores).enumerate().map(|(i, (&node, &score))| RankedRow {
                measure: r.measure,
                rank: i + 1,
                node,
                score,
            })
        })
        .collect()
}

/// Writes a ranked table as `measure,rank,node,score`.
pub fn write_ranked_table<W: Write>(
    graph: &WeightedDigraph,
    rows: &[RankedRow],
    writer: W,
    precision: Option<usize>,
) -> Result<()> {
    let mut w = header_writer(writer)?;
    w.write_record(["measure", "rank", "node", "score"])?;
    for r in rows {
        w.write_record([
            r.measure.as_str().to_owned(),
            r.rank.to_string(),
            graph.label(r.node).to_owned(),
            format_score(r.score, precision),
        ])?;
    }
    w.flush()?;
    Ok(())
}
