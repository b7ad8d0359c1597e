//! Backbone reduction: keep IN and the core, plus OUT nodes whose value reaches a threshold.

use std::io::Write;

use serde::Serialize;

use crate::bowtie::{BowTieClass, BowTieDecomposition};
use crate::error::{Error, Result};
use crate::graph::{header_writer, NodeId, NodeValues, WeightedDigraph};
use crate::numeric::exact_sum;

#[derive(Debug, Clone)]
pub struct ReducedNetwork {
    pub graph: WeightedDigraph,
    pub values: NodeValues,
    /// Original id of every retained node, indexed by its new id.
    pub original: Vec<NodeId>,
    /// New id of every original node, `None` if dropped.
    pub renumbered: Vec<Option<NodeId>>,
}

impl ReducedNetwork {
    /// Writes `node,old_index,new_index` for the retained nodes.
    pub fn write_mapping<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = header_writer(writer)?;
        w.write_record(["node", "old_index", "new_index"])?;
        for (new, old) in self.original.iter().enumerate() {
            w.write_record([
                self.graph.label(NodeId::new(new)).to_owned(),
                old.index().to_string(),
                new.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Induced subgraph on `IN ∪ SCC ∪ {i in OUT : v_i >= out_threshold}`.
///
/// Labels, weights and values are carried over unchanged; TT and OTHER nodes are dropped.
pub fn reduce_network(
    graph: &WeightedDigraph,
    v: &NodeValues,
    decomposition: &BowTieDecomposition,
    out_threshold: f64,
) -> Result<ReducedNetwork> {
    let n = graph.node_count();
    v.check_len(n)?;
    if decomposition.classes.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: decomposition.classes.len(),
        });
    }
    let keep = |i: usize| match decomposition.classes[i] {
        BowTieClass::In | BowTieClass::Scc => true,
        BowTieClass::Out => v.as_slice()[i] >= out_threshold,
        BowTieClass::Tt | BowTieClass::Other => false,
    };
    let original: Vec<NodeId> = (0..n).filter(|&i| keep(i)).map(NodeId::new).collect();
    if original.is_empty() {
        return Err(Error::EmptyReduction);
    }
    let mut renumbered = vec![None; n];
    for (new, old) in original.iter().enumerate() {
        renumbered[old.index()] = Some(NodeId::new(new));
    }
    let edges = graph
        .matrix()
        .triplets()
        .filter_map(|(i, j, w)| Some((renumbered[i]?.index(), renumbered[j]?.index(), w)))
        .collect();
    let labels = original.iter().map(|&id| graph.label(id).to_owned()).collect();
    let values = NodeValues::new(original.iter().map(|&id| v.get(id)).collect())?;
    Ok(ReducedNetwork {
        graph: WeightedDigraph::from_edges_unchecked(labels, edges)?,
        values,
        original,
        renumbered,
    })
}

/// Share of total value retained by a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub total_value: f64,
    pub retained_value: f64,
    /// `retained / total`; `None` when the total is zero.
    pub fraction: Option<f64>,
}

pub fn coverage_report(full: &NodeValues, reduced: &NodeValues) -> CoverageReport {
    let total_value = exact_sum(full.as_slice());
    let retained_value = exact_sum(reduced.as_slice());
    CoverageReport {
        total_value,
        retained_value,
        fraction: (total_value > 0.0).then(|| retained_value / total_value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bowtie::{bowtie_decompose, strongly_connected_components, CoreRule};

    // 0 -> {1,2} core -> 3 -> 4 ; 5 is a tendril off IN.
    fn sample() -> (WeightedDigraph, NodeValues, BowTieDecomposition) {
        let g = WeightedDigraph::with_index_labels(
            6,
            vec![(0, 1, 0.5), (1, 2, 0.5), (2, 1, 0.4), (2, 3, 0.5), (3, 4, 0.5), (0, 5, 0.5)],
        )
        .unwrap();
        let v = NodeValues::new(vec![1.0, 2.0, 3.0, 10.0, 0.5, 7.0]).unwrap();
        let p = strongly_connected_components(&g);
        let d = bowtie_decompose(&g, &p, CoreRule::LargestScc, false).unwrap();
        (g, v, d)
    }

    #[test]
    fn zero_threshold_keeps_all_out() {
        let (g, v, d) = sample();
        let r = reduce_network(&g, &v, &d, 0.0).unwrap();
        assert_eq!(r.graph.labels(), ["0", "1", "2", "3", "4"]);
        assert_eq!(r.renumbered[5], None);
        assert_eq!(r.graph.edge_count(), 5);
    }

    #[test]
    fn infinite_threshold_keeps_in_and_core() {
        let (g, v, d) = sample();
        let r = reduce_network(&g, &v, &d, f64::INFINITY).unwrap();
        assert_eq!(r.graph.labels(), ["0", "1", "2"]);
        assert_eq!(r.values.as_slice(), [1.0, 2.0, 3.0]);
    }

    #[test]
    fn threshold_filters_out_nodes() {
        let (g, v, d) = sample();
        let r = reduce_network(&g, &v, &d, 5.0).unwrap();
        assert_eq!(r.graph.labels(), ["0", "1", "2", "3"]);
        assert_eq!(r.original[3], NodeId::new(3));
    }

    #[test]
    fn coverage() {
        let (g, v, d) = sample();
        let r = reduce_network(&g, &v, &d, 5.0).unwrap();
        let c = coverage_report(&v, &r.values);
        assert_eq!(c.retained_value, 16.0);
        assert_eq!(c.fraction, Some(16.0 / 23.5));
        assert_eq!(coverage_report(&v, &v).fraction, Some(1.0));
        assert_eq!(coverage_report(&v, &NodeValues::zeros(0)).fraction, Some(0.0));
        assert_eq!(coverage_report(&NodeValues::zeros(3), &NodeValues::zeros(1)).fraction, None);
    }
}
