//! Small built-in networks.

use crate::graph::{load_edge_list, LoadOptions, NodeValues, WeightedDigraph};

const SIX_NODE_EDGES: &str = include_str!("../data/six_node_edges.csv");
const SIX_NODE_VALUES: &str = include_str!("../data/six_node_values.csv");

/// Six-node bow-tie with unit values: node 1 in IN, nodes 2 to 5 forming the core,
/// node 6 in OUT.
pub fn six_node_bowtie() -> (WeightedDigraph, NodeValues) {
    load_edge_list(
        SIX_NODE_EDGES.as_bytes(),
        Some(SIX_NODE_VALUES.as_bytes()),
        LoadOptions::default(),
    )
    .expect("bundled dataset is valid")
}

/// Raw CSV text of the six-node network as `(edges, values)`.
pub fn six_node_csv() -> (&'static str, &'static str) {
    (SIX_NODE_EDGES, SIX_NODE_VALUES)
}
