//! Bow-tie decomposition and value-weighted centrality measures for directed weighted
//! networks such as ownership or supply graphs.
//!
//! An edge `i -> j` with weight `W[i][j]` means node `i` holds a share `W[i][j]` of node
//! `j`. Column sums must stay within 1, and every strongly connected component must leak
//! some weight, so that `I - W` is invertible.
//!
//! ```
//! use bowtie_centrality::{datasets, CentralityEngine, SolverConfig};
//!
//! let (graph, values) = datasets::six_node_bowtie();
//! let engine = CentralityEngine::new(&graph, SolverConfig::default()).unwrap();
//! let chi = engine.access(&values).unwrap();
//! assert!((chi.values[1] - 49.0).abs() < 1e-9);
//! ```

pub mod bowtie;
pub mod centrality;
pub mod cli;
pub mod compare;
pub mod datasets;
pub mod error;
pub mod graph;
pub mod influence;
pub mod numeric;
pub mod reduce;
pub mod solver;
pub mod sparse;
pub mod synth;
pub mod validate;

pub use bowtie::{
    bowtie_decompose, component_size_report, strongly_connected_components, BowTieClass, BowTieDecomposition,
    ClassSizes, CoreRule, SccId, SccPartition,
};
pub use centrality::{
    access_centrality, alpha_centrality, bonacich_centrality, bowtie_centrality, corrected_centrality,
    correction_diagonal, direct_portfolio, eigenvector_centrality, hubbell_centrality, solve_resolvent,
    total_portfolio_series, AdjacencyOptions, CentralityEngine, CentralityVector, Measure,
};
pub use compare::{jaccard, rank_nodes, truncated_jaccard_curve, Ranking};
pub use error::{Error, Result};
pub use graph::{load_edge_list, load_edge_list_files, LoadOptions, NodeId, NodeValues, WeightedDigraph};
pub use influence::{enumerate_simple_paths, influence_index, influence_index_with, InfluenceOptions, WeightedPath};
pub use reduce::{coverage_report, reduce_network, CoverageReport, ReducedNetwork};
pub use solver::{ResolventSolver, SolverConfig, SolverMethod};
pub use synth::{generate, BowTieSpec, SyntheticNetwork};
pub use validate::{validate, ValidationReport};
