// Keep IN, the core and high-value OUT nodes, and see how much value survives.
//
//     cargo run --example reduce_backbone

use bowtie_centrality::{
    bowtie_decompose, coverage_report, generate, reduce_network, strongly_connected_components, BowTieSpec, CoreRule,
};

fn main() {
    let spec = BowTieSpec {
        seed: 11,
        ..BowTieSpec::with_sizes(200, 50, 800, 60)
    };
    let net = generate(&spec).unwrap();
    let partition = strongly_connected_components(&net.graph);
    let d = bowtie_decompose(&net.graph, &partition, CoreRule::LargestScc, false).unwrap();

    for threshold in [0.0, 2.0, 5.0, f64::INFINITY] {
        let reduced = reduce_network(&net.graph, &net.values, &d, threshold).unwrap();
        let cov = coverage_report(&net.values, &reduced.values);
        println!(
            "threshold {threshold:>4}: {:>5} nodes, {:>5} edges, {:.1}% of value",
            reduced.graph.node_count(),
            reduced.graph.edge_count(),
            100.0 * cov.fraction.unwrap_or(0.0)
        );
    }
}
