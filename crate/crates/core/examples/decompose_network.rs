// Bow-tie decomposition of a generated network, compared with the planted classes.
//
//     cargo run --example decompose_network

use bowtie_centrality::bowtie::component_size_report;
use bowtie_centrality::{bowtie_decompose, generate, strongly_connected_components, BowTieSpec, CoreRule};

fn main() {
    let spec = BowTieSpec {
        seed: 42,
        ..BowTieSpec::with_sizes(300, 80, 500, 40)
    };
    let net = generate(&spec).unwrap();
    let partition = strongly_connected_components(&net.graph);
    let d = bowtie_decompose(&net.graph, &partition, CoreRule::LargestScc, false).unwrap();

    println!("{} nodes, {} edges, {} strongly connected components", net.graph.node_count(), net.graph.edge_count(), partition.len());
    for (class, count) in component_size_report(&d) {
        println!("{class:>6} {count:>6}");
    }
    let agree = d.classes.iter().zip(&net.planted).filter(|(a, b)| a == b).count();
    println!("planted classes recovered for {agree} of {} nodes", net.planted.len());
}
