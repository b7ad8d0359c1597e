// Bow-tie centrality on a large generated network, timed.
//
//     cargo run --release --example synthetic_scale            # a tenth of the size
//     cargo run --release --example synthetic_scale -- --full  # 64,266 nodes

use std::time::Instant;

use bowtie_centrality::{generate, BowTieSpec, CentralityEngine, SolverConfig};

fn main() {
    let full = std::env::args().any(|a| a == "--full");
    let scale = if full { 1 } else { 10 };
    let spec = BowTieSpec {
        in_degree: 4.0,
        scc_degree: 20.0,
        out_degree: 9.0,
        seed: 64,
        ..BowTieSpec::with_sizes(13_374 / scale, 2_554 / scale, 48_338 / scale, 0)
    };

    let t = Instant::now();
    let net = generate(&spec).unwrap();
    println!("generated {} nodes, {} edges in {:.2?}", net.graph.node_count(), net.graph.edge_count(), t.elapsed());

    let t = Instant::now();
    let engine = CentralityEngine::new(&net.graph, SolverConfig::default()).unwrap();
    let zeta = engine.bowtie(&net.values).unwrap();
    println!("bow-tie centrality in {:.2?}", t.elapsed());

    let (best, score) = zeta
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!("highest score {score:.3} at node {}", net.graph.labels()[best]);
}
