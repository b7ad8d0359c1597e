// Every value-weighted measure on the bundled six-node bow-tie.
//
//     cargo run --example six_node_walkthrough

use bowtie_centrality::{datasets, influence_index, CentralityEngine, SolverConfig};

fn main() {
    let (graph, values) = datasets::six_node_bowtie();
    let engine = CentralityEngine::new(&graph, SolverConfig::default()).expect("valid network");

    let chi = engine.access(&values).unwrap();
    let chi_hat = engine.corrected(&values).unwrap();
    let zeta = engine.bowtie(&values).unwrap();
    let xi = influence_index(&graph, &values).unwrap();
    let d = engine.correction_diagonal().unwrap();

    println!("{:>4} {:>9} {:>9} {:>9} {:>9} {:>7}", "node", "access", "corrected", "bowtie", "influence", "D_kk");
    for id in graph.nodes() {
        println!(
            "{:>4} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>7.4}",
            graph.label(id),
            chi.get(id),
            chi_hat.get(id),
            zeta.get(id),
            xi.get(id),
            d.values[id.index()]
        );
    }
}
