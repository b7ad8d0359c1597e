// Truncated Jaccard curves between the rankings of the four value-weighted measures.
//
//     cargo run --example compare_rankings

use bowtie_centrality::compare::{rank_nodes, truncated_jaccard_curve};
use bowtie_centrality::{generate, influence_index, BowTieSpec, CentralityEngine, SolverConfig};

fn main() {
    let spec = BowTieSpec {
        seed: 3,
        scc_degree: 1.5,
        ..BowTieSpec::with_sizes(40, 14, 60, 0)
    };
    let net = generate(&spec).unwrap();
    let engine = CentralityEngine::new(&net.graph, SolverConfig::default()).unwrap();
    let vectors = [
        engine.access(&net.values).unwrap(),
        engine.corrected(&net.values).unwrap(),
        engine.bowtie(&net.values).unwrap(),
        influence_index(&net.graph, &net.values).unwrap(),
    ];
    let rankings: Vec<_> = vectors.iter().map(|c| rank_nodes(c, true).unwrap()).collect();

    for (i, a) in rankings.iter().enumerate() {
        for b in &rankings[i + 1..] {
            let curve = truncated_jaccard_curve(a, b).unwrap();
            let at = |n: usize| curve.get(n - 1).copied().unwrap_or(f64::NAN);
            println!(
                "{:>9} vs {:<9}  top-5 {:.2}  top-10 {:.2}  top-25 {:.2}",
                a.measure.as_str(),
                b.measure.as_str(),
                at(5),
                at(10),
                at(25)
            );
        }
    }
}
