// Classical centralities next to access centrality on the six-node network.
//
//     cargo run --example baselines

use bowtie_centrality::{
    alpha_centrality, bonacich_centrality, datasets, eigenvector_centrality, AdjacencyOptions, CentralityEngine,
    SolverConfig,
};

fn main() {
    let (graph, values) = datasets::six_node_bowtie();
    let config = SolverConfig::default();
    let binary = AdjacencyOptions::default();
    let weighted = AdjacencyOptions {
        weighted: true,
        ..binary
    };

    let eig = eigenvector_centrality(&graph, binary, config).unwrap();
    println!("eigenvector (lambda = {:.4}): {:?}", eig.eigenvalue, rounded(&eig.centrality.values));

    let alpha = alpha_centrality(&graph, 0.2, &[1.0; 6], binary, config).unwrap();
    println!("alpha 0.2:               {:?}", rounded(&alpha.values));

    let bonacich = bonacich_centrality(&graph, 1.0, 0.2, None, binary, config).unwrap();
    println!("bonacich (1, 0.2):       {:?}", rounded(&bonacich.values));

    // With unit parameters on W and e = v, Bonacich power centrality is access centrality.
    let same = bonacich_centrality(&graph, 1.0, 1.0, Some(values.as_slice()), weighted, config).unwrap();
    let chi = CentralityEngine::new(&graph, config).unwrap().access(&values).unwrap();
    println!("bonacich (1, 1) on W:    {:?}", rounded(&same.values));
    println!("access:                  {:?}", rounded(&chi.values));
}

fn rounded(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| (x * 1000.0).round() / 1000.0).collect()
}
