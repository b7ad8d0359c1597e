// The influence index as an explicit sum over simple paths.
//
//     cargo run --example influence_paths

use bowtie_centrality::influence::enumerate_simple_paths;
use bowtie_centrality::{datasets, influence_index};

fn main() {
    let (graph, values) = datasets::six_node_bowtie();
    let start = graph.node_id("1").unwrap();

    let paths = enumerate_simple_paths(&graph, start, None).unwrap();
    let mut total = 0.0;
    for p in &paths {
        let labels: Vec<&str> = p.nodes.iter().map(|&n| graph.label(n)).collect();
        let term = p.weight * values.get(p.end());
        total += term;
        println!("{:<22} weight {:.4}  contributes {:.4}", labels.join(" -> "), p.weight, term);
    }
    let xi = influence_index(&graph, &values).unwrap();
    println!("{} paths, sum {total:.4}; influence index of node 1: {:.4}", paths.len(), xi.get(start));
}
