// Load an edge list with labels, score it, and write every output format.
//
//     cargo run --example csv_round_trip

use std::io::stdout;

use bowtie_centrality::{
    bowtie_decompose, load_edge_list, strongly_connected_components, CentralityEngine, CoreRule, LoadOptions,
    SolverConfig,
};

const EDGES: &str = "\
source,target,weight
holding,bank,0.6
bank,insurer,0.3
insurer,bank,0.25
insurer,fund,0.4
fund,holding,0.1
bank,factory,0.9
trust,holding,0.5
";

const VALUES: &str = "\
node,value
holding,2
bank,10
insurer,6
fund,1
factory,20
";

fn main() {
    let (graph, values) = load_edge_list(EDGES.as_bytes(), Some(VALUES.as_bytes()), LoadOptions::default()).unwrap();
    let partition = strongly_connected_components(&graph);
    let d = bowtie_decompose(&graph, &partition, CoreRule::LargestScc, false).unwrap();
    let engine = CentralityEngine::new(&graph, SolverConfig::default()).unwrap();
    let zeta = engine.bowtie(&values).unwrap();

    d.write_classes(&graph, stdout()).unwrap();
    values.write_csv(&graph, stdout()).unwrap();
    zeta.write_csv(&graph, stdout(), Some(4)).unwrap();

    let mut buf = Vec::new();
    graph.write_edge_list(&mut buf).unwrap();
    let (reloaded, _) = load_edge_list(&buf[..], None::<&[u8]>, LoadOptions::default()).unwrap();
    assert_eq!(reloaded.edge_count(), graph.edge_count());
    println!("round trip kept {} edges", reloaded.edge_count());
}
