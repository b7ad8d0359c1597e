mod common;

use std::collections::HashSet;

use bowtie_centrality::compare::{jaccard, rank_nodes, truncated_jaccard_curve};
use bowtie_centrality::{
    bowtie_decompose, generate, influence_index, load_edge_list, reduce_network, strongly_connected_components,
    validate, BowTieClass, BowTieSpec, CentralityEngine, CentralityVector, CoreRule, LoadOptions, Measure,
    NodeValues, SolverConfig, WeightedDigraph,
};
use proptest::prelude::*;

use common::{max_abs_diff, node, norm_inf};

/// Arbitrary graph on `1..=max_n` nodes whose columns are capped at random bounds in (0, 1].
fn capped_graph(max_n: usize) -> impl Strategy<Value = (WeightedDigraph, NodeValues)> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n, 0.01..1.0f64), 0..=n * n),
                prop::collection::vec(prop_oneof![Just(1.0), 0.1..1.0f64], n),
                prop::collection::vec(prop_oneof![Just(0.0), 0.0..100.0f64], n),
            )
        })
        .prop_map(|(n, mut edges, caps, values)| {
            edges.sort_by_key(|e| (e.0, e.1));
            edges.dedup_by_key(|e| (e.0, e.1));
            let mut sums = vec![0.0; n];
            for e in &edges {
                sums[e.1] += e.2;
            }
            for e in edges.iter_mut() {
                if sums[e.1] > caps[e.1] {
                    e.2 *= caps[e.1] / sums[e.1];
                }
            }
            (
                WeightedDigraph::with_index_labels(n, edges).unwrap(),
                NodeValues::new(values).unwrap(),
            )
        })
}

fn valid_graph(max_n: usize) -> impl Strategy<Value = (WeightedDigraph, NodeValues)> {
    capped_graph(max_n).prop_filter("must pass validation", |(g, _)| validate(g).passed())
}

/// Transitive closure by repeated squaring of the boolean adjacency (reflexive).
fn closure(g: &WeightedDigraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (i, j, _) in g.matrix().triplets() {
        r[i][j] = true;
    }
    for k in 0..n {
        let via = r[k].clone();
        for row in r.iter_mut().filter(|row| row[k]) {
            for (j, _) in via.iter().enumerate().filter(|(_, &x)| x) {
                row[j] = true;
            }
        }
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn measures_are_ordered((g, v) in valid_graph(9)) {
        let e = CentralityEngine::new(&g, SolverConfig::default()).unwrap();
        let chi = e.access(&v).unwrap().values;
        let chi_hat = e.corrected(&v).unwrap().values;
        let zeta = e.bowtie(&v).unwrap().values;
        let xi = influence_index(&g, &v).unwrap().values;
        let direct = e.direct_portfolio(&v).unwrap().values;
        let slack = 1e-9 * (1.0 + norm_inf(&chi));
        for i in 0..g.node_count() {
            prop_assert!(chi[i] + slack >= zeta[i]);
            prop_assert!(zeta[i] + slack >= xi[i]);
            // Trails never use a self-loop, so only the off-diagonal direct holdings count.
            let self_held = g.weight(node(i), node(i)) * v.get(node(i));
            prop_assert!(xi[i] + slack >= direct[i] - self_held);
            prop_assert!(chi[i] + slack >= chi_hat[i]);
            prop_assert!(direct[i] >= 0.0);
        }
    }

    #[test]
    fn correction_lies_in_unit_interval((g, _) in valid_graph(12)) {
        let e = CentralityEngine::new(&g, SolverConfig::default()).unwrap();
        let d = e.correction_diagonal().unwrap();
        for k in 0..g.node_count() {
            prop_assert!(d.values[k] > 0.0 && d.values[k] <= 1.0);
            prop_assert_eq!(d.is_exact(k), e.partition().on_cycle(node(k)));
        }
    }

    #[test]
    fn measures_are_linear_in_values((g, v1) in valid_graph(8), a in 0.0..5.0f64, b in 0.0..5.0f64) {
        let n = g.node_count();
        let v2 = NodeValues::new((0..n).map(|i| (i as f64 * 0.37).fract() * 10.0).collect()).unwrap();
        let mix = NodeValues::new(v1.as_slice().iter().zip(v2.as_slice()).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let e = CentralityEngine::new(&g, SolverConfig::default()).unwrap();
        type Scores<'a> = &'a dyn Fn(&NodeValues) -> Vec<f64>;
        let measures: [Scores; 3] = [
            &|v| e.access(v).unwrap().values,
            &|v| e.bowtie(v).unwrap().values,
            &|v| influence_index(&g, v).unwrap().values,
        ];
        for m in measures {
            let combined: Vec<f64> = m(&v1).iter().zip(m(&v2)).map(|(x, y)| a * x + b * y).collect();
            let direct = m(&mix);
            prop_assert!(max_abs_diff(&combined, &direct) <= 1e-9 * (1.0 + norm_inf(&direct)));
        }
    }

    #[test]
    fn sink_first_order_is_topological((g, _) in capped_graph(12)) {
        let p = strongly_connected_components(&g);
        let mut position = vec![0; p.len()];
        for (k, &s) in p.sink_first().iter().enumerate() {
            position[s.index()] = k;
        }
        let total: usize = p.ids().map(|s| p.members(s).len()).sum();
        prop_assert_eq!(total, g.node_count());
        let reach = closure(&g);
        for (i, j, _) in g.matrix().triplets() {
            let (si, sj) = (p.component_of(node(i)), p.component_of(node(j)));
            if si != sj {
                prop_assert!(position[sj.index()] < position[si.index()]);
            }
        }
        for (i, row) in reach.iter().enumerate() {
            for (j, &forward) in row.iter().enumerate() {
                let same = p.component_of(node(i)) == p.component_of(node(j));
                prop_assert_eq!(same, forward && reach[j][i]);
            }
        }
    }

    #[test]
    fn decomposition_matches_reachability((g, _) in capped_graph(12)) {
        let p = strongly_connected_components(&g);
        let Ok(d) = bowtie_decompose(&g, &p, CoreRule::LargestScc, false) else {
            prop_assert!(p.nontrivial().next().is_none());
            return Ok(());
        };
        let reach = closure(&g);
        let core = p.members(d.core);
        let c = core[0].index();
        let n = g.node_count();
        // Weak component of the core, by closure of the symmetrized reachability.
        let mut weak = vec![false; n];
        weak[c] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for (i, j, _) in g.matrix().triplets() {
                if weak[i] != weak[j] {
                    weak[i] = true;
                    weak[j] = true;
                    changed = true;
                }
            }
        }
        for i in 0..n {
            let expected = if reach[i][c] && reach[c][i] {
                BowTieClass::Scc
            } else if reach[i][c] {
                BowTieClass::In
            } else if reach[c][i] {
                BowTieClass::Out
            } else if weak[i] {
                BowTieClass::Tt
            } else {
                BowTieClass::Other
            };
            prop_assert_eq!(d.classes[i], expected);
        }
        prop_assert_eq!(d.sizes.total(), n);
        prop_assert_eq!(core.len(), p.ids().map(|s| p.members(s).len()).max().unwrap());
    }

    #[test]
    fn reduction_is_monotone_in_threshold((g, v) in valid_graph(12), t1 in 0.0..100.0f64, t2 in 0.0..100.0f64) {
        let p = strongly_connected_components(&g);
        let Ok(d) = bowtie_decompose(&g, &p, CoreRule::LargestScc, false) else { return Ok(()); };
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let small = reduce_network(&g, &v, &d, hi).unwrap();
        let large = reduce_network(&g, &v, &d, lo).unwrap();
        let small_set: HashSet<_> = small.original.iter().collect();
        let large_set: HashSet<_> = large.original.iter().collect();
        prop_assert!(small_set.is_subset(&large_set));
        // Induced subgraph: every surviving edge keeps its weight.
        for (i, j, w) in small.graph.matrix().triplets() {
            prop_assert_eq!(w, g.weight(small.original[i], small.original[j]));
        }
        let kept_edges = g.matrix().triplets()
            .filter(|&(i, j, _)| small.renumbered[i].is_some() && small.renumbered[j].is_some())
            .count();
        prop_assert_eq!(kept_edges, small.graph.edge_count());
        // The whole core survives, so it is still strongly connected.
        let rp = strongly_connected_components(&small.graph);
        let core_new: HashSet<_> = p.members(d.core).iter()
            .map(|&k| rp.component_of(small.renumbered[k.index()].unwrap()))
            .collect();
        prop_assert_eq!(core_new.len(), 1);
    }

    #[test]
    fn reduction_with_vacuous_threshold_is_idempotent((g, v) in valid_graph(12), infinite in any::<bool>()) {
        let t = if infinite { f64::INFINITY } else { 0.0 };
        let p = strongly_connected_components(&g);
        let Ok(d) = bowtie_decompose(&g, &p, CoreRule::LargestScc, false) else { return Ok(()); };
        let once = reduce_network(&g, &v, &d, t).unwrap();
        let p2 = strongly_connected_components(&once.graph);
        let d2 = bowtie_decompose(&once.graph, &p2, CoreRule::LargestScc, false).unwrap();
        let twice = reduce_network(&once.graph, &once.values, &d2, t).unwrap();
        prop_assert_eq!(once.graph.labels(), twice.graph.labels());
        prop_assert_eq!(once.graph.matrix(), twice.graph.matrix());
        prop_assert_eq!(once.values.as_slice(), twice.values.as_slice());
    }

    #[test]
    fn jaccard_is_a_similarity(a in prop::collection::hash_set(0u8..20, 0..15), b in prop::collection::hash_set(0u8..20, 0..15)) {
        let j = jaccard(&a, &b);
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert_eq!(j, jaccard(&b, &a));
        prop_assert_eq!(jaccard(&a, &a), 1.0);
        prop_assert_eq!(j == 1.0, a == b);
    }

    #[test]
    fn truncated_curve_matches_definition(x in prop::collection::vec(0.0..10.0f64, 1..30), seed in any::<u64>()) {
        let n = x.len();
        let y: Vec<f64> = (0..n).map(|i| ((i as u64).wrapping_mul(seed | 1) % 97) as f64).collect();
        let ra = rank_nodes(&CentralityVector::new(Measure::Access, x), false).unwrap();
        let rb = rank_nodes(&CentralityVector::new(Measure::Bowtie, y), true).unwrap();
        let curve = truncated_jaccard_curve(&ra, &rb).unwrap();
        prop_assert_eq!(curve.len(), ra.len().max(rb.len()));
        for (k, &j) in curve.iter().enumerate() {
            let sa: HashSet<_> = ra.top(k + 1).iter().collect();
            let sb: HashSet<_> = rb.top(k + 1).iter().collect();
            prop_assert_eq!(j, jaccard(&sa, &sb));
        }
        // Scores never increase along a ranking, and ties go to the smaller id.
        for w in ra.order.windows(2).zip(ra.scores.windows(2)) {
            let (ids, s) = w;
            prop_assert!(s[0] > s[1] || (s[0] == s[1] && ids[0] < ids[1]));
        }
    }

    #[test]
    fn csv_round_trip_preserves_graph((g, v) in capped_graph(10)) {
        let mut edges = Vec::new();
        g.write_edge_list(&mut edges).unwrap();
        let mut values = Vec::new();
        v.write_csv(&g, &mut values).unwrap();
        let (g2, v2) = load_edge_list(&edges[..], Some(&values[..]), LoadOptions::default()).unwrap();
        prop_assert_eq!(g2.node_count(), g.node_count());
        for (i, j, w) in g.matrix().triplets() {
            let (a, b) = (g2.node_id(g.label(node(i))).unwrap(), g2.node_id(g.label(node(j))).unwrap());
            prop_assert_eq!(g2.weight(a, b), w);
        }
        prop_assert_eq!(g2.edge_count(), g.edge_count());
        for i in g.nodes() {
            prop_assert_eq!(v2.get(g2.node_id(g.label(i)).unwrap()), v.get(i));
        }
    }

    #[test]
    fn generator_plants_recoverable_classes(
        sizes in (0usize..15, 3usize..12, 0usize..15, 0usize..5),
        seed in any::<u64>(),
    ) {
        let (n_in, n_scc, n_out, n_tt) = sizes;
        let n_tt = if n_in + n_out == 0 { 0 } else { n_tt };
        let spec = BowTieSpec { seed, scc_degree: 0.5, ..BowTieSpec::with_sizes(n_in, n_scc, n_out, n_tt) };
        let net = generate(&spec).unwrap();
        prop_assert!(validate(&net.graph).passed());
        let p = strongly_connected_components(&net.graph);
        let d = bowtie_decompose(&net.graph, &p, CoreRule::LargestScc, false).unwrap();
        prop_assert_eq!(&d.classes, &net.planted);
        let again = generate(&spec).unwrap();
        prop_assert_eq!(net.graph.matrix(), again.graph.matrix());
        prop_assert_eq!(net.values.as_slice(), again.values.as_slice());
    }
}
