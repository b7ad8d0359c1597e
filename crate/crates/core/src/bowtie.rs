//! Strongly connected components and the bow-tie classification around a core.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{header_writer, NodeId, WeightedDigraph};
use crate::sparse::SparseMatrix;

/// Identifier of a strongly connected component. Ids are ordered by smallest member index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SccId(usize);

impl SccId {
    pub const fn new(index: usize) -> Self {
        Self(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for SccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scc{}", self.0)
    }
}

/// Partition of the nodes into strongly connected components.
#[derive(Debug, Clone, PartialEq)]
pub struct SccPartition {
    component_of: Vec<SccId>,
    members: Vec<Vec<NodeId>>,
    is_trivial: Vec<bool>,
    sink_first: Vec<SccId>,
}

impl SccPartition {
    pub fn component_of(&self, node: NodeId) -> SccId {
        self.component_of[node.index()]
    }

    /// Members of `scc`, ascending.
    pub fn members(&self, scc: SccId) -> &[NodeId] {
        &self.members[scc.0]
    }

    /// A component is trivial when it is a single node without a self-loop.
    pub fn is_trivial(&self, scc: SccId) -> bool {
        self.is_trivial[scc.0]
    }

    /// Whether `node` lies on some directed cycle (including a self-loop).
    pub fn on_cycle(&self, node: NodeId) -> bool {
        !self.is_trivial(self.component_of(node))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SccId> {
        (0..self.members.len()).map(SccId)
    }

    /// Components ordered so that every component comes after all components it reaches.
    pub fn sink_first(&self) -> &[SccId] {
        &self.sink_first
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = SccId> + '_ {
        self.ids().filter(|&c| !self.is_trivial(c))
    }

    /// Largest component by node count; ties go to the smallest id.
    pub fn largest(&self) -> Option<SccId> {
        self.ids()
            .max_by(|a, b| self.members[a.0].len().cmp(&self.members[b.0].len()).then(b.cmp(a)))
    }
}

/// Tarjan's algorithm with an explicit stack.
pub fn strongly_connected_components(graph: &WeightedDigraph) -> SccPartition {
    scc_of_matrix(graph.matrix())
}

pub(crate) fn scc_of_matrix(matrix: &SparseMatrix) -> SccPartition {
    const UNVISITED: usize = usize::MAX;
    let n = matrix.dim();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    // (node, position of the next out-edge to examine)
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut emitted: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let (v, pos) = *top;
            let (succ, _) = matrix.row(v);
            if pos < succ.len() {
                top.1 += 1;
                let w = succ[pos];
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                emitted.push(component);
            }
        }
    }

    // Tarjan emits sink components first; renumber by smallest member.
    let mut by_min: Vec<usize> = (0..emitted.len()).collect();
    by_min.sort_by_key(|&c| emitted[c][0]);
    let mut new_id = vec![0usize; emitted.len()];
    for (id, &c) in by_min.iter().enumerate() {
        new_id[c] = id;
    }

    let mut component_of = vec![SccId(0); n];
    let mut members = vec![Vec::new(); emitted.len()];
    let mut is_trivial = vec![false; emitted.len()];
    for (c, nodes) in emitted.iter().enumerate() {
        let id = new_id[c];
        for &v in nodes {
            component_of[v] = SccId(id);
        }
        is_trivial[id] = nodes.len() == 1 && matrix.get(nodes[0], nodes[0]) == 0.0;
        members[id] = nodes.iter().map(|&v| NodeId::new(v)).collect();
    }
    let sink_first = (0..emitted.len()).map(|c| SccId(new_id[c])).collect();

    SccPartition {
        component_of,
        members,
        is_trivial,
        sink_first,
    }
}

/// Bow-tie class of a node relative to a chosen core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BowTieClass {
    In,
    Scc,
    Out,
    Tt,
    Other,
}

impl BowTieClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::In => "IN",
            Self::Scc => "SCC",
            Self::Out => "OUT",
            Self::Tt => "TT",
            Self::Other => "OTHER",
        }
    }
}

impl fmt::Display for BowTieClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the core component is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreRule {
    LargestScc,
    ExplicitScc(SccId),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassSizes {
    pub r#in: usize,
    pub scc: usize,
    pub out: usize,
    pub tt: usize,
    pub other: usize,
}

impl ClassSizes {
    pub fn total(&self) -> usize {
        self.r#in + self.scc + self.out + self.tt + self.other
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BowTieDecomposition {
    pub core: SccId,
    pub classes: Vec<BowTieClass>,
    pub sizes: ClassSizes,
}

impl BowTieDecomposition {
    pub fn class_of(&self, node: NodeId) -> BowTieClass {
        self.classes[node.index()]
    }

    pub fn nodes_in(&self, class: BowTieClass) -> Vec<NodeId> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(i, _)| NodeId::new(i))
            .collect()
    }

    /// Writes the per-node `node,class` CSV.
    pub fn write_classes<W: Write>(&self, graph: &WeightedDigraph, writer: W) -> Result<()> {
        let mut out = header_writer(writer)?;
        out.write_record(["node", "class"])?;
        for (label, class) in graph.labels().iter().zip(&self.classes) {
            out.write_record([label.as_str(), class.as_str()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn reach(n: usize, seeds: &[NodeId], mut next: impl FnMut(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = seeds.iter().map(|s| s.index()).collect();
    for s in seeds {
        seen[s.index()] = true;
    }
    while let Some(u) = queue.pop_front() {
        for w in next(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Classifies every node as IN, SCC, OUT, TT or OTHER around the selected core.
///
/// `allow_trivial_core` lets [`CoreRule::LargestScc`] fall back to a single node when no
/// component has a cycle.
pub fn bowtie_decompose(
    graph: &WeightedDigraph,
    partition: &SccPartition,
    rule: CoreRule,
    allow_trivial_core: bool,
) -> Result<BowTieDecomposition> {
    let n = graph.node_count();
    let core = match rule {
        CoreRule::ExplicitScc(id) => {
            if id.0 >= partition.len() {
                return Err(Error::UnknownScc(id.0));
            }
            id
        }
        CoreRule::LargestScc => {
            let Some(largest) = partition.largest() else {
                return Ok(BowTieDecomposition {
                    core: SccId(0),
                    classes: Vec::new(),
                    sizes: ClassSizes::default(),
                });
            };
            let largest = if partition.is_trivial(largest) {
                // Prefer a self-loop singleton over an acyclic one.
                partition.nontrivial().next().unwrap_or(largest)
            } else {
                largest
            };
            if partition.is_trivial(largest) && !allow_trivial_core {
                return Err(Error::NoNontrivialCore);
            }
            largest
        }
    };

    let m = graph.matrix();
    let seeds = partition.members(core);
    let downstream = reach(n, seeds, |u| m.row(u).0.to_vec());
    let upstream = reach(n, seeds, |u| m.col(u).0.to_vec());
    let weak = reach(n, seeds, |u| {
        let mut adj = m.row(u).0.to_vec();
        adj.extend_from_slice(m.col(u).0);
        adj
    });

    let mut sizes = ClassSizes::default();
    let classes = (0..n)
        .map(|i| {
            let class = if partition.component_of(NodeId::new(i)) == core {
                BowTieClass::Scc
            } else if upstream[i] {
                BowTieClass::In
            } else if downstream[i] {
                BowTieClass::Out
            } else if weak[i] {
                BowTieClass::Tt
            } else {
                BowTieClass::Other
            };
            match class {
                BowTieClass::In => sizes.r#in += 1,
                BowTieClass::Scc => sizes.scc += 1,
                BowTieClass::Out => sizes.out += 1,
                BowTieClass::Tt => sizes.tt += 1,
                BowTieClass::Other => sizes.other += 1,
            }
            class
        })
        .collect();

    Ok(BowTieDecomposition { core, classes, sizes })
}

/// Rows `(class, count)`: IN, SCC, OUT, TT, OTHER (only when nonzero) and Total.
pub fn component_size_report(decomposition: &BowTieDecomposition) -> Vec<(String, usize)> {
    let s = &decomposition.sizes;
    let mut rows = vec![
        ("IN".to_owned(), s.r#in),
        ("SCC".to_owned(), s.scc),
        ("OUT".to_owned(), s.out),
        ("TT".to_owned(), s.tt),
    ];
    if s.other > 0 {
        rows.push(("OTHER".to_owned(), s.other));
    }
    rows.push(("Total".to_owned(), s.total()));
    rows
}

pub fn write_size_report<W: Write>(decomposition: &BowTieDecomposition, writer: W) -> Result<()> {
    let mut out = header_writer(writer)?;
    out.write_record(["class", "count"])?;
    for (class, count) in component_size_report(decomposition) {
        out.write_record([class, count.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedDigraph {
        WeightedDigraph::with_index_labels(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn chain_has_two_trivial_components() {
        let g = graph(2, &[(0, 1, 0.5)]);
        let p = strongly_connected_components(&g);
        assert_eq!(p.len(), 2);
        assert!(p.ids().all(|c| p.is_trivial(c)));
        assert_eq!(p.sink_first(), &[SccId(1), SccId(0)]);
    }

    #[test]
    fn two_cycle_is_one_component() {
        let g = graph(2, &[(0, 1, 0.5), (1, 0, 0.5)]);
        let p = strongly_connected_components(&g);
        assert_eq!(p.len(), 1);
        assert!(!p.is_trivial(SccId(0)));
        assert_eq!(p.members(SccId(0)), &[NodeId::new(0), NodeId::new(1)]);
    }

    #[test]
    fn self_loop_makes_singleton_nontrivial() {
        let g = graph(2, &[(1, 1, 0.5)]);
        let p = strongly_connected_components(&g);
        assert!(p.is_trivial(SccId(0)));
        assert!(!p.is_trivial(SccId(1)));
        assert!(p.on_cycle(NodeId::new(1)));
    }

    #[test]
    fn two_cycle_with_out_node() {
        let g = graph(3, &[(0, 1, 0.5), (1, 0, 0.5), (0, 2, 0.5)]);
        let p = strongly_connected_components(&g);
        let d = bowtie_decompose(&g, &p, CoreRule::LargestScc, false).unwrap();
        assert_eq!(d.classes, vec![BowTieClass::Scc, BowTieClass::Scc, BowTieClass::Out]);
        assert_eq!(d.sizes, ClassSizes { r#in: 0, scc: 2, out: 1, tt: 0, other: 0 });
    }

    #[test]
    fn tendrils_and_other_components() {
        // 0 -> {1,2} core, 2 -> 3; 4 -> 3 is a tendril into OUT; 0 -> 5 is a tendril out of IN;
        // 6 -> 7 is disconnected.
        let g = graph(
            8,
            &[
                (0, 1, 0.1),
                (1, 2, 0.5),
                (2, 1, 0.5),
                (2, 3, 0.5),
                (4, 3, 0.5),
                (0, 5, 0.5),
                (6, 7, 0.5),
            ],
        );
        let p = strongly_connected_components(&g);
        let d = bowtie_decompose(&g, &p, CoreRule::LargestScc, false).unwrap();
        use BowTieClass::*;
        assert_eq!(d.classes, vec![In, Scc, Scc, Out, Tt, Tt, Other, Other]);
        let rows = component_size_report(&d);
        assert_eq!(rows.last().unwrap(), &("Total".to_owned(), 8));
        assert!(rows.contains(&("OTHER".to_owned(), 2)));
    }

    #[test]
    fn all_trivial_needs_permission() {
        let g = graph(2, &[(0, 1, 0.5)]);
        let p = strongly_connected_components(&g);
        assert!(matches!(
            bowtie_decompose(&g, &p, CoreRule::LargestScc, false),
            Err(Error::NoNontrivialCore)
        ));
        let d = bowtie_decompose(&g, &p, CoreRule::LargestScc, true).unwrap();
        assert_eq!(d.core, SccId(0));
        assert_eq!(d.classes, vec![BowTieClass::Scc, BowTieClass::Out]);
    }

    #[test]
    fn explicit_core_must_exist() {
        let g = graph(2, &[(0, 1, 0.5)]);
        let p = strongly_connected_components(&g);
        assert!(matches!(
            bowtie_decompose(&g, &p, CoreRule::ExplicitScc(SccId(9)), false),
            Err(Error::UnknownScc(9))
        ));
        let d = bowtie_decompose(&g, &p, CoreRule::ExplicitScc(SccId(1)), false).unwrap();
        assert_eq!(d.classes, vec![BowTieClass::In, BowTieClass::Scc]);
    }

    #[test]
    fn empty_graph_reports_zeros() {
        let g = graph(0, &[]);
        let p = strongly_connected_components(&g);
        let d = bowtie_decompose(&g, &p, CoreRule::LargestScc, false).unwrap();
        assert!(component_size_report(&d).iter().all(|(_, c)| *c == 0));
    }

    #[test]
    fn largest_scc_tie_breaks_on_smallest_id() {
        let g = graph(4, &[(2, 3, 0.5), (3, 2, 0.5), (0, 1, 0.5), (1, 0, 0.5)]);
        let p = strongly_connected_components(&g);
        assert_eq!(p.largest(), Some(SccId(0)));
        assert_eq!(p.members(SccId(0)), &[NodeId::new(0), NodeId::new(1)]);
    }
}
