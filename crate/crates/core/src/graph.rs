//! Weighted directed graphs with intrinsic node values, plus CSV ingestion and export.
//!
//! An edge `i -> j` with weight `W[i][j]` reads "`i` holds the fraction `W[i][j]` of `j`".
//! Value flows against the edge direction: a node's scores accumulate the values of
//! the nodes it reaches downstream through its out-edges. The normalized quantity is
//! therefore the column sum `sum_i W[i][j]`, the total held fraction of `j`.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, WeightOffender};
use crate::sparse::SparseMatrix;

/// Tolerance for column-sum, weight-range and Perron comparisons.
pub const EPS_STOCHASTIC: f64 = 1e-9;

/// Header comment written at the top of every emitted file.
pub fn schema_header() -> String {
    format!("# bowtie-centrality v{} schema=1", env!("CARGO_PKG_VERSION"))
}

/// Dense node index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(usize);

impl NodeId {
    pub const fn new(index: usize) -> Self {
        Self(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(index: usize) -> Self {
        Self(index)
    }
}

/// Immutable weighted digraph. Node labels from the input are preserved verbatim.
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    matrix: SparseMatrix,
    labels: Vec<String>,
    lookup: HashMap<String, NodeId>,
}

impl WeightedDigraph {
    /// Builds a graph from labels and `(source, target, weight)` triples over dense indices.
    ///
    /// Zero weights are dropped and duplicates summed. Fails if any summed weight lies
    /// outside `(0, 1]` or a label is repeated.
    pub fn from_edges(labels: Vec<String>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let graph = Self::from_edges_unchecked(labels, edges)?;
        let offenders = graph.weight_offenders();
        if offenders.is_empty() {
            Ok(graph)
        } else {
            Err(Error::InvalidWeights(offenders))
        }
    }

    /// Like [`from_edges`](Self::from_edges) but keeps out-of-range weights for later reporting.
    pub fn from_edges_unchecked(labels: Vec<String>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = labels.len();
        for &(s, t, _) in &edges {
            let index = s.max(t);
            if index >= n {
                return Err(Error::NodeOutOfRange { index, n });
            }
        }
        let edges = edges.into_iter().filter(|e| e.2 != 0.0).collect();
        let matrix = SparseMatrix::from_triplets(n, edges);
        Self::from_matrix(labels, matrix)
    }

    pub(crate) fn from_matrix(labels: Vec<String>, matrix: SparseMatrix) -> Result<Self> {
        debug_assert_eq!(labels.len(), matrix.dim());
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if lookup.insert(label.clone(), NodeId(i)).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate node label `{label}`"),
                });
            }
        }
        Ok(Self { matrix, labels, lookup })
    }

    /// Graph whose nodes are labelled `0..n` (as strings).
    pub fn with_index_labels(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.lookup.get(label).copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn weight(&self, source: NodeId, target: NodeId) -> f64 {
        self.matrix.get(source.0, target.0)
    }

    fn check(&self, id: NodeId) -> Result<()> {
        if id.0 < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: id.0,
                n: self.node_count(),
            })
        }
    }

    /// Out-edges of `i` (its portfolio), ascending by target.
    pub fn neighbors_out(&self, i: NodeId) -> Result<Vec<(NodeId, f64)>> {
        self.check(i)?;
        let (cols, vals) = self.matrix.row(i.0);
        Ok(cols.iter().zip(vals).map(|(&j, &w)| (NodeId(j), w)).collect())
    }

    /// In-edges of `j` (its holders), ascending by source.
    pub fn neighbors_in(&self, j: NodeId) -> Result<Vec<(NodeId, f64)>> {
        self.check(j)?;
        let (rows, vals) = self.matrix.col(j.0);
        Ok(rows.iter().zip(vals).map(|(&i, &w)| (NodeId(i), w)).collect())
    }

    pub fn has_self_loop(&self, i: NodeId) -> bool {
        self.matrix.get(i.0, i.0) != 0.0
    }

    pub fn self_loops(&self) -> Vec<NodeId> {
        self.nodes().filter(|&i| self.has_self_loop(i)).collect()
    }

    /// Edges whose weight lies outside `(0, 1 + EPS_STOCHASTIC]`.
    pub fn weight_offenders(&self) -> Vec<WeightOffender> {
        self.matrix
            .triplets()
            .filter(|&(_, _, w)| !(w > 0.0 && w <= 1.0 + EPS_STOCHASTIC))
            .map(|(s, t, w)| WeightOffender {
                source: self.labels[s].clone(),
                target: self.labels[t].clone(),
                weight: w,
            })
            .collect()
    }

    /// Writes the `source,target,weight` CSV, row-major.
    pub fn write_edge_list<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = header_writer(writer)?;
        out.write_record(["source", "target", "weight"])?;
        for (s, t, w) in self.matrix.triplets() {
            out.write_record([self.labels[s].as_str(), self.labels[t].as_str(), &w.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Non-negative intrinsic node values, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct NodeValues(Vec<f64>);

impl NodeValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidValue { index, value });
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, id: NodeId) -> f64 {
        self.0[id.0]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: n,
                actual: self.0.len(),
            })
        }
    }

    /// Writes the `node,value` CSV for every node of `graph`, in id order.
    pub fn write_csv<W: Write>(&self, graph: &WeightedDigraph, writer: W) -> Result<()> {
        self.check_len(graph.node_count())?;
        let mut out = header_writer(writer)?;
        out.write_record(["node", "value"])?;
        for (label, v) in graph.labels().iter().zip(&self.0) {
            out.write_record([label.as_str(), &v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

impl std::ops::Index<NodeId> for NodeValues {
    type Output = f64;
    fn index(&self, id: NodeId) -> &f64 {
        &self.0[id.0]
    }
}

pub(crate) fn header_writer<W: Write>(mut writer: W) -> Result<csv::Writer<W>> {
    writeln!(writer, "{}", schema_header())?;
    Ok(csv::WriterBuilder::new().has_headers(false).from_writer(writer))
}

/// Ingestion switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Keep out-of-range weights instead of failing; they surface in [`crate::validate`].
    pub allow_invalid: bool,
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .flexible(true)
        .from_reader(reader)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
        line: 1,
        message: format!("missing `{name}` column in header `{}`", headers.iter().collect::<Vec<_>>().join(",")),
    })
}

fn field<'r>(record: &'r csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<&'r str> {
    match record.get(idx) {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(Error::Parse {
            line,
            message: format!("missing or empty `{name}` field"),
        }),
    }
}

fn real(s: &str, name: &str, line: u64) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::Parse {
            line,
            message: format!("`{name}` is not a finite real: `{s}`"),
        }),
    }
}

struct Interner {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Interner {
    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.lookup.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.lookup.insert(label.to_owned(), i);
        i
    }
}

/// Reads an edge list (`source,target,weight`) and an optional value list (`node,value`).
///
/// Node ids are assigned in order of first appearance, edges first. Nodes missing from
/// the value list get value 0.
pub fn load_edge_list<E: Read, V: Read>(
    edges: E,
    values: Option<V>,
    options: LoadOptions,
) -> Result<(WeightedDigraph, NodeValues)> {
    let mut interner = Interner {
        labels: Vec::new(),
        lookup: HashMap::new(),
    };
    let mut triplets = Vec::new();

    let mut reader = csv_reader(edges);
    let headers = reader.headers()?.clone();
    let (src_col, tgt_col, w_col) = (
        column(&headers, "source")?,
        column(&headers, "target")?,
        column(&headers, "weight")?,
    );
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let s = field(&record, src_col, "source", line)?;
        let t = field(&record, tgt_col, "target", line)?;
        let w = real(field(&record, w_col, "weight", line)?, "weight", line)?;
        let (s, t) = (interner.intern(s), interner.intern(t));
        if w != 0.0 {
            triplets.push((s, t, w));
        }
    }

    let mut node_values: Vec<Option<f64>> = Vec::new();
    if let Some(values) = values {
        let mut reader = csv_reader(values);
        let headers = reader.headers()?.clone();
        let (node_col, value_col) = (column(&headers, "node")?, column(&headers, "value")?);
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let label = field(&record, node_col, "node", line)?;
            let value = real(field(&record, value_col, "value", line)?, "value", line)?;
            if value < 0.0 {
                return Err(Error::NegativeValue {
                    line,
                    label: label.to_owned(),
                    value,
                });
            }
            let i = interner.intern(label);
            if node_values.len() <= i {
                node_values.resize(i + 1, None);
            }
            if node_values[i].replace(value).is_some() {
                return Err(Error::DuplicateValue {
                    line,
                    label: label.to_owned(),
                });
            }
        }
    }

    let n = interner.labels.len();
    node_values.resize(n, None);
    let values = NodeValues::new(node_values.into_iter().map(|v| v.unwrap_or(0.0)).collect())?;

    let graph = WeightedDigraph::from_edges_unchecked(interner.labels, triplets)?;
    let offenders = graph.weight_offenders();
    if !offenders.is_empty() {
        if options.allow_invalid {
            log::warn!("{} edge weight(s) outside [0, 1] kept (--allow-invalid)", offenders.len());
        } else {
            return Err(Error::InvalidWeights(offenders));
        }
    }
    Ok((graph, values))
}

/// File-path convenience wrapper around [`load_edge_list`].
pub fn load_edge_list_files(
    edges: impl AsRef<Path>,
    values: Option<&Path>,
    options: LoadOptions,
) -> Result<(WeightedDigraph, NodeValues)> {
    let edges = std::io::BufReader::new(std::fs::File::open(edges)?);
    let values = values
        .map(|p| std::fs::File::open(p).map(std::io::BufReader::new))
        .transpose()?;
    load_edge_list(edges, values, options)
}
