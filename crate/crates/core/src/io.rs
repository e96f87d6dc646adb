//! JSON documents for graphs, metric spaces and erasure traces.
//!
//! Every document carries a `format` tag (`"graph"`, `"metric"` or
//! `"erasure-trace"`) and a `version`. Vertices are dense ids; when a
//! document has `labels`, endpoints may be given either as ids or as labels
//! and are resolved to ids on read. Weights are exact: JSON integers, or
//! strings holding an integer, a decimal (`"1.25"`) or a fraction (`"7/4"`).

use std::collections::HashMap;
use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use thiserror::Error;

use crate::erasure::ErasureTrace;
use crate::graph::{pair_count, Edge, Graph, GraphError};
use crate::weighted::{MetricMode, MetricSpace, Rational, WeightedError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("labels: {0}")]
    Labels(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("pair {0} is listed more than once")]
    DuplicatePair(Edge),
    #[error("pair {0} has no weight")]
    MissingPair(Edge),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weighted(#[from] WeightedError),
}

/// A vertex reference: a dense id or a label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, SerializeDerive, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Id(usize),
    Label(String),
}

impl From<usize> for Endpoint {
    fn from(v: usize) -> Self {
        Endpoint::Id(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub edges: Vec<(Endpoint, Endpoint)>,
}

#[derive(Debug, Clone, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDocument {
    pub version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub weights: Vec<(Endpoint, Endpoint, Rational)>,
}

/// The starting graph of a trace: `{"complete": n}` or an inline edge list.
#[derive(Debug, Clone, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(untagged)]
pub enum InitialGraph {
    Complete { complete: usize },
    Inline { n: usize, edges: Vec<(Endpoint, Endpoint)> },
}

/// Optional per-step data recorded alongside an erasure.
#[derive(Debug, Clone, Default, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepAnnotation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Rational>,
    /// Size of the exposed set before the erasure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exposed: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub initial: InitialGraph,
    pub erased: Vec<(Endpoint, Endpoint)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepAnnotation>>,
}

/// Any document, dispatched on its `format` tag.
#[derive(Debug, Clone, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(tag = "format")]
pub enum Document {
    #[serde(rename = "graph")]
    Graph(GraphDocument),
    #[serde(rename = "metric")]
    Metric(MetricDocument),
    #[serde(rename = "erasure-trace")]
    Trace(TraceDocument),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph(_) => "graph",
            Document::Metric(_) => "metric",
            Document::Trace(_) => "erasure-trace",
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: Document = serde_json::from_str(text)?;
        let version = match &doc {
            Document::Graph(d) => d.version,
            Document::Metric(d) => d.version,
            Document::Trace(d) => d.version,
        };
        if version != FORMAT_VERSION {
            return Err(DocumentError::Version(version));
        }
        Ok(doc)
    }

    /// Canonical rendering: two-space indentation, containers nested inside
    /// arrays kept on one line, trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, InlineLeaves::default());
        self.serialize(&mut ser).expect("documents always serialize");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    pub fn into_graph(self) -> Result<(Graph, Option<Vec<String>>), DocumentError> {
        match self {
            Document::Graph(d) => Ok((d.to_graph()?, d.labels)),
            other => Err(DocumentError::WrongKind { expected: "graph", found: other.kind() }),
        }
    }

    pub fn into_metric(self, mode: MetricMode) -> Result<(MetricSpace, Option<Vec<String>>), DocumentError> {
        match self {
            Document::Metric(d) => Ok((d.to_metric(mode)?, d.labels)),
            other => Err(DocumentError::WrongKind { expected: "metric", found: other.kind() }),
        }
    }

    pub fn into_trace(self) -> Result<(ErasureTrace, TraceDocument), DocumentError> {
        match self {
            Document::Trace(d) => Ok((d.to_trace()?, d)),
            other => Err(DocumentError::WrongKind { expected: "erasure-trace", found: other.kind() }),
        }
    }
}

struct Resolver {
    n: usize,
    by_label: HashMap<String, usize>,
}

impl Resolver {
    fn new(n: usize, labels: Option<&Vec<String>>) -> Result<Self, DocumentError> {
        let mut by_label = HashMap::new();
        if let Some(labels) = labels {
            if labels.len() != n {
                return Err(DocumentError::Labels(format!("{} labels for {} vertices", labels.len(), n)));
            }
            for (i, l) in labels.iter().enumerate() {
                if by_label.insert(l.clone(), i).is_some() {
                    return Err(DocumentError::Labels(format!("duplicate label {l:?}")));
                }
            }
        }
        Ok(Resolver { n, by_label })
    }

    fn vertex(&self, p: &Endpoint) -> Result<usize, DocumentError> {
        match p {
            Endpoint::Id(v) if *v < self.n => Ok(*v),
            Endpoint::Id(v) => Err(DocumentError::UnknownVertex(v.to_string())),
            Endpoint::Label(l) => self
                .by_label
                .get(l)
                .copied()
                .ok_or_else(|| DocumentError::UnknownVertex(l.clone())),
        }
    }

    fn edge(&self, (a, b): &(Endpoint, Endpoint)) -> Result<Edge, DocumentError> {
        Ok(Edge::new(self.vertex(a)?, self.vertex(b)?)?)
    }
}

fn edge_list(edges: impl Iterator<Item = Edge>) -> Vec<(Endpoint, Endpoint)> {
    edges.map(|e| (e.u().into(), e.v().into())).collect()
}

impl GraphDocument {
    pub fn from_graph(graph: &Graph, labels: Option<Vec<String>>) -> Self {
        GraphDocument {
            version: FORMAT_VERSION,
            n: graph.vertex_count(),
            labels,
            edges: edge_list(graph.edges()),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, DocumentError> {
        let r = Resolver::new(self.n, self.labels.as_ref())?;
        let edges = self.edges.iter().map(|p| r.edge(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Graph::from_edges(self.n, edges)?)
    }
}

impl MetricDocument {
    pub fn from_metric(metric: &MetricSpace, labels: Option<Vec<String>>) -> Self {
        MetricDocument {
            version: FORMAT_VERSION,
            n: metric.point_count(),
            labels,
            weights: metric
                .pairs()
                .map(|(e, w)| (e.u().into(), e.v().into(), w.clone()))
                .collect(),
        }
    }

    /// Requires exactly one weight per unordered pair.
    pub fn to_metric(&self, mode: MetricMode) -> Result<MetricSpace, DocumentError> {
        let r = Resolver::new(self.n, self.labels.as_ref())?;
        let mut weights: Vec<Option<Rational>> = vec![None; pair_count(self.n)];
        for (a, b, w) in &self.weights {
            let e = r.edge(&(a.clone(), b.clone()))?;
            let slot = &mut weights[e.pair_index()];
            if slot.is_some() {
                return Err(DocumentError::DuplicatePair(e));
            }
            *slot = Some(w.clone());
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| DocumentError::MissingPair(Edge::from_pair_index(i))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MetricSpace::from_weights(self.n, weights, mode)?)
    }
}

impl TraceDocument {
    pub fn from_trace(trace: &ErasureTrace, labels: Option<Vec<String>>, steps: Option<Vec<StepAnnotation>>) -> Self {
        let g = trace.initial();
        let initial = if g.is_complete() && g.vertex_count() > 0 {
            InitialGraph::Complete { complete: g.vertex_count() }
        } else {
            InitialGraph::Inline {
                n: g.vertex_count(),
                edges: edge_list(g.edges()),
            }
        };
        TraceDocument {
            version: FORMAT_VERSION,
            labels,
            initial,
            erased: edge_list(trace.erased().iter().copied()),
            steps,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match &self.initial {
            InitialGraph::Complete { complete } => *complete,
            InitialGraph::Inline { n, .. } => *n,
        }
    }

    /// Structural decoding only; semantic checks are [`crate::erasure::verify_trace`].
    pub fn to_trace(&self) -> Result<ErasureTrace, DocumentError> {
        let n = self.vertex_count();
        let r = Resolver::new(n, self.labels.as_ref())?;
        let initial = match &self.initial {
            InitialGraph::Complete { complete } => Graph::complete(*complete)?,
            InitialGraph::Inline { n, edges } => {
                let edges = edges.iter().map(|p| r.edge(p)).collect::<Result<Vec<_>, _>>()?;
                Graph::from_edges(*n, edges)?
            }
        };
        let erased = self.erased.iter().map(|p| r.edge(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(ErasureTrace::new(initial, erased))
    }
}

/// Pretty-printer that keeps any container nested inside an array on a
/// single line, so edge lists read one pair per line.
#[derive(Default)]
struct InlineLeaves {
    // one entry per open container: (is_array, inline, has_value)
    stack: Vec<(bool, bool, bool)>,
}

impl InlineLeaves {
    fn inline(&self) -> bool {
        self.stack.last().is_some_and(|s| s.1)
    }

    fn open<W: ?Sized + io::Write>(&mut self, w: &mut W, array: bool) -> io::Result<()> {
        let inline = self.stack.last().is_some_and(|&(is_array, inline, _)| is_array || inline);
        self.stack.push((array, inline, false));
        w.write_all(if array { b"[" } else { b"{" })
    }

    fn close<W: ?Sized + io::Write>(&mut self, w: &mut W, array: bool) -> io::Result<()> {
        let (_, inline, has_value) = self.stack.pop().expect("balanced");
        if has_value && !inline {
            w.write_all(b"\n")?;
            self.indent(w)?;
        }
        w.write_all(if array { b"]" } else { b"}" })
    }

    fn indent<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        for _ in 0..self.stack.len() {
            w.write_all(b"  ")?;
        }
        Ok(())
    }

    fn element<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if let Some(top) = self.stack.last_mut() {
            top.2 = true;
        }
        if self.inline() {
            if !first {
                w.write_all(b", ")?;
            }
            Ok(())
        } else {
            w.write_all(if first { b"\n" } else { b",\n" })?;
            self.indent(w)
        }
    }
}

impl serde_json::ser::Formatter for InlineLeaves {
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.open(w, true)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.close(w, true)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.element(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        Ok(())
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.open(w, false)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.close(w, false)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.element(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        Ok(())
    }
}

/// Labels for display: the document labels, or the ids themselves.
pub fn display_labels(n: usize, labels: Option<&[String]>) -> Vec<String> {
    match labels {
        Some(l) => l.to_vec(),
        None => (0..n).map(|v| v.to_string()).collect(),
    }
}
