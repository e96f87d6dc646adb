//! Erasures: deleting exposed edges.
//!
//! Erasing an exposed edge from a connected chordal graph leaves a connected
//! chordal graph, and the graphs reachable from `K_n` this way are exactly the
//! connected chordal graphs on `n` vertices. This module produces such
//! sequences in both directions and checks them.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::chordality::{is_chordal, is_perfect_elimination_ordering, maximum_cardinality_search};
use crate::exposure::{class_of, EdgeClass};
use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErasureError {
    #[error("edge {edge} is {class}, not exposed")]
    NotExposed { edge: Edge, class: EdgeClass },
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is already complete")]
    AlreadyComplete,
    #[error("picker chose no edge while exposed edges remain")]
    NoChoice,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A starting graph and the edges erased from it, in order.
///
/// The prefix graphs `G_0, ..., G_m` are materialized on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureTrace {
    initial: Graph,
    erased: Vec<Edge>,
}

impl ErasureTrace {
    pub fn new(initial: Graph, erased: Vec<Edge>) -> Self {
        ErasureTrace { initial, erased }
    }

    pub fn initial(&self) -> &Graph {
        &self.initial
    }

    pub fn erased(&self) -> &[Edge] {
        &self.erased
    }

    /// Number of erasures `m`.
    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    /// `G_j`: the initial graph minus the first `j` erased edges. Edges that
    /// are not present are skipped, so this never fails; use
    /// [`verify_trace`] to validate a trace.
    pub fn prefix_graph(&self, j: usize) -> Graph {
        let mut g = self.initial.clone();
        for &e in &self.erased[..j.min(self.erased.len())] {
            g.remove_edge_in_place(e);
        }
        g
    }

    /// `G_m`.
    pub fn final_graph(&self) -> Graph {
        self.prefix_graph(self.erased.len())
    }

    /// All prefix graphs `G_0, ..., G_m`.
    pub fn graphs(&self) -> impl Iterator<Item = Graph> + '_ {
        let mut current = Some(self.initial.clone());
        let mut step = 0;
        std::iter::from_fn(move || {
            let g = current.take()?;
            if step < self.erased.len() {
                let mut next = g.clone();
                next.remove_edge_in_place(self.erased[step]);
                current = Some(next);
                step += 1;
            }
            Some(g)
        })
    }
}

/// Why a trace failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceFault {
    InitialNotChordal,
    InitialNotConnected,
    NotAnEdge(Edge),
    NotExposed(Edge, EdgeClass),
    ResultNotChordal(Edge),
    ResultNotConnected(Edge),
    /// The erased edge was exposed but a heavier exposed edge existed.
    NotHeaviest { erased: Edge, heavier: Edge },
}

impl fmt::Display for TraceFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceFault::InitialNotChordal => write!(f, "initial graph is not chordal"),
            TraceFault::InitialNotConnected => write!(f, "initial graph is not connected"),
            TraceFault::NotAnEdge(e) => write!(f, "{e} is not an edge of the current graph"),
            TraceFault::NotExposed(e, c) => write!(f, "{e} is {c}, not exposed"),
            TraceFault::ResultNotChordal(e) => write!(f, "erasing {e} breaks chordality"),
            TraceFault::ResultNotConnected(e) => write!(f, "erasing {e} disconnects the graph"),
            TraceFault::NotHeaviest { erased, heavier } => {
                write!(f, "{erased} erased while heavier exposed edge {heavier} remained")
            }
        }
    }
}

/// Outcome of [`verify_trace`]: either valid, or the first failing step.
/// Step `j` refers to erasing `erased[j]` from `G_j`; faults of the initial
/// graph are reported at step 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceVerdict {
    Valid,
    Invalid { step: usize, fault: TraceFault },
}

impl TraceVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TraceVerdict::Valid)
    }
}

/// Checks that every erased edge is exposed when it is erased and that every
/// prefix graph is connected and chordal.
pub fn verify_trace(trace: &ErasureTrace) -> TraceVerdict {
    let mut g = trace.initial.clone();
    if !g.is_connected() {
        return TraceVerdict::Invalid { step: 0, fault: TraceFault::InitialNotConnected };
    }
    if !is_chordal(&g) {
        return TraceVerdict::Invalid { step: 0, fault: TraceFault::InitialNotChordal };
    }
    for (step, &e) in trace.erased.iter().enumerate() {
        let fault = if !g.has_edge(e) {
            Some(TraceFault::NotAnEdge(e))
        } else {
            match class_of(&g, e) {
                EdgeClass::Exposed => {
                    g.remove_edge_in_place(e);
                    if !g.is_connected() {
                        Some(TraceFault::ResultNotConnected(e))
                    } else if !is_chordal(&g) {
                        Some(TraceFault::ResultNotChordal(e))
                    } else {
                        None
                    }
                }
                class => Some(TraceFault::NotExposed(e, class)),
            }
        };
        if let Some(fault) = fault {
            return TraceVerdict::Invalid { step, fault };
        }
    }
    TraceVerdict::Valid
}

/// `G - e` for an exposed edge `e`.
pub fn erase(graph: &Graph, e: Edge) -> Result<Graph, ErasureError> {
    graph.check_edge(e)?;
    match class_of(graph, e) {
        EdgeClass::Exposed => Ok(graph.without_edge(e)?),
        class => Err(ErasureError::NotExposed { edge: e, class }),
    }
}

fn require_connected_chordal(graph: &Graph) -> Result<(), ErasureError> {
    if !graph.is_connected() {
        return Err(ErasureError::NotConnected);
    }
    if !is_chordal(graph) {
        return Err(ErasureError::NotChordal);
    }
    Ok(())
}

/// Adds one edge to a connected, chordal, non-complete graph so that the new
/// edge is exposed in the result.
///
/// With `v_1, ..., v_k` the maximum-cardinality-search elimination ordering,
/// `l` is the largest index such that every suffix graph after `v_l` is
/// complete, and `j > l` is the first position with `v_l v_j` missing.
pub fn extension_step(graph: &Graph) -> Result<(Graph, Edge), ErasureError> {
    if graph.is_complete() {
        return Err(ErasureError::AlreadyComplete);
    }
    require_connected_chordal(graph)?;
    let ordering = maximum_cardinality_search(graph);
    let order = ordering.as_slice();
    let n = order.len();
    // smallest `start` such that the suffix beginning at `start` is complete
    let mut suffix = FixedBitSet::with_capacity(n);
    let mut start = n;
    while start > 0 {
        let v = order[start - 1];
        if !suffix.is_subset(graph.neighbor_set(v)) {
            break;
        }
        suffix.insert(v);
        start -= 1;
    }
    debug_assert!(start > 0, "a non-complete graph has a non-complete suffix");
    let l = start - 1;
    let j = (start..n)
        .find(|&j| !graph.adjacent(order[l], order[j]))
        .expect("suffix at l is not complete");
    let added = Edge::new(order[l], order[j])?;
    let extended = graph.with_edge(added)?;
    debug_assert!(
        is_perfect_elimination_ordering(&extended, &ordering).unwrap_or(false),
        "ordering of the old graph must remain a perfect elimination ordering"
    );
    debug_assert_eq!(class_of(&extended, added), EdgeClass::Exposed);
    Ok((extended, added))
}

/// A sequence of erasures from `K_n` down to `target`.
///
/// Built by repeated [`extension_step`] from `target` up to `K_n`, then
/// reversed. Fails exactly when `target` is disconnected or not chordal.
pub fn erasure_sequence_from_complete(target: &Graph) -> Result<ErasureTrace, ErasureError> {
    let n = target.vertex_count();
    let complete = Graph::complete(n)?;
    require_connected_chordal(target)?;
    let mut added = Vec::with_capacity(complete.edge_count() - target.edge_count());
    let mut g = target.clone();
    while !g.is_complete() {
        let (next, e) = extension_step(&g)?;
        added.push(e);
        g = next;
    }
    added.reverse();
    Ok(ErasureTrace::new(complete, added))
}

/// How an [`ErasureEngine`] keeps its exposed-edge set current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Maintenance {
    /// Re-examine only the edges an erasure can affect.
    #[default]
    Incremental,
    /// Reclassify every edge after every erasure.
    Full,
}

/// Chooses the next edge to erase from the current exposed set.
pub trait Picker {
    fn pick(&mut self, graph: &Graph, exposed: &BTreeSet<Edge>) -> Option<Edge>;
}

impl<F> Picker for F
where
    F: FnMut(&Graph, &BTreeSet<Edge>) -> Option<Edge>,
{
    fn pick(&mut self, graph: &Graph, exposed: &BTreeSet<Edge>) -> Option<Edge> {
        self(graph, exposed)
    }
}

/// Erases the lexicographically smallest exposed edge.
#[derive(Debug, Clone, Copy, Default)]
pub struct Lexicographic;

impl Picker for Lexicographic {
    fn pick(&mut self, _graph: &Graph, exposed: &BTreeSet<Edge>) -> Option<Edge> {
        exposed.first().copied()
    }
}

/// A working graph together with its set of exposed edges.
///
/// After erasing `uv` with common neighbourhood `C`, only two families of
/// edges can change class: edges inside `C`, which become shared because `u`
/// and `v` are now non-adjacent common neighbours of both endpoints, and edges
/// from `u` or `v` into `C`, whose common neighbourhood lost a vertex. All
/// other exposed-set entries carry over unchanged.
#[derive(Debug, Clone)]
pub struct ErasureEngine {
    graph: Graph,
    exposed: BTreeSet<Edge>,
    maintenance: Maintenance,
}

impl ErasureEngine {
    pub fn new(graph: Graph, maintenance: Maintenance) -> Self {
        let exposed = crate::exposure::exposed_edges(&graph);
        ErasureEngine {
            graph,
            exposed,
            maintenance,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn exposed(&self) -> &BTreeSet<Edge> {
        &self.exposed
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Erases `e`, which must currently be exposed.
    pub fn erase(&mut self, e: Edge) -> Result<(), ErasureError> {
        if !self.exposed.contains(&e) {
            self.graph.check_edge(e)?;
            return Err(ErasureError::NotExposed {
                edge: e,
                class: class_of(&self.graph, e),
            });
        }
        let (u, v) = e.endpoints();
        let common = self.graph.common_neighbor_set(u, v);
        self.graph.remove_edge_in_place(e);
        self.exposed.remove(&e);
        match self.maintenance {
            Maintenance::Full => self.exposed = crate::exposure::exposed_edges(&self.graph),
            Maintenance::Incremental => {
                let members: Vec<usize> = common.ones().collect();
                for (i, &x) in members.iter().enumerate() {
                    for &y in &members[i + 1..] {
                        self.exposed.remove(&Edge::new(x, y).expect("distinct"));
                    }
                }
                for &w in &members {
                    for end in [u, v] {
                        let edge = Edge::new(end, w).expect("distinct");
                        if class_of(&self.graph, edge) == EdgeClass::Exposed {
                            self.exposed.insert(edge);
                        } else {
                            self.exposed.remove(&edge);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Erases picker-chosen edges until no exposed edge remains, returning
    /// them in order.
    pub fn run<P: Picker + ?Sized>(&mut self, picker: &mut P) -> Result<Vec<Edge>, ErasureError> {
        let mut erased = Vec::new();
        while !self.exposed.is_empty() {
            let e = picker
                .pick(&self.graph, &self.exposed)
                .ok_or(ErasureError::NoChoice)?;
            self.erase(e)?;
            erased.push(e);
        }
        Ok(erased)
    }
}

/// Erases picker-chosen exposed edges from a connected chordal graph until
/// none remain; the final graph is a spanning tree.
pub fn erase_to_tree<P: Picker + ?Sized>(
    graph: &Graph,
    picker: &mut P,
) -> Result<ErasureTrace, ErasureError> {
    require_connected_chordal(graph)?;
    let mut engine = ErasureEngine::new(graph.clone(), Maintenance::Incremental);
    let erased = engine.run(picker)?;
    debug_assert!(engine.graph().is_tree());
    Ok(ErasureTrace::new(graph.clone(), erased))
}
