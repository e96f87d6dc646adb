//! Edge classification and cycles of exposed edges.
//!
//! Every edge `uv` falls into exactly one class, decided by the common
//! neighbourhood `C = N(u) ∩ N(v)`:
//!
//! * facet: `C` is empty, so `{u, v}` is itself a maximal clique;
//! * exposed: `C` is a nonempty clique, so `uv` lies in exactly one maximal
//!   clique and that clique is larger than the edge;
//! * shared: `C` is not a clique, so `uv` lies in two or more maximal cliques.
//!
//! Exposed edges are weaker than Dragan's simplicial edges, which would ask
//! for the union of the two neighbourhoods instead of the intersection.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordality::is_chordal;
use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    Facet,
    Exposed,
    Shared,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClass::Facet => "facet",
            EdgeClass::Exposed => "exposed",
            EdgeClass::Shared => "shared",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("graph is not chordal")]
    NotChordal,
    #[error("edge {edge} is {class}, not exposed")]
    NotExposed { edge: Edge, class: EdgeClass },
    #[error("no cycle of exposed edges through {0}")]
    NoCycle(Edge),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A closed walk `v_0, v_1, ..., v_{k-1}` on distinct vertices, `k >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Edges `(v_i, v_{i+1 mod k})` in walk order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| Edge::new(self.0[i], self.0[(i + 1) % k]).expect("distinct vertices"))
    }

    /// True iff the vertices are distinct, there are at least three, and
    /// every consecutive pair is an edge of `graph`.
    pub fn is_valid_in(&self, graph: &Graph) -> bool {
        let distinct: BTreeSet<_> = self.0.iter().collect();
        self.0.len() >= 3
            && distinct.len() == self.0.len()
            && self.0.iter().all(|&v| v < graph.vertex_count())
            && self.edges().all(|e| graph.has_edge(e))
    }
}

/// Classification of an edge known to be present.
pub(crate) fn class_of(graph: &Graph, e: Edge) -> EdgeClass {
    let common = graph.common_neighbor_set(e.u(), e.v());
    class_from_common(graph, &common)
}

fn class_from_common(graph: &Graph, common: &FixedBitSet) -> EdgeClass {
    if common.is_clear() {
        EdgeClass::Facet
    } else if graph.is_clique_set(common) {
        EdgeClass::Exposed
    } else {
        EdgeClass::Shared
    }
}

pub fn classify_edge(graph: &Graph, e: Edge) -> Result<EdgeClass, GraphError> {
    graph.check_edge(e)?;
    Ok(class_of(graph, e))
}

/// True iff the endpoints have no common neighbour.
pub fn is_facet_edge(graph: &Graph, e: Edge) -> Result<bool, GraphError> {
    Ok(classify_edge(graph, e)? == EdgeClass::Facet)
}

/// True iff the common neighbourhood of the endpoints is a nonempty clique.
pub fn is_exposed(graph: &Graph, e: Edge) -> Result<bool, GraphError> {
    Ok(classify_edge(graph, e)? == EdgeClass::Exposed)
}

/// Class of every edge, keyed in lexicographic edge order.
pub fn classify_edges(graph: &Graph) -> BTreeMap<Edge, EdgeClass> {
    graph.edges().map(|e| (e, class_of(graph, e))).collect()
}

pub fn exposed_edges(graph: &Graph) -> BTreeSet<Edge> {
    graph
        .edges()
        .filter(|&e| class_of(graph, e) == EdgeClass::Exposed)
        .collect()
}

/// Checks that every bridge is a facet edge and, for chordal graphs, that
/// every facet edge is a bridge.
pub fn is_bridge_equiv_facet_check(graph: &Graph) -> bool {
    let chordal = is_chordal(graph);
    graph.edges().all(|e| {
        let bridge = graph.is_bridge(e).expect("edge from graph");
        let facet = class_of(graph, e) == EdgeClass::Facet;
        (!bridge || facet) && (!chordal || !facet || bridge)
    })
}

/// Number of exposed edges incident on `v`.
pub fn incident_exposed_count(graph: &Graph, v: usize) -> Result<usize, GraphError> {
    graph.check_vertex(v)?;
    Ok(graph
        .neighbors(v)
        .filter(|&w| class_of(graph, Edge::new(v, w).expect("no loops")) == EdgeClass::Exposed)
        .count())
}

/// A cycle through `e` made only of exposed edges of a chordal graph.
///
/// Breadth-first search from `e.v()` to `e.u()` in the subgraph of exposed
/// edges with `e` removed, scanning neighbours in increasing id order. The
/// result starts `u, v, ...` and is a shortest such cycle.
pub fn exposed_cycle(graph: &Graph, e: Edge) -> Result<Cycle, CycleError> {
    graph.check_edge(e)?;
    if !is_chordal(graph) {
        return Err(CycleError::NotChordal);
    }
    exposed_cycle_unchecked(graph, e)
}

/// [`exposed_cycle`] without the chordality precondition.
pub fn exposed_cycle_unchecked(graph: &Graph, e: Edge) -> Result<Cycle, CycleError> {
    graph.check_edge(e)?;
    let class = class_of(graph, e);
    if class != EdgeClass::Exposed {
        return Err(CycleError::NotExposed { edge: e, class });
    }
    let (target, source) = e.endpoints();
    let n = graph.vertex_count();
    let mut parent = vec![usize::MAX; n];
    parent[source] = source;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            break;
        }
        for y in graph.neighbors(x) {
            if parent[y] != usize::MAX {
                continue;
            }
            let edge = Edge::new(x, y).expect("no loops");
            if edge == e || class_of(graph, edge) != EdgeClass::Exposed {
                continue;
            }
            parent[y] = x;
            queue.push_back(y);
        }
    }
    if parent[target] == usize::MAX {
        return Err(CycleError::NoCycle(e));
    }
    // walk back from u to v, giving u, ..., v; the cycle reads u, v, ..., back to u
    let mut path = vec![target];
    let mut x = target;
    while x != source {
        x = parent[x];
        path.push(x);
    }
    // path = [u, p_k, ..., p_1, v]; rotate to [u, v, p_1, ..., p_k]
    let mut vertices = Vec::with_capacity(path.len());
    vertices.push(target);
    vertices.extend(path[1..].iter().rev());
    Ok(Cycle(vertices))
}
