//! Undirected simple graphs over dense vertex ids.
//!
//! A [`Graph`] is a value: every operation that changes the edge set returns a
//! new graph. Neighbourhoods are stored as one bitset row per vertex, so
//! adjacency tests are O(1) and iteration is always in increasing id order.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by graph construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph size {0}: at least one vertex is required")]
    InvalidSize(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertices must be distinct, got {0} twice")]
    SameVertex(usize),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
    #[error("edge {0} is listed more than once")]
    DuplicateEdge(Edge),
}

/// An undirected edge in canonical form (`u < v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Builds the canonical edge between `a` and `b`, in either order.
    pub fn new(a: usize, b: usize) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    /// Smaller endpoint.
    pub fn u(self) -> usize {
        self.u
    }

    /// Larger endpoint.
    pub fn v(self) -> usize {
        self.v
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn contains(self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// Dense index of this edge among all pairs of a vertex set, in the
    /// order (0,1), (0,2), (1,2), (0,3), ...
    pub fn pair_index(self) -> usize {
        self.v * (self.v - 1) / 2 + self.u
    }

    /// Inverse of [`Edge::pair_index`].
    pub fn from_pair_index(index: usize) -> Edge {
        // largest v with v(v-1)/2 <= index
        let mut v = (((8 * index + 1) as f64).sqrt() as usize).div_ceil(2);
        while v * (v - 1) / 2 > index {
            v -= 1;
        }
        while (v + 1) * v / 2 <= index {
            v += 1;
        }
        Edge { u: index - v * (v - 1) / 2, v }
    }
}

impl TryFrom<(usize, usize)> for Edge {
    type Error = GraphError;

    fn try_from((a, b): (usize, usize)) -> Result<Self, Self::Error> {
        Edge::new(a, b)
    }
}

impl From<Edge> for (usize, usize) {
    fn from(e: Edge) -> Self {
        (e.u, e.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Number of unordered pairs of an `n`-element set.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An undirected simple graph on the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    edge_count: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting out-of-range endpoints and
    /// duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::new(n);
        for e in edges {
            g.check_vertex(e.v)?;
            if g.has_edge(e) {
                return Err(GraphError::DuplicateEdge(e));
            }
            g.insert_edge_in_place(e);
        }
        Ok(g)
    }

    /// Convenience constructor from raw pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| Edge::new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Graph::from_edges(n, edges)
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidSize(0));
        }
        let mut adj = Vec::with_capacity(n);
        for v in 0..n {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert_range(..);
            row.set(v, false);
            adj.push(row);
        }
        Ok(Graph {
            adj,
            edge_count: pair_count(n),
        })
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.insert_edge_in_place(Edge { u: v - 1, v });
        }
        g
    }

    /// The cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidSize(n));
        }
        let mut g = Graph::path(n);
        g.insert_edge_in_place(Edge { u: 0, v: n - 1 });
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count == pair_count(self.vertex_count())
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.adj.len(),
            })
        }
    }

    pub(crate) fn check_edge(&self, e: Edge) -> Result<(), GraphError> {
        self.check_vertex(e.v)?;
        if self.has_edge(e) {
            Ok(())
        } else {
            Err(GraphError::MissingEdge(e))
        }
    }

    /// Adjacency test; `false` for out-of-range endpoints.
    pub fn has_edge(&self, e: Edge) -> bool {
        e.v < self.adj.len() && self.adj[e.u].contains(e.v)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && a < self.adj.len() && b < self.adj.len() && self.adj[a].contains(b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    /// Neighbours of `v` in increasing order. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    /// Row of the adjacency matrix for `v`.
    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    /// `N(v)`, sorted.
    pub fn open_neighborhood(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adj[v].ones().collect())
    }

    /// `N[v] = N(v) ∪ {v}`, sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(v)?;
        let mut row = self.adj[v].clone();
        row.insert(v);
        Ok(row.ones().collect())
    }

    /// `N(a) ∩ N(b)` for distinct `a`, `b`; adjacency of `a` and `b` is not
    /// required.
    pub fn common_neighborhood(&self, a: usize, b: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(GraphError::SameVertex(a));
        }
        Ok(self.common_neighbor_set(a, b).ones().collect())
    }

    pub(crate) fn common_neighbor_set(&self, a: usize, b: usize) -> FixedBitSet {
        let mut set = self.adj[a].clone();
        set.intersect_with(&self.adj[b]);
        set
    }

    /// True iff every pair of distinct vertices in `set` is adjacent. The
    /// empty set and singletons are cliques.
    pub fn is_clique(&self, set: &[usize]) -> Result<bool, GraphError> {
        for &v in set {
            self.check_vertex(v)?;
        }
        Ok(set
            .iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a == b || self.adj[a].contains(b))))
    }

    /// Clique test on a bitset of vertices.
    pub(crate) fn is_clique_set(&self, set: &FixedBitSet) -> bool {
        let size = set.count_ones(..);
        set.ones()
            .all(|s| self.adj[s].intersection_count(set) + 1 == size)
    }

    /// Induced subgraph on `vertices` (duplicates ignored). Vertex `i` of the
    /// result is `map[i]` in `self`; `map` is sorted.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let mut map: Vec<usize> = vertices.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut sub = Graph::new(map.len());
        for (i, &a) in map.iter().enumerate() {
            for (j, &b) in map.iter().enumerate().skip(i + 1) {
                if self.adj[a].contains(b) {
                    sub.insert_edge_in_place(Edge { u: i, v: j });
                }
            }
        }
        Ok((sub, map))
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| Edge { u, v }))
    }

    /// Copy of `self` without `e`.
    pub fn without_edge(&self, e: Edge) -> Result<Graph, GraphError> {
        self.check_edge(e)?;
        let mut g = self.clone();
        g.remove_edge_in_place(e);
        Ok(g)
    }

    /// Copy of `self` with `e` added.
    pub fn with_edge(&self, e: Edge) -> Result<Graph, GraphError> {
        self.check_vertex(e.v)?;
        if self.has_edge(e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        let mut g = self.clone();
        g.insert_edge_in_place(e);
        Ok(g)
    }

    pub(crate) fn insert_edge_in_place(&mut self, e: Edge) {
        if !self.adj[e.u].put(e.v) {
            self.adj[e.v].insert(e.u);
            self.edge_count += 1;
        }
    }

    pub(crate) fn remove_edge_in_place(&mut self, e: Edge) {
        if self.adj[e.u].contains(e.v) {
            self.adj[e.u].set(e.v, false);
            self.adj[e.v].set(e.u, false);
            self.edge_count -= 1;
        }
    }

    /// Connected components, each sorted, listed by increasing minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen.put(start) {
                continue;
            }
            let mut component = vec![start];
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for y in self.adj[x].ones() {
                    if !seen.put(y) {
                        component.push(y);
                        queue.push_back(y);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Reachability-based connectivity; the empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.reachable_from(0, None).count_ones(..) == self.vertex_count()
    }

    /// Vertices reachable from `start`, optionally ignoring one edge.
    pub(crate) fn reachable_from(&self, start: usize, skip: Option<Edge>) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.vertex_count());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.adj[x].ones() {
                if skip.is_some_and(|e| e == Edge::new(x, y).expect("x != y")) {
                    continue;
                }
                if !seen.put(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// True iff `e` is a cut-edge, i.e. lies on no cycle.
    pub fn is_bridge(&self, e: Edge) -> Result<bool, GraphError> {
        self.check_edge(e)?;
        Ok(!self.reachable_from(e.u, Some(e)).contains(e.v))
    }

    /// True iff the graph is connected and has `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0 && self.edge_count + 1 == self.vertex_count() && self.is_connected()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().map(Edge::endpoints).collect::<Vec<_>>())
            .finish()
    }
}
