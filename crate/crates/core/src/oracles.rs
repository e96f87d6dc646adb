//! Brute-force reference implementations.
//!
//! Nothing here calls into the production algorithms: each oracle builds its
//! own adjacency matrix from the graph's edge list and works from the
//! definitions directly. They are exponential and guarded by size limits.

use std::env;

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};
use crate::weighted::{MetricSpace, Rational, SpanningTree};

/// Environment variable overriding [`OracleLimits::max_vertices`].
pub const MAX_VERTICES_ENV: &str = "ERASURE_ORACLE_MAX_N";
/// Environment variable overriding [`OracleLimits::max_tree_vertices`].
pub const MAX_TREE_VERTICES_ENV: &str = "ERASURE_ORACLE_MAX_TREE_N";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle limit exceeded: {n} vertices, limit {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Bound for clique enumeration and induced-cycle search.
    pub max_vertices: usize,
    /// Bound for spanning-tree enumeration.
    pub max_tree_vertices: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 16,
            max_tree_vertices: 9,
        }
    }
}

impl OracleLimits {
    /// Defaults, overridden by [`MAX_VERTICES_ENV`] and
    /// [`MAX_TREE_VERTICES_ENV`] when they parse as integers.
    pub fn from_env() -> Self {
        let read = |key: &str, default: usize| {
            env::var(key)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        let d = OracleLimits::default();
        OracleLimits {
            max_vertices: read(MAX_VERTICES_ENV, d.max_vertices),
            max_tree_vertices: read(MAX_TREE_VERTICES_ENV, d.max_tree_vertices),
        }
    }

    fn check(&self, n: usize) -> Result<(), OracleError> {
        if n > self.max_vertices {
            Err(OracleError::SizeLimitExceeded { n, limit: self.max_vertices })
        } else {
            Ok(())
        }
    }

    fn check_trees(&self, n: usize) -> Result<(), OracleError> {
        if n > self.max_tree_vertices {
            Err(OracleError::SizeLimitExceeded { n, limit: self.max_tree_vertices })
        } else {
            Ok(())
        }
    }
}

struct Matrix {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Matrix {
    fn of(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let mut adj = vec![vec![false; n]; n];
        for e in graph.edges() {
            let (a, b) = e.endpoints();
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Matrix { n, adj }
    }
}

fn bron_kerbosch(m: &Matrix, r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() && x.is_empty() {
        let mut clique = r.clone();
        clique.sort_unstable();
        out.push(clique);
        return;
    }
    let mut p = p;
    let mut x = x;
    while let Some(v) = p.pop() {
        let np = p.iter().copied().filter(|&w| m.adj[v][w]).collect();
        let nx = x.iter().copied().filter(|&w| m.adj[v][w]).collect();
        r.push(v);
        bron_kerbosch(m, r, np, nx, out);
        r.pop();
        x.push(v);
    }
}

/// All inclusion-maximal cliques (isolated vertices included), each sorted,
/// listed in lexicographic order.
pub fn enumerate_maximal_cliques(graph: &Graph) -> Result<Vec<Vec<usize>>, OracleError> {
    enumerate_maximal_cliques_with(graph, &OracleLimits::default())
}

pub fn enumerate_maximal_cliques_with(graph: &Graph, limits: &OracleLimits) -> Result<Vec<Vec<usize>>, OracleError> {
    limits.check(graph.vertex_count())?;
    let m = Matrix::of(graph);
    let mut out = Vec::new();
    bron_kerbosch(&m, &mut Vec::new(), (0..m.n).collect(), Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// Edge membership in maximal cliques, from the definition: exposed iff the
/// edge lies in exactly one maximal clique and that clique is not the edge
/// itself.
pub fn naive_exposed(graph: &Graph, e: Edge) -> Result<bool, OracleError> {
    let containing = cliques_containing(graph, e)?;
    Ok(containing.len() == 1 && containing[0].len() >= 3)
}

/// True iff `{u, v}` is itself a maximal clique.
pub fn naive_facet(graph: &Graph, e: Edge) -> Result<bool, OracleError> {
    let containing = cliques_containing(graph, e)?;
    Ok(containing.len() == 1 && containing[0].len() == 2)
}

fn cliques_containing(graph: &Graph, e: Edge) -> Result<Vec<Vec<usize>>, OracleError> {
    if !graph.has_edge(e) {
        return Err(GraphError::MissingEdge(e).into());
    }
    let (a, b) = e.endpoints();
    Ok(enumerate_maximal_cliques(graph)?
        .into_iter()
        .filter(|c| c.contains(&a) && c.contains(&b))
        .collect())
}

/// An induced cycle of length at least four, if one exists. The search runs
/// over vertex subsets by increasing size, so the cycle is a shortest one;
/// it starts at its smallest vertex and continues to the smaller neighbour.
pub fn find_induced_cycle(graph: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
    find_induced_cycle_with(graph, &OracleLimits::default())
}

pub fn find_induced_cycle_with(graph: &Graph, limits: &OracleLimits) -> Result<Option<Vec<usize>>, OracleError> {
    limits.check(graph.vertex_count())?;
    if graph.vertex_count() >= 32 {
        return Err(OracleError::SizeLimitExceeded { n: graph.vertex_count(), limit: 31 });
    }
    let m = Matrix::of(graph);
    let mut masks: Vec<u32> = (0u32..(1u32 << m.n)).filter(|s| s.count_ones() >= 4).collect();
    masks.sort_by_key(|s| (s.count_ones(), std::cmp::Reverse(s.reverse_bits())));
    for mask in masks {
        let members: Vec<usize> = (0..m.n).filter(|&v| mask >> v & 1 == 1).collect();
        if let Some(cycle) = induced_cycle_on(&m, &members) {
            return Ok(Some(cycle));
        }
    }
    Ok(None)
}

/// If `members` induce a single cycle, returns it in walk order.
fn induced_cycle_on(m: &Matrix, members: &[usize]) -> Option<Vec<usize>> {
    let inner = |v: usize| -> Vec<usize> { members.iter().copied().filter(|&w| m.adj[v][w]).collect() };
    if members.iter().any(|&v| inner(v).len() != 2) {
        return None;
    }
    // every degree is 2; it is one cycle iff walking from the first vertex
    // visits everything
    let start = members[0];
    let mut walk = vec![start];
    let mut prev = start;
    let mut cur = inner(start)[0];
    while cur != start {
        walk.push(cur);
        let next = inner(cur).into_iter().find(|&w| w != prev)?;
        prev = cur;
        cur = next;
    }
    (walk.len() == members.len()).then_some(walk)
}

/// Chordality from the definition: no induced cycle of length four or more.
pub fn brute_force_chordal(graph: &Graph) -> Result<bool, OracleError> {
    Ok(find_induced_cycle(graph)?.is_none())
}

struct Forest(Vec<usize>);

impl Forest {
    fn new(n: usize) -> Self {
        Forest((0..n).collect())
    }

    fn root(&self, mut x: usize) -> usize {
        while self.0[x] != x {
            x = self.0[x];
        }
        x
    }

    fn join(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

struct TreeSearch<'a> {
    n: usize,
    edges: Vec<(Edge, &'a Rational)>,
    best: Option<Rational>,
    found: Vec<Vec<Edge>>,
    keep_ties: bool,
}

impl TreeSearch<'_> {
    fn connectable(&self, forest: &[usize], from: usize) -> bool {
        let mut f = Forest(forest.to_vec());
        let mut parts = (0..self.n).filter(|&v| f.root(v) == v).count();
        for &(e, _) in &self.edges[from..] {
            if f.join(e.u(), e.v()) {
                parts -= 1;
            }
        }
        parts == 1
    }

    fn run(&mut self, index: usize, forest: Forest, chosen: &mut Vec<Edge>, weight: Rational) {
        if chosen.len() + 1 == self.n {
            match &self.best {
                Some(b) if &weight > b => {}
                Some(b) if &weight == b => {
                    if self.keep_ties {
                        self.found.push(chosen.clone());
                    }
                }
                _ => {
                    self.best = Some(weight);
                    self.found.clear();
                    self.found.push(chosen.clone());
                }
            }
            return;
        }
        if index == self.edges.len() {
            return;
        }
        let (e, w) = self.edges[index];
        if let Some(b) = &self.best {
            // every completion uses edges at least as heavy as this one
            let needed = Rational::from_integer((self.n - 1 - chosen.len()) as i64);
            let bound = weight.clone() + needed * w.clone();
            if &bound > b || (!self.keep_ties && &bound == b) {
                return;
            }
        }
        let mut with = Forest(forest.0.clone());
        if with.join(e.u(), e.v()) {
            chosen.push(e);
            self.run(index + 1, with, chosen, &weight + w);
            chosen.pop();
        }
        if self.connectable(&forest.0, index + 1) {
            self.run(index + 1, forest, chosen, weight);
        }
    }
}

fn search_trees(metric: &MetricSpace, keep_ties: bool) -> (Option<Rational>, Vec<Vec<Edge>>) {
    let n = metric.point_count();
    let mut edges: Vec<(Edge, &Rational)> = Vec::new();
    for v in 1..n {
        for u in 0..v {
            let e = Edge::new(u, v).expect("u < v");
            edges.push((e, metric.weight(e)));
        }
    }
    edges.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
    let mut search = TreeSearch {
        n,
        edges,
        best: None,
        found: Vec::new(),
        keep_ties,
    };
    if n == 1 {
        return (Some(Rational::zero()), vec![Vec::new()]);
    }
    search.run(0, Forest::new(n), &mut Vec::new(), Rational::zero());
    (search.best, search.found)
}

/// Every minimum-weight spanning tree, found by include/exclude search over
/// the pairs with a weight bound. Sorted canonically.
pub fn enumerate_all_msts(metric: &MetricSpace) -> Result<Vec<SpanningTree>, OracleError> {
    enumerate_all_msts_with(metric, &OracleLimits::default())
}

pub fn enumerate_all_msts_with(metric: &MetricSpace, limits: &OracleLimits) -> Result<Vec<SpanningTree>, OracleError> {
    limits.check_trees(metric.point_count())?;
    let (_, found) = search_trees(metric, true);
    let mut trees: Vec<SpanningTree> = found
        .into_iter()
        .map(|edges| SpanningTree::new(metric, edges).expect("search yields spanning trees"))
        .collect();
    trees.sort_by(|a, b| a.edges().cmp(b.edges()));
    Ok(trees)
}

/// Minimum spanning-tree weight by the same search, without collecting ties.
pub fn minimum_spanning_weight(metric: &MetricSpace) -> Result<Rational, OracleError> {
    minimum_spanning_weight_with(metric, &OracleLimits::default())
}

pub fn minimum_spanning_weight_with(metric: &MetricSpace, limits: &OracleLimits) -> Result<Rational, OracleError> {
    limits.check_trees(metric.point_count())?;
    Ok(search_trees(metric, false).0.expect("complete graphs have spanning trees"))
}
