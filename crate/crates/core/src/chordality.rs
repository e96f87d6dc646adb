//! Chordal graph recognition.
//!
//! Recognition runs maximum cardinality search (lowest id wins ties) and then
//! checks the reversed visit order as a perfect elimination ordering. A graph
//! is chordal exactly when that check passes.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChordalityError {
    #[error("ordering is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },
    #[error("density {0} is outside [0, 1]")]
    InvalidDensity(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A vertex ordering `v_1, ..., v_k`; position 0 is eliminated first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EliminationOrdering(Vec<usize>);

impl EliminationOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self, ChordalityError> {
        let n = order.len();
        let mut seen = FixedBitSet::with_capacity(n);
        for &v in &order {
            if v >= n || seen.put(v) {
                return Err(ChordalityError::NotAPermutation { n });
            }
        }
        Ok(EliminationOrdering(order))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[v]` is the index of `v` in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// The suffix graph `G[{v_i, ..., v_k}]` together with its id map.
    pub fn suffix_graph(&self, graph: &Graph, i: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        graph.induced_subgraph(&self.0[i.min(self.0.len())..])
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

/// True iff the neighbourhood of `v` is a clique.
pub fn is_simplicial(graph: &Graph, v: usize) -> Result<bool, GraphError> {
    graph.check_vertex(v)?;
    Ok(graph.is_clique_set(graph.neighbor_set(v)))
}

/// All simplicial vertices in increasing order.
pub fn simplicial_vertices(graph: &Graph) -> Vec<usize> {
    graph
        .vertices()
        .filter(|&v| graph.is_clique_set(graph.neighbor_set(v)))
        .collect()
}

/// Maximum cardinality search. Returns the reverse of the visit order, which
/// is a perfect elimination ordering whenever the graph is chordal.
///
/// Ties between unvisited vertices of equal weight go to the lowest id, so the
/// output is a pure function of the graph.
pub fn maximum_cardinality_search(graph: &Graph) -> EliminationOrdering {
    let n = graph.vertex_count();
    let mut weight = vec![0usize; n];
    let mut visited = FixedBitSet::with_capacity(n);
    // buckets[w] holds unvisited vertices with weight w
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n.max(1)];
    buckets[0].extend(0..n);
    let mut top = 0;
    let mut visit_order = Vec::with_capacity(n);
    for _ in 0..n {
        while buckets[top].is_empty() {
            top -= 1;
        }
        let v = buckets[top].pop_first().expect("non-empty bucket");
        visited.insert(v);
        visit_order.push(v);
        for w in graph.neighbors(v) {
            if visited.contains(w) {
                continue;
            }
            buckets[weight[w]].remove(&w);
            weight[w] += 1;
            buckets[weight[w]].insert(w);
            top = top.max(weight[w]);
        }
    }
    visit_order.reverse();
    EliminationOrdering(visit_order)
}

fn check_ordering(graph: &Graph, ordering: &EliminationOrdering) -> Result<(), ChordalityError> {
    if ordering.len() != graph.vertex_count() {
        return Err(ChordalityError::NotAPermutation {
            n: graph.vertex_count(),
        });
    }
    Ok(())
}

/// Checks that every vertex is simplicial in the graph induced by itself and
/// the vertices after it.
///
/// Uses the successor test: for each vertex, its later neighbours minus the
/// earliest of them must all be adjacent to that earliest one.
pub fn is_perfect_elimination_ordering(
    graph: &Graph,
    ordering: &EliminationOrdering,
) -> Result<bool, ChordalityError> {
    Ok(first_peo_violation(graph, ordering)?.is_none())
}

/// Index of the first vertex of `ordering` that fails the successor test.
pub fn first_peo_violation(
    graph: &Graph,
    ordering: &EliminationOrdering,
) -> Result<Option<usize>, ChordalityError> {
    check_ordering(graph, ordering)?;
    let pos = ordering.positions();
    let mut remaining = FixedBitSet::with_capacity(graph.vertex_count());
    remaining.insert_range(..);
    for (i, &v) in ordering.as_slice().iter().enumerate() {
        remaining.set(v, false);
        let mut later = graph.neighbor_set(v).clone();
        later.intersect_with(&remaining);
        let Some(parent) = later.ones().min_by_key(|&w| pos[w]) else {
            continue;
        };
        later.set(parent, false);
        if !later.is_subset(graph.neighbor_set(parent)) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The definitional check: materializes each suffix graph and tests the
/// first vertex for simpliciality. Quadratic; kept as a cross-check for
/// [`is_perfect_elimination_ordering`].
pub fn is_perfect_elimination_ordering_naive(
    graph: &Graph,
    ordering: &EliminationOrdering,
) -> Result<bool, ChordalityError> {
    check_ordering(graph, ordering)?;
    for i in 0..ordering.len() {
        let (suffix, _) = ordering.suffix_graph(graph, i)?;
        // the suffix map is sorted, so locate v_i inside it
        let v = ordering.as_slice()[i];
        let local = ordering.as_slice()[i..].iter().filter(|&&w| w < v).count();
        if !is_simplicial(&suffix, local)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_chordal(graph: &Graph) -> bool {
    let ordering = maximum_cardinality_search(graph);
    is_perfect_elimination_ordering(graph, &ordering).expect("search returns a permutation")
}

/// Random connected chordal graph on `n` vertices.
///
/// Vertices are inserted one at a time (in a random label order), each joined
/// to a nonempty clique of the graph built so far. The clique grows greedily
/// from a random anchor up to `1 + floor(density * (i - 1))` vertices, where
/// `i` is the number of vertices already present: density 0 gives trees and
/// density 1 gives `K_n`.
pub fn random_connected_chordal_graph(
    n: usize,
    density: f64,
    seed: u64,
) -> Result<Graph, ChordalityError> {
    if n == 0 {
        return Err(GraphError::InvalidSize(0).into());
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(ChordalityError::InvalidDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut graph = Graph::new(n);
    for i in 1..n {
        let target = 1 + (density * (i - 1) as f64).floor() as usize;
        let anchor = labels[rng.random_range(0..i)];
        let mut clique = vec![anchor];
        let mut candidates: Vec<usize> = graph.neighbors(anchor).collect();
        candidates.shuffle(&mut rng);
        for c in candidates {
            if clique.len() >= target {
                break;
            }
            if clique.iter().all(|&k| graph.adjacent(k, c)) {
                clique.push(c);
            }
        }
        let new = labels[i];
        for k in clique {
            graph.insert_edge_in_place(Edge::new(new, k)?);
        }
    }
    assert!(
        is_chordal(&graph) && graph.is_connected(),
        "generator produced a graph that fails certification"
    );
    Ok(graph)
}
