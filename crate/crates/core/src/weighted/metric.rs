use std::collections::BTreeSet;

use crate::graph::{pair_count, Edge, Graph};

use super::{Rational, WeightedError};

/// Whether a [`MetricSpace`] constructor enforces the triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricMode {
    #[default]
    Strict,
    /// Only positivity is enforced.
    Raw,
}

/// Result of a triangle-inequality scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricVerdict {
    Ok,
    /// `d(x, y) > d(x, via) + d(via, y)`.
    Violation { x: usize, y: usize, via: usize },
}

/// Positive weights on all pairs of `0..n`, stored once per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    n: usize,
    weights: Vec<Rational>,
}

impl MetricSpace {
    /// Builds a space from weights listed in pair-index order
    /// (see [`Edge::pair_index`]).
    pub fn from_weights(n: usize, weights: Vec<Rational>, mode: MetricMode) -> Result<Self, WeightedError> {
        if n == 0 {
            return Err(WeightedError::Empty);
        }
        if weights.len() != pair_count(n) {
            return Err(WeightedError::WrongPairCount {
                expected: pair_count(n),
                found: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(WeightedError::NonPositiveWeight(Edge::from_pair_index(i)));
        }
        let space = MetricSpace { n, weights };
        if mode == MetricMode::Strict {
            if let MetricVerdict::Violation { x, y, via } = validate_metric(&space) {
                return Err(WeightedError::TriangleViolation { x, y, via });
            }
        }
        Ok(space)
    }

    pub fn from_fn<F>(n: usize, mode: MetricMode, mut f: F) -> Result<Self, WeightedError>
    where
        F: FnMut(Edge) -> Rational,
    {
        let weights = (0..pair_count(n)).map(|i| f(Edge::from_pair_index(i))).collect();
        MetricSpace::from_weights(n, weights, mode)
    }

    /// Every pair at distance `c`.
    pub fn uniform(n: usize, c: Rational) -> Result<Self, WeightedError> {
        MetricSpace::from_fn(n, MetricMode::Strict, |_| c.clone())
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn weight(&self, e: Edge) -> &Rational {
        &self.weights[e.pair_index()]
    }

    /// `d(x, y)` for distinct points.
    pub fn distance(&self, x: usize, y: usize) -> Option<&Rational> {
        let e = Edge::new(x, y).ok()?;
        (e.v() < self.n).then(|| self.weight(e))
    }

    /// Weights in pair-index order.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// All pairs with their weights, lexicographically.
    pub fn pairs(&self) -> impl Iterator<Item = (Edge, &Rational)> + '_ {
        complete_edges(self.n).map(move |e| (e, self.weight(e)))
    }

    /// Dense weight ranks in pair-index order: equal weights share a rank and
    /// heavier pairs get larger ranks.
    pub fn ranks(&self) -> Vec<u32> {
        let distinct: BTreeSet<&Rational> = self.weights.iter().collect();
        let sorted: Vec<&Rational> = distinct.into_iter().collect();
        self.weights
            .iter()
            .map(|w| sorted.binary_search(&w).expect("weight present") as u32)
            .collect()
    }

    pub fn total_weight<'a, I>(&self, edges: I) -> Rational
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        edges.into_iter().map(|&e| self.weight(e)).sum()
    }

    pub fn complete_graph(&self) -> Graph {
        Graph::complete(self.n).expect("n >= 1")
    }
}

fn complete_edges(n: usize) -> impl Iterator<Item = Edge> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| Edge::new(u, v).expect("u < v")))
}

/// Exact triangle-inequality scan over all triples. Reports the first
/// violation in the order `(x, y)` lexicographic, then `via` ascending.
pub fn validate_metric(space: &MetricSpace) -> MetricVerdict {
    let n = space.point_count();
    for x in 0..n {
        for y in x + 1..n {
            let direct = space.weight(Edge::new(x, y).expect("x < y"));
            for via in (0..n).filter(|&z| z != x && z != y) {
                let a = space.distance(x, via).expect("in range");
                let b = space.distance(via, y).expect("in range");
                if direct > &(a + b) {
                    return MetricVerdict::Violation { x, y, via };
                }
            }
        }
    }
    MetricVerdict::Ok
}
