//! Test-input generators: exhaustive graph enumeration, seeded random graphs
//! and seeded random metric spaces.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{pair_count, Edge, Graph};
use crate::oracles;
use crate::weighted::{MetricMode, MetricSpace, Rational};

pub use crate::chordality::random_connected_chordal_graph;

/// Derives the seed of trial `index` from a base seed (SplitMix64 finalizer),
/// so trials can run in any order and still see the same inputs.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The graph on `n` vertices whose edge set is the bitmask `mask` over pair
/// indices.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let edges = (0..pair_count(n))
        .filter(|&i| mask >> i & 1 == 1)
        .map(Edge::from_pair_index);
    Graph::from_edges(n, edges).expect("pair indices are in range")
}

/// Every labelled graph on `n` vertices (`2^(n(n-1)/2)` of them); `n <= 11`.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 11, "too many graphs to enumerate");
    (0..1u64 << pair_count(n)).map(move |mask| graph_from_mask(n, mask))
}

/// Erdős–Rényi graph: each pair present with probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let edges: Vec<Edge> = (0..pair_count(n))
        .filter(|_| r.random_bool(p.clamp(0.0, 1.0)))
        .map(Edge::from_pair_index)
        .collect();
    Graph::from_edges(n, edges).expect("pair indices are in range")
}

/// A random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut g = Graph::new(n);
    for i in 1..n {
        let parent = order[r.random_range(0..i)];
        g.insert_edge_in_place(Edge::new(order[i], parent).expect("distinct"));
    }
    for i in 0..pair_count(n) {
        let e = Edge::from_pair_index(i);
        if !g.has_edge(e) && r.random_bool(p.clamp(0.0, 1.0)) {
            g.insert_edge_in_place(e);
        }
    }
    g
}

/// A random connected graph that the brute-force oracle certifies as not
/// chordal. Requires `4 <= n <= 16`.
pub fn random_connected_nonchordal_graph(n: usize, seed: u64) -> Graph {
    assert!((4..=16).contains(&n), "need 4..=16 vertices");
    let mut r = rng(seed);
    loop {
        let p = r.random_range(0.05..0.6);
        let g = random_connected_graph(n, p, r.random());
        if !oracles::brute_force_chordal(&g).expect("within oracle bound") {
            return g;
        }
    }
}

/// Families of random metric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Rationals in `[1, 2]` with denominators up to 1000; any such weights
    /// satisfy the triangle inequality.
    Generic,
    /// Integers in `1..=4`, closed under shortest paths. Many ties.
    TieHeavy,
    /// l1 distances between distinct integer grid points.
    L1Grid,
    /// Integers in `1..=10` with no triangle-inequality repair.
    Raw,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Generic,
        MetricKind::TieHeavy,
        MetricKind::L1Grid,
        MetricKind::Raw,
    ];
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Generic => "generic",
            MetricKind::TieHeavy => "tie-heavy",
            MetricKind::L1Grid => "l1-grid",
            MetricKind::Raw => "raw",
        })
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown metric kind {s:?}"))
    }
}

/// A seeded random metric space of the given kind (`n >= 1`).
pub fn random_metric(n: usize, kind: MetricKind, seed: u64) -> MetricSpace {
    let mut r = rng(seed);
    let pairs = pair_count(n);
    match kind {
        MetricKind::Generic => {
            let weights = (0..pairs)
                .map(|_| {
                    let q: i64 = r.random_range(1..=1000);
                    let p: i64 = r.random_range(q..=2 * q);
                    Rational::new(p, q)
                })
                .collect();
            MetricSpace::from_weights(n, weights, MetricMode::Strict).expect("weights in [1, 2]")
        }
        MetricKind::TieHeavy => {
            let mut d = vec![vec![0i64; n]; n];
            for i in 0..pairs {
                let e = Edge::from_pair_index(i);
                let w = r.random_range(1..=4);
                d[e.u()][e.v()] = w;
                d[e.v()][e.u()] = w;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if d[i][k] + d[k][j] < d[i][j] {
                            d[i][j] = d[i][k] + d[k][j];
                        }
                    }
                }
            }
            MetricSpace::from_fn(n, MetricMode::Strict, |e| Rational::from_integer(d[e.u()][e.v()]))
                .expect("shortest-path closure is a metric")
        }
        MetricKind::L1Grid => {
            let side = ((n as f64).sqrt().ceil() as i64).max(2) + 2;
            let mut cells: Vec<(i64, i64)> = (0..side).flat_map(|x| (0..side).map(move |y| (x, y))).collect();
            cells.shuffle(&mut r);
            let points = &cells[..n];
            MetricSpace::from_fn(n, MetricMode::Strict, |e| {
                let (a, b) = (points[e.u()], points[e.v()]);
                Rational::from_integer((a.0 - b.0).abs() + (a.1 - b.1).abs())
            })
            .expect("l1 distances between distinct points")
        }
        MetricKind::Raw => {
            let weights = (0..pairs).map(|_| Rational::from_integer(r.random_range(1..=10))).collect();
            MetricSpace::from_weights(n, weights, MetricMode::Raw).expect("positive weights")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordality::is_chordal;
    use crate::weighted::{validate_metric, MetricVerdict};

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_graphs(4).count(), 64);
        assert_eq!(all_graphs(1).count(), 1);
        assert_eq!(graph_from_mask(3, 0b111), Graph::complete(3).unwrap());
    }

    #[test]
    fn seeds_are_reproducible_and_spread() {
        assert_eq!(trial_seed(7, 3), trial_seed(7, 3));
        assert_ne!(trial_seed(7, 3), trial_seed(7, 4));
        assert_ne!(trial_seed(7, 3), trial_seed(8, 3));
        assert_eq!(random_graph(9, 0.4, 5), random_graph(9, 0.4, 5));
    }

    #[test]
    fn connected_generators() {
        for seed in 0..20 {
            assert!(random_connected_graph(8, 0.2, seed).is_connected());
            let g = random_connected_nonchordal_graph(7, seed);
            assert!(g.is_connected() && !is_chordal(&g));
        }
    }

    #[test]
    fn metric_kinds() {
        for kind in MetricKind::ALL {
            assert_eq!(kind.to_string().parse::<MetricKind>().unwrap(), kind);
            for seed in 0..10 {
                let m = random_metric(7, kind, seed);
                assert_eq!(m.point_count(), 7);
                if kind != MetricKind::Raw {
                    assert_eq!(validate_metric(&m), MetricVerdict::Ok);
                }
            }
        }
    }
}
