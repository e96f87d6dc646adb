use std::collections::BTreeSet;

use crate::erasure::{verify_trace, ErasureEngine, ErasureTrace, Maintenance, Picker, TraceFault, TraceVerdict};
use crate::exposure::{class_of, exposed_cycle_unchecked, EdgeClass};
use crate::graph::{Edge, Graph};

use super::{MetricMode, MetricSpace, Rational, WeightedError};

/// A spanning tree of a metric space together with its exact weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanningTree {
    edges: Vec<Edge>,
    weight: Rational,
}

impl SpanningTree {
    /// Checks that `edges` span the points of `metric` without cycles.
    pub fn new(metric: &MetricSpace, edges: impl IntoIterator<Item = Edge>) -> Result<Self, WeightedError> {
        let n = metric.point_count();
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        let graph = Graph::from_edges(n, edges.iter().copied()).map_err(|_| WeightedError::NotSpanningTree)?;
        if !graph.is_tree() {
            return Err(WeightedError::NotSpanningTree);
        }
        let weight = metric.total_weight(&edges);
        Ok(SpanningTree { edges, weight })
    }

    fn from_tree_graph(metric: &MetricSpace, graph: &Graph) -> Self {
        debug_assert!(graph.is_tree());
        let edges: Vec<Edge> = graph.edges().collect();
        let weight = metric.total_weight(&edges);
        SpanningTree { edges, weight }
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn to_graph(&self, n: usize) -> Graph {
        Graph::from_edges(n, self.edges.iter().copied()).expect("validated on construction")
    }
}

/// Picks the heaviest exposed edge by weight rank; ties go to the
/// lexicographically smallest edge.
#[derive(Debug, Clone)]
pub(crate) struct HeaviestExposed {
    ranks: Vec<u32>,
}

impl HeaviestExposed {
    pub(crate) fn new(metric: &MetricSpace) -> Self {
        HeaviestExposed { ranks: metric.ranks() }
    }

    fn rank(&self, e: Edge) -> u32 {
        self.ranks[e.pair_index()]
    }

    fn heaviest(&self, exposed: &BTreeSet<Edge>) -> Option<Edge> {
        let mut best: Option<(u32, Edge)> = None;
        for &e in exposed {
            let r = self.rank(e);
            if best.is_none_or(|(top, _)| r > top) {
                best = Some((r, e));
            }
        }
        best.map(|(_, e)| e)
    }
}

impl Picker for HeaviestExposed {
    fn pick(&mut self, _graph: &Graph, exposed: &BTreeSet<Edge>) -> Option<Edge> {
        self.heaviest(exposed)
    }
}

/// A complete d-erasure run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DErasureRun {
    pub tree: SpanningTree,
    pub trace: ErasureTrace,
    /// Size of the exposed set just before each erasure.
    pub exposed_counts: Vec<usize>,
}

impl DErasureRun {
    /// Weight of each erased edge, in erasure order.
    pub fn erased_weights<'a>(&'a self, metric: &'a MetricSpace) -> impl Iterator<Item = &'a Rational> + 'a {
        self.trace.erased().iter().map(|&e| metric.weight(e))
    }
}

fn check_sizes(metric: &MetricSpace, graph: &Graph) -> Result<(), WeightedError> {
    if metric.point_count() != graph.vertex_count() {
        return Err(WeightedError::VertexCountMismatch {
            graph: graph.vertex_count(),
            metric: metric.point_count(),
        });
    }
    Ok(())
}

/// One d-erasure: removes a heaviest exposed edge of `graph`, the
/// lexicographically smallest among equal weights. Classifies every edge
/// from scratch.
pub fn d_erasure_step(metric: &MetricSpace, graph: &Graph) -> Result<(Graph, Edge), WeightedError> {
    check_sizes(metric, graph)?;
    let mut best: Option<Edge> = None;
    for e in graph.edges() {
        if class_of(graph, e) != EdgeClass::Exposed {
            continue;
        }
        if best.is_none_or(|b| metric.weight(e) > metric.weight(b)) {
            best = Some(e);
        }
    }
    let e = best.ok_or(WeightedError::NoExposedEdge)?;
    Ok((graph.without_edge(e)?, e))
}

/// Runs d-erasures from the complete graph until no exposed edge remains.
pub fn d_erasure_run(metric: &MetricSpace, maintenance: Maintenance) -> DErasureRun {
    let initial = metric.complete_graph();
    let mut engine = ErasureEngine::new(initial.clone(), maintenance);
    let picker = HeaviestExposed::new(metric);
    let mut erased = Vec::new();
    let mut exposed_counts = Vec::new();
    while let Some(e) = picker.heaviest(engine.exposed()) {
        exposed_counts.push(engine.exposed().len());
        engine.erase(e).expect("picked from the exposed set");
        erased.push(e);
    }
    let tree = SpanningTree::from_tree_graph(metric, engine.graph());
    DErasureRun {
        tree,
        trace: ErasureTrace::new(initial, erased),
        exposed_counts,
    }
}

/// A maximal sequence of d-erasures from the complete graph; the surviving
/// edges form a minimum spanning tree.
pub fn d_erasure_mst(metric: &MetricSpace) -> (SpanningTree, ErasureTrace) {
    let run = d_erasure_run(metric, Maintenance::Incremental);
    (run.tree, run.trace)
}

/// Kruskal's second algorithm: repeatedly delete a heaviest edge whose
/// removal keeps the graph connected (lexicographic tie-break). Returns the
/// tree and the deleted edges in order.
pub fn reverse_delete_mst(metric: &MetricSpace) -> (SpanningTree, Vec<Edge>) {
    let mut graph = metric.complete_graph();
    let mut order: Vec<(Edge, &Rational)> = metric.pairs().collect();
    // heaviest first, then lexicographic
    order.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(&b.0)));
    let mut removed = Vec::new();
    // a bridge stays a bridge as edges are deleted, so one pass suffices
    for (e, _) in order {
        if !graph.is_bridge(e).expect("edge present") {
            graph.remove_edge_in_place(e);
            removed.push(e);
        }
    }
    (SpanningTree::from_tree_graph(metric, &graph), removed)
}

/// Cycle-property test: every non-tree pair weighs at least as much as each
/// tree edge on the tree path between its endpoints.
pub fn is_minimum_spanning_tree(metric: &MetricSpace, tree: &SpanningTree) -> bool {
    let n = metric.point_count();
    if tree.edges.len() + 1 != n {
        return false;
    }
    let ranks = metric.ranks();
    let rank = |e: Edge| ranks[e.pair_index()];
    let graph = tree.to_graph(n);
    for x in 0..n {
        // heaviest rank on the tree path from x to each vertex
        let mut path_max = vec![None::<u32>; n];
        path_max[x] = Some(0);
        let mut stack = vec![x];
        while let Some(a) = stack.pop() {
            for b in graph.neighbors(a) {
                if path_max[b].is_none() {
                    let r = rank(Edge::new(a, b).expect("tree edge"));
                    path_max[b] = Some(path_max[a].expect("visited").max(r));
                    stack.push(b);
                }
            }
        }
        for (y, max) in path_max.iter().enumerate().skip(x + 1) {
            let e = Edge::new(x, y).expect("x < y");
            if !tree.contains(e) && rank(e) < max.expect("tree spans") {
                return false;
            }
        }
    }
    true
}

/// A maximal d-erasure sequence from the complete graph that ends exactly at
/// the minimum spanning tree `target`.
///
/// At each step a heaviest exposed edge outside `target` is erased. When all
/// heaviest exposed edges lie in `target`, the exposed cycle through the
/// first of them is searched for an equal-weight exposed edge crossing the
/// cut that tree edge defines in `target`.
pub fn d_erasure_toward(metric: &MetricSpace, target: &SpanningTree) -> Result<ErasureTrace, WeightedError> {
    let n = metric.point_count();
    if !is_minimum_spanning_tree(metric, target) {
        return Err(WeightedError::NotMinimum);
    }
    let ranks = metric.ranks();
    let rank = |e: Edge| ranks[e.pair_index()];
    let tree_graph = target.to_graph(n);
    let initial = metric.complete_graph();
    let mut engine = ErasureEngine::new(initial.clone(), Maintenance::Incremental);
    let mut erased = Vec::new();
    while let Some(top) = engine.exposed().iter().map(|&e| rank(e)).max() {
        let step = erased.len();
        let heaviest: Vec<Edge> = engine.exposed().iter().copied().filter(|&e| rank(e) == top).collect();
        let choice = match heaviest.iter().copied().find(|&e| !target.contains(e)) {
            Some(e) => e,
            None => {
                let xy = heaviest[0];
                let cycle = exposed_cycle_unchecked(engine.graph(), xy)?;
                let side = tree_graph.reachable_from(xy.u(), Some(xy));
                cycle
                    .edges()
                    .filter(|&zw| zw != xy && side.contains(zw.u()) != side.contains(zw.v()))
                    .filter(|&zw| rank(zw) == top && !target.contains(zw))
                    .filter(|zw| engine.exposed().contains(zw))
                    .min()
                    .ok_or(WeightedError::InternalContradiction { step })?
            }
        };
        engine.erase(choice)?;
        erased.push(choice);
    }
    if engine.graph() != &tree_graph {
        return Err(WeightedError::InternalContradiction { step: erased.len() });
    }
    Ok(ErasureTrace::new(initial, erased))
}

/// Checks that `trace` is a valid erasure trace in which every erased edge
/// was a heaviest exposed edge at its step.
pub fn verify_d_erasure_trace(metric: &MetricSpace, trace: &ErasureTrace) -> Result<TraceVerdict, WeightedError> {
    check_sizes(metric, trace.initial())?;
    let verdict = verify_trace(trace);
    if !verdict.is_valid() {
        return Ok(verdict);
    }
    let picker = HeaviestExposed::new(metric);
    let mut engine = ErasureEngine::new(trace.initial().clone(), Maintenance::Incremental);
    for (step, &e) in trace.erased().iter().enumerate() {
        let heaviest = picker.heaviest(engine.exposed()).expect("valid trace step has an exposed edge");
        if picker.rank(heaviest) > picker.rank(e) {
            return Ok(TraceVerdict::Invalid {
                step,
                fault: TraceFault::NotHeaviest { erased: e, heavier: heaviest },
            });
        }
        engine.erase(e)?;
    }
    Ok(TraceVerdict::Valid)
}

/// Weights that turn an erasure trace from `K_n` into a d-erasure trace:
/// pairs surviving to the final graph get 1, and the `j`-th erased edge gets
/// `2 - j * eps`.
///
/// With `m` erasures, `eps` must satisfy `0 < eps < 1/(m-1)` when `m >= 2`,
/// and `0 < eps <= 1` otherwise. All weights then lie in `[1, 2]`, so the
/// triangle inequality holds.
pub fn metric_from_erasure_trace(trace: &ErasureTrace, eps: &Rational) -> Result<MetricSpace, WeightedError> {
    if let TraceVerdict::Invalid { step, fault } = verify_trace(trace) {
        return Err(WeightedError::InvalidTrace { step, fault });
    }
    if !trace.initial().is_complete() {
        return Err(WeightedError::InitialNotComplete);
    }
    let m = trace.len();
    let in_range = eps.is_positive()
        && if m >= 2 {
            eps < &Rational::new(1, m as i64 - 1)
        } else {
            eps <= &Rational::one()
        };
    if !in_range {
        return Err(WeightedError::EpsilonOutOfRange { eps: eps.clone(), m });
    }
    let n = trace.initial().vertex_count();
    let two = Rational::from_integer(2);
    let mut weights = vec![Rational::one(); n * n.saturating_sub(1) / 2];
    for (j, &e) in trace.erased().iter().enumerate() {
        weights[e.pair_index()] = two.clone() - Rational::from_integer(j as i64) * eps.clone();
    }
    MetricSpace::from_weights(n, weights, MetricMode::Strict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exposure::classify_edges;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn l1_square() -> MetricSpace {
        MetricSpace::from_fn(4, MetricMode::Strict, |x| if x.v() - x.u() == 2 { int(2) } else { int(1) }).unwrap()
    }

    #[test]
    fn square_steps() {
        let m = l1_square();
        let k4 = m.complete_graph();
        let (g1, first) = d_erasure_step(&m, &k4).unwrap();
        assert_eq!(first, e(0, 2));
        assert_eq!(classify_edges(&g1)[&e(1, 3)], EdgeClass::Shared);
        let (_, second) = d_erasure_step(&m, &g1).unwrap();
        assert_eq!(m.weight(second), &int(1));
        assert_ne!(second, e(1, 3));
    }

    #[test]
    fn uniform_triangle_step() {
        let m = MetricSpace::uniform(3, int(1)).unwrap();
        let (_, erased) = d_erasure_step(&m, &m.complete_graph()).unwrap();
        assert_eq!(erased, e(0, 1));
    }

    #[test]
    fn step_errors() {
        let m = MetricSpace::uniform(3, int(1)).unwrap();
        assert_eq!(d_erasure_step(&m, &Graph::path(3)), Err(WeightedError::NoExposedEdge));
        assert_eq!(
            d_erasure_step(&m, &Graph::path(4)),
            Err(WeightedError::VertexCountMismatch { graph: 4, metric: 3 })
        );
    }

    #[test]
    fn square_mst() {
        let m = l1_square();
        let (tree, trace) = d_erasure_mst(&m);
        assert_eq!(tree.weight(), &int(3));
        assert_eq!(trace.erased(), &[e(0, 2), e(0, 1), e(1, 3)]);
        let (tree, removed) = reverse_delete_mst(&m);
        assert_eq!(tree.weight(), &int(3));
        assert_eq!(removed, vec![e(0, 2), e(1, 3), e(0, 1)]);
    }

    #[test]
    fn tiny_metrics() {
        let m = MetricSpace::uniform(2, Rational::new(5, 2)).unwrap();
        let (tree, trace) = d_erasure_mst(&m);
        assert_eq!(tree.edges(), &[e(0, 1)]);
        assert_eq!(tree.weight(), &Rational::new(5, 2));
        assert!(trace.is_empty());
        let m = MetricSpace::uniform(1, int(1)).unwrap();
        assert!(d_erasure_mst(&m).0.edges().is_empty());
        for n in 2..7 {
            let m = MetricSpace::uniform(n, int(3)).unwrap();
            assert_eq!(d_erasure_mst(&m).0.weight(), &int(3 * (n as i64 - 1)));
        }
    }

    #[test]
    fn full_and_incremental_runs_match() {
        let m = MetricSpace::from_fn(7, MetricMode::Strict, |x| Rational::new(10 + ((x.u() * 7 + x.v() * 3) % 5) as i64, 10))
            .unwrap();
        assert_eq!(d_erasure_run(&m, Maintenance::Incremental), d_erasure_run(&m, Maintenance::Full));
        // and the single-step reference reproduces the same trace
        let run = d_erasure_run(&m, Maintenance::Incremental);
        let mut g = m.complete_graph();
        for &expected in run.trace.erased() {
            let (next, erased) = d_erasure_step(&m, &g).unwrap();
            assert_eq!(erased, expected);
            g = next;
        }
        assert_eq!(d_erasure_step(&m, &g), Err(WeightedError::NoExposedEdge));
    }

    #[test]
    fn toward_targets() {
        let m = l1_square();
        let target = SpanningTree::new(&m, [e(0, 1), e(1, 2), e(2, 3)]).unwrap();
        let trace = d_erasure_toward(&m, &target).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.final_graph(), target.to_graph(4));
        assert!(verify_d_erasure_trace(&m, &trace).unwrap().is_valid());

        let m2 = MetricSpace::uniform(2, int(1)).unwrap();
        let single = SpanningTree::new(&m2, [e(0, 1)]).unwrap();
        assert!(d_erasure_toward(&m2, &single).unwrap().is_empty());

        let uniform = MetricSpace::uniform(4, int(1)).unwrap();
        let star = SpanningTree::new(&uniform, [e(0, 1), e(0, 2), e(0, 3)]).unwrap();
        let trace = d_erasure_toward(&uniform, &star).unwrap();
        assert_eq!(trace.final_graph(), star.to_graph(4));
        assert!(verify_d_erasure_trace(&uniform, &trace).unwrap().is_valid());

        let heavy = SpanningTree::new(&m, [e(0, 2), e(1, 2), e(2, 3)]).unwrap();
        assert_eq!(d_erasure_toward(&m, &heavy), Err(WeightedError::NotMinimum));
    }

    #[test]
    fn spanning_tree_validation() {
        let m = l1_square();
        assert_eq!(SpanningTree::new(&m, [e(0, 1), e(1, 2)]), Err(WeightedError::NotSpanningTree));
        assert_eq!(
            SpanningTree::new(&m, [e(0, 1), e(1, 2), e(0, 2)]),
            Err(WeightedError::NotSpanningTree)
        );
    }

    #[test]
    fn d_trace_verification_catches_light_erasures() {
        let m = l1_square();
        let trace = ErasureTrace::new(m.complete_graph(), vec![e(0, 1)]);
        assert_eq!(
            verify_d_erasure_trace(&m, &trace).unwrap(),
            TraceVerdict::Invalid {
                step: 0,
                fault: TraceFault::NotHeaviest { erased: e(0, 1), heavier: e(0, 2) }
            }
        );
    }

    #[test]
    fn metric_from_trace_examples() {
        let k3 = Graph::complete(3).unwrap();
        let t1 = ErasureTrace::new(k3, vec![e(0, 1)]);
        let m = metric_from_erasure_trace(&t1, &Rational::new(1, 2)).unwrap();
        assert_eq!(m.weight(e(0, 1)), &int(2));
        assert_eq!(m.weight(e(0, 2)), &int(1));
        assert_eq!(m.weight(e(1, 2)), &int(1));

        let t3 = ErasureTrace::new(Graph::complete(4).unwrap(), vec![e(0, 1), e(0, 2), e(2, 3)]);
        assert!(verify_trace(&t3).is_valid());
        let m = metric_from_erasure_trace(&t3, &Rational::new(1, 4)).unwrap();
        assert_eq!(m.weight(e(0, 1)), &int(2));
        assert_eq!(m.weight(e(0, 2)), &Rational::new(7, 4));
        assert_eq!(m.weight(e(2, 3)), &Rational::new(3, 2));
        for x in [e(0, 3), e(1, 2), e(1, 3)] {
            assert_eq!(m.weight(x), &int(1));
        }

        let empty = ErasureTrace::new(Graph::complete(4).unwrap(), vec![]);
        let m = metric_from_erasure_trace(&empty, &Rational::one()).unwrap();
        assert!(m.weights().iter().all(|w| *w == int(1)));
    }

    #[test]
    fn metric_from_trace_rejects_bad_input() {
        let t3 = ErasureTrace::new(Graph::complete(4).unwrap(), vec![e(0, 1), e(0, 2), e(2, 3)]);
        assert!(matches!(
            metric_from_erasure_trace(&t3, &Rational::new(1, 2)),
            Err(WeightedError::EpsilonOutOfRange { m: 3, .. })
        ));
        assert!(matches!(
            metric_from_erasure_trace(&t3, &Rational::zero()),
            Err(WeightedError::EpsilonOutOfRange { .. })
        ));
        let bad = ErasureTrace::new(Graph::path(3), vec![e(0, 1)]);
        assert!(matches!(
            metric_from_erasure_trace(&bad, &Rational::new(1, 2)),
            Err(WeightedError::InvalidTrace { step: 0, .. })
        ));
        let tree = ErasureTrace::new(Graph::path(3), vec![]);
        assert_eq!(
            metric_from_erasure_trace(&tree, &Rational::new(1, 2)),
            Err(WeightedError::InitialNotComplete)
        );
    }
}
