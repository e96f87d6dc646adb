//! Finite metric spaces with exact rational weights, and minimum spanning
//! trees by d-erasure and by reverse-delete.

mod metric;
mod mst;
mod rational;

use thiserror::Error;

use crate::erasure::{ErasureError, TraceFault};
use crate::exposure::CycleError;
use crate::graph::{Edge, GraphError};

pub use metric::{validate_metric, MetricMode, MetricSpace, MetricVerdict};
pub use mst::{
    d_erasure_mst, d_erasure_run, d_erasure_step, d_erasure_toward, is_minimum_spanning_tree,
    metric_from_erasure_trace, reverse_delete_mst, verify_d_erasure_trace, DErasureRun,
    SpanningTree,
};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightedError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("expected {expected} pair weights, found {found}")]
    WrongPairCount { expected: usize, found: usize },
    #[error("weight of {0} is not positive")]
    NonPositiveWeight(Edge),
    #[error("triangle inequality fails: d({x},{y}) > d({x},{via}) + d({via},{y})")]
    TriangleViolation { x: usize, y: usize, via: usize },
    #[error("graph has {graph} vertices but the metric has {metric} points")]
    VertexCountMismatch { graph: usize, metric: usize },
    #[error("graph has no exposed edge")]
    NoExposedEdge,
    #[error("edges do not form a spanning tree")]
    NotSpanningTree,
    #[error("tree is not a minimum spanning tree")]
    NotMinimum,
    #[error("no equal-weight exposed edge outside the target tree at step {step}")]
    InternalContradiction { step: usize },
    #[error("invalid trace at step {step}: {fault}")]
    InvalidTrace { step: usize, fault: TraceFault },
    #[error("trace must start from a complete graph")]
    InitialNotComplete,
    #[error("epsilon {eps} is outside the admissible range for {m} erasures")]
    EpsilonOutOfRange { eps: Rational, m: usize },
    #[error(transparent)]
    Erasure(#[from] ErasureError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
