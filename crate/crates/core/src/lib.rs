//! Exposed-edge erasures on graphs.
//!
//! An edge is *exposed* when it lies in exactly one maximal clique and that
//! clique has at least three vertices. Deleting exposed edges one at a time
//! starting from a complete graph reaches precisely the connected chordal
//! graphs, and doing so greedily by weight on a finite metric space ends at a
//! minimum spanning tree. This crate provides:
//!
//! * [`graph`]: value-semantic simple graphs with neighbourhood queries;
//! * [`chordality`]: maximum cardinality search and elimination orderings;
//! * [`exposure`]: facet / exposed / shared edge classes and exposed cycles;
//! * [`erasure`]: erasure traces, the incremental erasure engine, and
//!   sequences from the complete graph;
//! * [`weighted`]: exact rational metrics, d-erasure and reverse-delete;
//! * [`oracles`]: brute-force reference implementations for testing;
//! * [`io`] and [`dot`]: JSON documents and Graphviz export;
//! * [`batch`]: seeded trial runner, parallel when the `parallel` feature is on.

pub mod batch;
pub mod chordality;
pub mod dot;
pub mod erasure;
pub mod exposure;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod weighted;

pub use chordality::{is_chordal, maximum_cardinality_search, EliminationOrdering};
pub use erasure::{erase, ErasureEngine, ErasureError, ErasureTrace, Maintenance};
pub use exposure::{classify_edges, exposed_edges, is_exposed, Cycle, EdgeClass};
pub use graph::{Edge, Graph, GraphError};
pub use weighted::{MetricSpace, Rational, SpanningTree};
