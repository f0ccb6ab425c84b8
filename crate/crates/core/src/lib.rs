//! Exact multi-objective shortest-path search.
//!
//! [`namoa::solve_sequential`] is the single-threaded label-setting baseline;
//! [`opmos::solve_parallel`] runs the same search with a coordinator thread
//! that owns the OPEN queue and worker threads that process multi-pop bags.
//! Both return the cost-unique Pareto front between the graph's source and
//! goal. [`oracle`] enumerates fronts by brute force for verification.

pub mod graph;
pub mod namoa;
pub mod opmos;
pub mod oracle;
pub mod search;
pub mod stats;

pub use graph::{Graph, GraphError, NodeId};
pub use namoa::{solve_sequential, solve_sequential_with};
pub use opmos::{solve_parallel, ExecModel, LbPolicy, RunConfig};
pub use search::QueueKind;
pub use stats::{FrontEntry, IterationTrace, SolveResult, Stats};
