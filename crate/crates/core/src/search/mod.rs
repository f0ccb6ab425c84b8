//! Labels, dominance, frontier sets and the OPEN queue shared by both solvers.

pub mod cost;
pub mod frontier;
pub mod label;
pub mod queue;

pub use cost::{dominates, lex_cmp, lex_less, weakly_dominates};
pub use frontier::{FrontierStore, LabelSet};
pub use label::{AtomicFlags, Label, LabelArena, LabelFlags, LabelId};
pub use queue::{OpenQueue, QueueKind};
