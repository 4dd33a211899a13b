//! Finite constant games: legality, winners, runs and manageability.

mod engine;
mod manage;
mod run;
mod tree;

pub use engine::{
    finalize, legal, legal_moves, outcome, replay, winner, Legality, Pos, Trace, TraceEnd,
};
pub use manage::{land, manageability_violation, manageable, Landing};
pub use run::{
    degree, format_run, is_delay, parse_run, project, swap_labels, LabMove, Run, SWITCH,
};
pub use tree::{interpret, GameTree, Interpretation, DEFAULT_TREE, STANDARD_TREES};
