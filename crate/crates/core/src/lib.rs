//! Computability logic with sequential operators: formulas, decision
//! procedures with proof objects, a finite game engine, and strategies
//! extracted from proofs and refutations.

pub mod corpus;
pub mod fo;
pub mod formula;
pub mod fuzz;
pub mod game;
pub mod prover;
pub mod strategy;

pub use formula::{parse, parse_fo, Formula, Kind, Player};
