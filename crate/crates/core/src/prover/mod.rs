//! Decision procedures with proof and refutation objects.
//!
//! `decide` searches bottom-up over the rules of the chosen system with a
//! memo table keyed by canonical text. Proofs are rebuilt from the memo once
//! provability is known. `check` re-derives every node independently.

mod check;
mod circ;
mod molecule;
pub mod rules;
mod search;

use serde::{Deserialize, Serialize};

use crate::formula::Formula;

pub use check::{check, CheckFailure};
pub use circ::{collapse, to_circ};
pub use molecule::{floor, lift, MoleculeMap};
pub use rules::{
    choose_expansions, match_expansions, switch_expansions, wait_premises, waitbar_premises,
    Family, RuleDetail, RuleTag,
};
pub use search::{
    check_preconditions, decide, decide_with_stats, measure, refute, Decision, PreconditionError,
    Refutation, SearchStats, System, MEMO_LIMIT,
};

/// A derivation node. Premises are listed in the order the rule produces them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub formula: Formula,
    pub rule: RuleTag,
    pub detail: RuleDetail,
    pub premises: Vec<ProofNode>,
}

/// Refutations share the proof shape and use the Bar rules.
pub type RefutationNode = ProofNode;

impl ProofNode {
    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::height).max().unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a ProofNode)) {
        f(self);
        for q in &self.premises {
            q.visit(f);
        }
    }

    pub fn count_rule(&self, tag: RuleTag) -> usize {
        let mut n = 0;
        self.visit(&mut |p| n += usize::from(p.rule == tag));
        n
    }
}
