use std::collections::HashSet;

use serde::Serialize;

use super::{circ_proof, MachineStrategy, StrategyError};
use crate::formula::Player;
use crate::game::{Interpretation, LabMove, Pos, Run};
use crate::prover::ProofNode;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExhaustiveReport {
    /// Distinct quiet states visited.
    pub states: usize,
    pub all_won: bool,
    /// A run the machine does not win, or on which its strategy failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Run>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

struct Explorer {
    seen: HashSet<(Vec<usize>, Pos)>,
    report: ExhaustiveReport,
}

impl Explorer {
    /// Whether the machine wins however the environment continues from the
    /// quiet state `s`.
    fn explore(&mut self, s: &MachineStrategy) -> bool {
        if !self.seen.insert((s.cursor().to_vec(), s.global_position().clone())) {
            return true;
        }
        self.report.states += 1;
        // the environment may stop here
        if s.global_position().winner(s.game()) != Player::Top {
            self.report.counterexample = Some(s.run().to_vec());
            return false;
        }
        for m in s.global_position().legal_moves(s.game(), Player::Bottom) {
            let mut next = s.clone();
            if let Err(e) = next.observe_move(&m) {
                let mut run = s.run().to_vec();
                run.push(LabMove::new(Player::Bottom, m));
                self.report.counterexample = Some(run);
                self.report.failure = Some(e.to_string());
                return false;
            }
            next.take_moves();
            if !self.explore(&next) {
                return false;
            }
        }
        true
    }
}

/// Plays the strategy of `p` against every environment behaviour under `i`,
/// re-checking manageability after each reaction. States are merged on
/// (proof node, game position), on which the strategy's future depends.
pub fn explore_machine(p: &ProofNode, i: &Interpretation) -> Result<ExhaustiveReport, StrategyError> {
    explore_trusting(circ_proof(p)?, i)
}

pub(crate) fn explore_trusting(p: ProofNode, i: &Interpretation) -> Result<ExhaustiveReport, StrategyError> {
    let mut ex = Explorer { seen: HashSet::new(), report: ExhaustiveReport::default() };
    match MachineStrategy::trusting(p, i, true) {
        Ok(mut s) => {
            s.take_moves();
            ex.report.all_won = ex.explore(&s);
        }
        Err(e) => {
            ex.report.failure = Some(e.to_string());
            ex.report.counterexample = Some(Vec::new());
        }
    }
    Ok(ex.report)
}

/// True iff the machine wins every play against every environment. The proof
/// itself is not checked, so a corrupted proof simply loses.
pub fn exhaustive_machine_wins(p: &ProofNode, i: &Interpretation) -> bool {
    let circ = match p.rule.family() {
        crate::prover::Family::Plain => crate::prover::to_circ(p),
        _ => p.clone(),
    };
    matches!(explore_trusting(circ, i), Ok(r) if r.all_won)
}
