use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Agent, StrategyError};
use crate::formula::Player;
use crate::game::{legal_moves, GameTree, LabMove, SWITCH};

#[derive(Clone, Debug)]
pub enum AdversaryKind {
    /// Never moves.
    Null,
    /// A uniformly random legal move, or a pass one time in four.
    Random(ChaCha8Rng),
    /// The first legal choice move, else the first switch.
    GreedyChoice,
    /// Fixed moves, one per turn, legal or not.
    Scripted(Vec<String>),
}

/// A scripted or randomized opponent that does not look at any derivation.
#[derive(Clone, Debug)]
pub struct Adversary {
    pub role: Player,
    pub kind: AdversaryKind,
    name: String,
}

impl Adversary {
    pub fn null(role: Player) -> Self {
        Adversary { role, kind: AdversaryKind::Null, name: "null".into() }
    }

    pub fn random(role: Player, seed: u64) -> Self {
        Adversary {
            role,
            kind: AdversaryKind::Random(ChaCha8Rng::seed_from_u64(seed)),
            name: format!("random:{seed}"),
        }
    }

    pub fn greedy(role: Player) -> Self {
        Adversary { role, kind: AdversaryKind::GreedyChoice, name: "greedy".into() }
    }

    pub fn scripted(role: Player, moves: Vec<String>) -> Self {
        let mut moves = moves;
        moves.reverse();
        Adversary { role, kind: AdversaryKind::Scripted(moves), name: "scripted".into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Null, ten seeded random players and the greedy chooser.
pub fn adversary_family(role: Player) -> Vec<Adversary> {
    let mut out = vec![Adversary::null(role)];
    out.extend((1..=10).map(|seed| Adversary::random(role, seed)));
    out.push(Adversary::greedy(role));
    out
}

impl Agent for Adversary {
    fn observe(&mut self, _m: &str) -> Result<(), StrategyError> {
        Ok(())
    }

    fn act(&mut self, g: &GameTree, run: &[LabMove]) -> Vec<String> {
        let legal = || legal_moves(g, run, self.role).unwrap_or_default();
        match &mut self.kind {
            AdversaryKind::Null => Vec::new(),
            AdversaryKind::Random(rng) => {
                let options = legal();
                if options.is_empty() || rng.gen_bool(0.25) {
                    return Vec::new();
                }
                vec![options.choose(rng).unwrap().clone()]
            }
            AdversaryKind::GreedyChoice => {
                let options = legal();
                let choice = options.iter().find(|m| !m.ends_with(SWITCH));
                choice.or(options.first()).cloned().into_iter().collect()
            }
            AdversaryKind::Scripted(rest) => rest.pop().into_iter().collect(),
        }
    }
}
