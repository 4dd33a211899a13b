//! Strategies read off derivations, and the harness that plays them.
//!
//! A machine strategy walks a ° proof from the root towards the leaves,
//! emitting the moves the rules call for. The counterstrategy does the same
//! for the environment over a refutation. Both keep their own record of the
//! run as a position of the formula they currently stand on, so that every
//! incoming move can be located in it.

mod adversary;
mod env;
mod exhaustive;
mod machine;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, Kind, OccPath, Player};
use crate::game::{GameTree, LabMove, Pos, Run};

pub use adversary::{adversary_family, Adversary, AdversaryKind};
pub use env::{env_from_refutation, falsifying_interpretation, post_hoc_falsify, EnvStrategy};
pub use exhaustive::{exhaustive_machine_wins, explore_machine, ExhaustiveReport};
pub use machine::{circ_proof, machine_from_proof, MachineStrategy};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("cannot build a strategy: {0}")]
    Setup(String),
    /// The opponent broke the rules; by the game's own terms it has lost.
    #[error("illegal opponent move {0}")]
    AdversaryIllegal(String),
    #[error("strategy invariant broken: {0}")]
    Invariant(String),
}

/// One reaction of a strategy: the rule (and case) it followed and the moves
/// it made.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub by: Player,
    pub rule: String,
    pub moves: Vec<String>,
}

/// Either side of a play.
pub trait Agent {
    /// Takes note of one move by the opponent.
    fn observe(&mut self, m: &str) -> Result<(), StrategyError>;
    /// Moves this side makes now, possibly none.
    fn act(&mut self, g: &GameTree, run: &[LabMove]) -> Vec<String>;
    fn drain_trace(&mut self) -> Vec<TraceStep> {
        Vec::new()
    }
    fn limit_formula(&self) -> Option<Formula> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlayResult {
    pub run: Run,
    pub winner: Player,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_formula: Option<Formula>,
    /// The first illegal move, if a side made one; its author lost.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forfeit: Option<LabMove>,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PlayError {
    #[error("no result after {} moves", .0.len())]
    Timeout(Run),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// The move budget used when none is given.
pub fn default_cap(g: &GameTree) -> usize {
    10 * g.node_count()
}

struct Table<'a> {
    g: &'a GameTree,
    pos: Pos,
    run: Run,
    trace: Vec<TraceStep>,
    forfeit: Option<LabMove>,
    cap: usize,
}

impl Table<'_> {
    /// Lets `mover` make its moves; returns whether it made any.
    fn turn(
        &mut self,
        by: Player,
        mover: &mut dyn Agent,
        watcher: &mut dyn Agent,
    ) -> Result<bool, PlayError> {
        let moves = mover.act(self.g, &self.run);
        self.trace.extend(mover.drain_trace());
        for m in &moves {
            if self.pos.apply(self.g, by, m).is_err() {
                self.forfeit = Some(LabMove::new(by, m.clone()));
                return Ok(true);
            }
            self.run.push(LabMove::new(by, m.clone()));
            watcher.observe(m)?;
            self.trace.extend(watcher.drain_trace());
            if self.run.len() > self.cap {
                return Err(PlayError::Timeout(self.run.clone()));
            }
        }
        Ok(!moves.is_empty())
    }
}

/// Plays the two sides against each other on `g`. The machine reacts first,
/// then the environment gets the floor, and so on, until a full round passes
/// with no moves.
pub fn play(
    g: &GameTree,
    machine: &mut dyn Agent,
    env: &mut dyn Agent,
    cap: usize,
) -> Result<PlayResult, PlayError> {
    let mut t =
        Table { g, pos: Pos::initial(g), run: Vec::new(), trace: Vec::new(), forfeit: None, cap };
    loop {
        let top_moved = t.turn(Player::Top, machine, env)?;
        if t.forfeit.is_some() {
            break;
        }
        let bottom_moved = t.turn(Player::Bottom, env, machine)?;
        if t.forfeit.is_some() || !(top_moved || bottom_moved) {
            break;
        }
    }
    let winner = match &t.forfeit {
        Some(lm) => lm.by.other(),
        None => t.pos.winner(g),
    };
    Ok(PlayResult {
        run: t.run,
        winner,
        limit_formula: env.limit_formula().or_else(|| machine.limit_formula()),
        forfeit: t.forfeit,
        trace: t.trace,
    })
}

/// The move prefix that reaches the node at `path` of `e`, for a player whose
/// switch count in every sequential node on the way equals its underline.
pub(crate) fn address(e: &Formula, path: &[usize]) -> Result<String, StrategyError> {
    let mut out = String::new();
    let mut node = e;
    for &i in path {
        match node {
            Formula::Par(..) => out.push_str(&format!("{}.", i + 1)),
            Formula::Seq(_, _, h) if i == *h => out.push('.'),
            other => {
                return Err(StrategyError::Invariant(format!(
                    "no move reaches component {} of {other}",
                    i + 1
                )))
            }
        }
        node = &node.children()[i];
    }
    Ok(out)
}

/// `e` with the choice at `path` resolved to its `index`-th (1-based) option.
pub(crate) fn resolve_choice(e: &Formula, path: &OccPath, kind: Kind, index: usize) -> Option<Formula> {
    crate::prover::rules::apply_choose(e, path, index, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Player};
    use crate::game::{interpret, Interpretation};
    use crate::prover::{decide, refute, to_circ, Decision, ProofNode, Refutation, RuleTag, System};

    fn proof(text: &str) -> ProofNode {
        match decide(&parse(text).unwrap(), System::Cl9).unwrap() {
            Decision::Provable(p) => p,
            Decision::Unprovable => panic!("{text} should be provable"),
        }
    }

    fn refutation(text: &str) -> ProofNode {
        match refute(&parse(text).unwrap()).unwrap() {
            Refutation::Refutable(r) => r,
            Refutation::Irrefutable => panic!("{text} should be refutable"),
        }
    }

    fn machine(text: &str) -> MachineStrategy {
        let p = proof(text);
        let i = Interpretation::default_for(&p.formula);
        MachineStrategy::trusting(to_circ(&p), &i, true).unwrap()
    }

    #[test]
    fn waiting_roots_make_no_moves() {
        let mut s = machine("(P + Q) -> (P |> Q)");
        assert!(s.take_moves().is_empty());
        assert_eq!(s.formula().to_string(), "((~P * ~Q) | (P |> Q))");
        let mut t = machine("p | ~p");
        assert!(t.take_moves().is_empty());
    }

    #[test]
    fn environment_choice_moves_the_cursor() {
        let mut s = machine("(P + Q) -> (P |> Q)");
        s.observe_move("1.1").unwrap();
        assert!(s.take_moves().is_empty());
        // the matched copy of P now sits on both sides
        let f = s.formula().to_string();
        assert!(f.starts_with("(~P_") && f.contains("|> Q)"), "{f}");
        assert!(s.omega().is_empty());
    }

    #[test]
    fn moves_in_a_matched_atom_are_mirrored() {
        let mut s = machine("(P + Q) -> (P |> Q)");
        s.observe_move("1.1").unwrap();
        // P is (T + F) * (F + T); its negation hands the first choice to the machine,
        // so the environment opens in the positive copy
        s.observe_move("2..1").unwrap();
        assert_eq!(s.take_moves(), ["1.1"]);
    }

    #[test]
    fn leading_switch_is_answered_in_kind() {
        let mut s = machine("(p &> q) -> (p &> q)");
        s.observe_move("2.§").unwrap();
        let moves = s.take_moves();
        assert_eq!(moves[0], "2.§", "{moves:?}");
    }

    #[test]
    fn example_with_choices_acts_after_switches() {
        let f = "(P & Q) | (~P &> ~R) | (~Q &> ~S) | (R + S)";
        let mut s = machine(f);
        assert!(s.take_moves().is_empty());
        let i = Interpretation::default_for(&parse(f).unwrap());
        assert!(exhaustive_machine_wins(&proof(f), &i));
        s.observe_move("2.§").unwrap();
        let reply = s.take_moves();
        assert!(reply.contains(&"2.§".to_string()), "{reply:?}");
    }

    #[test]
    fn exhaustive_wins_on_the_standard_family() {
        for text in ["(P + Q) -> (P |> Q)", "(P |> Q) -> (P | Q)", "T", "P | ~P", "(P * Q) -> (Q * P)"] {
            let p = proof(text);
            for i in Interpretation::standard_family(&p.formula) {
                let r = explore_machine(&p, &i).unwrap();
                assert!(r.all_won, "{text} under {i:?}: {r:?}");
            }
        }
    }

    #[test]
    fn corrupted_choice_loses() {
        let mut p = to_circ(&proof("(p * ~p) | (T + F)"));
        let mut flipped = false;
        fn flip(n: &mut ProofNode, done: &mut bool) {
            if n.rule == RuleTag::ChooseC && !*done {
                let i = n.detail.index.unwrap();
                n.detail.index = Some(if i == 1 { 2 } else { 1 });
                *done = true;
            }
            for q in &mut n.premises {
                flip(q, done);
            }
        }
        flip(&mut p, &mut flipped);
        assert!(flipped);
        let i = Interpretation::default_for(&p.formula);
        assert!(!exhaustive_machine_wins(&p, &i));
    }

    #[test]
    fn trivial_play() {
        let p = proof("T");
        let i = Interpretation::default_for(&p.formula);
        let g = interpret(&p.formula, &i).unwrap();
        let mut m = machine_from_proof(&p, &i).unwrap();
        let mut env = Adversary::greedy(Player::Bottom);
        let r = play(&g, &mut m, &mut env, default_cap(&g)).unwrap();
        assert_eq!(r.winner, Player::Top);
        assert!(r.run.is_empty());
    }

    #[test]
    fn counterstrategy_against_every_adversary() {
        for text in ["p |> ~p", "(p &> q) -> (q &> p)", "p + ~p", "(p * q) | ~q"] {
            let r = refutation(text);
            let f = parse(text).unwrap();
            for mut adv in adversary_family(Player::Top) {
                let i = Interpretation::default_for(&f);
                let g = interpret(&f, &i).unwrap();
                let mut env = env_from_refutation(&r, &i).unwrap();
                let res = play(&g, &mut adv, &mut env, default_cap(&g)).unwrap();
                let limit = res.limit_formula.clone().unwrap();
                assert!(!crate::formula::is_stable(&limit), "{text}: {limit}");
                let a = post_hoc_falsify(&limit).unwrap();
                let j = falsifying_interpretation(&f, &a);
                let w = crate::game::winner(&interpret(&f, &j).unwrap(), &res.run).unwrap();
                assert_eq!(w, Player::Bottom, "{text} vs {}: {:?}", adv.name(), res.run);
            }
        }
    }

    #[test]
    fn counterstrategy_answers_and_then_switches() {
        let r = refutation("(p &> q) -> (q &> p)");
        let i = Interpretation::default_for(&r.formula);
        let g = interpret(&r.formula, &i).unwrap();
        let mut env = env_from_refutation(&r, &i).unwrap();
        // the root waits: with no moves ~p | q is already false at p, ~q
        let quiet = play(&g, &mut Adversary::null(Player::Top), &mut env.clone(), 100).unwrap();
        assert!(quiet.run.is_empty());
        // once the machine leaves ~p, the environment catches up and then
        // leaves q behind
        let mut adv = Adversary::scripted(Player::Top, vec!["1.§".into()]);
        let res = play(&g, &mut adv, &mut env, 100).unwrap();
        assert_eq!(crate::game::format_run(&res.run), "T:1.§ B:1.§ B:2.§");
        let limit = res.limit_formula.unwrap();
        let j = falsifying_interpretation(&r.formula, &post_hoc_falsify(&limit).unwrap());
        assert_eq!(crate::game::winner(&interpret(&r.formula, &j).unwrap(), &res.run), Ok(Player::Bottom));
    }

    #[test]
    fn falsifying_assignments() {
        let a = post_hoc_falsify(&parse("p | q").unwrap()).unwrap();
        assert_eq!(a.get("p"), Some(&false));
        assert_eq!(a.get("q"), Some(&false));
        assert!(post_hoc_falsify(&parse("F").unwrap()).unwrap().is_empty());
        let b = post_hoc_falsify(&parse("~p | q").unwrap()).unwrap();
        assert_eq!((b["p"], b["q"]), (true, false));
        assert!(post_hoc_falsify(&parse("p | ~p").unwrap()).is_err());
    }

    #[test]
    fn scripted_illegal_move_forfeits() {
        let p = proof("(p &> q) -> (p &> q)");
        let i = Interpretation::default_for(&p.formula);
        let g = interpret(&p.formula, &i).unwrap();
        let mut m = machine_from_proof(&p, &i).unwrap();
        let mut env = Adversary::scripted(Player::Bottom, vec!["1.§".into()]);
        let r = play(&g, &mut m, &mut env, 50).unwrap();
        assert_eq!(r.forfeit, Some(LabMove::new(Player::Bottom, "1.§")));
        assert_eq!(r.winner, Player::Top);
    }
}
