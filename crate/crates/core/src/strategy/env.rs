use std::collections::BTreeMap;
use std::sync::Arc;

use super::{address, resolve_choice, Agent, StrategyError, TraceStep};
use crate::formula::taut::{falsifying_assignment, Assignment};
use crate::formula::{classify_occurrences, elementarize, Formula, Kind, Player};
use crate::game::{interpret, land, replay, GameTree, Interpretation, LabMove, Landing, Legality, Pos, Run, SWITCH};
use crate::prover::rules::{apply_switch, Family};
use crate::prover::{check, RefutationNode, RuleTag};

/// The environment's counterstrategy for a refutation. Mirrors the machine
/// strategy with the roles swapped; elementary-base formulas have no moves
/// inside atoms, so there is nothing to copy.
#[derive(Clone, Debug)]
pub struct EnvStrategy {
    root: Arc<RefutationNode>,
    cursor: Vec<usize>,
    interp: Arc<Interpretation>,
    game: Arc<GameTree>,
    pos: Pos,
    omega: Run,
    global_game: Arc<GameTree>,
    global_pos: Pos,
    outbox: Vec<String>,
    trace: Vec<TraceStep>,
}

pub fn env_from_refutation(r: &RefutationNode, i: &Interpretation) -> Result<EnvStrategy, StrategyError> {
    check(r).map_err(|e| StrategyError::Setup(e.to_string()))?;
    if r.rule.family() != Family::Bar {
        return Err(StrategyError::Setup("a proof is not a refutation".into()));
    }
    let interp = i.completed_for(&r.formula);
    let global_game = Arc::new(interpret(&r.formula, &interp).map_err(StrategyError::Setup)?);
    let mut s = EnvStrategy {
        root: Arc::new(r.clone()),
        cursor: Vec::new(),
        interp: Arc::new(interp),
        pos: Pos::initial(&global_game),
        global_pos: Pos::initial(&global_game),
        game: global_game.clone(),
        global_game,
        omega: Vec::new(),
        outbox: Vec::new(),
        trace: Vec::new(),
    };
    s.settle()?;
    Ok(s)
}

fn err(msg: impl Into<String>) -> StrategyError {
    StrategyError::Invariant(msg.into())
}

impl EnvStrategy {
    fn node(&self) -> &RefutationNode {
        let mut n: &RefutationNode = &self.root;
        for &i in &self.cursor {
            n = &n.premises[i];
        }
        n
    }

    pub fn formula(&self) -> &Formula {
        &self.node().formula
    }

    pub fn cursor(&self) -> &[usize] {
        &self.cursor
    }

    pub fn take_moves(&mut self) -> Vec<String> {
        std::mem::take(&mut self.outbox)
    }

    fn descend(&mut self, premise: usize) -> Result<(), StrategyError> {
        self.cursor.push(premise);
        self.game = Arc::new(interpret(self.formula(), &self.interp).map_err(err)?);
        match replay(&self.game, &self.omega) {
            (pos, Legality::Legal) => self.pos = pos,
            (_, Legality::IllegalBy(p, i)) => {
                return Err(err(format!("move {i} by {p} does not fit {}", self.formula())))
            }
        }
        Ok(())
    }

    fn premise_for(&self, h: &Formula) -> Result<usize, StrategyError> {
        self.node()
            .premises
            .iter()
            .position(|q| &q.formula == h)
            .ok_or_else(|| err(format!("{h} is not a premise of {}", self.formula())))
    }

    fn step(&mut self, by: Player, m: &str, keep: bool) -> Result<(), StrategyError> {
        self.pos.apply(&self.game, by, m).map_err(|why| err(format!("{by}:{m}: {why}")))?;
        if keep {
            self.omega.push(LabMove::new(by, m));
        }
        Ok(())
    }

    fn emit(&mut self, m: String, keep: bool) -> Result<(), StrategyError> {
        self.step(Player::Bottom, &m, keep)?;
        self.global_pos.apply(&self.global_game, Player::Bottom, &m).map_err(err)?;
        self.outbox.push(m);
        Ok(())
    }

    fn log(&mut self, rule: &str, moves: Vec<String>) {
        self.trace.push(TraceStep { by: Player::Bottom, rule: rule.into(), moves });
    }

    fn settle(&mut self) -> Result<(), StrategyError> {
        loop {
            let node = self.node();
            let (rule, detail, e) = (node.rule, node.detail.clone(), node.formula.clone());
            match rule {
                RuleTag::WaitBar => return Ok(()),
                RuleTag::ChooseBar => {
                    let index = detail.index.ok_or_else(|| err("ChooseBar without an index"))?;
                    let m = format!("{}{index}", address(&e, &detail.path)?);
                    self.emit(m.clone(), false)?;
                    self.log("ChooseBar", vec![m]);
                }
                RuleTag::SwitchBar => {
                    let m = format!("{}{SWITCH}", address(&e, &detail.path)?);
                    self.emit(m.clone(), true)?;
                    self.log("SwitchBar", vec![m]);
                }
                other => return Err(err(format!("rule {other:?} cannot appear in a refutation"))),
            }
            self.descend(0)?;
        }
    }

    /// Reacts to one machine move.
    pub fn observe_move(&mut self, m: &str) -> Result<(), StrategyError> {
        self.global_pos
            .apply(&self.global_game, Player::Top, m)
            .map_err(|why| StrategyError::AdversaryIllegal(format!("T:{m}: {why}")))?;
        let e = self.formula().clone();
        let landing = land(&e, &self.game, &self.pos, Player::Top, m).map_err(err)?;
        let flags: BTreeMap<_, _> = classify_occurrences(&e).into_iter().collect();
        let fl = flags[landing.path()];
        match landing {
            _ if fl.abandoned => {
                self.step(Player::Top, m, true)?;
                self.log("WaitBar: move in an abandoned part", vec![]);
            }
            Landing::Choose { path, index } if fl.active => {
                let h = resolve_choice(&e, &path, Kind::Disj, index)
                    .ok_or_else(|| err(format!("{m} is no choice in a ⊔ of {e}")))?;
                let premise = self.premise_for(&h)?;
                self.log("WaitBar: machine choice", vec![]);
                self.descend(premise)?;
            }
            Landing::Switch { path } if fl.active => match e.at(&path) {
                Some(Formula::Seq(Kind::Conj, ..)) => {
                    self.step(Player::Top, m, true)?;
                    self.log("WaitBar: catch-up switch", vec![]);
                }
                Some(Formula::Seq(Kind::Disj, ..)) => {
                    let h = apply_switch(&e, &path, Kind::Disj, Family::Circ)
                        .ok_or_else(|| err(format!("no component follows the switch {m}")))?;
                    let premise = self.premise_for(&h)?;
                    self.step(Player::Top, m, true)?;
                    self.emit(m.to_string(), true)?;
                    self.log("WaitBar: leading switch answered", vec![m.to_string()]);
                    self.descend(premise)?;
                }
                _ => unreachable!(),
            },
            other => return Err(err(format!("move {m} lands at {other:?}, which no case covers"))),
        }
        self.settle()
    }
}

impl Agent for EnvStrategy {
    fn observe(&mut self, m: &str) -> Result<(), StrategyError> {
        self.observe_move(m)
    }

    fn act(&mut self, _g: &GameTree, _run: &[LabMove]) -> Vec<String> {
        self.take_moves()
    }

    fn drain_trace(&mut self) -> Vec<TraceStep> {
        std::mem::take(&mut self.trace)
    }

    fn limit_formula(&self) -> Option<Formula> {
        Some(self.formula().clone())
    }
}

/// A valuation making the elementarization of an instable limit formula false.
pub fn post_hoc_falsify(limit: &Formula) -> Result<Assignment, StrategyError> {
    falsifying_assignment(&elementarize(limit))
        .ok_or_else(|| StrategyError::Invariant(format!("limit formula {limit} is stable")))
}

/// The interpretation of `f` that follows `a`; atoms `a` leaves open are won
/// by the machine.
pub fn falsifying_interpretation(f: &Formula, a: &Assignment) -> Interpretation {
    let mut i = Interpretation::default_for(f);
    for (name, winner) in i.elementary.iter_mut() {
        if let Some(&v) = a.get(name) {
            *winner = if v { Player::Top } else { Player::Bottom };
        }
    }
    i
}
