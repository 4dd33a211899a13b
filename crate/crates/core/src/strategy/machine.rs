use std::collections::BTreeMap;
use std::sync::Arc;

use super::{address, resolve_choice, Agent, StrategyError, TraceStep};
use crate::formula::{classify_occurrences, Atom, Formula, Kind, OccFlags, OccPath, Player};
use crate::game::{
    interpret, land, manageability_violation, replay, GameTree, Interpretation, LabMove, Landing,
    Legality, Pos, Run, SWITCH,
};
use crate::prover::rules::{apply_switch, Family};
use crate::prover::{check, to_circ, ProofNode, RuleTag};

/// The machine's strategy for a ° proof.
///
/// The cursor names the proof node whose conclusion `E` the play has been
/// brought down to. `omega` is the run so far as a position of `E`'s game:
/// the global run without the choice moves whose choices no longer appear
/// in `E`. Move texts are the same in both games, because a resolved choice
/// adds nothing to the addresses of moves below it.
#[derive(Clone, Debug)]
pub struct MachineStrategy {
    root: Arc<ProofNode>,
    interp: Arc<Interpretation>,
    cursor: Vec<usize>,
    game: Arc<GameTree>,
    pos: Pos,
    omega: Run,
    global_game: Arc<GameTree>,
    global_pos: Pos,
    run: Run,
    outbox: Vec<String>,
    trace: Vec<TraceStep>,
    checking: bool,
}

/// Checks a proof and returns it in ° form, converting plain proofs.
pub fn circ_proof(p: &ProofNode) -> Result<ProofNode, StrategyError> {
    check(p).map_err(|e| StrategyError::Setup(e.to_string()))?;
    match p.rule.family() {
        Family::Plain => Ok(to_circ(p)),
        Family::Circ => Ok(p.clone()),
        Family::Bar => Err(StrategyError::Setup("a refutation is not a proof".into())),
    }
}

/// Builds the strategy for a checked proof.
pub fn machine_from_proof(p: &ProofNode, i: &Interpretation) -> Result<MachineStrategy, StrategyError> {
    MachineStrategy::trusting(circ_proof(p)?, i, false)
}

fn err(msg: impl Into<String>) -> StrategyError {
    StrategyError::Invariant(msg.into())
}

impl MachineStrategy {
    /// Builds the strategy for a ° proof without checking it; harnesses use
    /// this to watch a broken proof lose. With `checking`, manageability of
    /// the internal position is re-checked after every reaction.
    pub fn trusting(p: ProofNode, i: &Interpretation, checking: bool) -> Result<MachineStrategy, StrategyError> {
        let interp = i.completed_for(&p.formula);
        let global_game = Arc::new(interpret(&p.formula, &interp).map_err(StrategyError::Setup)?);
        let mut s = MachineStrategy {
            pos: Pos::initial(&global_game),
            global_pos: Pos::initial(&global_game),
            game: global_game.clone(),
            global_game,
            root: Arc::new(p),
            interp: Arc::new(interp),
            cursor: Vec::new(),
            omega: Vec::new(),
            run: Vec::new(),
            outbox: Vec::new(),
            trace: Vec::new(),
            checking,
        };
        s.settle()?;
        Ok(s)
    }

    fn node(&self) -> &ProofNode {
        let mut n: &ProofNode = &self.root;
        for &i in &self.cursor {
            n = &n.premises[i];
        }
        n
    }

    /// The formula the play has been brought down to.
    pub fn formula(&self) -> &Formula {
        &self.node().formula
    }

    pub fn cursor(&self) -> &[usize] {
        &self.cursor
    }

    pub fn omega(&self) -> &[LabMove] {
        &self.omega
    }

    pub fn run(&self) -> &[LabMove] {
        &self.run
    }

    pub fn global_position(&self) -> &Pos {
        &self.global_pos
    }

    pub fn game(&self) -> &GameTree {
        &self.global_game
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    /// Moves decided on but not yet handed out.
    pub fn take_moves(&mut self) -> Vec<String> {
        std::mem::take(&mut self.outbox)
    }

    fn violation(&self) -> Option<String> {
        match manageability_violation(self.formula(), &self.omega, &self.interp) {
            Ok(None) => None,
            Ok(Some(why)) => Some(why),
            Err(why) => Some(why),
        }
    }

    fn descend(&mut self, premise: usize) -> Result<(), StrategyError> {
        if premise >= self.node().premises.len() {
            return Err(err(format!("proof node {:?} has no premise {premise}", self.cursor)));
        }
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

    fn record_global(&mut self, by: Player, m: &str) -> Result<(), StrategyError> {
        self.global_pos.apply(&self.global_game, by, m).map_err(|why| err(format!("{by}:{m}: {why}")))?;
        self.run.push(LabMove::new(by, m));
        Ok(())
    }

    /// A machine move that stays in `omega`.
    fn make(&mut self, m: String) -> Result<(), StrategyError> {
        self.pos.apply(&self.game, Player::Top, &m).map_err(|why| err(format!("T:{m}: {why}")))?;
        self.omega.push(LabMove::new(Player::Top, m.clone()));
        self.record_global(Player::Top, &m)?;
        self.outbox.push(m);
        Ok(())
    }

    fn absorb(&mut self, m: &str) -> Result<(), StrategyError> {
        self.pos.apply(&self.game, Player::Bottom, m).map_err(|why| err(format!("B:{m}: {why}")))?;
        self.omega.push(LabMove::new(Player::Bottom, m));
        Ok(())
    }

    fn log(&mut self, rule: &str, moves: Vec<String>) {
        self.trace.push(TraceStep { by: Player::Top, rule: rule.into(), moves });
    }

    /// The moves inside the atom occurrence at `path`, oldest first.
    fn moves_inside(&self, path: &OccPath) -> Result<Run, StrategyError> {
        let e = self.formula();
        let mut pos = Pos::initial(&self.game);
        let mut out = Vec::new();
        for lm in &self.omega {
            if let Landing::Atom { path: p, sub } = land(e, &self.game, &pos, lm.by, &lm.m).map_err(err)? {
                if &p == path {
                    out.push(LabMove::new(lm.by, sub));
                }
            }
            pos.apply(&self.game, lm.by, &lm.m).map_err(err)?;
        }
        Ok(out)
    }

    /// Fires rules until the cursor sits on a Wait° node.
    fn settle(&mut self) -> Result<(), StrategyError> {
        loop {
            let node = self.node();
            let (rule, detail) = (node.rule, node.detail.clone());
            let e = node.formula.clone();
            match rule {
                RuleTag::WaitC => break,
                RuleTag::ChooseC => {
                    let index = detail.index.ok_or_else(|| err("Choose° without an index"))?;
                    let m = format!("{}{index}", address(&e, &detail.path)?);
                    self.pos.apply(&self.game, Player::Top, &m).map_err(|why| err(format!("T:{m}: {why}")))?;
                    self.record_global(Player::Top, &m)?;
                    self.outbox.push(m.clone());
                    self.log("ChooseC", vec![m]);
                    self.descend(0)?;
                }
                RuleTag::SwitchC => {
                    let m = format!("{}{SWITCH}", address(&e, &detail.path)?);
                    self.make(m.clone())?;
                    self.log("SwitchC", vec![m]);
                    self.descend(0)?;
                }
                RuleTag::MatchC => {
                    let (Some(pp), Some(np)) = (&detail.pos_path, &detail.neg_path) else {
                        return Err(err("Match° without occurrence paths"));
                    };
                    let plus = self.moves_inside(pp)?;
                    let minus = self.moves_inside(np)?;
                    if plus.iter().chain(&minus).any(|lm| lm.by == Player::Top) {
                        return Err(err("machine moves inside a general atom"));
                    }
                    let mut copies = Vec::new();
                    let into_plus = address(&e, pp)?;
                    for lm in &minus {
                        copies.push(format!("{into_plus}{}", lm.m));
                    }
                    let into_minus = address(&e, np)?;
                    for lm in &plus {
                        copies.push(format!("{into_minus}{}", lm.m));
                    }
                    for m in &copies {
                        self.make(m.clone())?;
                    }
                    self.log("MatchC", copies);
                    self.descend(0)?;
                }
                other => return Err(err(format!("rule {other:?} cannot appear in a ° proof"))),
            }
            self.verify()?;
        }
        Ok(())
    }

    fn verify(&self) -> Result<(), StrategyError> {
        match self.checking.then(|| self.violation()).flatten() {
            Some(why) => Err(err(format!("after {:?}: {why}", self.cursor))),
            None => Ok(()),
        }
    }

    /// Reacts to one environment move. On return the cursor is on a Wait°
    /// node again and any answering moves are waiting in the outbox.
    pub fn observe_move(&mut self, m: &str) -> Result<(), StrategyError> {
        self.global_pos
            .apply(&self.global_game, Player::Bottom, m)
            .map_err(|why| StrategyError::AdversaryIllegal(format!("B:{m}: {why}")))?;
        self.run.push(LabMove::new(Player::Bottom, m));
        let e = self.formula().clone();
        let landing = land(&e, &self.game, &self.pos, Player::Bottom, m).map_err(err)?;
        let flags: BTreeMap<OccPath, OccFlags> = classify_occurrences(&e).into_iter().collect();
        let fl = flags[landing.path()];
        match landing {
            _ if fl.abandoned => {
                self.absorb(m)?;
                self.log("WaitC: move in an abandoned part", vec![]);
            }
            Landing::Atom { path, sub } => {
                let Some(Formula::Lit(l)) = e.at(&path) else { unreachable!() };
                match &l.atom {
                    Atom::General(_) => {
                        self.absorb(m)?;
                        self.log("WaitC: move in a general atom", vec![]);
                    }
                    Atom::Hybrid { elementary, .. } => {
                        let partner = flags.iter().find_map(|(p, f)| match e.at(p) {
                            Some(Formula::Lit(o))
                                if o.negated != l.negated
                                    && matches!(&o.atom, Atom::Hybrid { elementary: q, .. } if q == elementary) =>
                            {
                                Some((p.clone(), *f))
                            }
                            _ => None,
                        });
                        self.absorb(m)?;
                        match partner {
                            Some((p, f)) if f.active => {
                                let reply = format!("{}{sub}", address(&e, &p)?);
                                self.make(reply.clone())?;
                                self.log("WaitC: mirror in the matched atom", vec![reply]);
                            }
                            _ => self.log("WaitC: move in a widowed atom", vec![]),
                        }
                    }
                    Atom::Elementary(_) => return Err(err(format!("move {m} inside elementary {l}"))),
                }
            }
            Landing::Choose { path, index } if fl.active => {
                let h = resolve_choice(&e, &path, Kind::Conj, index)
                    .ok_or_else(|| err(format!("{m} is no choice in a ⊓ of {e}")))?;
                let premise = self.premise_for(&h)?;
                self.log("WaitC: environment choice", vec![]);
                self.descend(premise)?;
            }
            Landing::Switch { path } if fl.active => match e.at(&path) {
                Some(Formula::Seq(Kind::Disj, ..)) => {
                    self.absorb(m)?;
                    self.log("WaitC: catch-up switch", vec![]);
                }
                Some(Formula::Seq(Kind::Conj, ..)) => {
                    let h = apply_switch(&e, &path, Kind::Conj, Family::Circ)
                        .ok_or_else(|| err(format!("no component follows the switch {m}")))?;
                    let premise = self.premise_for(&h)?;
                    self.absorb(m)?;
                    self.make(m.to_string())?;
                    self.log("WaitC: leading switch answered", vec![m.to_string()]);
                    self.descend(premise)?;
                }
                _ => unreachable!(),
            },
            other => return Err(err(format!("move {m} lands at {other:?}, which no case covers"))),
        }
        self.verify()?;
        self.settle()
    }
}

impl Agent for MachineStrategy {
    fn observe(&mut self, m: &str) -> Result<(), StrategyError> {
        self.observe_move(m)
    }

    fn act(&mut self, _g: &GameTree, _run: &[LabMove]) -> Vec<String> {
        self.take_moves()
    }

    fn drain_trace(&mut self) -> Vec<TraceStep> {
        std::mem::take(&mut self.trace)
    }
}
