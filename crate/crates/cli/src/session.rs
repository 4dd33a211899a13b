//! Interactive plays: a human takes one side, an extracted strategy the other.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use clarena_core::formula::Formula;
use clarena_core::game::{interpret, GameTree, Interpretation, LabMove, Pos, Run};
use clarena_core::prover::{decide, refute, Decision, Refutation, System};
use clarena_core::strategy::{default_cap, env_from_refutation, machine_from_proof, Agent};
use clarena_core::{parse, Player};

use crate::view::position_view;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HumanRole {
    /// The human is the environment; the engine plays a proof's strategy.
    Environment,
    /// The human is the machine; the engine plays a refutation's counterstrategy.
    Machine,
}

impl HumanRole {
    pub fn player(self) -> Player {
        match self {
            HumanRole::Environment => Player::Bottom,
            HumanRole::Machine => Player::Top,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum Status {
    Open,
    Finished { winner: Player },
}

#[derive(Debug, Error, PartialEq)]
pub enum SessionError {
    #[error("{0}")]
    BadRequest(String),
    #[error("illegal move {mv:?}: {reason}")]
    IllegalMove { mv: String, reason: String, legal_moves: Vec<String> },
    #[error("the session is finished")]
    Finished,
    #[error("engine failure: {0}")]
    Engine(String),
}

/// Everything needed to recreate a session from scratch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionSpec {
    pub formula: String,
    #[serde(default)]
    pub interpretation: Option<Interpretation>,
    pub human_role: HumanRole,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionState {
    pub id: String,
    pub formula: String,
    pub human_role: HumanRole,
    pub interpretation: Interpretation,
    pub current_formula_view: String,
    pub legal_moves: Vec<String>,
    pub run: Run,
    pub status: Status,
}

pub struct Session {
    id: String,
    formula: Formula,
    interpretation: Interpretation,
    human: HumanRole,
    engine: Box<dyn Agent + Send>,
    game: GameTree,
    pos: Pos,
    run: Run,
    status: Status,
}

impl Session {
    pub fn create(id: String, spec: &SessionSpec) -> Result<Session, SessionError> {
        let bad = |m: String| SessionError::BadRequest(m);
        let formula = parse(&spec.formula).map_err(|e| bad(format!("cannot parse formula: {e}")))?;
        let interpretation = spec.interpretation.clone().unwrap_or_default().completed_for(&formula);
        let game = interpret(&formula, &interpretation).map_err(bad)?;
        let engine: Box<dyn Agent + Send> = match spec.human_role {
            HumanRole::Environment => match decide(&formula, System::Cl9).map_err(|e| bad(e.to_string()))? {
                Decision::Provable(p) => {
                    Box::new(machine_from_proof(&p, &interpretation).map_err(|e| SessionError::Engine(e.to_string()))?)
                }
                Decision::Unprovable => {
                    return Err(bad("the formula is not provable, so there is no machine strategy to play".into()))
                }
            },
            HumanRole::Machine => {
                if !formula.is_elementary_base() {
                    return Err(bad("playing as the machine needs a formula without general atoms".into()));
                }
                match refute(&formula).map_err(|e| bad(e.to_string()))? {
                    Refutation::Refutable(r) => Box::new(
                        env_from_refutation(&r, &interpretation).map_err(|e| SessionError::Engine(e.to_string()))?,
                    ),
                    Refutation::Irrefutable => {
                        return Err(bad("the formula is provable, so there is no counterstrategy to play".into()))
                    }
                }
            }
        };
        let mut s = Session {
            id,
            pos: Pos::initial(&game),
            formula,
            interpretation,
            human: spec.human_role,
            engine,
            game,
            run: Run::new(),
            status: Status::Open,
        };
        s.engine_turn()?;
        Ok(s)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn run(&self) -> &[LabMove] {
        &self.run
    }

    fn legal_for_human(&self) -> Vec<String> {
        match self.status {
            Status::Open => self.pos.legal_moves(&self.game, self.human.player()),
            Status::Finished { .. } => Vec::new(),
        }
    }

    /// Applies the engine's moves until it goes quiet, then closes the
    /// session if the human is left without a legal move.
    fn engine_turn(&mut self) -> Result<(), SessionError> {
        let engine_player = self.human.player().other();
        loop {
            let moves = self.engine.act(&self.game, &self.run);
            if moves.is_empty() {
                break;
            }
            for m in moves {
                self.pos
                    .apply(&self.game, engine_player, &m)
                    .map_err(|why| SessionError::Engine(format!("engine move {m}: {why}")))?;
                self.run.push(LabMove::new(engine_player, m));
            }
            if self.run.len() > default_cap(&self.game) {
                return Err(SessionError::Engine("the engine does not stop moving".into()));
            }
        }
        if self.pos.legal_moves(&self.game, self.human.player()).is_empty() {
            self.finish();
        }
        Ok(())
    }

    pub fn apply_human(&mut self, m: &str) -> Result<(), SessionError> {
        if self.status != Status::Open {
            return Err(SessionError::Finished);
        }
        let by = self.human.player();
        let mut next = self.pos.clone();
        if let Err(reason) = next.apply(&self.game, by, m) {
            return Err(SessionError::IllegalMove {
                mv: m.to_string(),
                reason,
                legal_moves: self.legal_for_human(),
            });
        }
        self.pos = next;
        self.run.push(LabMove::new(by, m));
        self.engine.observe(m).map_err(|e| SessionError::Engine(e.to_string()))?;
        self.engine_turn()
    }

    /// Ends the play where it stands.
    pub fn finish(&mut self) {
        if self.status == Status::Open {
            self.status = Status::Finished { winner: self.pos.winner(&self.game) };
        }
    }

    pub fn state(&self) -> SessionState {
        SessionState {
            id: self.id.clone(),
            formula: self.formula.canonical(),
            human_role: self.human,
            interpretation: self.interpretation.clone(),
            current_formula_view: position_view(&self.formula, &self.game, &self.pos),
            legal_moves: self.legal_for_human(),
            run: self.run.clone(),
            status: self.status,
        }
    }
}
