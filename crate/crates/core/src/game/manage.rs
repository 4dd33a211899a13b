//! Manageability: the bookkeeping that ties a run to a hyperformula while a
//! proof-driven strategy plays.

use std::collections::BTreeMap;

use super::engine::{Pos, TraceEnd};
use super::run::{is_delay, swap_labels, LabMove, Run};
use super::{interpret, Interpretation};
use crate::formula::{classify_occurrences, Atom, Formula, Kind, OccFlags, OccPath, Player};

/// Where a move lands relative to the formula skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Landing {
    /// Inside the atom occurrence at `path`; `sub` is the move in the atom's game.
    Atom { path: OccPath, sub: String },
    Switch { path: OccPath },
    Choose { path: OccPath, index: usize },
    /// Passes through a choice node of the formula on its way down.
    PastChoice { path: OccPath },
}

impl Landing {
    pub fn path(&self) -> &OccPath {
        match self {
            Landing::Atom { path, .. }
            | Landing::Switch { path }
            | Landing::Choose { path, .. }
            | Landing::PastChoice { path } => path,
        }
    }
}

/// Locates a legal move of `by` in the game of `e`, given the position
/// reached so far.
pub fn land(
    e: &Formula,
    tree: &super::GameTree,
    pos: &Pos,
    by: Player,
    m: &str,
) -> Result<Landing, String> {
    let t = pos.trace(tree, by, m)?;
    let mut node = e;
    for (depth, &i) in t.steps.iter().enumerate() {
        match node {
            Formula::Lit(_) => {
                return Ok(Landing::Atom {
                    path: t.steps[..depth].to_vec(),
                    sub: t.suffixes[depth].clone(),
                })
            }
            Formula::Choice(..) => return Ok(Landing::PastChoice { path: t.steps[..depth].to_vec() }),
            _ => node = &node.children()[i],
        }
    }
    let depth = t.steps.len();
    let path = t.steps.clone();
    Ok(match (node, t.end) {
        (Formula::Lit(_), _) => Landing::Atom { path, sub: t.suffixes[depth].clone() },
        (Formula::Choice(..), TraceEnd::Choose(index)) => Landing::Choose { path, index },
        (Formula::Seq(..), TraceEnd::Switch) => Landing::Switch { path },
        (other, end) => return Err(format!("move {m} ends at {other} with {end:?}")),
    })
}

/// The first manageability clause `run` breaks, if any.
pub fn manageability_violation(
    e: &Formula,
    run: &[LabMove],
    i: &Interpretation,
) -> Result<Option<String>, String> {
    let tree = interpret(e, i)?;
    let flags: BTreeMap<OccPath, OccFlags> = classify_occurrences(e).into_iter().collect();
    let mut pos = Pos::initial(&tree);
    let mut inside: BTreeMap<OccPath, Run> = BTreeMap::new();
    for lm in run {
        let landing = land(e, &tree, &pos, lm.by, &lm.m)?;
        pos.apply(&tree, lm.by, &lm.m)?;
        match landing {
            Landing::Choose { path, .. } | Landing::PastChoice { path } if flags[&path].active => {
                return Ok(Some(format!("move {lm} inside the active choice at {path:?}")));
            }
            Landing::Atom { path, sub } => {
                let Formula::Lit(l) = e.at(&path).unwrap() else { unreachable!() };
                if lm.by == Player::Top && l.atom.is_general() {
                    return Ok(Some(format!("machine move {lm} inside general atom {l}")));
                }
                inside.entry(path).or_default().push(LabMove::new(lm.by, sub));
            }
            _ => {}
        }
    }
    for (path, fl) in &flags {
        if !fl.active {
            continue;
        }
        if let Formula::Seq(k, _, head) = e.at(path).unwrap() {
            let [top, bottom] = pos.at(path).map(Pos::degrees).unwrap_or([0, 0]);
            let ok = match k {
                Kind::Conj => top == *head && bottom == *head,
                Kind::Disj => top == *head && bottom <= *head,
            };
            if !ok {
                return Ok(Some(format!(
                    "sequential node at {path:?} has underline {head} but switch counts T={top}, B={bottom}"
                )));
            }
        }
    }
    // hybrid atoms whose two occurrences are both active
    let mut pairs: BTreeMap<&str, [Option<&OccPath>; 2]> = BTreeMap::new();
    for (path, fl) in &flags {
        if let Some(Formula::Lit(l)) = e.at(path) {
            if let Atom::Hybrid { elementary, .. } = &l.atom {
                let entry = pairs.entry(elementary).or_default();
                if fl.active {
                    entry[usize::from(l.negated)] = Some(path);
                }
            }
        }
    }
    let empty = Run::new();
    for (q, pair) in pairs {
        let [Some(pos_path), Some(neg_path)] = pair else { continue };
        let plus = inside.get(pos_path).unwrap_or(&empty);
        let minus = inside.get(neg_path).unwrap_or(&empty);
        if !is_delay(plus, &swap_labels(minus), Player::Top) {
            return Ok(Some(format!("moves in the two occurrences of hybrid {q} are out of step")));
        }
    }
    Ok(None)
}

pub fn manageable(e: &Formula, run: &[LabMove], i: &Interpretation) -> bool {
    matches!(manageability_violation(e, run, i), Ok(None))
}
