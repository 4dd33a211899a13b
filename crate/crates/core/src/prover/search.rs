use std::collections::HashMap;

use thiserror::Error;

use super::rules::{self, Family, RuleDetail, RuleTag};
use super::ProofNode;
use crate::formula::{is_balanced, is_stable, Atom, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Cl9,
    Cl9Circ,
    Cl10,
    Cl10Circ,
    /// The blind-quantifier-free fragment of CL11.
    Cl11,
}

impl System {
    fn family(self) -> Family {
        match self {
            System::Cl9Circ | System::Cl10Circ => Family::Circ,
            _ => Family::Plain,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PreconditionError {
    #[error("formula must be plain; offending node: {0}")]
    NotPlain(String),
    #[error("formula is not balanced")]
    NotBalanced,
    #[error("general atom {0} not allowed here")]
    GeneralAtom(String),
    #[error("quantifiers are only allowed in the first-order system")]
    Quantified,
    #[error("ill-formed first-order formula: {0}")]
    FirstOrder(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decision {
    Provable(ProofNode),
    Unprovable,
}

impl Decision {
    pub fn is_provable(&self) -> bool {
        matches!(self, Decision::Provable(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct formulas examined.
    pub visited: usize,
    /// Deepest rule chain followed.
    pub max_depth: usize,
    /// Declared bound on that depth.
    pub measure: usize,
}

pub const MEMO_LIMIT: usize = 1 << 20;

/// Each rule application lowers this by at least one, so it bounds the
/// depth of any derivation.
pub fn measure(f: &Formula) -> usize {
    let mut total = 0;
    f.visit(&mut |n| {
        total += match n {
            Formula::Choice(..) | Formula::Quant(..) => 1,
            Formula::Seq(_, c, h) => c.len() - 1 - h,
            Formula::Lit(l) if l.atom.is_general() => 1,
            _ => 0,
        }
    });
    total
}

fn first_general(f: &Formula) -> Option<String> {
    f.literals()
        .into_iter()
        .find(|l| !matches!(l.atom, Atom::Elementary(_)))
        .map(|l| l.to_string())
}

fn first_unplain(f: &Formula) -> Option<String> {
    let mut found = None;
    f.visit(&mut |n| {
        if found.is_none() {
            match n {
                Formula::Seq(_, _, h) if *h != 0 => found = Some(n.to_string()),
                Formula::Lit(l) if l.atom.is_hybrid() => found = Some(n.to_string()),
                _ => {}
            }
        }
    });
    found
}

pub fn check_preconditions(f: &Formula, system: System) -> Result<(), PreconditionError> {
    if system == System::Cl11 {
        crate::formula::check_fo_wellformed(f).map_err(PreconditionError::FirstOrder)?;
    } else if !f.is_propositional() {
        return Err(PreconditionError::Quantified);
    }
    match system {
        System::Cl9 | System::Cl10 | System::Cl11 => {
            if let Some(n) = first_unplain(f) {
                return Err(PreconditionError::NotPlain(n));
            }
        }
        System::Cl9Circ | System::Cl10Circ => {
            if !is_balanced(f) {
                return Err(PreconditionError::NotBalanced);
            }
        }
    }
    if matches!(system, System::Cl10 | System::Cl10Circ) {
        if let Some(a) = first_general(f) {
            return Err(PreconditionError::GeneralAtom(a));
        }
    }
    Ok(())
}

struct Prover {
    family: Family,
    matching: bool,
    memo: HashMap<String, bool>,
    bound: usize,
    stats: SearchStats,
}

impl Prover {
    fn new(system: System, root: &Formula) -> Self {
        let bound = measure(root);
        Prover {
            family: system.family(),
            matching: !matches!(system, System::Cl10 | System::Cl10Circ),
            memo: HashMap::new(),
            bound,
            stats: SearchStats { measure: bound, ..Default::default() },
        }
    }

    fn tags(&self) -> [RuleTag; 4] {
        match self.family {
            Family::Circ => [RuleTag::ChooseC, RuleTag::SwitchC, RuleTag::MatchC, RuleTag::WaitC],
            _ => [RuleTag::Choose, RuleTag::Switch, RuleTag::Match, RuleTag::Wait],
        }
    }

    /// Single-premise expansions in exploration order.
    fn expansions(&self, f: &Formula) -> Vec<(Formula, RuleTag, RuleDetail)> {
        let [choose, switch, matching, _] = self.tags();
        let mut out: Vec<_> = rules::choose_expansions(f, self.family)
            .into_iter()
            .map(|(g, d)| (g, choose, d))
            .collect();
        out.extend(rules::switch_expansions(f, self.family).into_iter().map(|(g, d)| (g, switch, d)));
        if self.matching {
            out.extend(
                rules::match_expansions(f, self.family).into_iter().map(|(g, d)| (g, matching, d)),
            );
        }
        out
    }

    fn provable(&mut self, f: &Formula, depth: usize) -> bool {
        assert!(depth <= self.bound, "search depth {depth} exceeds measure {}", self.bound);
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let key = f.canonical();
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        self.stats.visited += 1;
        let result = self.expansions(f).iter().any(|(g, ..)| self.provable(g, depth + 1))
            || (is_stable(f)
                && rules::wait_premises(f, self.family).iter().all(|g| self.provable(g, depth + 1)));
        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert(key, result);
        }
        result
    }

    /// Rebuilds a proof of a formula already known to be provable.
    fn build(&mut self, f: &Formula, depth: usize) -> ProofNode {
        for (g, tag, detail) in self.expansions(f) {
            if self.provable(&g, depth + 1) {
                let premise = self.build(&g, depth + 1);
                return ProofNode { formula: f.clone(), rule: tag, detail, premises: vec![premise] };
            }
        }
        let premises =
            rules::wait_premises(f, self.family).iter().map(|g| self.build(g, depth + 1)).collect();
        ProofNode { formula: f.clone(), rule: self.tags()[3], detail: RuleDetail::default(), premises }
    }
}

pub fn decide_with_stats(
    f: &Formula,
    system: System,
) -> Result<(Decision, SearchStats), PreconditionError> {
    check_preconditions(f, system)?;
    let mut prover = Prover::new(system, f);
    let decision = if prover.provable(f, 0) {
        Decision::Provable(prover.build(f, 0))
    } else {
        Decision::Unprovable
    };
    Ok((decision, prover.stats))
}

pub fn decide(f: &Formula, system: System) -> Result<Decision, PreconditionError> {
    decide_with_stats(f, system).map(|(d, _)| d)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Refutation {
    Refutable(ProofNode),
    Irrefutable,
}

impl Refutation {
    pub fn is_refutable(&self) -> bool {
        matches!(self, Refutation::Refutable(_))
    }
}

struct Refuter {
    memo: HashMap<String, bool>,
    bound: usize,
}

impl Refuter {
    fn single(f: &Formula) -> Vec<(Formula, RuleTag, RuleDetail)> {
        let mut out: Vec<_> = rules::choose_expansions(f, Family::Bar)
            .into_iter()
            .map(|(g, d)| (g, RuleTag::ChooseBar, d))
            .collect();
        out.extend(
            rules::switch_expansions(f, Family::Bar)
                .into_iter()
                .map(|(g, d)| (g, RuleTag::SwitchBar, d)),
        );
        out
    }

    fn refutable(&mut self, f: &Formula, depth: usize) -> bool {
        assert!(depth <= self.bound, "search depth {depth} exceeds measure {}", self.bound);
        let key = f.canonical();
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let result = (!is_stable(f)
            && rules::waitbar_premises(f).iter().all(|g| self.refutable(g, depth + 1)))
            || Self::single(f).iter().any(|(g, ..)| self.refutable(g, depth + 1));
        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert(key, result);
        }
        result
    }

    fn build(&mut self, f: &Formula, depth: usize) -> ProofNode {
        if !is_stable(f) {
            let premises = rules::waitbar_premises(f);
            if premises.iter().all(|g| self.refutable(g, depth + 1)) {
                let premises = premises.iter().map(|g| self.build(g, depth + 1)).collect();
                return ProofNode {
                    formula: f.clone(),
                    rule: RuleTag::WaitBar,
                    detail: RuleDetail::default(),
                    premises,
                };
            }
        }
        for (g, tag, detail) in Self::single(f) {
            if self.refutable(&g, depth + 1) {
                let premise = self.build(&g, depth + 1);
                return ProofNode { formula: f.clone(), rule: tag, detail, premises: vec![premise] };
            }
        }
        unreachable!("build called on an irrefutable formula")
    }
}

/// Searches for a refutation of an elementary-base formula. Plain input has
/// every underline on the head already.
pub fn refute(f: &Formula) -> Result<Refutation, PreconditionError> {
    check_preconditions(f, System::Cl10Circ)?;
    let mut r = Refuter { memo: HashMap::new(), bound: measure(f) };
    Ok(if r.refutable(f, 0) { Refutation::Refutable(r.build(f, 0)) } else { Refutation::Irrefutable })
}
