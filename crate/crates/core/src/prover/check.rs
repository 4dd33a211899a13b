//! Independent verification of derivations: every node's premises are
//! recomputed from its conclusion and detail.

use std::fmt;

use super::rules::{self, Family, RuleTag};
use super::ProofNode;
use crate::formula::{is_balanced, is_stable, Formula, Kind, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?}: {}", self.path, self.reason)
    }
}

impl std::error::Error for CheckFailure {}

pub fn check(p: &ProofNode) -> Result<(), CheckFailure> {
    let family = p.rule.family();
    let mut path = Vec::new();
    walk(p, family, &mut path)
}

fn walk(p: &ProofNode, family: Family, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    let fail = |reason: String| CheckFailure { path: path.clone(), reason };
    if p.rule.family() != family {
        return Err(fail(format!("{:?} in a {:?} derivation", p.rule, family)));
    }
    check_formula(&p.formula, family).map_err(fail)?;
    check_node(p).map_err(fail)?;
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        walk(q, family, path)?;
        path.pop();
    }
    Ok(())
}

fn check_formula(f: &Formula, family: Family) -> Result<(), String> {
    match family {
        Family::Plain if !f.is_plain() => Err(format!("{f} is not plain")),
        Family::Circ if !is_balanced(f) => Err(format!("{f} is not balanced")),
        Family::Bar if !f.is_elementary_base() => Err(format!("{f} is not elementary-base")),
        _ => Ok(()),
    }
}

fn single(p: &ProofNode) -> Result<&Formula, String> {
    match p.premises.as_slice() {
        [q] => Ok(&q.formula),
        other => Err(format!("{:?} needs one premise, found {}", p.rule, other.len())),
    }
}

fn expect(p: &ProofNode, expected: Option<Formula>) -> Result<(), String> {
    let premise = single(p)?;
    match expected {
        None => Err(format!("{:?} does not apply at {:?}", p.rule, p.detail.path)),
        Some(e) if e == *premise => Ok(()),
        Some(e) => Err(format!("premise {premise} should be {e}")),
    }
}

fn live(p: &ProofNode, path: &[usize]) -> Result<(), String> {
    if rules::site_is_live(&p.formula, path) {
        Ok(())
    } else {
        Err(format!("{path:?} is not an active surface occurrence"))
    }
}

fn same_set(p: &ProofNode, expected: &[Formula]) -> Result<(), String> {
    let got: Vec<&Formula> = p.premises.iter().map(|q| &q.formula).collect();
    for (i, g) in got.iter().enumerate() {
        if got[..i].contains(g) {
            return Err(format!("duplicate premise {g}"));
        }
        if !expected.contains(g) {
            return Err(format!("unexpected premise {g}"));
        }
    }
    if let Some(missing) = expected.iter().find(|e| !got.contains(e)) {
        return Err(format!("missing premise {missing}"));
    }
    Ok(())
}

fn check_node(p: &ProofNode) -> Result<(), String> {
    let f = &p.formula;
    let d = &p.detail;
    match p.rule {
        RuleTag::Wait | RuleTag::WaitC => {
            if !is_stable(f) {
                return Err(format!("Wait on instable {f}"));
            }
            let family = p.rule.family();
            if f.is_propositional() {
                same_set(p, &rules::wait_premises(f, family))
            } else {
                check_fo_wait(p)
            }
        }
        RuleTag::WaitBar => {
            if is_stable(f) {
                return Err(format!("WaitBar on stable {f}"));
            }
            same_set(p, &rules::waitbar_premises(f))
        }
        RuleTag::Choose | RuleTag::ChooseC | RuleTag::ChooseBar => {
            live(p, &d.path)?;
            let kind = if p.rule == RuleTag::ChooseBar { Kind::Conj } else { Kind::Disj };
            match (&d.index, &d.term) {
                (Some(i), None) => expect(p, rules::apply_choose(f, &d.path, *i, kind)),
                (None, Some(t)) if p.rule == RuleTag::Choose => {
                    let term = rules::parse_term(t);
                    if let Term::Var(v) = &term {
                        if rules::bound_vars(f).contains(v) {
                            return Err(format!("term {v} is bound in {f}"));
                        }
                    }
                    expect(p, rules::apply_instantiate(f, &d.path, kind, &term))
                }
                _ => Err("Choose needs exactly one of index or term".into()),
            }
        }
        RuleTag::Switch | RuleTag::SwitchC | RuleTag::SwitchBar => {
            live(p, &d.path)?;
            let (kind, family) = match p.rule {
                RuleTag::Switch => (Kind::Disj, Family::Plain),
                RuleTag::SwitchC => (Kind::Disj, Family::Circ),
                _ => (Kind::Conj, Family::Circ),
            };
            expect(p, rules::apply_switch(f, &d.path, kind, family))
        }
        RuleTag::Match | RuleTag::MatchC => {
            let (Some(pos), Some(neg), Some(fresh)) = (&d.pos_path, &d.neg_path, &d.fresh) else {
                return Err("Match needs posPath, negPath and fresh".into());
            };
            live(p, pos)?;
            live(p, neg)?;
            if rules::all_names(f).contains(fresh) {
                return Err(format!("{fresh} is not fresh in {f}"));
            }
            if !fresh.starts_with(|c: char| c.is_ascii_lowercase()) || fresh.contains('_') {
                return Err(format!("{fresh} is not an elementary name"));
            }
            expect(p, rules::apply_match(f, pos, neg, fresh, p.rule.family()))
        }
    }
}

/// First-order Wait: the premises for `⊓x` sites may use any variable that
/// does not occur in the conclusion.
fn check_fo_wait(p: &ProofNode) -> Result<(), String> {
    let f = &p.formula;
    let fixed: Vec<Formula> = {
        let mut without_quant = Vec::new();
        let y = Term::Var(rules::fresh_name(f, "y"));
        let quant_versions: Vec<Formula> = rules::live_sites(f)
            .iter()
            .filter_map(|s| rules::apply_instantiate(f, s, Kind::Conj, &y))
            .collect();
        for g in rules::wait_premises(f, Family::Plain) {
            if !quant_versions.contains(&g) {
                without_quant.push(g);
            }
        }
        without_quant
    };
    let sites: Vec<Vec<usize>> = rules::live_sites(f)
        .into_iter()
        .filter(|s| matches!(f.at(s), Some(Formula::Quant(Kind::Conj, ..))))
        .collect();
    let used = rules::all_names(f);
    let instance_of_site = |g: &Formula, site: &[usize]| {
        rules::all_names(g).into_iter().filter(|n| !used.contains(n)).any(|y| {
            rules::apply_instantiate(f, site, Kind::Conj, &Term::Var(y)).as_ref() == Some(g)
        })
    };
    let got: Vec<&Formula> = p.premises.iter().map(|q| &q.formula).collect();
    if got.len() != fixed.len() + sites.len() {
        return Err(format!("expected {} premises, found {}", fixed.len() + sites.len(), got.len()));
    }
    for g in &got {
        if !fixed.contains(g) && !sites.iter().any(|s| instance_of_site(g, s)) {
            return Err(format!("unexpected premise {g}"));
        }
    }
    if let Some(missing) = fixed.iter().find(|e| !got.contains(e)) {
        return Err(format!("missing premise {missing}"));
    }
    if let Some(s) = sites.iter().find(|s| !got.iter().any(|g| instance_of_site(g, s))) {
        return Err(format!("no premise instantiates the quantifier at {s:?} with a fresh variable"));
    }
    Ok(())
}
