//! One-step rule applications, shared by the searches and the checker.
//!
//! Every `apply_*` function returns `None` when the rule does not apply at the
//! given site; the `*_expansions` functions enumerate every site.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::formula::{classify_occurrences, Atom, Formula, Kind, Literal, OccPath, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleTag {
    Wait,
    Choose,
    Switch,
    Match,
    WaitC,
    ChooseC,
    SwitchC,
    MatchC,
    WaitBar,
    ChooseBar,
    SwitchBar,
}

/// Which rule family a derivation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Components are deleted, Match introduces elementary atoms.
    Plain,
    /// Underlines move, Match introduces hybrid atoms.
    Circ,
    /// The refutation rules.
    Bar,
}

impl RuleTag {
    pub fn family(self) -> Family {
        use RuleTag::*;
        match self {
            Wait | Choose | Switch | Match => Family::Plain,
            WaitC | ChooseC | SwitchC | MatchC => Family::Circ,
            WaitBar | ChooseBar | SwitchBar => Family::Bar,
        }
    }
}

/// Where a rule was applied. Choice indices are 1-based, as in moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleDetail {
    #[serde(default)]
    pub path: OccPath,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos_path: Option<OccPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg_path: Option<OccPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fresh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
}

impl RuleDetail {
    pub fn at(path: &[usize]) -> Self {
        RuleDetail { path: path.to_vec(), ..Default::default() }
    }
}

pub type Expansion = (Formula, RuleDetail);

/// Paths of nodes that are both surface and active. For plain formulas this
/// is exactly the plain notion of a surface occurrence.
pub fn live_sites(f: &Formula) -> Vec<OccPath> {
    classify_occurrences(f)
        .into_iter()
        .filter(|(_, fl)| fl.surface && fl.active)
        .map(|(p, _)| p)
        .collect()
}

fn is_live(f: &Formula, path: &[usize]) -> bool {
    classify_occurrences(f).iter().any(|(p, fl)| p == path && fl.surface && fl.active)
}

/// Every name used by `f`: atoms, hybrid components, letters and variables.
pub fn all_names(f: &Formula) -> BTreeSet<String> {
    let mut out = f.atom_names();
    f.visit(&mut |n| match n {
        Formula::Lit(l) => {
            for t in &l.args {
                if let Term::Var(v) = t {
                    out.insert(v.clone());
                }
            }
        }
        Formula::Quant(_, v, _) => {
            out.insert(v.clone());
        }
        _ => {}
    });
    out
}

pub fn fresh_name(f: &Formula, prefix: &str) -> String {
    let used = all_names(f);
    (1..).map(|i| format!("{prefix}{i}")).find(|n| !used.contains(n)).unwrap()
}

/// The sequential remainder after dropping the head; a single component
/// stands for itself.
fn drop_head(kind: Kind, comps: &[Formula]) -> Formula {
    if comps.len() == 2 {
        comps[1].clone()
    } else {
        Formula::Seq(kind, comps[1..].to_vec(), 0)
    }
}

pub fn apply_choose(f: &Formula, path: &[usize], index: usize, kind: Kind) -> Option<Formula> {
    match f.at(path)? {
        Formula::Choice(k, c) if *k == kind && (1..=c.len()).contains(&index) => {
            Some(f.replace_at(path, c[index - 1].clone()))
        }
        _ => None,
    }
}

/// Plain rules delete the head; ° rules move the underline right.
pub fn apply_switch(f: &Formula, path: &[usize], kind: Kind, family: Family) -> Option<Formula> {
    match f.at(path)? {
        Formula::Seq(k, c, h) if *k == kind => match family {
            Family::Plain if *h == 0 => Some(f.replace_at(path, drop_head(kind, c))),
            Family::Plain => None,
            _ if h + 1 < c.len() => Some(f.replace_at(path, Formula::Seq(kind, c.clone(), h + 1))),
            _ => None,
        },
        _ => None,
    }
}

pub fn substitute(f: &Formula, var: &str, term: &Term) -> Formula {
    match f {
        Formula::Lit(l) => Formula::Lit(Literal {
            args: l
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) if v == var => term.clone(),
                    other => other.clone(),
                })
                .collect(),
            ..l.clone()
        }),
        Formula::Quant(_, v, _) if v == var => f.clone(),
        Formula::Quant(k, v, b) => Formula::Quant(*k, v.clone(), Box::new(substitute(b, var, term))),
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(|x| substitute(x, var, term)).collect()),
        Formula::Choice(k, c) => {
            Formula::Choice(*k, c.iter().map(|x| substitute(x, var, term)).collect())
        }
        Formula::Seq(k, c, h) => {
            Formula::Seq(*k, c.iter().map(|x| substitute(x, var, term)).collect(), *h)
        }
        other => other.clone(),
    }
}

pub fn apply_instantiate(f: &Formula, path: &[usize], kind: Kind, term: &Term) -> Option<Formula> {
    match f.at(path)? {
        Formula::Quant(k, v, b) if *k == kind => Some(f.replace_at(path, substitute(b, v, term))),
        _ => None,
    }
}

pub fn parse_term(text: &str) -> Term {
    match text.parse::<u64>() {
        Ok(n) => Term::Const(n),
        Err(_) => Term::Var(text.to_string()),
    }
}

pub fn bound_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    f.visit(&mut |n| {
        if let Formula::Quant(_, v, _) = n {
            out.insert(v.clone());
        }
    });
    out
}

/// Candidate instantiations for `⊔x`: the terms of `f` that are not bound
/// variables, plus the least numeral that does not occur in `f`.
pub fn candidate_terms(f: &Formula) -> Vec<Term> {
    let bound = bound_vars(f);
    let mut terms: BTreeSet<Term> = BTreeSet::new();
    for l in f.literals() {
        for t in &l.args {
            match t {
                Term::Var(v) if bound.contains(v) => {}
                _ => {
                    terms.insert(t.clone());
                }
            }
        }
    }
    let fresh = (0..).find(|n| !terms.contains(&Term::Const(*n))).unwrap();
    terms.insert(Term::Const(fresh));
    terms.into_iter().collect()
}

/// Replaces a positive and a negative occurrence of the same general letter.
/// Plain: by the elementary letter `fresh`. °: by the hybrid atom.
pub fn apply_match(
    f: &Formula,
    pos: &[usize],
    neg: &[usize],
    fresh: &str,
    family: Family,
) -> Option<Formula> {
    let (Formula::Lit(lp), Formula::Lit(ln)) = (f.at(pos)?, f.at(neg)?) else { return None };
    let (Atom::General(a), Atom::General(b)) = (&lp.atom, &ln.atom) else { return None };
    if a != b || lp.negated || !ln.negated {
        return None;
    }
    let atom = match family {
        Family::Plain => Atom::Elementary(fresh.to_string()),
        _ => Atom::Hybrid { general: a.clone(), elementary: fresh.to_string() },
    };
    let replace = |l: &Literal| Formula::Lit(Literal { atom: atom.clone(), ..l.clone() });
    Some(f.replace_at(pos, replace(lp)).replace_at(neg, replace(ln)))
}

fn sites_where(f: &Formula, pred: impl Fn(&Formula) -> bool) -> Vec<OccPath> {
    live_sites(f).into_iter().filter(|p| pred(f.at(p).unwrap())).collect()
}

/// Choose (plain) or Choose° (circ) for `⊔`, ChooseBar for `⊓`. Plain also
/// covers `⊔x` over the candidate terms.
pub fn choose_expansions(f: &Formula, family: Family) -> Vec<Expansion> {
    let kind = if family == Family::Bar { Kind::Conj } else { Kind::Disj };
    let mut out = Vec::new();
    for path in live_sites(f) {
        match f.at(&path).unwrap() {
            Formula::Choice(k, c) if *k == kind => {
                for i in 1..=c.len() {
                    let detail = RuleDetail { index: Some(i), ..RuleDetail::at(&path) };
                    out.push((apply_choose(f, &path, i, kind).unwrap(), detail));
                }
            }
            Formula::Quant(k, v, _) if *k == kind && family == Family::Plain => {
                for t in candidate_terms(f) {
                    let detail = RuleDetail {
                        var: Some(v.clone()),
                        term: Some(t.to_string()),
                        ..RuleDetail::at(&path)
                    };
                    out.push((apply_instantiate(f, &path, kind, &t).unwrap(), detail));
                }
            }
            _ => {}
        }
    }
    out
}

/// Switch/Switch° act on `▽`, SwitchBar on `△`.
pub fn switch_expansions(f: &Formula, family: Family) -> Vec<Expansion> {
    let kind = if family == Family::Bar { Kind::Conj } else { Kind::Disj };
    let family = if family == Family::Bar { Family::Circ } else { family };
    sites_where(f, |n| matches!(n, Formula::Seq(k, ..) if *k == kind))
        .into_iter()
        .filter_map(|p| Some((apply_switch(f, &p, kind, family)?, RuleDetail::at(&p))))
        .collect()
}

pub fn match_expansions(f: &Formula, family: Family) -> Vec<Expansion> {
    let live: Vec<(OccPath, &Literal)> = live_sites(f)
        .into_iter()
        .filter_map(|p| match f.at(&p) {
            Some(Formula::Lit(l)) if l.atom.is_general() => Some((p, l)),
            _ => None,
        })
        .collect();
    if live.is_empty() {
        return Vec::new();
    }
    let fresh = fresh_name(f, "m");
    let mut out = Vec::new();
    for (pp, lp) in live.iter().filter(|(_, l)| !l.negated) {
        for (np, ln) in live.iter().filter(|(_, l)| l.negated) {
            if lp.atom != ln.atom {
                continue;
            }
            let detail = RuleDetail {
                pos_path: Some(pp.clone()),
                neg_path: Some(np.clone()),
                fresh: Some(fresh.clone()),
                ..Default::default()
            };
            out.push((apply_match(f, pp, np, &fresh, family).unwrap(), detail));
        }
    }
    out
}

fn push_unique(out: &mut Vec<Formula>, f: Formula) {
    if !out.contains(&f) {
        out.push(f);
    }
}

/// The premise set of Wait (plain) or Wait° (circ), without the stability
/// condition. `⊓x` sites get the least fresh `y` variable.
pub fn wait_premises(f: &Formula, family: Family) -> Vec<Formula> {
    let mut out = Vec::new();
    for path in live_sites(f) {
        match f.at(&path).unwrap() {
            Formula::Choice(Kind::Conj, c) => {
                for g in c {
                    push_unique(&mut out, f.replace_at(&path, g.clone()));
                }
            }
            Formula::Seq(Kind::Conj, ..) => {
                if let Some(g) = apply_switch(f, &path, Kind::Conj, family) {
                    push_unique(&mut out, g);
                }
            }
            Formula::Quant(Kind::Conj, ..) => {
                let y = Term::Var(fresh_name(f, "y"));
                push_unique(&mut out, apply_instantiate(f, &path, Kind::Conj, &y).unwrap());
            }
            _ => {}
        }
    }
    out
}

/// Premises of WaitBar: every `⊔` disjunct and every `▽` underline advance.
pub fn waitbar_premises(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    for path in live_sites(f) {
        match f.at(&path).unwrap() {
            Formula::Choice(Kind::Disj, c) => {
                for g in c {
                    push_unique(&mut out, f.replace_at(&path, g.clone()));
                }
            }
            Formula::Seq(Kind::Disj, ..) => {
                if let Some(g) = apply_switch(f, &path, Kind::Disj, Family::Circ) {
                    push_unique(&mut out, g);
                }
            }
            _ => {}
        }
    }
    out
}

/// Is `path` a surface, active site of `f`? Used by the checker.
pub fn site_is_live(f: &Formula, path: &[usize]) -> bool {
    is_live(f, path)
}
