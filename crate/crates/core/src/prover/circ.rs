//! Conversion of plain proofs into ° proofs.
//!
//! The conversion walks the plain proof top-down carrying the hyperformula
//! that stands for each plain formula: `collapse(hyper) == plain` at every
//! node. Plain paths are translated through the kept (abandoned) components.

use std::collections::BTreeSet;

use super::rules::{self, Family, RuleDetail, RuleTag};
use super::ProofNode;
use crate::formula::{Atom, Formula, Kind, Literal};

/// The plain formula a hyperformula stands for: abandoned components are
/// dropped, a single remaining component stands for itself, hybrid atoms
/// become their elementary component.
pub fn collapse(h: &Formula) -> Formula {
    match h {
        Formula::Lit(l) => match &l.atom {
            Atom::Hybrid { elementary, .. } => Formula::Lit(Literal {
                atom: Atom::Elementary(elementary.clone()),
                ..l.clone()
            }),
            _ => h.clone(),
        },
        Formula::Seq(k, c, head) => {
            let rest: Vec<Formula> = c[*head..].iter().map(collapse).collect();
            if rest.len() == 1 {
                rest.into_iter().next().unwrap()
            } else {
                Formula::Seq(*k, rest, 0)
            }
        }
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(collapse).collect()),
        Formula::Choice(k, c) => Formula::Choice(*k, c.iter().map(collapse).collect()),
        Formula::Quant(k, v, b) => Formula::Quant(*k, v.clone(), Box::new(collapse(b))),
        other => other.clone(),
    }
}

/// Translates a path in `collapse(h)` into a path in `h`.
fn lift_path(h: &Formula, plain: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut node = h;
    let mut rest = plain;
    loop {
        match node {
            Formula::Seq(_, c, head) if c.len() - head == 1 => {
                out.push(*head);
                node = &c[*head];
            }
            _ => {
                let Some((&i, tail)) = rest.split_first() else { return out };
                let i = match node {
                    Formula::Seq(_, _, head) => head + i,
                    _ => i,
                };
                out.push(i);
                node = &node.children()[i];
                rest = tail;
            }
        }
    }
}

fn names_in_proof(p: &ProofNode, out: &mut BTreeSet<String>) {
    out.extend(rules::all_names(&p.formula));
    for q in &p.premises {
        names_in_proof(q, out);
    }
}

fn rename_atom(f: &Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::Lit(l) => match &l.atom {
            Atom::Elementary(n) if n == from => {
                Formula::Lit(Literal { atom: Atom::Elementary(to.to_string()), ..l.clone() })
            }
            _ => f.clone(),
        },
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(|x| rename_atom(x, from, to)).collect()),
        Formula::Choice(k, c) => {
            Formula::Choice(*k, c.iter().map(|x| rename_atom(x, from, to)).collect())
        }
        Formula::Seq(k, c, h) => {
            Formula::Seq(*k, c.iter().map(|x| rename_atom(x, from, to)).collect(), *h)
        }
        Formula::Quant(k, v, b) => Formula::Quant(*k, v.clone(), Box::new(rename_atom(b, from, to))),
        other => other.clone(),
    }
}

fn rename_proof(p: &ProofNode, from: &str, to: &str) -> ProofNode {
    let mut detail = p.detail.clone();
    if detail.fresh.as_deref() == Some(from) {
        detail.fresh = Some(to.to_string());
    }
    ProofNode {
        formula: rename_atom(&p.formula, from, to),
        rule: p.rule,
        detail,
        premises: p.premises.iter().map(|q| rename_proof(q, from, to)).collect(),
    }
}

/// Converts a checked plain proof into a ° proof of the same formula.
pub fn to_circ(p: &ProofNode) -> ProofNode {
    convert(p, p.formula.clone())
}

fn convert(p: &ProofNode, hyper: Formula) -> ProofNode {
    debug_assert_eq!(collapse(&hyper), p.formula);
    let d = &p.detail;
    let (rule, detail, premises) = match p.rule {
        RuleTag::Choose => {
            let path = lift_path(&hyper, &d.path);
            let index = d.index.expect("propositional choose");
            let next = rules::apply_choose(&hyper, &path, index, Kind::Disj).expect("choose site");
            let detail = RuleDetail { index: Some(index), ..RuleDetail::at(&path) };
            (RuleTag::ChooseC, detail, vec![convert(&p.premises[0], next)])
        }
        RuleTag::Switch => {
            let path = lift_path(&hyper, &d.path);
            let next =
                rules::apply_switch(&hyper, &path, Kind::Disj, Family::Circ).expect("switch site");
            (RuleTag::SwitchC, RuleDetail::at(&path), vec![convert(&p.premises[0], next)])
        }
        RuleTag::Match => {
            let pos = lift_path(&hyper, d.pos_path.as_ref().unwrap());
            let neg = lift_path(&hyper, d.neg_path.as_ref().unwrap());
            let wanted = d.fresh.clone().unwrap();
            let mut premise = p.premises[0].clone();
            let mut fresh = wanted.clone();
            if rules::all_names(&hyper).contains(&wanted) {
                // The name is still in use in a kept component: rename the
                // subproof so the hybrid atom stays balanced.
                let mut taken = rules::all_names(&hyper);
                names_in_proof(&premise, &mut taken);
                fresh = (1..).map(|i| format!("m{i}")).find(|n| !taken.contains(n)).unwrap();
                premise = rename_proof(&premise, &wanted, &fresh);
            }
            let next = rules::apply_match(&hyper, &pos, &neg, &fresh, Family::Circ).expect("match");
            let detail = RuleDetail {
                pos_path: Some(pos),
                neg_path: Some(neg),
                fresh: Some(fresh),
                ..Default::default()
            };
            (RuleTag::MatchC, detail, vec![convert(&premise, next)])
        }
        RuleTag::Wait => {
            let premises = rules::wait_premises(&hyper, Family::Circ)
                .into_iter()
                .map(|h| {
                    let plain = collapse(&h);
                    let q = p
                        .premises
                        .iter()
                        .find(|q| q.formula == plain)
                        .unwrap_or_else(|| panic!("no plain premise for {h}"));
                    convert(q, h)
                })
                .collect();
            (RuleTag::WaitC, RuleDetail::default(), premises)
        }
        other => panic!("to_circ expects a plain proof, found {other:?}"),
    };
    ProofNode { formula: hyper, rule, detail, premises }
}
