//! Classical tautology checking for formulas built from `⊤,⊥,¬,∧,∨` and
//! literals. Every distinct atomic formula (name plus arguments, sign
//! ignored) is an independent propositional letter.
//!
//! Up to [`TABLE_LIMIT`] letters the full truth table is evaluated, 64 rows per
//! machine word. Above that a splitting search with three-valued partial
//! evaluation is used.

use std::collections::BTreeMap;

use super::{Formula, Kind, Literal};

pub const TABLE_LIMIT: usize = 20;

pub type Assignment = BTreeMap<String, bool>;

/// The letter a literal stands for, without its sign.
pub fn letter_key(l: &Literal) -> String {
    Literal { negated: false, ..l.clone() }.to_string()
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        super::print::write_literal(self, f)
    }
}

enum Node {
    Const(bool),
    Var(usize, bool),
    Par(Kind, Vec<Node>),
}

fn compile(f: &Formula, letters: &mut Vec<String>) -> Node {
    match f {
        Formula::Top => Node::Const(true),
        Formula::Bottom => Node::Const(false),
        Formula::Lit(l) => {
            let key = letter_key(l);
            let idx = match letters.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    letters.push(key);
                    letters.len() - 1
                }
            };
            Node::Var(idx, l.negated)
        }
        Formula::Par(k, c) => Node::Par(*k, c.iter().map(|x| compile(x, letters)).collect()),
        other => panic!("tautology check on a non-classical formula: {other}"),
    }
}

/// Bit pattern of letter `var` across word `word` of the table.
fn letter_word(var: usize, word: usize) -> u64 {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if var < 6 {
        LOW[var]
    } else if (word >> (var - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

fn eval_word(n: &Node, word: usize) -> u64 {
    match n {
        Node::Const(true) => u64::MAX,
        Node::Const(false) => 0,
        Node::Var(v, neg) => {
            let w = letter_word(*v, word);
            if *neg {
                !w
            } else {
                w
            }
        }
        Node::Par(Kind::Conj, c) => c.iter().fold(u64::MAX, |acc, x| acc & eval_word(x, word)),
        Node::Par(Kind::Disj, c) => c.iter().fold(0, |acc, x| acc | eval_word(x, word)),
    }
}

/// Row index of a falsifying valuation, via the truth table.
fn table_counterexample(n: &Node, letters: usize) -> Option<u64> {
    let words = 1usize << letters.saturating_sub(6);
    let valid_mask = if letters >= 6 { u64::MAX } else { (1u64 << (1 << letters)) - 1 };
    (0..words).find_map(|w| {
        let zeros = !eval_word(n, w) & valid_mask;
        (zeros != 0).then(|| (w as u64) << 6 | u64::from(zeros.trailing_zeros()))
    })
}

fn partial(n: &Node, vals: &[Option<bool>]) -> Option<bool> {
    match n {
        Node::Const(b) => Some(*b),
        Node::Var(v, neg) => vals[*v].map(|b| b != *neg),
        Node::Par(k, c) => {
            let absorbing = *k == Kind::Disj;
            let mut unknown = false;
            for x in c {
                match partial(x, vals) {
                    Some(b) if b == absorbing => return Some(absorbing),
                    Some(_) => {}
                    None => unknown = true,
                }
            }
            (!unknown).then_some(!absorbing)
        }
    }
}

fn split_counterexample(n: &Node, vals: &mut Vec<Option<bool>>, next: usize) -> bool {
    match partial(n, vals) {
        Some(true) => false,
        Some(false) => true,
        None => {
            for b in [false, true] {
                vals[next] = Some(b);
                if split_counterexample(n, vals, next + 1) {
                    return true;
                }
            }
            vals[next] = None;
            false
        }
    }
}

/// A valuation making `f` false, or `None` when `f` is a tautology.
pub fn falsifying_assignment(f: &Formula) -> Option<Assignment> {
    let mut letters = Vec::new();
    let node = compile(f, &mut letters);
    if letters.len() <= TABLE_LIMIT {
        let row = table_counterexample(&node, letters.len())?;
        Some(letters.into_iter().enumerate().map(|(i, k)| (k, (row >> i) & 1 == 1)).collect())
    } else {
        let mut vals = vec![None; letters.len()];
        if !split_counterexample(&node, &mut vals, 0) {
            return None;
        }
        Some(letters.into_iter().zip(vals).map(|(k, v)| (k, v.unwrap_or(false))).collect())
    }
}

pub fn is_tautology(f: &Formula) -> bool {
    falsifying_assignment(f).is_none()
}

/// Classical value under `a`; letters missing from `a` count as false.
pub fn evaluate(f: &Formula, a: &Assignment) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Lit(l) => a.get(&letter_key(l)).copied().unwrap_or(false) != l.negated,
        Formula::Par(Kind::Conj, c) => c.iter().all(|x| evaluate(x, a)),
        Formula::Par(Kind::Disj, c) => c.iter().any(|x| evaluate(x, a)),
        other => panic!("evaluation of a non-classical formula: {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn letters(n: usize) -> Vec<Formula> {
        (0..n).map(|i| Formula::elem(&format!("a{i}"))).collect()
    }

    #[test]
    fn small_cases() {
        assert!(is_tautology(&parse("p | ~p").unwrap()));
        assert!(!is_tautology(&parse("p | q").unwrap()));
        assert!(is_tautology(&parse("T").unwrap()));
        assert!(!is_tautology(&parse("F").unwrap()));
        assert!(is_tautology(&parse("T | F").unwrap()));
    }

    #[test]
    fn counterexample_falsifies() {
        let f = parse("~p | q").unwrap();
        let a = falsifying_assignment(&f).unwrap();
        assert!(a["p"]);
        assert!(!a["q"]);
        assert!(!evaluate(&f, &a));
    }

    #[test]
    fn wide_formulas_use_both_engines() {
        // (a0 | ~a0) & ... over many letters, plus an extra disjunct
        for n in [7, 12, 21] {
            let ls = letters(n);
            let excluded: Vec<Formula> =
                ls.iter().map(|l| Formula::Par(Kind::Disj, vec![l.clone(), l.negate()])).collect();
            let valid = Formula::Par(Kind::Conj, excluded);
            assert!(is_tautology(&valid), "n={n}");
            let mut disj = ls.clone();
            disj.push(ls[n - 1].negate());
            assert!(is_tautology(&Formula::Par(Kind::Disj, disj)));
            let invalid = Formula::Par(Kind::Disj, ls.clone());
            let a = falsifying_assignment(&invalid).unwrap();
            assert!(!evaluate(&invalid, &a));
            assert!(a.values().all(|v| !v));
        }
    }

    #[test]
    fn letters_include_arguments() {
        let f = crate::formula::parse_fo("p(x) | ~p(y)").unwrap();
        assert!(!is_tautology(&f));
        let g = crate::formula::parse_fo("p(x) | ~p(x)").unwrap();
        assert!(is_tautology(&g));
    }
}
