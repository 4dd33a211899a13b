//! The quantifier fragment: choice quantifiers over terms, no blind
//! quantifiers. The search itself lives in the prover under `System::Cl11`;
//! this module is the entry point with first-order parsing and checks.
//!
//! `⊔x` is instantiated only with the terms already present plus one fresh
//! numeral. Fresh terms are interchangeable, so one stands for all of them.

use crate::formula::{elementarize, is_stable, parse_fo as parse_formula, Formula, ParseError};
use crate::prover::{
    check, decide_with_stats, CheckFailure, Decision, PreconditionError, ProofNode, SearchStats, System,
};

pub fn parse_fo(text: &str) -> Result<Formula, ParseError> {
    parse_formula(text)
}

pub fn print_fo(f: &Formula) -> String {
    f.canonical()
}

/// Surface `⊓x` become ⊤ and surface `⊔x` become ⊥, as for choice connectives.
pub fn elementarize_fo(f: &Formula) -> Formula {
    elementarize(f)
}

/// Each atomic formula with its exact arguments counts as its own letter, which
/// decides validity of quantifier-free formulas without equality.
pub fn stable_fo(f: &Formula) -> bool {
    is_stable(f)
}

pub fn decide_fo(f: &Formula) -> Result<Decision, PreconditionError> {
    decide_fo_with_stats(f).map(|(d, _)| d)
}

pub fn decide_fo_with_stats(f: &Formula) -> Result<(Decision, SearchStats), PreconditionError> {
    decide_with_stats(f, System::Cl11)
}

pub fn check_fo(p: &ProofNode) -> Result<(), CheckFailure> {
    check(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{corpus, Connective, CorpusSpec};
    use crate::formula::{parse, Term};
    use crate::prover::{decide, RuleTag};

    const MERGE: &str = "(*x:(~P(x) |> P(x)) & *x:(P(x) |> ~P(x))) -> *x:(P(x) + ~P(x))";
    const REDUCTION: &str = "(*x:+y:(q(x) <-> p(y)) & *x:(~p(x) |> p(x))) -> *x:(~q(x) |> q(x))";

    fn proof_of(text: &str) -> Option<ProofNode> {
        let f = parse_fo(text).unwrap();
        let (d, stats) = decide_fo_with_stats(&f).unwrap();
        assert!(stats.max_depth <= stats.measure, "{text}: depth {} > {}", stats.max_depth, stats.measure);
        match d {
            Decision::Provable(p) => {
                check_fo(&p).unwrap();
                Some(p)
            }
            Decision::Unprovable => None,
        }
    }

    #[test]
    fn merging_two_switchable_answers() {
        let p = proof_of(MERGE).expect("provable");
        // the last step waits for the universal choice
        assert_eq!(p.rule, RuleTag::Wait);
        assert_eq!(p.premises.len(), 1);
        assert_eq!(p.size(), 13);
        assert_eq!(p.count_rule(RuleTag::Match), 3);
    }

    #[test]
    fn mapping_reduction() {
        let p = proof_of(REDUCTION).expect("provable");
        assert_eq!(p.rule, RuleTag::Wait);
        assert_eq!(p.size(), 7);
        assert_eq!(p.count_rule(RuleTag::Match), 0);
    }

    #[test]
    fn excluded_middle_choice_fails() {
        assert!(proof_of("*x:(p(x) + ~p(x))").is_none());
        assert!(proof_of("*x:(p(x) | ~p(x))").is_some());
    }

    #[test]
    fn stability_examples() {
        // first line of the merge proof, derived from no premises
        assert!(stable_fo(&parse_fo("~q(y) | P(y) | q(y)").unwrap()));
        assert!(!stable_fo(&parse_fo("p(x) | ~p(y)").unwrap()));
        let last = parse_fo("+x:(P(x) &> ~P(x)) | +x:(~P(x) &> P(x)) | *x:(P(x) + ~P(x))").unwrap();
        assert_eq!(elementarize_fo(&last).canonical(), "(F | F | T)");
        assert!(stable_fo(&last));
    }

    #[test]
    fn print_round_trip() {
        for text in [MERGE, REDUCTION, "p(1) | ~p(x)"] {
            let f = parse_fo(text).unwrap();
            assert_eq!(parse_fo(&print_fo(&f)).unwrap(), f);
        }
    }

    #[test]
    fn wait_needs_a_fresh_variable() {
        let f = parse_fo("*x:(p(x) | ~p(x)) | q(y)").unwrap();
        let Decision::Provable(mut p) = decide_fo(&f).unwrap() else { panic!() };
        assert!(check_fo(&p).is_ok());
        let reused = parse_fo("(p(y) | ~p(y)) | q(y)").unwrap();
        assert_eq!(p.premises.len(), 1);
        p.premises[0].formula = reused;
        assert!(check_fo(&p).is_err());
    }

    #[test]
    fn fresh_constant_for_existential_choice() {
        // any instance works, and the candidate set offers one
        assert!(proof_of("+x:(p(x) | ~p(x))").is_some());
        assert!(proof_of("+x:p(x) | ~p(1)").is_some());
        assert!(proof_of("+x:p(x) | ~p(y)").is_some());
        assert!(proof_of("+x:p(x) | ~p(1) | ~p(2)").is_some());
        assert!(proof_of("+x:(p(x) & q(x)) | ~p(1) | ~q(2)").is_none());
    }

    fn rename(f: &Formula, from: &str, to: &str) -> Formula {
        match f {
            Formula::Quant(k, v, b) => {
                let v = if v == from { to.to_string() } else { v.clone() };
                Formula::Quant(*k, v, Box::new(rename(b, from, to)))
            }
            Formula::Lit(l) => {
                let mut l = l.clone();
                for t in &mut l.args {
                    if *t == Term::Var(from.into()) {
                        *t = Term::Var(to.into());
                    }
                }
                Formula::Lit(l)
            }
            _ => {
                let mut g = f.clone();
                for c in g.children_mut() {
                    *c = rename(c, from, to);
                }
                g
            }
        }
    }

    #[test]
    fn renaming_invariance() {
        let cases = [
            (MERGE, "x", "u"),
            (REDUCTION, "y", "w"),
            (REDUCTION, "x", "v"),
            ("*x:(p(x) + ~p(x))", "x", "z"),
            ("*x:(p(x) | ~p(x)) | q(y)", "y", "y1"),
        ];
        for (text, from, to) in cases {
            let f = parse_fo(text).unwrap();
            let g = rename(&f, from, to);
            assert_ne!(f, g);
            let status = |h: &Formula| decide_fo(h).unwrap().is_provable();
            assert_eq!(status(&f), status(&g), "{text} with {from} renamed to {to}");
        }
    }

    #[test]
    fn propositional_fragment_agrees() {
        let spec = CorpusSpec::new(&["p", "P", "Q"], &Connective::ALL, 6);
        for f in corpus(&spec) {
            let plain = decide(&f, System::Cl9).unwrap().is_provable();
            let fo = decide_fo(&f).unwrap();
            assert_eq!(plain, fo.is_provable(), "{f}");
            if let Decision::Provable(p) = fo {
                check_fo(&p).unwrap();
            }
        }
        let f = parse("(P + Q) -> (P |> Q)").unwrap();
        assert!(decide_fo(&f).unwrap().is_provable());
    }
}
