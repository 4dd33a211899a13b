use proptest::prelude::*;

use clarena_core::formula::{
    capitalize, elementarize, is_stable, parse, Atom, Formula, Kind, Literal, Player,
};
use clarena_core::game::{interpret, outcome, Interpretation};
use clarena_core::prover::{check, decide, measure, refute, Decision, Refutation, RuleTag, System};
use clarena_core::strategy::{
    default_cap, env_from_refutation, machine_from_proof, play, Adversary,
};

fn literal() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        Just(Atom::Elementary("p".into())),
        Just(Atom::Elementary("q".into())),
        Just(Atom::General("P".into())),
        Just(Atom::General("Q".into())),
        Just(Atom::Hybrid { general: "P".into(), elementary: "r".into() }),
    ];
    prop_oneof![
        8 => (atom, any::<bool>()).prop_map(|(a, neg)| Formula::Lit(Literal::new(a, neg))),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ]
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Conj), Just(Kind::Disj)]
}

/// Hyperformulas: any connective, arity two or three, any underline.
fn hyperformula() -> impl Strategy<Value = Formula> {
    literal().prop_recursive(3, 24, 3, |inner| {
        (0..3u8, kind(), prop::collection::vec(inner, 2..=3), any::<prop::sample::Index>()).prop_map(
            |(shape, k, kids, head)| match shape {
                0 => Formula::Par(k, kids),
                1 => Formula::Choice(k, kids),
                _ => {
                    let h = head.index(kids.len());
                    Formula::Seq(k, kids, h)
                }
            },
        )
    })
}

/// Plain formulas over elementary `p`, `q` and general `P`, small enough to
/// decide quickly.
fn plain_formula(elementary_only: bool) -> impl Strategy<Value = Formula> {
    let names: Vec<&'static str> = if elementary_only { vec!["p", "q"] } else { vec!["p", "q", "P"] };
    let leaf = (prop::sample::select(names), any::<bool>()).prop_map(|(n, neg)| {
        let atom = if n == "P" { Atom::General(n.into()) } else { Atom::Elementary(n.into()) };
        Formula::Lit(Literal::new(atom, neg))
    });
    leaf.prop_recursive(3, 7, 2, |inner| {
        (0..3u8, kind(), inner.clone(), inner).prop_map(|(shape, k, a, b)| match shape {
            0 => Formula::Par(k, vec![a, b]),
            1 => Formula::Choice(k, vec![a, b]),
            _ => Formula::Seq(k, vec![a, b], 0),
        })
    })
}

fn classical(f: &Formula, row: u32) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Lit(l) => {
            let Atom::Elementary(n) = &l.atom else { unreachable!() };
            let bit = match n.as_str() {
                "p" => 0,
                "q" => 1,
                _ => 2,
            };
            (row >> bit & 1 == 1) != l.negated
        }
        Formula::Par(Kind::Conj, c) => c.iter().all(|g| classical(g, row)),
        Formula::Par(Kind::Disj, c) => c.iter().any(|g| classical(g, row)),
        _ => unreachable!(),
    }
}

fn classical_formula() -> impl Strategy<Value = Formula> {
    let leaf = (prop::sample::select(vec!["p", "q", "r"]), any::<bool>())
        .prop_map(|(n, neg)| Formula::Lit(Literal::new(Atom::Elementary(n.into()), neg)));
    leaf.prop_recursive(4, 12, 3, |inner| {
        (kind(), prop::collection::vec(inner, 2..=3)).prop_map(|(k, kids)| Formula::Par(k, kids))
    })
}

fn no_game_nodes(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |n| match n {
        Formula::Choice(..) | Formula::Seq(..) | Formula::Quant(..) => ok = false,
        Formula::Lit(l) if !matches!(l.atom, Atom::Elementary(_)) => ok = false,
        _ => {}
    });
    ok
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in hyperformula()) {
        prop_assert_eq!(parse(&f.canonical()).unwrap(), f);
    }

    #[test]
    fn negation_is_an_involution(f in hyperformula()) {
        prop_assert_eq!(f.negate().negate(), f.clone());
        let flipped = |c: &[Formula]| c.iter().map(Formula::negate).collect::<Vec<_>>();
        let expected = match &f {
            Formula::Top => Formula::Bottom,
            Formula::Bottom => Formula::Top,
            Formula::Lit(l) => Formula::Lit(Literal { negated: !l.negated, ..l.clone() }),
            Formula::Par(k, c) => Formula::Par(k.dual(), flipped(c)),
            Formula::Choice(k, c) => Formula::Choice(k.dual(), flipped(c)),
            Formula::Seq(k, c, h) => Formula::Seq(k.dual(), flipped(c), *h),
            Formula::Quant(..) => unreachable!(),
        };
        prop_assert_eq!(f.negate(), expected);
    }

    #[test]
    fn elementarization_is_classical(f in hyperformula()) {
        prop_assert!(no_game_nodes(&elementarize(&f)));
    }

    #[test]
    fn capitalization_is_idempotent(f in hyperformula()) {
        let c = capitalize(&f);
        prop_assert_eq!(capitalize(&c), c.clone());
        prop_assert_eq!(elementarize(&c), elementarize(&f));
    }

    #[test]
    fn stability_of_classical_formulas_is_tautology(f in classical_formula()) {
        let tautology = (0..8).all(|row| classical(&f, row));
        prop_assert_eq!(is_stable(&f), tautology);
    }

    #[test]
    fn proofs_check_and_the_measure_falls(f in plain_formula(false)) {
        if let Decision::Provable(p) = decide(&f, System::Cl9).unwrap() {
            prop_assert!(check(&p).is_ok());
            let mut bad = None;
            p.visit(&mut |n| {
                if n.rule == RuleTag::Wait && !is_stable(&n.formula) {
                    bad = Some(format!("instable Wait node {}", n.formula));
                }
                for q in &n.premises {
                    if measure(&q.formula) >= measure(&n.formula) {
                        bad = Some(format!("{} does not lower the measure of {}", q.formula, n.formula));
                    }
                }
            });
            prop_assert!(bad.is_none(), "{:?}", bad);
        }
    }

    #[test]
    fn plain_and_circ_systems_agree(f in plain_formula(false)) {
        let plain = decide(&f, System::Cl9).unwrap().is_provable();
        let circ = decide(&f, System::Cl9Circ).unwrap().is_provable();
        prop_assert_eq!(plain, circ);
    }

    #[test]
    fn machine_moves_are_always_legal(f in plain_formula(false), seed in 1..1000u64) {
        if let Decision::Provable(p) = decide(&f, System::Cl9).unwrap() {
            for i in Interpretation::standard_family(&f) {
                let g = interpret(&f, &i).unwrap();
                let mut machine = machine_from_proof(&p, &i).unwrap();
                let mut env = Adversary::random(Player::Bottom, seed);
                let res = play(&g, &mut machine, &mut env, default_cap(&g)).unwrap();
                prop_assert!(res.forfeit.is_none(), "{}: {:?}", f, res.forfeit);
                prop_assert_eq!(res.winner, Player::Top);
            }
        }
    }

    #[test]
    fn limit_formulas_are_wait_conclusions(f in plain_formula(true), seed in 1..1000u64) {
        if let Refutation::Refutable(r) = refute(&f).unwrap() {
            let i = Interpretation::default_for(&f);
            let g = interpret(&f, &i).unwrap();
            let mut env = env_from_refutation(&r, &i).unwrap();
            let mut machine = Adversary::random(Player::Top, seed);
            let res = play(&g, &mut machine, &mut env, default_cap(&g)).unwrap();
            let limit = res.limit_formula.unwrap();
            let mut found = false;
            r.visit(&mut |n| found |= n.rule == RuleTag::WaitBar && n.formula == limit);
            prop_assert!(found, "{} is no WaitBar node", limit);
            prop_assert!(!is_stable(&limit));
            prop_assert!(outcome(&g, &res.run) == res.winner);
        }
    }
}
