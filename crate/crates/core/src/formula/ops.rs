use std::collections::BTreeMap;

use super::{taut, Atom, Formula, Kind, Literal, OccPath};

/// Replaces every sequential node by its underlined component.
pub fn capitalize(f: &Formula) -> Formula {
    match f {
        Formula::Seq(_, c, h) => capitalize(&c[*h]),
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(capitalize).collect()),
        Formula::Choice(k, c) => Formula::Choice(*k, c.iter().map(capitalize).collect()),
        Formula::Quant(k, v, b) => Formula::Quant(*k, v.clone(), Box::new(capitalize(b))),
        other => other.clone(),
    }
}

/// The classical formula whose validity decides stability.
///
/// Computed on the capitalization: surface `⊓`, `⊓x` become `⊤`, surface `⊔`,
/// `⊔x` become `⊥`, every general literal (negated or not) becomes `⊥` and a
/// hybrid `P_q` becomes `q` with its sign kept. No constant folding is done.
pub fn elementarize(f: &Formula) -> Formula {
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::Top | Formula::Bottom => f.clone(),
            Formula::Lit(l) => match &l.atom {
                Atom::General(_) => Formula::Bottom,
                Atom::Hybrid { elementary, .. } => Formula::Lit(Literal {
                    atom: Atom::Elementary(elementary.clone()),
                    args: l.args.clone(),
                    negated: l.negated,
                }),
                Atom::Elementary(_) => f.clone(),
            },
            Formula::Par(k, c) => Formula::Par(*k, c.iter().map(go).collect()),
            Formula::Choice(Kind::Conj, _) | Formula::Quant(Kind::Conj, ..) => Formula::Top,
            Formula::Choice(Kind::Disj, _) | Formula::Quant(Kind::Disj, ..) => Formula::Bottom,
            Formula::Seq(..) => unreachable!("capitalized"),
        }
    }
    go(&capitalize(f))
}

/// True iff the elementarization is a tautology. Each distinct atomic formula
/// counts as one propositional letter, which also covers the quantifier-free
/// first-order case.
pub fn is_stable(f: &Formula) -> bool {
    taut::is_tautology(&elementarize(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct OccFlags {
    pub surface: bool,
    pub active: bool,
    pub abandoned: bool,
    pub positive: bool,
}

/// Flags for every node, in pre-order.
pub fn classify_occurrences(f: &Formula) -> Vec<(OccPath, OccFlags)> {
    fn go(f: &Formula, path: &mut OccPath, flags: OccFlags, out: &mut Vec<(OccPath, OccFlags)>) {
        let positive = match f {
            Formula::Lit(l) => !l.negated,
            _ => true,
        };
        out.push((path.clone(), OccFlags { positive, ..flags }));
        for (i, c) in f.children().iter().enumerate() {
            let mut child = flags;
            match f {
                Formula::Choice(..) | Formula::Quant(..) => child.surface = false,
                Formula::Seq(_, _, h) => {
                    child.surface &= i <= *h;
                    child.active &= i == *h;
                    child.abandoned |= i < *h;
                }
                _ => {}
            }
            path.push(i);
            go(c, path, child, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    let root = OccFlags { surface: true, active: true, abandoned: false, positive: true };
    go(f, &mut Vec::new(), root, &mut out);
    out
}

/// Every hybrid atom has one positive and one negative occurrence, both
/// surface, and its elementary component appears nowhere else.
pub fn is_balanced(f: &Formula) -> bool {
    let flags = classify_occurrences(f);
    // (positive surface, negative surface, any other) per hybrid
    let mut hybrids: BTreeMap<(&str, &str), [usize; 3]> = BTreeMap::new();
    let mut elementary_uses: BTreeMap<&str, usize> = BTreeMap::new();
    for (path, fl) in &flags {
        let Some(Formula::Lit(l)) = f.at(path) else { continue };
        match &l.atom {
            Atom::Hybrid { general, elementary } => {
                *elementary_uses.entry(elementary).or_default() += 1;
                let slot = hybrids.entry((general, elementary)).or_default();
                match (fl.surface, l.negated) {
                    (true, false) => slot[0] += 1,
                    (true, true) => slot[1] += 1,
                    (false, _) => slot[2] += 1,
                }
            }
            Atom::Elementary(n) => *elementary_uses.entry(n).or_default() += 1,
            Atom::General(_) => {}
        }
    }
    hybrids
        .iter()
        .all(|(&(_, q), counts)| *counts == [1, 1, 0] && elementary_uses.get(q) == Some(&2))
}

/// Hybrid atoms become their general component; all underlines reset to 0.
pub fn general_dehybridization(f: &Formula) -> Formula {
    match f {
        Formula::Lit(l) => match &l.atom {
            Atom::Hybrid { general, .. } => Formula::Lit(Literal {
                atom: Atom::General(general.clone()),
                args: l.args.clone(),
                negated: l.negated,
            }),
            _ => f.clone(),
        },
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(general_dehybridization).collect()),
        Formula::Choice(k, c) => {
            Formula::Choice(*k, c.iter().map(general_dehybridization).collect())
        }
        Formula::Seq(k, c, _) => Formula::Seq(*k, c.iter().map(general_dehybridization).collect(), 0),
        Formula::Quant(k, v, b) => {
            Formula::Quant(*k, v.clone(), Box::new(general_dehybridization(b)))
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn capitalization() {
        assert_eq!(capitalize(&p("(~P * ~Q) | (P |> Q)")), p("(~P * ~Q) | P"));
        assert_eq!(capitalize(&p("(A &> [B]) & C")), p("B & C"));
        assert_eq!(capitalize(&p("p | q")), p("p | q"));
    }

    #[test]
    fn elementarization() {
        assert_eq!(elementarize(&p("(~P * ~Q) | (P |> Q)")), p("T | F"));
        assert_eq!(elementarize(&p("~q | q")), p("~q | q"));
        assert_eq!(elementarize(&p("~P | (P |> Q)")), p("F | F"));
        assert_eq!(elementarize(&p("~P_q | (P_q |> Q)")), p("~q | q"));
    }

    #[test]
    fn stability() {
        assert!(is_stable(&p("(~P * ~Q) | (P |> Q)")));
        assert!(!is_stable(&p("P | ~P")));
        assert!(is_stable(&p("T")));
        assert!(is_stable(&p("~P_q | P_q")));
    }

    #[test]
    fn occurrence_flags() {
        let f = p("(A &> [B]) & C");
        let flags: BTreeMap<_, _> = classify_occurrences(&f).into_iter().collect();
        let a = flags[&vec![0, 0]];
        assert!(a.abandoned && a.surface && !a.active);
        let b = flags[&vec![0, 1]];
        assert!(b.active && b.surface && !b.abandoned);

        let g = p("A + B");
        assert!(!classify_occurrences(&g)[1].1.surface);

        let h = p("A &> B");
        let hb = classify_occurrences(&h)[2].1;
        assert!(!hb.surface && !hb.active && !hb.abandoned);
    }

    #[test]
    fn balance() {
        assert!(is_balanced(&p("~P_q | P_q")));
        assert!(!is_balanced(&p("~P_q | P_q | q")));
        assert!(is_balanced(&p("(P + Q) -> (P |> Q)")));
        assert!(!is_balanced(&p("P_q | P_q")));
        assert!(!is_balanced(&p("~P_q | (P_q + R)")));
    }

    #[test]
    fn dehybridization() {
        assert_eq!(general_dehybridization(&p("~P_q | (A &> [B])")), p("~P | (A &> B)"));
        let plain = p("(P + Q) -> (P |> Q)");
        assert_eq!(general_dehybridization(&plain), plain);
        assert_eq!(general_dehybridization(&p("P_q + q")), p("P + q"));
        assert!(general_dehybridization(&p("~P_q | (A &> [B])")).is_plain());
    }
}
