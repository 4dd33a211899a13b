//! Exhaustive formula enumeration by size.
//!
//! Formulas are built from literals with binary connectives only. Size counts
//! every atom, connective and negation sign, so `~p` has size 2 and
//! `(p & ~q)` size 4. The output order is fixed: by size, then by
//! connective, then by the sizes and order of the two operands.

use std::fmt;
use std::str::FromStr;

use crate::formula::{Atom, Formula, Kind, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    Par(Kind),
    Choice(Kind),
    Seq(Kind),
}

impl Connective {
    pub const ALL: [Connective; 6] = [
        Connective::Par(Kind::Conj),
        Connective::Par(Kind::Disj),
        Connective::Choice(Kind::Conj),
        Connective::Choice(Kind::Disj),
        Connective::Seq(Kind::Conj),
        Connective::Seq(Kind::Disj),
    ];

    pub const CLASSICAL: [Connective; 2] = [Connective::Par(Kind::Conj), Connective::Par(Kind::Disj)];

    fn build(self, a: Formula, b: Formula) -> Formula {
        match self {
            Connective::Par(k) => Formula::Par(k, vec![a, b]),
            Connective::Choice(k) => Formula::Choice(k, vec![a, b]),
            Connective::Seq(k) => Formula::Seq(k, vec![a, b], 0),
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::Par(Kind::Conj) => "&",
            Connective::Par(Kind::Disj) => "|",
            Connective::Choice(Kind::Conj) => "*",
            Connective::Choice(Kind::Disj) => "+",
            Connective::Seq(Kind::Conj) => "&>",
            Connective::Seq(Kind::Disj) => "|>",
        })
    }
}

impl FromStr for Connective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Connective::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown connective {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    /// Lowercase names are elementary atoms, uppercase ones general.
    pub atoms: Vec<String>,
    pub connectives: Vec<Connective>,
    pub max_size: usize,
    /// Also use `T` and `F` as leaves.
    pub constants: bool,
}

impl CorpusSpec {
    pub fn new(atoms: &[&str], connectives: &[Connective], max_size: usize) -> Self {
        CorpusSpec {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            connectives: connectives.to_vec(),
            max_size,
            constants: false,
        }
    }
}

fn literal(name: &str, negated: bool) -> Formula {
    let atom = if name.starts_with(|c: char| c.is_ascii_uppercase()) {
        Atom::General(name.into())
    } else {
        Atom::Elementary(name.into())
    };
    Formula::Lit(Literal::new(atom, negated))
}

/// Formulas of each exact size from 0 to `spec.max_size`.
pub fn by_size(spec: &CorpusSpec) -> Vec<Vec<Formula>> {
    let mut out: Vec<Vec<Formula>> = vec![Vec::new(); spec.max_size + 1];
    for size in 1..=spec.max_size {
        let mut here = Vec::new();
        match size {
            1 => {
                here.extend(spec.atoms.iter().map(|a| literal(a, false)));
                if spec.constants {
                    here.extend([Formula::Top, Formula::Bottom]);
                }
            }
            2 => here.extend(spec.atoms.iter().map(|a| literal(a, true))),
            _ => {}
        }
        for &c in &spec.connectives {
            for left in 1..size.saturating_sub(1) {
                let right = size - 1 - left;
                for a in &out[left] {
                    for b in &out[right] {
                        here.push(c.build(a.clone(), b.clone()));
                    }
                }
            }
        }
        out[size] = here;
    }
    out
}

/// Every formula up to the size bound, smallest first.
pub fn corpus(spec: &CorpusSpec) -> Vec<Formula> {
    by_size(spec).into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let spec = CorpusSpec::new(&["p"], &Connective::CLASSICAL, 4);
        let sizes: Vec<usize> = by_size(&spec).iter().map(Vec::len).collect();
        // p; ~p; p&p, p|p; p&~p, ~p&p and the same for |
        assert_eq!(sizes, [0, 1, 1, 2, 4]);
    }

    #[test]
    fn deterministic_and_well_sized() {
        let spec = CorpusSpec::new(&["p", "q", "P"], &Connective::ALL, 5);
        let a = corpus(&spec);
        assert_eq!(a, corpus(&spec));
        for (size, fs) in by_size(&spec).iter().enumerate() {
            for f in fs {
                assert_eq!(f.size(), size);
                assert_eq!(crate::formula::parse(&f.canonical()).unwrap(), *f);
            }
        }
    }

    #[test]
    fn connective_text() {
        for c in Connective::ALL {
            assert_eq!(c.to_string().parse::<Connective>(), Ok(c));
        }
    }
}
