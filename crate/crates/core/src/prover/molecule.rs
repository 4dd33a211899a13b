//! Molecules: replacing general atoms by `⊓⊔` combinations of fresh
//! elementary atoms, and the inverse floorification.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::formula::{Atom, Formula, Kind, Literal};

/// `atoms[P][a][b]` names the small molecule with indices `a+1, b+1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoleculeMap {
    pub width: usize,
    pub atoms: BTreeMap<String, Vec<Vec<String>>>,
}

impl MoleculeMap {
    fn large(&self, general: &str) -> Formula {
        Formula::Choice(
            Kind::Conj,
            self.atoms[general].iter().map(|row| medium_of(row)).collect(),
        )
    }
}

fn medium_of(row: &[String]) -> Formula {
    Formula::Choice(Kind::Disj, row.iter().map(|n| Formula::elem(n)).collect())
}

fn general_names(f: &Formula) -> BTreeSet<String> {
    f.literals()
        .into_iter()
        .filter_map(|l| match &l.atom {
            Atom::General(n) => Some(n.clone()),
            _ => None,
        })
        .collect()
}

/// Replaces each general atom by its large molecule; `m` is the number of
/// general occurrences, but at least 2.
pub fn lift(f: &Formula) -> (Formula, MoleculeMap) {
    let generals: Vec<String> = general_names(f).into_iter().collect();
    if generals.is_empty() {
        return (f.clone(), MoleculeMap::default());
    }
    let width = f.general_occurrences().max(2);
    let used = f.atom_names();
    let mut prefix = String::from("k");
    let name = |prefix: &str, idx: usize, a: usize, b: usize| format!("{prefix}{idx}a{a}b{b}");
    while (0..generals.len()).any(|i| {
        (1..=width).any(|a| (1..=width).any(|b| used.contains(&name(&prefix, i, a, b))))
    }) {
        prefix.push('k');
    }
    let atoms = generals
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let grid = (1..=width)
                .map(|a| (1..=width).map(|b| name(&prefix, i, a, b)).collect())
                .collect();
            (g.clone(), grid)
        })
        .collect();
    let map = MoleculeMap { width, atoms };
    (replace_generals(f, &map), map)
}

fn replace_generals(f: &Formula, map: &MoleculeMap) -> Formula {
    match f {
        Formula::Lit(Literal { atom: Atom::General(n), negated, .. }) => {
            let large = map.large(n);
            if *negated {
                large.negate()
            } else {
                large
            }
        }
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(|x| replace_generals(x, map)).collect()),
        Formula::Choice(k, c) => {
            Formula::Choice(*k, c.iter().map(|x| replace_generals(x, map)).collect())
        }
        Formula::Seq(k, c, h) => {
            Formula::Seq(*k, c.iter().map(|x| replace_generals(x, map)).collect(), *h)
        }
        other => other.clone(),
    }
}

/// Which general atom, and which sign, a molecule of `map` stands for.
struct Index<'a> {
    map: &'a MoleculeMap,
    small: BTreeMap<&'a str, &'a str>,
}

impl<'a> Index<'a> {
    fn new(map: &'a MoleculeMap) -> Self {
        let mut small = BTreeMap::new();
        for (g, grid) in &map.atoms {
            for n in grid.iter().flatten() {
                small.insert(n.as_str(), g.as_str());
            }
        }
        Index { map, small }
    }

    fn general_literal(g: &str, negated: bool) -> Formula {
        Formula::Lit(Literal::new(Atom::General(g.to_string()), negated))
    }

    /// A large or medium molecule, positive or negative.
    fn molecule(&self, f: &Formula) -> Option<Formula> {
        for (g, grid) in &self.map.atoms {
            let large = self.map.large(g);
            if *f == large {
                return Some(Self::general_literal(g, false));
            }
            if *f == large.negate() {
                return Some(Self::general_literal(g, true));
            }
            for row in grid {
                let medium = medium_of(row);
                if *f == medium {
                    return Some(Self::general_literal(g, false));
                }
                if *f == medium.negate() {
                    return Some(Self::general_literal(g, true));
                }
            }
        }
        None
    }

    fn small_of<'f>(&self, f: &'f Formula) -> Option<(&'f str, bool)> {
        match f {
            Formula::Lit(Literal { atom: Atom::Elementary(n), negated, .. })
                if self.small.contains_key(n.as_str()) =>
            {
                Some((n.as_str(), *negated))
            }
            _ => None,
        }
    }
}

/// Counts the independent occurrences of each small molecule.
fn count_small<'f>(f: &'f Formula, idx: &Index, counts: &mut BTreeMap<&'f str, usize>) {
    if idx.molecule(f).is_some() {
        return;
    }
    if let Some((n, _)) = idx.small_of(f) {
        *counts.entry(n).or_default() += 1;
        return;
    }
    for c in f.children() {
        count_small(c, idx, counts);
    }
}

fn floor_with(f: &Formula, idx: &Index, counts: &BTreeMap<&str, usize>) -> Formula {
    if let Some(g) = idx.molecule(f) {
        return g;
    }
    if let Some((n, negated)) = idx.small_of(f) {
        if counts.get(n) == Some(&1) {
            return Index::general_literal(idx.small[n], negated);
        }
        return f.clone();
    }
    match f {
        Formula::Par(k, c) => Formula::Par(*k, c.iter().map(|x| floor_with(x, idx, counts)).collect()),
        Formula::Choice(k, c) => {
            Formula::Choice(*k, c.iter().map(|x| floor_with(x, idx, counts)).collect())
        }
        Formula::Seq(k, c, h) => {
            Formula::Seq(*k, c.iter().map(|x| floor_with(x, idx, counts)).collect(), *h)
        }
        other => other.clone(),
    }
}

/// Replaces independent large and medium molecules, and isolated small
/// molecules, by the general literal they stand for.
pub fn floor(e: &Formula, map: &MoleculeMap) -> Formula {
    let idx = Index::new(map);
    let mut counts = BTreeMap::new();
    count_small(e, &idx, &mut counts);
    floor_with(e, &idx, &counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn lift_shapes() {
        let (l, map) = lift(&parse("P | ~P").unwrap());
        assert_eq!(map.width, 2);
        assert_eq!(l.atom_names().len(), 4);
        assert_eq!(
            l.canonical(),
            "(((k0a1b1 + k0a1b2) * (k0a2b1 + k0a2b2)) | ((~k0a1b1 * ~k0a1b2) + (~k0a2b1 * ~k0a2b2)))"
        );
        let (same, empty) = lift(&parse("p & q").unwrap());
        assert_eq!(same, parse("p & q").unwrap());
        assert!(empty.atoms.is_empty());
        let (_, three) = lift(&parse("P | ~P | P").unwrap());
        assert_eq!(three.width, 3);
        assert_eq!(three.atoms["P"].iter().flatten().count(), 9);
    }

    #[test]
    fn lift_avoids_existing_names() {
        let (l, map) = lift(&parse("P | k0a1b1").unwrap());
        assert_eq!(map.atoms["P"][0][0], "kk0a1b1");
        assert!(l.atom_names().contains("k0a1b1"));
    }

    #[test]
    fn floor_inverts_lift() {
        for text in ["P | ~P", "(P &> Q) | (~Q + p)", "p", "(P * ~Q) |> (Q & P)"] {
            let f = parse(text).unwrap();
            let (l, map) = lift(&f);
            assert_eq!(floor(&l, &map), f, "{text}");
        }
    }

    #[test]
    fn floor_of_medium_and_small_molecules() {
        let (_, map) = lift(&parse("P | ~P").unwrap());
        let e = parse("(k0a1b1 + k0a1b2) | (~k0a1b1 * ~k0a1b2)").unwrap();
        assert_eq!(floor(&e, &map), parse("P | ~P").unwrap());
        // one small molecule occurring twice stays elementary
        let shared = parse("k0a1b1 | ~k0a1b1").unwrap();
        assert_eq!(floor(&shared, &map), shared);
        // an isolated one becomes the general literal
        assert_eq!(floor(&parse("~k0a2b1 | q").unwrap(), &map), parse("~P | q").unwrap());
        let plain = parse("p & q").unwrap();
        assert_eq!(floor(&plain, &map), plain);
    }
}
