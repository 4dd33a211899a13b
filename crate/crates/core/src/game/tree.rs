use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::formula::{general_dehybridization, parse, Atom, Formula, Kind, Player};

/// A finite constant game.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameTree {
    Elem(Player),
    Cho(Kind, Vec<GameTree>),
    Par(Kind, Vec<GameTree>),
    Seq(Kind, Vec<GameTree>),
}

impl GameTree {
    /// Role swap: winners and connective flavours flip.
    pub fn negate(&self) -> GameTree {
        let flip = |c: &[GameTree]| c.iter().map(GameTree::negate).collect();
        match self {
            GameTree::Elem(p) => GameTree::Elem(p.other()),
            GameTree::Cho(k, c) => GameTree::Cho(k.dual(), flip(c)),
            GameTree::Par(k, c) => GameTree::Par(k.dual(), flip(c)),
            GameTree::Seq(k, c) => GameTree::Seq(k.dual(), flip(c)),
        }
    }

    pub fn children(&self) -> &[GameTree] {
        match self {
            GameTree::Elem(_) => &[],
            GameTree::Cho(_, c) | GameTree::Par(_, c) | GameTree::Seq(_, c) => c,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(GameTree::node_count).sum::<usize>()
    }

    /// Reads a tree written as a formula over `T` and `F`.
    pub fn from_formula(f: &Formula) -> Result<GameTree, String> {
        let kids = |c: &[Formula]| c.iter().map(GameTree::from_formula).collect::<Result<Vec<_>, _>>();
        match f {
            Formula::Top => Ok(GameTree::Elem(Player::Top)),
            Formula::Bottom => Ok(GameTree::Elem(Player::Bottom)),
            Formula::Par(k, c) => Ok(GameTree::Par(*k, kids(c)?)),
            Formula::Choice(k, c) => Ok(GameTree::Cho(*k, kids(c)?)),
            Formula::Seq(k, c, 0) => Ok(GameTree::Seq(*k, kids(c)?)),
            other => Err(format!("game trees may only use T, F and connectives, found {other}")),
        }
    }

    pub fn to_formula(&self) -> Formula {
        let kids = |c: &[GameTree]| c.iter().map(GameTree::to_formula).collect();
        match self {
            GameTree::Elem(Player::Top) => Formula::Top,
            GameTree::Elem(Player::Bottom) => Formula::Bottom,
            GameTree::Cho(k, c) => Formula::Choice(*k, kids(c)),
            GameTree::Par(k, c) => Formula::Par(*k, kids(c)),
            GameTree::Seq(k, c) => Formula::Seq(*k, kids(c), 0),
        }
    }
}

impl fmt::Display for GameTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl std::str::FromStr for GameTree {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f = parse(s).map_err(|e| e.to_string())?;
        GameTree::from_formula(&f)
    }
}

impl Serialize for GameTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GameTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A perfect interpretation: elementary atoms get a winner, general atoms a
/// constant game. In JSON, elementary values are booleans (`true`: the
/// machine wins) and games are formula text over `T`/`F`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    #[serde(default, with = "bool_winners")]
    pub elementary: BTreeMap<String, Player>,
    #[serde(default)]
    pub general: BTreeMap<String, GameTree>,
}

mod bool_winners {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Player>, s: S) -> Result<S::Ok, S::Error> {
        let bools: BTreeMap<&String, bool> = m.iter().map(|(k, p)| (k, *p == Player::Top)).collect();
        bools.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Player>, D::Error> {
        let bools = BTreeMap::<String, bool>::deserialize(d)?;
        Ok(bools
            .into_iter()
            .map(|(k, b)| (k, if b { Player::Top } else { Player::Bottom }))
            .collect())
    }
}

/// The four general-atom games used by the standard family.
pub const STANDARD_TREES: [&str; 4] = ["(T + F) * (F + T)", "T * F", "T + F", "(T * F) + (F * T)"];

pub const DEFAULT_TREE: &str = STANDARD_TREES[0];

fn names(f: &Formula) -> (Vec<String>, Vec<String>) {
    let mut elementary = Vec::new();
    let mut general = Vec::new();
    for l in general_dehybridization(f).literals() {
        let (list, n) = match &l.atom {
            Atom::Elementary(n) => (&mut elementary, n),
            Atom::General(n) => (&mut general, n),
            Atom::Hybrid { .. } => unreachable!(),
        };
        if !list.contains(n) {
            list.push(n.clone());
        }
    }
    (elementary, general)
}

impl Interpretation {
    /// Every elementary atom of `f` won by `elementary`, every general atom
    /// interpreted as `tree`.
    pub fn uniform(f: &Formula, elementary: Player, tree: &GameTree) -> Interpretation {
        let (es, gs) = names(f);
        Interpretation {
            elementary: es.into_iter().map(|n| (n, elementary)).collect(),
            general: gs.into_iter().map(|n| (n, tree.clone())).collect(),
        }
    }

    pub fn default_for(f: &Formula) -> Interpretation {
        Interpretation::uniform(f, Player::Top, &DEFAULT_TREE.parse().unwrap())
    }

    /// Fills in defaults for atoms of `f` the interpretation leaves open.
    pub fn completed_for(&self, f: &Formula) -> Interpretation {
        let mut out = self.clone();
        let d = Interpretation::default_for(f);
        for (k, v) in d.elementary {
            out.elementary.entry(k).or_insert(v);
        }
        for (k, v) in d.general {
            out.general.entry(k).or_insert(v);
        }
        out
    }

    /// Two uniform elementary valuations times the four standard trees.
    pub fn standard_family(f: &Formula) -> Vec<Interpretation> {
        let mut out = Vec::new();
        for elementary in [Player::Top, Player::Bottom] {
            for tree in STANDARD_TREES {
                out.push(Interpretation::uniform(f, elementary, &tree.parse().unwrap()));
            }
        }
        out
    }
}

/// The game a formula denotes; hybrid atoms count as their general
/// component and underlines are ignored.
pub fn interpret(f: &Formula, i: &Interpretation) -> Result<GameTree, String> {
    fn go(f: &Formula, i: &Interpretation) -> Result<GameTree, String> {
        let kids = |c: &[Formula]| c.iter().map(|x| go(x, i)).collect::<Result<Vec<_>, _>>();
        match f {
            Formula::Top => Ok(GameTree::Elem(Player::Top)),
            Formula::Bottom => Ok(GameTree::Elem(Player::Bottom)),
            Formula::Lit(l) => {
                if !l.args.is_empty() {
                    return Err(format!("cannot interpret first-order atom {l}"));
                }
                let tree = match &l.atom {
                    Atom::Elementary(n) => GameTree::Elem(
                        *i.elementary.get(n).ok_or_else(|| format!("no value for atom {n}"))?,
                    ),
                    Atom::General(n) => {
                        i.general.get(n).ok_or_else(|| format!("no game for atom {n}"))?.clone()
                    }
                    Atom::Hybrid { .. } => unreachable!("dehybridized"),
                };
                Ok(if l.negated { tree.negate() } else { tree })
            }
            Formula::Par(k, c) => Ok(GameTree::Par(*k, kids(c)?)),
            Formula::Choice(k, c) => Ok(GameTree::Cho(*k, kids(c)?)),
            Formula::Seq(k, c, _) => Ok(GameTree::Seq(*k, kids(c)?)),
            Formula::Quant(..) => Err("cannot interpret a quantified formula".into()),
        }
    }
    go(&general_dehybridization(f), i)
}
