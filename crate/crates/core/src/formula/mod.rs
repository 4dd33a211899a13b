//! Formulas and hyperformulas.
//!
//! A single AST covers plain formulas, hyperformulas (underlined sequential
//! components and hybrid atoms) and the quantifier-bearing first-order
//! fragment. Negation is only ever stored on literals; `negate` pushes it
//! through the connectives.

mod ops;
mod parse;
mod print;
pub mod taut;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use ops::{
    capitalize, classify_occurrences, elementarize, general_dehybridization, is_balanced, is_stable,
    OccFlags,
};
pub(crate) use parse::check_fo_wellformed;
pub use parse::{parse, parse_fo, ParseError};

/// Address of a node: child indices from the root. A quantifier's body is child 0.
pub type OccPath = Vec<usize>;

/// The two players. `Top` is the machine, `Bottom` the environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "T")]
    Top,
    #[serde(rename = "B")]
    Bottom,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Top => Player::Bottom,
            Player::Bottom => Player::Top,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Player::Top => "T",
            Player::Bottom => "B",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Conjunctive or disjunctive flavour of a connective or quantifier.
///
/// For choice and sequential connectives the flavour fixes who is in charge:
/// the environment chooses in `⊓` and leads switches in `△`, the machine in
/// `⊔` and `▽`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Conj,
    Disj,
}

impl Kind {
    pub fn dual(self) -> Kind {
        match self {
            Kind::Conj => Kind::Disj,
            Kind::Disj => Kind::Conj,
        }
    }

    /// The player who chooses (choice) or leads switches (sequential).
    pub fn owner(self) -> Player {
        match self {
            Kind::Conj => Player::Bottom,
            Kind::Disj => Player::Top,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Elementary(String),
    General(String),
    /// `P_q`: general component `P`, elementary component `q`.
    Hybrid { general: String, elementary: String },
}

impl Atom {
    pub fn is_general(&self) -> bool {
        matches!(self, Atom::General(_))
    }

    pub fn is_hybrid(&self) -> bool {
        matches!(self, Atom::Hybrid { .. })
    }

    /// Every elementary or general name the atom mentions.
    pub fn names(&self) -> Vec<&str> {
        match self {
            Atom::Elementary(n) | Atom::General(n) => vec![n],
            Atom::Hybrid { general, elementary } => vec![general, elementary],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(u64),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// A possibly negated atom. `args` is empty for propositional atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl Literal {
    pub fn new(atom: Atom, negated: bool) -> Self {
        Literal { atom, args: Vec::new(), negated }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Lit(Literal),
    /// `∧` / `∨`.
    Par(Kind, Vec<Formula>),
    /// `⊓` / `⊔`.
    Choice(Kind, Vec<Formula>),
    /// `△` / `▽` with the index of the underlined component.
    Seq(Kind, Vec<Formula>, usize),
    /// Choice quantifiers `⊓x` / `⊔x`.
    Quant(Kind, String, Box<Formula>),
}

pub type Hyperformula = Formula;

impl Formula {
    pub fn elem(name: &str) -> Formula {
        Formula::Lit(Literal::new(Atom::Elementary(name.to_string()), false))
    }

    pub fn general(name: &str) -> Formula {
        Formula::Lit(Literal::new(Atom::General(name.to_string()), false))
    }

    pub fn hybrid(general: &str, elementary: &str) -> Formula {
        Formula::Lit(Literal::new(
            Atom::Hybrid { general: general.to_string(), elementary: elementary.to_string() },
            false,
        ))
    }

    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::Par(_, c) | Formula::Choice(_, c) | Formula::Seq(_, c, _) => c,
            Formula::Quant(_, _, b) => std::slice::from_ref(b.as_ref()),
            _ => &[],
        }
    }

    pub fn children_mut(&mut self) -> &mut [Formula] {
        match self {
            Formula::Par(_, c) | Formula::Choice(_, c) | Formula::Seq(_, c, _) => c,
            Formula::Quant(_, _, b) => std::slice::from_mut(b.as_mut()),
            _ => &mut [],
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Formula> {
        let mut node = self;
        for &i in path {
            node = node.children().get(i)?;
        }
        Some(node)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Formula> {
        let mut node = self;
        for &i in path {
            node = node.children_mut().get_mut(i)?;
        }
        Some(node)
    }

    /// Copy of `self` with the node at `path` replaced.
    pub fn replace_at(&self, path: &[usize], replacement: Formula) -> Formula {
        let mut out = self.clone();
        *out.at_mut(path).expect("path resolves") = replacement;
        out
    }

    /// DeMorgan negation; `¬` lands on literals only.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Top => Formula::Bottom,
            Formula::Bottom => Formula::Top,
            Formula::Lit(l) => Formula::Lit(Literal { negated: !l.negated, ..l.clone() }),
            Formula::Par(k, c) => Formula::Par(k.dual(), c.iter().map(Formula::negate).collect()),
            Formula::Choice(k, c) => {
                Formula::Choice(k.dual(), c.iter().map(Formula::negate).collect())
            }
            Formula::Seq(k, c, h) => {
                Formula::Seq(k.dual(), c.iter().map(Formula::negate).collect(), *h)
            }
            Formula::Quant(k, v, b) => Formula::Quant(k.dual(), v.clone(), Box::new(b.negate())),
        }
    }

    /// No hybrid atoms and every underline on the leftmost component.
    pub fn is_plain(&self) -> bool {
        match self {
            Formula::Lit(l) => !l.atom.is_hybrid(),
            Formula::Seq(_, c, h) => *h == 0 && c.iter().all(Formula::is_plain),
            _ => self.children().iter().all(Formula::is_plain),
        }
    }

    /// Only `⊤,⊥,¬,∧,∨` over elementary atoms.
    pub fn is_elementary(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom => true,
            Formula::Lit(l) => matches!(l.atom, Atom::Elementary(_)),
            Formula::Par(_, c) => c.iter().all(Formula::is_elementary),
            _ => false,
        }
    }

    /// No general or hybrid atoms.
    pub fn is_elementary_base(&self) -> bool {
        self.literals().iter().all(|l| matches!(l.atom, Atom::Elementary(_)))
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Quant(..) => false,
            Formula::Lit(l) => l.args.is_empty(),
            _ => self.children().iter().all(Formula::is_propositional),
        }
    }

    pub fn literals(&self) -> Vec<&Literal> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Lit(l) = f {
                out.push(l);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Pre-order traversal with paths.
    pub fn visit_paths<'a>(&'a self, f: &mut dyn FnMut(&[usize], &'a Formula)) {
        fn go<'a>(node: &'a Formula, path: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], &'a Formula)) {
            f(path, node);
            for (i, c) in node.children().iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// All elementary, general and hybrid-component names (letters in the
    /// first-order case).
    pub fn atom_names(&self) -> BTreeSet<String> {
        self.literals()
            .into_iter()
            .flat_map(|l| l.atom.names().into_iter().map(str::to_string))
            .collect()
    }

    /// Number of AST nodes, counting a negation sign as one extra symbol.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom => 1,
            Formula::Lit(l) => 1 + usize::from(l.negated),
            _ => 1 + self.children().iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn general_occurrences(&self) -> usize {
        self.literals().iter().filter(|l| l.atom.is_general()).count()
    }

    /// Canonical ASCII text; parsing it gives back the same AST.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_fo(&text).map_err(serde::de::Error::custom)
    }
}
