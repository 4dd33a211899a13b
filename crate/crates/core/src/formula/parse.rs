//! Recursive-descent parser for the concrete formula syntax.
//!
//! Grammar, loosest first:
//!
//! ```text
//! implication := chain ( "->" implication | "<->" chain )?
//! chain       := operand ( op operand )*        -- one operator per chain
//! operand     := unary | "[" implication "]"    -- brackets only in &> / |> chains
//! unary       := "~" unary | ("*"|"+") var ":" unary | "(" implication ")"
//!              | "T" | "F" | atom
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Atom, Formula, Kind, Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Par(Kind),
    Choice(Kind),
    Seq(Kind),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Not,
    Op(Op),
    Imp,
    Iff,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Colon,
    Comma,
    Eof,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let next2 = chars.get(i + 2).map(|&(_, c)| c);
        let mut step = 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '¬' => Tok::Not,
            '&' if next == Some('>') => {
                step = 2;
                Tok::Op(Op::Seq(Kind::Conj))
            }
            '|' if next == Some('>') => {
                step = 2;
                Tok::Op(Op::Seq(Kind::Disj))
            }
            '&' | '∧' => Tok::Op(Op::Par(Kind::Conj)),
            '|' | '∨' => Tok::Op(Op::Par(Kind::Disj)),
            '*' | '⊓' => Tok::Op(Op::Choice(Kind::Conj)),
            '+' | '⊔' => Tok::Op(Op::Choice(Kind::Disj)),
            '△' => Tok::Op(Op::Seq(Kind::Conj)),
            '▽' => Tok::Op(Op::Seq(Kind::Disj)),
            '-' if next == Some('>') => {
                step = 2;
                Tok::Imp
            }
            '<' if next == Some('-') && next2 == Some('>') => {
                step = 3;
                Tok::Iff
            }
            '→' => Tok::Imp,
            '↔' => Tok::Iff,
            '⊤' => Tok::Ident("T".into()),
            '⊥' => Tok::Ident("F".into()),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let value = match digits.parse::<u64>() {
                    Ok(v) => v,
                    Err(_) => return err(pos, "numeric constant out of range"),
                };
                step = j - i;
                Tok::Num(value)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                step = j - i;
                Tok::Ident(chars[i..j].iter().map(|&(_, c)| c).collect())
            }
            other => return err(pos, format!("unexpected character '{other}'")),
        };
        out.push((pos, tok));
        i += step;
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    first_order: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err(self.pos(), format!("expected {what}"))
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.chain()?;
        match self.peek() {
            Tok::Imp => {
                self.bump();
                let rhs = self.implication()?;
                Ok(Formula::Par(Kind::Disj, vec![lhs.negate(), rhs]))
            }
            Tok::Iff => {
                self.bump();
                let rhs = self.chain()?;
                let forward = Formula::Par(Kind::Disj, vec![lhs.negate(), rhs.clone()]);
                let backward = Formula::Par(Kind::Disj, vec![rhs.negate(), lhs]);
                Ok(Formula::Par(Kind::Conj, vec![forward, backward]))
            }
            _ => Ok(lhs),
        }
    }

    /// One operand, possibly wrapped in an underline bracket.
    fn operand(&mut self) -> Result<(Formula, Option<usize>), ParseError> {
        if *self.peek() == Tok::LBrack {
            let open = self.pos();
            self.bump();
            let inner = self.implication()?;
            self.expect(Tok::RBrack, "']'")?;
            Ok((inner, Some(open)))
        } else {
            Ok((self.unary()?, None))
        }
    }

    fn chain(&mut self) -> Result<Formula, ParseError> {
        let (first, first_mark) = self.operand()?;
        let op = match self.peek() {
            Tok::Op(op) => *op,
            _ => {
                if let Some(p) = first_mark {
                    return err(p, "underline bracket outside a sequential chain");
                }
                return Ok(first);
            }
        };
        let mut items = vec![first];
        let mut marks = vec![first_mark];
        while let Tok::Op(next) = self.peek() {
            if *next != op {
                return err(self.pos(), "mixed operators need parentheses");
            }
            self.bump();
            let (item, mark) = self.operand()?;
            items.push(item);
            marks.push(mark);
        }
        let marked: Vec<(usize, usize)> =
            marks.iter().enumerate().filter_map(|(i, m)| m.map(|p| (i, p))).collect();
        match op {
            Op::Seq(kind) => {
                if marked.len() > 1 {
                    return err(marked[1].1, "more than one underlined component");
                }
                let head = marked.first().map_or(0, |&(i, _)| i);
                Ok(Formula::Seq(kind, items, head))
            }
            _ if !marked.is_empty() => {
                err(marked[0].1, "underline bracket on a non-sequential component")
            }
            Op::Par(kind) => Ok(Formula::Par(kind, items)),
            Op::Choice(kind) => Ok(Formula::Choice(kind, items)),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Not => Ok(self.unary()?.negate()),
            Tok::Op(Op::Choice(kind)) => {
                if !self.first_order {
                    return err(pos, "quantifiers are only allowed in first-order input");
                }
                let var_pos = self.pos();
                let var = match self.bump() {
                    Tok::Ident(v) if is_lower_name(&v) => v,
                    _ => return err(var_pos, "expected a lowercase variable after quantifier"),
                };
                self.expect(Tok::Colon, "':' after quantified variable")?;
                let body = self.unary()?;
                Ok(Formula::Quant(kind, var, Box::new(body)))
            }
            Tok::LParen => {
                let inner = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "T" => Ok(Formula::Top),
            Tok::Ident(name) if name == "F" => Ok(Formula::Bottom),
            Tok::Ident(name) => self.atom(pos, name),
            Tok::Eof => err(pos, "unexpected end of input"),
            _ => err(pos, "expected a formula"),
        }
    }

    fn atom(&mut self, pos: usize, name: String) -> Result<Formula, ParseError> {
        let atom = atom_from_name(pos, &name)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            if !self.first_order {
                return err(self.pos(), "atom arguments are only allowed in first-order input");
            }
            if atom.is_hybrid() {
                return err(self.pos(), "hybrid atoms take no arguments");
            }
            self.bump();
            loop {
                let tpos = self.pos();
                match self.bump() {
                    Tok::Num(n) => args.push(Term::Const(n)),
                    Tok::Ident(v) if is_lower_name(&v) => args.push(Term::Var(v)),
                    _ => return err(tpos, "expected a term"),
                }
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return err(self.toks[self.at - 1].0, "expected ',' or ')'"),
                }
            }
        }
        Ok(Formula::Lit(Literal { atom, args, negated: false }))
    }
}

fn is_lower_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase()) && s.chars().all(|c| c.is_ascii_alphanumeric())
}

fn is_upper_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
        && s.chars().all(|c| c.is_ascii_alphanumeric())
        && s != "T"
        && s != "F"
}

fn atom_from_name(pos: usize, name: &str) -> Result<Atom, ParseError> {
    if let Some((general, elementary)) = name.split_once('_') {
        if is_upper_name(general) && is_lower_name(elementary) {
            return Ok(Atom::Hybrid { general: general.into(), elementary: elementary.into() });
        }
        return err(pos, format!("underscore in identifier '{name}'"));
    }
    if is_lower_name(name) {
        Ok(Atom::Elementary(name.into()))
    } else if is_upper_name(name) {
        Ok(Atom::General(name.into()))
    } else {
        err(pos, format!("bad identifier '{name}'"))
    }
}

fn run(text: &str, first_order: bool) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, first_order };
    let f = p.implication()?;
    if *p.peek() != Tok::Eof {
        return err(p.pos(), "trailing input");
    }
    Ok(f)
}

/// Parses a propositional (hyper)formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    run(text, false)
}

/// Parses a formula of the quantifier fragment: `*x:G`, `+x:G`, atoms with
/// term arguments. Rejects a variable that is both free and bound, a name used
/// both as a variable and as a letter, and inconsistent letter arities.
pub fn parse_fo(text: &str) -> Result<Formula, ParseError> {
    let f = run(text, true)?;
    check_fo_wellformed(&f).map_err(|message| ParseError { position: 0, message })?;
    Ok(f)
}

pub(crate) fn check_fo_wellformed(f: &Formula) -> Result<(), String> {
    let mut bound = BTreeSet::new();
    let mut free = BTreeSet::new();
    let mut arity: BTreeMap<String, usize> = BTreeMap::new();
    fn go(
        f: &Formula,
        scope: &mut Vec<String>,
        bound: &mut BTreeSet<String>,
        free: &mut BTreeSet<String>,
        arity: &mut BTreeMap<String, usize>,
    ) -> Result<(), String> {
        match f {
            Formula::Quant(_, v, body) => {
                if scope.contains(v) {
                    return Err(format!("variable '{v}' is rebound in its own scope"));
                }
                bound.insert(v.clone());
                scope.push(v.clone());
                go(body, scope, bound, free, arity)?;
                scope.pop();
            }
            Formula::Lit(l) => {
                for name in l.atom.names() {
                    let prev = arity.insert(name.to_string(), l.args.len());
                    if prev.is_some_and(|a| a != l.args.len()) {
                        return Err(format!("letter '{name}' used with different arities"));
                    }
                }
                for t in &l.args {
                    if let Term::Var(v) = t {
                        if !scope.contains(v) {
                            free.insert(v.clone());
                        }
                    }
                }
            }
            _ => {
                for c in f.children() {
                    go(c, scope, bound, free, arity)?;
                }
            }
        }
        Ok(())
    }
    go(f, &mut Vec::new(), &mut bound, &mut free, &mut arity)?;
    if let Some(v) = bound.intersection(&free).next() {
        return Err(format!("variable '{v}' has both free and bound occurrences"));
    }
    if let Some(v) = bound.iter().chain(free.iter()).find(|v| arity.contains_key(*v)) {
        return Err(format!("'{v}' is used both as a variable and as a letter"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg(f: Formula) -> Formula {
        f.negate()
    }

    #[test]
    fn implication_sugar() {
        let f = parse("(P + Q) -> (P |> Q)").unwrap();
        let expected = Formula::Par(
            Kind::Disj,
            vec![
                Formula::Choice(Kind::Conj, vec![neg(Formula::general("P")), neg(Formula::general("Q"))]),
                Formula::Seq(Kind::Disj, vec![Formula::general("P"), Formula::general("Q")], 0),
            ],
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn constants_and_negated_sequential() {
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(
            parse("~(p &> q)").unwrap(),
            Formula::Seq(Kind::Disj, vec![neg(Formula::elem("p")), neg(Formula::elem("q"))], 0)
        );
    }

    #[test]
    fn chains_flatten_and_mixing_fails() {
        let f = parse("p & q & r").unwrap();
        assert_eq!(f.children().len(), 3);
        let e = parse("p & q | r").unwrap_err();
        assert_eq!(e.position, 6);
    }

    #[test]
    fn underline_brackets() {
        assert_eq!(
            parse("A &> [B] &> C").unwrap(),
            Formula::Seq(
                Kind::Conj,
                vec![Formula::general("A"), Formula::general("B"), Formula::general("C")],
                1
            )
        );
        assert!(parse("A & [B]").is_err());
        assert!(parse("[A]").is_err());
        assert!(parse("[A] &> [B]").is_err());
    }

    #[test]
    fn identifier_errors() {
        assert!(parse("p_q").is_err());
        assert!(parse("P__q").is_err());
        assert!(parse("P_Q").is_err());
        assert_eq!(parse("P_q").unwrap(), Formula::hybrid("P", "q"));
        assert!(parse("p(x)").is_err());
        assert!(parse("*x:p").is_err());
        assert!(parse("(p & q").is_err());
        assert!(parse("p q").is_err());
    }

    #[test]
    fn unicode_input() {
        assert_eq!(parse("¬P ∨ (P ▽ Q)").unwrap(), parse("~P | (P |> Q)").unwrap());
        assert_eq!(parse("(P ⊔ Q) → (P △ Q)").unwrap(), parse("(P + Q) -> (P &> Q)").unwrap());
        assert_eq!(parse("⊤ ∧ ⊥").unwrap(), parse("T & F").unwrap());
    }

    #[test]
    fn first_order_atoms_and_quantifiers() {
        let f = parse_fo("+x:(P(x) &> ~P(x))").unwrap();
        match &f {
            Formula::Quant(Kind::Disj, v, body) => {
                assert_eq!(v, "x");
                assert!(matches!(body.as_ref(), Formula::Seq(Kind::Conj, c, 0) if c.len() == 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        let ground = parse_fo("p(1)").unwrap();
        assert_eq!(ground.literals()[0].args, vec![Term::Const(1)]);
    }

    #[test]
    fn biconditional_expands() {
        let f = parse_fo("q(x) <-> p(y)").unwrap();
        assert_eq!(f.canonical(), "((~q(x) | p(y)) & (~p(y) | q(x)))");
    }

    #[test]
    fn fo_wellformedness() {
        assert!(parse_fo("p(x) | *x:p(x)").is_err());
        assert!(parse_fo("p(x) | p(x,1)").is_err());
        assert!(parse_fo("*x:p(x) | *x:q(x)").is_ok());
        assert!(parse_fo("*x:+x:p(x)").is_err());
        assert!(parse_fo("x | p(x)").is_err());
        assert!(parse_fo("*x:+y:(q(x) <-> p(y))").is_ok());
    }
}
