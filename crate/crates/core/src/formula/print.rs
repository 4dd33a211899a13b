use std::fmt;

use super::{Atom, Formula, Kind, Literal};

fn par_symbol(k: Kind) -> &'static str {
    match k {
        Kind::Conj => " & ",
        Kind::Disj => " | ",
    }
}

fn choice_symbol(k: Kind) -> &'static str {
    match k {
        Kind::Conj => " * ",
        Kind::Disj => " + ",
    }
}

fn seq_symbol(k: Kind) -> &'static str {
    match k {
        Kind::Conj => " &> ",
        Kind::Disj => " |> ",
    }
}

pub(super) fn write_literal(l: &Literal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if l.negated {
        f.write_str("~")?;
    }
    match &l.atom {
        Atom::Elementary(n) | Atom::General(n) => f.write_str(n)?,
        Atom::Hybrid { general, elementary } => write!(f, "{general}_{elementary}")?,
    }
    if !l.args.is_empty() {
        f.write_str("(")?;
        for (i, t) in l.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

fn write_joined(
    children: &[Formula],
    sep: &str,
    head: Option<usize>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    f.write_str("(")?;
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if head == Some(i) {
            f.write_str("[")?;
            write_formula(c, f)?;
            f.write_str("]")?;
        } else {
            write_formula(c, f)?;
        }
    }
    f.write_str(")")
}

pub(super) fn write_formula(node: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Formula::Top => f.write_str("T"),
        Formula::Bottom => f.write_str("F"),
        Formula::Lit(l) => write_literal(l, f),
        Formula::Par(k, c) => write_joined(c, par_symbol(*k), None, f),
        Formula::Choice(k, c) => write_joined(c, choice_symbol(*k), None, f),
        // A head-0 underline is the default and stays implicit.
        Formula::Seq(k, c, h) => write_joined(c, seq_symbol(*k), (*h != 0).then_some(*h), f),
        Formula::Quant(k, v, body) => {
            f.write_str(match k {
                Kind::Conj => "*",
                Kind::Disj => "+",
            })?;
            write!(f, "{v}:")?;
            write_formula(body, f)
        }
    }
}
