use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::Player;

pub const SWITCH: &str = "§";

/// A labeled move.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabMove {
    pub by: Player,
    pub m: String,
}

impl LabMove {
    pub fn new(by: Player, m: impl Into<String>) -> Self {
        LabMove { by, m: m.into() }
    }

    /// The same move credited to the other player.
    pub fn swapped(&self) -> Self {
        LabMove { by: self.by.other(), m: self.m.clone() }
    }
}

impl fmt::Display for LabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.by, self.m)
    }
}

pub type Run = Vec<LabMove>;

/// Space-separated `T:move` / `B:move` tokens.
pub fn parse_run(text: &str) -> Result<Run, String> {
    text.split_whitespace()
        .map(|tok| {
            let (who, m) = tok.split_once(':').ok_or_else(|| format!("token {tok:?} lacks ':'"))?;
            let by = match who {
                "T" => Player::Top,
                "B" => Player::Bottom,
                _ => return Err(format!("unknown player {who:?}")),
            };
            if m.is_empty() {
                return Err(format!("empty move in {tok:?}"));
            }
            Ok(LabMove::new(by, m))
        })
        .collect()
}

pub fn format_run(run: &[LabMove]) -> String {
    run.iter().map(LabMove::to_string).collect::<Vec<_>>().join(" ")
}

pub fn swap_labels(run: &[LabMove]) -> Run {
    run.iter().map(LabMove::swapped).collect()
}

fn check_presequential(run: &[LabMove]) -> Result<(), String> {
    match run.iter().find(|lm| lm.m != SWITCH && !lm.m.starts_with('.')) {
        Some(bad) => Err(format!("move {bad} is neither a switch nor '.'-prefixed")),
        None => Ok(()),
    }
}

/// Number of switches made by `p`.
pub fn degree(run: &[LabMove], p: Player) -> Result<usize, String> {
    check_presequential(run)?;
    Ok(run.iter().filter(|lm| lm.by == p && lm.m == SWITCH).count())
}

/// The non-switch moves made while their author had made exactly `i`
/// switches, with the leading `.` removed.
pub fn project(run: &[LabMove], i: usize) -> Result<Run, String> {
    check_presequential(run)?;
    let mut degrees = [0usize; 2];
    let mut out = Vec::new();
    for lm in run {
        let d = &mut degrees[lm.by as usize];
        if lm.m == SWITCH {
            *d += 1;
        } else if *d == i {
            out.push(LabMove::new(lm.by, &lm.m[1..]));
        }
    }
    Ok(out)
}

/// Is `sigma` a `p`-delay of `gamma`? Both players' moves appear in the same
/// order in each, and `p`'s moves never come earlier in `sigma` relative to
/// the other player's moves than they do in `gamma`.
pub fn is_delay(sigma: &[LabMove], gamma: &[LabMove], p: Player) -> bool {
    fn own(r: &[LabMove], q: Player) -> Vec<&str> {
        r.iter().filter(|lm| lm.by == q).map(|lm| lm.m.as_str()).collect()
    }
    if own(sigma, Player::Top) != own(gamma, Player::Top)
        || own(sigma, Player::Bottom) != own(gamma, Player::Bottom)
    {
        return false;
    }
    // for each p-move: how many moves of the other player precede it
    let preceding = |r: &[LabMove]| {
        let mut seen = 0;
        let mut out = Vec::new();
        for lm in r {
            if lm.by == p {
                out.push(seen);
            } else {
                seen += 1;
            }
        }
        out
    };
    // The n-th p-move precedes the k-th other move iff fewer than k other
    // moves precede it, so the condition says counts only grow in sigma.
    preceding(sigma).iter().zip(preceding(gamma)).all(|(s, g)| *s >= g)
}
