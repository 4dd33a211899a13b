//! Incremental legality and winning for constant games.
//!
//! A [`Pos`] summarizes a legal run: which choices were made, and the switch
//! counts of every sequential node. Moves are validated and applied in one
//! pass; a rejected move leaves the position untouched.

use super::run::{LabMove, SWITCH};
use super::GameTree;
use crate::formula::{Kind, Player};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pos {
    Elem,
    Cho(Option<(usize, Box<Pos>)>),
    Par(Vec<Pos>),
    /// Switch counts indexed by player (`Top` first), and one position per
    /// component.
    Seq([usize; 2], Vec<Pos>),
}

fn slot(p: Player) -> usize {
    match p {
        Player::Top => 0,
        Player::Bottom => 1,
    }
}

/// Strict decimal index in `1..=n`: no sign, no leading zero.
fn parse_index(s: &str, n: usize) -> Option<usize> {
    if s.is_empty() || s.starts_with('0') || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: usize = s.parse().ok()?;
    (1..=n).contains(&i).then_some(i)
}

/// Splits a parallel move `i.rest`.
fn split_par(m: &str, n: usize) -> Option<(usize, &str)> {
    let (idx, rest) = m.split_once('.')?;
    Some((parse_index(idx, n)?, rest))
}

/// How a legal move travels through the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// Child index taken at each level.
    pub steps: Vec<usize>,
    /// The move as seen by the node at each level (`suffixes[0]` is the
    /// whole move); one longer than `steps`.
    pub suffixes: Vec<String>,
    pub end: TraceEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEnd {
    Switch,
    Choose(usize),
}

impl Pos {
    pub fn initial(g: &GameTree) -> Pos {
        match g {
            GameTree::Elem(_) => Pos::Elem,
            GameTree::Cho(..) => Pos::Cho(None),
            GameTree::Par(_, c) => Pos::Par(c.iter().map(Pos::initial).collect()),
            GameTree::Seq(_, c) => Pos::Seq([0, 0], c.iter().map(Pos::initial).collect()),
        }
    }

    /// Where a move would go, without applying it.
    pub fn trace(&self, g: &GameTree, by: Player, m: &str) -> Result<Trace, String> {
        let mut steps = Vec::new();
        let mut suffixes = vec![m.to_string()];
        let mut node = (g, self);
        let mut rest = m;
        loop {
            let (tree, pos) = node;
            match (tree, pos) {
                (GameTree::Elem(_), _) => return Err(format!("no moves are possible in {tree}")),
                (GameTree::Cho(k, c), Pos::Cho(None)) => {
                    if by != k.owner() {
                        return Err(format!("{by} cannot choose in {tree}"));
                    }
                    let i = parse_index(rest, c.len())
                        .ok_or_else(|| format!("{rest:?} is not a choice among {}", c.len()))?;
                    return Ok(Trace { steps, suffixes, end: TraceEnd::Choose(i) });
                }
                (GameTree::Cho(_, c), Pos::Cho(Some((i, sub)))) => {
                    steps.push(i - 1);
                    node = (&c[i - 1], sub);
                }
                (GameTree::Par(_, c), Pos::Par(subs)) => {
                    let (i, tail) = split_par(rest, c.len())
                        .ok_or_else(|| format!("{rest:?} does not address a component"))?;
                    steps.push(i - 1);
                    rest = tail;
                    node = (&c[i - 1], &subs[i - 1]);
                }
                (GameTree::Seq(k, c), Pos::Seq(deg, subs)) => {
                    let mine = deg[slot(by)];
                    if rest == SWITCH {
                        let allowed = if by == k.owner() {
                            mine + 1 < c.len()
                        } else {
                            mine < deg[slot(by.other())]
                        };
                        if !allowed {
                            return Err(format!("{by} may not switch in {tree} now"));
                        }
                        return Ok(Trace { steps, suffixes, end: TraceEnd::Switch });
                    }
                    let tail = rest
                        .strip_prefix('.')
                        .ok_or_else(|| format!("{rest:?} is neither a switch nor '.'-prefixed"))?;
                    steps.push(mine);
                    rest = tail;
                    node = (&c[mine], &subs[mine]);
                }
                _ => unreachable!("position does not fit the tree"),
            }
            suffixes.push(rest.to_string());
        }
    }

    /// Applies a move, or explains why it is illegal.
    pub fn apply(&mut self, g: &GameTree, by: Player, m: &str) -> Result<(), String> {
        let t = self.trace(g, by, m)?;
        let mut tree = g;
        let mut pos = self;
        for &i in &t.steps {
            pos = match pos {
                Pos::Cho(Some((_, sub))) => sub,
                Pos::Par(subs) | Pos::Seq(_, subs) => &mut subs[i],
                _ => unreachable!(),
            };
            tree = &tree.children()[i];
        }
        match (t.end, pos) {
            (TraceEnd::Switch, Pos::Seq(deg, _)) => deg[slot(by)] += 1,
            (TraceEnd::Choose(i), pos @ Pos::Cho(None)) => {
                *pos = Pos::Cho(Some((i, Box::new(Pos::initial(&tree.children()[i - 1])))))
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn winner(&self, g: &GameTree) -> Player {
        match (g, self) {
            (GameTree::Elem(p), _) => *p,
            (GameTree::Cho(k, _), Pos::Cho(None)) => k.owner().other(),
            (GameTree::Cho(_, c), Pos::Cho(Some((i, sub)))) => sub.winner(&c[i - 1]),
            (GameTree::Par(k, c), Pos::Par(subs)) => {
                let mut tops = c.iter().zip(subs).map(|(t, p)| p.winner(t) == Player::Top);
                let top_wins = match k {
                    Kind::Conj => tops.all(|w| w),
                    Kind::Disj => tops.any(|w| w),
                };
                if top_wins {
                    Player::Top
                } else {
                    Player::Bottom
                }
            }
            (GameTree::Seq(k, c), Pos::Seq(deg, subs)) => {
                let current = deg[slot(k.owner())];
                subs[current].winner(&c[current])
            }
            _ => unreachable!("position does not fit the tree"),
        }
    }

    /// Every move `p` can legally make now.
    pub fn legal_moves(&self, g: &GameTree, p: Player) -> Vec<String> {
        match (g, self) {
            (GameTree::Elem(_), _) => Vec::new(),
            (GameTree::Cho(k, c), Pos::Cho(None)) => {
                if k.owner() == p {
                    (1..=c.len()).map(|i| i.to_string()).collect()
                } else {
                    Vec::new()
                }
            }
            (GameTree::Cho(_, c), Pos::Cho(Some((i, sub)))) => sub.legal_moves(&c[i - 1], p),
            (GameTree::Par(_, c), Pos::Par(subs)) => c
                .iter()
                .zip(subs)
                .enumerate()
                .flat_map(|(i, (t, s))| {
                    s.legal_moves(t, p).into_iter().map(move |m| format!("{}.{m}", i + 1))
                })
                .collect(),
            (GameTree::Seq(k, c), Pos::Seq(deg, subs)) => {
                let mine = deg[slot(p)];
                let mut out = Vec::new();
                let can_switch =
                    if p == k.owner() { mine + 1 < c.len() } else { mine < deg[slot(p.other())] };
                if can_switch {
                    out.push(SWITCH.to_string());
                }
                out.extend(subs[mine].legal_moves(&c[mine], p).into_iter().map(|m| format!(".{m}")));
                out
            }
            _ => unreachable!("position does not fit the tree"),
        }
    }

    /// The position below `path` (child indices), if the run has reached it.
    pub fn at(&self, path: &[usize]) -> Option<&Pos> {
        let mut pos = self;
        for &i in path {
            pos = match pos {
                Pos::Cho(Some((j, sub))) if *j == i + 1 => sub,
                Pos::Par(subs) | Pos::Seq(_, subs) => subs.get(i)?,
                _ => return None,
            };
        }
        Some(pos)
    }

    /// Switch counts of a sequential node, `[top, bottom]`.
    pub fn degrees(&self) -> [usize; 2] {
        match self {
            Pos::Seq(d, _) => *d,
            _ => [0, 0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legality {
    Legal,
    /// The player whose move at this index was the first illegal one.
    IllegalBy(Player, usize),
}

/// Replays `run`, stopping at the first illegal move.
pub fn replay(g: &GameTree, run: &[LabMove]) -> (Pos, Legality) {
    let mut pos = Pos::initial(g);
    for (i, lm) in run.iter().enumerate() {
        if pos.apply(g, lm.by, &lm.m).is_err() {
            return (pos, Legality::IllegalBy(lm.by, i));
        }
    }
    (pos, Legality::Legal)
}

pub fn legal(g: &GameTree, run: &[LabMove]) -> Legality {
    replay(g, run).1
}

/// Winner of a legal run.
pub fn winner(g: &GameTree, run: &[LabMove]) -> Result<Player, String> {
    match replay(g, run) {
        (pos, Legality::Legal) => Ok(pos.winner(g)),
        (_, Legality::IllegalBy(p, i)) => Err(format!("move {i} by {p} is illegal")),
    }
}

/// The proposition "the run is won by the machine", as a player.
pub fn finalize(g: &GameTree, run: &[LabMove]) -> Result<Player, String> {
    winner(g, run)
}

/// Winner of any run: the author of the first illegal move loses.
pub fn outcome(g: &GameTree, run: &[LabMove]) -> Player {
    match replay(g, run) {
        (pos, Legality::Legal) => pos.winner(g),
        (_, Legality::IllegalBy(p, _)) => p.other(),
    }
}

pub fn legal_moves(g: &GameTree, run: &[LabMove], p: Player) -> Result<Vec<String>, String> {
    match replay(g, run) {
        (pos, Legality::Legal) => Ok(pos.legal_moves(g, p)),
        (_, Legality::IllegalBy(q, i)) => Err(format!("move {i} by {q} is illegal")),
    }
}
