//! Seeded randomized property suites for the game engine.
//!
//! Every suite draws small random games, enumerates or samples runs and
//! records each counterexample as a violation. A clean report has none.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{by_size, Connective, CorpusSpec};
use crate::formula::{is_balanced, is_stable, Formula, Kind, Player};
use crate::game::{
    format_run, interpret, is_delay, legal, manageable, outcome, replay, swap_labels, winner, GameTree,
    Interpretation, LabMove, Legality, Pos, Run,
};
use crate::prover::{choose_expansions, match_expansions, switch_expansions, wait_premises, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Negation is a role swap on runs and winners.
    DeMorgan,
    /// Delaying the winner's moves keeps the outcome.
    Static,
    /// Illegality moves along delays in the expected direction.
    Delay,
    /// Prefix closure, and `legal_moves` against arbitrary move strings.
    Legality,
    /// Stable balanced hyperformulas are won on manageable runs.
    Stability,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::DeMorgan, Suite::Static, Suite::Delay, Suite::Legality, Suite::Stability];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::DeMorgan => "demorgan",
            Suite::Static => "static",
            Suite::Delay => "delay",
            Suite::Legality => "legality",
            Suite::Stability => "stability",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FuzzReport {
    pub suite: Suite,
    pub seed: u64,
    /// Random games or formulas drawn.
    pub cases: usize,
    /// Individual property instances checked.
    pub checks: usize,
    pub violations: Vec<String>,
}

impl FuzzReport {
    fn new(suite: Suite, seed: u64, cases: usize) -> Self {
        FuzzReport { suite, seed, cases, checks: 0, violations: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        // keep reports readable when something is badly broken
        if !ok && self.violations.len() < 20 {
            self.violations.push(what());
        }
    }
}

/// Longest runs enumerated by the DeMorgan suite.
pub const DEMORGAN_RUN_LENGTH: usize = 6;
/// Longest runs whose delays the static and delay suites enumerate.
pub const DELAY_RUN_LENGTH: usize = 5;
/// Trees outside this node count range are redrawn.
const TREE_NODES: std::ops::RangeInclusive<usize> = 3..=11;

pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::new(suite, seed, cases);
    for _ in 0..cases {
        match suite {
            Suite::DeMorgan => demorgan_case(&mut rng, &mut report),
            Suite::Static | Suite::Delay => delay_case(&mut rng, &mut report),
            Suite::Legality => legality_case(&mut rng, &mut report),
            Suite::Stability => stability_case(&mut rng, &mut report),
        }
    }
    report
}

fn random_kind(rng: &mut ChaCha8Rng) -> Kind {
    if rng.gen_bool(0.5) {
        Kind::Conj
    } else {
        Kind::Disj
    }
}

fn random_node(rng: &mut ChaCha8Rng, depth: usize) -> GameTree {
    if depth == 0 || rng.gen_bool(0.35) {
        let p = if rng.gen_bool(0.5) { Player::Top } else { Player::Bottom };
        return GameTree::Elem(p);
    }
    let arity = rng.gen_range(2..=3);
    let kids = (0..arity).map(|_| random_node(rng, depth - 1)).collect();
    match rng.gen_range(0..3) {
        0 => GameTree::Cho(random_kind(rng), kids),
        1 => GameTree::Par(random_kind(rng), kids),
        _ => GameTree::Seq(random_kind(rng), kids),
    }
}

/// A random game with between three and eleven nodes.
pub fn random_tree(rng: &mut ChaCha8Rng) -> GameTree {
    loop {
        let g = random_node(rng, 3);
        if TREE_NODES.contains(&g.node_count()) {
            return g;
        }
    }
}

/// Every legal run of `g` with at most `max_len` moves, the empty run first.
pub fn legal_runs(g: &GameTree, max_len: usize) -> Vec<Run> {
    fn go(g: &GameTree, pos: &Pos, run: &mut Run, max_len: usize, out: &mut Vec<Run>) {
        out.push(run.clone());
        if run.len() == max_len {
            return;
        }
        for p in [Player::Top, Player::Bottom] {
            for m in pos.legal_moves(g, p) {
                let mut next = pos.clone();
                next.apply(g, p, &m).expect("offered move applies");
                run.push(LabMove::new(p, m));
                go(g, &next, run, max_len, out);
                run.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &Pos::initial(g), &mut Vec::new(), max_len, &mut out);
    out
}

fn demorgan_case(rng: &mut ChaCha8Rng, report: &mut FuzzReport) {
    let (a, b) = (random_tree(rng), random_tree(rng));
    let kind = random_kind(rng);
    let shape = rng.gen_range(0..3);
    let make = |k: Kind, x: GameTree, y: GameTree| match shape {
        0 => GameTree::Cho(k, vec![x, y]),
        1 => GameTree::Par(k, vec![x, y]),
        _ => GameTree::Seq(k, vec![x, y]),
    };
    let game = make(kind, a.clone(), b.clone());
    // the dual connective applied to the negated components
    let dual = make(kind.dual(), a.negate(), b.negate());
    let table = |g: &GameTree| -> BTreeMap<String, Player> {
        legal_runs(g, DEMORGAN_RUN_LENGTH)
            .into_iter()
            .map(|r| {
                let w = winner(g, &r).expect("enumerated runs are legal");
                (format_run(&r), w)
            })
            .collect()
    };
    let swapped: BTreeMap<String, Player> = legal_runs(&game, DEMORGAN_RUN_LENGTH)
        .into_iter()
        .map(|r| {
            let w = winner(&game, &r).expect("enumerated runs are legal");
            (format_run(&swap_labels(&r)), w.other())
        })
        .collect();
    let got = table(&dual);
    report.expect(got.len() == swapped.len(), || {
        format!("{dual}: {} legal runs, the swapped game has {}", got.len(), swapped.len())
    });
    for (run, w) in &swapped {
        report.expect(got.get(run) == Some(w), || {
            format!("{dual} on [{run}]: expected {w}, found {:?}", got.get(run))
        });
    }
}

/// Both players' moves of `run` merged in every order that keeps each
/// player's own order.
fn interleavings(run: &[LabMove]) -> Vec<Run> {
    let tops: Vec<&LabMove> = run.iter().filter(|m| m.by == Player::Top).collect();
    let bottoms: Vec<&LabMove> = run.iter().filter(|m| m.by == Player::Bottom).collect();
    fn go(a: &[&LabMove], b: &[&LabMove], cur: &mut Run, out: &mut Vec<Run>) {
        if a.is_empty() && b.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((x, rest)) = a.split_first() {
            cur.push((*x).clone());
            go(rest, b, cur, out);
            cur.pop();
        }
        if let Some((x, rest)) = b.split_first() {
            cur.push((*x).clone());
            go(a, rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&tops, &bottoms, &mut Vec::new(), &mut out);
    out
}

fn illegal_by(g: &GameTree, run: &[LabMove], p: Player) -> bool {
    matches!(legal(g, run), Legality::IllegalBy(q, _) if q == p)
}

fn delay_case(rng: &mut ChaCha8Rng, report: &mut FuzzReport) {
    let g = random_tree(rng);
    let runs = legal_runs(&g, DELAY_RUN_LENGTH);
    let mut alphabet: Vec<String> = runs.iter().flatten().map(|lm| lm.m.clone()).collect();
    alphabet.sort();
    alphabet.dedup();
    alphabet.push("1".into());
    // legal runs, and legal runs followed by one move illegal for its author
    let mut gammas = runs.clone();
    for r in runs.iter().filter(|r| r.len() < DELAY_RUN_LENGTH) {
        let p = if rng.gen_bool(0.5) { Player::Top } else { Player::Bottom };
        if let Some(m) = alphabet.choose(rng) {
            let mut bad = r.clone();
            bad.push(LabMove::new(p, m.clone()));
            if legal(&g, &bad) != Legality::Legal {
                gammas.push(bad);
            }
        }
    }
    for gamma in &gammas {
        for sigma in interleavings(gamma) {
            for p in [Player::Top, Player::Bottom] {
                if !is_delay(&sigma, gamma, p) {
                    continue;
                }
                let show = || format!("{g}: [{}] is a {p}-delay of [{}]", format_run(&sigma), format_run(gamma));
                match report.suite {
                    Suite::Static => {
                        let w = outcome(&g, gamma);
                        if w == p {
                            report.expect(outcome(&g, &sigma) == p, || format!("{}, won by {p} only in the original", show()));
                        }
                    }
                    _ => {
                        if illegal_by(&g, &sigma, p) {
                            report.expect(illegal_by(&g, gamma, p), || format!("{}, illegal by {p} only in the delay", show()));
                        }
                        let q = p.other();
                        if illegal_by(&g, gamma, q) {
                            report.expect(illegal_by(&g, &sigma, q), || format!("{}, illegal by {q} only in the original", show()));
                        }
                    }
                }
            }
        }
    }
}

fn legality_case(rng: &mut ChaCha8Rng, report: &mut FuzzReport) {
    const CHARS: [&str; 6] = ["1", "2", "3", ".", "§", "0"];
    let g = random_tree(rng);
    let mut run = Run::new();
    for _ in 0..8 {
        let p = if rng.gen_bool(0.5) { Player::Top } else { Player::Bottom };
        let (pos, legality) = replay(&g, &run);
        report.expect(legality == Legality::Legal, || format!("{g}: prefix [{}] is illegal", format_run(&run)));
        let offered = pos.legal_moves(&g, p);
        for m in &offered {
            let mut next = run.clone();
            next.push(LabMove::new(p, m.clone()));
            report.expect(legal(&g, &next) == Legality::Legal, || {
                format!("{g}: offered move {p}:{m} after [{}] is illegal", format_run(&run))
            });
        }
        for _ in 0..10 {
            let len = rng.gen_range(1..=5);
            let m: String = (0..len).map(|_| *CHARS.choose(rng).unwrap()).collect();
            let mut next = run.clone();
            next.push(LabMove::new(p, m.clone()));
            let accepted = legal(&g, &next) == Legality::Legal;
            report.expect(accepted == offered.contains(&m), || {
                format!("{g}: {p}:{m} after [{}] accepted={accepted} but offered={}", format_run(&run), offered.contains(&m))
            });
        }
        let Some(m) = offered.choose(rng) else { continue };
        run.push(LabMove::new(p, m.clone()));
    }
    for k in 0..=run.len() {
        report.expect(legal(&g, &run[..k]) == Legality::Legal, || {
            format!("{g}: prefix of length {k} of [{}] is illegal", format_run(&run))
        });
    }
}

/// Random hyperformulas reachable from small formulas by the ° rules.
fn random_hyperformula(rng: &mut ChaCha8Rng, pool: &[Formula]) -> Formula {
    let mut f = pool.choose(rng).unwrap().clone();
    for _ in 0..rng.gen_range(0..=4) {
        let mut next: Vec<Formula> = wait_premises(&f, Family::Circ);
        for expansions in [
            match_expansions(&f, Family::Circ),
            switch_expansions(&f, Family::Circ),
            choose_expansions(&f, Family::Circ),
        ] {
            next.extend(expansions.into_iter().map(|(g, _)| g));
        }
        match next.choose(rng) {
            Some(g) => f = g.clone(),
            None => break,
        }
    }
    f
}

fn stability_pool() -> Vec<Formula> {
    let spec = CorpusSpec::new(&["p", "P", "Q"], &Connective::ALL, 7);
    by_size(&spec).into_iter().skip(3).flatten().collect()
}

fn stability_case(rng: &mut ChaCha8Rng, report: &mut FuzzReport) {
    thread_local! {
        static POOL: Vec<Formula> = stability_pool();
    }
    let e = loop {
        let e = POOL.with(|pool| random_hyperformula(rng, pool));
        if is_stable(&e) && is_balanced(&e) {
            break e;
        }
    };
    let family = Interpretation::standard_family(&e);
    let interp = family.choose(rng).unwrap();
    let g = interpret(&e, interp).expect("propositional formulas interpret");
    for _ in 0..50 {
        let mut pos = Pos::initial(&g);
        let mut run = Run::new();
        for _ in 0..rng.gen_range(0..=8) {
            let p = if rng.gen_bool(0.5) { Player::Top } else { Player::Bottom };
            let Some(m) = pos.legal_moves(&g, p).choose(rng).cloned() else { continue };
            pos.apply(&g, p, &m).expect("offered move applies");
            run.push(LabMove::new(p, m));
            if manageable(&e, &run, interp) {
                report.expect(pos.winner(&g) == Player::Top, || {
                    format!("{e} under {interp:?}: manageable run [{}] is lost", format_run(&run))
                });
            }
        }
    }
}
