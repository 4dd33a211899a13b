//! Subcommands of the `clarena` binary.
//!
//! Exit codes: 0 for the positive answer (provable, refutable, valid, machine
//! wins, no violations), 1 for the negative one and 2 for errors.

use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use clarena_core::corpus::{corpus, Connective, CorpusSpec};
use clarena_core::formula::{Formula, Kind};
use clarena_core::fuzz::{run_suite, Suite};
use clarena_core::game::{format_run, interpret, legal_moves, GameTree, Interpretation, LabMove};
use clarena_core::prover::{check, decide, refute, Decision, ProofNode, Refutation, System};
use clarena_core::strategy::{default_cap, explore_machine, machine_from_proof, play, Adversary, Agent, StrategyError};
use clarena_core::{parse, Player};

use crate::api::{serve, AppState};
use crate::{decide_text, SystemName};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "clarena", version, about = "Prover and game arena for propositional computability logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide provability; exit 0 if provable, 1 if not.
    Decide {
        formula: String,
        #[arg(long, default_value = "cl9")]
        system: SystemName,
        /// Write the proof as JSON to this file.
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Search for a refutation of an elementary-base formula; exit 0 if found.
    Refute {
        formula: String,
        /// Write the refutation as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a proof or refutation file; exit 0 if every step is valid.
    Verify { proof_file: PathBuf },
    /// Play the machine strategy of a provable formula against an environment.
    Play {
        formula: String,
        /// exhaustive, random:SEED, scripted:FILE, interactive, null or greedy.
        #[arg(long, default_value = "exhaustive")]
        env: EnvChoice,
        /// Interpretation as inline JSON or a path to a JSON file.
        #[arg(long)]
        interpretation: Option<String>,
    },
    /// List every formula up to a size bound, one per line.
    Corpus {
        #[arg(long)]
        max_size: usize,
        /// Comma-separated atom names; capitalized names are general atoms.
        #[arg(long, value_delimiter = ',', required = true)]
        atoms: Vec<String>,
        /// Comma-separated connectives out of & | * + &> |>.
        #[arg(long, value_delimiter = ',')]
        connectives: Option<Vec<String>>,
        /// Also use T and F as leaves.
        #[arg(long)]
        constants: bool,
    },
    /// Run game-engine property suites; exit 1 if any violation is found.
    Fuzz {
        /// demorgan, static, delay, legality, stability or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Serve the HTTP session API.
    Serve {
        #[arg(long, env = "CLARENA_PORT", default_value_t = 8080)]
        port: u16,
        /// Append-only event log, replayed on startup.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
    /// Expand a sequential recurrence into an n-ary sequential conjunction.
    Truncate {
        formula: String,
        #[arg(long)]
        copies: usize,
        /// Expand the co-recurrence (sequential disjunction) instead.
        #[arg(long)]
        co: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvChoice {
    Exhaustive,
    Random(u64),
    Scripted(PathBuf),
    Interactive,
    Null,
    Greedy,
}

impl std::str::FromStr for EnvChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.split_once(':') {
            Some(("random", seed)) => EnvChoice::Random(seed.parse().map_err(|e| format!("bad seed {seed:?}: {e}"))?),
            Some(("scripted", file)) => EnvChoice::Scripted(file.into()),
            None if s == "exhaustive" => EnvChoice::Exhaustive,
            None if s == "interactive" => EnvChoice::Interactive,
            None if s == "null" => EnvChoice::Null,
            None if s == "greedy" => EnvChoice::Greedy,
            _ => return Err(format!("unknown environment {s:?}")),
        })
    }
}

/// Standard streams, replaceable in tests.
pub struct Io<'a> {
    pub input: &'a mut dyn BufRead,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

type CmdResult = Result<u8, String>;

pub fn run(cli: Cli, io: &mut Io) -> u8 {
    let result = match cli.command {
        Command::Decide { formula, system, proof } => cmd_decide(&formula, system, proof, io),
        Command::Refute { formula, out } => cmd_refute(&formula, out, io),
        Command::Verify { proof_file } => cmd_verify(&proof_file, io),
        Command::Play { formula, env, interpretation } => cmd_play(&formula, env, interpretation.as_deref(), io),
        Command::Corpus { max_size, atoms, connectives, constants } => {
            cmd_corpus(max_size, &atoms, connectives.as_deref(), constants, io)
        }
        Command::Fuzz { suite, seed, cases } => cmd_fuzz(&suite, seed, cases, io),
        Command::Serve { port, journal } => cmd_serve(port, journal),
        Command::Truncate { formula, copies, co } => cmd_truncate(&formula, copies, co, io),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn say(io: &mut Io, line: impl std::fmt::Display) -> Result<(), String> {
    writeln!(io.out, "{line}").map_err(|e| e.to_string())
}

fn parse_formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| format!("cannot parse formula: {e}"))
}

fn cmd_decide(text: &str, system: SystemName, proof: Option<PathBuf>, io: &mut Io) -> CmdResult {
    match decide_text(text, system)? {
        Decision::Provable(p) => {
            say(io, format!("provable in {system} ({} steps)", p.size()))?;
            if let Some(path) = proof {
                write_json(&path, &p)?;
            }
            Ok(EXIT_YES)
        }
        Decision::Unprovable => {
            say(io, format!("not provable in {system}"))?;
            Ok(EXIT_NO)
        }
    }
}

fn cmd_refute(text: &str, out: Option<PathBuf>, io: &mut Io) -> CmdResult {
    let f = parse_formula(text)?;
    match refute(&f).map_err(|e| e.to_string())? {
        Refutation::Refutable(r) => {
            say(io, format!("refutable ({} steps)", r.size()))?;
            if let Some(path) = out {
                write_json(&path, &r)?;
            }
            Ok(EXIT_YES)
        }
        Refutation::Irrefutable => {
            say(io, "not refutable")?;
            Ok(EXIT_NO)
        }
    }
}

fn cmd_verify(path: &PathBuf, io: &mut Io) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let p: ProofNode = serde_json::from_str(&text).map_err(|e| format!("not a proof file: {e}"))?;
    match check(&p) {
        Ok(()) => {
            say(io, format!("valid derivation of {} ({} steps)", p.formula, p.size()))?;
            Ok(EXIT_YES)
        }
        Err(failure) => {
            say(io, format!("invalid: {failure}"))?;
            Ok(EXIT_NO)
        }
    }
}

fn read_interpretation(arg: &str) -> Result<Interpretation, String> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("bad interpretation: {e}"))
}

/// Moves for a scripted environment: whitespace-separated, with an optional
/// `B:` label as in run files.
fn read_script(path: &PathBuf) -> Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(text.split_whitespace().map(|m| m.strip_prefix("B:").unwrap_or(m).to_string()).collect())
}

/// An environment typed in at the terminal. An empty line passes.
struct Prompt<'a, 'b> {
    io: &'a mut Io<'b>,
    finished_input: bool,
}

impl Agent for Prompt<'_, '_> {
    fn observe(&mut self, _m: &str) -> Result<(), StrategyError> {
        Ok(())
    }

    fn act(&mut self, g: &GameTree, run: &[LabMove]) -> Vec<String> {
        if self.finished_input {
            return Vec::new();
        }
        let offered = legal_moves(g, run, Player::Bottom).unwrap_or_default();
        let _ = writeln!(self.io.out, "run: {}", format_run(run));
        let _ = writeln!(self.io.out, "your moves: {}", offered.join(" "));
        let _ = write!(self.io.out, "> ");
        let _ = self.io.out.flush();
        let mut line = String::new();
        match self.io.input.read_line(&mut line) {
            Ok(0) | Err(_) => {
                self.finished_input = true;
                Vec::new()
            }
            Ok(_) => line.split_whitespace().map(str::to_string).collect(),
        }
    }
}

fn cmd_play(text: &str, env: EnvChoice, interpretation: Option<&str>, io: &mut Io) -> CmdResult {
    let f = parse_formula(text)?;
    let Decision::Provable(proof) = decide(&f, System::Cl9).map_err(|e| e.to_string())? else {
        say(io, "not provable: there is no machine strategy to play")?;
        return Ok(EXIT_NO);
    };
    let given = interpretation.map(read_interpretation).transpose()?;

    if env == EnvChoice::Exhaustive {
        // without an explicit interpretation, try each of the standard ones
        let family = match given {
            Some(i) => vec![i.completed_for(&f)],
            None => Interpretation::standard_family(&f),
        };
        let mut states = 0;
        for i in &family {
            let report = explore_machine(&proof, i).map_err(|e| e.to_string())?;
            states += report.states;
            if !report.all_won {
                let run = report.counterexample.as_deref().map(format_run).unwrap_or_default();
                say(io, format!("machine loses a branch: {run}"))?;
                if let Some(why) = report.failure {
                    say(io, format!("strategy failure: {why}"))?;
                }
                say(io, serde_json::to_string(i).unwrap())?;
                return Ok(EXIT_NO);
            }
        }
        say(io, format!("machine wins all 100% branches ({states} states, {} interpretations)", family.len()))?;
        return Ok(EXIT_YES);
    }

    let i = given.unwrap_or_default().completed_for(&f);
    let g = interpret(&f, &i)?;
    let mut machine = machine_from_proof(&proof, &i).map_err(|e| e.to_string())?;
    let result = match env {
        EnvChoice::Interactive => {
            let mut prompt = Prompt { io: &mut *io, finished_input: false };
            play(&g, &mut machine, &mut prompt, default_cap(&g))
        }
        other => {
            let mut adversary = match other {
                EnvChoice::Random(seed) => Adversary::random(Player::Bottom, seed),
                EnvChoice::Scripted(path) => Adversary::scripted(Player::Bottom, read_script(&path)?),
                EnvChoice::Null => Adversary::null(Player::Bottom),
                EnvChoice::Greedy => Adversary::greedy(Player::Bottom),
                EnvChoice::Exhaustive | EnvChoice::Interactive => unreachable!(),
            };
            play(&g, &mut machine, &mut adversary, default_cap(&g))
        }
    }
    .map_err(|e| e.to_string())?;
    say(io, serde_json::to_string_pretty(&result).unwrap())?;
    Ok(if result.winner == Player::Top { EXIT_YES } else { EXIT_NO })
}

fn cmd_corpus(
    max_size: usize,
    atoms: &[String],
    connectives: Option<&[String]>,
    constants: bool,
    io: &mut Io,
) -> CmdResult {
    let connectives = match connectives {
        Some(names) => names.iter().map(|c| c.parse()).collect::<Result<Vec<Connective>, _>>()?,
        None => Connective::ALL.to_vec(),
    };
    let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
    if let Some(bad) = atoms.iter().find(|a| a.is_empty() || !a.chars().all(|c| c.is_ascii_alphanumeric())) {
        return Err(format!("bad atom name {bad:?}"));
    }
    let spec = CorpusSpec { constants, ..CorpusSpec::new(&atoms, &connectives, max_size) };
    let mut text = String::new();
    for f in corpus(&spec) {
        text.push_str(&f.canonical());
        text.push('\n');
    }
    io.out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(EXIT_YES)
}

fn cmd_fuzz(suite: &str, seed: u64, cases: usize, io: &mut Io) -> CmdResult {
    let suites = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let mut clean = true;
    for s in suites {
        let report = run_suite(s, seed, cases);
        say(
            io,
            format!(
                "{}: seed {} cases {} checks {} violations {}",
                report.suite,
                report.seed,
                report.cases,
                report.checks,
                report.violations.len()
            ),
        )?;
        for v in &report.violations {
            say(io, format!("  {v}"))?;
        }
        clean &= report.violations.is_empty();
    }
    Ok(if clean { EXIT_YES } else { EXIT_NO })
}

fn cmd_serve(port: u16, journal: Option<PathBuf>) -> CmdResult {
    let app = match journal {
        Some(path) => AppState::with_journal(&path).map_err(|e| format!("cannot open journal: {e}"))?,
        None => AppState::new(),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(serve(port, Arc::new(app))).map_err(|e| e.to_string())?;
    Ok(EXIT_YES)
}

/// `copies` copies of `f` under one sequential connective.
pub fn truncate(f: &Formula, copies: usize, co: bool) -> Formula {
    let kind = if co { Kind::Disj } else { Kind::Conj };
    match copies {
        1 => f.clone(),
        _ => Formula::Seq(kind, vec![f.clone(); copies], 0),
    }
}

fn cmd_truncate(text: &str, copies: usize, co: bool, io: &mut Io) -> CmdResult {
    if copies == 0 {
        return Err("at least one copy is needed".into());
    }
    let f = parse_formula(text)?;
    say(io, truncate(&f, copies, co).canonical())?;
    Ok(EXIT_YES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_choices() {
        assert_eq!("random:3".parse(), Ok(EnvChoice::Random(3)));
        assert_eq!("scripted:a.txt".parse(), Ok(EnvChoice::Scripted("a.txt".into())));
        assert_eq!("exhaustive".parse(), Ok(EnvChoice::Exhaustive));
        assert!("random:x".parse::<EnvChoice>().is_err());
        assert!("other".parse::<EnvChoice>().is_err());
    }

    #[test]
    fn truncation() {
        let f = parse("p |> q").unwrap();
        assert_eq!(truncate(&f, 3, false).canonical(), "((p |> q) &> (p |> q) &> (p |> q))");
        assert_eq!(truncate(&f, 2, true).canonical(), "((p |> q) |> (p |> q))");
        assert_eq!(truncate(&f, 1, true), f);
    }
}
