//! Sessions driven move by move must end where a batch play ends, and a
//! journal must bring the store back exactly as it was.

use clarena::api::AppState;
use clarena::session::{HumanRole, SessionSpec, SessionState, Status};
use clarena_core::corpus::{corpus, Connective, CorpusSpec};
use clarena_core::formula::Formula;
use clarena_core::game::{interpret, legal_moves, GameTree, Interpretation, LabMove, Run};
use clarena_core::prover::{decide, refute, Decision, Refutation, System};
use clarena_core::strategy::{
    default_cap, env_from_refutation, machine_from_proof, play, Adversary, Agent, PlayResult, StrategyError,
};
use clarena_core::Player;

/// A machine that lets the environment go first, then always makes the
/// legal move picked by a fixed stride.
struct Stepper {
    turn: usize,
    stride: usize,
}

impl Agent for Stepper {
    fn observe(&mut self, _m: &str) -> Result<(), StrategyError> {
        Ok(())
    }

    fn act(&mut self, g: &GameTree, run: &[LabMove]) -> Vec<String> {
        self.turn += 1;
        if self.turn == 1 {
            return Vec::new();
        }
        let offered = legal_moves(g, run, Player::Top).unwrap();
        if offered.is_empty() {
            return Vec::new();
        }
        vec![offered[(self.turn * self.stride) % offered.len()].clone()]
    }
}

fn spec(f: &Formula, i: &Interpretation, human_role: HumanRole) -> SessionSpec {
    SessionSpec { formula: f.canonical(), interpretation: Some(i.clone()), human_role }
}

/// Feeds the human's moves of `expected.run` to a fresh session one at a time.
fn replay_through_api(app: &AppState, spec: SessionSpec, expected: &PlayResult) -> SessionState {
    let human = spec.human_role.player();
    let mut state = app.create(spec).unwrap();
    for m in expected.run.iter().filter(|m| m.by == human) {
        state = app.human_move(&state.id, &m.m).unwrap();
    }
    if state.status == Status::Open {
        state = app.end(&state.id).unwrap();
    }
    state
}

fn small_corpus(atoms: &[&str], max_size: usize) -> Vec<Formula> {
    corpus(&CorpusSpec::new(atoms, &Connective::ALL, max_size))
}

#[test]
fn environment_sessions_replay_batch_plays() {
    let app = AppState::new();
    let mut plays = 0;
    for f in small_corpus(&["p", "P", "Q"], 6) {
        let Decision::Provable(proof) = decide(&f, System::Cl9).unwrap() else { continue };
        for i in &Interpretation::standard_family(&f) {
            let g = interpret(&f, i).unwrap();
            for seed in 1..=5 {
                let mut machine = machine_from_proof(&proof, i).unwrap();
                let mut env = Adversary::random(Player::Bottom, seed);
                let expected = play(&g, &mut machine, &mut env, default_cap(&g)).unwrap();
                let state = replay_through_api(&app, spec(&f, i, HumanRole::Environment), &expected);
                assert_eq!(state.run, expected.run, "{f} seed {seed}");
                assert_eq!(state.status, Status::Finished { winner: expected.winner }, "{f}");
                assert_eq!(expected.winner, Player::Top);
                plays += 1;
            }
        }
    }
    assert!(plays > 300, "{plays}");
}

#[test]
fn machine_sessions_replay_batch_plays() {
    let app = AppState::new();
    let mut plays = 0;
    for f in small_corpus(&["p", "q"], 6) {
        let Refutation::Refutable(refutation) = refute(&f).unwrap() else { continue };
        let i = Interpretation::default_for(&f);
        let g = interpret(&f, &i).unwrap();
        for stride in 1..=3 {
            let mut machine = Stepper { turn: 0, stride };
            let mut env = env_from_refutation(&refutation, &i).unwrap();
            let expected = play(&g, &mut machine, &mut env, default_cap(&g)).unwrap();
            let state = replay_through_api(&app, spec(&f, &i, HumanRole::Machine), &expected);
            assert_eq!(state.run, expected.run, "{f} stride {stride}");
            assert_eq!(state.status, Status::Finished { winner: expected.winner }, "{f}");
            plays += 1;
        }
    }
    assert!(plays > 300, "{plays}");
}

#[test]
fn journal_restores_the_store() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("journal.jsonl");
    let env_spec = |f: &str| SessionSpec { formula: f.into(), interpretation: None, human_role: HumanRole::Environment };
    let (kept, ended, deleted) = {
        let app = AppState::with_journal(&path).unwrap();
        let kept = app.create(env_spec("(P + Q) -> (P |> Q)")).unwrap();
        let kept = app.human_move(&kept.id, "1.2").unwrap();
        // rejected moves leave no trace
        assert!(app.human_move(&kept.id, "9").is_err());
        let ended = app.create(env_spec("P | ~P")).unwrap();
        app.human_move(&ended.id, "1.1").unwrap();
        let ended = app.end(&ended.id).unwrap();
        let deleted = app.create(env_spec("(P * Q) -> (Q * P)")).unwrap();
        app.delete(&deleted.id).unwrap();
        (kept, ended, deleted)
    };

    let app = AppState::with_journal(&path).unwrap();
    assert_eq!(app.state(&kept.id).unwrap(), kept);
    assert_eq!(app.state(&ended.id).unwrap(), ended);
    assert!(app.state(&deleted.id).is_err());

    // the choice was made before the restart
    assert!(app.human_move(&kept.id, "1.1").is_err());
    // the reopened journal keeps recording
    let after = app.end(&kept.id).unwrap();
    drop(app);
    let app = AppState::with_journal(&path).unwrap();
    assert_eq!(app.state(&kept.id).unwrap(), after);
    let lines = std::fs::read_to_string(&path).unwrap().lines().count();
    assert_eq!(lines, 8);
}

#[test]
fn empty_runs_are_runs() {
    // a session on a formula with no moves at all is finished on creation
    let app = AppState::new();
    let state = app
        .create(SessionSpec { formula: "p | ~p".into(), interpretation: None, human_role: HumanRole::Environment })
        .unwrap();
    assert_eq!(state.run, Run::new());
    assert_eq!(state.status, Status::Finished { winner: Player::Top });
}
