use std::io::{BufRead, BufReader};
use std::process::{Command, Output, Stdio};

fn clarena(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clarena")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    clarena(args).status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decide_exit_codes() {
    assert_eq!(code(&["decide", "(P + Q) -> (P |> Q)"]), 0);
    assert_eq!(code(&["decide", "(P |> Q) -> (P + Q)"]), 1);
    let bad = clarena(&["decide", "(P + "]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cannot parse"));
    assert_eq!(code(&["decide", "p", "--system", "cl12"]), 2);
    assert_eq!(code(&["decide", "P | ~P", "--system", "cl10"]), 2);
    assert_eq!(code(&["decide", "(p &> q) | ~p", "--system", "cl10"]), 1);
    assert_eq!(code(&["decide", "+x:(p(x) | ~p(x))", "--system", "cl11qf"]), 0);
}

#[test]
fn proof_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("proof.json");
    let proof = proof.to_str().unwrap();
    assert_eq!(code(&["decide", "(P & Q) | (~P &> ~R) | (~Q &> ~S) | (R + S)", "--proof", proof]), 0);
    assert_eq!(code(&["verify", proof]), 0);

    // point the root at a different formula
    let text = std::fs::read_to_string(proof).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["formula"] = "(P & Q) | (~P &> ~R) | (~Q &> ~S) | (R * S)".into();
    std::fs::write(proof, value.to_string()).unwrap();
    assert_eq!(code(&["verify", proof]), 1);

    std::fs::write(proof, "not json").unwrap();
    assert_eq!(code(&["verify", proof]), 2);

    let refutation = dir.path().join("refutation.json");
    let refutation = refutation.to_str().unwrap();
    assert_eq!(code(&["refute", "(p &> q) -> (q &> p)", "--out", refutation]), 0);
    assert_eq!(code(&["verify", refutation]), 0);
    assert_eq!(code(&["refute", "p | ~p"]), 1);
    assert_eq!(code(&["refute", "P | q"]), 2);
}

#[test]
fn exhaustive_play() {
    let out = clarena(&["play", "(P & Q) | (~P &> ~R) | (~Q &> ~S) | (R + S)", "--env", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("machine wins all 100% branches"), "{}", stdout(&out));
    assert_eq!(code(&["play", "(P |> Q) -> (P + Q)"]), 1);
}

#[test]
fn single_plays() {
    let out = clarena(&["play", "(P + Q) -> (P |> Q)", "--env", "random:4"]);
    assert_eq!(out.status.code(), Some(0));
    let result: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(result["winner"], "T");

    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("moves.txt");
    std::fs::write(&script, "B:1.2\n").unwrap();
    let out = clarena(&["play", "(P + Q) -> (P |> Q)", "--env", &format!("scripted:{}", script.display())]);
    let result: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(result["run"], serde_json::json!([{ "by": "B", "m": "1.2" }, { "by": "T", "m": "2.§" }]));

    let out = clarena(&[
        "play",
        "P | ~P",
        "--env",
        "greedy",
        "--interpretation",
        r#"{"general": {"P": "(T * F)"}}"#,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&["play", "p", "--env", "sometimes"]), 2);
}

#[test]
fn interactive_play() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clarena"))
        .args(["play", "(P + Q) -> (P |> Q)", "--env", "interactive"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(b"1.2\n\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("your moves: 1.1 1.2"), "{text}");
    assert!(text.contains(r#""m": "2.§""#), "{text}");
}

#[test]
fn corpus_is_deterministic() {
    let args = ["corpus", "--max-size", "6", "--atoms", "p,q,P"];
    let first = clarena(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&clarena(&args)));
    let lines: Vec<String> = stdout(&first).lines().map(str::to_string).collect();
    assert_eq!(&lines[..6], ["p", "q", "P", "~p", "~q", "~P"]);
    // every listed formula reads back as itself
    for line in lines.iter().step_by(97) {
        assert_eq!(code(&["truncate", line, "--copies", "1"]), 0);
    }
    let small = clarena(&["corpus", "--max-size", "3", "--atoms", "p", "--connectives", "&,|>", "--constants"]);
    assert_eq!(stdout(&small).lines().count(), 1 + 2 + 1 + 2 * 9);
    assert_eq!(code(&["corpus", "--max-size", "3", "--atoms", "p", "--connectives", "^"]), 2);
}

#[test]
fn fuzz_suites() {
    let out = clarena(&["fuzz", "--suite", "static", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("static: seed 7 cases 200 checks"), "{}", stdout(&out));
    assert!(stdout(&out).trim_end().ends_with("violations 0"));
    let all = clarena(&["fuzz", "--cases", "20"]);
    assert_eq!(all.status.code(), Some(0));
    assert_eq!(stdout(&all).lines().count(), 5);
    assert_eq!(code(&["fuzz", "--suite", "nothing"]), 2);
}

#[test]
fn truncation() {
    let out = clarena(&["truncate", "p | q", "--copies", "3", "--co"]);
    assert_eq!(stdout(&out).trim(), "((p | q) |> (p | q) |> (p | q))");
    assert_eq!(code(&["truncate", "p", "--copies", "0"]), 2);
}

#[test]
fn serve_reads_the_port_from_the_environment() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_clarena"))
        .arg("serve")
        .env("CLARENA_PORT", port.to_string())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    assert!(line.contains(&format!(":{port}")), "{line}");

    let runtime = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
    let status = runtime.block_on(async {
        reqwest::Client::new()
            .post(format!("http://127.0.0.1:{port}/api/decide"))
            .json(&serde_json::json!({ "formula": "P | ~P" }))
            .send()
            .await
            .unwrap()
            .json::<serde_json::Value>()
            .await
            .unwrap()
    });
    child.kill().unwrap();
    child.wait().unwrap();
    assert_eq!(status["provable"], true);
}
