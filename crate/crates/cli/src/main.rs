use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use clarena::commands::{run, Cli, Io};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = io::stdin();
    let (mut input, mut out, mut err) = (stdin.lock(), io::stdout(), io::stderr());
    let code = run(cli, &mut Io { input: &mut input, out: &mut out, err: &mut err });
    let _ = out.flush();
    ExitCode::from(code)
}
