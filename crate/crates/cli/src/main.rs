mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;
use commands::{command_name, params_of, run, Inputs};

fn init_threads() {
    let Ok(v) = std::env::var("AVTK_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => eprintln!("warning: ignoring AVTK_THREADS={v:?}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    init_threads();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match run(&cli.command, &mut inputs) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code as u8);
        }
    };
    let text = if cli.wants_json() {
        let name = command_name(&cli.command);
        let params = params_of(&cli.command);
        let digest = report::inputs_digest(name, &params, &inputs.files);
        let r = report::report(name, params, digest, &outcome, start.elapsed().as_millis());
        avtk::doc::to_canonical_json(&r)
    } else {
        outcome.text
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(outcome.exit as u8)
}
