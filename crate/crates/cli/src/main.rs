//! `assocf` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, 2 input format, 3 budget exhausted (the
//! partial report is still printed).

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use args::Cli;
use commands::{Failure, Outcome};

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    Error,
}

#[derive(Debug, Serialize, Deserialize)]
struct CommandResult {
    status: Status,
    payload: Value,
    diagnostics: Vec<String>,
}

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let json = cli.global.json;
    let (result, code, failed) = match commands::run(&cli.command, &cli.global) {
        Ok(out) => {
            let code = if out.exhausted { EXIT_BUDGET } else { 0 };
            (out, code, false)
        }
        Err(Failure::Input(msg)) => (error_outcome(msg), EXIT_INPUT, true),
        Err(Failure::Budget(msg)) => (error_outcome(msg), EXIT_BUDGET, true),
    };

    if json {
        let report = CommandResult {
            status: if failed { Status::Error } else { Status::Ok },
            payload: result.payload,
            diagnostics: result.diagnostics,
        };
        let text = serde_json::to_string_pretty(&report).expect("JSON values serialize");
        emit(&text);
    } else if failed {
        for d in &result.diagnostics {
            eprintln!("error: {d}");
        }
    } else {
        emit(result.text.trim_end());
        for d in &result.diagnostics {
            eprintln!("note: {d}");
        }
    }
    ExitCode::from(code)
}

/// Print to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn error_outcome(msg: String) -> Outcome {
    Outcome {
        text: String::new(),
        payload: Value::Null,
        diagnostics: vec![msg],
        exhausted: false,
    }
}
