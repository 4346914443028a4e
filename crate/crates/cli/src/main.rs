//! `qclass` command-line driver.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or configuration,
//! 3 checkpoint, 4 input shape, 5 data format.
//!
//! Metrics lines written by `train --metrics-out` are JSON objects with the
//! keys `epoch`, `class_loss`, `mean_loss`, `train_accuracy`,
//! `eval_accuracy` (null without a test split) and `wall_ms`.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use qclass::Error;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parameter(_) => 2,
        Error::Checkpoint(_) | Error::Incompatible { .. } => 3,
        Error::Shape(_) => 4,
        Error::Dimension(_) | Error::Parse { .. } | Error::Format(_) | Error::Domain(_) => 5,
        Error::Io(_) => 1,
        Error::Capacity(_) | Error::Index(_) | Error::Layout(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => commands::train(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Predict(a) => commands::predict(&a),
        Command::Inspect(a) => commands::inspect(&a),
        Command::Init(a) => commands::init(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qclass: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
