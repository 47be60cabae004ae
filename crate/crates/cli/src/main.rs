//! `mixedclust`: cluster mixed categorical/continuous data, generate
//! synthetic benchmarks, and score clusterings.

mod bench_cmd;
mod cluster_cmd;
mod eval_cmd;
mod manifest;
mod opts;
mod synth_cmd;

use std::process::ExitCode;

use clap::Parser;

use opts::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let threads = cli.threads();
    let run = || match cli.command {
        Command::Cluster(args) => cluster_cmd::run(args),
        Command::Synth(args) => synth_cmd::run(args),
        Command::Eval(args) => eval_cmd::run(args),
        Command::Bench(args) => bench_cmd::run(args),
    };
    let outcome = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(e) => Err(anyhow::anyhow!("cannot build thread pool: {e}")),
            }
        }
        None => run(),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let internal = err
                .chain()
                .any(|c| matches!(c.downcast_ref(), Some(mixedclust_core::Error::Internal(_))));
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}
