//! Command-line front end for the `spectral-leverage` crate.
//!
//! The binary is a thin wrapper around [`run`]; the subcommands are also callable
//! directly through [`commands`].

// `!(x > 0.0)` checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

use commands::{BENCH_COLUMNS, EkCurve};

/// Executes one parsed command line, writing every output to its configured path.
pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        // fails only if the pool already exists, e.g. when `run` is called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match cli.command {
        Command::Gen(a) => {
            let cfg = commands::GenConfig {
                generator: a.generator,
                dim: a.dim,
                n: a.n,
                gamma: a.gamma,
                seed: a.seed,
                noise: (!a.no_y).then_some(a.noise),
            };
            let design = commands::cmd_gen(&cfg)?;
            io::write_dataset(&a.output, &design)
        }
        Command::Leverage(a) => {
            let cfg = a.config()?;
            let x = io::read_dataset(&a.input)?;
            io::write_json(&a.output, &commands::cmd_leverage(&cfg, &x)?)
        }
        Command::ExactLeverage(a) => {
            let cfg = a.config()?;
            let x = io::read_dataset(&a.input)?;
            io::write_json(&a.output, &commands::cmd_exact_leverage(&cfg, &x)?)
        }
        Command::Krr(a) => {
            let cfg = a.config()?;
            let x = io::read_dataset(&a.input)?;
            io::write_json(&a.output, &commands::cmd_krr(&cfg, a.fit, &x)?)
        }
        Command::Bench(a) => {
            let cfg = a.config()?;
            let x = a.input.as_deref().map(io::read_dataset).transpose()?;
            let report = commands::cmd_bench(&cfg, x.as_ref())?;
            io::write_table(&a.output, &BENCH_COLUMNS, &report.table())
        }
        Command::EkCurve(a) => {
            let cfg = a.config()?;
            let x = io::read_dataset(&a.input)?;
            let curve = commands::cmd_ek_curve(&cfg, &x)?;
            io::write_table(&a.output, &EkCurve::COLUMNS, &curve.table())
        }
    }
}
