//! The `qcond` command line.
//!
//! Every subcommand reads JSON documents (see [`crate::io`]), writes one
//! JSON document to standard output and a one-line summary to standard
//! error. Exit codes: 0 success, 1 usage, 2 parse, 3 invariant violation,
//! 4 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::channels;
use crate::conditional;
use crate::error::{Error, Result};
use crate::io::{read_document, Document};
use crate::matcore::Side;
use crate::povm;
use crate::scenarios::{selftest, teleport, theorem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qcond",
    version,
    about = "Conditional states, channels and their correspondence"
)]
pub struct Cli {
    /// Tolerance for reported deviations.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditional state of a channel's output given its input.
    Choi {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Kraus-form channel recovered from a conditional state.
    Channel {
        #[arg(long)]
        conditional: PathBuf,
    },
    /// Conditional state of a joint state given one side.
    Condition {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long)]
        on: Side,
    },
    /// Joint state from a marginal and a conditional state.
    Join {
        #[arg(long)]
        marginal: PathBuf,
        #[arg(long)]
        conditional: PathBuf,
    },
    /// Inverts ρ_{A|B} into ρ_{B|A}.
    Bayes {
        #[arg(long)]
        conditional: PathBuf,
        #[arg(long = "marginal-a")]
        marginal_a: PathBuf,
        #[arg(long = "marginal-b")]
        marginal_b: PathBuf,
    },
    /// Compares local measurement statistics with prepare-evolve-measure.
    VerifyTheorem {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long = "povm-a")]
        povm_a: PathBuf,
        #[arg(long = "povm-b")]
        povm_b: PathBuf,
    },
    /// Teleports a state through the channel's conditional state.
    Teleport {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Group Bell outcomes for classical bits.
        #[arg(long)]
        classical: bool,
    },
    /// Ensemble prepared by measuring a POVM on a state.
    Prepare {
        #[arg(long)]
        povm: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Runs the randomized invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

/// Exit code for an error raised while running a subcommand.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Syntax { .. } | Error::InvalidShape(_) | Error::DimensionMismatch { .. } => EXIT_PARSE,
        Error::NoConvergence => EXIT_NUMERICAL,
        _ => EXIT_INVARIANT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", crate::io::to_pretty_json(&outcome.data));
            let _ = writeln!(err, "{}", outcome.summary);
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Outcome {
    data: serde_json::Value,
    summary: String,
    code: i32,
}

impl Outcome {
    fn document(doc: Document, summary: String) -> Self {
        Self {
            data: doc.to_value(),
            summary,
            code: EXIT_OK,
        }
    }

    fn report(kind: &str, report: &impl Serialize, summary: String, ok: bool) -> Self {
        let mut data = serde_json::to_value(report).expect("reports serialize");
        if let serde_json::Value::Object(map) = &mut data {
            map.insert("kind".into(), kind.into());
        }
        Self {
            data,
            summary,
            code: if ok { EXIT_OK } else { EXIT_INVARIANT },
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(match &cli.command {
        Command::Choi { channel } => {
            let ch = read_document(channel)?.into_channel()?;
            let cond = channels::choi_conditional(&ch);
            let summary = format!(
                "conditional state of {} given {}, Kraus rank {}",
                ch.shape_out(),
                ch.shape_in(),
                ch.kraus_rank()
            );
            Outcome::document(cond.into(), summary)
        }
        Command::Channel { conditional } => {
            let cond = read_document(conditional)?.into_conditional()?;
            let ch = channels::channel_from_conditional(&cond)?;
            let summary = format!(
                "channel {} -> {} with {} Kraus operators{}",
                ch.shape_in(),
                ch.shape_out(),
                ch.kraus().len(),
                if ch.is_support_restricted() {
                    " (support restricted)"
                } else {
                    ""
                }
            );
            Outcome::document(ch.into(), summary)
        }
        Command::Condition { joint, on } => {
            let j = read_document(joint)?.into_joint_state()?;
            let cond = conditional::conditional_from_joint(&j, *on);
            let rank = cond.rank_report();
            let summary = format!(
                "conditioned on {on:?}: marginal rank {} (trace {:.12})",
                rank.rank, rank.trace
            );
            Outcome::document(cond.into(), summary)
        }
        Command::Join { marginal, conditional } => {
            let m = read_document(marginal)?.into_state()?;
            let cond = read_document(conditional)?.into_conditional()?;
            let j = conditional::joint_from_conditional(&m, &cond)?;
            let summary = format!("joint state on {} x {}", j.shape_a(), j.shape_b());
            Outcome::document(j.into(), summary)
        }
        Command::Bayes {
            conditional,
            marginal_a,
            marginal_b,
        } => {
            let cond = read_document(conditional)?.into_conditional()?;
            let a = read_document(marginal_a)?.into_state()?;
            let b = read_document(marginal_b)?.into_state()?;
            let inverted = conditional::bayes_invert(&cond, &a, &b)?;
            let summary = format!(
                "inverted conditional of {} given {}",
                inverted.conditioned(),
                inverted.conditioning()
            );
            Outcome::document(inverted.into(), summary)
        }
        Command::VerifyTheorem { joint, povm_a, povm_b } => {
            let j = read_document(joint)?.into_joint_state()?;
            let n = read_document(povm_a)?.into_povm()?;
            let m = read_document(povm_b)?.into_povm()?;
            let r = theorem::verify_theorem(&j, &n, &m)?;
            let ok = r.max_deviation < tol;
            let summary = format!(
                "maxDeviation {:e} ({}){}",
                r.max_deviation,
                if ok { "ok" } else { "above tolerance" },
                if r.support_restricted {
                    ", support restricted"
                } else {
                    ""
                }
            );
            Outcome::report("theorem_report", &r, summary, ok)
        }
        Command::Teleport {
            channel,
            input,
            classical,
        } => {
            let ch = read_document(channel)?.into_channel()?;
            let sigma = read_document(input)?.into_state()?;
            let d = ch.shape_in().total_dim();
            let (r, checked) = if *classical {
                (teleport::teleport_classical(&ch, &sigma)?, true)
            } else if ch.shape_in().is_irreducible() {
                (teleport::teleport(&ch, &sigma, &teleport::bell_basis(d))?, true)
            } else {
                (
                    teleport::teleport_general(&ch, &sigma, &teleport::bell_basis(d))?,
                    false,
                )
            };
            let max_deviation = if checked {
                r.success_deviation.max(r.probability_sum_deviation())
            } else {
                r.probability_sum_deviation()
            };
            let ok = max_deviation < tol;
            let summary = format!(
                "success probability {:.12}, {} outcomes{}",
                r.success_probability,
                r.outcome_probabilities.len(),
                if r.grouping_used { " (grouped)" } else { "" }
            );
            let mut outcome = Outcome::report("teleport_report", &r, summary, ok);
            outcome.data["maxDeviation"] = max_deviation.into();
            outcome
        }
        Command::Prepare { povm, state } => {
            let m = read_document(povm)?.into_povm()?;
            let s = read_document(state)?.into_state()?;
            let e = povm::prepare(&m, &s)?;
            let summary = format!("ensemble of {} members", e.len());
            Outcome::document(e.into(), summary)
        }
        Command::Selftest { seed, trials } => {
            let r = selftest::run_selftest(*seed, *trials, tol);
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            let summary = if failed.is_empty() {
                format!(
                    "{} checks x {} trials passed, maxDeviation {:e}",
                    r.checks.len(),
                    trials,
                    r.max_deviation
                )
            } else {
                format!("failed: {}", failed.join(", "))
            };
            Outcome::report("selftest_report", &r, summary, r.passed)
        }
    })
}
