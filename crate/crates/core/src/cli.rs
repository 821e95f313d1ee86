//! Command-line front end: `teleport`, `sweep`, `figures`, `verify`.
//!
//! Exit status: 0 on success, 2 on invalid configuration, 1 on internal
//! errors and on a failed `verify`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channels::ChannelSpec;
use crate::density::QubitState;
use crate::error::{Error, Result};
use crate::figures::{check_landmarks, figures, write_figures};
use crate::linalg::C64;
use crate::metrics::{closed_form, OutcomeClass};
use crate::sweep::{sweep, SweepConfig};
use crate::teleport::{run, BellOutcome, TeleportRun};
use crate::verify::{verify, VerifyConfig};

pub const SEED_ENV: &str = "MIXPORT_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "mixport",
    version,
    about = "Teleportation of mixed qubit states over mixed channels"
)]
pub struct Cli {
    /// RNG seed; the MIXPORT_SEED environment variable takes precedence.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Teleport one input state and report all four measurement branches.
    Teleport {
        /// Channel, e.g. `meps`, `mems2:p1=0.6`, `werner:r=0.5`,
        /// `xz:a=..,b=..,c=..,d=..,e=..`.
        #[arg(long)]
        channel: ChannelSpec,
        /// Input state as `x,re_y,im_y`.
        #[arg(long, value_parser = parse_input, allow_hyphen_values = true)]
        input: QubitState,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare simulated and closed-form distortion over a grid.
    Sweep {
        /// Family template; its parameter is replaced by each `--params` value.
        #[arg(long)]
        channel: ChannelSpec,
        /// Comma-separated `p1` (or `r`) values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0])]
        params: Vec<f64>,
        /// Comma-separated `|y|` values.
        #[arg(long = "abs-y", value_delimiter = ',', default_values_t = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5])]
        abs_y: Vec<f64>,
        /// Comma-separated phases of `y` in radians.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0])]
        phases: Vec<f64>,
        /// Diagonal entry `x` of the input state.
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write fig1.csv .. fig5.csv and check their landmarks.
    Figures {
        /// Output directory.
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
    /// Run every verification suite and emit a JSON report.
    Verify {
        #[arg(long, default_value_t = VerifyConfig::default().samples)]
        samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_input(text: &str) -> std::result::Result<QubitState, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [x, re, im] = parts.as_slice() else {
        return Err(format!("expected `x,re_y,im_y`, got `{text}`"));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    QubitState::new(num(x)?, C64::new(num(re)?, num(im)?)).map_err(|e| e.to_string())
}

/// `MIXPORT_SEED` if set, else `--seed`, else the default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV} = `{v}` is not an unsigned integer"))),
        None => Ok(flag.unwrap_or(VerifyConfig::default().seed)),
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParams(_)
            | Error::OutOfRange { .. }
            | Error::InvalidState(_)
            | Error::Parse(_)
            | Error::NotHermitian { .. }
    )
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct BranchReport {
    outcome: BellOutcome,
    distortion: Option<f64>,
    closed_form: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TeleportReport {
    #[serde(flatten)]
    run: TeleportRun,
    total_probability: f64,
    branches: Vec<BranchReport>,
}

fn teleport_report(input: &QubitState, channel: &ChannelSpec) -> Result<TeleportReport> {
    let run = run(input, channel)?;
    let family = channel.family();
    let distortions = run.distortions();
    let branches = BellOutcome::ALL
        .into_iter()
        .zip(distortions)
        .map(|(outcome, distortion)| BranchReport {
            outcome,
            distortion,
            closed_form: distortion.and(channel.parameter().and_then(|p| {
                closed_form(
                    family,
                    OutcomeClass::of(family, outcome),
                    input.x,
                    input.abs_y(),
                    p,
                )
                .ok()
            })),
        })
        .collect();
    Ok(TeleportReport {
        total_probability: run.total_probability(),
        run,
        branches,
    })
}

fn execute(cli: Cli, seed_env: Option<&str>) -> Result<bool> {
    let seed = resolve_seed(cli.seed, seed_env)?;
    match cli.command {
        Command::Teleport {
            channel,
            input,
            output,
        } => {
            let report = teleport_report(&input, &channel)?;
            if let Some(w) = &report.run.channel_warning {
                eprintln!("warning: {w}");
            }
            emit(output.as_deref(), &to_json(&report))?;
            Ok(true)
        }
        Command::Sweep {
            channel,
            params,
            abs_y,
            phases,
            x,
            format,
            output,
        } => {
            let result = sweep(&SweepConfig {
                channel,
                params,
                x,
                abs_ys: abs_y,
                phases,
            })?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let text = match format {
                Format::Csv => result.to_csv(),
                Format::Json => to_json(&result),
            };
            emit(output.as_deref(), &text)?;
            Ok(true)
        }
        Command::Figures { output } => {
            let paths = write_figures(&output)?;
            let landmarks = check_landmarks(&figures()?)?;
            for p in &paths {
                eprintln!("wrote {}", p.display());
            }
            for l in &landmarks {
                eprintln!(
                    "{} {}: {}",
                    if l.passed { "PASS" } else { "FAIL" },
                    l.name,
                    l.detail
                );
            }
            Ok(landmarks.iter().all(|l| l.passed))
        }
        Command::Verify { samples, output } => {
            let report = verify(&VerifyConfig { seed, samples })?;
            for c in &report.checks {
                let tag = match (c.passed, c.asserted) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "REFUTED",
                };
                eprintln!("{tag} {}", c.name);
            }
            emit(output.as_deref(), &to_json(&report))?;
            Ok(report.passed)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let seed_env = std::env::var(SEED_ENV).ok();
    match execute(cli, seed_env.as_deref()) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_triples() {
        let q = parse_input("0.5,0.3,-0.1").unwrap();
        assert_eq!((q.x, q.y), (0.5, C64::new(0.3, -0.1)));
        assert!(parse_input("0.5,0.3").is_err());
        assert!(parse_input("0.5,0.6,0").is_err());
        assert!(parse_input("a,0,0").is_err());
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(3), None).unwrap(), 3);
        assert_eq!(resolve_seed(Some(3), Some("9")).unwrap(), 9);
        assert_eq!(
            resolve_seed(None, None).unwrap(),
            VerifyConfig::default().seed
        );
        assert!(matches!(
            resolve_seed(None, Some("x")),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(
            main_with([
                "mixport",
                "teleport",
                "--channel",
                "bogus",
                "--input",
                "0.5,0,0"
            ]),
            2
        );
        assert_eq!(
            main_with([
                "mixport",
                "teleport",
                "--channel",
                "meps",
                "--input",
                "2,0,0"
            ]),
            2
        );
        assert_eq!(main_with(["mixport", "frobnicate"]), 2);
    }

    #[test]
    fn teleport_report_has_closed_forms() {
        let q = QubitState::balanced(C64::new(0.3, 0.0)).unwrap();
        let rep = teleport_report(&q, &ChannelSpec::MemsRank2 { p1: 0.6 }).unwrap();
        for b in &rep.branches {
            let (d, c) = (b.distortion.unwrap(), b.closed_form.unwrap());
            assert!((d - 0.1088).abs() < 1e-12 && (c - 0.1088).abs() < 1e-12);
        }
        let xz: ChannelSpec = "xz:a=0.4,b=0.1,c=0,d=0.1,e=0.35".parse().unwrap();
        let rep = teleport_report(&QubitState::new(1.0, C64::new(0.0, 0.0)).unwrap(), &xz).unwrap();
        assert!((rep.total_probability - 1.0).abs() < 1e-12);
        assert!(rep.branches.iter().all(|b| b.closed_form.is_none()));
    }
}
