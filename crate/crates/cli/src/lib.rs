//! Command-line front end for `dquint`.
//!
//! [`run`] parses an argument vector, dispatches to one command and prints
//! either a human-readable summary or JSON. Exit codes: `0` success, `1`
//! domain error, `2` usage error.

mod commands;
mod json;
mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dquint::linear_forms::HeightNormalization;
use dquint::sequences::SeqFamily;
use num_bigint::BigInt;

pub use commands::{CliError, Outcome};
pub use report::markdown;

pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_INDEX_BOUND: u64 = 100;
pub const MIN_PRECISION: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
}

/// Settings shared by the commands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub precision: u32,
    pub index_bound: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: DEFAULT_PRECISION,
            index_bound: DEFAULT_INDEX_BOUND,
            format: Format::Human,
            out: None,
        }
    }
}

fn big(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("'{s}' is not an integer"))
}

fn precision(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("'{s}' is not a bit count"))?;
    if p < MIN_PRECISION {
        return Err(format!("precision must be at least {MIN_PRECISION} bits"));
    }
    Ok(p)
}

fn family(s: &str) -> Result<SeqFamily, String> {
    s.parse()
}

#[derive(Parser, Debug)]
#[command(name = "dquint", version, about = "Diophantine quadruples containing {1, 3} in Z[sqrt(-2)]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct Precision {
    /// Working precision in bits
    #[arg(long, default_value_t = DEFAULT_PRECISION, value_parser = precision)]
    precision: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Normalization {
    Printed,
    BakerWustholz,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a tuple is a Diophantine tuple in Z[sqrt(d)]
    Verify {
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        d: BigInt,
        #[arg(required = true, allow_hyphen_values = true, value_parser = big)]
        elements: Vec<BigInt>,
        #[command(flatten)]
        output: Output,
    },
    /// Print terms of c, d, s, t, xprime or yprime
    Seq {
        #[arg(long, value_parser = family)]
        family: SeqFamily,
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Solve z^2 - D x^2 = N: unit, fundamental classes, small solutions
    Pell {
        #[arg(long = "D", allow_hyphen_values = true, value_parser = big)]
        d: BigInt,
        #[arg(long = "N", allow_hyphen_values = true, value_parser = big)]
        n: BigInt,
        /// List solutions with z up to this value
        #[arg(long, value_parser = big)]
        zmax: Option<BigInt>,
        /// Only print the classes
        #[arg(long)]
        classes: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Residue patterns and small-index elimination for one k
    Sieve {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Number of residues per pattern
        #[arg(long = "max-m", default_value_t = 12)]
        max_m: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Bennett chain probed at k
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[command(flatten)]
        precision: Precision,
        #[command(flatten)]
        output: Output,
    },
    /// Baker-Wustholz constant for a comma separated list of surds
    Bw {
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Normalization::Printed)]
        normalization: Normalization,
        #[command(flatten)]
        precision: Precision,
        #[command(flatten)]
        output: Output,
    },
    /// Iterated Baker-Davenport reduction
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "e")]
        base: String,
        #[arg(long = "M", value_parser = big)]
        bound: BigInt,
        /// Stop once the bound is at most this
        #[arg(long, default_value = "1", value_parser = big)]
        floor: BigInt,
        /// Starting precision of every round; chosen from M when absent
        #[arg(long, value_parser = precision)]
        precision: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// One of the six small cases k = 0..5
    Case {
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..=5))]
        k: i64,
        #[arg(long = "index-bound", default_value_t = DEFAULT_INDEX_BOUND)]
        index_bound: u64,
        #[command(flatten)]
        precision: Precision,
        #[command(flatten)]
        output: Output,
    },
    /// Run the whole argument and write the report
    Reproduce {
        /// Directory receiving report.md and report.json
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "index-bound", default_value_t = DEFAULT_INDEX_BOUND)]
        index_bound: u64,
        #[command(flatten)]
        precision: Precision,
        #[command(flatten)]
        output: Output,
    },
}

fn format(o: &Output) -> Format {
    if o.json {
        Format::Json
    } else {
        Format::Human
    }
}

/// Deterministic pretty JSON with a trailing newline.
pub fn render_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serialisable");
    s.push('\n');
    s
}

fn emit(outcome: &Outcome, fmt: Format) -> String {
    match fmt {
        Format::Json => render_json(&outcome.json),
        Format::Human => outcome.text.clone(),
    }
}

fn write_reports(dir: &Path, outcome: &Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Domain(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("report.md"), &outcome.text).map_err(io)?;
    fs::write(dir.join("report.json"), render_json(&outcome.json)).map_err(io)?;
    Ok(())
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Verify { d, elements, output } => {
            Ok(emit(&commands::verify(&d, &elements)?, format(&output)))
        }
        Command::Seq { family, count, output } => Ok(emit(&commands::seq(family, count)?, format(&output))),
        Command::Pell { d, n, zmax, classes, output } => {
            Ok(emit(&commands::pell(&d, &n, zmax.as_ref(), classes)?, format(&output)))
        }
        Command::Sieve { k, max_m, output } => Ok(emit(&commands::sieve(k, max_m)?, format(&output))),
        Command::Bounds { k, precision, output } => {
            let cfg = RunConfig { precision: precision.precision, ..RunConfig::default() };
            Ok(emit(&commands::bounds(k, &cfg)?, format(&output)))
        }
        Command::Bw { alphas, degree, normalization, precision, output } => {
            let cfg = RunConfig { precision: precision.precision, ..RunConfig::default() };
            let norm = match normalization {
                Normalization::Printed => HeightNormalization::Printed,
                Normalization::BakerWustholz => HeightNormalization::BakerWustholz,
            };
            Ok(emit(&commands::bw(&alphas, degree, norm, &cfg)?, format(&output)))
        }
        Command::Reduce { theta, beta, alpha, base, bound, floor, precision, output } => {
            let args = commands::ReduceArgs {
                theta: &theta,
                beta: &beta,
                alpha: &alpha,
                base: &base,
                bound: &bound,
                floor: &floor,
                precision,
            };
            Ok(emit(&commands::reduce(&args)?, format(&output)))
        }
        Command::Case { k, index_bound, precision, output } => {
            let cfg = RunConfig {
                precision: precision.precision,
                index_bound,
                ..RunConfig::default()
            };
            Ok(emit(&commands::case(k, &cfg)?, format(&output)))
        }
        Command::Reproduce { out, index_bound, precision, output } => {
            let cfg = RunConfig {
                precision: precision.precision,
                index_bound,
                format: format(&output),
                out,
            };
            let (_, outcome) = commands::reproduce(&cfg)?;
            if let Some(dir) = &cfg.out {
                write_reports(dir, &outcome)?;
            }
            Ok(emit(&outcome, cfg.format))
        }
    }
}

/// Run with `argv` (program name first), writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

/// Run with `argv` against stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("dquint").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn help_and_version_succeed() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("reproduce"));
        assert_eq!(run_args(&["--version"]).0, 0);
    }

    #[test]
    fn unknown_command_is_usage_error() {
        let (code, out, err) = run_args(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("Usage"));
        assert_eq!(run_args(&[]).0, 2);
    }

    #[test]
    fn precision_floor() {
        assert_eq!(precision("64"), Ok(64));
        assert!(precision("63").is_err());
        assert!(precision("x").is_err());
        assert_eq!(run_args(&["bounds", "--k", "6", "--precision", "32"]).0, 2);
    }

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!((c.precision, c.index_bound, c.format), (256, 100, Format::Human));
        assert!(c.out.is_none());
    }

    #[test]
    fn render_json_is_pretty_with_newline() {
        let v = serde_json::json!({ "b": 1, "a": [true] });
        assert_eq!(render_json(&v), "{\n  \"b\": 1,\n  \"a\": [\n    true\n  ]\n}\n");
    }

    #[test]
    fn big_parser() {
        assert_eq!(big("-87363"), Ok(BigInt::from(-87363)));
        assert!(big("1.5").is_err());
    }
}
