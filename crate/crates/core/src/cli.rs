//! Command-line front end. [`run`] takes the argument list and output sinks
//! and returns the process exit code, so it can be driven from tests.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dist::{Dist, Engine};
use crate::perm::Permutation;
use crate::stats::{Stat, StatRecord};
use crate::verify::{run_selected, Selection, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaMode {
    /// Integer gamma vector of the Eulerian polynomial.
    Plain,
    /// γ_{n,k}(q) = a_{n,k}(q², q).
    Q,
}

#[derive(Debug, Parser)]
#[command(name = "perm-gamma", version, about = "Permutation statistics, q-Eulerian polynomials and gamma expansions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Enumeration workers; results do not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    /// Include elapsed times in verify output.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All statistics of one permutation, e.g. `3762154` or `3,7,6,2,1,5,4`.
    Stats { perm: String },
    /// A generating polynomial over S_n.
    ///
    /// SPEC is one of: eulerian, S, S-shifted, single:<stat>,
    /// triple:<s1>,<s2>,<s3>, a_nk:<k>.
    Table {
        #[arg(long)]
        n: usize,
        spec: String,
    },
    /// Gamma vector, one `k: <polynomial>` line per entry.
    Gamma {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GammaMode::Q)]
        mode: GammaMode,
    },
    /// Run the identity checks.
    Verify {
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..=20))]
        n_max: u64,
        /// all, eq1, lemma2, lemma3-4, inv-identity, theorem5
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses a `table` distribution spec.
pub fn parse_table_spec(spec: &str) -> Result<Dist, String> {
    let spec = spec.trim();
    match spec {
        "eulerian" => return Ok(Dist::Single(Stat::Des)),
        "S" => return Ok(Dist::InvExc),
        "S-shifted" => return Ok(Dist::InvExcShifted),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("triple:") {
        let stats: Vec<Stat> = rest
            .split(',')
            .map(str::parse::<Stat>)
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let triple: [Stat; 3] = stats
            .try_into()
            .map_err(|_| format!("triple needs exactly three statistics: {rest:?}"))?;
        return Ok(Dist::Triple(triple));
    }
    if let Some(rest) = spec.strip_prefix("single:") {
        return rest.parse().map(Dist::Single).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("a_nk:") {
        return rest
            .trim()
            .parse()
            .map(Dist::ValleyClass)
            .map_err(|_| format!("bad k in {spec:?}"));
    }
    Err(format!("unknown distribution spec {spec:?}"))
}

#[derive(Serialize)]
struct GammaLine<'a> {
    k: usize,
    terms: &'a crate::poly::MultiPoly,
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let engine = Engine::new(cli.jobs);
    match cli.command {
        Command::Stats { perm } => {
            let s: Permutation = perm.parse().map_err(usage)?;
            let record = StatRecord::of(&s);
            match cli.format {
                Format::Text => writeln!(out, "{record}")?,
                Format::Structured => json_line(out, &record)?,
            }
        }
        Command::Table { n, spec } => {
            let dist = parse_table_spec(&spec).map_err(Failure::Usage)?;
            let poly = engine.get(n, dist).map_err(usage)?;
            match cli.format {
                Format::Text => writeln!(out, "{poly}")?,
                Format::Structured => {
                    for rec in poly.records() {
                        json_line(out, &rec)?;
                    }
                }
            }
        }
        Command::Gamma { n, mode } => {
            let gamma = match mode {
                GammaMode::Plain => engine.gamma_plain(n),
                GammaMode::Q => engine.gamma_nk_q(n),
            }
            .map_err(usage)?;
            match cli.format {
                Format::Text => writeln!(out, "{gamma}")?,
                Format::Structured => {
                    for (k, terms) in gamma.entries.iter().enumerate() {
                        json_line(out, &GammaLine { k, terms })?;
                    }
                }
            }
        }
        Command::Verify { n_max, check, seed } => {
            let which: Selection = check.parse().map_err(Failure::Usage)?;
            let reports = run_selected(&engine, which, n_max as usize, seed.unwrap_or(DEFAULT_SEED));
            for r in &reports {
                match cli.format {
                    Format::Text if cli.timings => {
                        writeln!(out, "{r} ({} ms)", r.elapsed.as_millis())?
                    }
                    Format::Text => writeln!(out, "{r}")?,
                    Format::Structured => json_line(out, &r.record(cli.timings))?,
                }
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_specs() {
        assert_eq!(parse_table_spec("eulerian"), Ok(Dist::Single(Stat::Des)));
        assert_eq!(parse_table_spec("S"), Ok(Dist::InvExc));
        assert_eq!(parse_table_spec("S-shifted"), Ok(Dist::InvExcShifted));
        assert_eq!(parse_table_spec("triple:res,les,des"), Ok(Dist::RES_LES_DES));
        assert_eq!(parse_table_spec("a_nk:2"), Ok(Dist::ValleyClass(2)));
        assert_eq!(parse_table_spec("single:inv"), Ok(Dist::Single(Stat::Inv)));
        assert!(parse_table_spec("triple:res,les").is_err());
        assert!(parse_table_spec("triple:res,les,maj").is_err());
        assert!(parse_table_spec("a_nk:x").is_err());
        assert!(parse_table_spec("bogus").is_err());
    }
}
