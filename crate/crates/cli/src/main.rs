//! `sclkit`: exact scl, incompressibility certificates, extremal surfaces and
//! random-word scans from the command line.
//!
//! Exit codes: 0 success (or a certified verdict), 1 inconclusive
//! certificate, 2 parse or configuration error, 3 chain not homologically
//! trivial, 4 internal failure, 5 size guard or timeout.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scl_core::certificates::{
    build_example1, build_example2, build_example3, build_example4, certify_amalgam, AmalgamSpec,
    Certificate, FactorDescriptor, SurfaceData, Verdict,
};
use scl_core::experiments::{self, ScanConfig};
use scl_core::scl::{self, Mode, SclOptions};
use scl_core::word::{parse_chain, parse_word, Word, MAX_RANK};
use scl_core::{CertificateError, Rational, SclError};

const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_BOUNDING: u8 = 3;
const EXIT_INTERNAL: u8 = 4;
const EXIT_GUARD: u8 = 5;

#[derive(Parser)]
#[command(
    name = "sclkit",
    version,
    about = "Exact stable commutator length in free groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fast,
    Oracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Fast => Mode::Fast,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

#[derive(clap::Args)]
struct SolverArgs {
    /// Piece family used to build the linear program.
    #[arg(long, value_enum, default_value = "fast")]
    mode: ModeArg,
    /// Give up after this many seconds.
    #[arg(long, value_name = "SEC")]
    timeout: Option<f64>,
    /// Letters available to chains (a, b, c, ...).
    #[arg(long, default_value_t = MAX_RANK)]
    rank: usize,
}

impl SolverArgs {
    fn options(&self) -> Result<SclOptions, Failure> {
        Ok(SclOptions {
            mode: self.mode.into(),
            timeout: parse_timeout(self.timeout)?,
            ..Default::default()
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute scl of a chain, e.g. "[a,b]" or "a + A".
    Scl {
        chain: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the incompressibility certificate for a family of surfaces.
    Certify {
        #[arg(value_enum)]
        family: Family,
        /// The word v in [a,b][c,v] (example1, example2).
        #[arg(long)]
        v: Option<String>,
        /// Genus of the right-hand relator (example2).
        #[arg(long, default_value_t = 1)]
        g: u32,
        /// scl_H([a,b]) for the non-free factor (example3).
        #[arg(long = "scl-h")]
        scl_h: Option<String>,
        /// Where the scl_H value comes from (example3).
        #[arg(long, default_value = "user supplied")]
        provenance: String,
        /// Fiber parameter (example4).
        #[arg(long = "N")]
        n: Option<u32>,
        /// Comma-separated signs such as "+,-" (example4).
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
        /// Comma-separated conjugating words; empty entries are the identity
        /// (example4).
        #[arg(long, allow_hyphen_values = true)]
        conjugators: Option<String>,
        /// scl of the glued word in the left factor (amalgam).
        #[arg(long = "scl-left")]
        scl_left: Option<String>,
        /// scl of the glued word in the right factor (amalgam).
        #[arg(long = "scl-right")]
        scl_right: Option<String>,
        /// Genus of the connected surface to test (amalgam).
        #[arg(long)]
        genus: Option<u32>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also write the JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an extremal surface for a chain.
    Surface {
        chain: String,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the surface as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Scan scl([a,b][c,v]) over random words v.
    Experiment {
        /// Comma-separated lengths of v.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 24])]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Rank of the free group v is drawn from.
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, value_enum, default_value = "fast")]
        mode: ModeArg,
        /// Per-sample timeout in seconds.
        #[arg(long, value_name = "SEC", default_value_t = experiments::DEFAULT_TIMEOUT.as_secs_f64())]
        timeout: f64,
        /// CSV output; the summary goes next to it with a .json extension.
        /// Without this the CSV is printed.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Example1,
    Example2,
    Example3,
    Example4,
    Amalgam,
}

/// An error message with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<SclError> for Failure {
    fn from(e: SclError) -> Self {
        let code = match e {
            SclError::NotHomologicallyTrivial => EXIT_NOT_BOUNDING,
            SclError::TrivialWord => EXIT_USAGE,
            SclError::OracleTooLarge { .. } | SclError::Timeout(_) => EXIT_GUARD,
            SclError::NoOptimum(_) | SclError::InternalInvariantViolation(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CertificateError> for Failure {
    fn from(e: CertificateError) -> Self {
        match e {
            CertificateError::Solver(inner) => inner.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scl {
            chain,
            solver,
            format,
        } => cmd_scl(&chain, &solver, format),
        Command::Certify {
            family,
            v,
            g,
            scl_h,
            provenance,
            n,
            signs,
            conjugators,
            scl_left,
            scl_right,
            genus,
            solver,
            format,
            out,
        } => {
            let params = CertifyParams {
                v,
                g,
                scl_h,
                provenance,
                n,
                signs,
                conjugators,
                scl_left,
                scl_right,
                genus,
            };
            cmd_certify(family, &params, &solver, format, out.as_deref())
        }
        Command::Surface {
            chain,
            solver,
            out,
            format,
        } => cmd_surface(&chain, &solver, out.as_deref(), format),
        Command::Experiment {
            lengths,
            samples,
            seed,
            rank,
            mode,
            timeout,
            out,
            format,
        } => parse_timeout(Some(timeout)).and_then(|timeout| {
            let cfg = ScanConfig {
                lengths,
                samples_per_length: samples,
                seed,
                rank,
                mode: mode.into(),
                timeout,
            };
            cmd_experiment(&cfg, out.as_deref(), format)
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_timeout(secs: Option<f64>) -> Result<Option<Duration>, Failure> {
    match secs {
        None => Ok(None),
        Some(s) if s.is_finite() && s > 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(Failure::usage(format!("timeout must be positive, got {s}"))),
    }
}

fn check_rank(rank: usize) -> Result<(), Failure> {
    if (1..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Failure::usage(format!(
            "rank must be between 1 and {MAX_RANK}, got {rank}"
        )))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_scl(text: &str, solver: &SolverArgs, format: Format) -> Result<u8, Failure> {
    check_rank(solver.rank)?;
    let chain = parse_chain(text, solver.rank).map_err(|e| Failure::usage(e.to_string()))?;
    let result = scl::scl_with(&chain, solver.options()?)?;
    match format {
        Format::Text => println!("{}", result.value),
        Format::Json => println!("{}", to_json(&result)),
    }
    Ok(0)
}

struct CertifyParams {
    v: Option<String>,
    g: u32,
    scl_h: Option<String>,
    provenance: String,
    n: Option<u32>,
    signs: Option<String>,
    conjugators: Option<String>,
    scl_left: Option<String>,
    scl_right: Option<String>,
    genus: Option<u32>,
}

fn required<'a, T>(value: &'a Option<T>, flag: &str, family: Family) -> Result<&'a T, Failure> {
    value.as_ref().ok_or_else(|| {
        let name = family.to_possible_value().expect("no skipped variants");
        Failure::usage(format!("{} needs --{flag}", name.get_name()))
    })
}

fn rational_flag(text: &str, flag: &str) -> Result<Rational, Failure> {
    text.trim()
        .parse()
        .map_err(|_| Failure::usage(format!("--{flag}: {text:?} is not a rational number")))
}

fn word_flag(text: &str, flag: &str) -> Result<Word, Failure> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Word::identity());
    }
    parse_word(text, MAX_RANK).map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn parse_signs(text: &str) -> Result<Vec<i32>, Failure> {
    text.split(',')
        .map(|s| match s.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(Failure::usage(format!("--signs: {other:?} is not + or -"))),
        })
        .collect()
}

fn cmd_certify(
    family: Family,
    p: &CertifyParams,
    solver: &SolverArgs,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let options = solver.options()?;
    if family == Family::Example4 {
        let n = *required(&p.n, "N", family)?;
        let signs = parse_signs(required(&p.signs, "signs", family)?)?;
        let conjugators = match &p.conjugators {
            Some(text) => text
                .split(',')
                .map(|c| word_flag(c, "conjugators"))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Word::identity(); signs.len()],
        };
        let report = build_example4(n, &signs, &conjugators, options)?;
        let json = to_json(&report);
        if let Some(path) = out {
            write_file(path, &json)?;
        }
        match format {
            Format::Json => println!("{json}"),
            Format::Text => {
                println!("relator: {}", report.relator);
                println!(
                    "reference scl([a,b]): {} ({})",
                    report.reference.value, report.reference.provenance
                );
                println!("free upper bound: {}", report.free_upper_bound);
                println!(
                    "target interval: ({}, {})",
                    report.target_interval.0, report.target_interval.1
                );
                for w in &report.warnings {
                    println!("warning: {w}");
                }
            }
        }
        return Ok(0);
    }

    let cert = match family {
        Family::Example1 => {
            build_example1(&word_flag(required(&p.v, "v", family)?, "v")?, options)?
        }
        Family::Example2 => {
            build_example2(&word_flag(required(&p.v, "v", family)?, "v")?, p.g, options)?
        }
        Family::Example3 => {
            let value = rational_flag(required(&p.scl_h, "scl-h", family)?, "scl-h")?;
            build_example3(value, &p.provenance, options)?
        }
        Family::Amalgam => certify_given(p, family)?,
        Family::Example4 => unreachable!("handled above"),
    };
    let json = to_json(&cert);
    if let Some(path) = out {
        write_file(path, &json)?;
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => print_certificate(&cert),
    }
    Ok(match cert.verdict {
        Verdict::Incompressible | Verdict::NormMinimizingInjective => 0,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

/// An amalgam where both scl values are supplied directly.
fn certify_given(p: &CertifyParams, family: Family) -> Result<Certificate, Failure> {
    let left = rational_flag(required(&p.scl_left, "scl-left", family)?, "scl-left")?;
    let right = rational_flag(required(&p.scl_right, "scl-right", family)?, "scl-right")?;
    let genus = *required(&p.genus, "genus", family)?;
    let spec = AmalgamSpec {
        left: FactorDescriptor::external("scl_left", left, "command line", Word::identity()),
        right: FactorDescriptor::external("scl_right", right, "command line", Word::identity()),
        h2_trivial_both: true,
    };
    let surface = SurfaceData::connected(genus)?;
    Ok(certify_amalgam(
        "amalgam",
        &spec,
        &surface,
        SclOptions::default(),
    )?)
}

fn print_certificate(c: &Certificate) {
    println!("family: {}", c.family);
    if !c.word.is_empty() {
        println!("word: {}", c.word);
    }
    println!("scl: {} + {}", c.scl_left, c.scl_right);
    let bound = if c.norm_is_exact {
        ""
    } else {
        " (lower bound)"
    };
    println!("norm: {}{bound}", c.norm);
    println!("-chi: {}", -c.chi);
    println!("verdict: {}", c.verdict);
    println!(
        "min cover index: {} ({})",
        c.min_cover_index, c.min_cover_index_note
    );
    if c.conditional {
        for e in &c.external_inputs {
            println!("assumes {} = {} ({})", e.name, e.value, e.provenance);
        }
    }
}

fn cmd_surface(
    text: &str,
    solver: &SolverArgs,
    out: Option<&Path>,
    format: Format,
) -> Result<u8, Failure> {
    check_rank(solver.rank)?;
    let chain = parse_chain(text, solver.rank).map_err(|e| Failure::usage(e.to_string()))?;
    let surface = scl::extremal_surface(&chain, solver.options()?)?;
    let json = to_json(&surface);
    if let Some(path) = out {
        write_file(path, &json)?;
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => {
            println!("scl: {}", surface.scl);
            println!("chi: {}", surface.euler_characteristic);
            println!("genus: {}", surface.genus);
            println!(
                "boundary components: {}",
                surface.boundary_component_count()
            );
            println!("degree: {}", surface.degree);
        }
    }
    Ok(0)
}

fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn cmd_experiment(cfg: &ScanConfig, out: Option<&Path>, format: Format) -> Result<u8, Failure> {
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let records = experiments::run_scan(cfg).map_err(|e| Failure::usage(e.to_string()))?;
    let report = experiments::report(cfg, &records).map_err(|e| Failure::usage(e.to_string()))?;

    let mut csv = Vec::new();
    experiments::write_csv(&records, &mut csv).expect("writing to memory");
    let csv = String::from_utf8(csv).expect("CSV is UTF-8");
    let json = to_json(&report);
    match out {
        Some(path) => {
            write_file(path, &csv)?;
            write_file(&summary_path(path), &json)?;
        }
        None => print!("{csv}"),
    }

    match format {
        Format::Json if out.is_some() => println!("{json}"),
        Format::Json => eprintln!("{json}"),
        Format::Text => {
            for s in &report.lengths {
                let show =
                    |v: &Option<Rational>| v.as_ref().map_or("-".to_string(), Rational::to_string);
                eprintln!(
                    "n={:<3} ok={}/{} timeouts={} errors={} mean={} min={} max={}",
                    s.n,
                    s.ok,
                    s.samples,
                    s.timeouts,
                    s.errors,
                    show(&s.mean),
                    show(&s.min),
                    show(&s.max)
                );
            }
            for w in &report.trend_warnings {
                eprintln!("trend: {w}");
            }
        }
    }
    let violations = experiments::bound_violations(&records);
    if !violations.is_empty() {
        for r in violations {
            eprintln!(
                "bound violated: n={} sample={} v={}",
                r.n, r.sample_index, r.v
            );
        }
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: "values outside [1/2, 3/2]".into(),
        });
    }
    Ok(0)
}
