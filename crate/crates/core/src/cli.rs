//! The `qpart` command line. [`run`] parses arguments, writes data to `out`
//! and diagnostics to `err`, and returns the process exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{self, IdentityId};
use crate::oracle::{PartitionKind, PartitionSpec};
use crate::qfactory::{Convention, Factory, SpecialTheta};
use crate::report::{RunReport, Status, VerificationReport};
use crate::runner::{self, Plan, RunOptions};
use crate::scanner::{self, ScanConfig, ScanRow};
use crate::series::{Ring, Series};
use crate::theorems::{self, Family, InstanceParams, DEFAULT_MAX_TRUNC};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Column order of `--format csv` for verification runs.
pub const CSV_COLUMNS: [&str; 10] = [
    "family",
    "t",
    "s",
    "convention",
    "A",
    "B",
    "modulus",
    "n_max",
    "status",
    "first_fail_n",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qpart",
    version,
    about = "Restricted distinct-part partitions: series, counts and congruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Largest truncation order any single check may use.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TRUNC)]
    max_trunc: usize,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand a q-series.
    Compute {
        #[command(subcommand)]
        what: ComputeWhat,
    },
    /// Count partitions by dynamic programming.
    Oracle {
        #[command(subcommand)]
        what: OracleWhat,
    },
    /// Check identities and congruences.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Search for progressions on which Q_t^s vanishes modulo m.
    Scan(ScanArgs),
}

#[derive(Debug, Subcommand)]
enum ComputeWhat {
    /// The generating function of Q_t^s.
    Qts {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        s: u64,
        #[arg(long, default_value = "series")]
        convention: Convention,
        #[arg(long)]
        trunc: usize,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// phi, psi, f_neg, chi, phi_neg, psi_neg or chi_neg.
    Special {
        name: SpecialTheta,
        #[arg(long)]
        trunc: usize,
        #[arg(long)]
        modulus: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    /// Print counts for 0..=n instead of n alone.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Subcommand)]
enum OracleWhat {
    Qts {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        count: CountArgs,
        /// List the partitions themselves (n <= 40).
        #[arg(long)]
        witness: bool,
    },
    P(CountArgs),
    Pd(CountArgs),
    Po(CountArgs),
    /// Partitions with no part divisible by k.
    B {
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        count: CountArgs,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyWhat {
    Identity {
        id: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        trunc: Option<usize>,
    },
    Theorem {
        family: String,
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        #[arg(long)]
        nmax: Option<usize>,
        /// Check only this convention. By default t = 2s families are
        /// checked under all three.
        #[arg(long)]
        convention: Option<Convention>,
        /// Use the statement exactly as typeset.
        #[arg(long)]
        as_printed: bool,
    },
    /// The full default plan.
    All,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    t: u64,
    #[arg(long)]
    s: u64,
    #[arg(long, default_value = "series")]
    convention: Convention,
    /// Comma-separated moduli; omit to look for exactly vanishing progressions.
    #[arg(long, value_delimiter = ',')]
    moduli: Vec<u64>,
    #[arg(long = "A-max")]
    a_max: u64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOutput {
    pub series: String,
    pub trunc: usize,
    pub modulus: Option<u64>,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOutput {
    pub kind: String,
    pub n: usize,
    pub counts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<ScanRow>,
    pub millis: u64,
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(std::io::Error::other(e))
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let options = RunOptions {
        max_trunc: cli.max_trunc,
        threads: cli.threads,
    };
    match &cli.command {
        Command::Compute { what } => compute(what, cli.format, cli.max_trunc, out),
        Command::Oracle { what } => oracle(what, cli.format, cli.max_trunc, out),
        Command::Verify { what } => verify(what, cli.format, options, out, err),
        Command::Scan(args) => scan(args, cli.format, cli.max_trunc, out),
    }
}

fn check_trunc(trunc: usize, ceiling: usize) -> Result<()> {
    if trunc > ceiling {
        return Err(Error::TruncationCeiling {
            required: trunc,
            ceiling,
        });
    }
    Ok(())
}

fn compute(what: &ComputeWhat, format: Format, ceiling: usize, out: &mut dyn Write) -> Outcome {
    let (label, series) = match what {
        ComputeWhat::Qts {
            t,
            s,
            convention,
            trunc,
            modulus,
        } => {
            check_trunc(*trunc, ceiling)?;
            let spec = PartitionSpec::new(*t, *s)?;
            let ring = Ring::new(*modulus).map_err(Error::from)?;
            let series = theorems::q_values(spec, *convention, *trunc, ring)?;
            (format!("{spec} ({})", convention.as_str()), series)
        }
        ComputeWhat::Special {
            name,
            trunc,
            modulus,
        } => {
            check_trunc(*trunc, ceiling)?;
            let ring = Ring::new(*modulus).map_err(Error::from)?;
            let series = Factory::new(ring, *trunc).special_definition(*name)?;
            (name.name().to_string(), series)
        }
    };
    write_series(&label, &series, format, out)?;
    Ok(EXIT_OK)
}

fn write_series(label: &str, series: &Series, format: Format, out: &mut dyn Write) -> Outcome {
    let coefficients: Vec<String> = series.coeffs().iter().map(ToString::to_string).collect();
    match format {
        Format::Text => writeln!(out, "{}", coefficients.join(","))?,
        Format::Json => {
            let doc = SeriesOutput {
                series: label.to_string(),
                trunc: series.trunc(),
                modulus: series.modulus(),
                coefficients,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "coefficient"])?;
            for (n, c) in coefficients.iter().enumerate() {
                w.write_record([n.to_string().as_str(), c])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn oracle(what: &OracleWhat, format: Format, ceiling: usize, out: &mut dyn Write) -> Outcome {
    let (kind, count, witness) = match what {
        OracleWhat::Qts {
            t,
            s,
            count,
            witness,
        } => (
            PartitionKind::Restricted(PartitionSpec::new(*t, *s)?),
            count,
            *witness,
        ),
        OracleWhat::P(count) => (PartitionKind::Unrestricted, count, false),
        OracleWhat::Pd(count) => (PartitionKind::Distinct, count, false),
        OracleWhat::Po(count) => (PartitionKind::Odd, count, false),
        OracleWhat::B { k, count } => (PartitionKind::NonDivisible(*k), count, false),
    };
    check_trunc(count.n, ceiling)?;
    let table = kind.table(count.n)?;
    let counts: Vec<String> = if count.table {
        table.iter().map(ToString::to_string).collect()
    } else {
        vec![table[count.n].to_string()]
    };
    let witnesses = if witness {
        let list = kind.witnesses(count.n as u64)?;
        Some(
            list.iter()
                .map(|parts| {
                    parts
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("+")
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let kind_name = match kind {
        PartitionKind::Unrestricted => "p".to_string(),
        PartitionKind::Distinct => "pd".to_string(),
        PartitionKind::Odd => "po".to_string(),
        PartitionKind::NonDivisible(k) => format!("b_{k}"),
        PartitionKind::Restricted(spec) => spec.to_string(),
    };
    match format {
        Format::Text => {
            writeln!(out, "{}", counts.join(","))?;
            for w in witnesses.iter().flatten() {
                writeln!(out, "{w}")?;
            }
        }
        Format::Json => {
            let doc = CountOutput {
                kind: kind_name,
                n: count.n,
                counts,
                witnesses,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "count"])?;
            let first = if count.table { 0 } else { count.n };
            for (i, c) in counts.iter().enumerate() {
                w.write_record([(first + i).to_string().as_str(), c])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn verify(
    what: &VerifyWhat,
    format: Format,
    options: RunOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let start = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("max_trunc".to_string(), options.max_trunc.to_string());
    let (command, plan) = match what {
        VerifyWhat::Identity { id, p, r, m, trunc } => {
            let id = IdentityId::parse(id, *p, *r, *m)?;
            let default = IdentityId::catalog()
                .into_iter()
                .find(|(known, _)| *known == id)
                .map_or(300, |(_, t)| t);
            let trunc = trunc.unwrap_or(default);
            if trunc < identities::MIN_TRUNC {
                return Err(Error::TruncationTooSmall {
                    given: trunc,
                    minimum: identities::MIN_TRUNC,
                }
                .into());
            }
            params.insert("id".into(), id.to_string());
            params.insert("trunc".into(), trunc.to_string());
            let plan = Plan {
                identities: vec![(id, trunc)],
                ..Default::default()
            };
            ("verify identity", plan)
        }
        VerifyWhat::Theorem {
            family,
            alpha,
            p,
            beta,
            nmax,
            convention,
            as_printed,
        } => {
            let instance = InstanceParams {
                alpha: *alpha,
                p: *p,
                beta: *beta,
                as_printed: *as_printed,
            };
            params.insert("family".into(), family.clone());
            for (key, value) in [("alpha", alpha), ("p", p)] {
                if let Some(v) = value {
                    params.insert(key.into(), v.to_string());
                }
            }
            params.insert("beta".into(), beta.to_string());
            if let Some(n) = nmax {
                params.insert("nmax".into(), n.to_string());
            }
            if let Some(c) = convention {
                params.insert("convention".into(), c.as_str().into());
            }
            if *as_printed {
                params.insert("as_printed".into(), "true".into());
            }
            let mut plan = Plan::default();
            for family in Family::select(family)? {
                plan.add_theorem_with(family, instance, *nmax, *convention)?;
            }
            // a form requested explicitly on the command line is judged on its own terms
            for (claim, _) in &mut plan.claims {
                if claim.as_printed {
                    claim.gating = true;
                }
            }
            ("verify theorem", plan)
        }
        VerifyWhat::All => ("verify all", runner::default_plan()?),
    };
    let reports = runner::run_plan(&plan, options)?;
    let run = RunReport::new(command, params, reports, start.elapsed());
    write_run(&run, format, out)?;
    for r in run.reports.iter().filter(|r| r.status == Status::Fail) {
        if let Some(m) = &r.first_mismatch {
            writeln!(
                err,
                "FAIL {}: first mismatch at n={} ({} != {})",
                r.id, m.n, m.lhs, m.rhs
            )?;
        }
    }
    Ok(if run.all_passed() { EXIT_OK } else { EXIT_FAIL })
}

fn csv_row(r: &VerificationReport) -> [String; 10] {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let convention = r
        .convention
        .map(|c| c.as_str().to_string())
        .unwrap_or_default();
    let first_fail = opt(r.first_mismatch.as_ref().map(|m| m.n));
    match &r.claim {
        Some(c) => [
            c.family.clone(),
            c.t.to_string(),
            c.s.to_string(),
            convention,
            c.a.to_string(),
            c.b.to_string(),
            opt(r.modulus),
            c.n_max.to_string(),
            r.status.to_string(),
            first_fail,
        ],
        None => [
            r.id.clone(),
            String::new(),
            String::new(),
            convention,
            String::new(),
            String::new(),
            opt(r.modulus),
            r.trunc.to_string(),
            r.status.to_string(),
            first_fail,
        ],
    }
}

/// Writes a verification run in the chosen format.
pub fn write_run(run: &RunReport, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, run)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(CSV_COLUMNS)?;
            for r in &run.reports {
                w.write_record(csv_row(r))?;
            }
            w.flush()
        }
        Format::Text => {
            for r in &run.reports {
                let convention = r
                    .convention
                    .map(|c| format!(" [{}]", c.as_str()))
                    .unwrap_or_default();
                let modulus = r.modulus.map(|m| format!(" mod {m}")).unwrap_or_default();
                write!(
                    out,
                    "{:<9} {}{convention} trunc={}{modulus} {}ms",
                    r.status.to_string(),
                    r.id,
                    r.trunc,
                    r.millis
                )?;
                if let Some(m) = &r.first_mismatch {
                    write!(out, " first mismatch n={} lhs={} rhs={}", m.n, m.lhs, m.rhs)?;
                }
                if let Some(note) = &r.note {
                    write!(out, " ({note})")?;
                }
                writeln!(out)?;
            }
            let s = run.summary;
            writeln!(
                out,
                "summary: {} pass, {} fail, {} skipped, {} divergent in {}ms",
                s.pass, s.fail, s.skipped, s.divergent, run.millis
            )
        }
    }
}

fn scan(args: &ScanArgs, format: Format, ceiling: usize, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let spec = PartitionSpec::new(args.t, args.s)?;
    let config = ScanConfig::new(
        spec,
        args.convention,
        args.moduli.clone(),
        args.a_max,
        args.samples,
    )?;
    let rows = scanner::scan(&config, ceiling)?;
    let mut params = BTreeMap::new();
    params.insert("t".to_string(), args.t.to_string());
    params.insert("s".to_string(), args.s.to_string());
    params.insert(
        "convention".to_string(),
        args.convention.as_str().to_string(),
    );
    let moduli: Vec<String> = config.moduli().iter().map(ToString::to_string).collect();
    params.insert("moduli".to_string(), moduli.join(","));
    params.insert("A_max".to_string(), args.a_max.to_string());
    params.insert("samples".to_string(), args.samples.to_string());
    let report = ScanReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "scan".to_string(),
        params,
        rows,
        millis: start.elapsed().as_millis() as u64,
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["A", "B", "m", "support", "status"])?;
            for r in &report.rows {
                let m = r.modulus.map(|m| m.to_string()).unwrap_or_default();
                w.write_record([
                    r.a.to_string(),
                    r.b.to_string(),
                    m,
                    r.support.to_string(),
                    r.status.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &report.rows {
                let m = r.modulus.map(|m| format!(" (mod {m})")).unwrap_or_default();
                writeln!(
                    out,
                    "{}({}n+{}){m}: {} over {} samples, empirical",
                    spec, r.a, r.b, r.status, r.support
                )?;
            }
            writeln!(out, "{} rows", report.rows.len())?;
        }
    }
    Ok(EXIT_OK)
}
