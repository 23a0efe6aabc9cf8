mod config;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qcluster::mutation::mutate_sequence;
use qcluster::pbw::{expand_in_pbw, PbwContext};
use qcluster::qmatrix::{standard_cases, verify_identity_suite};
use qcluster::tsystem::{run_schedule, solve_direct, verify_identities, MinorTable};
use qcluster::verify::{run_suite, Check, Status, Suite, VerifyOptions};
use qcluster::Error;
use serde_json::{json, Value};

use config::{load, parse_pair, parse_sequence};
use report::Report;

#[derive(Parser)]
#[command(name = "qcluster", version, about = "Exact quantum cluster algebra computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Config or seed JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the initial seed of a config.
    Build(Io),
    /// Mutate a seed along a sequence of positions.
    Mutate {
        #[command(flatten)]
        io: Io,
        /// Comma-separated positions, applied left to right.
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Compute all minors D(b, d) and check the T-system.
    Tsystem {
        #[command(flatten)]
        io: Io,
        /// Solve the relations by division instead of mutating.
        #[arg(long)]
        direct: bool,
    },
    /// Expand minors in the dual PBW basis.
    Expand {
        #[command(flatten)]
        io: Io,
        /// Minor `b,d`; may be repeated. All minors if omitted.
        #[arg(long = "minor")]
        minors: Vec<String>,
    },
    /// Independent oracles.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        io: Io,
        /// compat, laurent, sigma, tsystem, qmatrix, pbw or all; join with `,` or `+`.
        #[arg(long)]
        suite: Option<String>,
        /// Seed of the random mutation sequences.
        #[arg(long)]
        seed_rng: Option<u64>,
        /// Number of random sequences.
        #[arg(long)]
        sequences: Option<usize>,
        /// Maximal length of the random sequences.
        #[arg(long)]
        max_len: Option<usize>,
        /// Add per-suite wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum Oracle {
    /// The flag minor identity in the quantum matrix algebra of size N.
    Qmatrix {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Largest length of u and v.
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::NotReduced { .. } | Error::Frozen(_) | Error::FrameMismatch => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn write_out(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    let res = match out {
        Some(p) => std::fs::write(p, format!("{}\n", text)),
        None => writeln!(std::io::stdout(), "{}", text),
    };
    res.map_err(|e| Failure { code: 2, message: format!("cannot write output: {}", e) })
}

fn to_pretty<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable")
}

fn cmd_build(io: &Io) -> Outcome {
    let input = load(&io.input, true)?;
    write_out(&io.out, &to_pretty(&input.seed().to_wire()))?;
    Ok(0)
}

fn cmd_mutate(io: &Io, sequence: &Option<String>) -> Outcome {
    let input = load(&io.input, true)?;
    let seq = match sequence {
        Some(s) => parse_sequence(s)?,
        None => input.config().and_then(|c| c.options.sequence.clone()).unwrap_or_default(),
    };
    let seed = mutate_sequence(input.seed(), &seq)?;
    write_out(&io.out, &to_pretty(&seed.to_wire()))?;
    Ok(0)
}

fn table_json(table: &MinorTable, residuals: &[((usize, usize), bool)]) -> Value {
    let identities: Vec<Value> =
        residuals.iter().map(|((b, d), ok)| json!({"pair": [b, d], "status": if *ok { "pass" } else { "fail" }})).collect();
    json!({"minors": table, "identities": identities})
}

fn cmd_tsystem(io: &Io, direct: bool) -> Outcome {
    let input = load(&io.input, true)?;
    let seed = input.seed();
    let table = if direct { solve_direct(seed)? } else { run_schedule(seed)?.1 };
    let res: Vec<((usize, usize), bool)> =
        verify_identities(&table, &seed.word)?.into_iter().map(|(p, r)| (p, r.is_zero())).collect();
    let ok = res.iter().all(|(_, z)| *z);
    let mut v = table_json(&table, &res);
    v["method"] = json!(if direct { "direct" } else { "schedule" });
    write_out(&io.out, &to_pretty(&v))?;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_expand(io: &Io, minors: &[String]) -> Outcome {
    let input = load(&io.input, true)?;
    let ctx = PbwContext::new(input.seed())?;
    let pairs: Vec<(usize, usize)> = if minors.is_empty() {
        ctx.table.entries.keys().copied().collect()
    } else {
        minors.iter().map(|s| parse_pair(s)).collect::<qcluster::Result<_>>()?
    };
    let mut out = Vec::new();
    for (b, d) in pairs {
        let x = ctx.table.get(b, d)?;
        let e = expand_in_pbw(x, &ctx)?;
        let terms: Vec<Value> = e
            .basis
            .iter()
            .zip(&e.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| json!({"a": a, "coeff": c.to_string()}))
            .collect();
        out.push(json!({"minor": [b, d], "degree": e.degree, "polynomial": e.polynomial_coeffs().is_some(), "terms": terms}));
    }
    write_out(&io.out, &to_pretty(&json!({ "expansions": out })))?;
    Ok(0)
}

fn emit(report: &Report, out: &Option<PathBuf>) -> Outcome {
    write_out(out, &report.to_json())?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_oracle_qmatrix(n: usize, max_len: usize, out: &Option<PathBuf>) -> Outcome {
    if !(2..=5).contains(&n) {
        return Err(Error::Input(format!("N = {} is outside 2..=5", n)).into());
    }
    let checks = verify_identity_suite(n, &standard_cases(n, max_len))?
        .into_iter()
        .map(|o| Check {
            suite: "qmatrix".into(),
            name: format!("N={} u={:?} v={:?} i={}", n, o.case.u, o.case.v, o.case.i),
            status: if o.zero { Status::Pass } else { Status::Fail },
            detail: if o.zero { None } else { o.residual },
        })
        .collect();
    emit(&Report::new(checks, None), out)
}

fn cmd_verify(
    io: &Io,
    suite: &Option<String>,
    seed_rng: Option<u64>,
    sequences: Option<usize>,
    max_len: Option<usize>,
    timings: bool,
) -> Outcome {
    let input = load(&io.input, false)?;
    let mut opts = input.config().map(|c| c.verify_options()).unwrap_or_default();
    opts = VerifyOptions {
        rng_seed: seed_rng.unwrap_or(opts.rng_seed),
        sequences: sequences.unwrap_or(opts.sequences),
        max_len: max_len.unwrap_or(opts.max_len),
        ..opts
    };
    let suites = match (suite, input.config()) {
        (Some(s), _) => Suite::parse_list(s)?,
        (None, Some(c)) => c.suites()?,
        (None, None) => Suite::ALL.to_vec(),
    };
    let mut checks = Vec::new();
    let mut times = BTreeMap::new();
    for s in suites {
        let start = Instant::now();
        let got = catch_unwind(AssertUnwindSafe(|| run_suite(input.seed(), s, &opts))).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|x| x.to_string()));
            vec![Check {
                suite: s.name().into(),
                name: "suite".into(),
                status: Status::Fail,
                detail: Some(format!("engine panic: {}", msg.unwrap_or_default())),
            }]
        });
        times.insert(s.name().to_string(), start.elapsed().as_millis());
        checks.extend(got);
    }
    emit(&Report::new(checks, timings.then_some(times)), &io.out)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Build(io) => cmd_build(io),
        Command::Mutate { io, sequence } => cmd_mutate(io, sequence),
        Command::Tsystem { io, direct } => cmd_tsystem(io, *direct),
        Command::Expand { io, minors } => cmd_expand(io, minors),
        Command::Oracle { which: Oracle::Qmatrix { n, max_len, out } } => cmd_oracle_qmatrix(*n, *max_len, out),
        Command::Verify { io, suite, seed_rng, sequences, max_len, timings } => {
            cmd_verify(io, suite, *seed_rng, *sequences, *max_len, *timings)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
