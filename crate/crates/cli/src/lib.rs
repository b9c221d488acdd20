//! Command-line front end: argument parsing, commands and report output.
//!
//! Exit codes: 0 success, 1 a failed check (or an undetected mutation),
//! 2 usage errors.

pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use congruence_lab::modarith::is_prime;
use congruence_lab::quadratic::{represent, ReprCondition};
use congruence_lab::registry::{generators, EvalContext};
use congruence_lab::sweep::{run_sweep, CaseClass, SweepPlan};
use congruence_lab::{lookup, CongruenceCase, PrimePower, Status};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use report::{write_csv, write_jsonl, write_table, RecordRow, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "congruence-lab", version, about = "Verify congruences for central binomial sums weighted by Lucas sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the proven congruences over a prime range
    Verify(SweepArgs),
    /// Check the conjectured congruences; failures are reported as findings
    Conjectures {
        #[command(flatten)]
        sweep: SweepArgs,
        /// perturb every right-hand side by +1 and require each to be caught
        #[arg(long)]
        mutate: bool,
    },
    /// Evaluate one case at one prime power
    Eval(EvalArgs),
    /// Represent a prime by x^2 + 2y^2 or x^2 + 3y^2
    Repr(ReprArgs),
    /// Randomized checks of the parametric families
    Properties(PropertyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// comma-separated case ids, or "all"
    #[arg(long, default_value = "all")]
    pub ids: String,
    #[arg(long, default_value_t = 3)]
    pub prime_min: u64,
    #[arg(long, default_value_t = 1000)]
    pub prime_max: u64,
    /// comma-separated exponents from {1,2,3}
    #[arg(long = "exp", default_value = "1", value_delimiter = ',')]
    pub exponents: Vec<u32>,
    /// largest p^a for a > 1 (default: max(prime-max, 100000))
    #[arg(long)]
    pub pp_cap: Option<u64>,
    #[arg(long, env = "CONGRUENCE_LAB_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// output path; "-" or absent for stdout
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    #[value(name = "x2+2y2")]
    TwoY2,
    #[value(name = "x2+3y2")]
    ThreeY2,
}

#[derive(Debug, Args)]
pub struct ReprArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_enum)]
    pub form: Form,
    /// normalization tags: x1,3mod8 | x1mod3 | y1mod4 | y1,3mod8 (repeatable)
    #[arg(long = "norm")]
    pub norms: Vec<String>,
}

#[derive(Debug, Args)]
pub struct PropertyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// random parameter sets per family
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 500)]
    pub prime_max: u64,
}

/// Output streams, injectable for tests.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, io: &mut Io) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { io.err.write_all(text.as_bytes()) } else { io.out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(&args, io),
        Command::Conjectures { sweep, mutate } => cmd_conjectures(&sweep, mutate, io),
        Command::Eval(args) => cmd_eval(&args, io),
        Command::Repr(args) => cmd_repr(&args, io),
        Command::Properties(args) => cmd_properties(&args, io),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_FAIL
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn build_plan(args: &SweepArgs, class: CaseClass, mutate: bool) -> Result<SweepPlan, Failure> {
    let ids = match args.ids.trim() {
        "all" => None,
        list => Some(list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect::<Vec<_>>()),
    };
    if ids.as_ref().is_some_and(|v| v.is_empty()) {
        return Err(Failure::Usage("--ids is empty".into()));
    }
    let plan = SweepPlan {
        ids,
        class,
        kinds: None,
        prime_min: args.prime_min,
        prime_max: args.prime_max,
        exponents: args.exponents.clone(),
        pp_cap: args.pp_cap.unwrap_or(args.prime_max.max(100_000)),
        jobs: args.jobs.unwrap_or_else(default_jobs),
        mutate,
    };
    plan.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(plan)
}

fn emit(report: &Report, args: &SweepArgs, io: &mut Io) -> Result<(), Failure> {
    let mut file;
    let out: &mut dyn Write = match args.out.as_deref() {
        None | Some("-") => &mut *io.out,
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
    };
    match args.format {
        Format::Jsonl => write_jsonl(report, out)?,
        Format::Csv => write_csv(&report.records, out)?,
        Format::Table => write_table(report, out)?,
    }
    out.flush()?;
    Ok(())
}

fn summary_line(report: &Report) -> String {
    let s = &report.summary;
    format!(
        "{} records: {} pass, {} fail, {} inapplicable in {:.2}s",
        s.total, s.pass, s.fail, s.inapplicable, s.wall_seconds
    )
}

fn cmd_verify(args: &SweepArgs, io: &mut Io) -> Result<i32, Failure> {
    let plan = build_plan(args, CaseClass::Theorems, false)?;
    let res = run_sweep(&plan).map_err(|e| Failure::Usage(e.to_string()))?;
    let report = Report::new(&plan, &res.records, &res.summary);
    emit(&report, args, io)?;
    writeln!(io.err, "{}", summary_line(&report))?;
    Ok(if res.summary.fail > 0 { EXIT_FAIL } else { EXIT_OK })
}

fn cmd_conjectures(args: &SweepArgs, mutate: bool, io: &mut Io) -> Result<i32, Failure> {
    let plan = build_plan(args, CaseClass::Conjectures, mutate)?;
    let res = run_sweep(&plan).map_err(|e| Failure::Usage(e.to_string()))?;
    let report = Report::new(&plan, &res.records, &res.summary);
    emit(&report, args, io)?;
    writeln!(io.err, "{}", summary_line(&report))?;

    // per case: applicable primes and failing primes
    let mut by_case: BTreeMap<usize, (&str, usize, Vec<&RecordRow>)> = BTreeMap::new();
    for r in &report.records {
        let idx = congruence_lab::registry::catalogue_index(&r.case_id).unwrap_or(usize::MAX);
        let entry = by_case.entry(idx).or_insert((r.case_id.as_str(), 0, Vec::new()));
        if r.status != Status::Inapplicable {
            entry.1 += 1;
        }
        if r.status == Status::Fail {
            entry.2.push(r);
        }
    }
    if !mutate {
        for (id, checked, fails) in by_case.values() {
            if fails.is_empty() {
                continue;
            }
            let first: Vec<String> = fails.iter().take(5).map(|r| r.p.to_string()).collect();
            let mod_p = if fails.iter().all(|r| r.agrees_mod_p == Some(true)) { "; both sides agree mod p" } else { "" };
            writeln!(
                io.err,
                "FINDING: {id} fails at {} of {checked} primes (first: {}){mod_p}",
                fails.len(),
                first.join(", ")
            )?;
        }
        return Ok(EXIT_OK);
    }

    let selected: Vec<&CongruenceCase> = match &plan.ids {
        Some(ids) => ids.iter().filter_map(|id| lookup(id)).collect(),
        None => congruence_lab::registry_catalogue().iter().filter(|c| c.conjecture).collect(),
    };
    let missed: Vec<&str> = selected
        .iter()
        .filter(|c| !by_case.values().any(|(id, _, fails)| *id == c.id && !fails.is_empty()))
        .map(|c| c.id.as_str())
        .collect();
    writeln!(io.err, "mutation: {} of {} cases caught", selected.len() - missed.len(), selected.len())?;
    if missed.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(io.err, "undetected mutations: {}", missed.join(", "))?;
        Ok(EXIT_FAIL)
    }
}

fn cmd_eval(args: &EvalArgs, io: &mut Io) -> Result<i32, Failure> {
    let case = lookup(&args.id).ok_or_else(|| Failure::Usage(format!("unknown case id {:?}", args.id)))?;
    if args.p < 3 || !is_prime(args.p) {
        return Err(Failure::Usage(format!("{} is not an odd prime", args.p)));
    }
    let pp = PrimePower::new(args.p, args.a).map_err(|e| Failure::Usage(e.to_string()))?;
    let record = EvalContext::new(args.p).verify(case, pp, false);
    let row = RecordRow::from(&record);
    match args.format {
        Format::Jsonl => {
            serde_json::to_writer(&mut *io.out, &row).map_err(io::Error::from)?;
            writeln!(io.out)?;
        }
        Format::Csv => write_csv(std::slice::from_ref(&row), io.out)?,
        Format::Table => {
            let signed = |v: u64| {
                let m = row.modulus;
                if v > m / 2 {
                    format!("{v} (= -{})", m - v)
                } else {
                    v.to_string()
                }
            };
            writeln!(io.out, "case: {} ({})", case.id, case.location)?;
            writeln!(io.out, "prime power: {}^{}, compared mod {}", row.p, row.a, row.modulus)?;
            writeln!(io.out, "status: {}", row.status)?;
            if let Some(v) = row.lhs {
                writeln!(io.out, "lhs: {}", signed(v))?;
            }
            if let Some(v) = row.rhs {
                writeln!(io.out, "rhs: {} [{}]", signed(v), case.formula)?;
            }
            for (name, v) in [("delta", row.delta), ("d", row.d), ("x", row.x), ("y", row.y)] {
                if let Some(v) = v {
                    writeln!(io.out, "{name}: {v}")?;
                }
            }
            if let Some(v) = row.rhs_alt {
                writeln!(io.out, "rhs (other root sign): {v}")?;
            }
            if let Some(v) = row.agrees_mod_p {
                writeln!(io.out, "agrees mod p: {v}")?;
            }
            if let Some(n) = &row.note {
                writeln!(io.out, "note: {n}")?;
            }
            if let Some(dev) = case.deviation {
                writeln!(io.out, "deviation: {dev}")?;
            }
        }
    }
    Ok(if record.status == Status::Fail { EXIT_FAIL } else { EXIT_OK })
}

fn cmd_repr(args: &ReprArgs, io: &mut Io) -> Result<i32, Failure> {
    if args.p < 3 || !is_prime(args.p) {
        return Err(Failure::Usage(format!("{} is not an odd prime", args.p)));
    }
    let conditions = args
        .norms
        .iter()
        .flat_map(|n| n.split(';'))
        .map(|tag| ReprCondition::from_tag(tag.trim()).ok_or_else(|| Failure::Usage(format!("unknown --norm {tag:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let d = match args.form {
        Form::TwoY2 => 2,
        Form::ThreeY2 => 3,
    };
    match represent(args.p, d, &conditions) {
        None => {
            writeln!(io.out, "none")?;
            Ok(EXIT_OK)
        }
        Some(Ok(r)) => {
            writeln!(io.out, "({},{})", r.x, r.y)?;
            Ok(EXIT_OK)
        }
        Some(Err(e)) => {
            writeln!(io.err, "error: {e}")?;
            Ok(EXIT_FAIL)
        }
    }
}

fn cmd_properties(args: &PropertyArgs, io: &mut Io) -> Result<i32, Failure> {
    if args.prime_max < 3 {
        return Err(Failure::Usage("--prime-max must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = args.count;
    let families: Vec<(&str, Vec<CongruenceCase>)> = vec![
        ("zero sums with u_k(A, m^2), v_k(A, m^2)", generators::random_t11(&mut rng, n)),
        ("reflection congruences", generators::random_t21(&mut rng, n)),
        ("half-index reduction sums", generators::random_t13(&mut rng, n)),
        ("p^2 and p congruences with 1/(16A), A/(16B)", generators::random_t12(&mut rng, n)),
        ("sums equal to 2(-B/p) mod p^2", generators::random_t14(&mut rng, n)),
    ];
    let primes = congruence_lab::modarith::primes_in(3, args.prime_max);
    let mut failed = false;
    writeln!(io.out, "seed {} count {} primes <= {}", args.seed, n, args.prime_max)?;
    for (name, cases) in &families {
        let (mut checked, mut fails) = (0usize, Vec::new());
        for &p in &primes {
            let mut ctx = EvalContext::new(p);
            let pp = PrimePower::prime(p).expect("odd prime");
            for case in cases {
                let r = ctx.verify(case, pp, false);
                match r.status {
                    Status::Pass => checked += 1,
                    Status::Fail => fails.push(format!("{} at {p}", case.id)),
                    Status::Inapplicable => {}
                }
            }
        }
        checked += fails.len();
        failed |= !fails.is_empty();
        writeln!(io.out, "{name}: {} instances, {checked} checks, {} failures", cases.len(), fails.len())?;
        for f in fails.iter().take(10) {
            writeln!(io.out, "  FAIL {f}")?;
        }
    }
    Ok(if failed { EXIT_FAIL } else { EXIT_OK })
}
