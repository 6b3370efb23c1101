//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bwrum_core::lp::{lp_feasibility_oracle, LpOutcome};
use bwrum_core::measure::{build_distribution, system_from_distribution, verify_reconstruction, BuildError};
use bwrum_core::poly::{all_polynomials, check_representable, CheckError, CheckOptions, Verdict};
use bwrum_core::rankings::{enumerate_pattern, Pattern, MAX_ENUMERATION};
use bwrum_core::rational::{parse_rational, to_fraction_string};
use bwrum_core::sim::{random_distribution, simulate_dataset, SeededRng, ALGORITHM};
use bwrum_core::system::{from_counts_with_limits, Limits, HARD_MAX_ALTERNATIVES};
use bwrum_core::{BwSystem, RankingDistribution, Subset};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::files::{self, distribution_entries, FormatError};
use crate::fixtures;
use crate::labels::Labels;
use crate::report::{self, header};

/// Largest `n` accepted by `demo`; the linear oracle stops there.
pub const DEMO_MAX_N: usize = bwrum_core::lp::MAX_LP_ALTERNATIVES;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    NotRepresentable = 2,
    Usage = 64,
    Data = 65,
}

impl Exit {
    // order used when merging a directory of results
    fn severity(self) -> u8 {
        match self {
            Exit::Ok => 0,
            Exit::NotRepresentable => 1,
            Exit::Failure => 2,
            Exit::Usage => 3,
            Exit::Data => 4,
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Failure(String),
}

impl CliError {
    fn exit(&self) -> Exit {
        match self {
            CliError::Usage(_) => Exit::Usage,
            CliError::Data(_) => Exit::Data,
            CliError::Failure(_) => Exit::Failure,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "bwrum", version, about = "Exact random utility checks for best-worst choice systems")]
pub struct Cli {
    /// Display names for alternatives 0..n, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    labels: Option<Vec<String>>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock timing to reports
    #[arg(long, global = true)]
    timing: bool,
    /// Raise the cap on alternatives (at most 12)
    #[arg(long, global = true, value_name = "N")]
    max_alternatives: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursion,
    Lp,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check ranges and normalization of a system file or a directory of them
    Validate { path: PathBuf },
    /// Turn a count dataset into a system by relative frequencies
    Ingest {
        counts: PathBuf,
        /// Additive smoothing added to every count
        #[arg(long)]
        smoothing: Option<String>,
    },
    /// Print every best-worst polynomial
    Poly {
        path: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Decide representability by the polynomial sign test
    Check {
        path: PathBuf,
        /// Also build and verify a witness distribution
        #[arg(long)]
        witness: bool,
        /// Treat polynomials in [-q, 0) as nonnegative
        #[arg(long)]
        tolerance: Option<String>,
        /// Include the polynomial table
        #[arg(long)]
        poly: bool,
        /// Cross-check the verdict with the linear feasibility oracle
        #[arg(long)]
        lp: bool,
    },
    /// Build a witness distribution over rankings
    Construct {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Compute the system induced by a distribution file
    Forward { path: PathBuf },
    /// Enumerate the rankings of a pattern set
    Pattern {
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        ground: String,
        #[arg(long, default_value = "")]
        suffix: String,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "count")]
        list: bool,
        #[arg(long)]
        count: bool,
    },
    /// Draw best-worst counts from a distribution
    Simulate {
        path: PathBuf,
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Random distribution, forward, check, construct and verify
    Demo {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Print a built-in example
    Fixture {
        name: String,
        /// Size for uniform_n
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

enum Body {
    Json(Value),
    Text(String),
}

struct Outcome {
    body: Body,
    exit: Exit,
}

impl Outcome {
    fn report(map: Map<String, Value>, exit: Exit) -> Self {
        Outcome {
            body: Body::Json(Value::Object(map)),
            exit,
        }
    }

    fn json(value: Value) -> Self {
        Outcome {
            body: Body::Json(value),
            exit: Exit::Ok,
        }
    }
}

struct Ctx {
    labels: Option<Vec<String>>,
    limits: Limits,
}

impl Ctx {
    /// Command-line labels win over labels stored in the file.
    fn display(&self, from_file: &Labels, n: usize) -> Result<Labels, CliError> {
        match &self.labels {
            Some(l) => Labels::new(l.clone(), n).map_err(|e| CliError::Usage(format!("--labels: {e}"))),
            None => Ok(from_file.clone()),
        }
    }

    fn load_system(&self, bytes: &[u8]) -> Result<(BwSystem, Labels), CliError> {
        let loaded = files::read_system(text(bytes)?, self.limits)?;
        let labels = self.display(&loaded.labels, loaded.system.n())?;
        Ok((loaded.system, labels))
    }
}

fn text(bytes: &[u8]) -> Result<&str, CliError> {
    std::str::from_utf8(bytes).map_err(|e| CliError::Data(format!("input is not UTF-8: {e}")))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Parses `argv` (including the program name), runs the command and writes
/// its result. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                Exit::Usage.code()
            } else {
                let _ = write!(stdout, "{rendered}");
                Exit::Ok.code()
            };
        }
    };
    let started = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "bwrum: {}", e.message());
            return e.exit().code();
        }
    };
    let mut rendered = match outcome.body {
        Body::Json(mut v) => {
            if cli.timing {
                if let Value::Object(m) = &mut v {
                    m.insert("timing_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
                }
            }
            serde_json::to_string_pretty(&v).expect("JSON values serialize")
        }
        Body::Text(t) => t,
    };
    if !rendered.ends_with('\n') {
        rendered.push('\n');
    }
    let written = match &cli.out {
        Some(path) => fs::write(path, &rendered).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "bwrum: cannot write output: {e}");
        return Exit::Failure.code();
    }
    outcome.exit.code()
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let limits = match cli.max_alternatives {
        None => Limits::default(),
        Some(m) if (2..=HARD_MAX_ALTERNATIVES).contains(&m) => Limits::with_max(m),
        Some(m) => {
            return Err(CliError::Usage(format!(
                "--max-alternatives must be in 2..={HARD_MAX_ALTERNATIVES}, got {m}"
            )))
        }
    };
    let ctx = Ctx {
        labels: cli.labels.clone(),
        limits,
    };
    match &cli.command {
        Command::Validate { path } => per_file(&ctx, "validate", path, validate),
        Command::Ingest { counts, smoothing } => ingest(&ctx, counts, smoothing.as_deref()),
        Command::Poly { path, csv } => poly(&ctx, path, *csv),
        Command::Check {
            path,
            witness,
            tolerance,
            poly,
            lp,
        } => {
            let tolerance = match tolerance {
                Some(t) => parse_rational(t).map_err(|e| CliError::Usage(format!("--tolerance: {e}")))?,
                None => Default::default(),
            };
            let opts = CheckFlags {
                options: CheckOptions {
                    construct_witness: *witness,
                    tolerance,
                },
                poly: *poly,
                lp: *lp,
            };
            per_file(&ctx, "check", path, |ctx, bytes| check(ctx, bytes, &opts))
        }
        Command::Construct { path, method } => construct(&ctx, path, *method),
        Command::Forward { path } => forward(&ctx, path),
        Command::Pattern {
            prefix,
            ground,
            suffix,
            n,
            list: _,
            count,
        } => pattern(&ctx, prefix, ground, suffix, *n, *count),
        Command::Simulate { path, design, seed } => simulate(&ctx, path, design, *seed),
        Command::Demo { n, seed } => demo(&ctx, *n, *seed),
        Command::Fixture { name, n } => {
            let v = fixtures::emit(name, *n).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Outcome::json(v))
        }
    }
}

type FileCommand<'a> = dyn Fn(&Ctx, &[u8]) -> Result<(Map<String, Value>, Exit), CliError> + 'a;

/// Runs `f` on one file, or on every `*.json` file of a directory in
/// lexicographic order of file names.
fn per_file<F>(ctx: &Ctx, command: &str, path: &Path, f: F) -> Result<Outcome, CliError>
where
    F: Fn(&Ctx, &[u8]) -> Result<(Map<String, Value>, Exit), CliError>,
{
    let f: &FileCommand = &f;
    if !path.is_dir() {
        let bytes = read(path)?;
        let (body, exit) = f(ctx, &bytes)?;
        let mut out = header(command);
        out.insert("input".into(), report::digest(&bytes));
        out.extend(body);
        return Ok(Outcome::report(out, exit));
    }
    let mut names: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let mut worst = Exit::Ok;
    let mut results = Vec::with_capacity(names.len());
    for file in names {
        let mut entry = Map::new();
        entry.insert("file".into(), json!(file.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()));
        let exit = match read(&file).and_then(|bytes| {
            entry.insert("input".into(), report::digest(&bytes));
            f(ctx, &bytes)
        }) {
            Ok((body, exit)) => {
                entry.extend(body);
                exit
            }
            Err(e) => {
                entry.insert("error".into(), json!(e.message()));
                e.exit()
            }
        };
        entry.insert("exit".into(), json!(exit.code()));
        if exit.severity() > worst.severity() {
            worst = exit;
        }
        results.push(Value::Object(entry));
    }
    let mut out = header(command);
    out.insert("files".into(), Value::Array(results));
    Ok(Outcome::report(out, worst))
}

fn validate(ctx: &Ctx, bytes: &[u8]) -> Result<(Map<String, Value>, Exit), CliError> {
    let (system, labels) = ctx.load_system(bytes)?;
    let v = system.validate();
    let mut out = Map::new();
    out.insert("n".into(), json!(system.n()));
    out.insert("validation".into(), report::validation(&v, &labels));
    Ok((out, if v.is_valid() { Exit::Ok } else { Exit::Failure }))
}

/// Fails with the validation summary when the system is not a proper one.
fn require_valid(system: &BwSystem, labels: &Labels, out: &mut Map<String, Value>) -> Option<Exit> {
    let v = system.validate();
    out.insert("n".into(), json!(system.n()));
    out.insert("validation".into(), report::validation(&v, labels));
    if v.is_valid() {
        None
    } else {
        out.insert("error".into(), json!("system is not a valid best-worst system"));
        Some(Exit::Data)
    }
}

struct CheckFlags {
    options: CheckOptions,
    poly: bool,
    lp: bool,
}

fn check(ctx: &Ctx, bytes: &[u8], flags: &CheckFlags) -> Result<(Map<String, Value>, Exit), CliError> {
    let (system, labels) = ctx.load_system(bytes)?;
    let mut out = Map::new();
    if let Some(exit) = require_valid(&system, &labels, &mut out) {
        return Ok((out, exit));
    }
    let mut exit = Exit::Ok;
    let result = match check_representable(&system, &flags.options) {
        Ok(r) => r,
        Err(CheckError::NegativeTolerance) => return Err(CliError::Usage("--tolerance must be nonnegative".into())),
        Err(CheckError::WitnessConstructionFailed(e)) => {
            out.insert("witness_error".into(), json!(e.to_string()));
            exit = Exit::Failure;
            let plain = CheckOptions {
                construct_witness: false,
                ..flags.options.clone()
            };
            check_representable(&system, &plain).expect("tolerance already accepted")
        }
    };
    report::representability(&result, &labels, &mut out);
    if result.verdict == Verdict::NotRepresentable {
        exit = Exit::NotRepresentable;
    }
    if flags.poly {
        out.insert("polynomials".into(), files::polynomials_json(&all_polynomials(&system), &labels));
    }
    if flags.lp {
        let oracle = match lp_feasibility_oracle(&system) {
            Ok(o) => {
                let feasible = o.is_feasible();
                json!({ "feasible": feasible, "agrees": feasible == (result.verdict == Verdict::Representable) })
            }
            Err(e) => json!({ "error": e.to_string() }),
        };
        out.insert("lp_oracle".into(), oracle);
    }
    Ok((out, exit))
}

fn ingest(ctx: &Ctx, path: &Path, smoothing: Option<&str>) -> Result<Outcome, CliError> {
    let bytes = read(path)?;
    let loaded = files::read_counts(text(&bytes)?)?;
    let smoothing = smoothing
        .map(|s| parse_rational(s).map_err(|e| CliError::Usage(format!("--smoothing: {e}"))))
        .transpose()?;
    if smoothing.as_ref().is_some_and(|s| s < &Default::default()) {
        return Err(CliError::Usage("--smoothing must be nonnegative".into()));
    }
    let ingested = from_counts_with_limits(&loaded.data, smoothing.as_ref(), ctx.limits)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let labels = ctx.display(&loaded.labels, loaded.data.n)?;
    let mut out = files::system_json(&ingested.system, &labels);
    out["unobserved"] = Value::Array(ingested.unobserved.iter().map(|&s| labels.subset(s)).collect());
    Ok(Outcome::json(out))
}

fn poly(ctx: &Ctx, path: &Path, csv: bool) -> Result<Outcome, CliError> {
    let (system, labels) = ctx.load_system(&read(path)?)?;
    let table = all_polynomials(&system);
    Ok(if csv {
        Outcome {
            body: Body::Text(files::polynomials_csv(&table, &labels)),
            exit: Exit::Ok,
        }
    } else {
        Outcome::json(files::polynomials_json(&table, &labels))
    })
}

/// Result of one witness method.
struct MethodRun {
    status: Value,
    witness: Option<RankingDistribution>,
}

fn run_recursion(system: &BwSystem, labels: &Labels) -> MethodRun {
    match build_distribution(system) {
        Ok(d) => verified_run(system, d, labels),
        Err(e) => {
            let mut status = json!({ "status": "failed", "error": e.to_string() });
            if let BuildError::ConstructionInconsistent { attempts } = &e {
                status["attempts"] = attempts
                    .iter()
                    .map(|a| {
                        json!({
                            "reading": a.reading.to_string(),
                            "total": to_fraction_string(&a.total),
                            "nonnegative": a.nonnegative,
                            "mismatches": a.mismatches,
                        })
                    })
                    .collect();
            }
            MethodRun { status, witness: None }
        }
    }
}

fn run_lp(system: &BwSystem, labels: &Labels) -> MethodRun {
    match lp_feasibility_oracle(system) {
        Ok(LpOutcome::Feasible(d)) => verified_run(system, d, labels),
        Ok(LpOutcome::Infeasible) => MethodRun {
            status: json!({ "status": "infeasible" }),
            witness: None,
        },
        Err(e) => MethodRun {
            status: json!({ "status": "failed", "error": e.to_string() }),
            witness: None,
        },
    }
}

fn verified_run(system: &BwSystem, d: RankingDistribution, labels: &Labels) -> MethodRun {
    let v = verify_reconstruction(system, &d);
    let exact = v.is_exact();
    MethodRun {
        status: json!({ "status": "ok", "verification": report::verification(&v, labels) }),
        witness: exact.then_some(d),
    }
}

/// Runs the requested methods; the first verified witness is the answer.
/// Methods agree when they reach the same outcome; witnesses need not be
/// equal, since representations are not unique.
fn witnesses(system: &BwSystem, labels: &Labels, method: Method, out: &mut Map<String, Value>) -> Option<RankingDistribution> {
    let rec = matches!(method, Method::Recursion | Method::Both).then(|| run_recursion(system, labels));
    let lp = matches!(method, Method::Lp | Method::Both).then(|| run_lp(system, labels));
    let mut methods = Map::new();
    if let Some(r) = &rec {
        methods.insert("recursion".into(), r.status.clone());
    }
    if let Some(r) = &lp {
        methods.insert("lp".into(), r.status.clone());
    }
    out.insert("methods".into(), Value::Object(methods));
    let agree = match (&rec, &lp) {
        (Some(a), Some(b)) => json!(a.witness.is_some() == b.witness.is_some()),
        _ => Value::Null,
    };
    out.insert("methods_agree".into(), agree);
    let chosen = rec.and_then(|r| r.witness).or_else(|| lp.and_then(|r| r.witness));
    out.insert("verified".into(), json!(chosen.is_some()));
    out.insert(
        "distribution".into(),
        chosen.as_ref().map_or(Value::Null, |d| Value::Array(distribution_entries(d, labels))),
    );
    chosen
}

fn construct(ctx: &Ctx, path: &Path, method: Method) -> Result<Outcome, CliError> {
    let bytes = read(path)?;
    let (system, labels) = ctx.load_system(&bytes)?;
    let mut out = header("construct");
    out.insert("input".into(), report::digest(&bytes));
    if let Some(exit) = require_valid(&system, &labels, &mut out) {
        return Ok(Outcome::report(out, exit));
    }
    let result = check_representable(&system, &CheckOptions::default()).expect("zero tolerance");
    out.insert("verdict".into(), json!(report::verdict_text(result.verdict)));
    if result.verdict == Verdict::NotRepresentable {
        out.insert(
            "certificates".into(),
            result.negatives.iter().map(|c| report::certificate(c, &labels)).collect(),
        );
        out.insert("distribution".into(), Value::Null);
        out.insert("verified".into(), json!(false));
        return Ok(Outcome::report(out, Exit::NotRepresentable));
    }
    let exit = match witnesses(&system, &labels, method, &mut out) {
        Some(_) => Exit::Ok,
        None => Exit::Failure,
    };
    Ok(Outcome::report(out, exit))
}

fn forward(ctx: &Ctx, path: &Path) -> Result<Outcome, CliError> {
    let loaded = files::read_distribution(text(&read(path)?)?)?;
    let labels = ctx.display(&loaded.labels, loaded.dist.n())?;
    Ok(Outcome::json(files::system_json(&system_from_distribution(&loaded.dist), &labels)))
}

fn tokens(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|t| !t.is_empty()).collect()
}

/// Labels for `pattern`: `--labels` if given, plain ids if every token is a
/// number, otherwise names in order of first appearance with the remaining
/// alternatives named by their id.
fn pattern_labels(ctx: &Ctx, all: &[&str], n: usize) -> Result<Labels, CliError> {
    if ctx.labels.is_some() {
        return ctx.display(&Labels::none(), n);
    }
    if all.iter().all(|t| t.parse::<usize>().is_ok()) {
        return Ok(Labels::none());
    }
    let mut names: Vec<String> = Vec::new();
    for t in all {
        if !names.iter().any(|x| x == t) {
            names.push(t.to_string());
        }
    }
    if names.len() > n {
        return Err(CliError::Usage(format!("{} distinct alternatives named but n = {n}", names.len())));
    }
    let mut id = names.len();
    while names.len() < n {
        let mut name = id.to_string();
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
        id += 1;
    }
    Labels::new(names, n).map_err(CliError::Usage)
}

fn pattern(ctx: &Ctx, prefix: &str, ground: &str, suffix: &str, n: usize, count: bool) -> Result<Outcome, CliError> {
    if n > MAX_ENUMERATION {
        return Err(CliError::Usage(format!("--n {n} exceeds the enumeration cap of {MAX_ENUMERATION}")));
    }
    let (p, g, s) = (tokens(prefix), tokens(ground), tokens(suffix));
    let all: Vec<&str> = p.iter().chain(&g).chain(&s).copied().collect();
    let labels = pattern_labels(ctx, &all, n)?;
    let ids = |ts: &[&str]| -> Result<Vec<usize>, CliError> {
        ts.iter()
            .map(|t| labels.parse(t).ok_or_else(|| CliError::Usage(format!("unknown alternative {t:?}"))))
            .collect()
    };
    let ground: Subset = ids(&g)?.into_iter().collect();
    let pat = Pattern::new(ids(&p)?, ground, ids(&s)?);
    let members = enumerate_pattern(&pat, n).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Outcome::json(if count {
        json!(members.len())
    } else {
        Value::Array(members.iter().map(|r| labels.ranking(r)).collect())
    }))
}

fn simulate(ctx: &Ctx, path: &Path, design: &Path, seed: u64) -> Result<Outcome, CliError> {
    let loaded = files::read_distribution(text(&read(path)?)?)?;
    let n = loaded.dist.n();
    let plan = files::read_design(text(&read(design)?)?, n, &loaded.labels)?;
    let mut rng = SeededRng::new(seed);
    let data = simulate_dataset(&loaded.dist, &plan, &mut rng).map_err(|e| CliError::Data(e.to_string()))?;
    let labels = ctx.display(&loaded.labels, n)?;
    let mut out = files::counts_json(&data, &labels);
    out["generator"] = json!({ "algorithm": ALGORITHM, "seed": seed });
    Ok(Outcome::json(out))
}

fn demo(ctx: &Ctx, n: usize, seed: u64) -> Result<Outcome, CliError> {
    if !(2..=DEMO_MAX_N).contains(&n) {
        return Err(CliError::Usage(format!("demo needs 2 <= n <= {DEMO_MAX_N}, got {n}")));
    }
    let labels = ctx.display(&Labels::none(), n)?;
    let mut rng = SeededRng::new(seed);
    let dist = random_distribution(n, 5, &mut rng);
    let system = system_from_distribution(&dist);
    let mut out = header("demo");
    out.insert("n".into(), json!(n));
    out.insert("generator".into(), json!({ "algorithm": ALGORITHM, "seed": seed }));
    out.insert("source".into(), Value::Array(distribution_entries(&dist, &labels)));
    out.insert("system".into(), files::system_json(&system, &labels));
    let result = check_representable(&system, &CheckOptions::default()).expect("zero tolerance");
    report::representability(&result, &labels, &mut out);
    let witness = witnesses(&system, &labels, Method::Both, &mut out);
    let round_trip = result.verdict == Verdict::Representable && witness.is_some();
    out.insert("round_trip".into(), json!(round_trip));
    Ok(Outcome::report(out, if round_trip { Exit::Ok } else { Exit::Failure }))
}
