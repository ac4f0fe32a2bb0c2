//! Command-line surface.
//!
//! Exit codes: 0 positive result, 3 negative result, 2 input error,
//! 4 search refused by budget, 1 anything else.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use polydual_core::construct::{
    bipyramid, cartesian_product, cross_polytope, cube, ngon, perturb, polar_dual, prism, simplex,
    truncate_vertices,
};
use polydual_core::search::{realization_search, DEFAULT_BUDGET};
use polydual_core::theorem::{verify_theorem_instance_with, SearchOutcome, TheoremReport};
use polydual_core::{
    are_equivalent, Error, Rational, SearchCertificate, SearchMode, SearchOptions, VPolytope,
};

use crate::certificate::{CertError, CertificateFile, Timing};
use crate::parallel;
use crate::polyfile::{self, PolyFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub const BUDGET_ENV: &str = "POLYDUAL_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "polydual", version, about = "Exact polytope combinatorics and dual-subset search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a polytope and write it as a POLY file.
    ///
    /// Families: ngon N | cube D | simplex D | crosspolytope D | prism FILE |
    /// product FILE FILE | bipyramid FILE | dual FILE | truncate FILE T |
    /// perturb FILE BOUND SEED
    Construct {
        family: String,
        params: Vec<String>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the vertex subsets of a polytope for one whose hull is dual to it.
    FindDualSubset {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check the product-of-polygon-and-cube statement for one instance.
    VerifyTheorem {
        #[arg(long)]
        ngon: usize,
        #[arg(long)]
        cube_dim: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Test two polytopes for combinatorial equivalence.
    CheckEquiv { a: PathBuf, b: PathBuf },
    /// Re-verify a certificate file without searching.
    CheckCert { file: PathBuf },
    /// Search a polytope and type-preserving perturbations of it for a witness.
    RealizationSearch {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct SearchArgs {
    /// Maximum number of subsets; overrides POLYDUAL_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Certificate output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Disable all pruning.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    File(#[from] PolyFileError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Usage(_) | CliError::File(_) | CliError::Core(_) => EXIT_INPUT,
            CliError::Cert(CertError::Malformed(_)) => EXIT_INPUT,
            CliError::Cert(CertError::Rejected(_)) => EXIT_NEGATIVE,
            CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Write failures on the console streams are ignored.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            say!(io.err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Result<i32, CliError> {
    match cmd {
        Command::Construct { family, params, out } => construct(&family, &params, out.as_deref(), io),
        Command::FindDualSubset { file, search } => find_dual(&file, &search, io),
        Command::VerifyTheorem { ngon, cube_dim, search } => verify(ngon, cube_dim, &search, io),
        Command::CheckEquiv { a, b } => check_equiv(&a, &b, io),
        Command::CheckCert { file } => check_cert(&file, io),
        Command::RealizationSearch { file, trials, bound, seed, budget, out } => {
            realization(&file, trials, bound, seed, budget, out.as_deref(), io)
        }
    }
}

fn budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn options(args: &SearchArgs) -> Result<SearchOptions, CliError> {
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be >= 1".into()));
    }
    Ok(SearchOptions { budget: budget(args.budget)?, prune: !args.no_prune })
}

fn fmt_tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T, CliError> {
    let raw = params.get(i).ok_or_else(|| CliError::Usage(format!("missing parameter: {what}")))?;
    raw.parse().map_err(|_| CliError::Usage(format!("bad {what}: {raw:?}")))
}

fn construct(family: &str, params: &[String], out: Option<&Path>, io: &mut Io<'_>) -> Result<i32, CliError> {
    let arity = match family {
        "ngon" | "cube" | "simplex" | "crosspolytope" | "prism" | "bipyramid" | "dual" => 1,
        "product" | "truncate" => 2,
        "perturb" => 3,
        other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
    };
    if params.len() != arity {
        return Err(CliError::Usage(format!("{family} takes {arity} parameter(s), got {}", params.len())));
    }
    let file = |i: usize| polyfile::read(&params[i]);
    let p = match family {
        "ngon" => ngon(param(params, 0, "vertex count")?)?,
        "cube" => cube(param(params, 0, "dimension")?)?,
        "simplex" => simplex(param(params, 0, "dimension")?)?,
        "crosspolytope" => cross_polytope(param(params, 0, "dimension")?)?,
        "prism" => prism(&file(0)?)?,
        "product" => cartesian_product(&file(0)?, &file(1)?)?,
        "bipyramid" => bipyramid(&file(0)?)?,
        "dual" => polar_dual(&file(0)?)?,
        "truncate" => truncate_vertices(&file(0)?, &param::<Rational>(params, 1, "truncation parameter")?)?,
        _ => perturb(&file(0)?, param(params, 1, "denominator bound")?, param(params, 2, "seed")?)?,
    };
    let summary = format!("f = {}", fmt_tuple(&p.f_vector()?));
    match out {
        Some(path) => {
            write_text(path, &polyfile::serialize(&p))?;
            say!(io.out, "{summary}");
        }
        None => {
            let _ = io.out.write_all(polyfile::serialize(&p).as_bytes());
            say!(io.err, "{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn report_search(c: &SearchCertificate, io: &mut Io<'_>) {
    say!(io.out, "target f = {}", fmt_tuple(&c.target_fvector));
    say!(io.out, "subsets: {} of size {} from {} vertices", c.total_subsets, c.subset_size, c.vertex_count);
    say!(io.out, "examined: {}", c.subsets_examined);
    for (reason, n) in &c.pruned_by {
        say!(io.out, "pruned by {}: {}", reason.as_str(), n);
    }
    match (&c.mode, &c.subset) {
        (SearchMode::Witness, Some(s)) => {
            say!(io.out, "mode: witness");
            say!(io.out, "subset: {}", fmt_tuple(s));
        }
        _ => say!(io.out, "mode: exhausted"),
    }
    say!(io.out, "realization: {}", crate::certificate::hash_hex(&c.realization_hash));
}

fn emit(file: CertificateFile, out: Option<&Path>, started: Instant, jobs: usize) -> Result<(), CliError> {
    if let Some(path) = out {
        let elapsed_ms = u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX);
        let file = CertificateFile { timing: Some(Timing { elapsed_ms, jobs }), ..file };
        write_text(path, &file.to_json())?;
    }
    Ok(())
}

fn find_dual(path: &Path, args: &SearchArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let started = Instant::now();
    let q = polyfile::read(path)?;
    let plan = polydual_core::search::SearchPlan::new(&q, options(args)?)?;
    let cert = parallel::run(&plan, args.jobs);
    report_search(&cert, io);
    emit(CertificateFile::for_search(&q, &cert), args.out.as_deref(), started, args.jobs)?;
    Ok(match cert.mode {
        SearchMode::Witness => EXIT_OK,
        SearchMode::Exhausted => EXIT_NEGATIVE,
    })
}

fn report_theorem(r: &TheoremReport, io: &mut Io<'_>) {
    let b = &r.instance.bounds;
    say!(io.out, "n = {}, d = {}, d' = {}", b.n, b.d, b.d_prime);
    say!(io.out, "bound = {} - {} = {}", b.ceiling_term, b.d_prime, b.bound);
    say!(io.out, "max incidence = {}", b.max_incidence);
    say!(io.out, "hypothesis_ok: {}", b.hypothesis_ok);
    if let Some(reason) = b.reason {
        say!(io.out, "reason: {reason}");
    }
    if !b.hypothesis_ok {
        say!(io.out, "the theorem makes no claim for this instance");
        return;
    }
    if let Some(p) = &r.partition {
        say!(io.out, "partition check: {} ({} parts)", if p.ok { "pass" } else { "FAIL" }, p.parts);
        for line in &p.diagnostics {
            say!(io.out, "  {line}");
        }
    }
    if let Some(bp) = &r.bipyramid {
        say!(
            io.out,
            "bipyramid check: {} (dual has {} vertices, expected {})",
            if bp.ok() { "pass" } else { "FAIL" },
            bp.dual_vertices,
            bp.expected_vertices
        );
    }
    match &r.search {
        SearchOutcome::NotRun => {}
        SearchOutcome::BudgetExceeded { needed, budget } => {
            say!(io.out, "search skipped: {needed} subsets exceed budget {budget}");
        }
        SearchOutcome::Completed(c) => report_search(c, io),
    }
    say!(io.out, "prediction confirmed: {}", r.prediction_confirmed());
}

fn verify(n: usize, d: usize, args: &SearchArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let started = Instant::now();
    if n < 3 || d < 1 {
        return Err(CliError::Usage("need --ngon >= 3 and --cube-dim >= 1".into()));
    }
    let base = ngon(n)?;
    let jobs = args.jobs;
    let report = verify_theorem_instance_with(&base, d, options(args)?, |plan| parallel::run(plan, jobs))?;
    report_theorem(&report, io);
    let polytope = if report.instance.hypothesis_ok() {
        polydual_core::construct::cartesian_product(&base, &cube(d)?)?
    } else {
        base
    };
    emit(CertificateFile::for_theorem(n, &polytope, &report), args.out.as_deref(), started, jobs)?;
    Ok(if !report.instance.hypothesis_ok() {
        EXIT_NEGATIVE
    } else if matches!(report.search, SearchOutcome::BudgetExceeded { .. }) {
        EXIT_BUDGET
    } else if report.prediction_confirmed() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn check_equiv(a: &Path, b: &Path, io: &mut Io<'_>) -> Result<i32, CliError> {
    let pa = polyfile::read(a)?;
    let pb = polyfile::read(b)?;
    match are_equivalent(&pa.incidence(), &pb.incidence()) {
        Some(w) => {
            say!(io.out, "equivalent");
            say!(io.out, "vertex map: {}", fmt_tuple(&w.vertex_map));
            say!(io.out, "facet map: {}", fmt_tuple(&w.facet_map));
            Ok(EXIT_OK)
        }
        None => {
            say!(io.out, "not equivalent");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn check_cert(path: &Path, io: &mut Io<'_>) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let file = CertificateFile::from_json(&text)?;
    file.check()?;
    say!(io.out, "certificate ok");
    Ok(EXIT_OK)
}

fn realization(
    path: &Path,
    trials: u64,
    bound: u64,
    seed: u64,
    budget_flag: Option<u64>,
    out: Option<&Path>,
    io: &mut Io<'_>,
) -> Result<i32, CliError> {
    let started = Instant::now();
    let p: VPolytope = polyfile::read(path)?;
    let opts = SearchOptions { budget: budget(budget_flag)?, ..SearchOptions::default() };
    match realization_search(&p, trials, bound, seed, opts)? {
        Some(w) => {
            report_search(&w.certificate, io);
            emit(CertificateFile::for_search(&w.polytope, &w.certificate), out, started, 1)?;
            Ok(EXIT_OK)
        }
        None => {
            say!(io.out, "no witness in the original realization or {trials} perturbation trial(s)");
            Ok(EXIT_NEGATIVE)
        }
    }
}
