//! Command-line front end: single-field reports, verification suites and
//! sweeps over `(F, K)` pairs.
//!
//! JSON is canonical (object keys sorted); `--table` prints a derived view.

pub mod cache;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::biquad::{BiquadField, KSUnits, RelativeExtension};
use crate::capitulation::assemble_report;
use crate::error::{Error, Result};
use crate::quadfield::{Bounds, QuadraticField, SUnitLattice, Sigma, DEFAULT_SEARCH_BOUND};
use cache::Cache;

/// Version string mixed into every cache key.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "quadcap", version, about = "Capitulation kernels for quadratic extensions of quadratic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Emit canonical JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    /// Emit a plain-text table.
    #[arg(long, global = true)]
    pub table: bool,
    /// Cache directory; overrides QUADCAP_CACHE_DIR.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,
    /// Write the document here instead of standard output.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Cap on exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BOUND)]
    pub bound: u64,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Print wall-clock time to standard error.
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Common {
    pub fn bounds(&self) -> Bounds {
        Bounds { search: self.bound, ..Bounds::default() }
    }

    pub fn format(&self) -> Format {
        if self.table {
            Format::Table
        } else {
            Format::Json
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class group of Q(√m).
    #[command(allow_negative_numbers = true)]
    Classgroup {
        #[arg(long)]
        m: i64,
    },
    /// Unit group of Q(√m), or of K = Q(√f, √adjoin).
    #[command(allow_negative_numbers = true)]
    Units {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Σ-unit group of Q(√m), or of K above the primes of Σ.
    #[command(allow_negative_numbers = true)]
    Sunits {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "inf")]
        sigma: String,
    },
    /// The Δ-module O*_{K,Σ} and its cohomology.
    #[command(allow_negative_numbers = true)]
    Cohomology {
        #[command(flatten)]
        ext: ExtArgs,
    },
    /// Capitulation report for K/F.
    #[command(allow_negative_numbers = true)]
    Capitulate {
        #[command(flatten)]
        ext: ExtArgs,
    },
    /// Randomized exactness suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 4096)]
        max_order: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Capitulation reports over F = Q(√m1), K = F(√m2) for m1, m2 in ranges.
    #[command(allow_negative_numbers = true)]
    Sweep {
        /// `a:b` or a single value.
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
        #[arg(long, default_value = "min")]
        sigma: String,
        /// Skip pairs with disc(K) above this.
        #[arg(long)]
        max_disc: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cool,
    SixTerm,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long, conflicts_with_all = ["f", "adjoin"])]
    pub m: Option<i64>,
    #[arg(long, requires = "adjoin")]
    pub f: Option<i64>,
    #[arg(long, requires = "f")]
    pub adjoin: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtArgs {
    /// F = Q(√f).
    #[arg(long)]
    pub f: i64,
    /// K = F(√adjoin).
    #[arg(long)]
    pub adjoin: i64,
    /// `inf`, `min` (ramified primes), or a comma list of rational primes
    /// optionally including `inf` and `min`.
    #[arg(long, default_value = "min")]
    pub sigma: String,
}

/// Parsed Σ: archimedean places are always included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSpec {
    pub minimal: bool,
    pub primes: Vec<u64>,
}

impl SigmaSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let mut spec = SigmaSpec { minimal: false, primes: Vec::new() };
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "inf" | "∞" => {}
                "min" => spec.minimal = true,
                t => {
                    let p: u64 = t.parse().map_err(|_| Error::domain(format!("bad Σ entry {t:?}")))?;
                    if !crate::arith::is_prime(p) {
                        return Err(Error::domain(format!("Σ entry {p} is not prime")));
                    }
                    spec.primes.push(p);
                }
            }
        }
        spec.primes.sort_unstable();
        spec.primes.dedup();
        Ok(spec)
    }

    /// Rational primes of Σ for `K/k_f`.
    pub fn resolve(&self, k: &BiquadField, f: usize) -> Vec<u64> {
        let mut p = self.primes.clone();
        if self.minimal {
            p.extend(RelativeExtension::ramified(k, f));
        }
        p.sort_unstable();
        p.dedup();
        p
    }
}

/// Runs a parsed command line and returns the rendered document.
pub fn run(cli: &Cli) -> Result<String> {
    let fmt = cli.common.format();
    let bounds = cli.common.bounds();
    let cache = Cache::from_option(cli.common.cache_dir.as_deref())?;
    match &cli.command {
        Command::Classgroup { m } => {
            let v = classgroup(*m, &bounds)?;
            Ok(render(&v, fmt, table_classgroup))
        }
        Command::Units { field } => {
            let v = match (field.m, field.f, field.adjoin) {
                (Some(m), _, _) => quad_units(m, &bounds, "inf")?,
                (None, Some(f), Some(a)) => biquad_units(a, f, &bounds, &[])?,
                _ => return Err(Error::domain("give --m, or --f with --adjoin")),
            };
            Ok(render(&v, fmt, table_generic))
        }
        Command::Sunits { field, sigma } => {
            let v = match (field.m, field.f, field.adjoin) {
                (Some(m), _, _) => quad_units(m, &bounds, sigma)?,
                (None, Some(f), Some(a)) => {
                    let spec = SigmaSpec::parse(sigma)?;
                    let k = BiquadField::with_bounds(a, f, &bounds)?;
                    let idx = k.subfield_index(f).expect("F ⊂ K");
                    biquad_units(a, f, &bounds, &spec.resolve(&k, idx))?
                }
                _ => return Err(Error::domain("give --m, or --f with --adjoin")),
            };
            Ok(render(&v, fmt, table_generic))
        }
        Command::Cohomology { ext } => {
            let e = extension(ext, &bounds)?;
            Ok(render(&cohomology(&e)?, fmt, table_generic))
        }
        Command::Capitulate { ext } => {
            let e = extension(ext, &bounds)?;
            let v = capitulation_value(&e, cache.as_ref())?;
            Ok(render(&v, fmt, table_capitulation))
        }
        Command::Verify { suite, trials, max_order, seed } => {
            let v = match suite {
                Suite::Cool => verify::cool(*trials, *max_order, *seed)?,
                Suite::SixTerm => verify::six_term(*trials, *seed)?,
            };
            Ok(render(&v, fmt, verify::table))
        }
        Command::Sweep { m1, m2, sigma, max_disc } => {
            let cfg = sweep::SweepConfig {
                m1: sweep::parse_range(m1)?,
                m2: sweep::parse_range(m2)?,
                sigma: SigmaSpec::parse(sigma)?,
                max_disc: *max_disc,
                bounds,
                workers: cli.common.workers,
            };
            let v = sweep::sweep(&cfg, cache.as_ref())?;
            Ok(render(&v, fmt, sweep::table))
        }
    }
}

/// Parses `args`, runs, writes the document; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let out = run(&cli).and_then(|doc| {
        match &cli.common.output {
            Some(path) => std::fs::write(path, doc.as_bytes())?,
            None => {
                let mut out = std::io::stdout().lock();
                if let Err(e) = writeln!(out, "{doc}") {
                    if e.kind() != std::io::ErrorKind::BrokenPipe {
                        return Err(e.into());
                    }
                }
            }
        }
        Ok(())
    });
    if cli.common.timing {
        eprintln!("{}", json!({ "elapsed_ms": start.elapsed().as_millis() as u64 }));
    }
    match out {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.class(), "message": e.to_string() }));
            exit_code(&e)
        }
    }
}

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_BOUND: i32 = 4;
pub const EXIT_INCONSISTENT: i32 = 5;
pub const EXIT_IO: i32 = 6;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Shape(_) | Error::Unsupported(_) => EXIT_DOMAIN,
        Error::BoundExceeded { .. } | Error::Precision(_) => EXIT_BOUND,
        Error::Inconsistency(_) => EXIT_INCONSISTENT,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
    }
}

/// Canonical form: sorted keys, two-space indentation.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn render(v: &Value, fmt: Format, table: fn(&Value) -> String) -> String {
    match fmt {
        Format::Json => canonical(v),
        Format::Table => table(v),
    }
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

pub fn classgroup(m: i64, bounds: &Bounds) -> Result<Value> {
    let field = QuadraticField::with_bounds(m, bounds)?;
    let cl = field.class_group();
    Ok(json!({
        "field": to_value(&field.data()),
        "class_number": cl.order(),
        "structure": cl.group().invariant_factors(),
        "structure_text": cl.group().to_string(),
        "generators": to_value(&cl.generators()),
    }))
}

fn quad_units(m: i64, bounds: &Bounds, sigma: &str) -> Result<Value> {
    let field = QuadraticField::with_bounds(m, bounds)?;
    let spec = SigmaSpec::parse(sigma)?;
    if spec.minimal {
        return Err(Error::domain("`min` needs an extension; list primes instead"));
    }
    let s = Sigma::above(&field, &spec.primes);
    let lat = SUnitLattice::compute(&field, &s)?;
    Ok(json!({
        "field": to_value(&field.data()),
        "sigma": s.labels(),
        "torsion": { "generator": to_value(&lat.torsion_generator), "order": lat.torsion_order },
        "rank": lat.rank(),
        "free_generators": to_value(&lat.free_generators),
        "free_generators_text": strings(&lat.free_generators),
        "valuation_matrix": lat.valuation_matrix.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>(),
        "structure": lat.group().invariant_factors(),
    }))
}

fn biquad_units(m1: i64, m2: i64, bounds: &Bounds, primes: &[u64]) -> Result<Value> {
    let k = BiquadField::with_bounds(m1, m2, bounds)?;
    let u = KSUnits::compute(&k, primes, bounds)?;
    Ok(json!({
        "field": to_value(&k.data()),
        "primes": primes,
        "torsion": { "generator": to_value(&u.torsion_generator), "order": u.torsion_order },
        "rank": u.rank(),
        "free_generators": to_value(&u.free_generators),
        "free_generators_text": strings(&u.free_generators),
        "index": u.index.to_string(),
        "certificates": to_value(&u.certificates),
        "structure": u.group().invariant_factors(),
    }))
}

pub fn extension(ext: &ExtArgs, bounds: &Bounds) -> Result<RelativeExtension> {
    let spec = SigmaSpec::parse(&ext.sigma)?;
    let k = BiquadField::with_bounds(ext.adjoin, ext.f, bounds)?;
    let idx = k.subfield_index(ext.f).ok_or_else(|| Error::domain("F is not a subfield of K"))?;
    let primes = spec.resolve(&k, idx);
    RelativeExtension::with_bounds(k, idx, &primes, *bounds)
}

fn cohomology(e: &RelativeExtension) -> Result<Value> {
    let m = e.s_unit_module()?;
    let seq = m.cool_sequence()?;
    let g = |x: &crate::abelian::FgAbelianGroup| x.invariant_factors();
    Ok(json!({
        "extension": to_value(&e.data()),
        "module": g(m.group()),
        "tau": m.sigma().matrix().to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>(),
        "fixed_points": g(&m.fixed_points()),
        "tate_h0": g(m.tate_h0().group()),
        "tate_h_minus1": g(m.tate_h_minus1().group()),
        "h1": g(&m.h1()),
        "cool_sequence": {
            "terms": seq.terms().iter().map(|t| g(t)).collect::<Vec<_>>(),
            "checks": to_value(&seq.checks),
            "exact": seq.exact,
        },
    }))
}

/// Cache key of a capitulation report.
pub fn report_key(e: &RelativeExtension) -> String {
    json!({
        "kind": "capitulation",
        "m1": e.field().m1(),
        "m2": e.field().m2(),
        "f": e.base().m(),
        "sigma": e.primes(),
        "bounds": to_value(e.bounds()),
        "version": ARTIFACT_VERSION,
    })
    .to_string()
}

/// The assembled report, consistent or not, through the cache.
pub fn report_value(e: &RelativeExtension, cache: Option<&Cache>) -> Result<Value> {
    let compute = || Ok(to_value(&assemble_report(e)?));
    match cache {
        Some(c) => c.get_or_compute(&report_key(e), compute),
        None => compute(),
    }
}

/// As [`report_value`], with disagreement between routes raised as an alarm.
pub fn capitulation_value(e: &RelativeExtension, cache: Option<&Cache>) -> Result<Value> {
    let v = report_value(e, cache)?;
    if v["consistent"] != Value::Bool(true) {
        return Err(Error::inconsistency(format!("routes disagree: {}", canonical(&v))));
    }
    Ok(v)
}

fn table_classgroup(v: &Value) -> String {
    format!(
        "D = {}, h = {}, structure {}",
        v["field"]["discriminant"], v["class_number"], v["structure_text"].as_str().unwrap_or("?")
    )
}

fn table_capitulation(v: &Value) -> String {
    let ext = &v["extension"];
    let lac = &v["lac_terms"];
    let list = |x: &Value| x.as_array().map(|a| a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(",")).unwrap_or_default();
    format!(
        "K = Q(√{}, √{})  F = Q(√{})  Σ = {}\nCl_Σ(F)     [{}]\nKer j (H^1) [{}]\nKer j (fin) [{}]\ndirect      |Ker j| = {}\nlac terms   [{}] [{}] [{}] [{}] exact={}\nconsistent  {}",
        ext["m1"],
        ext["m2"],
        ext["f"],
        list(&ext["sigma_f"]),
        list(&v["cl_sigma_f"]),
        list(&v["ker_j_h1"]),
        list(&v["ker_j_fin"]),
        v["ker_j_direct"]["order"],
        list(&lac["fixed_squares"]),
        list(&lac["pm1"]),
        list(&lac["ker_j"]),
        list(&lac["psi_quotient"]),
        lac["exact"],
        v["consistent"],
    )
}

/// `key: value` lines for the top-level scalar and list fields.
fn table_generic(v: &Value) -> String {
    let mut out = Vec::new();
    if let Some(obj) = v.as_object() {
        for (k, x) in obj {
            let s = match x {
                Value::Object(_) => continue,
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push(format!("{k:<20} {s}"));
        }
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("quadcap").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn sigma_parsing() {
        assert_eq!(SigmaSpec::parse("inf").unwrap(), SigmaSpec { minimal: false, primes: vec![] });
        assert_eq!(SigmaSpec::parse("inf,5,2,5").unwrap().primes, vec![2, 5]);
        assert!(SigmaSpec::parse("min").unwrap().minimal);
        assert!(SigmaSpec::parse("4").is_err());
        assert!(SigmaSpec::parse("x").is_err());
    }

    #[test]
    fn classgroup_table() {
        assert_eq!(run_args(&["classgroup", "--m", "-23", "--table"]).unwrap(), "D = -23, h = 3, structure Z/3");
    }

    #[test]
    fn capitulate_flagship() {
        let doc = run_args(&["capitulate", "--f", "-5", "--adjoin", "-1", "--sigma", "inf"]).unwrap();
        let v: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["ker_j_h1"], json!(["2"]));
        assert_eq!(v["consistent"], json!(true));
    }

    #[test]
    fn error_classes() {
        let e = run_args(&["capitulate", "--f", "-1", "--adjoin", "2", "--sigma", "inf"]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_DOMAIN);
        let e = run_args(&["classgroup", "--m", "4"]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_DOMAIN);
        assert_eq!(main_with_args(["quadcap", "classgroup"]), EXIT_USAGE);
        assert_eq!(main_with_args(["quadcap", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn cached_output_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let args = ["capitulate", "--f", "-6", "--adjoin", "2", "--cache-dir", d];
        let a = run_args(&args).unwrap();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let b = run_args(&args).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, run_args(&args[..5]).unwrap());
    }
}
