//! Capitulation reports over ranges of `(m1, m2)`, with `F = Q(√m1)` and
//! `K = F(√m2)`.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::cache::Cache;
use super::{report_value, to_value, SigmaSpec};
use crate::arith::is_squarefree;
use crate::biquad::{BiquadField, RelativeExtension};
use crate::error::{Error, Result};
use crate::quadfield::Bounds;

/// Inclusive integer range; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl Range {
    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// `a:b` or `a`.
pub fn parse_range(s: &str) -> Result<Range> {
    let bad = || Error::domain(format!("bad range {s:?}, expected a:b or a"));
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once(':') {
        Some((a, b)) => Ok(Range { lo: num(a)?, hi: num(b)? }),
        None => {
            let v = num(s)?;
            Ok(Range { lo: v, hi: v })
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub m1: Range,
    pub m2: Range,
    pub sigma: SigmaSpec,
    pub max_disc: Option<u64>,
    pub bounds: Bounds,
    pub workers: usize,
}

enum Item {
    Report(Value),
    Skipped(String),
    Failed(String),
}

fn admissible(m: i64) -> bool {
    m != 0 && m != 1 && is_squarefree(m)
}

fn run_pair(m1: i64, m2: i64, cfg: &SweepConfig, cache: Option<&Cache>) -> Item {
    if !admissible(m1) {
        return Item::Skipped(format!("m1 = {m1} is not a squarefree integer other than 0, 1"));
    }
    if !admissible(m2) {
        return Item::Skipped(format!("m2 = {m2} is not a squarefree integer other than 0, 1"));
    }
    if m1 == m2 {
        return Item::Skipped("m1 = m2 gives no quadratic extension".into());
    }
    let outcome = (|| {
        let k = BiquadField::with_bounds(m2, m1, &cfg.bounds)?;
        if let Some(max) = cfg.max_disc {
            if k.discriminant() > &max.into() {
                return Err(Error::BoundExceeded { what: format!("disc(K) = {}", k.discriminant()), bound: max });
            }
        }
        let idx = k.subfield_index(m1).expect("F ⊂ K");
        let primes = cfg.sigma.resolve(&k, idx);
        let e = RelativeExtension::with_bounds(k, idx, &primes, cfg.bounds)?;
        report_value(&e, cache)
    })();
    match outcome {
        Ok(v) => Item::Report(v),
        Err(e @ (Error::BoundExceeded { .. } | Error::Domain(_) | Error::Precision(_))) => Item::Skipped(e.to_string()),
        Err(e) => Item::Failed(e.to_string()),
    }
}

/// Runs every pair, concurrently, and aggregates in `(m1, m2)` order.
pub fn sweep(cfg: &SweepConfig, cache: Option<&Cache>) -> Result<Value> {
    let pairs: Vec<(i64, i64)> = cfg.m1.values().flat_map(|a| cfg.m2.values().map(move |b| (a, b))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let items: Vec<Item> = pool.install(|| pairs.par_iter().map(|&(a, b)| run_pair(a, b, cfg, cache)).collect());

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for (&(m1, m2), item) in pairs.iter().zip(items) {
        match item {
            Item::Report(v) => reports.push(v),
            Item::Skipped(reason) => skipped.push(json!({ "m1": m1, "m2": m2, "reason": reason })),
            Item::Failed(error) => failures.push(json!({ "m1": m1, "m2": m2, "error": error })),
        }
    }
    let all = |f: &dyn Fn(&Value) -> bool| reports.iter().all(f);
    let consistent = reports.iter().filter(|r| r["consistent"] == json!(true)).count();
    Ok(json!({
        "config": {
            "m1": [cfg.m1.lo, cfg.m1.hi],
            "m2": [cfg.m2.lo, cfg.m2.hi],
            "sigma": { "minimal": cfg.sigma.minimal, "primes": cfg.sigma.primes },
            "max_disc": cfg.max_disc,
            "bounds": to_value(&cfg.bounds),
        },
        "counts": {
            "reports": reports.len(),
            "consistent": consistent,
            "skipped": skipped.len(),
            "failures": failures.len(),
        },
        "all_consistent": failures.is_empty() && consistent == reports.len(),
        "lac_exact_all": all(&|r| r["lac_terms"]["exact"] == json!(true)),
        "order_identity_all": all(&|r| r["order_identity"] == json!(true)),
        "fin_agreement_all": all(&|r| r["ker_j_h1"] == r["ker_j_fin"]),
        "reports": reports,
        "skipped": skipped,
        "failures": failures,
    }))
}

pub fn table(v: &Value) -> String {
    let list = |x: &Value| {
        let parts: Vec<&str> = x.as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(",")
        }
    };
    let mut out = vec![format!("{:>6} {:>6} {:>10} {:>8} {:>8} {:>6} {:>10}", "m1", "m2", "Cl_S(F)", "Ker j", "direct", "exact", "consistent")];
    let cell = |x: &Value| match x {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    for r in v["reports"].as_array().into_iter().flatten() {
        out.push(format!(
            "{:>6} {:>6} {:>10} {:>8} {:>8} {:>6} {:>10}",
            cell(&r["extension"]["f"]),
            cell(&r["extension"]["m1"]),
            list(&r["cl_sigma_f"]),
            list(&r["ker_j_h1"]),
            cell(&r["ker_j_direct"]["order"]),
            cell(&r["lac_terms"]["exact"]),
            cell(&r["consistent"]),
        ));
    }
    for s in v["skipped"].as_array().into_iter().flatten() {
        out.push(format!("{:>6} {:>6} skipped: {}", cell(&s["m1"]), cell(&s["m2"]), cell(&s["reason"])));
    }
    for s in v["failures"].as_array().into_iter().flatten() {
        out.push(format!("{:>6} {:>6} FAILED: {}", cell(&s["m1"]), cell(&s["m2"]), cell(&s["error"])));
    }
    let c = &v["counts"];
    out.push(format!(
        "{} reports, {} consistent, {} skipped, {} failed",
        c["reports"], c["consistent"], c["skipped"], c["failures"]
    ));
    out.join("\n")
}
