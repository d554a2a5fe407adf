//! Command-line front end: tables, verification suites and the disk cache.
//!
//! Every command writes one record per line (JSON or CSV). Failures are reported as a record
//! `{"error": kind, "message": text}` and a nonzero exit status.

pub mod cache;
pub mod output;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::anderson_thakur::{j_tuples, JTuple};
use crate::bernoulli::BernoulliCarlitz;
use crate::bipoly::BiPoly;
use crate::carlitz::{Index, DEFAULT_MAX_I};
use crate::error::{Error, Result};
use crate::finite_zeta::{
    fmzv_direct, fmzv_via_cmpl, fmzv_via_mpbcn, fmzv_via_mpbcn_ones, irreducibles, PrimeModulus, Residue,
};
use crate::fq::FqField;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::text::{parse_bipoly, parse_poly, parse_ratfunc};
use cache::DiskCache;
use output::{Emitter, Format, Record};

/// Largest n accepted by the table commands.
pub const MAX_N: u64 = 4096;
/// Largest number of monic polynomials of one degree the fmzv command will enumerate.
pub const MAX_MONIC: u64 = 1 << 20;

#[derive(Parser, Debug)]
#[command(name = "carlitz", version, about = "Exact Carlitz-module tables and identity checks over F_q[T]")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Directory for cached values (disabled when absent).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FieldArgs {
    /// Characteristic p.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree e, q = p^e.
    #[arg(long)]
    pub e: Option<u32>,
    /// Monic irreducible modulus for F_q over F_p, as coefficients from x^0 up to x^e, e.g. `1,1,1`.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RangeArgs {
    /// A single n.
    #[arg(long, conflicts_with = "max_n")]
    pub n: Option<u64>,
    /// Every n from 0 to this bound.
    #[arg(long)]
    pub max_n: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bernoulli-Carlitz numbers BC_n.
    Bc {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// `closed`, `series` or both (comma separated).
        #[arg(long, default_value = "closed")]
        method: String,
        /// Truncation order of the generating series (defaults to the largest n).
        #[arg(long)]
        order: Option<u64>,
    },
    /// Stirling-Carlitz numbers {n brace m}: the row n (`--n`) or every pair up to `--max-n`.
    Stirling {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Multi-poly-Bernoulli-Carlitz numbers BC^{s,j}_n.
    Mpbcn {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Index s, e.g. `2,1`.
        #[arg(long)]
        s: String,
        /// Tuple j in J_s, e.g. `0,0` (all of J_s when absent).
        #[arg(long)]
        j: Option<String>,
        #[arg(long, default_value = "closed")]
        method: String,
        #[arg(long)]
        order: Option<u64>,
    },
    /// Anderson-Thakur polynomials H_n, or the coefficients u_ij of H_{s_i - 1} with `--s`.
    At {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        s: Option<String>,
    },
    /// Finite multiple zeta values modulo monic irreducibles.
    Fmzv {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        s: String,
        /// A single monic irreducible, e.g. `T^2+1`.
        #[arg(long, conflicts_with = "max_prime_deg")]
        prime: Option<String>,
        /// Every monic irreducible of degree 1 up to this bound.
        #[arg(long)]
        max_prime_deg: Option<usize>,
        /// Number of leading ones prepended to s.
        #[arg(long, default_value_t = 0)]
        d_ones: usize,
        /// Any of `direct`, `cmpl`, `mpbcn`, `ones` (comma separated).
        #[arg(long, default_value = "direct,cmpl,mpbcn")]
        method: String,
    },
    /// Runs identity-verification suites.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest deg ℘ in the fmzv suite.
        #[arg(long)]
        max_prime_deg: Option<usize>,
    },
    /// Lists or clears the disk cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Inspect,
    Clear,
}

fn record(v: Value) -> Record {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("records are objects"),
    }
}

fn error_record(e: &Error) -> Record {
    record(json!({"error": e.kind(), "message": e.to_string()}))
}

impl FieldArgs {
    fn field(&self) -> Result<FqField> {
        let p = self.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
        let e = self.e.unwrap_or(1);
        let modulus = match &self.modulus {
            None => None,
            Some(text) => Some(
                text.split(',')
                    .map(|c| {
                        c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad modulus coefficient `{c}`")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        FqField::new(p, e, modulus.as_deref())
    }
}

impl RangeArgs {
    fn values(&self) -> Result<Vec<u64>> {
        let v: Vec<u64> = match (self.n, self.max_n) {
            (Some(n), _) => vec![n],
            (None, Some(m)) => (0..=m).collect(),
            (None, None) => return Err(Error::Parse("one of --n or --max-n is required".into())),
        };
        if let Some(&top) = v.last() {
            if top > MAX_N {
                return Err(Error::LimitExceeded(format!("n = {top} is above {MAX_N}")));
            }
        }
        Ok(v)
    }
}

/// Rejects n whose computation would need D_i or L_i beyond the configured subscript bound.
fn check_reach(field: &FqField, n: u64) -> Result<()> {
    let q = u64::from(field.q());
    let needed = (0..).take_while(|&i| q.saturating_pow(i) <= n + 1).last().unwrap_or(0);
    if needed >= DEFAULT_MAX_I {
        return Err(Error::LimitExceeded(format!("n = {n} needs D_i beyond i = {DEFAULT_MAX_I}")));
    }
    Ok(())
}

fn methods(text: &str, allowed: &[&str]) -> Result<Vec<String>> {
    let list: Vec<String> = text.split(',').map(|m| m.trim().to_string()).filter(|m| !m.is_empty()).collect();
    if list.is_empty() {
        return Err(Error::Parse("--method is empty".into()));
    }
    for m in &list {
        if !allowed.contains(&m.as_str()) {
            return Err(Error::Parse(format!("unknown method `{m}`; expected one of {}", allowed.join(", "))));
        }
    }
    Ok(list)
}

fn index_json(s: &Index) -> Value {
    json!(s.parts())
}

fn j_json(j: &JTuple) -> Value {
    json!(j.parts())
}

struct Ctx<'a> {
    cache: Option<DiskCache>,
    field: &'a FqField,
}

impl Ctx<'_> {
    fn rat(&self, kind: &str, params: &str, compute: impl FnOnce() -> Result<RatFunc>) -> Result<RatFunc> {
        match &self.cache {
            None => compute(),
            Some(c) => c.get_or_compute(kind, params, |t| parse_ratfunc(self.field, t), RatFunc::to_string, compute),
        }
    }

    fn bipoly(&self, kind: &str, params: &str, compute: impl FnOnce() -> Result<BiPoly>) -> Result<BiPoly> {
        match &self.cache {
            None => compute(),
            Some(c) => c.get_or_compute(kind, params, |t| parse_bipoly(self.field, t), BiPoly::to_string, compute),
        }
    }

    fn residue(&self, params: &str, p: &PrimeModulus, compute: impl FnOnce() -> Result<Residue>) -> Result<Residue> {
        match &self.cache {
            None => compute(),
            Some(c) => c.get_or_compute(
                "fmzv",
                params,
                |t| {
                    let v = parse_poly(self.field, t)?;
                    if v.degree().is_some_and(|d| d >= p.degree()) {
                        return Err(Error::Parse(format!("`{t}` is not reduced modulo {p}")));
                    }
                    Ok(p.residue(&v))
                },
                Residue::to_string,
                compute,
            ),
        }
    }
}

/// Parses arguments, runs the command and writes records to `out`. Returns the exit status.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, out),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rec = record(json!({"error": "usage", "message": e.to_string().trim_end()}));
            let _ = Emitter::new(Format::Json, out).emit(rec);
            2
        }
    }
}

/// Runs a parsed configuration.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> i32 {
    let mut em = Emitter::new(config.format, out);
    let status = match execute(config, &mut em) {
        Ok(status) => status,
        Err(e) => {
            let _ = em.emit(error_record(&e));
            1
        }
    };
    let _ = em.flush();
    status
}

fn io_err(e: std::io::Error) -> Error {
    Error::Precondition(format!("output failed: {e}"))
}

fn execute(config: &RunConfig, em: &mut Emitter<'_>) -> Result<i32> {
    let open_cache = |field: &FqField| -> Result<Option<DiskCache>> {
        config
            .cache_dir
            .as_ref()
            .map(|d| DiskCache::open(d, field).map_err(|e| Error::Precondition(format!("cache directory: {e}"))))
            .transpose()
    };
    match &config.command {
        Command::Bc { field, range, method, order } => {
            let f = field.field()?;
            let ns = range.values()?;
            let methods = methods(method, &["closed", "series"])?;
            let top = *ns.last().expect("nonempty range");
            check_reach(&f, top)?;
            let ctx = Ctx { cache: open_cache(&f)?, field: &f };
            let b = BernoulliCarlitz::new(&f);
            let series = if methods.iter().any(|m| m == "series") {
                let ord = order.unwrap_or(top);
                if ord < top {
                    return Err(Error::BeyondTruncation { requested: top as usize, order: ord as usize });
                }
                check_reach(&f, ord)?;
                Some(b.bc_series_oracle(ord as usize))
            } else {
                None
            };
            for n in ns {
                let mut values = Vec::new();
                for m in &methods {
                    let v = if m == "closed" {
                        ctx.rat("bc", &format!("n={n}"), || Ok(b.bc(n)))?
                    } else {
                        series.as_ref().expect("series computed")[n as usize].clone()
                    };
                    values.push(v);
                }
                let mut rec = record(json!({"n": n, "value": values[0].to_string()}));
                if values.len() > 1 {
                    rec.insert("agree".into(), json!(values.iter().all(|v| v == &values[0])));
                }
                em.emit(rec).map_err(io_err)?;
            }
            Ok(0)
        }
        Command::Stirling { field, range } => {
            let f = field.field()?;
            let ns = range.values()?;
            let top = *ns.last().expect("nonempty range");
            check_reach(&f, top)?;
            let ctx = Ctx { cache: open_cache(&f)?, field: &f };
            let b = BernoulliCarlitz::new(&f);
            let single = range.n.is_some();
            for &n in &ns {
                let ms: Vec<u64> = if single { (0..=n).collect() } else { (0..=top).collect() };
                for m in ms {
                    let v = ctx.rat("stirling", &format!("n={n} m={m}"), || Ok(b.stirling().get(n, m)))?;
                    em.emit(record(json!({"n": n, "m": m, "value": v.to_string()}))).map_err(io_err)?;
                }
            }
            Ok(0)
        }
        Command::Mpbcn { field, range, s, j, method, order } => {
            let f = field.field()?;
            let ns = range.values()?;
            let s: Index = s.parse()?;
            let methods = methods(method, &["closed", "series"])?;
            let top = *ns.last().expect("nonempty range");
            check_reach(&f, top + 1)?;
            let ctx = Ctx { cache: open_cache(&f)?, field: &f };
            let b = BernoulliCarlitz::new(&f);
            let data = b.index_data(&s)?;
            let js = match j {
                Some(text) => {
                    let j: JTuple = text.parse()?;
                    data.check(&j)?;
                    vec![j]
                }
                None => j_tuples(&data),
            };
            let ord = order.unwrap_or(top);
            if methods.iter().any(|m| m == "series") {
                if ord < top {
                    return Err(Error::BeyondTruncation { requested: top as usize, order: ord as usize });
                }
                check_reach(&f, ord + 1)?;
            }
            for j in js {
                let series = if methods.iter().any(|m| m == "series") {
                    Some(b.mpbcn_series_oracle(&s, &j, ord as usize)?)
                } else {
                    None
                };
                for &n in &ns {
                    let mut values = Vec::new();
                    for m in &methods {
                        let v = if m == "closed" {
                            ctx.rat("mpbcn", &format!("s={s} j={j} n={n}"), || b.mpbcn(&s, &j, n))?
                        } else {
                            series.as_ref().expect("series computed")[n as usize].clone()
                        };
                        values.push(v);
                    }
                    let mut rec =
                        record(json!({"s": index_json(&s), "j": j_json(&j), "n": n, "value": values[0].to_string()}));
                    if values.len() > 1 {
                        rec.insert("agree".into(), json!(values.iter().all(|v| v == &values[0])));
                    }
                    em.emit(rec).map_err(io_err)?;
                }
            }
            Ok(0)
        }
        Command::At { field, range, s } => {
            let f = field.field()?;
            let b = BernoulliCarlitz::new(&f);
            if let Some(s) = s {
                let s: Index = s.parse()?;
                check_reach(&f, u64::from(*s.parts().iter().max().expect("nonempty")))?;
                let data = b.index_data(&s)?;
                let m = data.m();
                for (i, &si) in s.parts().iter().enumerate() {
                    let u: Vec<String> = data.coefficients(i).iter().map(Poly::to_string).collect();
                    em.emit(record(json!({"i": i + 1, "s_i": si, "m_i": m[i], "u": u}))).map_err(io_err)?;
                }
                return Ok(0);
            }
            let ns = range.values()?;
            let top = *ns.last().expect("nonempty range");
            check_reach(&f, top)?;
            let ctx = Ctx { cache: open_cache(&f)?, field: &f };
            for n in ns {
                let h = ctx.bipoly("at", &format!("n={n}"), || b.at().h(n as usize))?;
                em.emit(record(json!({"n": n, "value": h.to_string()}))).map_err(io_err)?;
            }
            Ok(0)
        }
        Command::Fmzv { field, s, prime, max_prime_deg, d_ones, method } => {
            let f = field.field()?;
            let base: Index = s.parse()?;
            let full = base.with_leading_ones(*d_ones);
            let methods = methods(method, &["direct", "cmpl", "mpbcn", "ones"])?;
            let primes = match (prime, max_prime_deg) {
                (Some(text), _) => vec![PrimeModulus::new(parse_poly(&f, text)?)?],
                (None, Some(d)) => {
                    if u64::from(f.q()).checked_pow(*d as u32).is_none_or(|c| c > MAX_MONIC) {
                        return Err(Error::LimitExceeded(format!("q^{d} monic polynomials per degree")));
                    }
                    (1..=*d).flat_map(|k| irreducibles(&f, k)).collect()
                }
                (None, None) => return Err(Error::Parse("one of --prime or --max-prime-deg is required".into())),
            };
            let ctx = Ctx { cache: open_cache(&f)?, field: &f };
            let b = BernoulliCarlitz::new(&f);
            for p in &primes {
                check_reach(&f, u64::from(f.q()).pow(p.degree() as u32))?;
                let mut results: Vec<(String, Result<Residue>)> = Vec::new();
                for m in &methods {
                    let params = format!("s={full} prime={p} method={m}");
                    let v = ctx.residue(&params, p, || match m.as_str() {
                        "direct" => fmzv_direct(&full, p),
                        "cmpl" => fmzv_via_cmpl(&b, &full, p),
                        "mpbcn" => fmzv_via_mpbcn(&b, &full, p),
                        _ => fmzv_via_mpbcn_ones(&b, *d_ones, &base, p),
                    });
                    results.push((m.clone(), v));
                }
                let values: Vec<&Residue> = results.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
                let agree = values.windows(2).all(|w| w[0] == w[1]);
                for (m, r) in results {
                    let rec = match r {
                        Ok(v) => {
                            json!({"s": index_json(&full), "prime": p.to_string(), "method": m, "value": v.to_string(), "agree": agree})
                        }
                        Err(e @ Error::Hypothesis { .. }) => json!({
                            "s": index_json(&full), "prime": p.to_string(), "method": m,
                            "value": null, "agree": null, "skipped": e.to_string()
                        }),
                        Err(e) => return Err(e),
                    };
                    em.emit(record(rec)).map_err(io_err)?;
                }
            }
            Ok(0)
        }
        Command::Verify { field, suite, max_prime_deg } => run_verify(field, suite, *max_prime_deg, em),
        Command::Cache { action } => {
            let dir = config.cache_dir.as_ref().ok_or_else(|| Error::Parse("--cache-dir is required".into()))?;
            let fail = |e: std::io::Error| Error::Precondition(format!("cache directory: {e}"));
            match action {
                CacheAction::Inspect => {
                    for e in cache::entries(dir).map_err(fail)? {
                        em.emit(record(json!({"file": e.file, "key": e.key, "value": e.value}))).map_err(io_err)?;
                    }
                }
                CacheAction::Clear => {
                    let removed = cache::clear(dir).map_err(fail)?;
                    em.emit(record(json!({"removed": removed}))).map_err(io_err)?;
                }
            }
            Ok(0)
        }
    }
}

fn run_verify(field: &FieldArgs, suite: &str, max_prime_deg: Option<usize>, em: &mut Emitter<'_>) -> Result<i32> {
    let suites: Vec<&str> = if suite == "all" {
        verify::SUITES.to_vec()
    } else if verify::SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Error::Parse(format!(
            "unknown suite `{suite}`; expected all or one of {}",
            verify::SUITES.join(", ")
        )));
    };
    let chosen = if field.p.is_some() { Some(field.field()?) } else { None };
    let mut jobs: Vec<(&str, FqField)> = Vec::new();
    for &s in &suites {
        match &chosen {
            Some(f) => jobs.push((s, f.clone())),
            None => {
                for (p, e) in verify::default_fields(s) {
                    jobs.push((s, FqField::new(p, e, None)?));
                }
            }
        }
    }
    // suites run in parallel; records are emitted in job order
    let reports: Vec<Vec<verify::CheckReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            jobs.iter().map(|(s, f)| scope.spawn(move || verify::run_suite(s, f, max_prime_deg))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    });
    let mut checks = 0;
    let mut failures = 0;
    for r in reports.into_iter().flatten() {
        checks += 1;
        if r.failures > 0 {
            failures += 1;
        }
        em.emit(record(json!({
            "suite": r.suite,
            "q": r.q,
            "check": r.check,
            "cases": r.cases,
            "skipped": r.skipped,
            "failures": r.failures,
            "status": if r.failures == 0 { "pass" } else { "fail" },
            "counterexample": r.counterexample,
        })))
        .map_err(io_err)?;
    }
    em.emit(record(json!({"summary": true, "checks": checks, "failures": failures}))).map_err(io_err)?;
    Ok(if failures == 0 { 0 } else { 1 })
}
