//! Identity-verification suites behind `carlitz verify`.
//!
//! Every suite runs over a fixed grid for each of its default fields (or for the single field
//! given on the command line) and reports one record per check.

use std::sync::Arc;

use crate::anderson_thakur::{at_polynomials, j_tuples, round_trip_holds};
use crate::anderson_thakur::{AtTable, JTuple};
use crate::bernoulli::BernoulliCarlitz;
use crate::carlitz::{CarlitzCache, Index};
use crate::error::Error;
use crate::finite_zeta::{
    enumerate_monic, fmzv_direct, fmzv_via_cmpl, fmzv_via_mpbcn, fmzv_via_mpbcn_ones, irreducibles, reduce_mod,
};
use crate::fq::FqField;
use crate::ratfunc::RatFunc;

pub const SUITES: [&str; 8] = ["stirling", "bc", "mpbcn", "vanishing", "special-ones", "recursion", "fmzv", "at"];

/// Outcome of one check over its grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub suite: &'static str,
    pub q: u32,
    pub check: &'static str,
    pub cases: u64,
    pub skipped: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

struct Tally {
    report: CheckReport,
}

impl Tally {
    fn new(suite: &'static str, q: u32, check: &'static str) -> Self {
        Tally { report: CheckReport { suite, q, check, cases: 0, skipped: 0, failures: 0, counterexample: None } }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.counterexample.is_none() {
                self.report.counterexample = Some(what());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    fn skip(&mut self) {
        self.report.skipped += 1;
    }

    fn done(self) -> CheckReport {
        self.report
    }
}

/// Fields (p, e) a suite runs over when none is given.
pub fn default_fields(suite: &str) -> Vec<(u32, u32)> {
    match suite {
        "stirling" | "special-ones" | "recursion" | "fmzv" => vec![(2, 1), (3, 1)],
        "bc" | "at" => vec![(2, 1), (3, 1), (5, 1)],
        "mpbcn" | "vanishing" => vec![(2, 1), (3, 1), (2, 2)],
        _ => Vec::new(),
    }
}

/// Largest deg ℘ for the fmzv suite.
pub fn default_prime_degree(q: u32) -> usize {
    match q {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

/// Runs one suite over one field.
pub fn run_suite(suite: &str, field: &FqField, max_prime_deg: Option<usize>) -> Vec<CheckReport> {
    let b = BernoulliCarlitz::new(field);
    match suite {
        "stirling" => stirling(&b),
        "bc" => bc(&b),
        "mpbcn" => mpbcn(&b),
        "vanishing" => vanishing(&b),
        "special-ones" => special_ones(&b),
        "recursion" => recursion(&b),
        "fmzv" => fmzv(&b, max_prime_deg.unwrap_or_else(|| default_prime_degree(field.q()))),
        "at" => anderson_thakur(&b),
        _ => Vec::new(),
    }
}

fn cube(b: &BernoulliCarlitz) -> u64 {
    b.carlitz().q().pow(3)
}

fn stirling(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let st = b.stirling();
    let top = cube(b);
    let mut basic = Tally::new("stirling", q, "basic-values");
    let mut lambda = Tally::new("stirling", q, "digit-sum-vanishing");
    let mut kron = Tally::new("stirling", q, "q-power-kronecker");
    for n in 0..=top {
        for m in 0..=top {
            let v = st.get(n, m);
            if n == m {
                basic.check(v.is_one(), || format!("{{{n} brace {n}}} = {v}"));
            } else if n < m || m == 0 {
                basic.check(v.is_zero(), || format!("{{{n} brace {m}}} = {v}"));
            }
            if st.digit_sum(n) > st.digit_sum(m) {
                lambda.check(v.is_zero(), || format!("{{{n} brace {m}}} = {v}"));
            }
        }
    }
    let qq = u64::from(q);
    let powers: Vec<u32> = (0..).take_while(|&k| qq.pow(k) - 1 <= top).collect();
    for &m in &powers {
        for &i in powers.iter().filter(|&&i| i <= m) {
            let v = st.get(qq.pow(m) - 1, qq.pow(i) - 1);
            let ok = if m == i { v.is_one() } else { v.is_zero() };
            kron.check(ok, || format!("{{q^{m}-1 brace q^{i}-1}} = {v}"));
        }
    }
    vec![basic.done(), lambda.done(), kron.done()]
}

fn bc(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let c = b.carlitz();
    let top = cube(b);
    let mut routes = Tally::new("bc", q, "closed-vs-series");
    for (n, v) in b.bc_series_oracle(top as usize).iter().enumerate() {
        let closed = b.bc(n as u64);
        routes.check(&closed == v, || format!("n={n}: closed {closed}, series {v}"));
    }
    let mut powers = Tally::new("bc", q, "q-power-values");
    let mut i = 0u32;
    while c.q().pow(i) - 1 <= top {
        let n = c.q().pow(i) - 1;
        let v = b.bc(n);
        let l = c.l_rat(i);
        let mut explicit = &(&c.d_rat(i) / &l) / &l;
        if i % 2 == 1 {
            explicit = -explicit;
        }
        powers.check(v == &c.factorial_rat(n) / &l && v == explicit, || format!("BC_{n} = {v}"));
        i += 1;
    }
    vec![routes.done(), powers.done()]
}

fn mpbcn(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let top = cube(b);
    let mut routes = Tally::new("mpbcn", q, "closed-vs-series");
    let mut depth_one = Tally::new("mpbcn", q, "depth-one-is-bc");
    for s in Index::enumerate(3, 5) {
        let data = match b.index_data(&s) {
            Ok(d) => d,
            Err(e) => {
                routes.fail(format!("s=({s}): {e}"));
                continue;
            }
        };
        for j in j_tuples(&data) {
            let oracle = match b.mpbcn_series_oracle(&s, &j, top as usize) {
                Ok(o) => o,
                Err(e) => {
                    routes.fail(format!("s=({s}) j=({j}): {e}"));
                    continue;
                }
            };
            for (n, v) in oracle.iter().enumerate() {
                match b.mpbcn(&s, &j, n as u64) {
                    Ok(closed) => {
                        routes.check(&closed == v, || format!("s=({s}) j=({j}) n={n}: closed {closed}, series {v}"))
                    }
                    Err(e) => routes.fail(format!("s=({s}) j=({j}) n={n}: {e}")),
                }
            }
        }
    }
    let s1 = Index::new(vec![1]).expect("valid index");
    for n in 0..=top {
        let v = b.mpbcn(&s1, &JTuple::zeros(1), n);
        depth_one.check(v.as_ref() == Ok(&b.bc(n)), || format!("n={n}: {v:?}"));
    }
    vec![routes.done(), depth_one.done()]
}

fn vanishing(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let qm1 = u64::from(q) - 1;
    let top = cube(b);
    let mut plain = Tally::new("vanishing", q, "bc");
    let mut multi = Tally::new("vanishing", q, "mpbcn");
    for n in (0..=top).filter(|n| n % qm1 != 0) {
        let v = b.bc(n);
        plain.check(v.is_zero(), || format!("BC_{n} = {v}"));
    }
    for s in Index::enumerate(3, 5) {
        let Ok(data) = b.index_data(&s) else {
            multi.fail(format!("s=({s}): no index data"));
            continue;
        };
        for j in j_tuples(&data) {
            for n in (0..=top).filter(|n| n % qm1 != 0) {
                let v = b.mpbcn(&s, &j, n);
                multi.check(v.as_ref().is_ok_and(RatFunc::is_zero), || format!("s=({s}) j=({j}) n={n}: {v:?}"));
            }
        }
    }
    vec![plain.done(), multi.done()]
}

fn special_ones(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let qq = u64::from(q);
    let mut t = Tally::new("special-ones", q, "ones-vs-closed");
    for r in 1..=3usize {
        let s = Index::ones(r).expect("valid index");
        for n in qq.pow(r as u32 - 1) - 1..=cube(b) {
            let lhs = b.mpbcn_special_ones(r, n);
            let rhs = b.mpbcn(&s, &JTuple::zeros(r), n);
            t.check(lhs.is_ok() && lhs == rhs, || format!("r={r} n={n}: {lhs:?} vs {rhs:?}"));
        }
    }
    vec![t.done()]
}

fn recursion(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let mut t = Tally::new("recursion", q, "recursion-at-q-powers");
    for s in Index::enumerate(3, 4).into_iter().filter(|s| s.depth() >= 2) {
        let Ok(data) = b.index_data(&s) else {
            t.fail(format!("s=({s}): no index data"));
            continue;
        };
        for j in j_tuples(&data) {
            for m in (s.depth() as u32 - 1)..=4 {
                match b.mpbcn_recursion_check(&s, &j, m) {
                    Ok(w) => t.check(w.holds, || format!("s=({s}) j=({j}) m={m}: {} vs {}", w.lhs, w.rhs)),
                    Err(e) => t.fail(format!("s=({s}) j=({j}) m={m}: {e}")),
                }
            }
        }
    }
    vec![t.done()]
}

fn fmzv(b: &BernoulliCarlitz, max_deg: usize) -> Vec<CheckReport> {
    let f = b.field();
    let q = f.q();
    let mut blocks = Tally::new("fmzv", q, "degree-blocks");
    let mut triple = Tally::new("fmzv", q, "direct-cmpl-mpbcn");
    let mut ones = Tally::new("fmzv", q, "leading-ones");
    for d in 1..=max_deg {
        for p in irreducibles(f, d) {
            for i in 0..d {
                let sum = enumerate_monic(f, i)
                    .iter()
                    .map(|a| p.residue(a).inv())
                    .try_fold(p.zero(), |acc, x| x.map(|x| &acc + &x));
                let expected = b.carlitz().l_rat(i as u32).inv().and_then(|l| reduce_mod(&l, &p));
                blocks.check(sum.is_ok() && sum == expected, || format!("p={p} i={i}"));
            }
            for s in Index::enumerate(3, 5) {
                let direct = fmzv_direct(&s, &p);
                let cmpl = fmzv_via_cmpl(b, &s, &p);
                if matches!(cmpl, Err(Error::Hypothesis { .. })) {
                    triple.skip();
                    ones.skip();
                    continue;
                }
                let mpbcn = fmzv_via_mpbcn(b, &s, &p);
                triple.check(direct.is_ok() && direct == cmpl && cmpl == mpbcn, || {
                    format!("p={p} s=({s}): direct {direct:?}, cmpl {cmpl:?}, mpbcn {mpbcn:?}")
                });
                for dd in 0..=2 {
                    let lhs = fmzv_via_mpbcn_ones(b, dd, &s, &p);
                    let rhs = fmzv_direct(&s.with_leading_ones(dd), &p);
                    ones.check(lhs.is_ok() && lhs == rhs, || format!("p={p} s=({s}) dd={dd}: {lhs:?} vs {rhs:?}"));
                }
            }
        }
    }
    vec![blocks.done(), triple.done(), ones.done()]
}

fn anderson_thakur(b: &BernoulliCarlitz) -> Vec<CheckReport> {
    let q = b.field().q();
    let qs = q as usize;
    let c: &Arc<CarlitzCache> = b.carlitz();
    let mut clear = Tally::new("at", q, "denominators-clear");
    let mut small = Tally::new("at", q, "small-n-is-one");
    let mut trip = Tally::new("at", q, "round-trip");
    let mut bound = Tally::new("at", q, "coefficient-bound");
    match at_polynomials(c, qs * qs) {
        Ok(at) => {
            clear.check(true, String::new);
            for n in 0..qs {
                let h = at.h(n).expect("within order");
                small.check(h.is_one(), || format!("H_{n} = {h}"));
            }
            trip.check(round_trip_holds(c, &at), || format!("order x^{}", qs * qs));
        }
        Err(e) => clear.fail(e.to_string()),
    }
    let table = AtTable::new(Arc::clone(c));
    for si in 1..=2 * q {
        let r = Index::new(vec![si]).and_then(|s| table.index_data(&s));
        bound.check(r.is_ok(), || format!("s_i={si}: {}", r.unwrap_err()));
    }
    vec![clear.done(), small.done(), trip.done(), bound.done()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_over_f2() {
        let f = FqField::prime(2).unwrap();
        for suite in SUITES {
            for r in run_suite(suite, &f, Some(3)) {
                assert_eq!(r.failures, 0, "{r:?}");
                if suite != "vanishing" {
                    assert!(r.cases > 0, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn defaults_cover_every_suite() {
        for suite in SUITES {
            assert!(!default_fields(suite).is_empty(), "{suite}");
        }
    }
}
