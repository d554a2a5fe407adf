//! Carlitz-module building blocks over A = F_q[T].
//!
//! * `D_i = prod_{j<i} (T^(q^i) - T^(q^j))`, the product of all monic polynomials of degree i;
//! * `L_i = prod_{1<=j<=i} (T - T^(q^j))`, kept with the sign of that product;
//! * the Carlitz factorial `Pi(n) = prod D_i^(n_i)` over the q-adic digits of n;
//! * the exponential `e_C(z) = sum z^(q^i) / D_i` and logarithm `log_C(z) = sum z^(q^i) / L_i`;
//! * the one-variable specialization `Li_s(e_C(z) w_1, w_2, ..., w_r)` of the Carlitz multiple
//!   polylogarithm.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::series::TruncSeries;
use crate::Series;

/// Default bound on the subscript i of D_i and L_i.
pub const DEFAULT_MAX_I: u32 = 12;

/// A positive index `s = (s_1, ..., s_r)`, r >= 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidIndex("depth must be at least 1".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidIndex(format!("{parts:?} has a non-positive entry")));
        }
        Ok(Index(parts))
    }

    /// `(1, ..., 1)` of depth `r`.
    pub fn ones(r: usize) -> Result<Self> {
        Self::new(vec![1; r])
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `(s_2, ..., s_r)`, `None` at depth 1.
    pub fn tail(&self) -> Option<Index> {
        (self.0.len() > 1).then(|| Index(self.0[1..].to_vec()))
    }

    /// `(1, ..., 1, s_1, ..., s_r)` with `d` leading ones.
    pub fn with_leading_ones(&self, d: usize) -> Index {
        let mut v = vec![1; d];
        v.extend_from_slice(&self.0);
        Index(v)
    }

    /// All indices with depth <= `max_depth` and weight <= `max_weight`, ordered by depth,
    /// then weight, then lexicographically.
    pub fn enumerate(max_depth: usize, max_weight: u32) -> Vec<Index> {
        fn rec(prefix: &mut Vec<u32>, depth: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == depth {
                out.push(prefix.clone());
                return;
            }
            let remaining = (depth - prefix.len() - 1) as u32;
            for s in 1..=budget.saturating_sub(remaining) {
                prefix.push(s);
                rec(prefix, depth, budget - s, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        for depth in 1..=max_depth {
            let mut found = Vec::new();
            rec(&mut Vec::new(), depth, max_weight, &mut found);
            found.sort_by_key(|v| (v.iter().sum::<u32>(), v.clone()));
            all.extend(found.into_iter().map(Index));
        }
        all
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Parses a comma-separated list such as `2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::InvalidIndex(format!("bad entry `{p}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }
}

/// q-adic digits of `n`, least significant first.
pub fn digits(n: u64, q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    while m > 0 {
        out.push(m % q);
        m /= q;
    }
    out
}

/// Memoized D_i, L_i and Carlitz factorials for one field.
pub struct CarlitzCache {
    field: FqField,
    max_i: u32,
    d: RwLock<Vec<Poly>>,
    l: RwLock<Vec<Poly>>,
    factorials: RwLock<HashMap<u64, Poly>>,
}

impl CarlitzCache {
    pub fn new(field: &FqField) -> Self {
        Self::with_max_i(field, DEFAULT_MAX_I)
    }

    pub fn with_max_i(field: &FqField, max_i: u32) -> Self {
        CarlitzCache {
            field: field.clone(),
            max_i,
            d: RwLock::new(vec![Poly::one(field)]),
            l: RwLock::new(vec![Poly::one(field)]),
            factorials: RwLock::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        u64::from(self.field.q())
    }

    fn check_i(&self, i: u32) {
        assert!(i <= self.max_i, "D_i / L_i requested for i = {i} beyond the configured bound {}", self.max_i);
    }

    /// `T^(q^k)`.
    fn theta_qk(&self, k: u32) -> Poly {
        Poly::x(&self.field).frobenius(k)
    }

    pub fn d(&self, i: u32) -> Poly {
        self.check_i(i);
        if let Some(p) = self.d.read().unwrap().get(i as usize) {
            return p.clone();
        }
        let mut table = self.d.write().unwrap();
        while table.len() <= i as usize {
            let k = table.len() as u32;
            let top = self.theta_qk(k);
            let mut acc = Poly::one(&self.field);
            for j in 0..k {
                acc = &acc * &(&top - &self.theta_qk(j));
            }
            assert!(acc.is_monic(), "D_{k} must be monic");
            assert_eq!(acc.degree(), Some(k as usize * self.q().pow(k) as usize), "deg D_{k}");
            table.push(acc);
        }
        table[i as usize].clone()
    }

    pub fn l(&self, i: u32) -> Poly {
        self.check_i(i);
        if let Some(p) = self.l.read().unwrap().get(i as usize) {
            return p.clone();
        }
        let mut table = self.l.write().unwrap();
        while table.len() <= i as usize {
            let k = table.len() as u32;
            let factor = &Poly::x(&self.field) - &self.theta_qk(k);
            let next = table[k as usize - 1].clone() * factor;
            let expected: u64 = (1..=k).map(|j| self.q().pow(j)).sum();
            assert_eq!(next.degree(), Some(expected as usize), "deg L_{k}");
            table.push(next);
        }
        table[i as usize].clone()
    }

    pub fn d_rat(&self, i: u32) -> RatFunc {
        RatFunc::from_poly(self.d(i))
    }

    pub fn l_rat(&self, i: u32) -> RatFunc {
        RatFunc::from_poly(self.l(i))
    }

    pub fn digits(&self, n: u64) -> Vec<u64> {
        digits(n, self.q())
    }

    /// Sum of the q-adic digits of `n`.
    pub fn digit_sum(&self, n: u64) -> u64 {
        self.digits(n).iter().sum()
    }

    /// Carlitz factorial `Pi(n) = Gamma_{n+1}`.
    pub fn factorial(&self, n: u64) -> Poly {
        if let Some(p) = self.factorials.read().unwrap().get(&n) {
            return p.clone();
        }
        let mut acc = Poly::one(&self.field);
        for (i, &ni) in self.digits(n).iter().enumerate() {
            if ni > 0 {
                acc = &acc * &self.d(i as u32).pow(ni);
            }
        }
        self.factorials.write().unwrap().insert(n, acc.clone());
        acc
    }

    pub fn factorial_rat(&self, n: u64) -> RatFunc {
        RatFunc::from_poly(self.factorial(n))
    }

    /// Carlitz gamma `Gamma_s = Pi(s - 1)`, for s >= 1.
    pub fn gamma(&self, s: u32) -> Poly {
        assert!(s >= 1, "Gamma_s needs s >= 1");
        self.factorial(u64::from(s) - 1)
    }

    /// Largest i with q^i <= n (n >= 1).
    pub fn log_floor(&self, n: u64) -> u32 {
        let mut i = 0;
        while self.q().pow(i + 1) <= n {
            i += 1;
        }
        i
    }

    fn sparse_series(&self, order: usize, coeff: impl Fn(u32) -> RatFunc) -> Series {
        let zero = RatFunc::zero(&self.field);
        let mut s = TruncSeries::zero(&zero, order);
        let mut i = 0;
        while (self.q().pow(i) as usize) <= order {
            s.set_coeff(self.q().pow(i) as usize, coeff(i)).expect("within order");
            i += 1;
        }
        s
    }

    /// `e_C(z)` truncated at `order`.
    pub fn exp_series(&self, order: usize) -> Series {
        self.sparse_series(order, |i| self.d_rat(i).inv().expect("D_i is nonzero"))
    }

    /// `log_C(z)` truncated at `order`.
    pub fn log_series(&self, order: usize) -> Series {
        self.sparse_series(order, |i| self.l_rat(i).inv().expect("L_i is nonzero"))
    }

    /// `sum_{i_1 > ... > i_r >= 0} e_C(z)^(q^i_1) w_1^(q^i_1) ... w_r^(q^i_r) / (L_i_1^s_1 ... L_i_r^s_r)`.
    ///
    /// The lowest term of `e_C(z)^(q^i_1)` is `z^(q^i_1)`, so only `q^i_1 <= order` contributes.
    pub fn cmpl_series(&self, s: &Index, weights: &[Poly], order: usize) -> Result<Series> {
        if weights.len() != s.depth() {
            return Err(Error::Precondition(format!("{} weights for an index of depth {}", weights.len(), s.depth())));
        }
        let zero = RatFunc::zero(&self.field);
        let mut out = TruncSeries::zero(&zero, order);
        if order == 0 {
            return Ok(out);
        }
        let r = s.depth();
        let top = self.log_floor(order as u64);
        if (top as usize) < r - 1 {
            return Ok(out);
        }
        let exp = self.exp_series(order);
        for i1 in (r as u32 - 1)..=top {
            let head = self.polylog_term(s.parts()[0], &weights[0], i1);
            let tail = self.chain_sum(&s.parts()[1..], &weights[1..], i1);
            let c = &head * &tail;
            if !c.is_zero() {
                out = out.add(&exp.frob_pow(i1).scale(&c));
            }
        }
        Ok(out)
    }

    /// `w^(q^i) / L_i^s`.
    pub fn polylog_term(&self, s: u32, w: &Poly, i: u32) -> RatFunc {
        let num = RatFunc::from_poly(w.frobenius(i));
        if num.is_zero() {
            return num;
        }
        &num * &self.l_rat(i).pow(-i64::from(s)).expect("L_i is nonzero")
    }

    /// `sum_{bound > i_1 > ... > i_k >= 0} prod_m w_m^(q^i_m) / L_i_m^s_m` (1 for an empty index).
    pub fn chain_sum(&self, s: &[u32], weights: &[Poly], bound: u32) -> RatFunc {
        if s.is_empty() {
            return RatFunc::one(&self.field);
        }
        let mut acc = RatFunc::zero(&self.field);
        let need = s.len() as u32 - 1;
        for i in need..bound {
            let head = self.polylog_term(s[0], &weights[0], i);
            if head.is_zero() {
                continue;
            }
            acc = &acc + &(&head * &self.chain_sum(&s[1..], &weights[1..], i));
        }
        acc
    }
}
