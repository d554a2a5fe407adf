//! Bernoulli-Carlitz numbers `BC_n` and multi-poly-Bernoulli-Carlitz numbers `BC^{s,j}_n`.
//!
//! `z / e_C(z) = sum_n BC_n z^n / Pi(n)` and
//! `Li_s(e_C(z) u_{1 j_1}, u_{2 j_2}, ..., u_{r j_r}) / e_C(z) = sum_n BC^{s,j}_n z^n / Pi(n)`.
//!
//! Each is available as a finite closed sum over Stirling-Carlitz numbers and, independently,
//! by expanding the generating series.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::anderson_thakur::{AtTable, IndexData, JTuple};
use crate::carlitz::{CarlitzCache, Index};
use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::ratfunc::RatFunc;
use crate::stirling::StirlingTable;
use crate::Series;

/// Key of `BC^{s,j}_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPBCKey {
    pub s: Index,
    pub j: JTuple,
    pub n: u64,
}

impl fmt::Display for MPBCKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BC^(({}),({}))_{}", self.s, self.j, self.n)
    }
}

/// Both sides of the recursion at `n = q^m - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursionWitness {
    pub lhs: RatFunc,
    pub rhs: RatFunc,
    pub holds: bool,
}

/// Bernoulli-Carlitz numbers and their multi-poly generalization for one field, with the
/// Stirling-Carlitz and Anderson-Thakur tables they draw on.
pub struct BernoulliCarlitz {
    carlitz: Arc<CarlitzCache>,
    stirling: StirlingTable,
    at: AtTable,
    bc_memo: RwLock<HashMap<u64, RatFunc>>,
    memo: RwLock<HashMap<MPBCKey, RatFunc>>,
    index_memo: RwLock<HashMap<Index, Arc<IndexData>>>,
    z_over_exp: RwLock<Option<Arc<Series>>>,
}

impl BernoulliCarlitz {
    pub fn new(field: &FqField) -> Self {
        Self::with_cache(Arc::new(CarlitzCache::new(field)))
    }

    pub fn with_cache(carlitz: Arc<CarlitzCache>) -> Self {
        BernoulliCarlitz {
            stirling: StirlingTable::new(Arc::clone(&carlitz)),
            at: AtTable::new(Arc::clone(&carlitz)),
            carlitz,
            bc_memo: RwLock::new(HashMap::new()),
            memo: RwLock::new(HashMap::new()),
            index_memo: RwLock::new(HashMap::new()),
            z_over_exp: RwLock::new(None),
        }
    }

    pub fn carlitz(&self) -> &Arc<CarlitzCache> {
        &self.carlitz
    }

    pub fn field(&self) -> &FqField {
        self.carlitz.field()
    }

    pub fn stirling(&self) -> &StirlingTable {
        &self.stirling
    }

    pub fn at(&self) -> &AtTable {
        &self.at
    }

    fn q(&self) -> u64 {
        self.carlitz.q()
    }

    pub fn index_data(&self, s: &Index) -> Result<Arc<IndexData>> {
        if let Some(d) = self.index_memo.read().unwrap().get(s) {
            return Ok(Arc::clone(d));
        }
        let d = Arc::new(self.at.index_data(s)?);
        self.index_memo.write().unwrap().insert(s.clone(), Arc::clone(&d));
        Ok(d)
    }

    /// Checks `j` against `J_s` and builds the key.
    pub fn key(&self, s: &Index, j: &JTuple, n: u64) -> Result<MPBCKey> {
        self.index_data(s)?.check(j)?;
        Ok(MPBCKey { s: s.clone(), j: j.clone(), n })
    }

    /// `BC_n = sum_{q^j - 1 <= n} (-1)^j D_j / L_j^2 {n brace q^j - 1}`.
    pub fn bc(&self, n: u64) -> RatFunc {
        if let Some(v) = self.bc_memo.read().unwrap().get(&n) {
            return v.clone();
        }
        let mut acc = RatFunc::zero(self.field());
        let mut j = 0u32;
        while self.q().pow(j) - 1 <= n {
            let st = self.stirling.get(n, self.q().pow(j) - 1);
            if !st.is_zero() {
                let l = self.carlitz.l_rat(j);
                let mut c = &(&self.carlitz.d_rat(j) / &l) / &l;
                if j % 2 == 1 {
                    c = -c;
                }
                acc = &acc + &(&c * &st);
            }
            j += 1;
        }
        self.bc_memo.write().unwrap().insert(n, acc.clone());
        acc
    }

    /// `z / e_C(z)` to order at least `order`, as the inverse of the unit series `e_C(z) / z`.
    fn z_over_exp(&self, order: usize) -> Arc<Series> {
        if let Some(s) = self.z_over_exp.read().unwrap().as_ref() {
            if s.order() >= order {
                return Arc::clone(s);
            }
        }
        let unit = self.carlitz.exp_series(order + 1).shift_down(1).expect("e_C(z) has no constant term");
        let s = Arc::new(unit.inv().expect("e_C(z) / z is a unit"));
        let mut slot = self.z_over_exp.write().unwrap();
        if slot.as_ref().is_none_or(|old| old.order() < s.order()) {
            *slot = Some(Arc::clone(&s));
        }
        s
    }

    /// `BC_0, ..., BC_N` read off `z / e_C(z)`.
    pub fn bc_series_oracle(&self, big_n: usize) -> Vec<RatFunc> {
        let s = self.z_over_exp(big_n);
        (0..=big_n).map(|n| &self.carlitz.factorial_rat(n as u64) * s.coeff(n).expect("within order")).collect()
    }

    /// `BC^{s,j}_n` by the closed sum
    /// `sum_{q^i_1 <= n+1, i_1 > ... > i_r >= 0} Pi(q^i_1 - 1) {n brace q^i_1 - 1}
    ///   u_{1 j_1}^(q^i_1) ... u_{r j_r}^(q^i_r) / (L_i_1^s_1 ... L_i_r^s_r)`.
    pub fn mpbcn_closed(&self, key: &MPBCKey) -> Result<RatFunc> {
        if let Some(v) = self.memo.read().unwrap().get(key) {
            return Ok(v.clone());
        }
        let w = self.index_data(&key.s)?.weights(&key.j)?;
        let s = key.s.parts();
        let n = key.n;
        let mut acc = RatFunc::zero(self.field());
        let mut i1 = s.len() as u32 - 1;
        while self.q().pow(i1) <= n + 1 {
            let m = self.q().pow(i1) - 1;
            let st = self.stirling.get(n, m);
            if !st.is_zero() {
                let head = self.carlitz.polylog_term(s[0], &w[0], i1);
                let tail = self.carlitz.chain_sum(&s[1..], &w[1..], i1);
                let term = &(&(&self.carlitz.factorial_rat(m) * &st) * &head) * &tail;
                acc = &acc + &term;
            }
            i1 += 1;
        }
        self.memo.write().unwrap().insert(key.clone(), acc.clone());
        Ok(acc)
    }

    /// Convenience wrapper validating `(s, j, n)` first.
    pub fn mpbcn(&self, s: &Index, j: &JTuple, n: u64) -> Result<RatFunc> {
        self.mpbcn_closed(&self.key(s, j, n)?)
    }

    /// `BC^{s,j}_0, ..., BC^{s,j}_N` from the generating series
    /// `Li_s(e_C(z) u_{1 j_1}, ...) / e_C(z)`, dividing by `e_C(z)` as
    /// `(Li / z) * (z / e_C(z))`.
    pub fn mpbcn_series_oracle(&self, s: &Index, j: &JTuple, big_n: usize) -> Result<Vec<RatFunc>> {
        let w = self.index_data(s)?.weights(j)?;
        let li = self.carlitz.cmpl_series(s, &w, big_n + 1)?.shift_down(1)?;
        let series = li.mul(&self.z_over_exp(big_n));
        Ok((0..=big_n)
            .map(|n| &self.carlitz.factorial_rat(n as u64) * series.coeff(n).expect("within order"))
            .collect())
    }

    /// `sum_{bound > i_1 > ... > i_k >= 0} prod_l BC_{q^i_l - 1} / Pi(q^i_l - 1)`.
    fn ones_chain(&self, k: usize, bound: u32) -> RatFunc {
        if k == 0 {
            return RatFunc::one(self.field());
        }
        let mut acc = RatFunc::zero(self.field());
        for i in (k as u32 - 1)..bound {
            let m = self.q().pow(i) - 1;
            let f = &self.bc(m) / &self.carlitz.factorial_rat(m);
            acc = &acc + &(&f * &self.ones_chain(k - 1, i));
        }
        acc
    }

    /// `BC^{(1,...,1),(0,...,0)}_n` of depth `r` through Bernoulli-Carlitz numbers only:
    /// `sum_{q^i_1 <= n+1, i_1 > ... > i_r >= 0} {n brace q^i_1 - 1} BC_{q^i_1 - 1}
    ///   prod_{l >= 2} BC_{q^i_l - 1} / Pi(q^i_l - 1)`.
    pub fn mpbcn_special_ones(&self, r: usize, n: u64) -> Result<RatFunc> {
        if r == 0 {
            return Err(Error::Precondition("depth must be at least 1".into()));
        }
        if n + 1 < self.q().pow(r as u32 - 1) {
            return Err(Error::Precondition(format!("n = {n} is below q^(r-1) - 1 for r = {r}")));
        }
        let mut acc = RatFunc::zero(self.field());
        let mut i1 = r as u32 - 1;
        while self.q().pow(i1) <= n + 1 {
            let m = self.q().pow(i1) - 1;
            let st = self.stirling.get(n, m);
            if !st.is_zero() {
                let term = &(&st * &self.bc(m)) * &self.ones_chain(r - 1, i1);
                acc = &acc + &term;
            }
            i1 += 1;
        }
        Ok(acc)
    }

    /// Compares `BC^{s,j}_{q^m - 1}` with
    /// `BC^{(s_1),(j_1)}_{q^m - 1} sum_{a=1}^{m-(r-2)} BC^{(s_2..s_r),(j_2..j_r)}_{q^(m-a) - 1} / Pi(q^(m-a) - 1)`.
    pub fn mpbcn_recursion_check(&self, s: &Index, j: &JTuple, m: u32) -> Result<RecursionWitness> {
        let r = s.depth();
        if r < 2 {
            return Err(Error::Precondition("the recursion needs depth at least 2".into()));
        }
        if (m as usize) < r - 1 {
            return Err(Error::Precondition(format!("m = {m} is below r - 1 = {}", r - 1)));
        }
        let q = self.q();
        let n = q.pow(m) - 1;
        let lhs = self.mpbcn(s, j, n)?;
        let head = Index::new(vec![s.parts()[0]])?;
        let first = self.mpbcn(&head, &j.head(), n)?;
        let tail = s.tail().expect("depth >= 2");
        let j_tail = j.tail();
        let mut sum = RatFunc::zero(self.field());
        for a in 1..=(m + 2 - r as u32) {
            let k = q.pow(m - a) - 1;
            let v = self.mpbcn(&tail, &j_tail, k)?;
            sum = &sum + &(&v / &self.carlitz.factorial_rat(k));
        }
        let rhs = &first * &sum;
        let holds = lhs == rhs;
        Ok(RecursionWitness { lhs, rhs, holds })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anderson_thakur::j_tuples;
    use crate::poly::Poly;

    fn bern(p: u32) -> BernoulliCarlitz {
        BernoulliCarlitz::new(&FqField::prime(p).unwrap())
    }

    #[test]
    fn bc_small_values() {
        for p in [2, 3, 5] {
            let b = bern(p);
            let c = b.carlitz();
            let q = u64::from(p);
            assert!(b.bc(0).is_one());
            assert_eq!(b.bc(q - 1), c.l_rat(1).inv().unwrap());
            for n in 1..=q * q {
                if n % (q - 1) != 0 {
                    assert!(b.bc(n).is_zero(), "BC_{n}, q={q}");
                }
            }
        }
        let b = bern(2);
        let f = b.field();
        let theta = Poly::x(f);
        assert_eq!(b.bc(1), RatFunc::new(Poly::one(f), &theta.pow(2) + &theta).unwrap().clone());
    }

    #[test]
    fn bc_three_by_hand_q2() {
        // 1 / (1 + a z + b z^3) = 1 + a z + a^2 z^2 + (a^3 + b) z^3 + ... over F_2, a = 1/D_1, b = 1/D_2
        let b = bern(2);
        let c = b.carlitz();
        let a = c.d_rat(1).inv().unwrap();
        let bb = c.d_rat(2).inv().unwrap();
        let expected = &c.d_rat(1) * &(&a.pow(3).unwrap() + &bb);
        assert_eq!(b.bc(3), expected);
        assert_eq!(b.bc_series_oracle(3)[3], expected);
    }

    #[test]
    fn bc_matches_series() {
        for p in [2, 3] {
            let b = bern(p);
            let q = p as usize;
            let oracle = b.bc_series_oracle(q * q * q);
            for (n, v) in oracle.iter().enumerate() {
                assert_eq!(&b.bc(n as u64), v, "BC_{n}, q={q}");
            }
        }
    }

    #[test]
    fn bc_at_q_powers() {
        for (p, top) in [(2u32, 4u32), (3, 3)] {
            let b = bern(p);
            let c = b.carlitz();
            for i in 0..=top {
                let n = u64::from(p).pow(i) - 1;
                assert_eq!(b.bc(n), &c.factorial_rat(n) / &c.l_rat(i));
                let l = c.l_rat(i);
                let mut expected = &(&c.d_rat(i) / &l) / &l;
                if i % 2 == 1 {
                    expected = -expected;
                }
                assert_eq!(b.bc(n), expected);
            }
        }
    }

    #[test]
    fn mpbcn_depth_one_is_bc() {
        for p in [2, 3] {
            let b = bern(p);
            let s = Index::new(vec![1]).unwrap();
            let j = JTuple::zeros(1);
            let q = u64::from(p);
            for n in 0..=q * q * q {
                assert_eq!(b.mpbcn(&s, &j, n).unwrap(), b.bc(n));
            }
        }
    }

    #[test]
    fn mpbcn_hand_value_and_empty_range() {
        let b = bern(2);
        let s = Index::new(vec![1, 1]).unwrap();
        let j = JTuple::zeros(2);
        assert_eq!(b.mpbcn(&s, &j, 2).unwrap(), b.carlitz().l_rat(1).inv().unwrap());
        assert_eq!(b.mpbcn_series_oracle(&s, &j, 2).unwrap()[2], b.carlitz().l_rat(1).inv().unwrap());
        assert!(b.mpbcn(&s, &j, 0).unwrap().is_zero());
        let s3 = Index::ones(3).unwrap();
        for n in 0..3 {
            assert!(b.mpbcn(&s3, &JTuple::zeros(3), n).unwrap().is_zero());
        }
        assert!(b.mpbcn(&s, &JTuple(vec![1, 0]), 2).is_err());
    }

    #[test]
    fn closed_matches_series_small() {
        for p in [2, 3] {
            let b = bern(p);
            let q = p as usize;
            for s in Index::enumerate(2, 4) {
                let data = b.index_data(&s).unwrap();
                for j in j_tuples(&data) {
                    let oracle = b.mpbcn_series_oracle(&s, &j, q * q).unwrap();
                    for (n, v) in oracle.iter().enumerate() {
                        assert_eq!(&b.mpbcn(&s, &j, n as u64).unwrap(), v, "s=({s}) j=({j}) n={n} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn special_ones() {
        let b = bern(2);
        assert!(b.mpbcn_special_ones(2, 0).is_err());
        // r = 2, n = 3, q = 2: pairs (i_1, i_2) in {(1,0), (2,0), (2,1)}
        let c = b.carlitz();
        let g = |i: u32| &b.bc(2u64.pow(i) - 1) / &c.factorial_rat(2u64.pow(i) - 1);
        let st = |i: u32| b.stirling().get(3, 2u64.pow(i) - 1);
        let mut expected = RatFunc::zero(b.field());
        for (i1, i2) in [(1, 0), (2, 0), (2, 1)] {
            expected = &expected + &(&(&st(i1) * &b.bc(2u64.pow(i1) - 1)) * &g(i2));
        }
        assert_eq!(b.mpbcn_special_ones(2, 3).unwrap(), expected);
        for r in 1..=3 {
            for n in (1u64 << (r - 1)) - 1..=8 {
                let closed = b.mpbcn(&Index::ones(r).unwrap(), &JTuple::zeros(r), n).unwrap();
                assert_eq!(b.mpbcn_special_ones(r, n).unwrap(), closed, "r={r} n={n}");
            }
        }
        for n in 0..=8 {
            assert_eq!(b.mpbcn_special_ones(1, n).unwrap(), b.bc(n));
        }
    }

    #[test]
    fn recursion_examples() {
        let b = bern(2);
        let w = b.mpbcn_recursion_check(&Index::new(vec![1, 1]).unwrap(), &JTuple::zeros(2), 2).unwrap();
        assert!(w.holds, "{w:?}");
        let w = b.mpbcn_recursion_check(&Index::new(vec![2, 1]).unwrap(), &JTuple::zeros(2), 1).unwrap();
        assert!(w.holds);
        assert!(b.mpbcn_recursion_check(&Index::new(vec![1]).unwrap(), &JTuple::zeros(1), 2).is_err());
        assert!(b.mpbcn_recursion_check(&Index::ones(3).unwrap(), &JTuple::zeros(3), 1).is_err());

        let b3 = bern(3);
        let s = Index::new(vec![2, 1]).unwrap();
        let w = b3.mpbcn_recursion_check(&s, &JTuple::zeros(2), 3).unwrap();
        assert!(w.holds && !w.lhs.is_zero());
    }
}
