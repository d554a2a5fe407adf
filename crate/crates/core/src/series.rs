//! Truncated formal power series `c_0 + c_1 z + ... + c_N z^N + O(z^(N+1))`.
//!
//! The truncation order travels with the value: binary operations keep the smaller order,
//! and asking for a coefficient past it is an error rather than a silent zero.

use std::fmt;

use crate::bipoly::BiRat;
use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;

/// Ring operations a series coefficient must support.
///
/// Coefficients carry their own context (the field), so zeros and ones are produced from an
/// existing value.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn negated(&self) -> Self {
        self.zero_like().minus(self)
    }
}

/// Coefficients that admit the q-power Frobenius `c -> c^(q^i)`.
pub trait FrobeniusCoefficient: Coefficient {
    fn q(&self) -> u64;
    fn frobenius(&self, i: u32) -> Self;
}

impl Coefficient for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl FrobeniusCoefficient for RatFunc {
    fn q(&self) -> u64 {
        u64::from(self.field().q())
    }
    fn frobenius(&self, i: u32) -> Self {
        RatFunc::frobenius(self, i)
    }
}

impl Coefficient for BiRat {
    fn zero_like(&self) -> Self {
        BiRat::zero(self.field())
    }
    fn one_like(&self) -> Self {
        BiRat::one(self.field())
    }
    fn is_zero(&self) -> bool {
        BiRat::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_inv(&self) -> Option<Self> {
        BiRat::try_inv(self)
    }
}

#[derive(Clone, PartialEq)]
pub struct TruncSeries<C> {
    /// Always `order + 1` entries.
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncSeries<C> {
    /// Series with the given coefficients, truncated at `order`; missing coefficients are zero.
    pub fn new(mut coeffs: Vec<C>, template: &C, order: usize) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, template.zero_like());
        TruncSeries { coeffs }
    }

    pub fn zero(template: &C, order: usize) -> Self {
        Self::new(Vec::new(), template, order)
    }

    pub fn one(template: &C, order: usize) -> Self {
        Self::monomial(template.one_like(), 0, order)
    }

    /// `c z^k`, truncated at `order`.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(&c, order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&C> {
        self.coeffs.get(n).ok_or(Error::BeyondTruncation { requested: n, order: self.order() })
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: C) -> Result<()> {
        let order = self.order();
        let slot = self.coeffs.get_mut(n).ok_or(Error::BeyondTruncation { requested: n, order })?;
        *slot = c;
        Ok(())
    }

    /// Lowers the truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise truncation order {} to {order}", self.order());
        TruncSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k].plus(&rhs.coeffs[k])).collect();
        TruncSeries { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k].minus(&rhs.coeffs[k])).collect();
        TruncSeries { coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|x| if x.is_zero() { x.clone() } else { x.times(c) }).collect() }
    }

    /// Cauchy product; zero coefficients are skipped, so sparse series stay cheap.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; n + 1];
        let rhs_nz: Vec<usize> = (0..=n).filter(|&j| !rhs.coeffs[j].is_zero()).collect();
        for i in (0..=n).filter(|&i| !self.coeffs[i].is_zero()) {
            for &j in rhs_nz.iter().take_while(|&&j| i + j <= n) {
                out[i + j] = out[i + j].plus(&self.coeffs[i].times(&rhs.coeffs[j]));
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Multiplicative inverse to the same order.
    pub fn inv(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].try_inv().ok_or(Error::NonUnitSeries)?;
        let n = self.order();
        let nz: Vec<usize> = (1..=n).filter(|&j| !self.coeffs[j].is_zero()).collect();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(c0_inv.clone());
        for k in 1..=n {
            let mut acc = c0_inv.zero_like();
            for &j in nz.iter().take_while(|&&j| j <= k) {
                if !out[k - j].is_zero() {
                    acc = acc.plus(&self.coeffs[j].times(&out[k - j]));
                }
            }
            out.push(if acc.is_zero() { acc } else { acc.times(&c0_inv).negated() });
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Division by `z^k` when the first `k` coefficients vanish; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Precondition(format!("cannot divide a series of order {} by z^{k}", self.order())));
        }
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::Precondition(format!("series has a nonzero z^{v} term, cannot divide by z^{k}")));
            }
        }
        Ok(TruncSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Multiplication by `z^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![self.coeffs[0].zero_like(); k];
        coeffs.extend_from_slice(&self.coeffs);
        TruncSeries { coeffs }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<C: FrobeniusCoefficient> TruncSeries<C> {
    /// `self^(q^i)`: in characteristic p the coefficient of `z^n` moves to `z^(n q^i)` and is
    /// raised to the `q^i`-th power.
    pub fn frob_pow(&self, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        let n = self.order();
        let step = self.coeffs[0].q().pow(i) as usize;
        let mut out = vec![self.coeffs[0].zero_like(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            let dst = k * step;
            if dst > n {
                break;
            }
            if !c.is_zero() {
                out[dst] = c.frobenius(i);
            }
        }
        TruncSeries { coeffs: out }
    }

    /// `self^m` through the q-adic digits of `m`: a product of Frobenius powers.
    pub fn pow_digits(&self, m: u64) -> Self {
        let q = self.coeffs[0].q();
        let mut acc = Self::one(&self.coeffs[0], self.order());
        let mut rest = m;
        let mut i = 0;
        while rest > 0 {
            let digit = rest % q;
            if digit > 0 {
                let f = self.frob_pow(i);
                for _ in 0..digit {
                    acc = acc.mul(&f);
                }
            }
            rest /= q;
            i += 1;
        }
        acc
    }
}

impl<C: fmt::Display> fmt::Display for TruncSeries<C>
where
    C: Coefficient,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}*z^{k}")?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl<C: fmt::Display + Coefficient> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::poly::Poly;
    use proptest::prelude::*;

    type Series = TruncSeries<RatFunc>;

    fn rat(f: &FqField, n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(f, n), Poly::from_ints(f, d)).unwrap()
    }

    #[test]
    fn basic_examples() {
        let f = FqField::prime(3).unwrap();
        let one = RatFunc::one(&f);
        let s1 = Series::one(&one, 5);
        assert_eq!(s1.inv().unwrap(), s1);

        // 1/(1 - z) = 1 + z + z^2 + z^3
        let s = Series::new(vec![one.clone(), -&one], &one, 3);
        assert_eq!(s.inv().unwrap(), Series::new(vec![one.clone(); 4], &one, 3));

        let z = Series::monomial(one.clone(), 1, 4);
        assert_eq!(z.mul(&z), Series::monomial(one.clone(), 2, 4));
        assert_eq!(z.mul(&s1), z);

        // (z + z^2)^3 = z^3 + z^6 in characteristic 3
        let a = Series::new(vec![RatFunc::zero(&f), one.clone(), one.clone()], &one, 8);
        let cube = Series::new(
            vec![
                RatFunc::zero(&f),
                RatFunc::zero(&f),
                RatFunc::zero(&f),
                one.clone(),
                RatFunc::zero(&f),
                RatFunc::zero(&f),
                one.clone(),
            ],
            &one,
            8,
        );
        assert_eq!(a.frob_pow(1), cube);
    }

    #[test]
    fn truncation_is_enforced() {
        let f = FqField::prime(2).unwrap();
        let s = Series::one(&RatFunc::one(&f), 3);
        assert_eq!(s.coeff(4).unwrap_err(), Error::BeyondTruncation { requested: 4, order: 3 });
        let z = Series::monomial(RatFunc::one(&f), 1, 3);
        assert_eq!(z.inv().unwrap_err(), Error::NonUnitSeries);
        assert_eq!(s.mul(&Series::one(&RatFunc::one(&f), 7)).order(), 3);
        assert!(s.shift_down(1).is_err());
        assert_eq!(z.shift_down(1).unwrap(), Series::one(&RatFunc::one(&f), 2));
    }

    fn arb_series(p: u32, order: usize) -> impl Strategy<Value = Vec<(Vec<i64>, Vec<i64>)>> {
        let c = prop::collection::vec(0..i64::from(p), 0..4);
        let d = prop::collection::vec(0..i64::from(p), 1..4);
        prop::collection::vec((c, d), order + 1)
    }

    fn build(f: &FqField, raw: &[(Vec<i64>, Vec<i64>)], order: usize) -> Series {
        let coeffs: Vec<RatFunc> = raw
            .iter()
            .map(|(n, d)| {
                RatFunc::new(Poly::from_ints(f, n), Poly::from_ints(f, d)).unwrap_or_else(|_| RatFunc::zero(f))
            })
            .collect();
        Series::new(coeffs, &RatFunc::zero(f), order)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inverse_is_an_involution(raw in arb_series(3, 6)) {
            let f = FqField::prime(3).unwrap();
            let mut s = build(&f, &raw, 6);
            s.set_coeff(0, rat(&f, &[1, 1], &[2])).unwrap();
            let inv = s.inv().unwrap();
            prop_assert!(s.mul(&inv) == Series::one(&RatFunc::one(&f), 6));
            prop_assert_eq!(inv.inv().unwrap(), s);
        }

        #[test]
        fn frob_pow_matches_repeated_products(raw in arb_series(2, 9), p_is_three in any::<bool>(), i in 0u32..=2) {
            let p = if p_is_three { 3 } else { 2 };
            let f = FqField::prime(p).unwrap();
            let raw: Vec<_> = raw.into_iter().map(|(n, d)| (n.into_iter().map(|c| c % i64::from(p)).collect(), d)).collect();
            let s = build(&f, &raw, 9);
            let mut prod = Series::one(&RatFunc::one(&f), 9);
            for _ in 0..u64::from(p).pow(i) {
                prod = prod.mul(&s);
            }
            prop_assert_eq!(s.frob_pow(i), prod);
        }

        #[test]
        fn frobenius_is_additive(a in arb_series(3, 7), b in arb_series(3, 7)) {
            let f = FqField::prime(3).unwrap();
            let a = build(&f, &a, 7);
            let b = build(&f, &b, 7);
            let lhs = a.add(&b).pow_digits(3);
            let rhs = a.pow_digits(3).add(&b.pow_digits(3));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
