//! Anderson-Thakur polynomials `H_n` in A[t], defined by
//!
//! `{1 - sum_{i>=0} prod_{j=1..i} (t^(q^i) - T^(q^j)) / D_i(t) x^(q^i)}^(-1)
//!    = sum_n H_n / Gamma_{n+1}(t) x^n`,
//!
//! where `D_i(t)` and `Gamma_{n+1}(t)` are D_i and the Carlitz factorial Pi(n) with T replaced by t.
//! The t-coefficients `u_ij` of `H_{s_i - 1}` are the weights used for finite multiple zeta values.

use std::fmt;
use std::sync::{Arc, RwLock};

use crate::bipoly::{BiPoly, BiRat};
use crate::carlitz::{CarlitzCache, Index};
use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::Poly;
use crate::series::TruncSeries;

/// `H_0, ..., H_N`.
#[derive(Clone, Debug)]
pub struct ATSeries {
    field: FqField,
    h: Vec<BiPoly>,
}

impl ATSeries {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// The largest n available.
    pub fn order(&self) -> usize {
        self.h.len() - 1
    }

    pub fn h(&self, n: usize) -> Option<&BiPoly> {
        self.h.get(n)
    }

    pub fn all(&self) -> &[BiPoly] {
        &self.h
    }
}

/// `1 - sum_{q^i <= n} c_i x^(q^i)` as a series in x over fractions in A[t].
pub fn defining_series(carlitz: &CarlitzCache, n: usize) -> TruncSeries<BiRat> {
    let f = carlitz.field();
    let q = carlitz.q() as usize;
    let one = BiRat::one(f);
    let mut out = TruncSeries::one(&one, n);
    let theta = Poly::x(f);
    let mut i = 0u32;
    while q.pow(i) <= n {
        let t_pow = BiPoly::from_t(&Poly::x(f).frobenius(i));
        let mut num = BiPoly::one(f);
        for j in 1..=i {
            num = &num * &(&t_pow - &BiPoly::from_theta(theta.frobenius(j)));
        }
        let c = BiRat::new(num, carlitz.d(i)).expect("D_i is nonzero");
        let k = q.pow(i);
        let cur = out.coeff(k).expect("within order").clone();
        out.set_coeff(k, &cur - &c).expect("within order");
        i += 1;
    }
    out
}

/// Builds `H_0, ..., H_N`, checking that every `Gamma_{n+1}(t) [x^n]` lands in A[t].
pub fn at_polynomials(carlitz: &CarlitzCache, big_n: usize) -> Result<ATSeries> {
    let f = carlitz.field();
    let inv = defining_series(carlitz, big_n).inv()?;
    let mut h = Vec::with_capacity(big_n + 1);
    for (n, c) in inv.coeffs().iter().enumerate() {
        let gamma_t = carlitz.factorial(n as u64);
        let scaled = c.mul_t(&gamma_t);
        let poly = scaled.to_bipoly().ok_or_else(|| Error::DenominatorDoesNotClear {
            n,
            detail: format!("remaining denominator {}", scaled.den().format_in("t")),
        })?;
        h.push(poly);
    }
    Ok(ATSeries { field: f.clone(), h })
}

/// Re-substitutes `sum_n H_n / Gamma_{n+1}(t) x^n` into the defining bracket; true when the
/// product is `1 + O(x^(N+1))`.
pub fn round_trip_holds(carlitz: &CarlitzCache, at: &ATSeries) -> bool {
    let f = carlitz.field();
    let n = at.order();
    let coeffs = at
        .all()
        .iter()
        .enumerate()
        .map(|(k, h)| BiRat::new(h.clone(), carlitz.factorial(k as u64)).expect("Pi(k) is nonzero"))
        .collect();
    let gen = TruncSeries::new(coeffs, &BiRat::one(f), n);
    gen.mul(&defining_series(carlitz, n)) == TruncSeries::one(&BiRat::one(f), n)
}

/// The `(n, deg_t H_n)` with `deg_t H_n > n`.
pub fn t_degree_excess(at: &ATSeries) -> Vec<(usize, usize)> {
    at.all().iter().enumerate().filter_map(|(n, h)| h.t_degree().filter(|&d| d > n).map(|d| (n, d))).collect()
}

/// Shared, growing table of Anderson-Thakur polynomials.
pub struct AtTable {
    carlitz: Arc<CarlitzCache>,
    series: RwLock<Option<Arc<ATSeries>>>,
}

impl AtTable {
    pub fn new(carlitz: Arc<CarlitzCache>) -> Self {
        AtTable { carlitz, series: RwLock::new(None) }
    }

    pub fn carlitz(&self) -> &Arc<CarlitzCache> {
        &self.carlitz
    }

    /// `H_0, ..., H_n` at least.
    pub fn series(&self, n: usize) -> Result<Arc<ATSeries>> {
        let old = {
            let guard = self.series.read().unwrap();
            match guard.as_ref() {
                Some(s) if s.order() >= n => return Ok(Arc::clone(s)),
                Some(s) => s.order(),
                None => 0,
            }
        };
        let built = Arc::new(at_polynomials(&self.carlitz, n.max(2 * old))?);
        let mut guard = self.series.write().unwrap();
        match guard.as_ref() {
            Some(s) if s.order() >= built.order() => Ok(Arc::clone(s)),
            _ => {
                *guard = Some(Arc::clone(&built));
                Ok(built)
            }
        }
    }

    pub fn h(&self, n: usize) -> Result<BiPoly> {
        Ok(self.series(n)?.h(n).expect("series covers n").clone())
    }

    /// The coefficients `u_ij` of `H_{s_i - 1}` for every component of `s`, with the degree
    /// bound `deg_T u_ij < s_i q / (q - 1)` checked.
    pub fn index_data(&self, s: &Index) -> Result<IndexData> {
        let q = self.carlitz.q();
        let top = *s.parts().iter().max().expect("nonempty index") as usize - 1;
        let series = self.series(top)?;
        let mut u = Vec::with_capacity(s.depth());
        for &si in s.parts() {
            let h = series.h(si as usize - 1).expect("series covers s_i - 1");
            let ui: Vec<Poly> = h.t_coeffs().to_vec();
            if ui.last().is_none_or(Poly::is_zero) {
                return Err(Error::BoundViolation(format!("H_{} has no nonzero leading t-coefficient", si - 1)));
            }
            for (j, c) in ui.iter().enumerate() {
                if let Some(d) = c.degree() {
                    if (d as u64) * (q - 1) >= u64::from(si) * q {
                        return Err(Error::BoundViolation(format!(
                            "deg u_{{{si},{j}}} = {d} is not below {si}*{q}/{}",
                            q - 1
                        )));
                    }
                }
            }
            u.push(ui);
        }
        Ok(IndexData { s: s.clone(), u })
    }
}

/// Index `s` together with the t-coefficients of `H_{s_i - 1}`.
#[derive(Clone, Debug)]
pub struct IndexData {
    s: Index,
    u: Vec<Vec<Poly>>,
}

impl IndexData {
    pub fn s(&self) -> &Index {
        &self.s
    }

    /// `u_ij`, the coefficient of `t^j` in `H_{s_i - 1}` (i counted from 0).
    pub fn u(&self, i: usize, j: usize) -> &Poly {
        &self.u[i][j]
    }

    pub fn coefficients(&self, i: usize) -> &[Poly] {
        &self.u[i]
    }

    /// `m_i`, the t-degree of `H_{s_i - 1}`.
    pub fn m(&self) -> Vec<usize> {
        self.u.iter().map(|ui| ui.len() - 1).collect()
    }

    /// `(u_{1 j_1}, ..., u_{r j_r})`.
    pub fn weights(&self, j: &JTuple) -> Result<Vec<Poly>> {
        self.check(j)?;
        Ok(j.0.iter().enumerate().map(|(i, &ji)| self.u[i][ji].clone()).collect())
    }

    pub fn check(&self, j: &JTuple) -> Result<()> {
        let m = self.m();
        if j.0.len() != m.len() || j.0.iter().zip(&m).any(|(a, b)| a > b) {
            return Err(Error::InvalidIndex(format!("j = ({j}) is outside J_s for s = ({}), m = {m:?}", self.s)));
        }
        Ok(())
    }
}

/// An element `(j_1, ..., j_r)` of `J_s = {0..m_1} x ... x {0..m_r}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JTuple(pub Vec<usize>);

impl JTuple {
    pub fn zeros(r: usize) -> Self {
        JTuple(vec![0; r])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `(j_2, ..., j_r)`.
    pub fn tail(&self) -> JTuple {
        JTuple(self.0[1..].to_vec())
    }

    pub fn head(&self) -> JTuple {
        JTuple(self.0[..1].to_vec())
    }

    pub fn with_leading_zeros(&self, d: usize) -> JTuple {
        let mut v = vec![0; d];
        v.extend_from_slice(&self.0);
        JTuple(v)
    }
}

impl fmt::Display for JTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for JTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::InvalidIndex(format!("bad entry `{p}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()
            .map(JTuple)
    }
}

/// `J_s` in lexicographic order.
pub fn j_tuples(data: &IndexData) -> Vec<JTuple> {
    tuples_below(&data.m())
}

/// All tuples with `0 <= j_i <= m_i`, lexicographically.
pub fn tuples_below(m: &[usize]) -> Vec<JTuple> {
    let mut out = vec![Vec::new()];
    for &mi in m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=mi).map(move |j| {
                    let mut v = prefix.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(JTuple).collect()
}

/// `a_j(T) = T^(j_1 + ... + j_r)`.
pub fn a_j_at_theta(field: &FqField, j: &JTuple) -> Poly {
    Poly::x(field).pow(j.0.iter().sum::<usize>() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_bipoly;

    fn cache(p: u32) -> CarlitzCache {
        CarlitzCache::new(&FqField::prime(p).unwrap())
    }

    #[test]
    fn small_h() {
        for p in [2, 3, 5] {
            let c = cache(p);
            let q = p as usize;
            let at = at_polynomials(&c, q * q).unwrap();
            for n in 0..q {
                assert!(at.h(n).unwrap().is_one(), "H_{n}, q={q}");
            }
            // H_q = (t^q - t) + (t^q - T^q)
            let expected = parse_bipoly(c.field(), &format!("2*t^{q} - t - T^{q}")).unwrap();
            assert_eq!(at.h(q).unwrap(), &expected);
            // deg_t H_n <= n holds below q^2 but not at n = q^2 (q = 2 gives deg_t H_4 = 7)
            for (n, deg) in t_degree_excess(&at) {
                eprintln!("q={q}: deg_t H_{n} = {deg} exceeds {n}");
                assert_eq!(n, q * q);
            }
        }
        let f2 = FqField::prime(2).unwrap();
        let at = at_polynomials(&cache(2), 2).unwrap();
        assert_eq!(at.h(2).unwrap(), &parse_bipoly(&f2, "t + T^2").unwrap());
    }

    #[test]
    fn round_trip() {
        for p in [2, 3] {
            let c = cache(p);
            let q = p as usize;
            let at = at_polynomials(&c, q * q).unwrap();
            assert!(round_trip_holds(&c, &at));
            let mut broken = at.clone();
            broken.h[q] = BiPoly::one(c.field());
            assert!(!round_trip_holds(&c, &broken));
        }
    }

    #[test]
    fn index_data_examples() {
        let c = Arc::new(cache(3));
        let table = AtTable::new(Arc::clone(&c));
        let f = c.field();
        let ones = table.index_data(&Index::ones(3).unwrap()).unwrap();
        assert_eq!(ones.m(), vec![0, 0, 0]);
        assert_eq!(j_tuples(&ones), vec![JTuple::zeros(3)]);
        assert!(ones.u(2, 0).is_one());

        let d = table.index_data(&Index::new(vec![4]).unwrap()).unwrap();
        assert_eq!(d.m(), vec![3]);
        assert_eq!(d.u(0, 3), &Poly::from_ints(f, &[2]));
        assert!(d.u(0, 2).is_zero());
        assert_eq!(d.u(0, 1), &Poly::from_ints(f, &[-1]));
        assert_eq!(d.u(0, 0), &Poly::from_ints(f, &[0, 0, 0, -1]));
        assert_eq!(j_tuples(&d).len(), 4);
        assert!(d.weights(&JTuple(vec![4])).is_err());
    }

    #[test]
    fn bound_holds_up_to_2q() {
        for p in [2, 3, 5] {
            let table = AtTable::new(Arc::new(cache(p)));
            for s in 1..=2 * p {
                let d = table.index_data(&Index::new(vec![s]).unwrap()).unwrap();
                if s <= p {
                    assert_eq!(d.m(), vec![0]);
                }
            }
        }
    }

    #[test]
    fn tuples() {
        assert_eq!(tuples_below(&[1, 0]), vec![JTuple(vec![0, 0]), JTuple(vec![1, 0])]);
        assert_eq!(tuples_below(&[2, 1, 3]).len(), 3 * 2 * 4);
        let f = FqField::prime(2).unwrap();
        assert!(a_j_at_theta(&f, &JTuple::zeros(2)).is_one());
        assert_eq!(a_j_at_theta(&f, &JTuple(vec![1, 2])), Poly::x(&f).pow(3));
        assert_eq!(a_j_at_theta(&f, &JTuple(vec![3])), Poly::x(&f).pow(3));
    }
}
