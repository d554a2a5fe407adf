//! Finite multiple zeta values modulo a monic irreducible ℘ of degree d,
//!
//! `zeta(s)_℘ = sum_{d > deg a_1 > ... > deg a_r >= 0} 1 / (a_1^s_1 ... a_r^s_r) mod ℘`
//! (a_i monic), the finite Carlitz multiple polylogarithms
//!
//! `Li_s(z_1, ..., z_r)_℘ = sum_{d > i_1 > ... > i_r >= 0} z_1^(q^i_1) ... z_r^(q^i_r) / (L_i_1^s_1 ... L_i_r^s_r) mod ℘`,
//!
//! and three further ways of computing `zeta(s)_℘`: through the polylogarithms with
//! Anderson-Thakur weights, and through multi-poly-Bernoulli-Carlitz numbers at `n = q^i - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::anderson_thakur::{a_j_at_theta, j_tuples};
use crate::bernoulli::BernoulliCarlitz;
use crate::carlitz::{CarlitzCache, Index};
use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Irreducibility over F_q by the distinct-degree criterion: f of degree d is irreducible iff
/// `gcd(f, T^(q^i) - T) = 1` for every `1 <= i <= d/2`.
pub fn irreducible_test(f: &Poly) -> Result<bool> {
    let d = match f.degree() {
        None => return Err(Error::Precondition("irreducibility of the zero polynomial".into())),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d,
    };
    let field = f.field();
    let q = u64::from(field.q());
    let x = Poly::x(field);
    let mut h = x.rem(f)?;
    for _ in 1..=d / 2 {
        h = h.pow_mod(q, f)?;
        if !Poly::gcd(f, &(&h - &x))?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The q^d monic polynomials of degree d, ordered by the integer `sum c_i q^i` formed from
/// the element indices of the lower coefficients.
pub fn enumerate_monic(field: &FqField, d: usize) -> Vec<Poly> {
    let q = field.q();
    let count = u64::from(q).pow(d as u32);
    (0..count)
        .map(|k| {
            let mut idx = Vec::with_capacity(d + 1);
            let mut rest = k;
            for _ in 0..d {
                idx.push((rest % u64::from(q)) as u32);
                rest /= u64::from(q);
            }
            idx.push(1);
            Poly::from_indices(field, &idx).expect("indices below q")
        })
        .collect()
}

/// Monic irreducibles of degree d in the order of [`enumerate_monic`].
pub fn irreducibles(field: &FqField, d: usize) -> Vec<PrimeModulus> {
    enumerate_monic(field, d)
        .into_iter()
        .filter(|f| d >= 1 && irreducible_test(f).expect("nonzero"))
        .map(|f| PrimeModulus { d, p: f })
        .collect()
}

/// A monic irreducible ℘.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeModulus {
    p: Poly,
    d: usize,
}

impl PrimeModulus {
    pub fn new(p: Poly) -> Result<Self> {
        if p.is_zero() || !p.is_monic() || !irreducible_test(&p)? {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        Ok(PrimeModulus { d: p.degree().expect("nonzero"), p })
    }

    pub fn poly(&self) -> &Poly {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &FqField {
        self.p.field()
    }

    pub fn residue(&self, x: &Poly) -> Residue {
        Residue { value: x.rem(&self.p).expect("nonzero modulus"), modulus: self.clone() }
    }

    pub fn zero(&self) -> Residue {
        self.residue(&Poly::zero(self.field()))
    }

    pub fn one(&self) -> Residue {
        self.residue(&Poly::one(self.field()))
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// An element of A/℘A, kept as its remainder of degree < d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Residue {
    value: Poly,
    modulus: PrimeModulus,
}

impl Residue {
    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn inv(&self) -> Result<Residue> {
        if self.is_zero() {
            return Err(Error::NotInvertibleMod { value: "0".into(), modulus: self.modulus.to_string() });
        }
        let (g, s, _) = Poly::ext_gcd(&self.value, &self.modulus.p)?;
        debug_assert!(g.is_one());
        Ok(self.modulus.residue(&s))
    }

    pub fn pow(&self, n: u64) -> Residue {
        Residue {
            value: self.value.pow_mod(n, &self.modulus.p).expect("nonzero modulus"),
            modulus: self.modulus.clone(),
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add<&Residue> for &Residue {
    type Output = Residue;
    fn add(self, rhs: &Residue) -> Residue {
        Residue { value: &self.value + &rhs.value, modulus: self.modulus.clone() }
    }
}

impl Sub<&Residue> for &Residue {
    type Output = Residue;
    fn sub(self, rhs: &Residue) -> Residue {
        Residue { value: &self.value - &rhs.value, modulus: self.modulus.clone() }
    }
}

impl Mul<&Residue> for &Residue {
    type Output = Residue;
    fn mul(self, rhs: &Residue) -> Residue {
        self.modulus.residue(&(&self.value * &rhs.value))
    }
}

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { value: -&self.value, modulus: self.modulus.clone() }
    }
}

/// `num * den^(-1)` in A/℘A.
pub fn reduce_mod(x: &RatFunc, p: &PrimeModulus) -> Result<Residue> {
    let den = p.residue(x.den());
    if den.is_zero() {
        return Err(Error::NotInvertibleMod { value: x.to_string(), modulus: p.to_string() });
    }
    Ok(&p.residue(x.num()) * &den.inv()?)
}

/// `sum_{bound > i_1 > ... > i_k >= 0} prod_l term(l, i_l)`.
#[allow(clippy::too_many_arguments)]
fn chain<T: Clone>(
    k: usize,
    depth: usize,
    bound: usize,
    zero: &T,
    one: &T,
    add: &impl Fn(&T, &T) -> T,
    mul: &impl Fn(&T, &T) -> T,
    term: &impl Fn(usize, usize) -> Result<T>,
) -> Result<T> {
    if k == depth {
        return Ok(one.clone());
    }
    let mut acc = zero.clone();
    let need = depth - k - 1;
    for i in need..bound {
        let head = term(k, i)?;
        let tail = chain(k + 1, depth, i, zero, one, add, mul, term)?;
        acc = add(&acc, &mul(&head, &tail));
    }
    Ok(acc)
}

fn residue_chain(
    p: &PrimeModulus,
    depth: usize,
    bound: usize,
    term: impl Fn(usize, usize) -> Result<Residue>,
) -> Result<Residue> {
    chain(
        0,
        depth,
        bound,
        &p.zero(),
        &p.one(),
        &|a: &Residue, b: &Residue| a + b,
        &|a: &Residue, b: &Residue| a * b,
        &term,
    )
}

/// `zeta(s)_℘` by direct summation, grouping the monic a of each degree i into
/// `S_i(k) = sum_{deg a = i} a^(-k) mod ℘`.
pub fn fmzv_direct(s: &Index, p: &PrimeModulus) -> Result<Residue> {
    let d = p.degree();
    let mut blocks: Vec<Vec<Residue>> = Vec::with_capacity(d);
    let top = *s.parts().iter().max().expect("nonempty index") as u64;
    for i in 0..d {
        let invs = enumerate_monic(p.field(), i).iter().map(|a| p.residue(a).inv()).collect::<Result<Vec<_>>>()?;
        let by_power = (1..=top).map(|k| invs.iter().fold(p.zero(), |acc, x| &acc + &x.pow(k))).collect();
        blocks.push(by_power);
    }
    let parts = s.parts();
    residue_chain(p, s.depth(), d, |k, i| Ok(blocks[i][parts[k] as usize - 1].clone()))
}

/// `Li_s(z)_℘`, with every `L_i` (i < d) inverted modulo ℘.
pub fn fcmpl_direct(carlitz: &CarlitzCache, s: &Index, z: &[Poly], p: &PrimeModulus) -> Result<Residue> {
    if z.len() != s.depth() {
        return Err(Error::Precondition(format!("{} arguments for an index of depth {}", z.len(), s.depth())));
    }
    let q = carlitz.q();
    let d = p.degree();
    let l_inv = (0..d as u32).map(|i| reduce_mod(&carlitz.l_rat(i).inv()?, p)).collect::<Result<Vec<_>>>()?;
    let zs: Vec<Residue> = z.iter().map(|x| p.residue(x)).collect();
    let parts = s.parts();
    residue_chain(p, s.depth(), d, |k, i| Ok(&zs[k].pow(q.pow(i as u32)) * &l_inv[i].pow(u64::from(parts[k]))))
}

/// `Gamma_s_1 ... Gamma_s_r`, or the first factor divisible by ℘.
pub fn gamma_product(carlitz: &CarlitzCache, s: &Index, p: &PrimeModulus) -> Result<Poly> {
    let mut acc = Poly::one(carlitz.field());
    for &si in s.parts() {
        let g = carlitz.gamma(si);
        if p.poly().divides(&g) {
            return Err(Error::Hypothesis { prime: p.to_string(), factor: format!("Gamma_{si} = {g}") });
        }
        acc = &acc * &g;
    }
    Ok(acc)
}

/// `zeta(s)_℘ = (Gamma_s_1 ... Gamma_s_r)^(-1) sum_{j in J_s} a_j(T) Li_s(u_j)_℘`.
pub fn fmzv_via_cmpl(b: &BernoulliCarlitz, s: &Index, p: &PrimeModulus) -> Result<Residue> {
    let gamma = gamma_product(b.carlitz(), s, p)?;
    let data = b.index_data(s)?;
    let mut acc = p.zero();
    for j in j_tuples(&data) {
        let li = fcmpl_direct(b.carlitz(), s, &data.weights(&j)?, p)?;
        acc = &acc + &(&p.residue(&a_j_at_theta(p.field(), &j)) * &li);
    }
    Ok(&acc * &p.residue(&gamma).inv()?)
}

/// `zeta(s)_℘ = (Gamma_s_1 ... Gamma_s_r)^(-1) sum_j a_j(T)
///   sum_{i=r-1}^{d-1} (1/L_i) BC^{s,j}_{q^i - 1} / BC_{q^i - 1} mod ℘`.
pub fn fmzv_via_mpbcn(b: &BernoulliCarlitz, s: &Index, p: &PrimeModulus) -> Result<Residue> {
    fmzv_via_mpbcn_ones(b, 0, s, p)
}

/// `zeta((1,...,1,s))_℘` with `dd` leading ones:
/// `(Gamma_s_1 ... Gamma_s_r)^(-1) sum_j a_j(T) sum_{d > i_0 > ... > i_dd >= r-1}
///   BC^{s,j}_{q^i_dd - 1} / (L_i_0 ... L_i_dd BC_{q^i_dd - 1}) mod ℘`.
///
/// The sum is formed in k and reduced once.
pub fn fmzv_via_mpbcn_ones(b: &BernoulliCarlitz, dd: usize, s: &Index, p: &PrimeModulus) -> Result<Residue> {
    let c = b.carlitz();
    let gamma = gamma_product(c, s, p)?;
    let f = p.field();
    let q = c.q();
    let d = p.degree();
    let r = s.depth();
    let data = b.index_data(s)?;
    let zero = RatFunc::zero(f);
    let one = RatFunc::one(f);
    let add = |a: &RatFunc, b: &RatFunc| a + b;
    let mul = |a: &RatFunc, b: &RatFunc| a * b;
    let mut total = RatFunc::zero(f);
    for j in j_tuples(&data) {
        let mut inner = RatFunc::zero(f);
        for low in (r - 1)..d {
            let n = q.pow(low as u32) - 1;
            let ratio = &(&b.mpbcn(s, &j, n)? / &b.bc(n)) / &c.l_rat(low as u32);
            if ratio.is_zero() {
                continue;
            }
            // dd further indices strictly between low and d
            let above = chain(0, dd, d, &zero, &one, &add, &mul, &|_, i| {
                Ok(if i > low { c.l_rat(i as u32).inv()? } else { RatFunc::zero(f) })
            })?;
            inner = &inner + &(&ratio * &above);
        }
        total = &total + &(&RatFunc::from_poly(a_j_at_theta(f, &j)) * &inner);
    }
    reduce_mod(&(&total / &RatFunc::from_poly(gamma)), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn modulus(f: &FqField, s: &str) -> PrimeModulus {
        PrimeModulus::new(parse_poly(f, s).unwrap()).unwrap()
    }

    /// Inverse by exhaustive search over residues.
    fn brute_inv(x: &Residue) -> Residue {
        let p = x.modulus();
        let d = p.degree();
        for deg in 0..d {
            for a in enumerate_monic(p.field(), deg) {
                for c in p.field().elements().filter(|c| !c.is_zero()) {
                    let cand = p.residue(&a.scale(&c));
                    if (&cand * x).value().is_one() {
                        return cand;
                    }
                }
            }
        }
        panic!("no inverse for {x}");
    }

    #[test]
    fn irreducibility() {
        let f3 = FqField::prime(3).unwrap();
        assert!(irreducible_test(&Poly::x(&f3)).unwrap());
        assert!(!irreducible_test(&parse_poly(&f3, "T^2").unwrap()).unwrap());
        assert!(irreducible_test(&parse_poly(&f3, "T^2+1").unwrap()).unwrap());
        assert!(irreducible_test(&Poly::zero(&f3)).is_err());
        assert!(PrimeModulus::new(parse_poly(&f3, "2*T^2+2").unwrap()).is_err());

        // trial division by every monic of degree <= d/2
        for f in [FqField::prime(2).unwrap(), f3, FqField::new(2, 2, None).unwrap()] {
            for d in 1..=4 {
                for g in enumerate_monic(&f, d) {
                    let reducible = (1..=d / 2).any(|k| enumerate_monic(&f, k).iter().any(|h| h.divides(&g)));
                    assert_eq!(irreducible_test(&g).unwrap(), !reducible, "{g}");
                }
            }
        }
    }

    #[test]
    fn irreducible_counts() {
        let f2 = FqField::prime(2).unwrap();
        let f3 = FqField::prime(3).unwrap();
        let c2: Vec<usize> = (1..=5).map(|d| irreducibles(&f2, d).len()).collect();
        let c3: Vec<usize> = (1..=4).map(|d| irreducibles(&f3, d).len()).collect();
        assert_eq!(c2, vec![2, 1, 2, 3, 6]);
        assert_eq!(c3, vec![3, 3, 8, 18]);
    }

    #[test]
    fn monic_enumeration() {
        let f2 = FqField::prime(2).unwrap();
        assert_eq!(enumerate_monic(&f2, 0), vec![Poly::one(&f2)]);
        assert_eq!(enumerate_monic(&f2, 1), vec![Poly::x(&f2), parse_poly(&f2, "T+1").unwrap()]);
        assert_eq!(enumerate_monic(&FqField::prime(3).unwrap(), 3).len(), 27);
    }

    #[test]
    fn residue_inverse_matches_search() {
        let f3 = FqField::prime(3).unwrap();
        let p = modulus(&f3, "T^2+1");
        for deg in 0..2 {
            for a in enumerate_monic(&f3, deg) {
                let x = p.residue(&a.scale(&f3.from_int(2)));
                assert_eq!(x.inv().unwrap(), brute_inv(&x));
            }
        }
        assert!(p.zero().inv().is_err());
    }

    #[test]
    fn reduction() {
        let f2 = FqField::prime(2).unwrap();
        let p = modulus(&f2, "T^2+T+1");
        let x = RatFunc::from_poly(parse_poly(&f2, "T^3").unwrap());
        assert!(reduce_mod(&x, &p).unwrap().value().is_one());
        let c = CarlitzCache::new(&f2);
        assert!(reduce_mod(&c.l_rat(1).inv().unwrap(), &p).is_ok());
        let bad = RatFunc::from_poly(p.poly().clone()).inv().unwrap();
        assert!(reduce_mod(&bad, &p).is_err());
    }

    #[test]
    fn degree_blocks_are_inverse_l() {
        for f in [FqField::prime(2).unwrap(), FqField::prime(3).unwrap()] {
            let c = CarlitzCache::new(&f);
            for d in 1..=3 {
                for p in irreducibles(&f, d) {
                    for i in 0..d {
                        let sum =
                            enumerate_monic(&f, i).iter().fold(p.zero(), |acc, a| &acc + &brute_inv(&p.residue(a)));
                        assert_eq!(sum, reduce_mod(&c.l_rat(i as u32).inv().unwrap(), &p).unwrap(), "i={i} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn direct_examples() {
        let f3 = FqField::prime(3).unwrap();
        let lin = modulus(&f3, "T+1");
        let s1 = Index::new(vec![1]).unwrap();
        assert!(fmzv_direct(&s1, &lin).unwrap().value().is_one());
        assert!(fmzv_direct(&Index::new(vec![1, 1]).unwrap(), &lin).unwrap().is_zero());

        let p = modulus(&f3, "T^2+1");
        let mut expected = p.one();
        for a in enumerate_monic(&f3, 1) {
            expected = &expected + &brute_inv(&p.residue(&a));
        }
        assert_eq!(fmzv_direct(&s1, &p).unwrap(), expected);

        // depth 2, weights (2, 1) by enumerating pairs of monics
        let s = Index::new(vec![2, 1]).unwrap();
        let mut expected = p.zero();
        for a1 in enumerate_monic(&f3, 1) {
            let inv = brute_inv(&p.residue(&a1));
            expected = &expected + &(&inv * &inv);
        }
        assert_eq!(fmzv_direct(&s, &p).unwrap(), expected);
    }

    #[test]
    fn fcmpl_examples() {
        let f2 = FqField::prime(2).unwrap();
        let c = CarlitzCache::new(&f2);
        let p = modulus(&f2, "T^2+T+1");
        let s = Index::new(vec![1]).unwrap();
        // 1 + 1/L_1 with L_1 = T + T^2 = 1 mod ℘
        assert!(fcmpl_direct(&c, &s, &[Poly::one(&f2)], &p).unwrap().is_zero());
        let lin = modulus(&f2, "T");
        let z = parse_poly(&f2, "T+1").unwrap();
        assert!(fcmpl_direct(&c, &s, std::slice::from_ref(&z), &lin).unwrap().value().is_one());
        let s2 = Index::new(vec![1, 1]).unwrap();
        assert!(fcmpl_direct(&c, &s2, &[z.clone(), z], &lin).unwrap().is_zero());
    }

    #[test]
    fn formula_routes_agree() {
        let f3 = FqField::prime(3).unwrap();
        let b3 = BernoulliCarlitz::new(&f3);
        let p = modulus(&f3, "T^2+1");
        let s = Index::new(vec![4]).unwrap();
        assert_eq!(fmzv_via_cmpl(&b3, &s, &p).unwrap(), fmzv_direct(&s, &p).unwrap());
        let s = Index::new(vec![2]).unwrap();
        assert_eq!(
            fmzv_via_mpbcn_ones(&b3, 1, &s, &p).unwrap(),
            fmzv_direct(&Index::new(vec![1, 2]).unwrap(), &p).unwrap()
        );

        let f2 = FqField::prime(2).unwrap();
        let b2 = BernoulliCarlitz::new(&f2);
        let p = modulus(&f2, "T^3+T+1");
        let s = Index::new(vec![1, 2]).unwrap();
        assert_eq!(fmzv_via_mpbcn(&b2, &s, &p).unwrap(), fmzv_direct(&s, &p).unwrap());
        assert_eq!(fmzv_via_mpbcn_ones(&b2, 0, &s, &p).unwrap(), fmzv_via_mpbcn(&b2, &s, &p).unwrap());
        assert!(fmzv_via_mpbcn_ones(&b2, 2, &s, &p).unwrap().is_zero());
    }

    #[test]
    fn hypothesis_is_reported() {
        let f2 = FqField::prime(2).unwrap();
        let b = BernoulliCarlitz::new(&f2);
        let p = modulus(&f2, "T");
        let s = Index::new(vec![3]).unwrap();
        match fmzv_via_cmpl(&b, &s, &p) {
            Err(Error::Hypothesis { factor, .. }) => assert!(factor.starts_with("Gamma_3")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(fmzv_via_mpbcn(&b, &s, &p), Err(Error::Hypothesis { .. })));
    }
}
