//! The finite field F_q, q = p^e.
//!
//! Elements are stored as a single byte holding the index `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! of their coefficient vector in `F_p[x]/(modulus)`. All arithmetic goes through lookup tables
//! built once per field, so a [`FqField`] is cheap to clone and share between threads.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on q.
pub const DEFAULT_MAX_Q: u32 = 64;

/// Raw element index; the byte representation caps q at 256.
pub(crate) type Raw = u8;

const HARD_MAX_Q: u32 = 256;

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Monic, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    add: Vec<Raw>,
    mul: Vec<Raw>,
    neg: Vec<Raw>,
    inv: Vec<Raw>,
}

/// Description of F_q. Immutable once created.
#[derive(Clone)]
pub struct FqField(Arc<Tables>);

impl FqField {
    /// Creates F_{p^e} with the default size limit.
    ///
    /// When `modulus` is `None` and `e > 1`, the lexicographically smallest monic irreducible
    /// polynomial of degree `e` is used: candidates are ordered by the integer
    /// `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` of their non-leading coefficients.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_limit(p, e, modulus, DEFAULT_MAX_Q)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_limit(p: u32, e: u32, modulus: Option<&[u32]>, max_q: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let limit = max_q.min(HARD_MAX_Q);
        let q = p.checked_pow(e).filter(|&q| q <= limit).ok_or(Error::FieldTooLarge { p, e, limit })?;

        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.to_vec();
                if m.len() != e as usize + 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients in [0, {p}), got {m:?}",
                        e + 1
                    )));
                }
                if m[e as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !fp_irreducible(&m, p) {
                    return Err(Error::InvalidModulus(format!("{m:?} is reducible over F_{p}")));
                }
                m
            }
            None if e == 1 => vec![0, 1],
            None => smallest_irreducible(p, e),
        };

        Ok(FqField(Arc::new(build_tables(p, e, q, modulus))))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients over F_p, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn same_as(&self, other: &FqField) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }

    pub fn zero(&self) -> FqElem {
        self.elem_raw(0)
    }

    pub fn one(&self) -> FqElem {
        self.elem_raw(1)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.0.p as i64;
        self.elem_raw(n.rem_euclid(p) as Raw)
    }

    /// Element with the given index (`c_0 + c_1 p + ...`).
    pub fn elem(&self, index: u32) -> Result<FqElem> {
        if index >= self.0.q {
            return Err(Error::Parse(format!("element index {index} out of range for q = {}", self.0.q)));
        }
        Ok(self.elem_raw(index as Raw))
    }

    /// Element with the given coefficient vector over F_p (low degree first).
    pub fn elem_from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        if coeffs.len() > self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!("bad coefficient vector {coeffs:?}")));
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.0.p + c;
        }
        self.elem(idx)
    }

    /// The residue of `x` (printed `u`); only meaningful when `e > 1`.
    pub fn u(&self) -> Result<FqElem> {
        if self.0.e == 1 {
            return Err(Error::Parse("symbol `u` is only defined for e > 1".into()));
        }
        Ok(self.elem_raw(self.0.p as Raw))
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q).map(move |v| self.elem_raw(v as Raw))
    }

    /// Smallest element (by index) of multiplicative order q - 1.
    pub fn generator(&self) -> FqElem {
        let order = u64::from(self.0.q - 1);
        self.elements().skip(1).find(|a| a.multiplicative_order() == order).expect("F_q^x is cyclic")
    }

    pub(crate) fn elem_raw(&self, v: Raw) -> FqElem {
        FqElem { field: self.clone(), v }
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: Raw, b: Raw) -> Raw {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: Raw, b: Raw) -> Raw {
        self.add_raw(a, self.0.neg[b as usize])
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: Raw, b: Raw) -> Raw {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: Raw) -> Raw {
        self.0.neg[a as usize]
    }

    /// Inverse of a nonzero raw element; 0 maps to 0.
    #[inline]
    pub(crate) fn inv_raw(&self, a: Raw) -> Raw {
        self.0.inv[a as usize]
    }

    pub(crate) fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Text form of a raw element: an integer when e = 1, a polynomial in `u` otherwise.
    pub(crate) fn format_raw(&self, v: Raw) -> String {
        let p = self.0.p;
        if self.0.e == 1 {
            return v.to_string();
        }
        let mut digits = Vec::with_capacity(self.0.e as usize);
        let mut x = u32::from(v);
        for _ in 0..self.0.e {
            digits.push(x % p);
            x /= p;
        }
        let mut terms = Vec::new();
        for (k, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}*u"),
                (k, 1) => format!("u^{k}"),
                (k, c) => format!("{c}*u^{k}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.e > 1 {
            write!(f, " (modulus {:?})", self.0.modulus)?;
        }
        Ok(())
    }
}

/// An element of F_q.
#[derive(Clone)]
pub struct FqElem {
    field: FqField,
    v: Raw,
}

impl FqElem {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// Index `c_0 + c_1 p + ...` of the coefficient vector.
    pub fn index(&self) -> u32 {
        u32::from(self.v)
    }

    /// Coefficient vector over F_p, low degree first, length e.
    pub fn coeffs(&self) -> Vec<u32> {
        let p = self.field.p();
        let mut x = u32::from(self.v);
        (0..self.field.e())
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    pub fn inv(&self) -> Result<FqElem> {
        if self.v == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.field.elem_raw(self.field.inv_raw(self.v)))
    }

    pub fn pow(&self, mut n: u64) -> FqElem {
        let f = &self.field;
        let mut base = self.v;
        let mut acc: Raw = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = f.mul_raw(acc, base);
            }
            base = f.mul_raw(base, base);
            n >>= 1;
        }
        f.elem_raw(acc)
    }

    /// The absolute Frobenius a -> a^p.
    pub fn frobenius(&self) -> FqElem {
        self.pow(u64::from(self.field.p()))
    }

    /// Order in F_q^x; 0 for the zero element.
    pub fn multiplicative_order(&self) -> u64 {
        if self.v == 0 {
            return 0;
        }
        let f = &self.field;
        let mut x = self.v;
        let mut k = 1;
        while x != 1 {
            x = f.mul_raw(x, self.v);
            k += 1;
        }
        k
    }

    pub(crate) fn raw(&self) -> Raw {
        self.v
    }

    fn check(&self, other: &FqElem) {
        assert!(self.field.same_as(&other.field), "mixing elements of {:?} and {:?}", self.field, other.field);
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.field.same_as(&other.field)
    }
}

impl Eq for FqElem {}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_raw(self.v))
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! elem_binop {
    ($tr:ident, $method:ident, $raw:ident) => {
        impl $tr<&FqElem> for &FqElem {
            type Output = FqElem;
            fn $method(self, rhs: &FqElem) -> FqElem {
                self.check(rhs);
                self.field.elem_raw(self.field.$raw(self.v, rhs.v))
            }
        }
        impl $tr for FqElem {
            type Output = FqElem;
            fn $method(self, rhs: FqElem) -> FqElem {
                (&self).$method(&rhs)
            }
        }
    };
}

elem_binop!(Add, add, add_raw);
elem_binop!(Sub, sub, sub_raw);
elem_binop!(Mul, mul, mul_raw);

impl Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        self.field.elem_raw(self.field.neg_raw(self.v))
    }
}

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        -&self
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Small dense polynomial helpers over F_p, used only while setting up a field.

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let mut b = b.to_vec();
    fp_trim(&mut b);
    let db = b.len() - 1;
    let inv_lead = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * inv_lead % p;
        for (k, &bk) in b.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - c * bk % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero element of F_p")
}

/// Monic polynomial of degree `d` whose lower coefficients have index `idx`.
fn fp_monic_from_index(mut idx: u32, d: u32, p: u32) -> Vec<u32> {
    let mut m = Vec::with_capacity(d as usize + 1);
    for _ in 0..d {
        m.push(idx % p);
        idx /= p;
    }
    m.push(1);
    m
}

/// Irreducibility of a monic polynomial over F_p by trial division with every monic
/// polynomial of degree at most half its degree.
fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let n = (f.len() - 1) as u32;
    for d in 1..=n / 2 {
        for idx in 0..p.pow(d) {
            let g = fp_monic_from_index(idx, d, p);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|idx| fp_monic_from_index(idx, e, p))
        .find(|m| fp_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

fn build_tables(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Tables {
    let qs = q as usize;
    let decode = |mut v: u32| -> Vec<u32> {
        (0..e)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    };
    let encode = |c: &[u32]| -> Raw {
        let mut v = 0u32;
        for &x in c.iter().rev() {
            v = v * p + x;
        }
        v as Raw
    };
    let vecs: Vec<Vec<u32>> = (0..q).map(decode).collect();

    let mut add = vec![0; qs * qs];
    let mut mul = vec![0; qs * qs];
    for a in 0..qs {
        for b in 0..qs {
            let s: Vec<u32> = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| (x + y) % p).collect();
            add[a * qs + b] = encode(&s);

            let mut prod = vec![0u32; 2 * e as usize - 1];
            for (i, x) in vecs[a].iter().enumerate() {
                for (j, y) in vecs[b].iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = fp_rem(&prod, &modulus, p);
            r.resize(e as usize, 0);
            mul[a * qs + b] = encode(&r);
        }
    }
    let mut neg = vec![0; qs];
    let mut inv = vec![0; qs];
    for a in 0..qs {
        neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as Raw;
        if a != 0 {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as Raw;
        }
    }
    Tables { p, e, q, modulus, add, mul, neg, inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<FqField> {
        let mut out = Vec::new();
        for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23] {
            for e in 1..=4 {
                if p.pow(e) <= 25 {
                    out.push(FqField::new(p, e, None).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn prime_field_creation() {
        let f = FqField::new(3, 1, None).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.elements().count(), 3);
    }

    #[test]
    fn f4_default_modulus() {
        let f = FqField::new(2, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f9_accepts_given_modulus() {
        // x^2 + 2x + 2 has no root in F_3, so a quadratic is irreducible.
        let m = [2u32, 2, 1];
        for x in 0..3u32 {
            assert_ne!((x * x + 2 * x + 2) % 3, 0);
        }
        let f = FqField::new(3, 2, Some(&m)).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.modulus(), &m);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FqField::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FqField::new(2, 2, Some(&[1, 0, 1])), Err(Error::InvalidModulus(_))));
        assert!(matches!(FqField::new(3, 2, Some(&[1, 1])), Err(Error::InvalidModulus(_))));
        assert!(matches!(FqField::new(2, 7, None), Err(Error::FieldTooLarge { .. })));
        assert!(FqField::with_limit(2, 7, None, 128).is_ok());
    }

    #[test]
    fn inverses() {
        let f = FqField::prime(3).unwrap();
        assert_eq!(f.one().inv().unwrap(), f.one());
        assert_eq!(f.from_int(2).inv().unwrap(), f.from_int(2));
        assert_eq!(f.zero().inv().unwrap_err(), Error::ZeroInverse);

        let f4 = FqField::new(2, 2, None).unwrap();
        let u = f4.u().unwrap();
        assert_eq!(u.inv().unwrap(), &u + &f4.one());
    }

    #[test]
    fn generators() {
        assert_eq!(FqField::prime(2).unwrap().generator().index(), 1);
        assert_eq!(FqField::prime(3).unwrap().generator().index(), 2);
        // brute force: 2 has order 4 in F_5, 3 too but is larger
        let f5 = FqField::prime(5).unwrap();
        let order = |a: u64| (1..=4).find(|&k| a.pow(k as u32) % 5 == 1).unwrap();
        assert_eq!(order(2), 4);
        assert_eq!(f5.generator().index(), 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let q = u64::from(f.q());
            let g = f.generator();
            for n in 0..=2 * (q - 1) {
                assert_eq!(g.pow(n).is_one(), n % (q - 1) == 0, "{f:?} n={n}");
            }
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(a.inv().unwrap().inv().unwrap(), a);
                    assert!(a.pow(q - 1).is_one());
                }
                for b in f.elements() {
                    assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
                    assert_eq!(&(&a - &b) + &b, a);
                }
            }
        }
    }

    #[test]
    fn text_form() {
        let f4 = FqField::new(2, 2, None).unwrap();
        let u = f4.u().unwrap();
        assert_eq!((&u + &f4.one()).to_string(), "u+1");
        assert_eq!(f4.zero().to_string(), "0");
        let f9 = FqField::new(3, 2, None).unwrap();
        assert_eq!(f9.elem_from_coeffs(&[1, 2]).unwrap().to_string(), "2*u+1");
        assert_eq!(FqField::prime(5).unwrap().from_int(-1).to_string(), "4");
    }

    #[test]
    #[should_panic(expected = "mixing")]
    fn cross_field_mixing_panics() {
        let a = FqField::prime(3).unwrap().one();
        let b = FqField::prime(5).unwrap().one();
        let _ = a + b;
    }
}
