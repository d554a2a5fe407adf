//! Dense univariate polynomials over F_q.
//!
//! A [`Poly`] is an element of A = F_q[T]. The same type is reused for polynomials in the
//! second variable `t` wherever only one variable is involved (the Anderson-Thakur
//! denominators live in F_q[t]).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField, Raw};

#[derive(Clone)]
pub struct Poly {
    field: FqField,
    /// Low degree first, no trailing zeros.
    coeffs: Vec<Raw>,
}

impl Poly {
    pub fn zero(field: &FqField) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FqField) -> Self {
        Poly { field: field.clone(), coeffs: vec![1] }
    }

    /// The variable T (or t).
    pub fn x(field: &FqField) -> Self {
        Self::monomial(&field.one(), 1)
    }

    pub fn constant(c: &FqElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: &FqElem, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(c.field());
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.raw();
        Poly { field: c.field().clone(), coeffs }
    }

    /// Builds a polynomial from element indices, low degree first.
    pub fn from_indices(field: &FqField, indices: &[u32]) -> Result<Self> {
        let coeffs = indices.iter().map(|&i| field.elem(i).map(|e| e.raw())).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(field, coeffs))
    }

    /// Builds a polynomial over the prime subfield from integers, low degree first.
    pub fn from_ints(field: &FqField, ints: &[i64]) -> Self {
        let coeffs = ints.iter().map(|&n| field.from_int(n).raw()).collect();
        Self::from_raw(field, coeffs)
    }

    pub(crate) fn from_raw(field: &FqField, mut coeffs: Vec<Raw>) -> Self {
        trim(&mut coeffs);
        Poly { field: field.clone(), coeffs }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.field.elem_raw(self.coeffs.get(k).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = FqElem> + '_ {
        self.coeffs.iter().map(|&c| self.field.elem_raw(c))
    }

    pub(crate) fn raw(&self) -> &[Raw] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<FqElem> {
        self.coeffs.last().map(|&c| self.field.elem_raw(c))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// `self` scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&l) => self.scale_raw(self.field.inv_raw(l)),
        }
    }

    pub fn scale(&self, c: &FqElem) -> Poly {
        self.check(c.field());
        self.scale_raw(c.raw())
    }

    fn scale_raw(&self, c: Raw) -> Poly {
        if c == 0 {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&a| f.mul_raw(a, c)).collect() }
    }

    /// Multiplication by T^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^(q^i)`, i.e. the substitution T -> T^(q^i); coefficients are fixed since they lie in F_q.
    pub fn frobenius(&self, i: u32) -> Poly {
        if self.is_zero() || i == 0 {
            return self.clone();
        }
        let step = (self.field.q() as usize).pow(i);
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * step + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = c;
        }
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        self.check(x.field());
        let f = &self.field;
        let mut acc: Raw = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add_raw(f.mul_raw(acc, x.raw()), c);
        }
        f.elem_raw(acc)
    }

    /// Euclidean division: `self = quot * b + rem` with `deg rem < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.check(&b.field);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = divmod_raw(&self.field, &self.coeffs, &b.coeffs);
        Ok((Poly::from_raw(&self.field, q), Poly::from_raw(&self.field, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        self.check(&b.field);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        rem_in_place(&self.field, &mut r, &b.coeffs);
        Ok(Poly::from_raw(&self.field, r))
    }

    /// Quotient when `b` divides `self`, `None` otherwise.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        let (q, r) = self.divmod(b).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
        a.check(&b.field);
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        Ok(Poly::from_raw(&a.field, gcd_raw(&a.field, &a.coeffs, &b.coeffs)).monic())
    }

    /// Extended Euclid: returns `(g, s, t)` with `g = s a + t b` and `g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        a.check(&b.field);
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let f = &a.field;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = r0.leading().expect("nonzero gcd").inv()?;
        Ok((r0.scale(&l), s0.scale(&l), t0.scale(&l)))
    }

    /// `self^n mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut n: u64, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            n >>= 1;
            if n > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    fn check(&self, other: &FqField) {
        assert!(self.field.same_as(other), "mixing polynomials over {:?} and {:?}", self.field, other);
    }

    /// Formats with the given variable name.
    pub fn format_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}^{k}"),
            };
            terms.push(crate::text::join_term(&self.field, c, &mono));
        }
        terms.join("+")
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same_as(&other.field)
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in("T"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(&rhs.field);
        Poly::from_raw(&self.field, add_raw(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check(&rhs.field);
        Poly::from_raw(&self.field, sub_raw(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check(&rhs.field);
        Poly::from_raw(&self.field, mul_raw(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg_raw(c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn trim(v: &mut Vec<Raw>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn add_raw(f: &FqField, a: &[Raw], b: &[Raw]) -> Vec<Raw> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add_raw(*o, s);
    }
    out
}

fn sub_raw(f: &FqField, a: &[Raw], b: &[Raw]) -> Vec<Raw> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = f.sub_raw(*o, s);
    }
    out
}

pub(crate) fn mul_raw(f: &FqField, a: &[Raw], b: &[Raw]) -> Vec<Raw> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if f.is_prime_field() {
        let p = u64::from(f.p());
        let mut acc = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = u64::from(x);
            for (slot, &y) in acc[i..].iter_mut().zip(b) {
                *slot += x * u64::from(y);
            }
        }
        acc.into_iter().map(|v| (v % p) as Raw).collect()
    } else {
        let mut out = vec![0 as Raw; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (slot, &y) in out[i..].iter_mut().zip(b) {
                *slot = f.add_raw(*slot, f.mul_raw(x, y));
            }
        }
        out
    }
}

/// Reduces `r` modulo `b` (nonzero, trimmed) in place; result is trimmed.
fn rem_in_place(f: &FqField, r: &mut Vec<Raw>, b: &[Raw]) {
    trim(r);
    let db = b.len() - 1;
    let inv_lead = f.inv_raw(b[db]);
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul_raw(r[top], inv_lead);
        if c != 0 {
            let shift = top - db;
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = f.sub_raw(r[shift + k], f.mul_raw(c, bk));
            }
        }
        r.pop();
        trim(r);
    }
}

fn divmod_raw(f: &FqField, a: &[Raw], b: &[Raw]) -> (Vec<Raw>, Vec<Raw>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv_lead = f.inv_raw(b[db]);
    let mut q = vec![0; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul_raw(r[top], inv_lead);
        let shift = top - db;
        q[shift] = c;
        if c != 0 {
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = f.sub_raw(r[shift + k], f.mul_raw(c, bk));
            }
        }
        r.pop();
    }
    trim(&mut r);
    (q, r)
}

fn gcd_raw(f: &FqField, a: &[Raw], b: &[Raw]) -> Vec<Raw> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        rem_in_place(f, &mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    x
}
