//! A[t] = F_q[T, t] and fractions over it with denominators in F_q[t].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::Poly;

/// `sum_j c_j(T) t^j`, stored as the list of T-polynomials `c_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    field: FqField,
    t_coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn zero(field: &FqField) -> Self {
        BiPoly { field: field.clone(), t_coeffs: Vec::new() }
    }

    pub fn one(field: &FqField) -> Self {
        Self::from_theta(Poly::one(field))
    }

    /// Embeds a polynomial in T.
    pub fn from_theta(p: Poly) -> Self {
        Self::from_t_coeffs(&p.field().clone(), vec![p])
    }

    /// Embeds a polynomial in t (the argument's variable is read as t).
    pub fn from_t(p: &Poly) -> Self {
        let f = p.field();
        let t_coeffs = p.coeffs().map(|c| Poly::constant(&c)).collect();
        Self::from_t_coeffs(f, t_coeffs)
    }

    pub fn from_t_coeffs(field: &FqField, mut t_coeffs: Vec<Poly>) -> Self {
        while t_coeffs.last().is_some_and(Poly::is_zero) {
            t_coeffs.pop();
        }
        BiPoly { field: field.clone(), t_coeffs }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.t_coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.t_coeffs.len() == 1 && self.t_coeffs[0].is_one()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.t_coeffs.len().checked_sub(1)
    }

    pub fn theta_degree(&self) -> Option<usize> {
        self.t_coeffs.iter().filter_map(Poly::degree).max()
    }

    /// Coefficient of t^j as a polynomial in T.
    pub fn t_coeff(&self, j: usize) -> Poly {
        self.t_coeffs.get(j).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }

    pub fn t_coeffs(&self) -> &[Poly] {
        &self.t_coeffs
    }

    /// Coefficients of T^k as polynomials in t.
    pub fn theta_slices(&self) -> Vec<Poly> {
        let n = self.theta_degree().map_or(0, |d| d + 1);
        (0..n)
            .map(|k| {
                let raw = self.t_coeffs.iter().map(|c| c.raw().get(k).copied().unwrap_or(0)).collect();
                Poly::from_raw(&self.field, raw)
            })
            .collect()
    }

    /// True when no power of T appears.
    pub fn is_t_only(&self) -> bool {
        self.t_coeffs.iter().all(|c| c.degree().unwrap_or(0) == 0)
    }

    /// Multiplies by a polynomial in t.
    pub fn mul_t(&self, p: &Poly) -> BiPoly {
        self * &BiPoly::from_t(p)
    }

    /// Exact division by a polynomial in t, `None` if it does not divide.
    pub fn div_t_exact(&self, p: &Poly) -> Option<BiPoly> {
        let slices = self
            .theta_slices()
            .iter()
            .map(|s| if s.is_zero() { Some(s.clone()) } else { s.div_exact(p) })
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_theta_slices(&self.field, &slices))
    }

    /// gcd (monic) of all T-slices, a polynomial in t; zero for the zero polynomial.
    pub fn t_content(&self) -> Poly {
        let mut g = Poly::zero(&self.field);
        for s in self.theta_slices() {
            if !s.is_zero() {
                g = Poly::gcd(&g, &s).expect("nonzero");
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    fn from_theta_slices(field: &FqField, slices: &[Poly]) -> BiPoly {
        let n = slices.iter().filter_map(Poly::degree).max().map_or(0, |d| d + 1);
        let t_coeffs = (0..n)
            .map(|j| {
                let raw = slices.iter().map(|s| s.raw().get(j).copied().unwrap_or(0)).collect();
                Poly::from_raw(field, raw)
            })
            .collect();
        Self::from_t_coeffs(field, t_coeffs)
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (a, slice) in self.theta_slices().iter().enumerate().rev() {
            for (b, c) in slice.raw().iter().enumerate().rev() {
                if *c == 0 {
                    continue;
                }
                let tpart = match a {
                    0 => String::new(),
                    1 => "T".into(),
                    a => format!("T^{a}"),
                };
                let lpart = match b {
                    0 => String::new(),
                    1 => "t".into(),
                    b => format!("t^{b}"),
                };
                let mono = match (tpart.is_empty(), lpart.is_empty()) {
                    (true, _) => lpart,
                    (_, true) => tpart,
                    _ => format!("{tpart}*{lpart}"),
                };
                terms.push(crate::text::join_term(&self.field, *c, &mono));
            }
        }
        terms.join("+")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.t_coeffs.len().max(rhs.t_coeffs.len());
        let c = (0..n).map(|j| &self.t_coeff(j) + &rhs.t_coeff(j)).collect();
        BiPoly::from_t_coeffs(&self.field, c)
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.t_coeffs.len().max(rhs.t_coeffs.len());
        let c = (0..n).map(|j| &self.t_coeff(j) - &rhs.t_coeff(j)).collect();
        BiPoly::from_t_coeffs(&self.field, c)
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut out = vec![Poly::zero(&self.field); self.t_coeffs.len() + rhs.t_coeffs.len() - 1];
        for (i, a) in self.t_coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.t_coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        BiPoly::from_t_coeffs(&self.field, out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_t_coeffs(&self.field, self.t_coeffs.iter().map(|c| -c).collect())
    }
}

/// `num / den` with `den` a monic polynomial in t.
///
/// Common t-factors of `den` and the t-content of `num` are cancelled after every
/// operation; equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct BiRat {
    num: BiPoly,
    den: Poly,
}

impl BiRat {
    pub fn new(num: BiPoly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = den.leading().expect("nonzero").inv()?;
        let num = BiPoly::from_t_coeffs(num.field(), num.t_coeffs().iter().map(|c| c.scale(&lead)).collect());
        Ok(BiRat { num, den: den.scale(&lead) }.reduce())
    }

    pub fn from_bipoly(num: BiPoly) -> Self {
        let den = Poly::one(num.field());
        BiRat { num, den }
    }

    pub fn zero(field: &FqField) -> Self {
        Self::from_bipoly(BiPoly::zero(field))
    }

    pub fn one(field: &FqField) -> Self {
        Self::from_bipoly(BiPoly::one(field))
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    /// The denominator, a polynomial in t.
    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn field(&self) -> &FqField {
        self.num.field()
    }

    fn reduce(self) -> Self {
        if self.num.is_zero() {
            return BiRat::zero(self.num.field());
        }
        if self.den.is_one() {
            return self;
        }
        let g = Poly::gcd(&self.num.t_content(), &self.den).expect("nonzero");
        if g.is_one() {
            return self;
        }
        BiRat {
            num: self.num.div_t_exact(&g).expect("content divides"),
            den: self.den.div_exact(&g).expect("gcd divides"),
        }
    }

    /// The value as an element of A[t] when the denominator clears.
    pub fn to_bipoly(&self) -> Option<BiPoly> {
        self.num.div_t_exact(&self.den)
    }

    /// Multiplies by a polynomial in t.
    pub fn mul_t(&self, p: &Poly) -> BiRat {
        BiRat { num: self.num.mul_t(p), den: self.den.clone() }.reduce()
    }

    /// Inverse when the numerator is a polynomial in t alone.
    pub fn try_inv(&self) -> Option<BiRat> {
        if self.num.is_zero() || !self.num.is_t_only() {
            return None;
        }
        let n_t: Vec<_> = self.num.t_coeffs().iter().map(|c| c.coeff(0)).collect();
        let n_t = Poly::from_raw(self.field(), n_t.iter().map(|c| c.raw()).collect());
        BiRat::new(BiPoly::from_t(&self.den), n_t).ok()
    }
}

impl PartialEq for BiRat {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul_t(&other.den) == other.num.mul_t(&self.den)
    }
}

impl fmt::Display for BiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den.format_in("t"))
        }
    }
}

impl fmt::Debug for BiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn birat_add(a: &BiRat, b: &BiRat, negate: bool) -> BiRat {
    let g = Poly::gcd(&a.den, &b.den).expect("nonzero");
    let a_co = b.den.div_exact(&g).expect("gcd divides");
    let b_co = a.den.div_exact(&g).expect("gcd divides");
    let x = a.num.mul_t(&a_co);
    let y = b.num.mul_t(&b_co);
    let num = if negate { &x - &y } else { &x + &y };
    BiRat { num, den: &a.den * &a_co }.reduce()
}

impl Add<&BiRat> for &BiRat {
    type Output = BiRat;
    fn add(self, rhs: &BiRat) -> BiRat {
        birat_add(self, rhs, false)
    }
}

impl Sub<&BiRat> for &BiRat {
    type Output = BiRat;
    fn sub(self, rhs: &BiRat) -> BiRat {
        birat_add(self, rhs, true)
    }
}

impl Mul<&BiRat> for &BiRat {
    type Output = BiRat;
    fn mul(self, rhs: &BiRat) -> BiRat {
        BiRat { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduce()
    }
}

impl Neg for &BiRat {
    type Output = BiRat;
    fn neg(self) -> BiRat {
        BiRat { num: -&self.num, den: self.den.clone() }
    }
}
