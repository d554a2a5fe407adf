//! Elements of k = F_q(T) in canonical form.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField};
use crate::poly::Poly;

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = Poly::gcd(&num, &den)?;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lead = den.leading().expect("nonzero").inv()?;
        Ok(RatFunc { num: num.scale(&lead), den: den.scale(&lead) })
    }

    /// Skips reduction; caller guarantees the invariants.
    fn from_reduced(num: Poly, den: Poly) -> Self {
        debug_assert!(den.is_monic());
        RatFunc { num, den }
    }

    pub fn zero(field: &FqField) -> Self {
        RatFunc { num: Poly::zero(field), den: Poly::one(field) }
    }

    pub fn one(field: &FqField) -> Self {
        RatFunc { num: Poly::one(field), den: Poly::one(field) }
    }

    pub fn constant(c: &FqElem) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn field(&self) -> &FqField {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a polynomial when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let lead = self.num.leading().expect("nonzero").inv()?;
        Ok(RatFunc::from_reduced(self.den.scale(&lead), self.num.scale(&lead)))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, n: i64) -> Result<RatFunc> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs();
        // powers of coprime polynomials stay coprime
        Ok(RatFunc::from_reduced(base.num.pow(k), base.den.pow(k)))
    }

    /// `self^(q^i)`; Frobenius preserves coprimality and monicity.
    pub fn frobenius(&self, i: u32) -> RatFunc {
        RatFunc::from_reduced(self.num.frobenius(i), self.den.frobenius(i))
    }

    pub fn scale(&self, c: &FqElem) -> RatFunc {
        RatFunc::from_reduced(self.num.scale(c), self.den.clone()).normalize_zero()
    }

    fn normalize_zero(self) -> RatFunc {
        if self.num.is_zero() {
            RatFunc::zero(self.num.field())
        } else {
            self
        }
    }
}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn add_sub(a: &RatFunc, b: &RatFunc, negate: bool) -> RatFunc {
    let combine = |x: &Poly, y: &Poly| if negate { x - y } else { x + y };
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate { -b } else { b.clone() };
    }
    if a.den == b.den {
        let num = combine(&a.num, &b.num);
        if a.den.is_one() {
            return RatFunc::from_reduced(num, a.den.clone());
        }
        return RatFunc::new(num, a.den.clone()).expect("nonzero denominator");
    }
    // Henrici: with g = gcd(b1, b2), only g can share factors with the new numerator.
    let g = Poly::gcd(&a.den, &b.den).expect("nonzero denominators");
    if g.is_one() {
        let num = combine(&(&a.num * &b.den), &(&b.num * &a.den));
        return RatFunc::from_reduced(num, &a.den * &b.den).normalize_zero();
    }
    let a_den_g = a.den.div_exact(&g).expect("gcd divides");
    let b_den_g = b.den.div_exact(&g).expect("gcd divides");
    let num = combine(&(&a.num * &b_den_g), &(&b.num * &a_den_g));
    if num.is_zero() {
        return RatFunc::zero(a.field());
    }
    let g2 = Poly::gcd(&num, &g).expect("nonzero");
    let num = num.div_exact(&g2).expect("gcd divides");
    let den = &a_den_g * &b.den.div_exact(&g2).expect("gcd divides");
    RatFunc::from_reduced(num, den)
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add_sub(self, rhs, false)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add_sub(self, rhs, true)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_reduced(&self.num * &rhs.num, self.den.clone());
        }
        let g1 = Poly::gcd(&self.num, &rhs.den).expect("nonzero");
        let g2 = Poly::gcd(&rhs.num, &self.den).expect("nonzero");
        let cut = |x: &Poly, g: &Poly| if g.is_one() { x.clone() } else { x.div_exact(g).expect("gcd divides") };
        let num = &cut(&self.num, &g1) * &cut(&rhs.num, &g2);
        let den = &cut(&self.den, &g2) * &cut(&rhs.den, &g1);
        RatFunc::from_reduced(num, den)
    }
}

/// Panics on division by zero; see [`RatFunc::checked_div`].
impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero in k")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::from_reduced(-&self.num, self.den.clone())
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rat(p: u32) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        let c = prop::collection::vec(0..i64::from(p), 0..6);
        (c.clone(), c)
    }

    fn build(f: &FqField, (n, d): &(Vec<i64>, Vec<i64>)) -> Option<RatFunc> {
        RatFunc::new(Poly::from_ints(f, n), Poly::from_ints(f, d)).ok()
    }

    #[test]
    fn canonical_form() {
        let f = FqField::prime(3).unwrap();
        // (2T^2 + 2T) / (2T) = (T + 1) / 1
        let r = RatFunc::new(Poly::from_ints(&f, &[0, 2, 2]), Poly::from_ints(&f, &[0, 2])).unwrap();
        assert_eq!(r, RatFunc::from_poly(Poly::from_ints(&f, &[1, 1])));
        assert_eq!(RatFunc::new(Poly::one(&f), Poly::zero(&f)).unwrap_err(), Error::DivisionByZero);
        assert_eq!(RatFunc::zero(&f).inv().unwrap_err(), Error::ZeroInverse);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_laws(a in arb_rat(3), b in arb_rat(3), c in arb_rat(3)) {
            let f = FqField::prime(3).unwrap();
            let (Some(a), Some(b), Some(c)) = (build(&f, &a), build(&f, &b), build(&f, &c)) else {
                return Ok(());
            };
            prop_assert!(a.den().is_monic());
            prop_assert!(Poly::gcd(a.num(), a.den()).unwrap().is_one());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert_eq!(a.frobenius(1), a.pow(3).unwrap());
        }
    }
}
