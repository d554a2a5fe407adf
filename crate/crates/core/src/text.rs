//! Text forms for field elements, polynomials and rational functions.
//!
//! Grammar: `T` is the variable of A = F_q[T], `t` the second variable of A[t], `u` the
//! residue of x in F_q = F_p[x]/(modulus) when e > 1. Terms are printed in decreasing
//! degree; rational functions as `(<num>)/(<den>)`, or `(<num>)` when the denominator is 1.
//! The parser accepts `+ - * ^ /` and parentheses, so anything the printers emit parses back.

use std::collections::BTreeMap;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField, Raw};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Writes `c * mono`, eliding a unit coefficient and parenthesizing compound coefficients.
pub(crate) fn join_term(field: &FqField, c: Raw, mono: &str) -> String {
    let ct = field.format_raw(c);
    if mono.is_empty() {
        ct
    } else if c == 1 {
        mono.to_string()
    } else if ct.contains('+') {
        format!("({ct})*{mono}")
    } else {
        format!("{ct}*{mono}")
    }
}

pub fn parse_elem(field: &FqField, s: &str) -> Result<FqElem> {
    let v = Parser::new(field, s, false, false).parse_all()?;
    match v.terms.len() {
        0 => Ok(field.zero()),
        1 if v.terms.contains_key(&(0, 0)) => Ok(field.elem_raw(v.terms[&(0, 0)])),
        _ => Err(Error::Parse(format!("`{s}` is not a field element"))),
    }
}

pub fn parse_poly(field: &FqField, s: &str) -> Result<Poly> {
    let v = Parser::new(field, s, true, false).parse_all()?;
    Ok(v.into_poly(field))
}

pub fn parse_bipoly(field: &FqField, s: &str) -> Result<BiPoly> {
    let v = Parser::new(field, s, true, true).parse_all()?;
    let mut rows: Vec<Vec<Raw>> = Vec::new();
    for (&(a, b), &c) in &v.terms {
        if rows.len() <= b {
            rows.resize(b + 1, Vec::new());
        }
        if rows[b].len() <= a {
            rows[b].resize(a + 1, 0);
        }
        rows[b][a] = c;
    }
    Ok(BiPoly::from_t_coeffs(field, rows.into_iter().map(|r| Poly::from_raw(field, r)).collect()))
}

/// Parses `num` or `num / den` where both sides are polynomials in T.
pub fn parse_ratfunc(field: &FqField, s: &str) -> Result<RatFunc> {
    let mut p = Parser::new(field, s, true, false);
    let num = p.expr()?;
    p.skip_ws();
    let den = if p.peek() == Some('/') {
        p.pos += 1;
        p.expr()?
    } else {
        Sparse::constant(1)
    };
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    RatFunc::new(num.into_poly(field), den.into_poly(field))
}

/// Sparse bivariate value `(T-degree, t-degree) -> coefficient`.
#[derive(Clone, Debug)]
struct Sparse {
    terms: BTreeMap<(usize, usize), Raw>,
}

impl Sparse {
    fn constant(c: Raw) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((0, 0), c);
        }
        Sparse { terms }
    }

    fn mono(a: usize, b: usize) -> Self {
        Sparse { terms: BTreeMap::from([((a, b), 1)]) }
    }

    fn add(&self, o: &Sparse, f: &FqField, negate: bool) -> Sparse {
        let mut terms = self.terms.clone();
        for (&k, &c) in &o.terms {
            let c = if negate { f.neg_raw(c) } else { c };
            let e = terms.entry(k).or_insert(0);
            *e = f.add_raw(*e, c);
            if *e == 0 {
                terms.remove(&k);
            }
        }
        Sparse { terms }
    }

    fn mul(&self, o: &Sparse, f: &FqField) -> Sparse {
        let mut terms = BTreeMap::new();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &o.terms {
                let e = terms.entry((a1 + a2, b1 + b2)).or_insert(0);
                *e = f.add_raw(*e, f.mul_raw(c1, c2));
            }
        }
        terms.retain(|_, c| *c != 0);
        Sparse { terms }
    }

    fn into_poly(self, f: &FqField) -> Poly {
        let deg = self.terms.keys().map(|k| k.0).max().map_or(0, |d| d + 1);
        let mut coeffs = vec![0; deg];
        for ((a, _), c) in self.terms {
            coeffs[a] = c;
        }
        Poly::from_raw(f, coeffs)
    }
}

struct Parser<'a> {
    field: &'a FqField,
    chars: Vec<char>,
    pos: usize,
    allow_t_upper: bool,
    allow_t_lower: bool,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(field: &'a FqField, s: &'a str, allow_t_upper: bool, allow_t_lower: bool) -> Self {
        Parser { field, chars: s.chars().collect(), pos: 0, allow_t_upper, allow_t_lower, src: s }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse_all(&mut self) -> Result<Sparse> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected input"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Sparse> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = Sparse::constant(0).add(&first, self.field, negate);
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c @ ('+' | '-')) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, self.field, c == '-');
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                let f = self.factor()?;
                acc = acc.mul(&f, self.field);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let n = self.number()?;
        let mut acc = Sparse::constant(1);
        for _ in 0..n {
            acc = acc.mul(&base, self.field);
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number too large"))
    }

    fn atom(&mut self) -> Result<Sparse> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = u64::from(self.field.p());
                Ok(Sparse::constant((n % p) as Raw))
            }
            Some('u') => {
                self.pos += 1;
                let u = self.field.u().map_err(|_| self.err("`u` requires e > 1"))?;
                Ok(Sparse::constant(u.raw()))
            }
            Some('T') if self.allow_t_upper => {
                self.pos += 1;
                Ok(Sparse::mono(1, 0))
            }
            Some('t') if self.allow_t_lower => {
                self.pos += 1;
                Ok(Sparse::mono(0, 1))
            }
            _ => Err(self.err("unexpected symbol")),
        }
    }
}
