//! Exact-rational bivariate polynomials and their `c*x^i*y^k` text form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `Σ c_{i,k} x^i y^k` with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

/// An integer polynomial `num / den` prepared for evaluating many integer points.
#[derive(Clone, Debug)]
pub struct ScaledIntPoly {
    den: BigInt,
    terms: Vec<((u32, u32), BigInt)>,
    max_x: u32,
    max_y: u32,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn monomial(c: BigRational, i: u32, k: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, k, c);
        p
    }

    /// Build from `(i, k, c)` triples with integer coefficients.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        let mut p = Self::zero();
        for &(i, k, c) in terms {
            p.add_term(i, k, BigRational::from_integer(c.into()));
        }
        p
    }

    pub fn add_term(&mut self, i: u32, k: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, k)).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, k));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^i y^k`.
    pub fn coeff(&self, i: u32, k: u32) -> BigRational {
        self.terms
            .get(&(i, k))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigRational)> {
        self.terms.iter().map(|(&(i, k), c)| (i, k, c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, k)| i + k).max()
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|&(i, k)| i + k);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(&m, v)| (m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        let mut p = Self::zero();
        for (&(i, k), c) in &self.terms {
            if i > 0 {
                p.add_term(i - 1, k, c * BigInt::from(i));
            }
        }
        p
    }

    pub fn partial_y(&self) -> Self {
        let mut p = Self::zero();
        for (&(i, k), c) in &self.terms {
            if k > 0 {
                p.add_term(i, k - 1, c * BigInt::from(k));
            }
        }
        p
    }

    /// `∂²/∂x² + ∂²/∂y²`.
    pub fn laplacian(&self) -> Self {
        &self.partial_x().partial_x() + &self.partial_y().partial_y()
    }

    /// Exact value at a rational point, Horner in `x` per power of `y`.
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut by_y: BTreeMap<u32, BTreeMap<u32, &BigRational>> = BTreeMap::new();
        for (&(i, k), c) in &self.terms {
            by_y.entry(k).or_default().insert(i, c);
        }
        let horner = |row: &BTreeMap<u32, &BigRational>, t: &BigRational| {
            let top = *row.keys().next_back().unwrap();
            let mut acc = BigRational::zero();
            for e in (0..=top).rev() {
                acc *= t;
                if let Some(c) = row.get(&e) {
                    acc += *c;
                }
            }
            acc
        };
        let mut acc = BigRational::zero();
        let top = match by_y.keys().next_back() {
            Some(&t) => t,
            None => return acc,
        };
        for k in (0..=top).rev() {
            acc *= y;
            if let Some(row) = by_y.get(&k) {
                acc += horner(row, x);
            }
        }
        acc
    }

    pub fn evaluate_int(&self, x: i64, y: i64) -> BigRational {
        self.evaluate(
            &BigRational::from_integer(x.into()),
            &BigRational::from_integer(y.into()),
        )
    }

    pub fn evaluate_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, k), c)| {
                c.to_f64().unwrap_or(f64::NAN) * x.powi(i as i32) * y.powi(k as i32)
            })
            .sum()
    }

    /// Clear denominators for repeated evaluation at integer points.
    pub fn scaled_int(&self) -> ScaledIntPoly {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(&m, c)| (m, (c * &den).to_integer()))
            .collect();
        ScaledIntPoly {
            den,
            terms,
            max_x: self.terms.keys().map(|m| m.0).max().unwrap_or(0),
            max_y: self.terms.keys().map(|m| m.1).max().unwrap_or(0),
        }
    }
}

impl ScaledIntPoly {
    /// Common denominator.
    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// `den · P(x, y)`, an integer.
    pub fn eval_scaled(&self, x: i64, y: i64) -> BigInt {
        let xp = powers(x, self.max_x);
        let yp = powers(y, self.max_y);
        self.terms
            .iter()
            .map(|((i, k), c)| c * &xp[*i as usize] * &yp[*k as usize])
            .sum()
    }

    pub fn eval(&self, x: i64, y: i64) -> BigRational {
        BigRational::new(self.eval_scaled(x, y), self.den.clone())
    }
}

fn powers(t: i64, n: u32) -> Vec<BigInt> {
    let t = BigInt::from(t);
    let mut v = Vec::with_capacity(n as usize + 1);
    v.push(BigInt::one());
    for e in 1..=n as usize {
        let next = &v[e - 1] * &t;
        v.push(next);
    }
    v
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut p = self.clone();
        for (&(i, k), c) in &rhs.terms {
            p.add_term(i, k, c.clone());
        }
        p
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut p = BivarPoly::zero();
        for (&(i1, k1), c1) in &self.terms {
            for (&(i2, k2), c2) in &rhs.terms {
                p.add_term(i1 + i2, k1 + k2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for BivarPoly {
    /// Terms by decreasing total degree, then decreasing power of `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, k)| std::cmp::Reverse((i + k, i)));
        for (n, (i, k)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(i, k)];
            if c.is_negative() {
                f.write_str("-")?;
            } else if n > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            let mut factors = Vec::new();
            if !a.is_one() || (i == 0 && k == 0) {
                factors.push(a.to_string());
            }
            for (var, e) in [("x", i), ("y", k)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for BivarPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }

    fn parse(mut self) -> Result<BivarPoly> {
        let mut poly = BivarPoly::zero();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None if first => return self.err("empty polynomial"),
                None => return self.err("expected a term after sign"),
                _ if first => false,
                Some(c) => return self.err(format!("expected '+' or '-', found '{}'", c as char)),
            };
            let (mut c, i, k) = self.term()?;
            if negative {
                c = -c;
            }
            poly.add_term(i, k, c);
            first = false;
            if self.peek().is_none() {
                return Ok(poly);
            }
        }
    }

    fn term(&mut self) -> Result<(BigRational, u32, u32)> {
        let mut c = BigRational::one();
        let (mut i, mut k) = (0u32, 0u32);
        loop {
            match self.peek() {
                Some(b'0'..=b'9') => {
                    let num = self.number()?;
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.number()?;
                        if den.is_zero() {
                            return self.err("zero denominator");
                        }
                        c *= BigRational::new(num, den);
                    } else {
                        c *= BigRational::from_integer(num);
                    }
                }
                Some(v @ (b'x' | b'y')) => {
                    self.pos += 1;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let at = self.pos;
                        e = match self.number()?.to_u32() {
                            Some(e) => e,
                            None => {
                                self.pos = at;
                                return self.err("exponent too large");
                            }
                        };
                    }
                    if v == b'x' {
                        i += e;
                    } else {
                        k += e;
                    }
                }
                Some(ch) => return self.err(format!("unexpected '{}'", ch as char)),
                None => return self.err("expected a coefficient or variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((c, i, k));
            }
        }
    }
}

/// The rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `BigInt` power helper.
pub(crate) fn big_pow(base: u64, e: u32) -> BigInt {
    Pow::pow(BigInt::from(base), e)
}
