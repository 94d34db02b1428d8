//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        IntPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero past the end).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + bigint_to_f64(c);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Exact division by `d`, `None` unless the remainder vanishes over the integers.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.pseudo_divrem_exact(d)?;
        r.is_zero().then_some(q)
    }

    /// Division with remainder when every step divides exactly by the lead of `d`
    /// (always true for monic `d`).
    pub fn pseudo_divrem_exact(&self, d: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let dd = d.degree()?;
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let (c, rem) = r[k].div_rem(&lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] -= &c * dc;
            }
            q[k - dd] = c;
        }
        Some((Self::new(q), Self::new(r)))
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Substitute `x -> -x`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Render as `x^{4}-2x^{3}+151x^{2}+1156x+2368` (descending, braces around exponents).
    pub fn to_tex(&self, var: char) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if k == 0 || !a.is_one() {
                s.push_str(&a.to_string());
            }
            match k {
                0 => {}
                1 => s.push(var),
                _ => s.push_str(&format!("{var}^{{{k}}}")),
            }
        }
        s
    }

    /// Parse a polynomial written with `x` or `X`, optional spaces, optional braces
    /// around exponents and optional `*` between coefficient and variable.
    pub fn parse(src: &str) -> Result<IntPoly> {
        let s: String = src
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}' && *c != '*')
            .map(|c| if c == 'X' { 'x' } else { c })
            .collect();
        let s = s.trim_start_matches('=');
        if s.is_empty() {
            return Err(Error::Parse(format!("empty polynomial in {src:?}")));
        }
        let bytes = s.as_bytes();
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut i = 0;
        let bad = |what: &str| Error::Parse(format!("{what} in polynomial {src:?}"));
        while i < bytes.len() {
            let mut sign = BigInt::one();
            match bytes[i] {
                b'+' => i += 1,
                b'-' => {
                    sign = -sign;
                    i += 1
                }
                _ if i > 0 => return Err(bad("missing sign")),
                _ => {}
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef = if i > start {
                s[start..i].parse::<BigInt>().map_err(|_| bad("bad integer"))?
            } else {
                BigInt::one()
            };
            let mut exp = 0usize;
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = s[es..i].parse().map_err(|_| bad("bad exponent"))?;
                }
            } else if i == start {
                return Err(bad("empty term"));
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += sign * coef;
        }
        Ok(IntPoly::new(coeffs))
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn add_vecs(a: &[BigInt], b: &[BigInt], neg_b: bool) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            match b.get(i) {
                Some(y) if neg_b => x - y,
                Some(y) => x + y,
                None => x,
            }
        })
        .collect()
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::new(add_vecs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::new(add_vecs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $f(self, rhs: IntPoly) -> IntPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tex('x'))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.to_tex('x'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let p = IntPoly::parse("-x^{4}-2x^{3}+151x^{2}+1156x+2368").unwrap();
        assert_eq!(p, IntPoly::from_i64(&[2368, 1156, 151, -2, -1]));
        assert_eq!(p.to_tex('x'), "-x^{4}-2x^{3}+151x^{2}+1156x+2368");
        let q = IntPoly::parse("X^{3} - 52764X^{2} - 7").unwrap();
        assert_eq!(q, IntPoly::from_i64(&[-7, 0, -52764, 1]));
        assert_eq!(IntPoly::parse("=-x^6+x").unwrap(), IntPoly::from_i64(&[0, 1, 0, 0, 0, 0, -1]));
        assert!(IntPoly::parse("x^").is_err());
        assert!(IntPoly::parse("3x4").is_err());
    }

    #[test]
    fn exact_division() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert_eq!(a.div_exact(&b).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert!(a.div_exact(&IntPoly::from_i64(&[1, 2])).is_none());
    }

    #[test]
    fn content_and_primitive() {
        let p = IntPoly::from_i64(&[6, -4, -2]);
        assert_eq!(p.content(), BigInt::from(2));
        assert_eq!(p.primitive_part(), IntPoly::from_i64(&[-3, 2, 1]));
    }
}
