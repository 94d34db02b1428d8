//! Binary fixed-point reals and complexes over `BigInt`: a value is `m * 2^-prec`.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bits needed for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (3.33 * digits as f64).ceil() as u32
}

fn round_shr(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (k - 1);
    (m + half) >> k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    m: BigInt,
    prec: u32,
}

impl Fx {
    pub fn zero(prec: u32) -> Self {
        Fx { m: BigInt::zero(), prec }
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Fx { m: v << prec, prec }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    /// `num / den` rounded to nearest.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let n: BigInt = num << (prec + 1);
        let q = Integer::div_floor(&n, den);
        Fx { m: round_shr(&q, 1), prec }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(v);
        let mut m = BigInt::from(mant) * sign;
        let shift = exp as i64 + prec as i64;
        m = if shift >= 0 { m << shift as u32 } else { round_shr(&m, (-shift) as u32) };
        Fx { m, prec }
    }

    /// Parses a plain decimal such as `-30.84491025792583`.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        let digits = format!("{ip}{fp}");
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let num: BigInt = digits.parse().unwrap();
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let v = Fx::from_ratio(&num, &den, prec);
        Ok(if neg { v.neg() } else { v })
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let m = if prec >= self.prec {
            &self.m << (prec - self.prec)
        } else {
            round_shr(&self.m, self.prec - prec)
        };
        Fx { m, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn add(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { m: &self.m + &o.m, prec: self.prec }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { m: &self.m - &o.m, prec: self.prec }
    }

    pub fn neg(&self) -> Fx {
        Fx { m: -&self.m, prec: self.prec }
    }

    pub fn abs(&self) -> Fx {
        Fx { m: self.m.abs(), prec: self.prec }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { m: round_shr(&(&self.m * &o.m), self.prec), prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> Fx {
        Fx { m: &self.m * k, prec: self.prec }
    }

    pub fn div_int(&self, k: &BigInt) -> Fx {
        let n: BigInt = &self.m << 1;
        Fx { m: round_shr(&Integer::div_floor(&n, k), 1), prec: self.prec }
    }

    pub fn div(&self, o: &Fx) -> Result<Fx> {
        if o.m.is_zero() {
            return Err(Error::Precondition("division by zero".into()));
        }
        let n: BigInt = &self.m << (self.prec + 1);
        Ok(Fx { m: round_shr(&Integer::div_floor(&n, &o.m), 1), prec: self.prec })
    }

    pub fn sqrt(&self) -> Result<Fx> {
        if self.m.is_negative() {
            return Err(Error::Precondition("square root of a negative number".into()));
        }
        let n: BigInt = &self.m << self.prec;
        Ok(Fx { m: n.sqrt(), prec: self.prec })
    }

    pub fn shl(&self, k: u32) -> Fx {
        Fx { m: &self.m << k, prec: self.prec }
    }

    pub fn shr(&self, k: u32) -> Fx {
        Fx { m: round_shr(&self.m, k), prec: self.prec }
    }

    /// `log2 |v|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        mant_log2(&self.m) - self.prec as f64
    }

    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let shift = self.m.bits().saturating_sub(60);
        let top = (&self.m >> shift).to_f64().unwrap();
        let mut e = shift as i64 - self.prec as i64;
        let mut v = top;
        while e < -1000 {
            v *= 2f64.powi(-1000);
            e += 1000;
        }
        while e > 1000 {
            v *= 2f64.powi(1000);
            e -= 1000;
        }
        v * 2f64.powi(e as i32)
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        round_shr(&self.m, self.prec)
    }

    /// Decimal string with `digits` places after the point, rounded half away from zero.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let n = self.m.abs() * scale * 2;
        let q: BigInt = (n >> self.prec) + 1;
        let q: BigInt = q >> 1;
        let s = q.to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        let sign = if self.m.is_negative() && q.sign() != Sign::NoSign { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }
}

fn mant_log2(m: &BigInt) -> f64 {
    if m.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = m.bits();
    let shift = bits.saturating_sub(60);
    let top = (m.abs() >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

impl fmt::Display for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).floor() as u32;
        write!(f, "{}", self.to_decimal(digits))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx {
    pub re: Fx,
    pub im: Fx,
}

impl Cx {
    pub fn new(re: Fx, im: Fx) -> Self {
        debug_assert_eq!(re.prec, im.prec);
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx::new(Fx::zero(prec), Fx::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Cx::from_real(Fx::from_int(1, prec))
    }

    pub fn from_real(re: Fx) -> Self {
        let p = re.prec;
        Cx::new(re, Fx::zero(p))
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Cx::from_real(Fx::from_bigint(v, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Cx::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Cx {
        Cx::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec();
        let rr = &self.re.m * &o.re.m - &self.im.m * &o.im.m;
        let ii = &self.re.m * &o.im.m + &self.im.m * &o.re.m;
        Cx::new(Fx { m: round_shr(&rr, p), prec: p }, Fx { m: round_shr(&ii, p), prec: p })
    }

    pub fn mul_real(&self, r: &Fx) -> Cx {
        Cx::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_int(&self, k: &BigInt) -> Cx {
        Cx::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn shr(&self, k: u32) -> Cx {
        Cx::new(self.re.shr(k), self.im.shr(k))
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> Fx {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Fx {
        self.norm_sqr().sqrt().unwrap()
    }

    pub fn div(&self, o: &Cx) -> Result<Cx> {
        let p = self.prec();
        let den = &o.re.m * &o.re.m + &o.im.m * &o.im.m;
        if den.is_zero() {
            return Err(Error::Precondition("division by zero".into()));
        }
        let num = self.mul(&o.conj());
        // den is in units of 2^-2p
        let scale = |v: &BigInt| -> Fx {
            let n: BigInt = v << (2 * p + 1);
            Fx { m: round_shr(&Integer::div_floor(&n, &den), 1), prec: p }
        };
        Ok(Cx::new(scale(&num.re.m), scale(&num.im.m)))
    }

    pub fn log2_abs(&self) -> f64 {
        let a = mant_log2(&self.re.m);
        let b = mant_log2(&self.im.m);
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        hi + 0.5 * (1.0 + 2f64.powf(2.0 * (lo - hi))).log2() - self.prec() as f64
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn powi(&self, mut e: u64) -> Cx {
        let mut base = self.clone();
        let mut acc = Cx::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        let im = self.im.to_decimal(digits);
        if im.starts_with('-') {
            format!("{} - {}i", self.re.to_decimal(digits), &im[1..])
        } else {
            format!("{} + {}i", self.re.to_decimal(digits), im)
        }
    }
}

/// `atan(1/k)` by its alternating series.
fn atan_inv(k: u64, prec: u32) -> Fx {
    let k2 = BigInt::from(k * k);
    let mut term = Fx::from_int(1, prec).div_int(&BigInt::from(k));
    let mut sum = term.clone();
    let mut n = 1u64;
    while !term.is_zero() {
        term = term.div_int(&k2);
        let t = term.div_int(&BigInt::from(2 * n + 1));
        sum = if n % 2 == 1 { sum.sub(&t) } else { sum.add(&t) };
        n += 1;
    }
    sum
}

/// `pi` by Machin's formula.
pub fn pi(prec: u32) -> Fx {
    let wp = prec + 16;
    let v = atan_inv(5, wp)
        .mul_int(&BigInt::from(16))
        .sub(&atan_inv(239, wp).mul_int(&BigInt::from(4)));
    v.with_prec(prec)
}

/// `exp(z)` by Taylor series on `z / 2^k` followed by `k` squarings.
pub fn exp(z: &Cx) -> Cx {
    let prec = z.prec();
    let mag = z.log2_abs();
    let k = if mag.is_finite() { (mag.ceil() as i64 + 8).max(0) as u32 } else { 0 };
    let wp = prec + k + 24 + (mag.max(0.0) * 2.0) as u32;
    let w = z.with_prec(wp).shr(k);
    let mut term = Cx::one(wp);
    let mut sum = term.clone();
    let mut n = 1u64;
    loop {
        term = term.mul(&w);
        term = Cx::new(
            term.re.div_int(&BigInt::from(n)),
            term.im.div_int(&BigInt::from(n)),
        );
        if term.re.is_zero() && term.im.is_zero() {
            break;
        }
        sum = sum.add(&term);
        n += 1;
    }
    for _ in 0..k {
        sum = sum.mul(&sum);
    }
    sum.with_prec(prec)
}
