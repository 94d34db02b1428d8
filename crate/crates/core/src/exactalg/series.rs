//! Truncated Laurent series in `q^{1/s}` with a tracked validity window.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyclo::CycInt;
use crate::error::{Error, Result};

/// Coefficient ring of a [`QSeries`]: the integers or a cyclotomic ring.
pub trait Coef: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Acc;
    /// Cyclotomic order of the ring (1 for the integers).
    fn ring(&self) -> u32;
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &BigInt) -> Self;
    fn acc_new(&self) -> Self::Acc;
    fn mul_acc(acc: &mut Self::Acc, a: &Self, b: &Self);
    fn acc_finish(&self, acc: Self::Acc) -> Self;
    fn lift(&self, d: u32) -> Result<Self>;
}

impl Coef for BigInt {
    type Acc = BigInt;
    fn ring(&self) -> u32 {
        1
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &BigInt) -> Self {
        self * c
    }
    fn acc_new(&self) -> BigInt {
        BigInt::zero()
    }
    fn mul_acc(acc: &mut BigInt, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *acc += a * b;
        }
    }
    fn acc_finish(&self, acc: BigInt) -> Self {
        acc
    }
    fn lift(&self, d: u32) -> Result<Self> {
        if d == 1 {
            Ok(self.clone())
        } else {
            Err(Error::IncompatibleRings(1, d))
        }
    }
}

impl Coef for CycInt {
    type Acc = Vec<BigInt>;
    fn ring(&self) -> u32 {
        self.order()
    }
    fn zero_like(&self) -> Self {
        CycInt::zero(self.order())
    }
    fn is_zero(&self) -> bool {
        CycInt::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CycInt::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CycInt::sub(self, o)
    }
    fn neg(&self) -> Self {
        CycInt::neg(self)
    }
    fn scale(&self, c: &BigInt) -> Self {
        CycInt::scale(self, c)
    }
    fn acc_new(&self) -> Vec<BigInt> {
        self.raw_zero()
    }
    fn mul_acc(acc: &mut Vec<BigInt>, a: &Self, b: &Self) {
        a.mul_into(b, acc);
    }
    fn acc_finish(&self, acc: Vec<BigInt>) -> Self {
        CycInt::from_raw(self.order(), acc)
    }
    fn lift(&self, d: u32) -> Result<Self> {
        CycInt::lift(self, d)
    }
}

/// `sum_{k=lo}^{trunc-1} coeffs[k-lo] q^{k/s} + O(q^{trunc/s})`.
#[derive(Clone, PartialEq)]
pub struct QSeries<R: Coef> {
    s: u32,
    lo: i64,
    coeffs: Vec<R>,
    trunc: i64,
    zero: R,
}

pub type ZSeries = QSeries<BigInt>;
pub type CycSeries = QSeries<CycInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl<R: Coef> QSeries<R> {
    /// Series with coefficients for exponents `lo/s, (lo+1)/s, ...`, known below `trunc/s`.
    /// Coefficients beyond the window are dropped, missing ones are zero.
    pub fn new(s: u32, lo: i64, mut coeffs: Vec<R>, trunc: i64, zero: R) -> Self {
        assert!(s >= 1 && trunc > lo, "empty series window");
        coeffs.resize((trunc - lo) as usize, zero.clone());
        QSeries { s, lo, coeffs, trunc, zero }
    }

    pub fn zero_series(s: u32, lo: i64, trunc: i64, zero: R) -> Self {
        Self::new(s, lo, Vec::new(), trunc, zero)
    }

    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn trunc(&self) -> i64 {
        self.trunc
    }
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }
    pub fn zero_elem(&self) -> &R {
        &self.zero
    }
    pub fn ring(&self) -> u32 {
        self.zero.ring()
    }

    /// Coefficient at exponent `num/s`; zero below the window, `None` at or past truncation.
    pub fn get(&self, num: i64) -> Option<&R> {
        if num >= self.trunc {
            None
        } else if num < self.lo {
            Some(&self.zero)
        } else {
            Some(&self.coeffs[(num - self.lo) as usize])
        }
    }

    pub fn set(&mut self, num: i64, c: R) {
        assert!(num >= self.lo && num < self.trunc);
        self.coeffs[(num - self.lo) as usize] = c;
    }

    /// Exponent numerator of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lo + i as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Drop leading zero coefficients (window start moves to the valuation).
    pub fn trim(&self) -> Self {
        match self.valuation() {
            Some(v) if v > self.lo => Self::new(
                self.s,
                v,
                self.coeffs[(v - self.lo) as usize..].to_vec(),
                self.trunc,
                self.zero.clone(),
            ),
            _ => self.clone(),
        }
    }

    /// Restrict the validity window to exponents below `trunc/s`.
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        let lo = self.lo.min(trunc - 1);
        let coeffs = (lo..trunc).map(|k| self.get(k).unwrap().clone()).collect();
        Self::new(self.s, lo, coeffs, trunc, self.zero.clone())
    }

    /// Same series over `q^{1/s_new}`.
    pub fn reindex(&self, s_new: u32) -> Result<Self> {
        let (s, sn) = (self.s as i64, s_new as i64);
        let mut out_coeffs = Vec::new();
        let lo = Integer::div_floor(&(self.lo * sn), &s);
        let trunc = Integer::div_ceil(&(self.trunc * sn), &s);
        out_coeffs.resize((trunc - lo) as usize, self.zero.clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let num = (self.lo + i as i64) * sn;
            if num % s != 0 {
                return Err(Error::LossyReindex {
                    num: self.lo + i as i64,
                    den: self.s,
                });
            }
            out_coeffs[(num / s - lo) as usize] = c.clone();
        }
        Ok(Self::new(s_new, lo, out_coeffs, trunc, self.zero.clone()))
    }

    /// Coefficients embedded into the `d`-th cyclotomic ring.
    pub fn lift(&self, d: u32) -> Result<Self> {
        if d == self.ring() {
            return Ok(self.clone());
        }
        let coeffs = self.coeffs.iter().map(|c| c.lift(d)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(self.s, self.lo, coeffs, self.trunc, self.zero.lift(d)?))
    }

    fn align(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let s = a.s.lcm(&b.s);
        let (ra, rb) = (a.ring(), b.ring());
        let d = if ra % rb == 0 {
            ra
        } else if rb % ra == 0 {
            rb
        } else {
            return Err(Error::IncompatibleRings(ra, rb));
        };
        Ok((a.reindex(s)?.lift(d)?, b.reindex(s)?.lift(d)?))
    }

    fn add_sub(&self, o: &Self, sub: bool) -> Result<Self> {
        let (a, b) = Self::align(self, o)?;
        let lo = a.lo.min(b.lo);
        let trunc = a.trunc.min(b.trunc).max(lo + 1);
        let coeffs = (lo..trunc)
            .map(|k| {
                let x = a.get(k).unwrap();
                let y = b.get(k).unwrap();
                if sub {
                    x.sub(y)
                } else {
                    x.add(y)
                }
            })
            .collect();
        Ok(Self::new(a.s, lo, coeffs, trunc, a.zero.clone()))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.add_sub(o, false)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add_sub(o, true)
    }

    /// Product; the window is the largest one determined by both operands.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (a, b) = Self::align(self, o)?;
        let (va, vb) = match (a.valuation(), b.valuation()) {
            (Some(va), Some(vb)) => (va, vb),
            _ => {
                let lo = a.lo + b.lo;
                let trunc = (a.trunc + b.lo.max(b.valuation().unwrap_or(b.trunc)))
                    .min(b.trunc + a.lo.max(a.valuation().unwrap_or(a.trunc)))
                    .max(lo + 1);
                return Ok(Self::zero_series(a.s, lo, trunc, a.zero.clone()));
            }
        };
        let lo = va + vb;
        let trunc = (a.trunc + vb).min(b.trunc + va);
        let coeffs = (lo..trunc)
            .map(|k| {
                let mut acc = a.zero.acc_new();
                let i_lo = va.max(k - (b.trunc - 1));
                let i_hi = (k - vb).min(a.trunc - 1);
                for i in i_lo..=i_hi {
                    R::mul_acc(&mut acc, &a.coeffs[(i - a.lo) as usize], &b.coeffs[(k - i - b.lo) as usize]);
                }
                a.zero.acc_finish(acc)
            })
            .collect();
        Ok(Self::new(a.s, lo, coeffs, trunc, a.zero.clone()))
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// `self^e` for `e >= 1`.
    pub fn pow(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::Precondition("zeroth power of a series".into()));
        }
        let mut r = self.clone();
        for _ in 1..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// `series_arith` entry point.
    pub fn arith(&self, o: &Self, op: SeriesOp) -> Result<Self> {
        match op {
            SeriesOp::Add => self.add(o),
            SeriesOp::Sub => self.sub(o),
            SeriesOp::Mul => self.mul(o),
        }
    }
}

impl ZSeries {
    /// Integer series `sum c_i q^{(lo+i)}` with `s = 1`.
    pub fn from_ints(lo: i64, coeffs: Vec<BigInt>, trunc: i64) -> Self {
        Self::new(1, lo, coeffs, trunc, BigInt::zero())
    }

    pub fn from_i64(lo: i64, coeffs: &[i64], trunc: i64) -> Self {
        Self::from_ints(lo, coeffs.iter().map(|&c| BigInt::from(c)).collect(), trunc)
    }

    /// The constant 1, known below `q^{trunc}`.
    pub fn one(trunc: i64) -> Self {
        Self::from_ints(0, vec![BigInt::one()], trunc)
    }

    /// Exact inverse of a series whose leading coefficient is a unit (plus or minus one).
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Precondition("inverse of zero series".into()))?;
        let lead = self.get(v).unwrap().clone();
        if !lead.abs().is_one() {
            return Err(Error::Precondition(format!("leading coefficient {lead} is not a unit")));
        }
        let n = (self.trunc - v) as usize;
        let a: Vec<&BigInt> = (0..n).map(|i| self.get(v + i as i64).unwrap()).collect();
        let mut b: Vec<BigInt> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { BigInt::one() } else { BigInt::zero() };
            for i in 1..=k {
                acc -= a[i] * &b[k - i];
            }
            b.push(acc * &lead);
        }
        Ok(Self::new(self.s, -v, b, -v + n as i64, BigInt::zero()))
    }

    /// Exact quotient `self / d` where `d` has a unit leading coefficient.
    pub fn div(&self, d: &Self) -> Result<Self> {
        self.mul(&d.inverse()?)
    }
}

impl<R: Coef> fmt::Debug for QSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries(s={}, ", self.s)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*q^({}/{})", self.lo + i as i64, self.s)?;
        }
        write!(f, " + O(q^({}/{})))", self.trunc, self.s)
    }
}

/// `series_arith`.
pub fn series_arith<R: Coef>(a: &QSeries<R>, b: &QSeries<R>, op: SeriesOp) -> Result<QSeries<R>> {
    a.arith(b, op)
}

/// `series_reindex`.
pub fn series_reindex<R: Coef>(a: &QSeries<R>, s_new: u32) -> Result<QSeries<R>> {
    a.reindex(s_new)
}
