//! Numerical values of `x_N`, `y_N` at CM points from their q-expansions.

pub mod num;

use num_bigint::BigInt;
use num_traits::Zero;

pub use num::{bits_for_digits, exp, pi, Cx, Fx};

use crate::curvedata::CurveRecord;
use crate::error::{Error, Result};
use crate::exactalg::{Cubic, IntPoly};
use crate::quadforms::CMPoint;

pub const DEFAULT_GUARD: u32 = 15;
/// Consecutive negligible terms required before the sum stops.
const WINDOW: usize = 12;
const TAIL_SAFETY: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub digits: u32,
    pub guard: u32,
    /// Defaults to the record order.
    pub max_terms: Option<usize>,
}

impl PrecisionPolicy {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::Precondition(format!("digits={digits} is below 10")));
        }
        Ok(PrecisionPolicy { digits, guard: DEFAULT_GUARD, max_terms: None })
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    pub fn working_bits(&self) -> u32 {
        bits_for_digits(self.working_digits())
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Cx,
    pub err: f64,
    pub terms_used: usize,
}

impl EvalResult {
    pub fn re_f64(&self) -> f64 {
        self.value.re.to_f64()
    }
}

/// `tau` as a complex number.
pub fn tau_cx(pt: &CMPoint, prec: u32) -> Cx {
    let two_a = BigInt::from(2 * pt.a);
    let re = Fx::from_int(-pt.b, prec).div_int(&two_a);
    let im = Fx::from_int(-pt.d, prec).sqrt().unwrap().div_int(&two_a);
    Cx::new(re, im)
}

/// `q = exp(2 pi i tau)` and its inverse.
pub fn q_pair(pt: &CMPoint, prec: u32) -> (Cx, Cx) {
    let tau = tau_cx(pt, prec);
    let two_pi = pi(prec).shl(1);
    // 2 pi i tau = -2 pi Im(tau) + 2 pi i Re(tau)
    let z = Cx::new(tau.im.mul(&two_pi).neg(), tau.re.mul(&two_pi));
    (exp(&z), exp(&z.neg()))
}

/// `sum_{n >= lo} coeffs[n - lo] q^n` under the tail stopping rule.
pub fn eval_laurent(coeffs: &[BigInt], lo: i64, pt: &CMPoint, policy: &PrecisionPolicy) -> Result<EvalResult> {
    if pt.im() <= 0.0 {
        return Err(Error::Precondition("tau must lie in the upper half plane".into()));
    }
    let max_terms = policy.max_terms.unwrap_or(coeffs.len()).min(coeffs.len());
    let log2_q = -2.0 * std::f64::consts::PI * pt.im() * std::f64::consts::LOG2_E;
    // absolute precision plus headroom for the leading pole terms
    // and for the largest coefficient, which multiplies the rounding error of q^n
    let coef_bits = coeffs[..max_terms].iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
    let extra = ((-log2_q) * (-lo).max(0) as f64).ceil() as u32 + coef_bits + 32;
    let prec = policy.working_bits() + extra;
    let (q, qinv) = q_pair(pt, prec);
    let mut power = if lo < 0 { qinv.powi((-lo) as u64) } else { q.powi(lo as u64) };
    let thresh_log2 = -(policy.working_digits() as f64) * std::f64::consts::LOG2_10;
    let mut sum = Cx::zero(prec);
    let mut small_run = 0usize;
    let mut window_max = f64::NEG_INFINITY;
    let mut used = 0usize;
    let mut done = false;
    for (i, c) in coeffs.iter().enumerate().take(max_terms) {
        let n = lo + i as i64;
        let term = if c.is_zero() { Cx::zero(prec) } else { power.mul_int(c) };
        sum = sum.add(&term);
        used = i + 1;
        let t = term.log2_abs();
        let scale = sum.log2_abs().max(0.0);
        if t < thresh_log2 + scale {
            small_run += 1;
            window_max = window_max.max(t);
        } else {
            small_run = 0;
            window_max = f64::NEG_INFINITY;
        }
        if n >= 10 && small_run >= WINDOW {
            done = true;
            break;
        }
        power = power.mul(&q);
    }
    let qabs = 2f64.powf(log2_q);
    let tail = if window_max.is_finite() {
        2f64.powf(window_max) * qabs / (1.0 - qabs) * TAIL_SAFETY
    } else {
        0.0
    };
    let rounding = used as f64 * 2f64.powi(coef_bits as i32 - (prec as i32 - 4));
    let err = tail + rounding;
    let target = 10f64.powi(-(policy.digits as i32));
    if !done || err >= target {
        return Err(Error::Convergence { terms: used, achieved: err });
    }
    Ok(EvalResult { value: sum.with_prec(policy.working_bits()), err, terms_used: used })
}

/// Plain partial sum of the first `terms` coefficients at `prec` bits, with no stopping rule.
pub fn partial_sum(coeffs: &[BigInt], lo: i64, pt: &CMPoint, prec: u32, terms: usize) -> Cx {
    let (q, _) = q_pair(pt, prec);
    let mut acc = Cx::zero(prec);
    for c in coeffs[..terms.min(coeffs.len())].iter().rev() {
        acc = acc.mul(&q).add(&Cx::from_bigint(c, prec));
    }
    // multiply by q^lo
    let (_, qinv) = q_pair(pt, prec);
    if lo < 0 {
        acc.mul(&qinv.powi((-lo) as u64))
    } else {
        acc.mul(&q.powi(lo as u64))
    }
}

pub fn eval_x(rec: &CurveRecord, pt: &CMPoint, policy: &PrecisionPolicy) -> Result<EvalResult> {
    eval_laurent(&rec.x, -2, pt, policy)
}

pub fn eval_y(rec: &CurveRecord, pt: &CMPoint, policy: &PrecisionPolicy) -> Result<EvalResult> {
    eval_laurent(&rec.y, -3, pt, policy)
}

/// Horner evaluation at a complex point.
pub fn poly_eval_cx(p: &IntPoly, z: &Cx) -> Cx {
    let mut acc = Cx::zero(z.prec());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Cx::from_bigint(c, z.prec()));
    }
    acc
}

/// `y = -P(x) / Q(x)` with first-order error propagation.
pub fn y_from_pq(p: &IntPoly, q: &IntPoly, x: &EvalResult) -> Result<EvalResult> {
    let z = &x.value;
    let pv = poly_eval_cx(p, z);
    let qv = poly_eval_cx(q, z);
    let dp = poly_eval_cx(&p.derivative(), z);
    let dq = poly_eval_cx(&q.derivative(), z);
    let q_abs = qv.abs_f64();
    if q_abs <= dq.abs_f64() * x.err * 10.0 || qv.log2_abs() < -(z.prec() as f64) + 8.0 {
        return Err(Error::Precondition(
            "Q(x) vanishes within the error of x".into(),
        ));
    }
    let value = pv.div(&qv)?.neg();
    // d/dx (P/Q) = (P'Q - PQ') / Q^2
    let deriv = dp.mul(&qv).sub(&pv.mul(&dq)).div(&qv.mul(&qv))?;
    let err = deriv.abs_f64() * x.err + 2f64.powi(-(z.prec() as i32 - 8));
    Ok(EvalResult { value, err, terms_used: x.terms_used })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    /// `|y^2 - x^3 - A xy - B x^2 - C y - D x - E|`.
    pub residual: f64,
    /// Whether `(A x + C)^2 + 4 (x^3 + B x^2 + D x + E)` is a non-negative real.
    pub disc_nonneg_real: bool,
}

pub fn cubic_residual(x: &EvalResult, y: &EvalResult, cubic: &Cubic) -> Residual {
    let prec = x.value.prec().max(y.value.prec());
    let xv = x.value.with_prec(prec);
    let yv = y.value.with_prec(prec);
    let k = |v: i64| BigInt::from(v);
    let x2 = xv.mul(&xv);
    let x3 = x2.mul(&xv);
    let r = yv
        .mul(&yv)
        .sub(&x3)
        .sub(&xv.mul(&yv).mul_int(&k(cubic.a)))
        .sub(&x2.mul_int(&k(cubic.b)))
        .sub(&yv.mul_int(&k(cubic.c)))
        .sub(&xv.mul_int(&k(cubic.d)))
        .sub(&Cx::from_bigint(&k(cubic.e), prec));
    let lin = xv.mul_int(&k(cubic.a)).add(&Cx::from_bigint(&k(cubic.c), prec));
    let free = x3
        .add(&x2.mul_int(&k(cubic.b)))
        .add(&xv.mul_int(&k(cubic.d)))
        .add(&Cx::from_bigint(&k(cubic.e), prec));
    let disc = lin.mul(&lin).add(&free.mul_int(&k(4)));
    let tol = (x.err + y.err).max(2f64.powi(-(prec as i32 - 16)));
    let scale = disc.abs_f64().max(1.0);
    let disc_nonneg_real = disc.im.to_f64().abs() <= tol * scale * 1e3 && disc.re.to_f64() >= -tol * scale * 1e3;
    Residual { residual: r.abs_f64(), disc_nonneg_real }
}
