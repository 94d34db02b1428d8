//! Minimal polynomials of `x_N(tau_0)` over the rationals via the conjugates indexed by
//! forms of discriminant `N^2 d_K`, and the corresponding Heegner points.

use rayon::prelude::*;

use crate::arith::is_prime;
use crate::cmeval::{cubic_residual, eval_x, eval_y, Cx, EvalResult, Fx, PrecisionPolicy};
use crate::curvedata::{curve_coeffs, LevelRegistry};
use crate::error::{Error, Result};
use crate::exactalg::IntPoly;
use crate::quadforms::{cm_root, phi_map, raise_height, reduced_forms, CMPoint, QuadForm};

pub const SLACK_LIMIT: f64 = 0.25;
pub const MAX_ESCALATIONS: u32 = 4;
/// Decimal digits above the coefficient size used for the first full pass.
const DIGIT_MARGIN: u32 = 20;
/// Terms available per curve record before the order is extended.
const ORDER_STEP: usize = 600;

#[derive(Clone, Debug)]
pub struct MinPolyJob {
    pub level: u32,
    pub dk: i64,
    /// `None` picks the precision automatically.
    pub digits: Option<u32>,
    /// Accept composite levels.
    pub force: bool,
}

#[derive(Clone, Debug)]
pub struct ClassRoot {
    /// Reduced form of discriminant `N^2 d_K`.
    pub form: QuadForm,
    /// Its image of discriminant `d_K`.
    pub image: QuadForm,
    /// The evaluation point (the root of `image`, moved up in its orbit).
    pub point: CMPoint,
    pub x: EvalResult,
}

#[derive(Clone, Debug)]
pub struct MinPolyResult {
    pub poly: IntPoly,
    pub roots: Vec<ClassRoot>,
    /// Largest distance of a raw coefficient (plus its error bound) from its integer.
    pub slack: f64,
    pub digits: u32,
    pub escalations: u32,
}

fn check_job(level: u32, dk: i64, force: bool) -> Result<()> {
    curve_coeffs(level)?;
    if !force && !is_prime(level as u64) {
        return Err(Error::Precondition(format!(
            "N={level} is not prime (use force to compute anyway)"
        )));
    }
    if dk >= 0 || !matches!(dk.rem_euclid(4), 0 | 1) {
        return Err(Error::Precondition(format!("{dk} is not a negative discriminant")));
    }
    Ok(())
}

/// Evaluation points for every class of discriminant `N^2 d_K`.
pub fn class_points(level: u32, dk: i64) -> Result<Vec<(QuadForm, QuadForm, CMPoint)>> {
    let n = level as i64;
    reduced_forms(n * n * dk)?
        .into_iter()
        .map(|f| {
            let image = phi_map(f, n, dk)?;
            let pt = raise_height(cm_root(image)?, n);
            Ok((f, image, pt))
        })
        .collect()
}

/// `x_N` (or `y_N` when `y` is set) at a point, extending the curve record when the series
/// has not converged.
pub fn eval_with_growth(
    reg: &LevelRegistry,
    level: u32,
    pt: &CMPoint,
    policy: &PrecisionPolicy,
    y: bool,
) -> Result<EvalResult> {
    // |q|^n must reach 10^-(digits+guard)
    let need = (policy.working_digits() as f64 * std::f64::consts::LN_10
        / (2.0 * std::f64::consts::PI * pt.im()))
    .ceil() as usize
        + 40;
    let mut order = need.max(ORDER_STEP);
    loop {
        let rec = reg.record(level, order)?;
        let r = if y { eval_y(&rec, pt, policy) } else { eval_x(&rec, pt, policy) };
        match r {
            Err(Error::Convergence { .. }) if order < 4 * need.max(ORDER_STEP) => {
                order *= 2;
            }
            other => return other,
        }
    }
}

fn evaluate_all(
    reg: &LevelRegistry,
    level: u32,
    pts: &[(QuadForm, QuadForm, CMPoint)],
    digits: u32,
) -> Result<Vec<ClassRoot>> {
    let policy = PrecisionPolicy::new(digits)?;
    pts.par_iter()
        .map(|(f, image, pt)| {
            let x = eval_with_growth(reg, level, pt, &policy, false)?;
            Ok(ClassRoot { form: *f, image: *image, point: *pt, x })
        })
        .collect()
}

/// Coefficients of `prod (X - x_j)` together with a bound on their error.
fn expand_roots(roots: &[ClassRoot]) -> (Vec<Cx>, Vec<f64>) {
    let prec = roots.iter().map(|r| r.x.value.prec()).max().unwrap_or(64);
    let mut coeffs = vec![Cx::one(prec)];
    // coefficientwise bound: prod (X + |x_j| + e_j) - prod (X + |x_j|)
    let mut hi = vec![1.0f64];
    let mut lo = vec![1.0f64];
    for r in roots {
        let x = r.x.value.with_prec(prec);
        let mut next = vec![Cx::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&x));
        }
        coeffs = next;
        let a = r.x.value.abs_f64();
        let step = |v: &[f64], root: f64| {
            let mut out = vec![0.0; v.len() + 1];
            for (i, c) in v.iter().enumerate() {
                out[i + 1] += c;
                out[i] += c * root;
            }
            out
        };
        hi = step(&hi, a + r.x.err);
        lo = step(&lo, a);
    }
    let rounding = 2f64.powi(-(prec as i32 - 8)) * roots.len() as f64;
    let err = hi
        .iter()
        .zip(&lo)
        .map(|(h, l)| (h - l) + rounding * h.max(1.0))
        .collect();
    (coeffs, err)
}

fn round_coeffs(coeffs: &[Cx], err: &[f64]) -> (IntPoly, f64) {
    let mut slack = 0.0f64;
    let mut ints = Vec::with_capacity(coeffs.len());
    for (c, e) in coeffs.iter().zip(err) {
        let k = c.re.round();
        let dist = c.re.sub(&Fx::from_bigint(&k, c.prec())).abs().to_f64();
        let im = c.im.abs().to_f64();
        slack = slack.max(dist.max(im) + e);
        ints.push(k);
    }
    (IntPoly::new(ints), slack)
}

/// Digits needed to resolve the coefficients of `prod (X - x_j)`.
fn digits_for(roots: &[ClassRoot]) -> u32 {
    let size: f64 = roots.iter().map(|r| r.x.value.abs_f64().max(1.0).log10()).sum();
    DIGIT_MARGIN + size.ceil() as u32
}

pub fn minpoly(reg: &LevelRegistry, job: &MinPolyJob) -> Result<MinPolyResult> {
    check_job(job.level, job.dk, job.force)?;
    let pts = class_points(job.level, job.dk)?;
    let mut digits = match job.digits {
        Some(d) => d.max(10),
        None => digits_for(&evaluate_all(reg, job.level, &pts, 20)?),
    };
    let mut escalations = 0;
    loop {
        let roots = evaluate_all(reg, job.level, &pts, digits)?;
        let (coeffs, err) = expand_roots(&roots);
        let (poly, slack) = round_coeffs(&coeffs, &err);
        if slack < SLACK_LIMIT {
            return Ok(MinPolyResult { poly, roots, slack, digits, escalations });
        }
        if escalations == MAX_ESCALATIONS {
            return Err(Error::Rounding { slack, digits });
        }
        escalations += 1;
        digits *= 2;
    }
}

/// `log10 |M(x_j)|` relative to `sum |m_i| |x_j|^i`, the largest over the roots.
pub fn root_residual_log10(res: &MinPolyResult) -> f64 {
    res.roots
        .iter()
        .map(|r| {
            crate::genpoly::relative_residual_log2(&res.poly, &r.x.value) * std::f64::consts::LOG10_2
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug)]
pub struct HeegnerPoint {
    pub form: QuadForm,
    pub point: CMPoint,
    pub x: EvalResult,
    pub y: EvalResult,
    pub residual: f64,
}

/// `(x_N(tau_j), y_N(tau_j))` for every class, each checked on the curve and pairwise
/// distinct in x.
pub fn heegner_points(
    reg: &LevelRegistry,
    level: u32,
    dk: i64,
    digits: u32,
    force: bool,
) -> Result<Vec<HeegnerPoint>> {
    check_job(level, dk, force)?;
    let cubic = curve_coeffs(level)?;
    let policy = PrecisionPolicy::new(digits)?;
    let pts = class_points(level, dk)?;
    let out: Vec<HeegnerPoint> = pts
        .par_iter()
        .map(|(f, _, pt)| {
            let x = eval_with_growth(reg, level, pt, &policy, false)?;
            let y = eval_with_growth(reg, level, pt, &policy, true)?;
            let residual = cubic_residual(&x, &y, &cubic).residual;
            Ok(HeegnerPoint { form: *f, point: *pt, x, y, residual })
        })
        .collect::<Result<_>>()?;
    let tol = 10f64.powi(-(digits as i32) + 8);
    for h in &out {
        let scale = h.x.value.abs_f64().powi(3).max(1.0);
        if h.residual > tol * scale {
            return Err(Error::Inconsistent(format!(
                "point for {} misses the curve by {:e}",
                h.form, h.residual
            )));
        }
    }
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            let d = a.x.value.sub(&b.x.value.with_prec(a.x.value.prec())).abs_f64();
            if d <= a.x.err + b.x.err {
                return Err(Error::Inconsistent(format!(
                    "classes {} and {} give the same x",
                    a.form, b.form
                )));
            }
        }
    }
    Ok(out)
}
