//! The monic integer polynomial satisfied by `x_N` at the CM points attached to `m`, its
//! factorization, and selection of the factor vanishing at a numerical value.

mod factor;

pub use factor::{factor_over_z, gcd_z, squarefree_decomposition, FactoredPoly};

use num_bigint::BigInt;

use crate::cmeval::{poly_eval_cx, Cx};
use crate::curvedata::LevelRegistry;
use crate::error::{Error, Result};
use crate::exactalg::{Cubic, IntPoly};
use crate::modpoly::{pq_for_level, sigma1_plus};

pub const DEFAULT_TOL: f64 = 1e-20;

/// `P^2 - Q^2 x^3 + A PQ x - B Q^2 x^2 + C PQ - D Q^2 x - E Q^2`.
pub fn generating_polynomial(p: &IntPoly, q: &IntPoly, cubic: &Cubic) -> Result<IntPoly> {
    let k = |v: i64| BigInt::from(v);
    let pq = p * q;
    let q2 = q * q;
    let x = IntPoly::x();
    let r = &(p * p) - &q2.shift(3);
    let r = &r + &pq.shift(1).scale(&k(cubic.a));
    let r = &r - &q2.shift(2).scale(&k(cubic.b));
    let r = &r + &pq.scale(&k(cubic.c));
    let r = &r - &(&q2 * &x).scale(&k(cubic.d));
    let r = &r - &q2.scale(&k(cubic.e));
    if !r.is_monic() {
        return Err(Error::Pipeline(format!("generating polynomial has lead {}", r.lead())));
    }
    Ok(r)
}

/// Generating polynomial for `(m, N)`; checks the degree `2 sigma1+(m)`.
pub fn generating_polynomial_for(reg: &LevelRegistry, level: u32, m: u32) -> Result<IntPoly> {
    let (p, q) = pq_for_level(reg, level, m)?;
    let r = generating_polynomial(&p, &q, &crate::curvedata::curve_coeffs(level)?)?;
    let want = 2 * sigma1_plus(m) as usize;
    if r.degree() != Some(want) {
        return Err(Error::Pipeline(format!(
            "generating polynomial has degree {:?}, expected {want}",
            r.degree()
        )));
    }
    Ok(r)
}

/// `log2(|g(v)| / sum |g_i| |v|^i)`.
pub fn relative_residual_log2(g: &IntPoly, v: &Cx) -> f64 {
    let val = poly_eval_cx(g, v);
    let r = v.abs_f64().max(f64::MIN_POSITIVE);
    let scale: f64 = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| crate::exactalg::poly::bigint_to_f64(c).abs() * r.powi(i as i32))
        .sum();
    val.log2_abs() - scale.log2()
}

/// The unique factor vanishing at `value` to relative tolerance `tol`.
pub fn select_factor_by_root(fp: &FactoredPoly, value: &Cx, tol: f64) -> Result<IntPoly> {
    let lt = tol.log2();
    let scored: Vec<(f64, &IntPoly)> = fp
        .factors
        .iter()
        .map(|(g, _)| (relative_residual_log2(g, value), g))
        .collect();
    let hits: Vec<&IntPoly> = scored.iter().filter(|(s, _)| *s < lt).map(|(_, g)| *g).collect();
    match hits.as_slice() {
        [g] => Ok((*g).clone()),
        _ => {
            let diag: Vec<String> = scored
                .iter()
                .map(|(s, g)| format!("{g}: 10^{:.1}", s * std::f64::consts::LOG10_2))
                .collect();
            Err(Error::Ambiguous(format!(
                "{} factors vanish below {tol:e}: {}",
                hits.len(),
                diag.join("; ")
            )))
        }
    }
}
