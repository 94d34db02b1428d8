//! The modular polynomial `Phi_{m,N}(X) = prod_{w in Omega(m)} (X - x_N o w)` and its
//! `P + y Q` form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::curvedata::{CurveRecord, LevelRegistry};
use crate::error::{Error, Result};
use crate::exactalg::{CycInt, CycSeries, IntPoly, QSeries, YLinearPoly, ZSeries};

/// Guard terms kept past the constant term of every coefficient series.
pub const GUARD: i64 = 16;

/// Upper-triangular `[[a, b], [0, d]]` with `ad = m`, `0 <= b < d`, `gcd(a, b, d) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaMatrix {
    pub a: u32,
    pub b: u32,
    pub d: u32,
}

pub fn omega_set(m: u32) -> Vec<OmegaMatrix> {
    let mut out = Vec::new();
    for a in (1..=m).rev() {
        if m % a != 0 {
            continue;
        }
        let d = m / a;
        for b in 0..d {
            if a.gcd(&b).gcd(&d) == 1 {
                out.push(OmegaMatrix { a, b, d });
            }
        }
    }
    out
}

/// `|Omega(m)|`.
pub fn psi(m: u32) -> usize {
    omega_set(m).len()
}

/// `sum_{d | m} max(d, m/d)`.
pub fn sigma1_plus(m: u32) -> u32 {
    (1..=m).filter(|d| m % d == 0).map(|d| d.max(m / d)).sum()
}

/// Total pole order (in q) of `prod_w x_N o w`, i.e. `sum 2a/d`, as a fraction `num/den`
/// rounded up.
fn total_pole(m: u32) -> i64 {
    let mut num = 0u64;
    let mut den = 1u64;
    for w in omega_set(m) {
        let (n2, d2) = (2 * w.a as u64, w.d as u64);
        num = num * d2 + n2 * den;
        den *= d2;
        let g = num.gcd(&den);
        num /= g;
        den /= g;
    }
    num.div_ceil(den) as i64
}

/// Largest x-coefficient index used when building `Phi_{m,N}` with the given guard.
pub fn required_order(m: u32, guard: i64) -> usize {
    let t = guard + total_pole(m);
    omega_set(m)
        .iter()
        .map(|w| ((t * w.d as i64) as u64).div_ceil(w.a as u64) as usize)
        .max()
        .unwrap_or(0)
}

/// `x_N o w = sum c_n zeta_d^{bn} q^{an/d}` as a series in `q^{1/d}` over the d-th cyclotomic
/// ring, known below `q^trunc`.
pub fn omega_pullback(rec: &CurveRecord, w: &OmegaMatrix, trunc: i64) -> Result<CycSeries> {
    let d = w.d;
    let t_num = trunc * d as i64;
    let n_max = ((t_num as u64).div_ceil(w.a as u64) as i64 - 1).max(-2);
    if n_max > rec.order as i64 {
        return Err(Error::InsufficientOrder {
            have: rec.order,
            need: n_max as usize,
        });
    }
    let lo = -2 * w.a as i64;
    let zero = CycInt::zero(d);
    let mut s = QSeries::zero_series(d, lo, t_num, zero);
    for n in -2..=n_max {
        let c = rec.xc(n);
        if c.is_zero() {
            continue;
        }
        let e = n * w.a as i64;
        if e >= t_num {
            break;
        }
        s.set(e, CycInt::zeta_pow(d, w.b as i64 * n).scale(c));
    }
    Ok(s)
}

fn poly_mul_linear<R: crate::exactalg::Coef>(
    poly: &[QSeries<R>],
    root: &QSeries<R>,
) -> Result<Vec<QSeries<R>>> {
    // (sum c_j X^j) (X - r)
    let mut out = Vec::with_capacity(poly.len() + 1);
    for j in 0..=poly.len() {
        let shifted = if j >= 1 { Some(&poly[j - 1]) } else { None };
        let here = if j < poly.len() {
            Some(poly[j].mul(root)?.neg())
        } else {
            None
        };
        out.push(match (shifted, here) {
            (Some(a), Some(b)) => a.add(&b)?,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        });
    }
    Ok(out)
}

fn block_product(rec: &CurveRecord, a: u32, d: u32, ws: &[OmegaMatrix], trunc: i64) -> Result<Vec<ZSeries>> {
    let big = (trunc + 1) * d as i64;
    let one = QSeries::new(d, 0, vec![CycInt::from_int(d, BigInt::one())], big, CycInt::zero(d));
    let mut poly = vec![one];
    for w in ws {
        let s = omega_pullback(rec, w, trunc)?;
        poly = poly_mul_linear(&poly, &s)?;
    }
    poly.into_iter()
        .map(|c| {
            let ints: Vec<BigInt> = c
                .coeffs()
                .iter()
                .map(|v| v.to_int())
                .collect::<Result<_>>()?;
            let zs = ZSeries::new(d, c.lo(), ints, c.trunc(), BigInt::zero());
            zs.reindex(1).map_err(|e| {
                Error::Pipeline(format!("block (a={a}, d={d}) leaves a fractional exponent: {e}"))
            })
        })
        .collect()
}

/// Coefficients `E_0 .. E_psi` of `Phi_{m,N}(X)` as integer q-series known below `q^guard`.
pub fn phi_series(rec: &CurveRecord, m: u32, guard: i64) -> Result<Vec<ZSeries>> {
    let trunc = guard + total_pole(m);
    let ws = omega_set(m);
    let mut blocks: Vec<(u32, u32, Vec<OmegaMatrix>)> = Vec::new();
    for w in &ws {
        match blocks.last_mut() {
            Some((a, d, v)) if *a == w.a && *d == w.d => v.push(*w),
            _ => blocks.push((w.a, w.d, vec![*w])),
        }
    }
    let polys: Vec<Vec<ZSeries>> = blocks
        .par_iter()
        .map(|(a, d, v)| block_product(rec, *a, *d, v, trunc))
        .collect::<Result<_>>()?;
    let mut acc: Vec<ZSeries> = vec![ZSeries::one(trunc + 1)];
    for p in polys {
        let mut next: Vec<Option<ZSeries>> = vec![None; acc.len() + p.len() - 1];
        for (i, u) in acc.iter().enumerate() {
            for (j, v) in p.iter().enumerate() {
                let t = u.mul(v)?;
                next[i + j] = Some(match next[i + j].take() {
                    Some(s) => s.add(&t)?,
                    None => t,
                });
            }
        }
        acc = next.into_iter().map(|s| s.unwrap()).collect();
    }
    acc.into_iter()
        .map(|s| {
            if s.trunc() < guard {
                return Err(Error::Pipeline(format!(
                    "coefficient series known only below q^{}",
                    s.trunc()
                )));
            }
            Ok(s.truncate(guard))
        })
        .collect()
}

/// `Phi_{m,N}` with coefficients reduced to `p(x) + y q(x)`.
#[derive(Clone, Debug)]
pub struct ModularPolynomial {
    pub level: u32,
    pub m: u32,
    /// Coefficient of `X^j` for `j = 0 .. psi(m)`.
    pub coeffs: Vec<YLinearPoly>,
}

impl ModularPolynomial {
    pub fn x_degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

pub fn phi_polynomial(rec: &CurveRecord, m: u32) -> Result<ModularPolynomial> {
    if m < 2 || (m as u64).gcd(&(rec.level as u64)) != 1 {
        return Err(Error::Precondition(format!(
            "m={m} must exceed 1 and be coprime to N={}",
            rec.level
        )));
    }
    let series = phi_series(rec, m, GUARD)?;
    let coeffs = series
        .iter()
        .map(|s| reduce_to_xy(s, rec))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.last() != Some(&YLinearPoly::constant(BigInt::one())) {
        return Err(Error::Pipeline("Phi is not monic in X".into()));
    }
    Ok(ModularPolynomial {
        level: rec.level,
        m,
        coeffs,
    })
}

/// Write an integer q-series as `p(x_N) + y_N q(x_N)` by cancelling poles from the top.
pub fn reduce_to_xy(f: &ZSeries, rec: &CurveRecord) -> Result<YLinearPoly> {
    if f.s() != 1 {
        return Err(Error::Precondition("series must be in integral powers of q".into()));
    }
    let Some(v) = f.valuation() else {
        return Ok(YLinearPoly::zero());
    };
    let pole = (-v).max(0);
    let trunc = f.trunc();
    if trunc <= 0 {
        return Err(Error::Precondition("series window ends before the constant term".into()));
    }
    // x^a is known below q^{t - 2(a-1)} when x is known below q^t
    let xt = trunc + pole + 2;
    let x = rec.x_series(xt)?;
    let y = rec.y_series(xt)?;
    let max_a = (pole / 2) as usize;
    let mut xpow: Vec<ZSeries> = vec![ZSeries::one(xt + 3)];
    for a in 1..=max_a {
        xpow.push(xpow[a - 1].mul(&x)?);
    }
    let mut r = f.clone();
    let mut out = YLinearPoly::zero();
    while let Some(v) = r.valuation() {
        if v > 0 {
            return Err(Error::Remainder(v));
        }
        let k = -v;
        if k == 1 {
            return Err(Error::PoleOrderOne);
        }
        let c = r.get(v).unwrap().clone();
        let (term, mono) = if k % 2 == 0 {
            let a = (k / 2) as usize;
            (xpow[a].truncate(trunc), YLinearPoly::x_pow(a))
        } else {
            let a = ((k - 3) / 2) as usize;
            (
                xpow[a].mul(&y)?.truncate(trunc),
                YLinearPoly::new(IntPoly::zero(), IntPoly::monomial(BigInt::one(), a)),
            )
        };
        if term.trunc() < trunc {
            return Err(Error::Pipeline(format!(
                "pole term for q^{v} known only below q^{}",
                term.trunc()
            )));
        }
        r = r.sub(&term.scale(&c))?;
        out = out.add(&mono.scale(&c));
    }
    Ok(out)
}

/// Re-expand `p(x_N) + y_N q(x_N)` as a q-series known below `q^trunc`.
pub fn expand_xy(f: &YLinearPoly, rec: &CurveRecord, trunc: i64) -> Result<ZSeries> {
    let dp = f.p.degree().unwrap_or(0) as i64;
    let dq = f.q.degree().unwrap_or(0) as i64;
    let xt = trunc + 2 * dp.max(dq + 2) + 3;
    let x = rec.x_series(xt)?;
    let y = rec.y_series(xt)?;
    let horner = |p: &IntPoly| -> Result<ZSeries> {
        let mut acc = ZSeries::from_ints(0, vec![], xt);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(&x)?.add(&ZSeries::from_ints(0, vec![c.clone()], xt))?;
        }
        Ok(acc)
    };
    let s = horner(&f.p)?.add(&horner(&f.q)?.mul(&y)?)?;
    if s.trunc() < trunc {
        return Err(Error::Pipeline("expansion window too short".into()));
    }
    Ok(s.truncate(trunc))
}

/// `Phi_{m,N}(x_N(z))` computed directly as a q-series (independent of `reduce_to_xy`).
pub fn phi_substituted_series(rec: &CurveRecord, m: u32, guard: i64) -> Result<ZSeries> {
    let p = psi(m) as i64;
    let series = phi_series(rec, m, guard + 2 * p)?;
    let x = rec.x_series(guard + 2 * p + 4 * sigma1_plus(m) as i64 + 8)?;
    let mut acc = series.last().unwrap().clone();
    for e in series.iter().rev().skip(1) {
        acc = acc.mul(&x)?.add(e)?;
    }
    Ok(acc.truncate(guard))
}

/// `(P_{m,N}, Q_{m,N})` with `Phi_{m,N}(x_N) = P(x_N) + y_N Q(x_N)`.
pub fn pq_extract(rec: &CurveRecord, m: u32) -> Result<(IntPoly, IntPoly)> {
    let r = (m as f64).sqrt().round() as u32;
    if r * r == m {
        return Err(Error::Precondition(format!("m={m} is a perfect square")));
    }
    let phi = phi_polynomial(rec, m)?;
    let mut p = IntPoly::zero();
    let mut q = IntPoly::zero();
    for (j, c) in phi.coeffs.iter().enumerate() {
        p = &p + &c.p.shift(j);
        q = &q + &c.q.shift(j);
    }
    let sigma = sigma1_plus(m) as usize;
    if p.degree() != Some(sigma) || !p.lead().abs().is_one() {
        return Err(Error::Pipeline(format!(
            "P has degree {:?} and lead {}, expected degree {sigma} with unit lead",
            p.degree(),
            p.lead()
        )));
    }
    if q.degree().is_some_and(|d| d + 2 > sigma) {
        return Err(Error::Pipeline(format!("Q has degree {:?} > {}", q.degree(), sigma - 2)));
    }
    Ok((p, q))
}

/// [`pq_extract`] with the curve record taken from a registry at sufficient order.
pub fn pq_for_level(reg: &LevelRegistry, level: u32, m: u32) -> Result<(IntPoly, IntPoly)> {
    let rec = reg.record(level, required_order(m, GUARD) + 4)?;
    pq_extract(&rec, m)
}
