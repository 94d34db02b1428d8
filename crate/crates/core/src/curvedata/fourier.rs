//! Hecke eigenvalues from point counts and the q-expansions of `x_N`, `y_N`.
//!
//! The differential `dx / (2y + a1 x + a3)` pulls back to `-g(q) dq/q`, where `g` is the weight-two
//! cusp form of the quotient curve. With `X = q^2 x` and `F = g/q` this gives the integral recursion
//! `(q dX/dq - 2X)^2 = F^2 (4X^3 + b2 q^2 X^2 + 2 b4 q^4 X + b6 q^6)` solved term by term.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::CurveRecord;
use crate::arith::{legendre, prime_divisors, primes_upto};
use crate::error::{Error, Result};
use crate::exactalg::Cubic;

fn reduce(c: &Cubic, p: i64) -> [i64; 5] {
    [c.a, c.b, c.c, c.d, c.e].map(|v| v.rem_euclid(p))
}

fn singular_mod(c: &Cubic, p: u64) -> bool {
    (c.discriminant() % BigInt::from(p)).is_zero()
}

/// Projective points of the reduction that are smooth.
fn smooth_points(c: &Cubic, p: u64) -> u64 {
    let p = p as i64;
    let [a, b, cc, d, e] = reduce(c, p);
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let f = (y * y - x * x * x - a * x * y - b * x * x - cc * y - d * x - e).rem_euclid(p);
            if f != 0 {
                continue;
            }
            let fx = (3 * x * x + a * y + 2 * b * x + d).rem_euclid(p);
            let fy = (2 * y - a * x - cc).rem_euclid(p);
            if fx != 0 || fy != 0 {
                n += 1;
            }
        }
    }
    n
}

/// Trace of Frobenius `a_p = p + 1 - #C(F_p)` of the cubic. For singular reduction this is
/// `p - #(smooth points)`, i.e. 1, -1 or 0 for split, non-split and additive reduction.
pub fn ap_count(c: &Cubic, p: u64) -> i64 {
    if singular_mod(c, p) {
        return p as i64 - smooth_points(c, p) as i64;
    }
    if p == 2 {
        return 3 - smooth_points(c, 2) as i64;
    }
    let pi = p as i64;
    let [a, b, cc, d, e] = reduce(c, pi);
    let mut count = 1i64;
    for x in 0..pi {
        let lin = (a * x + cc) % pi;
        let cub = ((x * x % pi) * x + b * x % pi * x + d * x + e) % pi;
        count += 1 + legendre(lin * lin + 4 * cub, p);
    }
    pi + 1 - count
}

/// Brute-force `a_p` over the full affine plane, either x-outer or y-outer (for cross-checks).
pub fn ap_count_brute(c: &Cubic, p: u64, y_outer: bool) -> i64 {
    let pi = p as i64;
    let [a, b, cc, d, e] = reduce(c, pi);
    let f = |x: i64, y: i64| (y * y - x * x * x - a * x * y - b * x * x - cc * y - d * x - e).rem_euclid(pi);
    let mut n = 1i64;
    for u in 0..pi {
        for v in 0..pi {
            let (x, y) = if y_outer { (v, u) } else { (u, v) };
            if f(x, y) == 0 {
                n += 1;
            }
        }
    }
    pi + 1 - n
}

/// Conductor of the cubic's curve: the primes of N at which the model is singular.
pub fn conductor(level: u32, c: &Cubic) -> u32 {
    prime_divisors(level as u64)
        .into_iter()
        .filter(|&p| singular_mod(c, p))
        .product::<u64>() as u32
}

/// Coefficients `a_0 = 0, a_1 = 1, ..., a_n` of the newform of the given conductor.
pub fn newform_coefficients(c: &Cubic, cond: u32, n_max: usize) -> Vec<i64> {
    let mut a = vec![0i64; n_max + 1];
    if n_max == 0 {
        return a;
    }
    a[1] = 1;
    let mut spf = vec![0usize; n_max + 1];
    for p in primes_upto(n_max) {
        let p = p as usize;
        let mut k = p;
        while k <= n_max {
            if spf[k] == 0 {
                spf[k] = p;
            }
            k += p;
        }
    }
    let mut ap = vec![0i64; n_max + 1];
    for n in 2..=n_max {
        let p = spf[n];
        let mut m = n;
        let mut pk = 1;
        while m % p == 0 {
            m /= p;
            pk *= p;
        }
        if m > 1 {
            a[n] = a[pk] * a[m];
            continue;
        }
        if pk == p {
            ap[p] = ap_count(c, p as u64);
            a[n] = ap[p];
        } else if cond as usize % p == 0 {
            a[n] = a[pk / p] * ap[p];
        } else {
            a[n] = ap[p] * a[pk / p] - p as i64 * a[pk / (p * p)];
        }
    }
    a
}

/// Coefficients `a_0 = 0, a_1, ..., a_n` of the weight-two form attached to `Gamma0(N)+`:
/// `sum_{d | N/M} d f(q^d)` with f the newform of conductor M.
pub fn an_coefficients(level: u32, c: &Cubic, n_max: usize) -> Vec<i64> {
    let cond = conductor(level, c);
    let f = newform_coefficients(c, cond, n_max);
    let extra = level / cond;
    let mut g = vec![0i64; n_max + 1];
    for d in 1..=extra as usize {
        if extra as usize % d != 0 {
            continue;
        }
        for n in 1..=n_max / d {
            g[n * d] += d as i64 * f[n];
        }
    }
    g
}

/// x and y through `q^order` from the integral differential recursion.
pub fn fourier_from_parametrization(level: u32, c: &Cubic, order: usize) -> Result<CurveRecord> {
    let k_max = order + 3;
    let g = an_coefficients(level, c, k_max + 1);
    let f: Vec<BigInt> = (0..=k_max).map(|k| BigInt::from(g[k + 1])).collect();
    let f2: Vec<BigInt> = (0..=k_max)
        .map(|k| (0..=k).map(|i| &f[i] * &f[k - i]).sum())
        .collect();
    let [b2, b4, b6, _] = c.b_invariants();
    let two_b4 = 2 * &b4;

    let mut e: Vec<BigInt> = vec![BigInt::one()];
    let mut yv: Vec<BigInt> = vec![BigInt::from(-2)];
    let mut x2: Vec<BigInt> = vec![BigInt::one()];
    let mut gv: Vec<BigInt> = vec![BigInt::from(4)];
    for k in 1..=k_max {
        let mut partial2 = BigInt::zero();
        let mut partial3 = BigInt::zero();
        let mut ly = BigInt::zero();
        for i in 1..k {
            partial2 += &e[i] * &e[k - i];
            partial3 += &e[i] * &x2[k - i];
            ly += &yv[i] * &yv[k - i];
        }
        let mut g_rest = 4 * (&partial2 + &partial3);
        if k >= 2 {
            g_rest += &b2 * &x2[k - 2];
        }
        if k >= 4 {
            g_rest += &two_b4 * &e[k - 4];
        }
        if k == 6 {
            g_rest += &b6;
        }
        let mut r_rest = BigInt::zero();
        for i in 1..=k {
            r_rest += &f2[i] * &gv[k - i];
        }
        let num: BigInt = ly - &g_rest - r_rest;
        let den = BigInt::from(4 * (k + 1));
        let (ek, rem) = num.div_rem(&den);
        if !rem.is_zero() {
            return Err(Error::NonIntegral {
                exponent: k as i64 - 2,
                detail: format!("x coefficient {num}/{den} at level {level}"),
            });
        }
        if k == 2 && !ek.is_zero() {
            return Err(Error::NonIntegral {
                exponent: 0,
                detail: format!("x has constant term {ek} at level {level}"),
            });
        }
        x2.push(2 * &ek + partial2);
        gv.push(12 * &ek + g_rest);
        yv.push(BigInt::from(k as i64 - 2) * &ek);
        e.push(ek);
    }

    // H = (q dx/dq) / g, shifted by q^3; then y = (-H + A x + C) / 2
    let mut h: Vec<BigInt> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut v = yv[k].clone();
        for i in 1..=k {
            v -= &f[i] * &h[k - i];
        }
        h.push(v);
    }
    let mut y = Vec::with_capacity(order + 4);
    for k in 0..=k_max {
        let j = k as i64 - 3;
        let mut v = -&h[k];
        if k >= 1 {
            v += c.a * &e[k - 1];
        }
        if j == 0 {
            v += c.c;
        }
        let (q, r) = v.div_rem(&BigInt::from(2));
        if !r.is_zero() {
            return Err(Error::NonIntegral {
                exponent: j,
                detail: format!("y coefficient {v}/2 at level {level}"),
            });
        }
        y.push(q);
    }
    if !y[3].is_zero() {
        return Err(Error::NonIntegral {
            exponent: 0,
            detail: format!("y has constant term {} at level {level}", y[3]),
        });
    }
    e.truncate(order + 3);
    CurveRecord::new(level, *c, e, y)
}

fn rmul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn rinv(a: &[BigRational], len: usize) -> Vec<BigRational> {
    let inv0 = BigRational::one() / &a[0];
    let mut b: Vec<BigRational> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = if k == 0 { BigRational::one() } else { BigRational::zero() };
        for i in 1..=k.min(a.len() - 1) {
            acc -= &a[i] * &b[k - i];
        }
        b.push(acc * &inv0);
    }
    b
}

/// x coefficients `q^-2 .. q^order` as `wp(w(q)) - b2/12` with `w = sum a_n q^n / n`,
/// the Weierstrass function of the short model expanded formally over the rationals.
pub fn fourier_via_wp(level: u32, c: &Cubic, order: usize) -> Vec<BigRational> {
    let len = order + 3;
    let g = an_coefficients(level, c, len + 1);
    let u: Vec<BigRational> = (0..len)
        .map(|n| BigRational::new(BigInt::from(g[n + 1]), BigInt::from(n + 1)))
        .collect();
    let [b2, b4, b6, _] = c.b_invariants();
    let c4 = &b2 * &b2 - 24 * &b4;
    let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
    let g2 = BigRational::new(c4, BigInt::from(12));
    let g3 = BigRational::new(c6, BigInt::from(216));
    let kmax = len / 2 + 1;
    let mut ck = vec![BigRational::zero(); kmax + 1];
    if kmax >= 2 {
        ck[2] = &g2 / BigRational::from_integer(20.into());
    }
    if kmax >= 3 {
        ck[3] = &g3 / BigRational::from_integer(28.into());
    }
    for k in 4..=kmax {
        let mut s = BigRational::zero();
        for m in 2..=k - 2 {
            s += &ck[m] * &ck[k - m];
        }
        ck[k] = s * BigRational::new(3.into(), BigInt::from((2 * k + 1) * (k - 3)));
    }
    let u2 = rmul(&u, &u, len);
    let mut bracket = rinv(&u2, len);
    // u^{2k-2}, starting at k = 2
    let mut upow = u2.clone();
    for (k, c) in ck.iter().enumerate().skip(2) {
        let shift = 2 * k;
        if shift >= len {
            break;
        }
        for i in 0..len - shift {
            bracket[i + shift] += c * &upow[i];
        }
        upow = rmul(&upow, &u2, len);
    }
    bracket[2] -= BigRational::new(b2, BigInt::from(12));
    bracket
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_and_bad_primes_37() {
        let c = Cubic::new(-6, 6, -41, -49, -300);
        for p in primes_upto(200) {
            let ap = ap_count(&c, p);
            assert!((ap * ap) as u64 <= 4 * p, "p={p} ap={ap}");
        }
        assert_eq!(ap_count(&c, 37).abs(), 1);
        assert_eq!(conductor(37, &c), 37);
    }

    #[test]
    fn old_levels_have_smaller_conductor() {
        let c = Cubic::new(0, 6, -3, 11, 4);
        assert_eq!(conductor(74, &c), 37);
    }

    #[test]
    fn ode_141_leading_terms() {
        let c = Cubic::new(0, 2, -3, 0, -3);
        let rec = fourier_from_parametrization(141, &c, 12).unwrap();
        let got: Vec<i64> = rec.x[..8].iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(got, vec![1, 0, 0, 1, 1, 1, 2, 1]);
        assert!(super::super::validate_cubic(&rec).ok);
    }
}
