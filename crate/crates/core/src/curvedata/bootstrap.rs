//! Recover the cubic coefficients from a `(P, Q)` pair and its generating polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Cubic, IntPoly};

/// Solve the overdetermined rational system `rows * u = rhs` exactly.
/// Returns the unique solution, or an error when the system is inconsistent or rank-deficient.
pub fn solve_rational(rows: &[Vec<BigInt>], rhs: &[BigInt]) -> Result<Vec<BigRational>> {
    let nvars = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            r.iter()
                .chain(std::iter::once(b))
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..nvars {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / &m[rank][col];
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=nvars {
                    let t = &m[rank][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if let Some(i) = (rank..m.len()).find(|&i| !m[i][nvars].is_zero()) {
        return Err(Error::Inconsistent(format!("equation {i} has no solution")));
    }
    if rank < nvars {
        return Err(Error::Underdetermined { rank, needed: nvars });
    }
    let mut sol = vec![BigRational::zero(); nvars];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = m[r][nvars].clone();
    }
    Ok(sol)
}

/// The unique `(A, B, C, D, E)` with
/// `R = P^2 - Q^2 x^3 + A PQx - B Q^2 x^2 + C PQ - D Q^2 x - E Q^2`.
pub fn bootstrap_coeffs(p: &IntPoly, q: &IntPoly, r: &IntPoly) -> Result<Cubic> {
    if q.is_zero() {
        return Err(Error::Precondition("Q must be nonzero".into()));
    }
    let x = IntPoly::x();
    let pq = p * q;
    let q2 = q * q;
    let cols = [
        &pq * &x,
        -&(&q2 * &x.pow(2)),
        pq.clone(),
        -&(&q2 * &x),
        -&q2,
    ];
    let target = &(r - &(p * p)) + &(&q2 * &x.pow(3));
    let len = cols
        .iter()
        .chain(std::iter::once(&target))
        .map(|c| c.coeffs().len())
        .max()
        .unwrap_or(0);
    let rows: Vec<Vec<BigInt>> = (0..len)
        .map(|k| cols.iter().map(|c| c.coeff(k)).collect())
        .collect();
    let rhs: Vec<BigInt> = (0..len).map(|k| target.coeff(k)).collect();
    let sol = solve_rational(&rows, &rhs)?;
    let mut ints = [0i64; 5];
    for (i, v) in sol.iter().enumerate() {
        if !v.is_integer() {
            return Err(Error::Inconsistent(format!("non-integral solution {v}")));
        }
        use num_traits::ToPrimitive;
        ints[i] = v
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Inconsistent(format!("solution {v} out of range")))?;
    }
    Ok(Cubic::new(ints[0], ints[1], ints[2], ints[3], ints[4]))
}

/// Bootstrap a level from several `(m, P, Q, R)` tuples: every fully determined system must
/// give the same cubic; rank-deficient ones are skipped.
pub fn bootstrap_level(data: &[(u32, IntPoly, IntPoly, IntPoly)]) -> Result<Cubic> {
    let mut found: Option<(u32, Cubic)> = None;
    for (m, p, q, r) in data {
        match bootstrap_coeffs(p, q, r) {
            Ok(c) => match found {
                Some((m0, c0)) if c0 != c => {
                    return Err(Error::Inconsistent(format!(
                        "m={m0} gives {:?} but m={m} gives {:?}",
                        c0.as_tuple(),
                        c.as_tuple()
                    )))
                }
                Some(_) => {}
                None => found = Some((*m, c)),
            },
            Err(Error::Underdetermined { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    found
        .map(|(_, c)| c)
        .ok_or_else(|| Error::Precondition("no fully determined system among the inputs".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n141_from_appendix_pair() {
        let p = IntPoly::from_i64(&[0, 0, 3, 0, -1]);
        let q = IntPoly::from_i64(&[0, 0, 2]);
        let r = IntPoly::from_i64(&[0, 0, 0, 0, 3, 0, -8, -4, 1]);
        // m=2 alone leaves one degree of freedom for this level
        assert!(matches!(
            bootstrap_coeffs(&p, &q, &r),
            Err(Error::Underdetermined { rank: 4, needed: 5 })
        ));
    }

    #[test]
    fn inconsistent_system() {
        let p = IntPoly::from_i64(&[1, 1]);
        let q = IntPoly::from_i64(&[1]);
        let r = IntPoly::from_i64(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(matches!(bootstrap_coeffs(&p, &q, &r), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn roundtrip_random_cubic() {
        let c = Cubic::new(-3, 2, -5, -4, -6);
        let p = IntPoly::from_i64(&[7, -2, 3, 1, 0, -1]);
        let q = IntPoly::from_i64(&[1, 4, -2, 1]);
        let x = IntPoly::x();
        let k = |v: i64| BigInt::from(v);
        let pq = &p * &q;
        let q2 = &q * &q;
        let r = &(&(&(&(&(&(&p * &p) - &(&q2 * &x.pow(3))) + &(&pq * &x).scale(&k(c.a)))
            - &(&q2 * &x.pow(2)).scale(&k(c.b)))
            + &pq.scale(&k(c.c)))
            - &(&q2 * &x).scale(&k(c.d)))
            - &q2.scale(&k(c.e));
        assert_eq!(bootstrap_coeffs(&p, &q, &r).unwrap(), c);
    }
}
