//! The 38 genus-one levels, their cubic models and the q-expansions of `x_N`, `y_N`.

mod bootstrap;
mod fourier;
mod record;
mod registry;

pub use bootstrap::{bootstrap_coeffs, bootstrap_level, solve_rational};
pub use fourier::{
    an_coefficients, ap_count, ap_count_brute, conductor, fourier_from_parametrization,
    fourier_via_wp, newform_coefficients,
};
pub use record::{load_record, parse_record, render_record, save_record};
pub use registry::{LevelRegistry, Provenance, DEFAULT_ORDER};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Cubic, ZSeries};

/// Levels N whose group `Gamma0(N)+` has genus one.
pub const GENUS_ONE_LEVELS: [u32; 38] = [
    37, 43, 53, 57, 58, 61, 65, 74, 77, 79, 82, 83, 86, 89, 91, 101, 102, 111, 114, 118, 123,
    130, 131, 138, 141, 142, 143, 145, 155, 159, 174, 182, 190, 195, 210, 222, 231, 238,
];

/// Cubic coefficients `(A, B, C, D, E)` per level, as produced by [`bootstrap_level`]
/// from the modular-polynomial fixtures.
const CUBIC_TABLE: [(u32, Cubic); 38] = [
    (37, Cubic::new(-6, 6, -41, -49, -300)),
    (43, Cubic::new(-6, 4, -33, -43, -192)),
    (53, Cubic::new(-3, 6, -16, -1, -42)),
    (57, Cubic::new(-6, 2, -25, -37, -114)),
    (58, Cubic::new(-3, 6, -13, 2, -24)),
    (61, Cubic::new(-3, 4, -12, -7, -30)),
    (65, Cubic::new(-3, 4, -12, -1, -18)),
    (74, Cubic::new(0, 6, -3, 11, 4)),
    (77, Cubic::new(0, 6, -3, 14, 10)),
    (79, Cubic::new(-3, 2, -8, -8, -15)),
    (82, Cubic::new(-3, 4, -9, -2, -14)),
    (83, Cubic::new(-3, 2, -8, -5, -12)),
    (86, Cubic::new(0, 4, -3, 5, 0)),
    (89, Cubic::new(-3, 2, -8, -7, -14)),
    (91, Cubic::new(-6, 0, -17, -23, -42)),
    (101, Cubic::new(0, 4, -3, 4, -2)),
    (102, Cubic::new(-3, 2, -5, -4, -6)),
    (111, Cubic::new(-6, 0, -17, -25, -48)),
    (114, Cubic::new(0, 2, -3, -1, -2)),
    (118, Cubic::new(-3, 2, -5, -1, -2)),
    (123, Cubic::new(0, 2, -3, 2, -2)),
    (130, Cubic::new(3, 4, 6, 3, -2)),
    (131, Cubic::new(0, 2, -3, 2, -1)),
    (138, Cubic::new(-3, 2, -5, -3, -4)),
    (141, Cubic::new(0, 2, -3, 0, -3)),
    (142, Cubic::new(-3, 2, -5, -3, -6)),
    (143, Cubic::new(0, 2, -3, 0, -5)),
    (145, Cubic::new(-3, 0, -4, -7, -4)),
    (155, Cubic::new(0, 2, -3, 0, -2)),
    (159, Cubic::new(-3, 0, -4, -4, -3)),
    (174, Cubic::new(-3, 0, -1, -1, 0)),
    (182, Cubic::new(0, 0, -3, 1, -2)),
    (190, Cubic::new(-3, 2, -5, 0, 0)),
    (195, Cubic::new(-3, -2, 0, -1, 0)),
    (210, Cubic::new(-3, 2, -5, -5, -10)),
    (222, Cubic::new(0, 0, -3, -1, -2)),
    (231, Cubic::new(0, 0, -3, 2, -2)),
    (238, Cubic::new(-3, 0, -1, 2, 2)),
];

pub fn genus_one_levels() -> Vec<u32> {
    GENUS_ONE_LEVELS.to_vec()
}

pub fn is_level(n: u32) -> bool {
    GENUS_ONE_LEVELS.contains(&n)
}

pub fn curve_coeffs(n: u32) -> Result<Cubic> {
    CUBIC_TABLE
        .iter()
        .find(|(m, _)| *m == n)
        .map(|(_, c)| *c)
        .ok_or(Error::UnknownLevel(n))
}

/// Level N, its cubic, and the q-expansions of `x_N` (from `q^-2`) and `y_N` (from `q^-3`)
/// through `q^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub level: u32,
    pub cubic: Cubic,
    /// `x[i]` is the coefficient of `q^{i-2}`.
    pub x: Vec<BigInt>,
    /// `y[i]` is the coefficient of `q^{i-3}`.
    pub y: Vec<BigInt>,
    pub order: usize,
}

impl CurveRecord {
    pub fn new(level: u32, cubic: Cubic, x: Vec<BigInt>, y: Vec<BigInt>) -> Result<Self> {
        if x.len() < 3 || y.len() + 1 != x.len() + 2 {
            return Err(Error::Malformed(format!(
                "x has {} and y has {} coefficients",
                x.len(),
                y.len()
            )));
        }
        let rec = CurveRecord {
            level,
            cubic,
            order: x.len() - 3,
            x,
            y,
        };
        rec.check_normalization()?;
        Ok(rec)
    }

    fn check_normalization(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Malformed(format!("level {}: {what}", self.level)));
        if !self.x[0].is_one() {
            return bad("x is not monic at q^-2");
        }
        if !self.x[2].is_zero() {
            return bad("x has a nonzero constant term");
        }
        if !self.y[0].is_one() {
            return bad("y is not monic at q^-3");
        }
        if !self.y[3].is_zero() {
            return bad("y has a nonzero constant term");
        }
        Ok(())
    }

    /// Coefficient `c_n` of `x_N`, n >= -2.
    pub fn xc(&self, n: i64) -> &BigInt {
        &self.x[(n + 2) as usize]
    }

    /// Coefficient of `q^n` in `y_N`, n >= -3.
    pub fn yc(&self, n: i64) -> &BigInt {
        &self.y[(n + 3) as usize]
    }

    /// `x_N` known below `q^trunc` (trunc at most `order + 1`).
    pub fn x_series(&self, trunc: i64) -> Result<ZSeries> {
        self.need(trunc)?;
        Ok(ZSeries::from_ints(-2, self.x[..(trunc + 2) as usize].to_vec(), trunc))
    }

    pub fn y_series(&self, trunc: i64) -> Result<ZSeries> {
        self.need(trunc)?;
        Ok(ZSeries::from_ints(-3, self.y[..(trunc + 3) as usize].to_vec(), trunc))
    }

    fn need(&self, trunc: i64) -> Result<()> {
        if trunc > self.order as i64 + 1 {
            return Err(Error::InsufficientOrder {
                have: self.order,
                need: (trunc - 1).max(0) as usize,
            });
        }
        Ok(())
    }

    /// Truncated copy through `q^order`.
    pub fn truncated(&self, order: usize) -> CurveRecord {
        let order = order.min(self.order);
        CurveRecord {
            level: self.level,
            cubic: self.cubic,
            x: self.x[..order + 3].to_vec(),
            y: self.y[..order + 4].to_vec(),
            order,
        }
    }
}

/// Outcome of [`validate_cubic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicCheck {
    pub ok: bool,
    /// Lowest exponent where the relation fails.
    pub first_failure: Option<i64>,
    /// Highest exponent checked (window is `q^-6 .. q^checked_through`).
    pub checked_through: i64,
    /// True when the checked window stops before the constant term.
    pub insufficient: bool,
}

/// Check `y^2 - x^3 - A xy - B x^2 - C y - D x - E = 0` over every exponent determined by
/// the stored coefficients (through `q^{order-4}`).
pub fn validate_cubic(rec: &CurveRecord) -> CubicCheck {
    let trunc = rec.order as i64 + 1;
    let x = rec.x_series(trunc).unwrap();
    let y = rec.y_series(trunc).unwrap();
    let c = rec.cubic;
    let k = |v: i64| BigInt::from(v);
    let lhs = y.mul(&y).unwrap();
    let x2 = x.mul(&x).unwrap();
    let x3 = x2.mul(&x).unwrap();
    let xy = x.mul(&y).unwrap();
    let window_top = [lhs.trunc(), x3.trunc(), xy.trunc()].into_iter().min().unwrap() - 1;
    let mut first_failure = None;
    for n in -6..=window_top {
        let mut r = lhs.get(n).unwrap().clone();
        r -= x3.get(n).unwrap();
        r -= xy.get(n).unwrap() * k(c.a);
        r -= x2.get(n).unwrap() * k(c.b);
        r -= y.get(n).unwrap() * k(c.c);
        r -= x.get(n).unwrap() * k(c.d);
        if n == 0 {
            r -= k(c.e);
        }
        if !r.is_zero() {
            first_failure = Some(n);
            break;
        }
    }
    CubicCheck {
        ok: first_failure.is_none(),
        first_failure,
        checked_through: window_top,
        insufficient: window_top < 0,
    }
}
