//! Elements `p(x) + y q(x)` of `Z[x, y]` modulo the cubic relation.

use std::fmt;

use num_bigint::BigInt;

use super::poly::IntPoly;

/// Integer coefficients of `y^2 = x^3 + A xy + B x^2 + C y + D x + E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cubic {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

impl Cubic {
    pub const fn new(a: i64, b: i64, c: i64, d: i64, e: i64) -> Self {
        Cubic { a, b, c, d, e }
    }

    pub fn as_tuple(&self) -> (i64, i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d, self.e)
    }

    /// `x^3 + B x^2 + D x + E`, the y-free part of `y^2`.
    pub fn y2_free(&self) -> IntPoly {
        IntPoly::from_i64(&[self.e, self.d, self.b, 1])
    }

    /// `A x + C`, the coefficient of y in `y^2`.
    pub fn y2_linear(&self) -> IntPoly {
        IntPoly::from_i64(&[self.c, self.a])
    }

    /// Long Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
    pub fn weierstrass(&self) -> [i64; 5] {
        [-self.a, self.b, -self.c, self.d, self.e]
    }

    /// `(b2, b4, b6, b8)` of the long Weierstrass model.
    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.weierstrass().map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// `y^2 - x^3 - A xy - B x^2 - C y - D x - E` at integer arguments.
    pub fn residual_i(&self, x: &BigInt, y: &BigInt) -> BigInt {
        y * y - x * x * x - self.a * x * y - self.b * x * x - self.c * y - self.d * x - self.e
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct YLinearPoly {
    pub p: IntPoly,
    pub q: IntPoly,
}

impl YLinearPoly {
    pub fn new(p: IntPoly, q: IntPoly) -> Self {
        YLinearPoly { p, q }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn x_pow(a: usize) -> Self {
        Self::new(IntPoly::monomial(1.into(), a), IntPoly::zero())
    }

    pub fn y() -> Self {
        Self::new(IntPoly::zero(), IntPoly::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(IntPoly::constant(c), IntPoly::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.p + &o.p, &self.q + &o.q)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.p - &o.p, &self.q - &o.q)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.p.scale(c), self.q.scale(c))
    }

    /// Multiply by `x^k`.
    pub fn shift_x(&self, k: usize) -> Self {
        Self::new(self.p.shift(k), self.q.shift(k))
    }

    /// Product with `y^2` rewritten through the cubic.
    pub fn mul(&self, o: &Self, cubic: &Cubic) -> Self {
        let qq = &self.q * &o.q;
        let p = &(&self.p * &o.p) + &(&qq * &cubic.y2_free());
        let q = &(&(&self.p * &o.q) + &(&o.p * &self.q)) + &(&qq * &cubic.y2_linear());
        Self::new(p, q)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
}

/// `ylinear_mul`.
pub fn ylinear_mul(a: &YLinearPoly, b: &YLinearPoly, cubic: &Cubic) -> YLinearPoly {
    a.mul(b, cubic)
}

impl fmt::Debug for YLinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + y*({})", self.p, self.q)
    }
}
