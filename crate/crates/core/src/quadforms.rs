//! Positive definite binary quadratic forms, CM points and the map from discriminant
//! `N^2 d_K` to `d_K`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::arith::{crt, divisors, inv_mod};
use crate::error::{Error, Result};

/// `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.disc() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// `Q(p X + q Y, r X + s Y)`, i.e. `m^T Q m` for `m = [[p, q], [r, s]]`.
    pub fn transform(&self, m: [[i64; 2]; 2]) -> QuadForm {
        let [[p, q], [r, s]] = m;
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (p as i128, q as i128, r as i128, s as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        QuadForm::new(na as i64, nb as i64, nc as i64)
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// `tau = (-b + i sqrt|D|) / (2a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CMPoint {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl CMPoint {
    pub fn new(a: i64, b: i64, d: i64) -> Result<Self> {
        if a <= 0 || d >= 0 || (b * b - d) % (4 * a) != 0 {
            return Err(Error::Precondition(format!(
                "({a}, {b}, {d}) does not describe a CM point"
            )));
        }
        Ok(CMPoint { a, b, d })
    }

    /// The form `[a, b, (b^2 - D) / 4a]` whose upper root is this point.
    pub fn form(&self) -> QuadForm {
        QuadForm::new(self.a, self.b, (self.b * self.b - self.d) / (4 * self.a))
    }

    pub fn re(&self) -> f64 {
        -(self.b as f64) / (2.0 * self.a as f64)
    }

    pub fn im(&self) -> f64 {
        ((-self.d) as f64).sqrt() / (2.0 * self.a as f64)
    }
}

/// 2x2 matrix with rational entries `[[p, q], [r, s]]` acting by Moebius transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Matrix2 {
    pub p: Rational64,
    pub q: Rational64,
    pub r: Rational64,
    pub s: Rational64,
}

impl Matrix2 {
    pub fn new(p: Rational64, q: Rational64, r: Rational64, s: Rational64) -> Result<Self> {
        let m = Matrix2 { p, q, r, s };
        if m.det() <= Rational64::zero() {
            return Err(Error::Precondition("matrix determinant must be positive".into()));
        }
        Ok(m)
    }

    pub fn from_ints(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        Self::new(p.into(), q.into(), r.into(), s.into())
    }

    /// The Fricke involution, scaled to integer entries `[[0, -1], [N, 0]]`.
    pub fn fricke(n: i64) -> Self {
        Matrix2::from_ints(0, -1, n, 0).unwrap()
    }

    pub fn det(&self) -> Rational64 {
        self.p * self.s - self.q * self.r
    }

    pub fn trace(&self) -> Rational64 {
        self.p + self.s
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2 {
            p: self.p * o.p + self.q * o.r,
            q: self.p * o.q + self.q * o.s,
            r: self.r * o.p + self.s * o.r,
            s: self.r * o.q + self.s * o.s,
        }
    }
}

/// Gauss reduction of a positive definite form.
pub fn reduce(f: QuadForm) -> QuadForm {
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        if b.abs() > a {
            // translate x -> x + k y so that -a < b <= a
            let two_a = 2 * a;
            let mut nb = b.rem_euclid(two_a);
            if nb > a {
                nb -= two_a;
            }
            let k = (nb - b) / two_a;
            c += k * k * a + k * b;
            b = nb;
            continue;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    if b < 0 && (b == -a || a == c) {
        b = -b;
    }
    QuadForm::new(a, b, c)
}

fn check_disc(d: i64) -> Result<()> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::Precondition(format!("{d} is not a negative discriminant")));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant `d`, ordered by `a` then `b`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    check_disc(d)?;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadForm::new(a, b, c);
            if c >= a && f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(d: i64) -> Result<usize> {
    Ok(reduced_forms(d)?.len())
}

/// Unimodular `[[x, u], [y, v]]` with first column `(x, y)`.
fn complete_column(x: i64, y: i64) -> [[i64; 2]; 2] {
    let e = x.extended_gcd(&y);
    debug_assert_eq!(e.gcd.abs(), 1);
    let (s, t) = (e.x * e.gcd, e.y * e.gcd);
    // x s + y t = 1, so det [[x, -t], [y, s]] = 1
    [[x, -t], [y, s]]
}

/// Equivalent form whose first coefficient is prime to `m`, with the unimodular matrix
/// `g` such that the result is `g^T Q g`.
pub fn coprime_rep(f: QuadForm, m: i64) -> Result<(QuadForm, [[i64; 2]; 2])> {
    if !f.is_primitive() {
        return Err(Error::Precondition(format!("{f} is not primitive")));
    }
    let bound = 10 * m.max(1);
    for r in 0..=bound {
        // ring of max(|x|, |y|) = r, walked in a fixed order
        let mut ring = Vec::new();
        if r == 0 {
            continue;
        }
        for t in -r..=r {
            ring.push((r, t));
            ring.push((t, r));
        }
        ring.sort_unstable_by_key(|&(x, y)| (x.abs() + y.abs(), -x, -y));
        ring.dedup();
        for (x, y) in ring {
            if x.gcd(&y) != 1 {
                continue;
            }
            let v = f.eval(x, y);
            if v.gcd(&m) == 1 {
                let g = complete_column(x, y);
                return Ok((f.transform(g), g));
            }
        }
    }
    Err(Error::Precondition(format!(
        "no value of {f} prime to {m} within radius {bound}"
    )))
}

/// The map from forms of discriminant `N^2 d_K` to forms of discriminant `d_K`.
pub fn phi_map(f: QuadForm, n: i64, dk: i64) -> Result<QuadForm> {
    let big_d = n * n * dk;
    if f.disc() != big_d {
        return Err(Error::Precondition(format!(
            "{f} has discriminant {}, expected {big_d}",
            f.disc()
        )));
    }
    let (g, _) = coprime_rep(f, 2 * n)?;
    let (a1, b1, c1) = (g.a, g.b, g.c);
    let l = if n % 2 == 0 { 1 } else { 0 };
    let n_odd = n >> l;
    let m2 = 1i64 << (l + 2);
    // b1 = N b'' with b'' = d_K mod 4; for odd N this is 0 or N mod 4 as N^2 d_K is 0 or 1
    let target2 = (n * dk).rem_euclid(m2);
    let mut congr = Vec::new();
    // b1 + 2 a1 k = 0 mod n_odd
    if n_odd > 1 {
        let inv = inv_mod((2 * a1).rem_euclid(n_odd), n_odd)
            .ok_or_else(|| Error::Precondition(format!("2a'={} not invertible mod {n_odd}", 2 * a1)))?;
        congr.push(((-b1).rem_euclid(n_odd) * inv % n_odd, n_odd));
    }
    // b1 + 2 a1 k = target2 mod 2^{l+2}; a1 is odd so this is solvable iff b1 - target2 is even
    let rhs = target2 - b1;
    if rhs.rem_euclid(2) != 0 {
        return Err(Error::Inconsistent(format!(
            "b'={b1} has the wrong parity for the 2-adic congruence"
        )));
    }
    let half_mod = m2 / 2;
    let inv = inv_mod(a1.rem_euclid(half_mod), half_mod).unwrap_or(0);
    congr.push((((rhs / 2).rem_euclid(half_mod) * inv).rem_euclid(half_mod), half_mod));
    let (k, _) = crt(&congr).ok_or_else(|| Error::Inconsistent("CRT failed".into()))?;
    let bq = b1 + 2 * a1 * k;
    let cq = a1 * k * k + b1 * k + c1;
    if bq % n != 0 || cq % (n * n) != 0 {
        return Err(Error::Inconsistent(format!(
            "[{a1},{bq},{cq}] is not of the form [a, N b, N^2 c] for N={n}"
        )));
    }
    let out = QuadForm::new(a1, bq / n, cq / (n * n));
    debug_assert_eq!(out.disc(), dk);
    Ok(out)
}

pub fn cm_root(f: QuadForm) -> Result<CMPoint> {
    if !f.is_positive_definite() {
        return Err(Error::Precondition(format!("{f} is not positive definite")));
    }
    CMPoint::new(f.a, f.b, f.disc())
}

/// Upper half-plane fixed point of an elliptic matrix.
pub fn fixed_point(m: &Matrix2) -> Result<CMPoint> {
    let tr = m.trace();
    if tr * tr >= m.det() * 4 || m.r.is_zero() {
        return Err(Error::Precondition("matrix is not elliptic".into()));
    }
    // r z^2 + (s - p) z - q = 0, cleared of denominators
    let coefs = [m.r, m.s - m.p, -m.q];
    let l = coefs.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
    let ints: Vec<i64> = coefs.iter().map(|c| (c * l).to_integer()).collect();
    let mut f = QuadForm::new(ints[0], ints[1], ints[2]);
    let g = f.content();
    f = QuadForm::new(f.a / g, f.b / g, f.c / g);
    if f.a < 0 {
        f = QuadForm::new(-f.a, -f.b, -f.c);
    }
    cm_root(f)
}

/// `tau_0` for a fundamental discriminant: root of `z^2 + z + (1 - d_K)/4` or `z^2 - d_K/4`.
pub fn tau0_for(dk: i64) -> Result<CMPoint> {
    check_disc(dk)?;
    if dk.rem_euclid(4) == 1 {
        CMPoint::new(1, 1, dk)
    } else {
        CMPoint::new(1, 0, dk)
    }
}

/// Moves a CM point up within its orbit under `Gamma0(N)+` (translations and the
/// Atkin-Lehner matrices `[[e alpha, beta], [N gamma, e delta]]` of determinant `e`).
/// The returned point has the same value under any function invariant for that group.
pub fn raise_height(pt: CMPoint, n: i64) -> CMPoint {
    let mut f = pt.form();
    let normalize = |f: QuadForm| {
        // translate so that -a < b <= a
        let two_a = 2 * f.a;
        let mut nb = f.b.rem_euclid(two_a);
        if nb > f.a {
            nb -= two_a;
        }
        let k = (nb - f.b) / two_a;
        f.transform([[1, k], [0, 1]])
    };
    f = normalize(f);
    let es: Vec<i64> = divisors(n as u64).into_iter().map(|e| e as i64).collect();
    loop {
        let p = cm_root(f).expect("positive definite");
        let (x, y) = (p.re(), p.im());
        let mut best: Option<(f64, [[i64; 2]; 2])> = None;
        for &e in &es {
            let ne = n / e;
            let gmax = ((e as f64).sqrt() / (n as f64 * y)).ceil() as i64 + 1;
            for gamma in -gmax..=gmax {
                if gamma == 0 && e != 1 {
                    continue;
                }
                let centre = -(n as f64) * gamma as f64 * x / e as f64;
                for delta in (centre.floor() as i64 - 1)..=(centre.ceil() as i64 + 1) {
                    if gamma == 0 && delta.abs() != 1 {
                        continue;
                    }
                    if (e * delta).gcd(&(ne * gamma)) != 1 {
                        continue;
                    }
                    let re = n as f64 * gamma as f64 * x + e as f64 * delta as f64;
                    let im = n as f64 * gamma as f64 * y;
                    let score = (re * re + im * im) / e as f64;
                    if score >= 1.0 - 1e-12 || best.is_some_and(|(s, _)| s <= score) {
                        continue;
                    }
                    // e alpha delta - ne beta gamma = 1
                    let eg = (e * delta).extended_gcd(&(ne * gamma));
                    let (alpha, beta) = (eg.x * eg.gcd, -eg.y * eg.gcd);
                    // tau' = M tau with M = [[e alpha, beta], [N gamma, e delta]];
                    // the new form is Q o adj(M)
                    let adj = [[e * delta, -beta], [-n * gamma, e * alpha]];
                    best = Some((score, adj));
                }
            }
        }
        let Some((_, adj)) = best else { break };
        let mut g = f.transform(adj);
        let c = g.content();
        g = QuadForm::new(g.a / c, g.b / c, g.c / c);
        if g.a < 0 {
            g = QuadForm::new(-g.a, -g.b, -g.c);
        }
        f = normalize(g);
    }
    cm_root(f).expect("positive definite")
}
