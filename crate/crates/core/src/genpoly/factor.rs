//! Factorization over the integers: squarefree decomposition, Cantor-Zassenhaus modulo a
//! small prime, Hensel lifting and subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::is_prime;
use crate::exactalg::IntPoly;

/// `content * prod f_i^{e_i}`, factors primitive with positive lead, sorted by degree and
/// then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPoly {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl FactoredPoly {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }
}

// ---- polynomials modulo m, ascending coefficients in [0, m) ----

#[derive(Clone)]
struct Zm {
    m: BigInt,
}

type Mp = Vec<BigInt>;

impl Zm {
    fn red(&self, v: &BigInt) -> BigInt {
        v.mod_floor(&self.m)
    }

    fn trim(mut a: Mp) -> Mp {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    fn from_int(&self, f: &IntPoly) -> Mp {
        Self::trim(f.coeffs().iter().map(|c| self.red(c)).collect())
    }

    fn add(&self, a: &Mp, b: &Mp) -> Mp {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        Self::trim(
            (0..n)
                .map(|i| self.red(&(a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))))
                .collect(),
        )
    }

    fn sub(&self, a: &Mp, b: &Mp) -> Mp {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        Self::trim(
            (0..n)
                .map(|i| self.red(&(a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))))
                .collect(),
        )
    }

    fn scale(&self, a: &Mp, c: &BigInt) -> Mp {
        Self::trim(a.iter().map(|v| self.red(&(v * c))).collect())
    }

    fn mul(&self, a: &Mp, b: &Mp) -> Mp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::trim(out.into_iter().map(|v| self.red(&v)).collect())
    }

    fn inv(&self, a: &BigInt) -> BigInt {
        let e = a.extended_gcd(&self.m);
        debug_assert!(e.gcd.is_one());
        self.red(&e.x)
    }

    /// Division by a polynomial whose lead is a unit.
    fn divrem(&self, a: &Mp, b: &Mp) -> (Mp, Mp) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.clone());
        }
        let li = self.inv(b.last().unwrap());
        let mut r = a.clone();
        let mut q = vec![BigInt::zero(); a.len() - db];
        for k in (db..a.len()).rev() {
            let c = self.red(&(&r[k] * &li));
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.iter().enumerate() {
                r[k - db + j] = self.red(&(&r[k - db + j] - &c * bc));
            }
            q[k - db] = c;
        }
        (Self::trim(q), Self::trim(r))
    }

    fn rem(&self, a: &Mp, b: &Mp) -> Mp {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &Mp) -> Mp {
        match a.last() {
            Some(l) => self.scale(a, &self.inv(l)),
            None => Vec::new(),
        }
    }

    /// Monic gcd (field modulus only).
    fn gcd(&self, a: &Mp, b: &Mp) -> Mp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g` (field modulus only).
    fn ext_gcd(&self, a: &Mp, b: &Mp) -> (Mp, Mp, Mp) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![BigInt::one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![BigInt::one()]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let li = self.inv(r0.last().unwrap());
        (self.scale(&r0, &li), self.scale(&s0, &li), self.scale(&t0, &li))
    }

    fn powmod(&self, base: &Mp, e: &BigInt, f: &Mp) -> Mp {
        let mut acc = vec![BigInt::one()];
        let mut b = self.rem(base, f);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), f);
            }
            if i + 1 < bits {
                b = self.rem(&self.mul(&b, &b), f);
            }
        }
        acc
    }

    fn derivative(&self, a: &Mp) -> Mp {
        Self::trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.red(&(c * BigInt::from(i))))
                .collect(),
        )
    }

    fn symmetric(&self, a: &Mp) -> IntPoly {
        let half: BigInt = &self.m >> 1;
        IntPoly::new(
            a.iter()
                .map(|c| if c > &half { c - &self.m } else { c.clone() })
                .collect(),
        )
    }
}

fn deg(a: &Mp) -> usize {
    a.len().saturating_sub(1)
}

// ---- integer gcd and squarefree decomposition ----

fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().unwrap();
    let lb = b.lead();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let t = b.shift(dr - db).scale(&r.lead());
        r = &r.scale(&lb) - &t;
    }
    r
}

/// Primitive gcd with positive lead.
pub fn gcd_z(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (mut a, mut b) = (a.primitive_part(), b.primitive_part());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = r.primitive_part();
    }
    a.primitive_part()
}

/// Yun's algorithm on a primitive polynomial: pairs `(a_i, i)` with `f = prod a_i^i`.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let df = f.derivative();
    let g = gcd_z(f, &df);
    if g.degree() == Some(0) {
        return vec![(f.primitive_part(), 1)];
    }
    let mut c = f.div_exact(&g).expect("gcd divides f");
    let mut d = &df.div_exact(&g).expect("gcd divides f'") - &c.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let a = gcd_z(&c, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        c = c.div_exact(&a).expect("exact");
        d = &d.div_exact(&a).expect("exact") - &c.derivative();
        i += 1;
    }
    out
}

// ---- factorization modulo p ----

fn ddf(zp: &Zm, f: &Mp) -> Vec<(Mp, usize)> {
    let p = zp.m.clone();
    let x = vec![BigInt::zero(), BigInt::one()];
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while deg(&f) >= 2 * d {
        h = zp.powmod(&h, &p, &f);
        let g = zp.gcd(&zp.sub(&h, &x), &f);
        if deg(&g) > 0 {
            f = zp.divrem(&f, &g).0;
            h = zp.rem(&h, &f);
            out.push((g, d));
        }
        d += 1;
    }
    if deg(&f) > 0 {
        let n = deg(&f);
        out.push((zp.monic(&f), n));
    }
    out
}

fn edf(zp: &Zm, g: &Mp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Mp>) {
    let n = deg(g);
    if n == d {
        out.push(g.clone());
        return;
    }
    let e: BigInt = (zp.m.pow(d as u32) - 1u32) >> 1;
    let pu = zp.m.to_u64().unwrap();
    loop {
        let a: Mp = Zm::trim((0..n).map(|_| BigInt::from(rng.gen_range(0..pu))).collect());
        if deg(&a) == 0 {
            continue;
        }
        let b = zp.sub(&zp.powmod(&a, &e, g), &vec![BigInt::one()]);
        let c = zp.gcd(&b, g);
        if deg(&c) > 0 && deg(&c) < n {
            let rest = zp.monic(&zp.divrem(g, &c).0);
            edf(zp, &c, d, rng, out);
            edf(zp, &rest, d, rng, out);
            return;
        }
    }
}

fn factor_mod_p(zp: &Zm, f: &Mp) -> Vec<Mp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ zp.m.to_u64().unwrap());
    let mut out = Vec::new();
    for (g, d) in ddf(zp, f) {
        edf(zp, &g, d, &mut rng, &mut out);
    }
    out.sort();
    out
}

// ---- Hensel lifting ----

/// Lift `f = g h mod p` (all monic) to modulus `p^k`.
fn lift_pair(f: &IntPoly, g: &Mp, h: &Mp, p: &BigInt, k: u32) -> (Mp, Mp) {
    let zp = Zm { m: p.clone() };
    let (_, s, t) = zp.ext_gcd(g, h);
    let (mut big_g, mut big_h) = (g.clone(), h.clone());
    let mut pj = p.clone();
    for _ in 1..k {
        let next = Zm { m: &pj * p };
        let fm = next.from_int(f);
        let e = next.sub(&fm, &next.mul(&big_g, &big_h));
        let e: Mp = e.iter().map(|c| zp.red(&(c / &pj))).collect();
        let e = Zm::trim(e);
        let dg = zp.rem(&zp.mul(&t, &e), g);
        let dh = zp.rem(&zp.mul(&s, &e), h);
        big_g = next.add(&big_g, &next.scale(&dg, &pj));
        big_h = next.add(&big_h, &next.scale(&dh, &pj));
        pj = next.m;
    }
    (big_g, big_h)
}

fn lift_all(f: &IntPoly, fs: &[Mp], p: &BigInt, k: u32) -> Vec<Mp> {
    let zp = Zm { m: p.clone() };
    if fs.len() == 1 {
        let pk = p.pow(k);
        return vec![Zm { m: pk }.from_int(f)];
    }
    let rest = fs[1..].iter().fold(vec![BigInt::one()], |acc, g| zp.mul(&acc, g));
    let (g, h) = lift_pair(f, &fs[0], &rest, p, k);
    let mut out = vec![g];
    out.extend(lift_all(&Zm { m: p.pow(k) }.symmetric(&h), &fs[1..], p, k));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducible factors of a squarefree primitive polynomial with positive lead.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.lead();
    let mut p = 3u64;
    let zp = loop {
        if is_prime(p) {
            let zp = Zm { m: BigInt::from(p) };
            let fb = zp.from_int(f);
            if deg(&fb) == n && deg(&zp.gcd(&fb, &zp.derivative(&fb))) == 0 {
                break zp;
            }
        }
        p += 2;
    };
    let pb = zp.m.clone();
    let fbar = zp.monic(&zp.from_int(f));
    let modular = factor_mod_p(&zp, &fbar);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // factor coefficients are at most 2^n ||f||_2; lift past 2 |lc| times that
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1u32;
    let bound: BigInt = (BigInt::one() << (n + 1)) * norm2 * lc.abs();
    let mut k = 1u32;
    while pb.pow(k) <= bound {
        k += 1;
    }
    let pk = pb.pow(k);
    let zk = Zm { m: pk.clone() };
    let lc_inv = zk.inv(&zk.red(&lc));
    let fmonic = zk.symmetric(&zk.scale(&zk.from_int(f), &lc_inv));
    let mut us = lift_all(&fmonic, &modular, &pb, k);

    let mut found = Vec::new();
    let mut fcur = f.clone();
    let mut s = 1;
    while 2 * s <= us.len() {
        let mut hit = None;
        for subset in combinations(us.len(), s) {
            let lcur = fcur.lead();
            let mut cand = vec![zk.red(&lcur)];
            for &i in &subset {
                cand = zk.mul(&cand, &us[i]);
            }
            let g = zk.symmetric(&cand);
            // constant-term trial before the full division
            let c0 = g.coeff(0);
            let f0 = fcur.coeff(0) * &lcur;
            if !c0.is_zero() && !f0.is_zero() && !f0.is_multiple_of(&c0) {
                continue;
            }
            let g = g.primitive_part();
            if let Some(q) = fcur.div_exact(&g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                fcur = q;
                us = us
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => s += 1,
        }
    }
    if fcur.degree().unwrap_or(0) > 0 {
        found.push(fcur.primitive_part());
    }
    found
}

fn sort_key(f: &IntPoly) -> (usize, Vec<BigInt>) {
    (f.degree().unwrap_or(0), f.coeffs().iter().rev().cloned().collect())
}

/// Complete factorization over the integers.
pub fn factor_over_z(f: &IntPoly) -> FactoredPoly {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut content = f.content();
    if f.lead().is_negative() {
        content = -content;
    }
    let prim = f.primitive_part();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    if prim.degree() == Some(0) {
        return FactoredPoly { content, factors };
    }
    for (part, mult) in squarefree_decomposition(&prim) {
        for g in zassenhaus(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|a, b| sort_key(&a.0).cmp(&sort_key(&b.0)).then(a.1.cmp(&b.1)));
    FactoredPoly { content, factors }
}
