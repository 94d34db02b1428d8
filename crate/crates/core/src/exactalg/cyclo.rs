//! Cyclotomic integers `Z[t]/(Phi_d(t))`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// The d-th cyclotomic polynomial, by exact division of `t^d - 1` by `Phi_e` for proper divisors e.
pub fn cyclotomic_poly(d: u32) -> IntPoly {
    assert!(d >= 1);
    let mut num = IntPoly::monomial(BigInt::one(), d as usize);
    num = &num - &IntPoly::one();
    for e in 1..d {
        if d % e == 0 {
            num = num
                .div_exact(&cyclotomic_poly(e))
                .expect("cyclotomic division is exact");
        }
    }
    num
}

fn phi_table(d: u32) -> Arc<[i64]> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(d)
        .or_insert_with(|| {
            use num_traits::ToPrimitive;
            cyclotomic_poly(d)
                .coeffs()
                .iter()
                .map(|c| c.to_i64().expect("small cyclotomic coefficient"))
                .collect()
        })
        .clone()
}

/// Euler's totient.
pub fn totient(d: u32) -> usize {
    (1..=d).filter(|k| k.gcd(&d) == 1).count()
}

/// Element `sum comps[i] * zeta_d^i`, reduced modulo the d-th cyclotomic polynomial.
#[derive(Clone)]
pub struct CycInt {
    d: u32,
    comps: Vec<BigInt>,
    phi: Arc<[i64]>,
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.comps == other.comps
    }
}
impl Eq for CycInt {}

impl CycInt {
    pub fn zero(d: u32) -> Self {
        let phi = phi_table(d);
        CycInt {
            d,
            comps: vec![BigInt::zero(); phi.len() - 1],
            phi,
        }
    }

    pub fn from_int(d: u32, c: BigInt) -> Self {
        let mut z = Self::zero(d);
        z.comps[0] = c;
        z
    }

    /// `zeta_d^k` for any integer k.
    pub fn zeta_pow(d: u32, k: i64) -> Self {
        let e = k.rem_euclid(d as i64) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        Self::from_raw(d, raw)
    }

    /// Reduce an arbitrary-length coefficient vector in `zeta_d`.
    pub fn from_raw(d: u32, raw: Vec<BigInt>) -> Self {
        let phi = phi_table(d);
        let comps = reduce_mod_phi(raw, &phi);
        CycInt { d, comps, phi }
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn comps(&self) -> &[BigInt] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.comps.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect();
        CycInt { comps, ..self.clone_shell() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect();
        CycInt { comps, ..self.clone_shell() }
    }

    pub fn neg(&self) -> Self {
        CycInt {
            comps: self.comps.iter().map(|a| -a).collect(),
            ..self.clone_shell()
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = self.raw_zero();
        self.mul_into(o, &mut acc);
        Self::from_raw(self.d, acc)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycInt {
            comps: self.comps.iter().map(|a| a * c).collect(),
            ..self.clone_shell()
        }
    }

    /// Unreduced accumulator sized for one product.
    pub(crate) fn raw_zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); (2 * self.comps.len()).saturating_sub(1).max(1)]
    }

    /// `acc += self * o` without reduction.
    pub(crate) fn mul_into(&self, o: &Self, acc: &mut [BigInt]) {
        self.check(o);
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.comps.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
    }

    /// Image under the embedding of the d-th into the `d_new`-th cyclotomic ring.
    pub fn lift(&self, d_new: u32) -> Result<Self> {
        if d_new % self.d != 0 {
            return Err(Error::IncompatibleRings(self.d, d_new));
        }
        let step = (d_new / self.d) as usize;
        let mut raw = vec![BigInt::zero(); (self.comps.len().max(1) - 1) * step + 1];
        for (i, c) in self.comps.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Ok(Self::from_raw(d_new, raw))
    }

    /// The rational value, or the index of the first offending component.
    pub fn to_int(&self) -> Result<BigInt> {
        if let Some(index) = self.comps.iter().skip(1).position(|c| !c.is_zero()) {
            return Err(Error::NotRational { index: index + 1 });
        }
        Ok(self.comps[0].clone())
    }

    /// Sum over all Galois conjugates `zeta -> zeta^u`, `gcd(u, d) = 1`.
    pub fn trace(&self) -> BigInt {
        let mut acc = Self::zero(self.d);
        for u in 1..=self.d {
            if u.gcd(&self.d) != 1 {
                continue;
            }
            let mut raw = vec![BigInt::zero(); (self.comps.len().max(1) - 1) * u as usize + 1];
            for (i, c) in self.comps.iter().enumerate() {
                raw[i * u as usize] += c;
            }
            acc = acc.add(&Self::from_raw(self.d, raw));
        }
        acc.to_int().expect("trace is rational")
    }

    fn clone_shell(&self) -> Self {
        CycInt {
            d: self.d,
            comps: Vec::new(),
            phi: self.phi.clone(),
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.d, o.d, "cyclotomic order mismatch");
    }
}

pub(crate) fn reduce_mod_phi(mut raw: Vec<BigInt>, phi: &[i64]) -> Vec<BigInt> {
    let deg = phi.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    for k in (deg..raw.len()).rev() {
        if raw[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut raw[k]);
        for (j, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                raw[k - deg + j] -= &c * p;
            }
        }
    }
    raw.resize(deg, BigInt::zero());
    raw
}

/// `cyc_to_int`: the constant component of a rational cyclotomic integer.
pub fn cyc_to_int(c: &CycInt) -> Result<BigInt> {
    c.to_int()
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(d={}, {:?})", self.d, self.comps.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}
