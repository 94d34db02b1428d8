//! Small-integer number theory helpers.

use num_integer::Integer;

pub fn primes_upto(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, e)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    v.sort_unstable();
    v
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(a / p)` for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Inverse of `a` modulo `m` when it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Solve `x = r_i mod m_i` for pairwise coprime moduli; returns `(x, M)` with `0 <= x < M`.
pub fn crt(residues: &[(i64, i64)]) -> Option<(i64, i64)> {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, mi) in residues {
        let mi = mi as i128;
        if m.gcd(&mi) != 1 {
            return None;
        }
        let inv = inv_mod((m % mi) as i64, mi as i64)? as i128;
        let t = ((r as i128 - x).rem_euclid(mi) * inv).rem_euclid(mi);
        x += m * t;
        m *= mi;
        x = x.rem_euclid(m);
    }
    Some((x as i64, m as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(primes_upto(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_squarefree(210) && !is_squarefree(12));
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(crt(&[(2, 3), (3, 5), (2, 7)]), Some((23, 105)));
        assert_eq!(crt(&[(1, 4), (1, 6)]), None);
    }
}
