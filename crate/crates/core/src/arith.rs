//! Integer primitives: Jacobi symbols, valuations, sieving and factorization.

use crate::error::{Error, Result};

/// Jacobi symbol (a/n) for odd positive n.
///
/// `jacobi(a, 1) == 1` for every `a`.
pub fn jacobi(a: i128, n: i128) -> Result<i8> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::BadModulus(n));
    }
    Ok(jacobi_u128(a.rem_euclid(n) as u128, n as u128))
}

/// Unchecked Jacobi symbol on machine words; `n` must be odd.
#[inline]
pub fn jacobi_u64(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z & 1 == 1 && (n & 7 == 3 || n & 7 == 5) {
            t = -t;
        }
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn jacobi_u128(a: u128, n: u128) -> i8 {
    if n <= u64::MAX as u128 {
        return jacobi_u64((a % n) as u64, n as u64);
    }
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z & 1 == 1 && (n & 7 == 3 || n & 7 == 5) {
            t = -t;
        }
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
        if n <= u64::MAX as u128 {
            let r = jacobi_u64(a as u64, n as u64);
            return t * r;
        }
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Splits `n = 2^e * m` with `m` odd; the sign stays on `m`.
pub fn odd_part(n: i128) -> Result<(u32, i128)> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let e = n.trailing_zeros();
    Ok((e, n >> e))
}

/// 2-adic valuation of a nonzero word.
#[inline]
pub fn v2(n: u64) -> u32 {
    n.trailing_zeros()
}

/// Odd part of a nonzero word.
#[inline]
pub fn odd(n: u64) -> u64 {
    n >> n.trailing_zeros()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Perfect-square test. Negative numbers are never squares, 0 is.
pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as u128).isqrt();
    r * r == n as u128
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent), primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn mu_squared(&self) -> u8 {
        u8::from(self.factors.iter().all(|&(_, e)| e == 1))
    }

    /// Möbius function.
    pub fn mu(&self) -> i8 {
        if self.mu_squared() == 0 {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn odd_part(&self) -> u64 {
        odd(self.n)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `(a, b)` with `n = a * b^2`, `a` squarefree.
    pub fn squarefree_split(&self) -> (u64, u64) {
        let mut a = 1u64;
        let mut b = 1u64;
        for &(p, e) in &self.factors {
            if e % 2 == 1 {
                a *= p;
            }
            b *= p.pow(e / 2);
        }
        (a, b)
    }
}

/// Smallest-prime-factor table.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    /// Linear sieve up to `limit` (at least 2).
    pub fn new(limit: u64) -> Self {
        let limit = limit.clamp(2, u32::MAX as u64 - 1);
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || i * p as usize > n {
                    break;
                }
                spf[i * p as usize] = p;
            }
        }
        SpfSieve { limit, spf, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `2 <= k <= limit`.
    pub fn spf(&self, k: u64) -> u64 {
        self.spf[k as usize] as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            n >= 2 && self.spf[n as usize] as u64 == n
        } else {
            is_prime_u64(n)
        }
    }

    /// Factorizes any positive word; beyond the table, trial division by the
    /// sieved primes and then Pollard rho.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let mut ps: Vec<u64> = Vec::new();
        let mut m = n;
        if m > self.limit {
            for &p in &self.primes {
                let p = p as u64;
                if p * p > m {
                    break;
                }
                while m.is_multiple_of(p) {
                    ps.push(p);
                    m /= p;
                }
                if m <= self.limit {
                    break;
                }
            }
        }
        if m <= self.limit {
            while m > 1 {
                let p = self.spf[m as usize] as u64;
                ps.push(p);
                m /= p;
            }
        } else {
            rho_split(m, &mut ps);
        }
        ps.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in ps {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Ok(Factorization { n, factors })
    }

    /// Sorted distinct primes of `n`.
    pub fn prime_divisors(&self, n: u64) -> Result<Vec<u64>> {
        Ok(self.factorize(n)?.primes().collect())
    }
}

/// `n = a * b^2` with `a` squarefree carrying the sign of `n`.
pub fn squarefree_split(n: i64, sieve: &SpfSieve) -> Result<(i64, u64)> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let abs = n.unsigned_abs();
    if abs > sieve.limit() {
        return Err(Error::OutOfRange {
            value: abs as u128,
            limit: sieve.limit(),
        });
    }
    let (a, b) = sieve.factorize(abs)?.squarefree_split();
    Ok((n.signum() * a as i64, b))
}

pub fn tau(f: &Factorization) -> u64 {
    f.tau()
}

pub fn mu_squared(f: &Factorization) -> u8 {
    f.mu_squared()
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(p) {
            out.push(p);
            rho_split(n / p, out);
            return;
        }
    }
    let d = pollard_brent(n);
    rho_split(d, out);
    rho_split(n / d, out);
}

// Brent's variant with the fixed increment schedule c = 1, 2, 3, ...
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut g, mut x, mut ys) = (1u64, 0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128).min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 45).unwrap(), 1);
        assert_eq!(jacobi(3, 5).unwrap(), -1);
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(7, 1).unwrap(), 1);
        assert_eq!(jacobi(0, 1).unwrap(), 1);
        assert_eq!(jacobi(6, 9).unwrap(), 0);
        assert!(jacobi(3, 4).is_err());
        assert!(jacobi(3, -5).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn jacobi_matches_euler_criterion_for_primes() {
        let sieve = SpfSieve::new(500);
        for &p in sieve.primes().iter().skip(1) {
            let p = p as u64;
            for a in 0..p {
                let e = powmod(a, (p - 1) / 2, p);
                let want = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
                assert_eq!(jacobi_u64(a, p), want, "({a}/{p})");
            }
        }
    }

    #[test]
    fn jacobi_reciprocity_exhaustive() {
        for m in (1..=99i128).step_by(2) {
            for n in (1..=99i128).step_by(2) {
                if gcd(m as u64, n as u64) != 1 {
                    continue;
                }
                let lhs = jacobi(m, n).unwrap() * jacobi(n, m).unwrap();
                let sign = if ((m - 1) / 2 * ((n - 1) / 2)) % 2 == 0 { 1 } else { -1 };
                assert_eq!(lhs, sign, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn supplementary_laws() {
        for n in (1..=999i128).step_by(2) {
            let m1 = if ((n - 1) / 2) % 2 == 0 { 1 } else { -1 };
            let m2 = if ((n * n - 1) / 8) % 2 == 0 { 1 } else { -1 };
            assert_eq!(jacobi(-1, n).unwrap(), m1);
            assert_eq!(jacobi(2, n).unwrap(), m2);
        }
    }

    #[test]
    fn large_moduli() {
        let p: i128 = 1_000_000_000_000_000_003; // prime
        assert_eq!(jacobi(-1, p).unwrap(), -1);
        let big: i128 = (1i128 << 100) + 277;
        assert_eq!(jacobi(1, big).unwrap(), 1);
        assert_eq!(jacobi(4, big).unwrap(), 1);
    }

    #[test]
    fn odd_part_examples() {
        assert_eq!(odd_part(40).unwrap(), (3, 5));
        assert_eq!(odd_part(-6).unwrap(), (1, -3));
        assert_eq!(odd_part(7).unwrap(), (0, 7));
        assert!(odd_part(0).is_err());
    }

    #[test]
    fn sieve_and_split() {
        let s = SpfSieve::new(10_000);
        assert_eq!(squarefree_split(12, &s).unwrap(), (3, 2));
        assert_eq!(squarefree_split(-50, &s).unwrap(), (-2, 5));
        assert_eq!(squarefree_split(7, &s).unwrap(), (7, 1));
        assert!(squarefree_split(10_001, &s).is_err());
        assert!(squarefree_split(0, &s).is_err());
        for n in -10_000i64..=10_000 {
            if n == 0 {
                continue;
            }
            let (a, b) = squarefree_split(n, &s).unwrap();
            assert_eq!(a * (b * b) as i64, n);
            assert_eq!(s.factorize(a.unsigned_abs()).unwrap().mu_squared(), 1);
        }
        for k in 2..=10_000u64 {
            let p = s.spf(k);
            assert_eq!(k % p, 0);
            assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn divisor_functions() {
        let s = SpfSieve::new(100);
        let f = s.factorize(12).unwrap();
        assert_eq!(tau(&f), 6);
        assert_eq!(mu_squared(&f), 0);
        assert_eq!(f.divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(s.factorize(30).unwrap().mu(), -1);
        assert!(!is_square(-4));
        assert!(is_square(0));
        assert!(is_square(49));
        assert!(!is_square(50));
    }

    #[test]
    fn factorize_beyond_sieve() {
        let s = SpfSieve::new(1000);
        let n = 1_000_003u64 * 999_983 * 4;
        let f = s.factorize(n).unwrap();
        assert_eq!(f.factors, vec![(2, 2), (999_983, 1), (1_000_003, 1)]);
        let n = 4_294_967_291u64 * 4_294_967_279;
        let f = s.factorize(n).unwrap();
        assert_eq!(f.factors, vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
        let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(prod, n);
    }
}
