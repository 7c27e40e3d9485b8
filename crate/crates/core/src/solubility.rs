//! Local and global solubility of diagonal quaternary quadrics over Q.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime_u64, is_square, jacobi, SpfSieve};
use crate::error::{Error, Result};

/// a₀x₀² + a₁x₁² + a₂x₂² + a₃x₃² = 0 with nonzero coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagonalQuadric {
    a: [i64; 4],
}

impl DiagonalQuadric {
    pub fn new(a: [i64; 4]) -> Result<Self> {
        if a.contains(&0) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(DiagonalQuadric { a })
    }

    pub fn coeffs(&self) -> [i64; 4] {
        self.a
    }

    /// Q(x) in 128-bit arithmetic.
    pub fn eval(&self, x: [i64; 4]) -> Option<i128> {
        let mut s: i128 = 0;
        for i in 0..4 {
            let t = (self.a[i] as i128).checked_mul(x[i] as i128 * x[i] as i128)?;
            s = s.checked_add(t)?;
        }
        Some(s)
    }
}

impl fmt::Display for DiagonalQuadric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.a;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Squarefree coefficients with trivial common divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalizedQuadric {
    a: [i64; 4],
}

impl NormalizedQuadric {
    /// Checks the invariants; use [`normalize`] to produce one from arbitrary input.
    pub fn new(a: [i64; 4], sieve: &SpfSieve) -> Result<Self> {
        if a.contains(&0) {
            return Err(Error::ZeroCoefficient);
        }
        for &c in &a {
            if sieve.factorize(c.unsigned_abs())?.mu_squared() == 0 {
                return Err(Error::Malformed(format!("{c} is not squarefree")));
            }
        }
        let g = a.iter().fold(0, |g, &c| gcd(g, c.unsigned_abs()));
        if g != 1 {
            return Err(Error::Malformed(format!("common divisor {g}")));
        }
        Ok(NormalizedQuadric { a })
    }

    pub fn coeffs(&self) -> [i64; 4] {
        self.a
    }

    pub fn quadric(&self) -> DiagonalQuadric {
        DiagonalQuadric { a: self.a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    Real,
    Two,
    Odd(u64),
}

impl Place {
    /// `Two` for 2, `Odd(p)` for odd primes.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            Ok(Place::Two)
        } else if p % 2 == 1 && is_prime_u64(p) {
            Ok(Place::Odd(p))
        } else {
            Err(Error::NotOddPrime(p))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Two => write!(f, "2"),
            Place::Odd(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalVerdict {
    Soluble,
    Insoluble,
}

impl LocalVerdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            LocalVerdict::Soluble
        } else {
            LocalVerdict::Insoluble
        }
    }

    pub fn is_soluble(self) -> bool {
        self == LocalVerdict::Soluble
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleVerdict {
    Soluble,
    Insoluble,
    Unknown,
}

/// A vector in ((Z/8Z)*)⁴.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mod8Vector(pub [u8; 4]);

impl Mod8Vector {
    pub fn new(q: [u8; 4]) -> Result<Self> {
        if q.iter().any(|&c| c >= 8 || c % 2 == 0) {
            return Err(Error::InvalidArgument(format!("{q:?} is not in ((Z/8Z)*)^4")));
        }
        Ok(Mod8Vector(q))
    }

    /// Reduces odd integers mod 8 into {1,3,5,7}.
    pub fn from_ints(a: [i64; 4]) -> Result<Self> {
        Self::new(a.map(|c| c.rem_euclid(8) as u8))
    }

    /// Position in 0..256.
    #[inline]
    pub fn index(&self) -> usize {
        let q = self.0;
        ((q[0] >> 1) as usize)
            | ((q[1] >> 1) as usize) << 2
            | ((q[2] >> 1) as usize) << 4
            | ((q[3] >> 1) as usize) << 6
    }

    pub fn from_index(i: usize) -> Self {
        Mod8Vector([0, 2, 4, 6].map(|s| (((i >> s) & 3) as u8) << 1 | 1))
    }

    pub fn product(&self) -> u8 {
        self.0.iter().fold(1u32, |p, &c| p * c as u32 % 8) as u8
    }

    /// All 256 vectors in index order.
    pub fn all() -> impl Iterator<Item = Mod8Vector> {
        (0..256).map(Mod8Vector::from_index)
    }
}

/// A subset of ((Z/8Z)*)⁴ stored as a 256-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mod8Set {
    bits: [u64; 4],
}

impl fmt::Debug for Mod8Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|q| q.0)).finish()
    }
}

impl Mod8Set {
    pub fn from_predicate(mut pred: impl FnMut(Mod8Vector) -> bool) -> Self {
        let mut s = Mod8Set::default();
        for q in Mod8Vector::all() {
            if pred(q) {
                s.insert(q);
            }
        }
        s
    }

    pub fn insert(&mut self, q: Mod8Vector) {
        let i = q.index();
        self.bits[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn contains(&self, q: Mod8Vector) -> bool {
        self.contains_index(q.index())
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Mod8Vector> + '_ {
        (0..256)
            .filter(|&i| self.contains_index(i))
            .map(Mod8Vector::from_index)
    }

    /// Elements with q₀q₁q₂q₃ ≡ 1 (mod 8).
    pub fn restricted_len(&self) -> usize {
        self.iter().filter(|q| q.product() == 1).count()
    }
}

fn a1_member(q: Mod8Vector) -> bool {
    let q = q.0.map(|c| c as u32);
    for i in 0..2 {
        for j in 2..4 {
            let s = (q[i] + q[j]) % 8;
            if s == 0 || s == 4 {
                return true;
            }
        }
    }
    let pair = ((q[0] + q[1]) % 8, (q[2] + q[3]) % 8);
    matches!(
        pair,
        (0, 0) | (2, 0) | (2, 6) | (0, 6) | (6, 0) | (6, 2) | (0, 2)
    )
}

fn a2_member(q: Mod8Vector) -> bool {
    let q = q.0.map(|c| c as u32);
    for ((i, j), (k, l)) in [((0, 1), (2, 3)), ((2, 3), (0, 1))] {
        let s = (q[i] + q[j]) % 8;
        for v in [1u32, 3, 5, 7] {
            if (s == 0 || s == 2 * v % 8) && (q[k] + v) * (q[l] + v) % 8 == 0 {
                return true;
            }
        }
    }
    false
}

/// The set 𝒜₁ (2-adic solubility, all coefficients odd).
pub fn mod8_set_a1() -> &'static Mod8Set {
    static A1: OnceLock<Mod8Set> = OnceLock::new();
    A1.get_or_init(|| Mod8Set::from_predicate(a1_member))
}

/// The set 𝒜₂ (2-adic solubility, first two coefficients halved).
pub fn mod8_set_a2() -> &'static Mod8Set {
    static A2: OnceLock<Mod8Set> = OnceLock::new();
    A2.get_or_init(|| Mod8Set::from_predicate(a2_member))
}

/// 𝒜_{i,j,k,l} = {q : (q_i, q_j, q_k, q_l) ∈ 𝒜₂}.
pub fn mod8_set_a_perm(idx: [usize; 4]) -> Result<Mod8Set> {
    let mut seen = [false; 4];
    for &i in &idx {
        if i > 3 || seen[i] {
            return Err(Error::InvalidArgument(format!("{idx:?} is not a permutation")));
        }
        seen[i] = true;
    }
    let a2 = mod8_set_a2();
    Ok(Mod8Set::from_predicate(|q| {
        a2.contains(Mod8Vector(idx.map(|i| q.0[i])))
    }))
}

/// Squarefree kernels, then division by the common divisor.
pub fn normalize(q: &DiagonalQuadric, sieve: &SpfSieve) -> Result<NormalizedQuadric> {
    let mut a = [0i64; 4];
    for i in 0..4 {
        let c = q.a[i];
        let (k, _) = sieve.factorize(c.unsigned_abs())?.squarefree_split();
        a[i] = c.signum() * k as i64;
    }
    let g = a.iter().fold(0, |g, &c| gcd(g, c.unsigned_abs())) as i64;
    Ok(NormalizedQuadric {
        a: a.map(|c| c / g),
    })
}

pub fn solvable_real(q: &DiagonalQuadric) -> LocalVerdict {
    let pos = q.a.iter().filter(|&&c| c > 0).count();
    LocalVerdict::from_bool(pos != 0 && pos != 4)
}

/// Local solubility at an odd prime from the Legendre-symbol criterion.
pub fn local_indicator_odd(q: &NormalizedQuadric, p: u64) -> Result<LocalVerdict> {
    if p.is_multiple_of(2) || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    let p_i = p as i64;
    let div: Vec<usize> = (0..4).filter(|&i| q.a[i] % p_i == 0).collect();
    if div.len() != 2 {
        return Ok(LocalVerdict::Soluble);
    }
    let (i, j) = (div[0], div[1]);
    let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
    let (k, l) = (rest[0], rest[1]);
    let pm = p as i128;
    let ak = (q.a[k] as i128).rem_euclid(pm);
    let al = (q.a[l] as i128).rem_euclid(pm);
    let ui = (q.a[i] as i128 / pm).rem_euclid(pm);
    let uj = (q.a[j] as i128 / pm).rem_euclid(pm);
    if ui == 0 || uj == 0 {
        return Err(Error::Malformed(format!("{p}^2 divides a coefficient")));
    }
    let sym_a = jacobi(-(ak * al % pm), pm)? as i32;
    let sym_b = jacobi(-(ui * uj % pm), pm)? as i32;
    let val = 3 + sym_a + sym_b - sym_a * sym_b;
    debug_assert!(val == 0 || val == 4);
    Ok(LocalVerdict::from_bool(val == 4))
}

/// Local solubility at 2 via the mod-8 sets.
pub fn local_indicator_2(q: &NormalizedQuadric) -> Result<LocalVerdict> {
    let a = q.a;
    let even: Vec<usize> = (0..4).filter(|&i| a[i] % 2 == 0).collect();
    match even.len() {
        0 => Ok(LocalVerdict::from_bool(
            mod8_set_a1().contains(Mod8Vector::from_ints(a)?),
        )),
        2 => {
            let (i, j) = (even[0], even[1]);
            let odd: Vec<usize> = (0..4).filter(|&k| a[k] % 2 != 0).collect();
            let v = [a[i] / 2, a[j] / 2, a[odd[0]], a[odd[1]]];
            if v.iter().any(|c| c % 2 == 0) {
                return Err(Error::Malformed("4 divides a coefficient".into()));
            }
            Ok(LocalVerdict::from_bool(
                mod8_set_a2().contains(Mod8Vector::from_ints(v)?),
            ))
        }
        // Multiplying by 2 and rescaling the even variables turns three even
        // coefficients into one. With one even coefficient the discriminant
        // has odd valuation, so it is not a square and the form is isotropic.
        1 | 3 => Ok(LocalVerdict::Soluble),
        _ => Err(Error::Malformed("4 divides a coefficient".into())),
    }
}

/// Verdict from the closed-form local criteria.
pub fn local_verdict(q: &NormalizedQuadric, v: Place) -> Result<LocalVerdict> {
    match v {
        Place::Real => Ok(solvable_real(&q.quadric())),
        Place::Two => local_indicator_2(q),
        Place::Odd(p) => local_indicator_odd(q, p),
    }
}

fn split_val(n: i128, p: i128) -> (u32, i128) {
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (e, n)
}

/// Hilbert symbol (a, b)_v.
pub fn hilbert_symbol(a: i64, b: i64, v: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::Zero);
    }
    match v {
        Place::Real => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Odd(p) => {
            let p = p as i128;
            let (al, u) = split_val(a as i128, p);
            let (be, w) = split_val(b as i128, p);
            let eps = ((p - 1) / 2) % 2;
            let mut s: i8 = if (al as i128 * be as i128 * eps) % 2 == 1 { -1 } else { 1 };
            if be % 2 == 1 {
                s *= jacobi(u, p)?;
            }
            if al % 2 == 1 {
                s *= jacobi(w, p)?;
            }
            Ok(s)
        }
        Place::Two => {
            let (al, u) = split_val(a as i128, 2);
            let (be, w) = split_val(b as i128, 2);
            let eps = |x: i128| ((x.rem_euclid(4) - 1) / 2) as u32;
            let omega = |x: i128| {
                let r = x.rem_euclid(8);
                u32::from(r == 3 || r == 5)
            };
            let e = eps(u) * eps(w) + al * omega(w) + be * omega(u);
            Ok(if e % 2 == 1 { -1 } else { 1 })
        }
    }
}

/// Isotropy through the discriminant and Hasse invariant: a quaternary form
/// is anisotropic exactly when d is a square and ε = −(−1,−1).
pub fn local_verdict_hilbert(q: &DiagonalQuadric, v: Place) -> Result<LocalVerdict> {
    let a = q.a;
    let mut eps = 1i8;
    for i in 0..4 {
        for j in i + 1..4 {
            eps *= hilbert_symbol(a[i], a[j], v)?;
        }
    }
    let d_square = match v {
        Place::Real => a.iter().filter(|&&c| c < 0).count() % 2 == 0,
        Place::Two => {
            let mut val = 0;
            let mut unit = 1i128;
            for &c in &a {
                let (e, u) = split_val(c as i128, 2);
                val += e;
                unit = unit * u.rem_euclid(8) % 8;
            }
            val % 2 == 0 && unit == 1
        }
        Place::Odd(p) => {
            let pm = p as i128;
            let mut val = 0;
            let mut unit = 1i128;
            for &c in &a {
                let (e, u) = split_val(c as i128, pm);
                val += e;
                unit = unit * u.rem_euclid(pm) % pm;
            }
            val % 2 == 0 && jacobi(unit, pm)? == 1
        }
    };
    let minus_one = hilbert_symbol(-1, -1, v)?;
    Ok(LocalVerdict::from_bool(!(d_square && eps == -minus_one)))
}

/// Depth ceiling for the oracle at `p`.
pub const ORACLE_MAX_DEPTH: u32 = 24;

fn oracle_depth_limit(p: u64) -> u32 {
    let mut k = 0u32;
    let mut pk: u128 = 1;
    // p^(depth + 2) must stay below 2^62 for the residue arithmetic.
    while pk * (p as u128) < (1u128 << 62) {
        pk *= p as u128;
        k += 1;
    }
    k.saturating_sub(2).min(ORACLE_MAX_DEPTH)
}

pub fn default_oracle_depth(v: Place) -> u32 {
    match v {
        Place::Two => 6,
        _ => 4,
    }
}

struct Hensel {
    a: [i64; 4],
    p: u64,
    depth: u32,
    // v_p(2 a_i)
    va: [u32; 4],
}

impl Hensel {
    fn pow(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    fn vp(&self, mut x: u64) -> u32 {
        let mut e = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            e += 1;
        }
        e
    }

    // min v_p(2 a_i x_i) over coordinates not ≡ 0 mod p^k
    fn grad_val(&self, x: &[u64; 4]) -> u32 {
        (0..4)
            .filter(|&i| x[i] != 0)
            .map(|i| self.va[i] + self.vp(x[i]))
            .min()
            .unwrap_or(u32::MAX)
    }

    fn term(&self, i: usize, xi: u64, m: u64) -> u64 {
        let m128 = m as u128;
        let c = (self.a[i] as i128).rem_euclid(m as i128) as u128;
        let x = xi as u128 % m128;
        (c * (x * x % m128) % m128) as u64
    }

    // Lifts x + p^k y, y ∈ [0,p)^4, with Q ≡ 0 mod p^m.
    fn lifts(&self, x: &[u64; 4], k: u32, m: u32, root: bool) -> Vec<[u64; 4]> {
        let p = self.p;
        let pk = self.pow(k);
        let modulus = self.pow(m);
        let f: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..p).map(|y| self.term(i, x[i] + pk * y, modulus)).collect())
            .collect();
        let mut left: HashMap<u64, Vec<(u64, u64)>> = HashMap::new();
        for y0 in 0..p {
            for y1 in 0..p {
                let s = (f[0][y0 as usize] + f[1][y1 as usize]) % modulus;
                left.entry(s).or_default().push((y0, y1));
            }
        }
        let mut out = Vec::new();
        for y2 in 0..p {
            for y3 in 0..p {
                let s = (f[2][y2 as usize] + f[3][y3 as usize]) % modulus;
                let need = (modulus - s) % modulus;
                if let Some(v) = left.get(&need) {
                    for &(y0, y1) in v {
                        let y = [y0, y1, y2, y3];
                        if root {
                            // projective representatives: first nonzero digit is 1
                            match y.iter().find(|&&c| c != 0) {
                                Some(&1) => {}
                                _ => continue,
                            }
                        }
                        out.push([0, 1, 2, 3].map(|i| x[i] + pk * y[i]));
                    }
                }
            }
        }
        out
    }

    fn expand(&self, x: [u64; 4], k: u32) -> OracleVerdict {
        let e = self.grad_val(&x);
        if 2 * e < k {
            return OracleVerdict::Soluble;
        }
        if k == self.depth {
            return OracleVerdict::Unknown;
        }
        // Here e ≥ 1, so Q(x + p^k y) ≡ Q(x) mod p^(k+1): every lift is a
        // solution one level up and keeps the same e.
        if 2 * e < k + 1 {
            return OracleVerdict::Soluble;
        }
        if k + 1 == self.depth {
            return OracleVerdict::Unknown;
        }
        let mut unknown = false;
        for child in self.lifts(&x, k, k + 2, false) {
            match self.expand(child, k + 1) {
                OracleVerdict::Soluble => return OracleVerdict::Soluble,
                OracleVerdict::Unknown => unknown = true,
                OracleVerdict::Insoluble => {}
            }
        }
        if unknown {
            OracleVerdict::Unknown
        } else {
            OracleVerdict::Insoluble
        }
    }

    fn run(&self) -> OracleVerdict {
        let mut unknown = false;
        for x in self.lifts(&[0; 4], 0, 1, true) {
            match self.expand(x, 1) {
                OracleVerdict::Soluble => return OracleVerdict::Soluble,
                OracleVerdict::Unknown => unknown = true,
                OracleVerdict::Insoluble => {}
            }
        }
        if unknown {
            OracleVerdict::Unknown
        } else {
            OracleVerdict::Insoluble
        }
    }
}

/// Exhaustive search for primitive solutions modulo p^depth with a Hensel
/// certificate. Independent of the closed-form criteria.
pub fn padic_oracle(q: &DiagonalQuadric, v: Place, depth: u32) -> Result<OracleVerdict> {
    let p = match v {
        Place::Real => {
            return Ok(match solvable_real(q) {
                LocalVerdict::Soluble => OracleVerdict::Soluble,
                LocalVerdict::Insoluble => OracleVerdict::Insoluble,
            })
        }
        Place::Two => 2,
        Place::Odd(p) => {
            if p % 2 == 0 || !is_prime_u64(p) {
                return Err(Error::NotOddPrime(p));
            }
            p
        }
    };
    let max = oracle_depth_limit(p);
    if depth == 0 || depth > max {
        return Err(Error::DepthTooLarge { depth, max });
    }
    let mut va = [0u32; 4];
    for i in 0..4 {
        let mut c = 2 * q.a[i] as i128;
        while c % p as i128 == 0 {
            c /= p as i128;
            va[i] += 1;
        }
    }
    Ok(Hensel {
        a: q.a,
        p,
        depth,
        va,
    }
    .run())
}

/// Odd primes dividing some normalized coefficient.
pub fn bad_odd_primes(q: &NormalizedQuadric, sieve: &SpfSieve) -> Result<Vec<u64>> {
    let mut ps = Vec::new();
    for &c in &q.a {
        ps.extend(sieve.prime_divisors(c.unsigned_abs())?);
    }
    ps.retain(|&p| p != 2);
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

/// Places whose verdict can be Insoluble: ∞, 2 and the odd primes of the coefficients.
pub fn relevant_places(q: &NormalizedQuadric, sieve: &SpfSieve) -> Result<Vec<Place>> {
    let mut v = vec![Place::Real, Place::Two];
    v.extend(bad_odd_primes(q, sieve)?.into_iter().map(Place::Odd));
    Ok(v)
}

pub fn is_everywhere_locally_soluble(q: &DiagonalQuadric, sieve: &SpfSieve) -> Result<bool> {
    let n = normalize(q, sieve)?;
    for v in relevant_places(&n, sieve)? {
        if !local_verdict(&n, v)?.is_soluble() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hasse-Minkowski: same as [`is_everywhere_locally_soluble`].
pub fn has_rational_point(q: &DiagonalQuadric, sieve: &SpfSieve) -> Result<bool> {
    is_everywhere_locally_soluble(q, sieve)
}

// Coordinate order used to break ties: 0, 1, -1, 2, -2, ...
fn coord_key(x: &[i64; 4]) -> [(u64, bool); 4] {
    x.map(|c| (c.unsigned_abs(), c < 0))
}

/// Smallest sup-norm primitive zero with |x_i| ≤ height_bound.
///
/// Zeros are taken up to sign (first nonzero coordinate positive); among
/// those of minimal sup-norm the least under the coordinate order
/// 0 < 1 < −1 < 2 < −2 < … (compared left to right) is returned.
pub fn find_rational_point(q: &DiagonalQuadric, height_bound: u64) -> Option<[i64; 4]> {
    let a = q.a.map(|c| c as i128);
    let bound = height_bound.min(i32::MAX as u64) as i64;
    for h in 1..=bound {
        let mut best: Option<[i64; 4]> = None;
        for x0 in -h..=h {
            for x1 in -h..=h {
                for x2 in -h..=h {
                    let s = a[0] * (x0 * x0) as i128
                        + a[1] * (x1 * x1) as i128
                        + a[2] * (x2 * x2) as i128;
                    if s % a[3] != 0 {
                        continue;
                    }
                    let t = -s / a[3];
                    if !is_square(t) {
                        continue;
                    }
                    let r = (t as u128).isqrt() as i64;
                    if r > h {
                        continue;
                    }
                    for x3 in [r, -r] {
                        let x = [x0, x1, x2, x3];
                        if x.iter().map(|c| c.abs()).max() != Some(h) {
                            continue;
                        }
                        if x.iter().find(|&&c| c != 0).is_none_or(|&c| c < 0) {
                            continue;
                        }
                        if x.iter().fold(0, |g, &c| gcd(g, c.unsigned_abs())) != 1 {
                            continue;
                        }
                        if best.is_none_or(|b| coord_key(&x) < coord_key(&b)) {
                            best = Some(x);
                        }
                        if r == 0 {
                            break;
                        }
                    }
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Per-place verdicts for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaceReport {
    pub place: Place,
    pub formula: LocalVerdict,
    pub hilbert: LocalVerdict,
}

pub fn place_table(q: &DiagonalQuadric, sieve: &SpfSieve) -> Result<(NormalizedQuadric, Vec<PlaceReport>)> {
    let n = normalize(q, sieve)?;
    let mut out = Vec::new();
    for v in relevant_places(&n, sieve)? {
        out.push(PlaceReport {
            place: v,
            formula: local_verdict(&n, v)?,
            hilbert: local_verdict_hilbert(&n.quadric(), v)?,
        });
    }
    Ok((n, out))
}
