//! Exact enumeration of N(B), N₁(B), N₂(B) over the parameterised base.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, jacobi_u64, SpfSieve};
use crate::error::{Error, Result};
use crate::solubility::{
    is_everywhere_locally_soluble, mod8_set_a1, mod8_set_a2, DiagonalQuadric, Mod8Set,
};

pub const DEFAULT_CEILING: u64 = 100_000;

/// t ∈ (Z∖{0})⁴ with gcd(t₀,t₁) = gcd(t₂,t₃) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasePoint {
    t: [i64; 4],
}

impl BasePoint {
    pub fn new(t: [i64; 4]) -> Result<Self> {
        if t.contains(&0) {
            return Err(Error::InvalidBasePoint(format!("{t:?} has a zero entry")));
        }
        if gcd(t[0].unsigned_abs(), t[1].unsigned_abs()) != 1
            || gcd(t[2].unsigned_abs(), t[3].unsigned_abs()) != 1
        {
            return Err(Error::InvalidBasePoint(format!("{t:?} is not primitive in each pair")));
        }
        Ok(BasePoint { t })
    }

    pub fn coords(&self) -> [i64; 4] {
        self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountVariant {
    R1,
    R2,
}

impl CountVariant {
    pub fn r(self) -> u8 {
        match self {
            CountVariant::R1 => 1,
            CountVariant::R2 => 2,
        }
    }

    /// δ_r = 3 − 2r.
    pub fn delta(self) -> i64 {
        3 - 2 * self.r() as i64
    }

    pub fn from_r(r: u8) -> Result<Self> {
        match r {
            1 => Ok(CountVariant::R1),
            2 => Ok(CountVariant::R2),
            _ => Err(Error::InvalidArgument(format!("r must be 1 or 2, got {r}"))),
        }
    }
}

/// max(|t₀|,|t₁|) · max(|t₂|,|t₃|)
pub fn height(t: &BasePoint) -> u64 {
    let [a, b, c, d] = t.t.map(|x| x.unsigned_abs());
    a.max(b) * c.max(d)
}

fn sign_mult(v: Option<CountVariant>) -> [i64; 4] {
    match v {
        None => [1, 1, 1, 1],
        Some(v) => {
            let d = v.delta();
            [-d, 1, d, -1]
        }
    }
}

/// (t₀t₂, t₁t₃, t₁t₂, t₀t₃), or (−δt₀t₂, t₁t₃, δt₁t₂, −t₀t₃) when signed.
pub fn fibre_quadric(t: &BasePoint, v: CountVariant, signed: bool) -> Result<DiagonalQuadric> {
    let m = sign_mult(signed.then_some(v));
    let t = t.t;
    let prods = [(0, 2), (1, 3), (1, 2), (0, 3)];
    let mut a = [0i64; 4];
    for (k, &(i, j)) in prods.iter().enumerate() {
        a[k] = t[i]
            .checked_mul(t[j])
            .and_then(|x| x.checked_mul(m[k]))
            .ok_or(Error::Overflow("fibre_quadric"))?;
    }
    DiagonalQuadric::new(a)
}

/// Squarefree kernels and their odd primes for 1..=limit.
struct IntTable {
    kernel: Vec<u32>,
    pstart: Vec<u32>,
    primes: Vec<u32>,
}

impl IntTable {
    fn new(limit: u64, sieve: &SpfSieve) -> Self {
        let n = limit as usize;
        let mut kernel = vec![1u32; n + 1];
        let mut pstart = Vec::with_capacity(n + 2);
        let mut primes = Vec::new();
        pstart.push(0);
        pstart.push(0);
        for k in 1..=n {
            let mut m = k as u64;
            let mut ker = 1u64;
            while m > 1 {
                let p = sieve.spf(m);
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                if e % 2 == 1 {
                    ker *= p;
                    if p != 2 {
                        primes.push(p as u32);
                    }
                }
            }
            kernel[k] = ker as u32;
            pstart.push(primes.len() as u32);
        }
        IntTable {
            kernel,
            pstart,
            primes,
        }
    }

    #[inline]
    fn kernel(&self, n: u64) -> u64 {
        self.kernel[n as usize] as u64
    }

    #[inline]
    fn odd_primes(&self, n: u64) -> &[u32] {
        let n = n as usize;
        &self.primes[self.pstart[n] as usize..self.pstart[n + 1] as usize]
    }
}

/// Quadratic residues modulo each odd prime up to a limit, as bitsets.
struct QrTable {
    limit: u32,
    offset: Vec<u32>,
    bits: Vec<u64>,
}

impl QrTable {
    const MAX: u64 = 1 << 15;

    fn new(limit: u64, sieve: &SpfSieve) -> Self {
        let limit = limit.min(Self::MAX) as u32;
        let mut offset = vec![0u32; limit as usize + 1];
        let mut bits = Vec::new();
        for &p in sieve.primes() {
            if p == 2 || p > limit {
                continue;
            }
            let base = bits.len();
            offset[p as usize] = base as u32;
            bits.resize(base + (p as usize).div_ceil(64), 0);
            for x in 1..=(p as u64 - 1) / 2 {
                let r = (x * x % p as u64) as usize;
                bits[base + r / 64] |= 1 << (r % 64);
            }
        }
        QrTable { limit, offset, bits }
    }

    /// (r/p) for 0 < r < p.
    #[inline]
    fn legendre(&self, r: u32, p: u32) -> i8 {
        if p <= self.limit {
            let base = self.offset[p as usize] as usize;
            if self.bits[base + r as usize / 64] >> (r % 64) & 1 == 1 {
                1
            } else {
                -1
            }
        } else {
            jacobi_u64(r as u64, p as u64)
        }
    }
}

/// Positive primitive pairs grouped by sup-norm, flattened.
struct PairTable {
    // pairs with sup-norm ≤ h occupy pairs[..end[h]]
    end: Vec<usize>,
    pairs: Vec<(u32, u32)>,
}

impl PairTable {
    fn new(limit: u64) -> Self {
        let mut end = vec![0usize; limit as usize + 1];
        let mut pairs = Vec::new();
        for h in 1..=limit {
            if h == 1 {
                pairs.push((1, 1));
            } else {
                for v in 1..h {
                    if gcd(v, h) == 1 {
                        pairs.push((h as u32, v as u32));
                        pairs.push((v as u32, h as u32));
                    }
                }
            }
            end[h as usize] = pairs.len();
        }
        PairTable { end, pairs }
    }

    fn upto(&self, h: u64) -> &[(u32, u32)] {
        &self.pairs[..self.end[h as usize]]
    }
}

/// Signs allowed for a coordinate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairSigns {
    Positive,
    FirstPositive,
    All,
    Fixed(i64, i64),
}

impl PairSigns {
    fn list(self) -> Vec<[i64; 2]> {
        match self {
            PairSigns::Positive => vec![[1, 1]],
            PairSigns::FirstPositive => vec![[1, 1], [1, -1]],
            PairSigns::All => vec![[1, 1], [1, -1], [-1, 1], [-1, -1]],
            PairSigns::Fixed(a, b) => vec![[a, b]],
        }
    }
}

/// Which non-square conditions apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NonSquare {
    /// −t₀t₁ ≠ □ and −t₂t₃ ≠ □
    NegBoth,
    /// t₀t₁ ≠ □
    PosFirst,
    /// t₀t₁ ≠ □ and t₂t₃ ≠ □
    PosBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountConfig {
    pub ceiling: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            ceiling: DEFAULT_CEILING,
            workers: None,
        }
    }
}

/// Precomputed tables for all counts up to a fixed bound.
pub struct Counter {
    bound: u64,
    ints: IntTable,
    qr: QrTable,
    pairs: PairTable,
    a1: Mod8Set,
    a2: Mod8Set,
    config: CountConfig,
}

#[inline]
fn idx8(x: i64) -> usize {
    (x.rem_euclid(8) >> 1) as usize
}

impl Counter {
    pub fn new(bound: u64, config: CountConfig) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidArgument("B must be at least 1".into()));
        }
        if bound > config.ceiling {
            return Err(Error::CeilingExceeded {
                bound,
                ceiling: config.ceiling,
            });
        }
        if config.workers == Some(0) {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        let sieve = SpfSieve::new(bound.max(2));
        Ok(Counter {
            bound,
            ints: IntTable::new(bound, &sieve),
            qr: QrTable::new(bound, &sieve),
            pairs: PairTable::new(bound),
            a1: *mod8_set_a1(),
            a2: *mod8_set_a2(),
            config,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    fn check(&self, b: u64) -> Result<()> {
        if b == 0 {
            return Err(Error::InvalidArgument("B must be at least 1".into()));
        }
        if b > self.bound {
            return Err(Error::InvalidArgument(format!(
                "B = {b} exceeds the precomputed bound {}",
                self.bound
            )));
        }
        Ok(())
    }

    /// Number of sign patterns (each given as coefficient signs) for which
    /// the fibre over |t| = `a` is everywhere locally soluble. Bit j of `mask`
    /// enables pattern j.
    #[inline]
    fn soluble_patterns(&self, a: [u64; 4], sgs: &[[i64; 4]], mut mask: u32) -> u32 {
        let k = a.map(|x| self.ints.kernel(x));
        let m02 = gcd(k[0], k[2]);
        let m03 = gcd(k[0], k[3]);
        let m12 = gcd(k[1], k[2]);
        let m13 = gcd(k[1], k[3]);
        let c = [
            (k[0] / m02) * (k[2] / m02),
            (k[1] / m13) * (k[3] / m13),
            (k[1] / m12) * (k[2] / m12),
            (k[0] / m03) * (k[3] / m03),
        ];

        // real place and p = 2
        for (j, sg) in sgs.iter().enumerate() {
            if mask >> j & 1 == 1 && !self.real_and_two(c, *sg) {
                mask &= !(1 << j);
            }
        }
        if mask == 0 {
            return 0;
        }

        // odd p: each divides exactly two coefficients
        let cu = c.map(|x| x as u32);
        let odd_place = |p: u32, mask: &mut u32| {
            let r = cu.map(|x| x % p);
            let mut div = [0usize; 2];
            let mut nd = [0usize; 2];
            let (mut na, mut nb) = (0, 0);
            for i in 0..4 {
                if r[i] == 0 {
                    if na < 2 {
                        div[na] = i;
                    }
                    na += 1;
                } else {
                    if nb < 2 {
                        nd[nb] = i;
                    }
                    nb += 1;
                }
            }
            if na != 2 {
                return;
            }
            // Legendre symbols with all coefficient signs positive
            let minus_one: i8 = if p % 4 == 1 { 1 } else { -1 };
            let cross = minus_one * self.qr.legendre(r[nd[0]], p) * self.qr.legendre(r[nd[1]], p);
            let inner = minus_one
                * self.qr.legendre(cu[div[0]] / p % p, p)
                * self.qr.legendre(cu[div[1]] / p % p, p);
            for (j, sg) in sgs.iter().enumerate() {
                if *mask >> j & 1 == 0 {
                    continue;
                }
                let twist = |i: usize, l: usize| if sg[i] == sg[l] { 1 } else { minus_one };
                if cross * twist(nd[0], nd[1]) != 1 && inner * twist(div[0], div[1]) != 1 {
                    *mask &= !(1 << j);
                }
            }
        };
        for j in 0..4 {
            for &p in self.ints.odd_primes(a[j]) {
                // a prime of t₂ or t₃ dividing t₀t₁ was already seen
                if j >= 2 && ((k[0] as u32).is_multiple_of(p) || (k[1] as u32).is_multiple_of(p)) {
                    continue;
                }
                odd_place(p, &mut mask);
                if mask == 0 {
                    return 0;
                }
            }
        }
        mask
    }

    #[inline]
    fn real_and_two(&self, c: [u64; 4], sg: [i64; 4]) -> bool {
        if sg[0] == sg[1] && sg[1] == sg[2] && sg[2] == sg[3] {
            return false;
        }
        let ci = [0, 1, 2, 3].map(|i| sg[i] * c[i] as i64);
        let even = c.map(|x| x & 1 == 0);
        match even.iter().filter(|&&e| e).count() {
            0 => self
                .a1
                .contains_index(idx8(ci[0]) | idx8(ci[1]) << 2 | idx8(ci[2]) << 4 | idx8(ci[3]) << 6),
            2 => {
                let mut v = [0i64; 4];
                let (mut lo, mut hi) = (0, 2);
                for i in 0..4 {
                    if even[i] {
                        v[lo] = ci[i] / 2;
                        lo += 1;
                    } else {
                        v[hi] = ci[i];
                        hi += 1;
                    }
                }
                self.a2
                    .contains_index(idx8(v[0]) | idx8(v[1]) << 2 | idx8(v[2]) << 4 | idx8(v[3]) << 6)
            }
            _ => true,
        }
    }

    fn count_with(&self, b: u64, s01: PairSigns, s23: PairSigns, ns: NonSquare, mult: [i64; 4]) -> u64 {
        let outer = self.pairs.upto(b);
        let mut signs = Vec::new();
        for sa in s01.list() {
            for sb in s23.list() {
                signs.push([sa[0], sa[1], sb[0], sb[1]]);
            }
        }
        let sgs: Vec<[i64; 4]> = signs
            .iter()
            .map(|s| {
                [
                    mult[0] * s[0] * s[2],
                    mult[1] * s[1] * s[3],
                    mult[2] * s[1] * s[2],
                    mult[3] * s[0] * s[3],
                ]
            })
            .collect();
        // (t₀,t₁,t₂,t₃) ↦ (t₂,t₃,t₀,t₁) permutes the coefficients as
        // (c₀,c₁,c₃,c₂), so such counts only need unordered pairs of pairs.
        let symmetric = s01 == s23 && mult[2] == mult[3] && ns != NonSquare::PosFirst;
        let tuple = |a: [u64; 4]| -> u64 {
            let sq = a.map(|x| self.ints.kernel(x) == 1);
            let mut mask = 0u32;
            for (j, s) in signs.iter().enumerate() {
                if self.nonsquare(sq, *s, ns) {
                    mask |= 1 << j;
                }
            }
            if mask == 0 {
                return 0;
            }
            self.soluble_patterns(a, &sgs, mask).count_ones() as u64
        };
        let work = || {
            (0..outer.len())
                .into_par_iter()
                .map(|i| {
                    let (u, v) = outer[i];
                    let h1 = u.max(v) as u64;
                    let inner = self.pairs.upto(b / h1);
                    let mut n = 0u64;
                    if symmetric {
                        if i < inner.len() {
                            n += tuple([u as u64, v as u64, u as u64, v as u64]);
                            for &(x, y) in &inner[i + 1..] {
                                n += 2 * tuple([u as u64, v as u64, x as u64, y as u64]);
                            }
                        }
                    } else {
                        for &(x, y) in inner {
                            n += tuple([u as u64, v as u64, x as u64, y as u64]);
                        }
                    }
                    n
                })
                .sum()
        };
        match self.config.workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("thread pool")
                .install(work),
            None => work(),
        }
    }

    #[inline]
    fn nonsquare(&self, sq: [bool; 4], s: [i64; 4], mode: NonSquare) -> bool {
        match mode {
            NonSquare::NegBoth => !(s[0] != s[1] && sq[0] && sq[1]) && !(s[2] != s[3] && sq[2] && sq[3]),
            NonSquare::PosFirst => !(sq[0] && sq[1]),
            NonSquare::PosBoth => !(sq[0] && sq[1]) && !(sq[2] && sq[3]),
        }
    }

    /// N(B), counting t₀ > 0, t₂ > 0 representatives of the sign orbits.
    pub fn count_n(&self, b: u64) -> Result<u64> {
        self.check(b)?;
        Ok(self.count_with(
            b,
            PairSigns::FirstPositive,
            PairSigns::FirstPositive,
            NonSquare::NegBoth,
            [1; 4],
        ))
    }

    /// Number of sign-unrestricted tuples; four times N(B).
    pub fn count_raw(&self, b: u64) -> Result<u64> {
        self.check(b)?;
        Ok(self.count_with(b, PairSigns::All, PairSigns::All, NonSquare::NegBoth, [1; 4]))
    }

    pub fn count_n1(&self, b: u64) -> Result<u64> {
        self.check(b)?;
        Ok(self.count_with(
            b,
            PairSigns::Positive,
            PairSigns::Positive,
            NonSquare::PosFirst,
            sign_mult(Some(CountVariant::R1)),
        ))
    }

    pub fn count_n2(&self, b: u64) -> Result<u64> {
        self.check(b)?;
        Ok(self.count_with(
            b,
            PairSigns::Positive,
            PairSigns::Positive,
            NonSquare::PosBoth,
            sign_mult(Some(CountVariant::R2)),
        ))
    }

    /// Count restricted to the region t_i < 0 ⇔ l_i = 1.
    pub fn region_count(&self, b: u64, l: [u8; 4]) -> Result<u64> {
        self.check(b)?;
        if l.iter().any(|&x| x > 1) {
            return Err(Error::InvalidArgument(format!("{l:?} is not a bit vector")));
        }
        let s = l.map(|x| if x == 1 { -1 } else { 1 });
        Ok(self.count_with(
            b,
            PairSigns::Fixed(s[0], s[1]),
            PairSigns::Fixed(s[2], s[3]),
            NonSquare::NegBoth,
            [1; 4],
        ))
    }

    /// All counts for one B.
    pub fn census(&self, b: u64) -> Result<CensusResult> {
        let start = Instant::now();
        let n = self.count_n(b)?;
        let n1 = self.count_n1(b)?;
        let n2 = self.count_n2(b)?;
        let raw = self.count_raw(b)?;
        Ok(CensusResult {
            b,
            n,
            n1,
            n2,
            raw_count: raw,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "N2")]
    pub n2: u64,
    pub raw_count: u64,
    pub elapsed_ms: u64,
}

impl CensusResult {
    /// N = 2N₁ + N₂ and raw = 4N.
    pub fn consistent(&self) -> bool {
        self.n == 2 * self.n1 + self.n2 && self.raw_count == 4 * self.n
    }
}

pub fn count_n(b: u64, config: CountConfig) -> Result<u64> {
    Counter::new(b, config)?.count_n(b)
}

pub fn count_n1(b: u64, config: CountConfig) -> Result<u64> {
    Counter::new(b, config)?.count_n1(b)
}

pub fn count_n2(b: u64, config: CountConfig) -> Result<u64> {
    Counter::new(b, config)?.count_n2(b)
}

pub fn region_count(b: u64, l: [u8; 4], config: CountConfig) -> Result<u64> {
    Counter::new(b, config)?.region_count(b, l)
}

/// Direct enumeration over (Z∖{0})⁴ with the general Hasse test; slow,
/// intended as a reference for small B.
pub fn count_raw_reference(b: u64, sieve: &SpfSieve) -> Result<u64> {
    let bi = b as i64;
    let mut n = 0u64;
    let range: Vec<i64> = (-bi..=bi).filter(|&x| x != 0).collect();
    for &t0 in &range {
        for &t1 in &range {
            if gcd(t0.unsigned_abs(), t1.unsigned_abs()) != 1 {
                continue;
            }
            let h1 = t0.unsigned_abs().max(t1.unsigned_abs());
            for &t2 in &range {
                for &t3 in &range {
                    if gcd(t2.unsigned_abs(), t3.unsigned_abs()) != 1 {
                        continue;
                    }
                    if h1 * t2.unsigned_abs().max(t3.unsigned_abs()) > b {
                        continue;
                    }
                    if crate::arith::is_square(-(t0 as i128) * t1 as i128)
                        || crate::arith::is_square(-(t2 as i128) * t3 as i128)
                    {
                        continue;
                    }
                    let bp = BasePoint::new([t0, t1, t2, t3])?;
                    let q = fibre_quadric(&bp, CountVariant::R1, false)?;
                    if is_everywhere_locally_soluble(&q, sieve)? {
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

/// The splitting t_i = 2^{σ_i} s_i (m-part) b_i².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub b: [u64; 4],
    /// (m₀₂, m₀₃, m₁₂, m₁₃)
    pub m: [u64; 4],
    pub sigma: [u8; 4],
    pub s: [u64; 4],
}

impl Decomposition {
    pub fn reconstruct(&self) -> [u64; 4] {
        let [m02, m03, m12, m13] = self.m;
        let mp = [m02 * m03, m12 * m13, m02 * m12, m03 * m13];
        [0, 1, 2, 3].map(|i| (1u64 << self.sigma[i]) * self.s[i] * mp[i] * self.b[i] * self.b[i])
    }

    /// The gcd and squarefreeness side conditions.
    pub fn validate(&self, sieve: &SpfSieve) -> Result<()> {
        let [m02, m03, m12, m13] = self.m;
        let b = self.b;
        let mprod = m02 * m03 * m12 * m13;
        let sprod = self.s.iter().product::<u64>();
        let sq = |n: u64| -> Result<bool> { Ok(sieve.factorize(n)?.mu_squared() == 1) };
        let sig: u8 = self.sigma.iter().sum();
        let conds = [
            gcd(b[0], b[1]) == 1 && gcd(b[2], b[3]) == 1,
            gcd(m02, b[1] * b[3]) == 1
                && gcd(m03, b[1] * b[2]) == 1
                && gcd(m12, b[0] * b[3]) == 1
                && gcd(m13, b[0] * b[2]) == 1,
            sq(mprod)?,
            sig <= 1 && (sig == 0 || mprod % 2 == 1),
            self.s.iter().all(|&x| x % 2 == 1),
            sq(sprod)? && gcd(sprod, mprod) == 1,
            gcd(self.s[0], b[1]) == 1
                && gcd(self.s[1], b[0]) == 1
                && gcd(self.s[2], b[3]) == 1
                && gcd(self.s[3], b[2]) == 1,
            (self.sigma[0] == 0 || b[1] % 2 == 1)
                && (self.sigma[1] == 0 || b[0] % 2 == 1)
                && (self.sigma[2] == 0 || b[3] % 2 == 1)
                && (self.sigma[3] == 0 || b[2] % 2 == 1),
        ];
        if conds.iter().all(|&c| c) {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!("decomposition side conditions fail: {self:?}")))
        }
    }
}

pub fn decompose(t: [u64; 4], sieve: &SpfSieve) -> Result<Decomposition> {
    if t.contains(&0) || gcd(t[0], t[1]) != 1 || gcd(t[2], t[3]) != 1 {
        return Err(Error::InvalidBasePoint(format!("{t:?}")));
    }
    let mut a = [0u64; 4];
    let mut b = [0u64; 4];
    for i in 0..4 {
        (a[i], b[i]) = sieve.factorize(t[i])?.squarefree_split();
    }
    let m = [gcd(a[0], a[2]), gcd(a[0], a[3]), gcd(a[1], a[2]), gcd(a[1], a[3])];
    let [m02, m03, m12, m13] = m;
    let s_full = [
        a[0] / (m02 * m03),
        a[1] / (m12 * m13),
        a[2] / (m02 * m12),
        a[3] / (m03 * m13),
    ];
    let sigma = s_full.map(|x| x.trailing_zeros() as u8);
    let s = s_full.map(|x| x >> x.trailing_zeros());
    Ok(Decomposition { b, m, sigma, s })
}

/// Checks the three-term hyperbola decomposition by brute force.
pub fn hyperbola_split_check(
    x: u64,
    y: u64,
    c: [u64; 4],
    g: [&dyn Fn(u64) -> i64; 4],
) -> Result<bool> {
    if y < 2 || y * y > x || c.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= Y <= sqrt(X) and positive c (X={x}, Y={y}, c={c:?})"
        )));
    }
    // All (n0, n1) with norm ≤ X, tagged with norm and weight; same for (n2, n3).
    let pairs = |ca: u64, cb: u64, ga: &dyn Fn(u64) -> i64, gb: &dyn Fn(u64) -> i64| {
        let mut v = Vec::new();
        for na in 1..=x / ca {
            for nb in 1..=x / cb {
                let norm = (na * ca).max(nb * cb);
                if norm <= x {
                    v.push((norm, ga(na) as i128 * gb(nb) as i128));
                }
            }
        }
        v
    };
    let p01 = pairs(c[0], c[1], g[0], g[1]);
    let p23 = pairs(c[2], c[3], g[2], g[3]);
    let (mut full, mut t1, mut t2, mut t3) = (0i128, 0i128, 0i128, 0i128);
    for &(a, wa) in &p01 {
        for &(b, wb) in &p23 {
            let w = wa * wb;
            if a * b <= x {
                full += w;
            }
            if a <= y && b * a <= x {
                t1 += w;
            }
            if b * y <= x && a * b <= x {
                t2 += w;
            }
            if a <= y && b * y <= x {
                t3 += w;
            }
        }
    }
    Ok(full == t1 + t2 - t3)
}
