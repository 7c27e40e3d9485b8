//! Leading constant of the count: ρ-values, the even-part geometric sums and
//! the Euler products over odd primes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{jacobi_u64, SpfSieve};
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Catalan's constant, L(2, χ₄).
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

/// ∏_{p odd} (1 − p⁻²)⁻¹ = π²/8.
pub const ODD_ZETA2: f64 = PI * PI / 8.0;

/// Constant C in |log F_p| ≤ C/p², p ≥ 3, for the plain factor.
pub const PLAIN_TAIL_C: f64 = 7.0;

/// Constant C in |log R_p| ≤ C/p³, p ≥ 3, for the reduced factor.
pub const REDUCED_TAIL_C: f64 = 4.0;

/// Primes per block in the parallel reduction.
pub const BLOCK: usize = 4096;

const ROUNDING_SLACK: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VariantKey {
    K12,
    K13,
    K22,
    K23,
}

impl VariantKey {
    pub const ALL: [VariantKey; 4] = [VariantKey::K12, VariantKey::K13, VariantKey::K22, VariantKey::K23];

    pub fn new(r: u8, i: u8) -> Result<Self> {
        match (r, i) {
            (1, 2) => Ok(VariantKey::K12),
            (1, 3) => Ok(VariantKey::K13),
            (2, 2) => Ok(VariantKey::K22),
            (2, 3) => Ok(VariantKey::K23),
            _ => Err(Error::InvalidArgument(format!("no variant ({r},{i})"))),
        }
    }

    pub fn r(self) -> u8 {
        match self {
            VariantKey::K12 | VariantKey::K13 => 1,
            _ => 2,
        }
    }

    pub fn i(self) -> u8 {
        match self {
            VariantKey::K12 | VariantKey::K22 => 2,
            _ => 3,
        }
    }

    pub fn twisted(self) -> bool {
        self == VariantKey::K23
    }

    /// Multiplicity in 2𝔠₁,₂ + 2𝔠₁,₃ + 𝔠₂,₂ + 𝔠₂,₃.
    pub fn weight(self) -> u32 {
        if self.r() == 1 {
            2
        } else {
            1
        }
    }

    /// (Σ at odd m with σ = 0 and trivial character, Σ at even m).
    pub fn sigma_values(self) -> (i64, i64) {
        if self.twisted() {
            (64, 0)
        } else {
            (192, 128)
        }
    }
}

impl fmt::Display for VariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r(), self.i())
    }
}

/// The three constrained sums Σ w(μ)/4^{|μ|} over μ ∈ ℕ₀⁴ with
/// min(μ₀,μ₁) = min(μ₂,μ₃) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuSums {
    pub plain: Rational,
    pub zero_count: Rational,
    pub pair_product: Rational,
}

impl MuSums {
    pub fn to_f64(self) -> [f64; 3] {
        [self.plain, self.zero_count, self.pair_product].map(ratio_f64)
    }
}

pub fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Closed form. For one pair (μ₀,μ₁) with a zero entry,
/// S₀ = Σ 4^{-μ₀-μ₁} = 1 + 2/3 and S₁ = Σ #{zeros}·4^{-μ₀-μ₁} = 2 + 2/3.
pub fn mu_power_sums() -> MuSums {
    let s0 = Rational::new(5, 3);
    let s1 = Rational::new(8, 3);
    MuSums {
        plain: s0 * s0,
        zero_count: Rational::from_integer(2) * s0 * s1,
        pair_product: s1 * s1,
    }
}

/// The same three sums by brute force over μ_i ≤ `cutoff`.
pub fn mu_power_sums_direct(cutoff: u32) -> [f64; 3] {
    let mut acc = [0f64; 3];
    let pairs: Vec<(u32, u32)> = (0..=cutoff)
        .flat_map(|a| (0..=cutoff).map(move |b| (a, b)))
        .filter(|&(a, b)| a.min(b) == 0)
        .collect();
    // smallest terms first
    let mut terms: Vec<(u32, [f64; 3])> = Vec::new();
    for &(m0, m1) in &pairs {
        for &(m2, m3) in &pairs {
            let z01 = (m0 == 0) as u32 + (m1 == 0) as u32;
            let z23 = (m2 == 0) as u32 + (m3 == 0) as u32;
            let e = m0 + m1 + m2 + m3;
            terms.push((e, [1.0, (z01 + z23) as f64, (z01 * z23) as f64]));
        }
    }
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    for (e, w) in terms {
        let s = 0.25f64.powi(e as i32);
        for k in 0..3 {
            acc[k] += w[k] * s;
        }
    }
    acc
}

/// ρ_{(r,i)} = Σ_odd·S_plain + (Σ_even/2)·S_zero + (Σ_even/4)·S_pair.
pub fn rho(key: VariantKey) -> Rational {
    let (odd, even) = key.sigma_values();
    let s = mu_power_sums();
    Rational::from_integer(odd) * s.plain
        + Rational::new(even, 2) * s.zero_count
        + Rational::new(even, 4) * s.pair_product
}

/// ρ′_{(r,i)}(p): (−1/p) for the twisted key, 1 otherwise.
pub fn rho_prime(key: VariantKey, p: u64) -> Result<i8> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(if key.twisted() { chi4(p) } else { 1 })
}

fn chi4(p: u64) -> i8 {
    jacobi_u64(p - 1, p)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !crate::arith::is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn factor_from_rp(rp: i8, p: u64) -> f64 {
    let x = 1.0 / p as f64;
    let num = 1.0 + x * (2.0 + x * (2.0 * (rp as f64 + 1.0) + x * (2.0 + x)));
    num / ((1.0 + x) * (1.0 + x))
}

/// (1+1/p)^{-2}(1 + 2/p + 2(ρ′+1)/p² + 2/p³ + 1/p⁴)
pub fn euler_factor(key: VariantKey, p: u64) -> Result<f64> {
    check_odd_prime(p)?;
    Ok(factor_from_rp(rho_prime(key, p)?, p))
}

/// The factor as an exact rational (p ≤ 3000 keeps p⁴ in range).
pub fn euler_factor_exact(key: VariantKey, p: u64) -> Result<Ratio<i128>> {
    check_odd_prime(p)?;
    if p > 3000 {
        return Err(Error::OutOfRange { value: p as u128, limit: 3000 });
    }
    let rp = rho_prime(key, p)? as i128;
    let p = p as i128;
    let num = p.pow(4) + 2 * p.pow(3) + 2 * (rp + 1) * p * p + 2 * p + 1;
    let den = (p + 1) * (p + 1) * p * p;
    Ok(Ratio::new(num, den))
}

/// How the infinite product is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProductMethod {
    /// ∏_{p ≤ P} F_p, tail ≤ 7/P.
    Plain,
    /// Divide out the ζ / L(2,χ₄) factors and multiply their exact values
    /// back in; tail ≤ 2/P².
    Accelerated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EulerProductResult {
    pub value: f64,
    pub prime_limit: u64,
    /// Bound on |log(true/truncated)|.
    pub tail_radius: f64,
}

impl EulerProductResult {
    /// [value·e^{-R}, value·e^{R}]
    pub fn interval(&self) -> (f64, f64) {
        (self.value * (-self.tail_radius).exp(), self.value * self.tail_radius.exp())
    }
}

/// Compensated (Neumaier) sum.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.c
    }
}

/// Σ_{3 ≤ p ≤ P} f(p). Primes are cut into blocks of `BLOCK`; each block is
/// summed on its own and the block totals are added left to right, so the
/// result does not depend on the thread count.
fn prime_log_sum<F>(sieve: &SpfSieve, prime_limit: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    let primes = sieve.primes();
    let end = primes.partition_point(|&p| (p as u64) <= prime_limit);
    let blocks: Vec<f64> = primes[..end]
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut acc = Neumaier::default();
            for &p in chunk {
                if p != 2 {
                    acc.add(f(p as u64));
                }
            }
            acc.total()
        })
        .collect();
    let mut acc = Neumaier::default();
    for b in blocks {
        acc.add(b);
    }
    acc.total()
}

fn shared_sieve(prime_limit: u64) -> SpfSieve {
    SpfSieve::new(prime_limit.max(3))
}

/// Checks the tail constants on 3 ≤ p ≤ 10³. Beyond that, p²|log F_p| and
/// p³|log R_p| are monotone in p (their series are alternating with
/// decreasing terms) and stay below the values reached here.
pub fn verify_tail_constants() -> Result<()> {
    static CHECK: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    CHECK
        .get_or_init(|| {
            let sieve = SpfSieve::new(1000);
            for &p in sieve.primes().iter().skip(1) {
                let p = p as u64;
                let pf = p as f64;
                for rp in [-1i8, 1] {
                    let f = factor_from_rp(rp, p);
                    if f.ln().abs() * pf * pf > PLAIN_TAIL_C {
                        return Err(format!("plain tail constant fails at p={p}"));
                    }
                    if reduced_log(rp, p).abs() * pf * pf * pf > REDUCED_TAIL_C {
                        return Err(format!("reduced tail constant fails at p={p}"));
                    }
                }
            }
            Ok(())
        })
        .clone()
        .map_err(Error::Inconsistent)
}

/// log R_p where R_p = F_p(1−x²)³ (untwisted) or F_p(1−x²)(1−χx²)² (twisted).
fn reduced_log(rp: i8, p: u64) -> f64 {
    let x = 1.0 / p as f64;
    let x2 = x * x;
    let lf = factor_from_rp(rp, p).ln();
    if rp == 1 {
        lf + 3.0 * (-x2).ln_1p()
    } else {
        lf + (-x2).ln_1p() + 2.0 * x2.ln_1p()
    }
}

fn reduced_log_twisted(p: u64) -> f64 {
    reduced_log(chi4(p), p)
}

/// ∏_{3 ≤ p} F_p for one character choice, truncated at `prime_limit`.
fn euler_product(twisted: bool, sieve: &SpfSieve, prime_limit: u64, method: ProductMethod) -> Result<EulerProductResult> {
    if prime_limit < 3 {
        return Err(Error::InvalidArgument(format!("prime_limit must be at least 3, got {prime_limit}")));
    }
    verify_tail_constants()?;
    let pl = prime_limit as f64;
    let (value, tail) = match method {
        ProductMethod::Plain => {
            let s = prime_log_sum(sieve, prime_limit, |p| {
                let rp = if twisted { chi4(p) } else { 1 };
                factor_from_rp(rp, p).ln()
            });
            (s.exp(), PLAIN_TAIL_C / pl)
        }
        ProductMethod::Accelerated => {
            let s = if twisted {
                prime_log_sum(sieve, prime_limit, reduced_log_twisted)
            } else {
                prime_log_sum(sieve, prime_limit, |p| reduced_log(1, p))
            };
            let lead = if twisted { ODD_ZETA2 * CATALAN * CATALAN } else { ODD_ZETA2.powi(3) };
            (lead * s.exp(), REDUCED_TAIL_C / (2.0 * pl * pl))
        }
    };
    Ok(EulerProductResult { value, prime_limit, tail_radius: tail + ROUNDING_SLACK })
}

/// ∏_{p≠2} F_p for the key, accelerated.
pub fn product_for(key: VariantKey, prime_limit: u64) -> Result<EulerProductResult> {
    euler_product(key.twisted(), &shared_sieve(prime_limit), prime_limit, ProductMethod::Accelerated)
}

pub fn product_with(key: VariantKey, prime_limit: u64, method: ProductMethod) -> Result<EulerProductResult> {
    euler_product(key.twisted(), &shared_sieve(prime_limit), prime_limit, method)
}

/// 𝔠_{r,i} = ρ_{(r,i)}/(256π²) ∏_{p≠2} F_p.
pub fn constant_cri(key: VariantKey, prime_limit: u64) -> Result<EulerProductResult> {
    constant_cri_with(key, prime_limit, ProductMethod::Accelerated)
}

pub fn constant_cri_with(key: VariantKey, prime_limit: u64, method: ProductMethod) -> Result<EulerProductResult> {
    let prod = product_with(key, prime_limit, method)?;
    Ok(scale_cri(key, prod))
}

fn scale_cri(key: VariantKey, prod: EulerProductResult) -> EulerProductResult {
    let scale = ratio_f64(rho(key)) / (256.0 * PI * PI);
    EulerProductResult { value: scale * prod.value, ..prod }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariantConstant {
    pub r: u8,
    pub i: u8,
    pub rho: String,
    pub value: f64,
    pub tail_radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeadingConstant {
    pub value: f64,
    pub prime_limit: u64,
    pub tail_radius: f64,
    /// 2𝔠₁,₂ + 2𝔠₁,₃ + 𝔠₂,₂ + 𝔠₂,₃
    pub weighted_sum: f64,
    pub variants: Vec<VariantConstant>,
    /// The constant when every Σ_{r,3} takes the untwisted values 192/128,
    /// as it does under the Hasse-consistent exponent; see [`hasse_coefficient`].
    pub hasse_value: f64,
}

impl LeadingConstant {
    pub fn result(&self) -> EulerProductResult {
        EulerProductResult { value: self.value, prime_limit: self.prime_limit, tail_radius: self.tail_radius }
    }
}

/// 935/(36π²) ∏(untwisted) + 25/(36π²) ∏(twisted), checked against the
/// weighted sum of the four 𝔠_{r,i}.
pub fn leading_constant(prime_limit: u64) -> Result<LeadingConstant> {
    leading_constant_with(prime_limit, ProductMethod::Accelerated)
}

pub fn leading_constant_with(prime_limit: u64, method: ProductMethod) -> Result<LeadingConstant> {
    let sieve = shared_sieve(prime_limit);
    let untw = euler_product(false, &sieve, prime_limit, method)?;
    let tw = euler_product(true, &sieve, prime_limit, method)?;

    let pi2 = PI * PI;
    let closed = 935.0 / (36.0 * pi2) * untw.value + 25.0 / (36.0 * pi2) * tw.value;
    let radius = untw.tail_radius.max(tw.tail_radius);

    let mut variants = Vec::new();
    let mut weighted = 0.0;
    for key in VariantKey::ALL {
        let prod = if key.twisted() { tw.clone() } else { untw.clone() };
        let c = scale_cri(key, prod);
        weighted += key.weight() as f64 * c.value;
        variants.push(VariantConstant {
            r: key.r(),
            i: key.i(),
            rho: rho(key).to_string(),
            value: c.value,
            tail_radius: c.tail_radius,
        });
    }

    let tol = closed * ((2.0 * radius).exp() - 1.0) + 1e-12 * closed;
    if (closed - weighted).abs() > tol {
        return Err(Error::Inconsistent(format!(
            "closed form {closed} and weighted sum {weighted} differ by more than {tol}"
        )));
    }
    let hasse_value = ratio_f64(hasse_coefficient()) / pi2 * untw.value;
    Ok(LeadingConstant {
        value: closed,
        prime_limit,
        tail_radius: radius,
        weighted_sum: weighted,
        variants,
        hasse_value,
    })
}

/// Σ_key weight·ρ/256 when all four ρ equal 11968/9: 187/6, so that
/// c = 187/(6π²) ∏(untwisted).
pub fn hasse_coefficient() -> Rational {
    let (odd, even) = VariantKey::K12.sigma_values();
    let s = mu_power_sums();
    let r = Rational::from_integer(odd) * s.plain
        + Rational::new(even, 2) * s.zero_count
        + Rational::new(even, 4) * s.pair_product;
    let w: i64 = VariantKey::ALL.iter().map(|k| k.weight() as i64).sum();
    Rational::from_integer(w) * r / Rational::from_integer(256)
}

/// c·B²·log log B / log B
pub fn main_term(b: f64, c: f64) -> Result<f64> {
    if !(b >= 3.0) || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("main_term needs B ≥ 3, got {b}")));
    }
    let l = b.ln();
    Ok(c * b * b * l.ln() / l)
}
