//! Character-sum form of the solubility indicator, the mod-8 sums Σ_{r,i},
//! and bilinear Jacobi-sum experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, jacobi, odd, v2, SpfSieve};
use crate::counting::CountVariant;
use crate::error::{Error, Result};
use crate::solubility::{
    is_everywhere_locally_soluble, mod8_set_a1, mod8_set_a_perm, DiagonalQuadric, Mod8Set,
    Mod8Vector,
};

const UNITS: [u64; 4] = [1, 3, 5, 7];

fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn omega(n: u64) -> u32 {
    let mut n = n;
    let mut w = 0;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            w += 1;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    w + u32::from(n > 1)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// (m, σ) admissibility: μ²(m₀₂m₀₃m₁₂m₁₃) = 1, Σσ ≤ 1, and σ ≠ 0 only for odd m.
pub fn check_m_sigma(m: [u64; 4], sigma: [u8; 4]) -> Result<()> {
    if m.contains(&0) || sigma.iter().any(|&x| x > 1) {
        return Err(Error::Inadmissible(format!("m={m:?} sigma={sigma:?}")));
    }
    let mp: u64 = m.iter().product();
    let sig: u8 = sigma.iter().sum();
    if !is_squarefree(mp) {
        return Err(Error::Inadmissible(format!("m product {mp} is not squarefree")));
    }
    if sig > 1 {
        return Err(Error::Inadmissible(format!("sigma {sigma:?} has weight > 1")));
    }
    if sig == 1 && mp.is_multiple_of(2) {
        return Err(Error::Inadmissible(format!("sigma {sigma:?} with even m product")));
    }
    Ok(())
}

/// One admissible (s, m, σ, r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharsumInput {
    pub s: [u64; 4],
    /// (m₀₂, m₀₃, m₁₂, m₁₃)
    pub m: [u64; 4],
    pub sigma: [u8; 4],
    pub variant: CountVariant,
}

impl CharsumInput {
    pub fn new(s: [u64; 4], m: [u64; 4], sigma: [u8; 4], variant: CountVariant) -> Result<Self> {
        check_m_sigma(m, sigma)?;
        if s.iter().any(|&x| x == 0 || x % 2 == 0) {
            return Err(Error::Inadmissible(format!("s={s:?} must be odd and positive")));
        }
        let sp: u64 = s.iter().product();
        let mp: u64 = m.iter().product();
        if !is_squarefree(sp) || gcd(sp, mp) != 1 {
            return Err(Error::Inadmissible(format!(
                "s={s:?} must be squarefree, pairwise coprime and coprime to m={m:?}"
            )));
        }
        Ok(CharsumInput { s, m, sigma, variant })
    }

    pub fn m_product(&self) -> u64 {
        self.m.iter().product()
    }
}

/// d_{ij} d̃_{ij} = (m_{ij})_odd
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorPair {
    pub d: [u64; 4],
    pub dtilde: [u64; 4],
}

/// All divisor pairs of m_odd, lexicographic in d.
pub fn divisor_pairs(m: [u64; 4]) -> Vec<DivisorPair> {
    let mo = m.map(odd);
    let divs = mo.map(divisors);
    let mut out = Vec::new();
    for &a in &divs[0] {
        for &b in &divs[1] {
            for &c in &divs[2] {
                for &e in &divs[3] {
                    let d = [a, b, c, e];
                    out.push(DivisorPair {
                        d,
                        dtilde: [0, 1, 2, 3].map(|i| mo[i] / d[i]),
                    });
                }
            }
        }
    }
    out
}

/// Which sign the reciprocity step leaves for r = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentForm {
    /// The sign the Hasse test agrees with. At p | s₂s₃ the local factor is
    /// ((2^{σ₀+σ₁}s₀s₁m₀₂m₀₃m₁₂m₁₃)/p) with no δ_r, because the two
    /// coefficients prime to p have opposite signs.
    Hasse,
    /// ((2−δ)kd − d + k₀k₁ − k₂k₃ − (1−δ))/4, i.e. Hasse times (−1/k₂k₃)
    /// when r = 2. The closed form 64(−1/m) for Σ_{2,3} rests on this one.
    Twisted,
}

/// f_r(d, k) mod 2 in the form the Hasse test agrees with:
/// ((k₀k₁k₂k₃ − 1)d + k₀k₁ − k₂k₃)/4, plus (dk₀k₁ − 1)/2 when r = 2.
pub fn reciprocity_exponent(d: [u64; 4], k: [u64; 4], v: CountVariant) -> Result<u8> {
    reciprocity_exponent_in(d, k, v, ExponentForm::Hasse)
}

pub fn reciprocity_exponent_in(d: [u64; 4], k: [u64; 4], v: CountVariant, form: ExponentForm) -> Result<u8> {
    if d.iter().chain(k.iter()).any(|&x| x % 2 == 0) {
        return Err(Error::NonIntegral(format!("even argument in d={d:?} k={k:?}")));
    }
    let dd: i128 = d.iter().map(|&x| x as i128).product();
    let kk: i128 = k.iter().map(|&x| x as i128).product();
    let k01 = k[0] as i128 * k[1] as i128;
    let k23 = k[2] as i128 * k[3] as i128;
    let f = match form {
        ExponentForm::Hasse => {
            let num = kk * dd - dd + k01 - k23;
            if num % 4 != 0 {
                return Err(Error::NonIntegral(format!("numerator {num} of f_r")));
            }
            let mut f = num / 4;
            if v == CountVariant::R2 {
                f += (dd * k01 - 1) / 2;
            }
            f
        }
        ExponentForm::Twisted => {
            let delta = v.delta() as i128;
            let num = (2 - delta) * kk * dd - dd + k01 - k23 - (1 - delta);
            if num % 4 != 0 {
                return Err(Error::NonIntegral(format!("numerator {num} of f_r")));
            }
            num / 4
        }
    };
    Ok(f.rem_euclid(2) as u8)
}

fn jac(a: u64, n: u64) -> i8 {
    jacobi(a as i128, n as i128).expect("odd modulus")
}

fn jac2(e: u32, n: u64) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        jac(2, n)
    }
}

/// Θ₂: the odd Jacobi symbols.
pub fn theta2(dp: &DivisorPair, k: [u64; 4], l: [u64; 4]) -> i8 {
    let dprod: u64 = dp.d.iter().product();
    let dtprod: u64 = dp.dtilde.iter().product();
    let kprod: u64 = k.iter().product();
    let lprod: u64 = l.iter().product();
    jac(lprod, dprod) * jac(dtprod, kprod) * jac(l[0] * l[1], k[2] * k[3]) * jac(l[2] * l[3], k[0] * k[1])
}

/// Θ_{r,1}: the sign and the characters involving 2, on residues K mod 8.
pub fn theta1(d: [u64; 4], kk: Mod8Vector, sigma: [u8; 4], m: [u64; 4], v: CountVariant) -> Result<i8> {
    theta1_in(d, kk, sigma, m, v, ExponentForm::Hasse)
}

pub fn theta1_in(
    d: [u64; 4],
    kk: Mod8Vector,
    sigma: [u8; 4],
    m: [u64; 4],
    v: CountVariant,
    form: ExponentForm,
) -> Result<i8> {
    check_m_sigma(m, sigma)?;
    let k = kk.0.map(|x| x as u64);
    let f = reciprocity_exponent_in(d, k, v, form)?;
    let s = sigma.map(|x| x as u32);
    let dprod: u64 = d.iter().product();
    let v2m = v2(m.iter().product());
    let mut t: i8 = if f == 1 { -1 } else { 1 };
    t *= jac2(s[0] + s[1] + s[2] + s[3], dprod);
    t *= jac2(s[2] + s[3], k[0] * k[1]);
    t *= jac2(s[0] + s[1], k[2] * k[3]);
    t *= jac2(v2m, k[0] * k[1] * k[2] * k[3]);
    Ok(t)
}

/// The full Θ before it is split into Θ_{r,1}Θ₂.
pub fn theta_full(dp: &DivisorPair, k: [u64; 4], l: [u64; 4], sigma: [u8; 4], m: [u64; 4]) -> i8 {
    let s = sigma.map(|x| x as u32);
    let dprod: u64 = dp.d.iter().product();
    let dtprod: u64 = dp.dtilde.iter().product();
    let kprod: u64 = k.iter().product();
    let lprod: u64 = l.iter().product();
    let v2m = v2(m.iter().product());
    let two = |e: u32| if e.is_multiple_of(2) { 1 } else { 2 };
    jac(two(s[0] + s[1] + s[2] + s[3]) * lprod, dprod)
        * jac(two(v2m), kprod)
        * jac(two(s[2] + s[3]) * l[2] * l[3] * dtprod, k[0] * k[1])
        * jac(two(s[0] + s[1]) * l[0] * l[1] * dtprod, k[2] * k[3])
}

/// 𝒜(m, σ): which 2-adic set applies given the even coefficients.
pub fn set_a(m: [u64; 4], sigma: [u8; 4]) -> Result<Mod8Set> {
    check_m_sigma(m, sigma)?;
    let [m02, m03, m12, m13] = m;
    let perm = if (m03 * m12) % 2 == 0 {
        [0, 1, 2, 3]
    } else if (m02 * m13) % 2 == 0 {
        [2, 3, 0, 1]
    } else if sigma[0] == 1 {
        [0, 3, 1, 2]
    } else if sigma[1] == 1 {
        [1, 2, 0, 3]
    } else if sigma[2] == 1 {
        [0, 2, 1, 3]
    } else if sigma[3] == 1 {
        [1, 3, 0, 2]
    } else {
        return Ok(*mod8_set_a1());
    };
    mod8_set_a_perm(perm)
}

/// The residue vector tested against 𝒜(m, σ).
pub fn two_adic_vector(input: &CharsumInput) -> Mod8Vector {
    let [m02, m03, m12, m13] = input.m;
    let s = input.s.map(|x| x as i64);
    let x = odd(m03 * m12) as i64;
    let y = odd(m02 * m13) as i64;
    let d = input.variant.delta();
    Mod8Vector::from_ints([-d * s[0] * s[2] * x, s[1] * s[3] * x, d * s[1] * s[2] * y, -s[0] * s[3] * y])
        .expect("odd entries")
}

/// ⟨s, m, σ⟩_{r,2}
pub fn two_adic_indicator(input: &CharsumInput) -> Result<bool> {
    Ok(set_a(input.m, input.sigma)?.contains(two_adic_vector(input)))
}

/// The quadric C_{r,s,m,σ} whose solubility the indicator detects.
pub fn charsum_quadric(input: &CharsumInput) -> Result<DiagonalQuadric> {
    let [m02, m03, m12, m13] = input.m.map(|x| x as i128);
    let s = input.s.map(|x| x as i128);
    let g = input.sigma.map(|x| 1i128 << x);
    let d = input.variant.delta() as i128;
    let c = [
        -d * g[0] * g[2] * s[0] * s[2] * m03 * m12,
        g[1] * g[3] * s[1] * s[3] * m03 * m12,
        d * g[1] * g[2] * s[1] * s[2] * m02 * m13,
        -g[0] * g[3] * s[0] * s[3] * m02 * m13,
    ];
    let mut a = [0i64; 4];
    for i in 0..4 {
        a[i] = i64::try_from(c[i]).map_err(|_| Error::Overflow("charsum_quadric"))?;
    }
    DiagonalQuadric::new(a)
}

/// Direct Hasse indicator of C_{r,s,m,σ}.
pub fn direct_indicator(input: &CharsumInput, sieve: &SpfSieve) -> Result<u8> {
    Ok(u8::from(is_everywhere_locally_soluble(&charsum_quadric(input)?, sieve)?))
}

/// Every factorization k_i l_i = s_i.
fn splittings(s: [u64; 4]) -> Vec<([u64; 4], [u64; 4])> {
    let divs = s.map(divisors);
    let mut out = Vec::new();
    for &a in &divs[0] {
        for &b in &divs[1] {
            for &c in &divs[2] {
                for &e in &divs[3] {
                    let k = [a, b, c, e];
                    out.push((k, [0, 1, 2, 3].map(|i| s[i] / k[i])));
                }
            }
        }
    }
    out
}

/// The indicator as 2-adic condition times a finite Jacobi-symbol sum;
/// must come out as exactly 0 or 1.
pub fn indicator_via_charsum(input: &CharsumInput) -> Result<u8> {
    let input = CharsumInput::new(input.s, input.m, input.sigma, input.variant)?;
    if !two_adic_indicator(&input)? {
        return Ok(0);
    }
    let mut total: i64 = 0;
    let splits = splittings(input.s);
    for dp in divisor_pairs(input.m) {
        for (k, l) in &splits {
            let kk = Mod8Vector::from_ints(k.map(|x| x as i64))?;
            let t1 = theta1(dp.d, kk, input.sigma, input.m, input.variant)?;
            total += (t1 * theta2(&dp, *k, *l)) as i64;
        }
    }
    let sp: u64 = input.s.iter().product();
    let tau = 1i64 << omega(sp * odd(input.m_product()));
    if total == 0 {
        Ok(0)
    } else if total == tau {
        Ok(1)
    } else {
        Err(Error::NonIntegral(format!("character sum {total} over tau {tau} for {input:?}")))
    }
}

fn odd_squarefree_upto(n: u64) -> Vec<u64> {
    (1..=n).step_by(2).filter(|&x| is_squarefree(x)).collect()
}

/// Admissible (m, σ) with entries of m drawn from `values`.
pub fn admissible_m_sigma(values: &[u64]) -> Vec<([u64; 4], [u8; 4])> {
    let sigmas: [[u8; 4]; 5] = [[0; 4], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
    let mut out = Vec::new();
    for &a in values {
        for &b in values {
            for &c in values {
                for &d in values {
                    let m = [a, b, c, d];
                    for sg in sigmas {
                        if check_m_sigma(m, sg).is_ok() {
                            out.push((m, sg));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every admissible input with s_i ≤ s_max and m_{ij} ≤ m_max for one variant.
pub fn admissible_box(s_max: u64, m_max: u64, v: CountVariant) -> Vec<CharsumInput> {
    let svals = odd_squarefree_upto(s_max);
    let mvals: Vec<u64> = (1..=m_max).collect();
    let ms = admissible_m_sigma(&mvals);
    let mut out = Vec::new();
    for &a in &svals {
        for &b in &svals {
            for &c in &svals {
                for &d in &svals {
                    let s = [a, b, c, d];
                    let sp: u64 = s.iter().product();
                    if !is_squarefree(sp) {
                        continue;
                    }
                    for &(m, sg) in &ms {
                        if gcd(sp, m.iter().product()) == 1 {
                            out.push(CharsumInput { s, m, sigma: sg, variant: v });
                        }
                    }
                }
            }
        }
    }
    out
}

fn two_adic_main_conditions(l: [u64; 4], q: Mod8Vector, m: [u64; 4], v: CountVariant) -> bool {
    let [m02, m03, m12, m13] = m;
    let x = odd(m03 * m12) as i64;
    let y = odd(m02 * m13) as i64;
    let d = v.delta();
    let q = q.0.map(|c| c as i64);
    let l = l.map(|c| c as i64);
    let eq = |a: i64, b: i64| (a - b).rem_euclid(8) == 0;
    eq(l[0] * l[2] * x, -d * q[0])
        && eq(l[1] * l[3] * x, q[1])
        && eq(l[1] * l[2] * y, d * q[2])
        && eq(l[0] * l[3] * y, -q[3])
}

fn unit_vectors() -> impl Iterator<Item = [u64; 4]> {
    (0..256usize).map(|i| [0, 2, 4, 6].map(|s| UNITS[(i >> s) & 3]))
}

/// Σ_{r,2}(m, σ) by direct summation.
pub fn sigma_r2(m: [u64; 4], sigma: [u8; 4], v: CountVariant) -> Result<i64> {
    let set = set_a(m, sigma)?;
    let mut total = 0i64;
    for q in set.iter() {
        for l in unit_vectors() {
            if two_adic_main_conditions(l, q, m, v) {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Σ_{r,3}(m, σ) by direct summation, with the twisted exponent that the
/// closed forms assume.
pub fn sigma_r3(m: [u64; 4], sigma: [u8; 4], v: CountVariant) -> Result<i64> {
    sigma_r3_in(m, sigma, v, ExponentForm::Twisted)
}

pub fn sigma_r3_in(m: [u64; 4], sigma: [u8; 4], v: CountVariant, form: ExponentForm) -> Result<i64> {
    let set = set_a(m, sigma)?;
    let d = m.map(odd);
    let mut total = 0i64;
    for q in set.iter() {
        for k in unit_vectors() {
            if two_adic_main_conditions(k, q, m, v) {
                let kk = Mod8Vector::new(k.map(|c| c as u8))?;
                total += theta1_in(d, kk, sigma, m, v, form)? as i64;
            }
        }
    }
    Ok(total)
}

/// Closed forms for Σ_{r,i}, i ∈ {2, 3}.
pub fn sigma_closed_form(i: u8, m: [u64; 4], sigma: [u8; 4], v: CountVariant) -> Result<i64> {
    check_m_sigma(m, sigma)?;
    let mp: u64 = m.iter().product();
    let odd_case = mp % 2 == 1 && sigma == [0; 4];
    Ok(match (i, v) {
        (2, _) | (3, CountVariant::R1) => {
            if odd_case {
                192
            } else {
                128
            }
        }
        (3, CountVariant::R2) => {
            if odd_case {
                64 * jacobi(-1, odd(mp) as i128)? as i64
            } else {
                0
            }
        }
        _ => return Err(Error::InvalidArgument(format!("i must be 2 or 3, got {i}"))),
    })
}

/// One line of the Σ table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaRow {
    pub r: u8,
    pub i: u8,
    pub m: [u64; 4],
    pub sigma: [u8; 4],
    pub direct: i64,
    pub closed_form: i64,
    pub pass: bool,
    /// Direct sum with the Hasse-consistent exponent.
    pub hasse: i64,
}

/// Σ_{r,i} for all admissible (m, σ) with m_{ij} ∈ `values`.
pub fn sigma_table(values: &[u64]) -> Result<Vec<SigmaRow>> {
    let mut rows = Vec::new();
    for (m, sg) in admissible_m_sigma(values) {
        for v in [CountVariant::R1, CountVariant::R2] {
            for i in [2u8, 3] {
                let direct = if i == 2 { sigma_r2(m, sg, v)? } else { sigma_r3(m, sg, v)? };
                let hasse = if i == 2 { direct } else { sigma_r3_in(m, sg, v, ExponentForm::Hasse)? };
                let closed = sigma_closed_form(i, m, sg, v)?;
                rows.push(SigmaRow {
                    r: v.r(),
                    i,
                    m,
                    sigma: sg,
                    direct,
                    closed_form: closed,
                    pass: direct == closed,
                    hasse,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMode {
    Ones,
    Mobius,
    #[serde(rename = "random")]
    RandomSigns,
}

impl std::str::FromStr for CoeffMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(CoeffMode::Ones),
            "mobius" => Ok(CoeffMode::Mobius),
            "random" => Ok(CoeffMode::RandomSigns),
            _ => Err(Error::InvalidArgument(format!("unknown coefficient mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoeffMode::Ones => "ones",
            CoeffMode::Mobius => "mobius",
            CoeffMode::RandomSigns => "random",
        })
    }
}

pub const BILINEAR_CEILING: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearResult {
    #[serde(rename = "X")]
    pub x: u64,
    pub z: u64,
    pub mode: CoeffMode,
    #[serde(rename = "S")]
    pub s: i64,
    pub normalized: f64,
}

// Coefficients on odd squarefree integers ≤ x.
fn coefficients(x: u64, mode: CoeffMode, rng: &mut ChaCha8Rng, sieve: &SpfSieve) -> Vec<i8> {
    let mut a = vec![0i8; x as usize + 1];
    for n in (1..=x).step_by(2) {
        let mu = sieve.factorize(n).expect("n > 0").mu();
        if mu == 0 {
            continue;
        }
        a[n as usize] = match mode {
            CoeffMode::Ones => 1,
            CoeffMode::Mobius => mu,
            CoeffMode::RandomSigns => {
                if rng.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
        };
    }
    a
}

/// Σ a_n b_m (n/m) over z < n, m ≤ X with nm ≤ X.
pub fn bilinear_hyperbolic_sum(x: u64, z: u64, mode: CoeffMode, seed: u64, ceiling: u64) -> Result<BilinearResult> {
    if z < 2 || z > x {
        return Err(Error::InvalidArgument(format!("need 2 <= z <= X (X={x}, z={z})")));
    }
    if x > ceiling {
        return Err(Error::CeilingExceeded { bound: x, ceiling });
    }
    let sieve = SpfSieve::new(x);
    let mut rng_a = ChaCha8Rng::seed_from_u64(seed);
    let mut rng_b = ChaCha8Rng::seed_from_u64(seed);
    rng_b.set_stream(1);
    let a = coefficients(x, mode, &mut rng_a, &sieve);
    let b = coefficients(x, mode, &mut rng_b, &sieve);
    let mut s: i64 = 0;
    for n in z + 1..=x / (z + 1) {
        let an = a[n as usize] as i64;
        if an == 0 {
            continue;
        }
        for m in z + 1..=x / n {
            let bm = b[m as usize] as i64;
            if bm != 0 {
                s += an * bm * crate::arith::jacobi_u64(n, m) as i64;
            }
        }
    }
    let lx = (x as f64).ln();
    let normalized = (s.unsigned_abs() as f64) * (z as f64).sqrt() / (x as f64 * lx.powi(3));
    Ok(BilinearResult {
        x,
        z,
        mode,
        s,
        normalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use CountVariant::*;

    fn u(q: [u8; 4]) -> Mod8Vector {
        Mod8Vector::new(q).unwrap()
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(reciprocity_exponent([1; 4], [1; 4], R1).unwrap(), 0);
        assert_eq!(reciprocity_exponent([1; 4], [1; 4], R2).unwrap(), 0);
        assert_eq!(reciprocity_exponent([3, 1, 1, 1], [3, 1, 1, 1], R1).unwrap(), 0);
        assert!(reciprocity_exponent([2, 1, 1, 1], [1; 4], R1).is_err());
        for form in [ExponentForm::Hasse, ExponentForm::Twisted] {
            assert_eq!(reciprocity_exponent_in([1; 4], [1; 4], R2, form).unwrap(), 0);
        }
    }

    #[test]
    fn exponent_forms_differ_by_minus_one_over_k2k3() {
        let odds = [1u64, 3, 5, 7, 15];
        for &d0 in &odds {
            for &k0 in &odds {
                for &k1 in &odds {
                    for &k2 in &odds {
                        for &k3 in &odds {
                            let d = [d0, 1, 3, 1];
                            let k = [k0, k1, k2, k3];
                            let h1 = reciprocity_exponent_in(d, k, R1, ExponentForm::Hasse).unwrap();
                            let t1 = reciprocity_exponent_in(d, k, R1, ExponentForm::Twisted).unwrap();
                            assert_eq!(h1, t1);
                            let h = reciprocity_exponent_in(d, k, R2, ExponentForm::Hasse).unwrap();
                            let t = reciprocity_exponent_in(d, k, R2, ExponentForm::Twisted).unwrap();
                            let twist = u8::from(jacobi(-1, (k2 * k3) as i128).unwrap() == -1);
                            assert_eq!(h ^ twist, t, "d={d:?} k={k:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hasse_sigma_r3_is_untwisted() {
        for (m, sg) in admissible_m_sigma(&[1, 2, 3, 5]) {
            let h = sigma_r3_in(m, sg, R2, ExponentForm::Hasse).unwrap();
            assert_eq!(h, sigma_closed_form(3, m, sg, R1).unwrap(), "m={m:?} σ={sg:?}");
        }
    }

    #[test]
    fn twisted_exponent_breaks_the_identity() {
        // (1, 3, −1, −3) is isotropic, but the twisted sign cancels the sum
        let input = CharsumInput::new([1, 1, 1, 3], [1; 4], [0; 4], R2).unwrap();
        let sieve = SpfSieve::new(100);
        assert_eq!(direct_indicator(&input, &sieve).unwrap(), 1);
        assert_eq!(indicator_via_charsum(&input).unwrap(), 1);
        let mut total = 0;
        for (k, l) in splittings(input.s) {
            let kk = Mod8Vector::from_ints(k.map(|x| x as i64)).unwrap();
            let dp = DivisorPair { d: [1; 4], dtilde: [1; 4] };
            let t1 = theta1_in([1; 4], kk, [0; 4], [1; 4], R2, ExponentForm::Twisted).unwrap();
            total += t1 as i64 * theta2(&dp, k, l) as i64;
        }
        assert_eq!(total, 0);
    }

    #[test]
    fn theta_examples() {
        let one = DivisorPair { d: [1; 4], dtilde: [1; 4] };
        assert_eq!(theta2(&one, [1; 4], [1; 4]), 1);
        assert_eq!(theta2(&one, [3, 1, 1, 1], [1, 1, 1, 5]), -1);
        assert_eq!(theta2(&one, [3, 1, 1, 1], [1, 1, 3, 1]), 0);
        assert_eq!(theta1([1; 4], u([1; 4]), [0; 4], [1; 4], R1).unwrap(), 1);
        // f₁ = (3 − 1 + 3 − 1)/4 = 1 and every Jacobi factor is 1
        assert_eq!(theta1([1; 4], u([3, 1, 1, 1]), [1, 0, 0, 0], [1; 4], R1).unwrap(), -1);
        assert_eq!(theta1([1; 4], u([1, 1, 3, 1]), [0; 4], [1, 2, 1, 1], R1).unwrap(), -1);
    }

    #[test]
    fn set_a_dispatch() {
        assert_eq!(set_a([1; 4], [0; 4]).unwrap(), *mod8_set_a1());
        assert_eq!(set_a([1, 2, 1, 1], [0; 4]).unwrap(), *crate::solubility::mod8_set_a2());
        assert_eq!(set_a([1; 4], [0, 0, 1, 0]).unwrap(), mod8_set_a_perm([0, 2, 1, 3]).unwrap());
        assert!(set_a([2, 2, 1, 1], [0; 4]).is_err());
        assert!(set_a([1, 2, 1, 1], [1, 0, 0, 0]).is_err());
        assert!(set_a([1; 4], [1, 1, 0, 0]).is_err());
    }

    #[test]
    fn indicator_trivial_case() {
        let s = SpfSieve::new(1000);
        let inp = CharsumInput::new([1; 4], [1; 4], [0; 4], R1).unwrap();
        assert_eq!(charsum_quadric(&inp).unwrap().coeffs(), [-1, 1, 1, -1]);
        assert_eq!(indicator_via_charsum(&inp).unwrap(), 1);
        assert_eq!(direct_indicator(&inp, &s).unwrap(), 1);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_r2([1; 4], [0; 4], R1).unwrap(), 192);
        assert_eq!(sigma_r2([2, 1, 1, 1], [0; 4], R2).unwrap(), 128);
        assert_eq!(sigma_r3([1; 4], [0; 4], R1).unwrap(), 192);
        assert_eq!(sigma_r3([3, 1, 1, 1], [0; 4], R2).unwrap(), -64);
        assert_eq!(sigma_r3([1; 4], [0, 1, 0, 0], R2).unwrap(), 0);
    }

    #[test]
    fn bilinear_small() {
        let r = bilinear_hyperbolic_sum(100, 50, CoeffMode::Ones, 0, BILINEAR_CEILING).unwrap();
        assert_eq!(r.s, 0);
        assert!(bilinear_hyperbolic_sum(100, 1, CoeffMode::Ones, 0, BILINEAR_CEILING).is_err());
        assert!(bilinear_hyperbolic_sum(200_000, 10, CoeffMode::Ones, 0, BILINEAR_CEILING).is_err());
        let a = bilinear_hyperbolic_sum(2000, 5, CoeffMode::RandomSigns, 7, BILINEAR_CEILING).unwrap();
        let b = bilinear_hyperbolic_sum(2000, 5, CoeffMode::RandomSigns, 7, BILINEAR_CEILING).unwrap();
        assert_eq!(a, b);
    }
}
