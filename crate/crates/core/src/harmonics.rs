//! Spherical harmonics on S² and S³, coordinate maps, and the geometry of the
//! unit 3-sphere embedded in four dimensions.
//!
//! Conventions:
//!
//! * `Y_ℓm(θ, φ) = √((2ℓ+1)/(4π) · (ℓ-m)!/(ℓ+m)!) P_ℓ^m(cos θ) e^{imφ}` for
//!   `m ≥ 0`, with the Condon-Shortley phase inside `P_ℓ^m`, and
//!   `Y_{ℓ,-m} = (-1)^m Y*_ℓm`.
//! * `Y_nℓm(χ, θ, φ) = √(2/π) √((n+1)(n-ℓ)!/(n+ℓ+1)!) Q_n^ℓ(cos χ) Y_ℓm(θ, φ)`.
//! * Four-dimensional points are `(x₁, x₂, x₃, x₄) = r (sin χ sin θ cos φ,
//!   sin χ sin θ sin φ, sin χ cos θ, cos χ)`; the S³ measure is
//!   `sin²χ sin θ dχ dθ dφ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::{assoc_gegenbauer_q, assoc_legendre_p, gegenbauer_q, COEFFICIENT_TABLE_MAX_DEGREE};
use crate::{dot, Vec3, Vec4};

pub type ComplexValue = Complex64;

/// `(n, ℓ, m)` label of a harmonic. In three dimensions `n` is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumIndex {
    pub n: usize,
    pub l: usize,
    pub m: i32,
}

impl QuantumIndex {
    pub fn new_3d(l: usize, m: i32) -> Result<Self> {
        check_lm(l, m)?;
        Ok(QuantumIndex { n: 0, l, m })
    }

    pub fn new_4d(n: usize, l: usize, m: i32) -> Result<Self> {
        check_lm(l, m)?;
        if l > n {
            return Err(Error::domain(format!("l = {l} exceeds n = {n}")));
        }
        Ok(QuantumIndex { n, l, m })
    }

    /// All `(ℓ, m)` with `ℓ ≤ lmax`, ordered by `ℓ` then `m`.
    pub fn all_3d(lmax: usize) -> Vec<QuantumIndex> {
        (0..=lmax)
            .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| QuantumIndex { n: 0, l, m }))
            .collect()
    }

    /// All `(n, ℓ, m)` with `n ≤ nmax`, ordered lexicographically.
    pub fn all_4d(nmax: usize) -> Vec<QuantumIndex> {
        (0..=nmax)
            .flat_map(|n| {
                (0..=n).flat_map(move |l| (-(l as i32)..=l as i32).map(move |m| QuantumIndex { n, l, m }))
            })
            .collect()
    }
}

fn check_lm(l: usize, m: i32) -> Result<()> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(())
}

/// `(r, θ, φ)` with `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spherical3 {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

/// `(ξ, χ, θ, φ)` with `χ, θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spherical4 {
    pub xi: f64,
    pub chi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Spherical4 {
    /// Point on the unit sphere with the given angles.
    pub fn unit(chi: f64, theta: f64, phi: f64) -> Self {
        Spherical4 { xi: 1.0, chi, theta, phi }
    }

    /// Unit 4-vector in the direction of the point.
    pub fn direction(&self) -> Vec4 {
        spherical4_to_cart(&Spherical4 { xi: 1.0, ..*self })
    }
}

fn wrap_phi(phi: f64) -> f64 {
    if phi < 0.0 {
        let wrapped = phi + 2.0 * PI;
        // -0 and tiny negatives must not round up to 2π
        if wrapped >= 2.0 * PI {
            0.0
        } else {
            wrapped
        }
    } else {
        phi
    }
}

/// Polar and azimuthal angle of a 3-vector, degenerate axes mapped to 0.
fn polar_angles(v: &Vec3) -> (f64, f64) {
    let rho = v[0].hypot(v[1]);
    if rho == 0.0 {
        let theta = if v[2] < 0.0 { PI } else { 0.0 };
        return (theta, 0.0);
    }
    (rho.atan2(v[2]), wrap_phi(v[1].atan2(v[0])))
}

pub fn cart_to_spherical3(v: Vec3) -> Spherical3 {
    let r = crate::norm(&v);
    if r == 0.0 {
        return Spherical3 { r, theta: 0.0, phi: 0.0 };
    }
    let (theta, phi) = polar_angles(&v);
    Spherical3 { r, theta, phi }
}

pub fn spherical3_to_cart(s: &Spherical3) -> Vec3 {
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    [s.r * st * cp, s.r * st * sp, s.r * ct]
}

pub fn cart_to_spherical4(v: Vec4) -> Spherical4 {
    let xi = crate::norm(&v);
    if xi == 0.0 {
        return Spherical4 { xi, chi: 0.0, theta: 0.0, phi: 0.0 };
    }
    let spatial = [v[0], v[1], v[2]];
    let rho = crate::norm(&spatial);
    if rho == 0.0 {
        let chi = if v[3] < 0.0 { PI } else { 0.0 };
        return Spherical4 { xi, chi, theta: 0.0, phi: 0.0 };
    }
    let chi = rho.atan2(v[3]);
    let (theta, phi) = polar_angles(&spatial);
    Spherical4 { xi, chi, theta, phi }
}

pub fn spherical4_to_cart(s: &Spherical4) -> Vec4 {
    let (sc, cc) = s.chi.sin_cos();
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    [s.xi * cp * st * sc, s.xi * sp * st * sc, s.xi * ct * sc, s.xi * cc]
}

/// `(ℓ-m)!/(ℓ+m)!` for `0 ≤ m ≤ ℓ`.
fn factorial_ratio(l: usize, m: usize) -> f64 {
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// `Y_ℓm(θ, 0)` for `m ≥ 0` by the recurrence of the normalised functions,
/// which avoids the overflow of `P_ℓ^m` and `(ℓ+m)!` at high degree.
fn normalized_legendre(l: usize, m: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (0.25 / PI).sqrt();
    for k in 1..=m {
        pmm *= -s * ((2 * k + 1) as f64 / (2 * k) as f64).sqrt();
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut prev = pmm;
    let mut cur = x * ((2 * m + 3) as f64).sqrt() * pmm;
    for k in (m + 2)..=l {
        let kf = k as f64;
        let a = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
        let b = (((kf - 1.0).powi(2) - mf * mf) / (4.0 * (kf - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `√(2/π) √((n+1)(n-ℓ)!/(n+ℓ+1)!) Q^ℓ_n(x)` by a recurrence in `n` on the
/// normalised functions.
fn normalized_gegenbauer(n: usize, l: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut first = 1.0;
    for j in 1..=l {
        first *= -s * (2.0 * (j + 1) as f64 / (2 * j + 1) as f64).sqrt();
    }
    // ratio of consecutive normalisations, degree n = k + ℓ
    let step = |k: usize| {
        let nf = (k + l) as f64;
        ((nf + 1.0) * (nf - l as f64) / (nf * (nf + l as f64 + 1.0))).sqrt()
    };
    let mut prev = 0.0;
    let mut cur = first;
    for k in 1..=(n - l) {
        let kf = k as f64;
        let r = step(k);
        let r_prev = if k >= 2 { step(k - 1) } else { 0.0 };
        let next = r * 2.0 * x * (kf + l as f64) / kf * cur - r * r_prev * (kf + 2.0 * l as f64) / kf * prev;
        prev = cur;
        cur = next;
    }
    (2.0 / PI).sqrt() * cur
}

fn ynlm_radial(n: usize, l: usize, x: f64) -> Result<f64> {
    if n > COEFFICIENT_TABLE_MAX_DEGREE {
        Ok(normalized_gegenbauer(n, l, x))
    } else {
        Ok(ynlm_norm(n, l) * assoc_gegenbauer_q(n, l, x)?)
    }
}

/// Three-dimensional spherical harmonic `Y_ℓm(θ, φ)`.
pub fn ylm(l: usize, m: i32, theta: f64, phi: f64) -> Result<ComplexValue> {
    check_lm(l, m)?;
    let ma = m.unsigned_abs() as usize;
    let x = theta.cos().clamp(-1.0, 1.0);
    let value = if l > COEFFICIENT_TABLE_MAX_DEGREE {
        normalized_legendre(l, ma, x)
    } else {
        ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, ma)).sqrt() * assoc_legendre_p(l, ma, x)?
    };
    let y = Complex64::from_polar(value, ma as f64 * phi);
    if m < 0 {
        let sign = if ma.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(y.conj() * sign)
    } else {
        Ok(y)
    }
}

/// Normalisation `√(2/π) √((n+1)(n-ℓ)!/(n+ℓ+1)!)` of `Y_nℓm`.
fn ynlm_norm(n: usize, l: usize) -> f64 {
    // (n-ℓ)!/(n+ℓ+1)! = 1 / Π_{k=n-ℓ+1}^{n+ℓ+1} k
    let ratio = ((n - l + 1)..=(n + l + 1)).fold(1.0, |acc, k| acc / k as f64);
    ((2.0 / PI) * (n + 1) as f64 * ratio).sqrt()
}

/// Four-dimensional spherical harmonic `Y_nℓm(χ, θ, φ)`.
pub fn ynlm(n: usize, l: usize, m: i32, chi: f64, theta: f64, phi: f64) -> Result<ComplexValue> {
    QuantumIndex::new_4d(n, l, m)?;
    Ok(ylm(l, m, theta, phi)? * ynlm_radial(n, l, chi.cos().clamp(-1.0, 1.0))?)
}

/// Values of all `Y_ℓm` with `ℓ ≤ lmax` at one direction.
#[derive(Debug, Clone)]
pub struct HarmonicTable3 {
    lmax: usize,
    values: Vec<ComplexValue>,
}

impl HarmonicTable3 {
    pub fn new(lmax: usize, theta: f64, phi: f64) -> Result<Self> {
        let mut values = Vec::with_capacity((lmax + 1) * (lmax + 1));
        for l in 0..=lmax {
            for m in -(l as i32)..=l as i32 {
                values.push(ylm(l, m, theta, phi)?);
            }
        }
        Ok(HarmonicTable3 { lmax, values })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn get(&self, l: usize, m: i32) -> ComplexValue {
        self.values[((l * l + l) as isize + m as isize) as usize]
    }

    /// `Σ_m Y_ℓm(self) Y*_ℓm(other)`.
    pub fn shell_sum(&self, other: &HarmonicTable3, l: usize) -> ComplexValue {
        let start = l * l;
        self.values[start..start + 2 * l + 1]
            .iter()
            .zip(&other.values[start..start + 2 * l + 1])
            .map(|(a, b)| a * b.conj())
            .sum()
    }
}

/// Values of all `Y_nℓm` with `n ≤ nmax` at one point of S³.
#[derive(Debug, Clone)]
pub struct HarmonicTable4 {
    nmax: usize,
    values: Vec<ComplexValue>,
}

impl HarmonicTable4 {
    pub fn new(nmax: usize, s: &Spherical4) -> Result<Self> {
        let angular = HarmonicTable3::new(nmax, s.theta, s.phi)?;
        let x = s.chi.cos().clamp(-1.0, 1.0);
        let mut values = Vec::with_capacity(Self::offset(nmax + 1));
        for n in 0..=nmax {
            for l in 0..=n {
                let radial = ynlm_radial(n, l, x)?;
                for m in -(l as i32)..=l as i32 {
                    values.push(angular.get(l, m) * radial);
                }
            }
        }
        Ok(HarmonicTable4 { nmax, values })
    }

    fn offset(n: usize) -> usize {
        n * (n + 1) * (2 * n + 1) / 6
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn get(&self, n: usize, l: usize, m: i32) -> ComplexValue {
        self.values[((Self::offset(n) + l * l + l) as isize + m as isize) as usize]
    }

    /// `Σ_{ℓm} Y_nℓm(self) Y*_nℓm(other)` summed term by term.
    pub fn shell_sum(&self, other: &HarmonicTable4, n: usize) -> ComplexValue {
        let range = Self::offset(n)..Self::offset(n + 1);
        self.values[range.clone()]
            .iter()
            .zip(&other.values[range])
            .map(|(a, b)| a * b.conj())
            .sum()
    }
}

/// `|Σ_ℓm Y_nℓm(s) Y*_nℓm(s') - (n+1)/(2π²) Q_n(x·x')|` for the unit vectors
/// `x`, `x'` of the two points.
pub fn addition_theorem_residual(n: usize, s: &Spherical4, s2: &Spherical4) -> Result<f64> {
    let a = HarmonicTable4::new(n, s)?;
    let b = HarmonicTable4::new(n, s2)?;
    let lhs = a.shell_sum(&b, n);
    let c = dot(&s.direction(), &s2.direction()).clamp(-1.0, 1.0);
    let rhs = (n + 1) as f64 / (2.0 * PI * PI) * gegenbauer_q(n, c)?;
    Ok((lhs - rhs).norm())
}

/// Area-element factor `1/|ξ₀|` of S³ in the chart `(ξ_x, ξ_y, ξ_z)`, with
/// `ξ₀ = √(1 - ξ_x² - ξ_y² - ξ_z²)`.
pub fn surface_element_jacobian(spatial: Vec3) -> Result<f64> {
    let r2 = dot(&spatial, &spatial);
    if !(r2 < 1.0) {
        return Err(Error::domain(format!("|ξ| must be below 1 (equator excluded), got |ξ|² = {r2}")));
    }
    Ok(1.0 / (1.0 - r2).sqrt())
}

/// Modulus of the 4-vector obtained by expanding
///
/// ```text
/// | e_x   e_y   e_z   e_a  |
/// | ∂x/∂t₁ ∂y/∂t₁ ∂z/∂t₁ ∂a/∂t₁ |
/// | ∂x/∂t₂ ...                  |
/// | ∂x/∂t₃ ...                  |
/// ```
///
/// along its symbolic first row.
pub fn embed_element_determinant(partials: &[[f64; 4]; 3]) -> f64 {
    let mut normal = [0.0; 4];
    for (j, slot) in normal.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let minor = |r: usize, c: usize| partials[r][cols[c]];
        let det = minor(0, 0) * (minor(1, 1) * minor(2, 2) - minor(1, 2) * minor(2, 1))
            - minor(0, 1) * (minor(1, 0) * minor(2, 2) - minor(1, 2) * minor(2, 0))
            + minor(0, 2) * (minor(1, 0) * minor(2, 1) - minor(1, 1) * minor(2, 0));
        *slot = if j % 2 == 0 { det } else { -det };
    }
    crate::norm(&normal)
}

/// Partial derivatives `∂(x, y, z, a)/∂(t₁, t₂, t₃)` of the chart
/// `x = t₁, y = t₂, z = t₃, a = √(1 - t²)` of the upper hemisphere of S³.
pub fn sphere_chart_partials(spatial: Vec3) -> Result<[[f64; 4]; 3]> {
    let a = 1.0 / surface_element_jacobian(spatial)?;
    let mut rows = [[0.0; 4]; 3];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1.0;
        row[3] = -spatial[i] / a;
    }
    Ok(rows)
}
