//! Momentum-space Coulomb Green function from Schwinger's integral
//! representation.
//!
//! With `E = -X²/(2m)`, `ν = Z m / X` (atomic units), `A = X² + p²`,
//! `A' = X² + p'²` and the bracket
//!
//! ```text
//! B(ρ) = [(1 - ρ²)/ρ] / [X² (p - p')² + (1 - ρ)²/(4ρ) A A']²
//! ```
//!
//! the Green function of `H - E` is
//!
//! ```text
//! G(p, p') = 4π m X³ ∫₀¹ ρ^{-ν} ∂_ρ B(ρ) dρ
//! ```
//!
//! continued analytically in `ν`. The integral comes from the loop around the
//! cut `[0, 1]`: the loop contributes `(1 - e^{-2πiν}) ∫₀¹`, and
//! `i e^{iπν} (1 - e^{-2πiν}) / (2 sin πν) = i (e^{iπν} - e^{-iπν}) / (2 sin πν) = -1`
//! combines with the reversed orientation of `∫₁^{0⁺}` to give `+∫₀¹`.
//! States are normalised to `(2π)³ δ³(p - p')`, so near `E_n` the function
//! behaves as `Σ ψ_nℓm(p) ψ*_nℓm(p') / (E_n - E)`.
//!
//! Writing `s² = 4 X² (p - p')² / (A A')` and `cos γ = 1 - s²/2`, the bracket
//! expands as `B = K Σ_n (n+1) Q_n(cos γ) ρ^{n+1}` with `K = 16/(A A')²`, so
//! `∂_ρ B` has Taylor coefficients `f_n = K (n+1)² Q_n(cos γ)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hydrogen::{psi_momentum, BoundStateIndex, MomentumPoint};
use crate::polynomials::gegenbauer_q_unchecked;
use crate::quadrature::{integrate_adaptive, AdaptiveOptions};
use crate::{dist_sq, dot, Vec3};

/// Default half-width of the band around positive integers where direct
/// evaluation is refused.
pub const DEFAULT_EXCLUSION: f64 = 1e-3;

/// Default number of terms of the series method.
pub const DEFAULT_SERIES_TERMS: usize = 200_000;

/// Energy parameters of the Coulomb problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    energy: f64,
    z: u32,
    mass: f64,
    x: f64,
    nu: f64,
    exclusion: f64,
}

impl CoulombParams {
    /// Parameters for energy `E < 0`, charge `Z ≥ 1` and mass `m > 0`.
    pub fn new(energy: f64, z: u32, mass: f64) -> Result<Self> {
        if !(energy < 0.0) || !energy.is_finite() {
            return Err(Error::domain(format!("energy must be negative and finite, got {energy}")));
        }
        if z == 0 {
            return Err(Error::domain("nuclear charge Z must be at least 1"));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        let x = (-2.0 * mass * energy).sqrt();
        Ok(CoulombParams { energy, z, mass, x, nu: z as f64 * mass / x, exclusion: DEFAULT_EXCLUSION })
    }

    /// Parameters with a prescribed `ν > 0`.
    pub fn from_nu(nu: f64, z: u32, mass: f64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::domain(format!("nu must be positive, got {nu}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        let x = z as f64 * mass / nu;
        Self::new(-x * x / (2.0 * mass), z, mass)
    }

    pub fn with_exclusion(mut self, exclusion: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&exclusion) {
            return Err(Error::domain(format!("exclusion must lie in [0, 0.5), got {exclusion}")));
        }
        self.exclusion = exclusion;
        Ok(self)
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `X = √(-2mE)`.
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn exclusion(&self) -> f64 {
        self.exclusion
    }

    /// Fails if `ν` is within the exclusion band of a positive integer.
    pub fn check_direct(&self) -> Result<()> {
        let nearest = self.nu.round();
        if nearest >= 1.0 && (self.nu - nearest).abs() < self.exclusion {
            return Err(Error::NearIntegerNu { nu: self.nu, nearest: nearest as u32, exclusion: self.exclusion });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenMethod {
    SubtractedQuadrature,
    RhoSeries,
}

impl GreenMethod {
    pub fn name(&self) -> &'static str {
        match self {
            GreenMethod::SubtractedQuadrature => "subtracted_quadrature",
            GreenMethod::RhoSeries => "rho_series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEvalReport {
    pub value: f64,
    pub method: GreenMethod,
    /// Integrand evaluations for the quadrature, summed terms for the series.
    pub terms_or_nodes: usize,
    pub est_error: f64,
}

/// The bracket `B(ρ)` for `ρ ∈ (0, 1]`.
pub fn schwinger_bracket(rho: f64, p: &Vec3, p2: &Vec3, x: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain(format!("schwinger rho must lie in (0, 1], got {rho}")));
    }
    if !(x > 0.0) {
        return Err(Error::domain(format!("X must be positive, got {x}")));
    }
    let g = Geometry::new(p, p2, x);
    let den = g.denominator(rho);
    if den == 0.0 {
        return Err(Error::Singular);
    }
    Ok((1.0 - rho * rho) / rho / (den * den))
}

/// Geometry shared by both evaluation methods.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    xq2: f64,
    aa: f64,
    /// `K = 16/(A A')²`.
    k: f64,
    /// `cos γ`.
    c: f64,
    gamma: f64,
}

impl Geometry {
    fn new(p: &Vec3, p2: &Vec3, x: f64) -> Self {
        let x2 = x * x;
        let q2 = dist_sq(p, p2);
        let aa = (x2 + dot(p, p)) * (x2 + dot(p2, p2));
        let s = (4.0 * x2 * q2 / aa).sqrt();
        let gamma = 2.0 * (0.5 * s).min(1.0).asin();
        Geometry { xq2: x2 * q2, aa, k: 16.0 / (aa * aa), c: 1.0 - 0.5 * s * s, gamma }
    }

    fn denominator(&self, rho: f64) -> f64 {
        self.xq2 + (1.0 - rho).powi(2) / (4.0 * rho) * self.aa
    }

    /// `∂_ρ B` from the closed form.
    fn bracket_derivative(&self, rho: f64) -> f64 {
        let num = (1.0 - rho * rho) / rho;
        let dnum = -1.0 / (rho * rho) - 1.0;
        let den = self.denominator(rho);
        let dden = self.aa * (rho * rho - 1.0) / (4.0 * rho * rho);
        dnum / (den * den) - 2.0 * num * dden / (den * den * den)
    }

    /// Taylor coefficient `f_n` of `∂_ρ B` at `ρ = 0`.
    fn taylor(&self, n: usize) -> f64 {
        let m = (n + 1) as f64;
        self.k * m * m * gegenbauer_q_unchecked(n, self.c)
    }
}

fn validate_points(p: &Vec3, p2: &Vec3) -> Result<()> {
    if !p.iter().chain(p2.iter()).all(|c| c.is_finite()) {
        return Err(Error::domain("momenta must be finite"));
    }
    let scale = dot(p, p).max(dot(p2, p2));
    if dist_sq(p, p2) <= 1e-28 * scale || dist_sq(p, p2) == 0.0 {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Tolerance and evaluation budget of [`coulomb_g_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Taylor terms subtracted at `ρ = 0`; `None` means `ceil(ν) + 2`.
    pub subtraction_order: Option<usize>,
    /// Relative tolerance of the remainder integral.
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { subtraction_order: None, rel_tol: 1e-11, max_intervals: 4000 }
    }
}

/// `G(p, p')` by subtracting `K` Taylor terms of `∂_ρ B` at `ρ = 0`,
/// integrating them analytically as `Σ f_k/(k + 1 - ν)` and the remainder
/// `∫₀¹ ρ^{-ν} [∂_ρ B - Σ_{k<K} f_k ρ^k] dρ` by adaptive Gauss-Kronrod.
///
/// Below `ρ = 1/4` the remainder is summed from its own Taylor series to
/// avoid cancellation.
pub fn coulomb_g_quadrature(p: &Vec3, p2: &Vec3, params: &CoulombParams, opts: QuadratureOptions) -> Result<GreenEvalReport> {
    params.check_direct()?;
    validate_points(p, p2)?;
    let nu = params.nu;
    let min_order = nu.ceil() as usize;
    let order = opts.subtraction_order.unwrap_or(min_order + 2);
    if order < min_order {
        return Err(Error::domain(format!("subtraction order {order} is below ceil(nu) = {min_order}")));
    }
    let g = Geometry::new(p, p2, params.x);
    let coeffs: Vec<f64> = (0..order).map(|k| g.taylor(k)).collect();

    let mut analytic = 0.0;
    let mut analytic_abs = 0.0;
    for (k, f) in coeffs.iter().enumerate() {
        let term = f / (k as f64 + 1.0 - nu);
        analytic += term;
        analytic_abs += term.abs();
    }

    let remainder = |rho: f64| -> f64 {
        let r = if rho < 0.25 {
            let mut sum = 0.0;
            let mut power = rho.powi(order as i32);
            let mut k = order;
            loop {
                let term = g.taylor(k) * power;
                sum += term;
                if term.abs() <= 1e-18 * sum.abs() || power == 0.0 {
                    break;
                }
                power *= rho;
                k += 1;
            }
            sum
        } else {
            let poly = coeffs.iter().rev().fold(0.0, |acc, f| acc * rho + f);
            g.bracket_derivative(rho) - poly
        };
        rho.powf(-nu) * r
    };

    let scale = g.k * (1.0 + nu / (1.0 - g.c).max(f64::MIN_POSITIVE));
    let tol = opts.rel_tol * scale.max(analytic.abs());
    let est = integrate_adaptive(remainder, 0.0, 1.0, AdaptiveOptions { tol, max_intervals: opts.max_intervals })?;

    let prefactor = 4.0 * PI * params.mass * params.x.powi(3);
    let rounding = 64.0 * f64::EPSILON * (analytic_abs + est.value.abs() + scale);
    Ok(GreenEvalReport {
        value: prefactor * (analytic + est.value),
        method: GreenMethod::SubtractedQuadrature,
        terms_or_nodes: est.evaluations,
        est_error: prefactor * (est.est_error + rounding),
    })
}

/// `G(p, p')` from the Sturmian-type sum `Σ_n f_n/(n + 1 - ν)`.
///
/// The sum diverges as written, so `(n+1)²/(n+1-ν)` is split into
/// `(n+1) + ν + ν²/(n+1-ν)`; the first two pieces have the Abel sums `0` and
/// `ν/(2(1 - cos γ))`, and with `Q_n(cos γ) = sin((n+1)γ)/sin γ` the last one
/// becomes
///
/// ```text
/// Σ_k sin(kγ)/(k - ν) = (π - γ)/2 + ν Σ_k sin(kγ)/(k (k - ν)).
/// ```
///
/// The final sum converges like `1/N²`; its tail past `N` is bounded by
/// `1/((N+1)(N+1-ν) sin(γ/2))`.
pub fn coulomb_g_series(p: &Vec3, p2: &Vec3, params: &CoulombParams, n_max: usize) -> Result<GreenEvalReport> {
    params.check_direct()?;
    validate_points(p, p2)?;
    let nu = params.nu;
    if (n_max as f64) + 1.0 <= nu {
        return Err(Error::domain(format!("need n_max + 1 > nu, got n_max = {n_max}, nu = {nu}")));
    }
    let g = Geometry::new(p, p2, params.x);
    let gamma = g.gamma;

    // Neumaier summation of Σ_{k=1}^{N} sin(kγ)/(k(k-ν))
    let (mut sum, mut comp, mut abs_sum) = (0.0f64, 0.0f64, 0.0f64);
    for k in 1..=n_max {
        let kf = k as f64;
        let term = (kf * gamma).sin() / (kf * (kf - nu));
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();
    }
    let t_sum = sum + comp;
    let n1 = (n_max + 1) as f64;
    let tail = 1.0 / (n1 * (n1 - nu) * (0.5 * gamma).sin());

    let sin_gamma = gamma.sin();
    let head = 0.5 * (PI - gamma) + nu * t_sum;
    let s = head / sin_gamma;
    let one_minus_c = 2.0 * (0.5 * gamma).sin().powi(2);
    let integral = g.k * (nu / (2.0 * one_minus_c) + nu * nu * s);

    let prefactor = 4.0 * PI * params.mass * params.x.powi(3);
    let rounding = 16.0 * f64::EPSILON * (nu * abs_sum + PI) + 4.0 * f64::EPSILON * n_max as f64 * gamma * nu * abs_sum;
    let err_integral = g.k * (nu * nu * (nu * tail + rounding) / sin_gamma.abs() + 8.0 * f64::EPSILON * integral.abs() / g.k);
    Ok(GreenEvalReport {
        value: prefactor * integral,
        method: GreenMethod::RhoSeries,
        terms_or_nodes: n_max,
        est_error: prefactor * err_integral,
    })
}

/// First Born term `16π Z m² / ((p - p')² A A')`, the `ν → 0` limit of `G`
/// at fixed `X`.
pub fn born_term(p: &Vec3, p2: &Vec3, params: &CoulombParams) -> Result<f64> {
    validate_points(p, p2)?;
    let x2 = params.x * params.x;
    let aa = (x2 + dot(p, p)) * (x2 + dot(p2, p2));
    Ok(16.0 * PI * params.z as f64 * params.mass * params.mass / (dist_sq(p, p2) * aa))
}

/// Residue of `G` at the bound-state energy `E_n` compared with the
/// projector `Σ_ℓm ψ_nℓm(p) ψ*_nℓm(p')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueCheck {
    pub n: u32,
    /// `lim (E_n - E) G(p, p'; E)`, extrapolated.
    pub lhs: f64,
    pub lhs_est_error: f64,
    /// `Σ_ℓm ψ_nℓm(p) ψ*_nℓm(p')`.
    pub rhs: f64,
    pub ratio: f64,
}

fn residue_sample(n: u32, nu: f64, p: &Vec3, p2: &Vec3, z: u32) -> Result<f64> {
    let params = CoulombParams::from_nu(nu, z, 1.0)?;
    let g = coulomb_g_series(p, p2, &params, DEFAULT_SERIES_TERMS)?;
    let zf = z as f64;
    let e_n = -zf * zf / (2.0 * (n * n) as f64);
    Ok((e_n - params.energy) * g.value)
}

/// Estimates `lim_{E → E_n} (E_n - E) G(p, p'; E)` from symmetric pairs
/// `ν = n ± ε` (`ε = 0.02, 0.01`) followed by one Richardson step, and
/// compares it with the bound-state projector (unit mass).
pub fn residue_check(n: u32, p: &Vec3, p2: &Vec3, z: u32) -> Result<ResidueCheck> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if z == 0 {
        return Err(Error::domain("nuclear charge Z must be at least 1"));
    }
    let nf = n as f64;
    let symmetric = |eps: f64| -> Result<f64> {
        Ok(0.5 * (residue_sample(n, nf + eps, p, p2, z)? + residue_sample(n, nf - eps, p, p2, z)?))
    };
    let coarse = symmetric(0.02)?;
    let fine = symmetric(0.01)?;
    let lhs = (4.0 * fine - coarse) / 3.0;

    let a = MomentumPoint::new(*p)?;
    let b = MomentumPoint::new(*p2)?;
    let mut rhs = 0.0;
    for l in 0..n {
        for m in -(l as i32)..=l as i32 {
            let idx = BoundStateIndex::new(n, l, m)?;
            rhs += (psi_momentum(idx, &a, z)? * psi_momentum(idx, &b, z)?.conj()).re;
        }
    }
    Ok(ResidueCheck { n, lhs, lhs_est_error: (lhs - fine).abs(), rhs, ratio: lhs / rhs })
}

/// Extrapolated `lim_{ν → N} (N - ν) G` from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleLimit {
    pub pole: u32,
    pub limit: f64,
    pub est_error: f64,
    /// `(N - ν) G` at the sample points `ν = N - δ`.
    pub samples: [(f64, f64); 4],
}

/// `(N - ν) G(p, p')` sampled at `δ = N - ν ∈ {0.08, 0.04, 0.02, 0.01}`
/// (unit mass) and extrapolated to `δ = 0` by repeated Richardson steps.
pub fn pole_limit(pole: u32, p: &Vec3, p2: &Vec3, z: u32) -> Result<PoleLimit> {
    if pole == 0 {
        return Err(Error::domain("pole index must be at least 1"));
    }
    let deltas = [0.08, 0.04, 0.02, 0.01];
    let mut samples = [(0.0, 0.0); 4];
    for (slot, &d) in samples.iter_mut().zip(&deltas) {
        let params = CoulombParams::from_nu(pole as f64 - d, z, 1.0)?;
        *slot = (d, d * coulomb_g_series(p, p2, &params, DEFAULT_SERIES_TERMS)?.value);
    }
    let mut table: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mut factor = 2.0;
    let mut previous = table[table.len() - 1];
    while table.len() > 1 {
        previous = table[table.len() - 1];
        table = table.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        factor *= 2.0;
    }
    Ok(PoleLimit { pole, limit: table[0], est_error: (table[0] - previous).abs(), samples })
}

/// Exact `lim_{ν → N} (N - ν) G = 4π m X³ K N² Q_{N-1}(cos γ)` at `X = Z m / N`
/// (unit mass).
pub fn pole_limit_exact(pole: u32, p: &Vec3, p2: &Vec3, z: u32) -> Result<f64> {
    if pole == 0 {
        return Err(Error::domain("pole index must be at least 1"));
    }
    validate_points(p, p2)?;
    let x = z as f64 / pole as f64;
    let g = Geometry::new(p, p2, x);
    Ok(4.0 * PI * x.powi(3) * g.taylor((pole - 1) as usize))
}
