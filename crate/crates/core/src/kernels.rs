//! Free-space Green functions of `∇²g = δ` in two, three and four dimensions
//! and their truncated radial-angular expansions.
//!
//! Every expansion returns an a priori tail bound: a geometric majorant of the
//! dropped terms built from `|cos| ≤ 1`, `|Σ_m Y Y*| ≤ (2ℓ+1)/(4π)` and
//! `|Q_n| ≤ n + 1`, plus a rounding allowance of [`ROUNDING_RELATIVE`] times
//! the same majorant applied to the whole series.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::harmonics::{
    cart_to_spherical3, cart_to_spherical4, Spherical4, HarmonicTable3, HarmonicTable4,
};
use crate::polynomials::gegenbauer_q;
use crate::quadrature::{periodic_trapezoid, sphere_rule};
use crate::{dist_sq, dot, norm, Vec2, Vec3, Vec4};

/// Relative rounding allowance included in every tail bound. It does not
/// depend on the order, so the bound stays nonincreasing in the order.
pub const ROUNDING_RELATIVE: f64 = 1e-13;

/// Length scale `L > 0` of the two-dimensional logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale2D(f64);

impl Scale2D {
    pub fn new(length: f64) -> Result<Self> {
        if length > 0.0 && length.is_finite() {
            Ok(Scale2D(length))
        } else {
            Err(Error::domain(format!("scale L must be positive, got {length}")))
        }
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

impl Default for Scale2D {
    fn default() -> Self {
        Scale2D(1.0)
    }
}

/// Truncated series value with its truncation order and tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResult {
    pub value: f64,
    pub order: usize,
    pub tail_bound: f64,
}

/// Smaller and larger of two radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPair {
    pub lesser: f64,
    pub greater: f64,
    pub ratio: f64,
}

impl RadialPair {
    /// Rejects equal radii, for which the expansions have ratio 1.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let (lesser, greater) = if a <= b { (a, b) } else { (b, a) };
        if !(lesser >= 0.0) || !greater.is_finite() {
            return Err(Error::domain(format!("radii must be finite and non-negative, got {a}, {b}")));
        }
        if greater - lesser <= 1e-12 * greater || greater == 0.0 {
            return Err(Error::CoincidentModulus { radius: greater });
        }
        Ok(RadialPair { lesser, greater, ratio: lesser / greater })
    }
}

fn check_distinct<const N: usize>(a: &[f64; N], b: &[f64; N]) -> Result<f64> {
    let d2 = dist_sq(a, b);
    if d2 == 0.0 {
        return Err(Error::Singular);
    }
    if !d2.is_finite() {
        return Err(Error::domain("coordinates must be finite"));
    }
    Ok(d2)
}

/// `g(ρ, ρ') = ln(|ρ - ρ'| / L) / (2π)`.
pub fn g2_closed(rho: Vec2, rho2: Vec2, scale: Scale2D) -> Result<f64> {
    let d2 = check_distinct(&rho, &rho2)?;
    Ok((d2.sqrt() / scale.get()).ln() / (2.0 * PI))
}

/// The two pieces of the 2D expansion: the `m = 0` logarithm and the
/// truncated sum over `m ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2Terms {
    /// `ln(ρ_> / L) / (2π)`.
    pub monopole: f64,
    /// `-Σ_{m=1}^{M} (ρ_</ρ_>)^m cos(m(φ - φ')) / (2π m)`.
    pub angular: f64,
    pub order: usize,
    pub tail_bound: f64,
}

pub fn g2_terms(rho: Vec2, rho2: Vec2, scale: Scale2D, order: usize) -> Result<G2Terms> {
    check_distinct(&rho, &rho2)?;
    let radii = RadialPair::new(norm(&rho), norm(&rho2))?;
    let dphi = rho[1].atan2(rho[0]) - rho2[1].atan2(rho2[0]);
    let mut angular = 0.0;
    let mut power = 1.0;
    for m in 1..=order {
        power *= radii.ratio;
        angular -= power * (m as f64 * dphi).cos() / m as f64;
    }
    let t = radii.ratio;
    let m1 = (order + 1) as f64;
    let monopole = (radii.greater / scale.get()).ln() / (2.0 * PI);
    let magnitude = monopole.abs() - (1.0 - t).ln() / (2.0 * PI);
    Ok(G2Terms {
        monopole,
        angular: angular / (2.0 * PI),
        order,
        tail_bound: t.powi(order as i32 + 1) / (m1 * (1.0 - t)) / (2.0 * PI) + ROUNDING_RELATIVE * magnitude,
    })
}

/// `[ln(ρ_>/L) - Σ_{m=1}^{M} (1/m)(ρ_</ρ_>)^m cos(m(φ-φ'))] / (2π)`.
pub fn g2_expansion(rho: Vec2, rho2: Vec2, scale: Scale2D, order: usize) -> Result<ExpansionResult> {
    let t = g2_terms(rho, rho2, scale, order)?;
    Ok(ExpansionResult { value: t.monopole + t.angular, order, tail_bound: t.tail_bound })
}

/// `g(r, r') = -1 / (4π |r - r'|)`.
pub fn g3_closed(r: Vec3, r2: Vec3) -> Result<f64> {
    let d2 = check_distinct(&r, &r2)?;
    Ok(-1.0 / (4.0 * PI * d2.sqrt()))
}

/// `-Σ_{ℓ≤L} Σ_m r_<^ℓ / ((2ℓ+1) r_>^{ℓ+1}) Y_ℓm(θ, φ) Y*_ℓm(θ', φ')`.
pub fn g3_expansion(r: Vec3, r2: Vec3, lmax: usize) -> Result<ExpansionResult> {
    let a = cart_to_spherical3(r);
    let b = cart_to_spherical3(r2);
    let radii = RadialPair::new(a.r, b.r)?;
    let ya = HarmonicTable3::new(lmax, a.theta, a.phi)?;
    let yb = HarmonicTable3::new(lmax, b.theta, b.phi)?;
    // Y_00 Y*_00 = 1/(4π)
    let mut value = -1.0 / (4.0 * PI * radii.greater);
    let mut radial = radii.ratio / radii.greater;
    for l in 1..=lmax {
        value -= radial / (2 * l + 1) as f64 * ya.shell_sum(&yb, l).re;
        radial *= radii.ratio;
    }
    let t = radii.ratio;
    let magnitude = 1.0 / ((1.0 - t) * 4.0 * PI * radii.greater);
    let tail_bound = (t.powi(lmax as i32 + 1) + ROUNDING_RELATIVE) * magnitude;
    Ok(ExpansionResult { value, order: lmax, tail_bound })
}

/// `g(ξ, ξ') = -1 / (4π² (ξ - ξ')²)`.
pub fn g4_closed(xi: Vec4, xi2: Vec4) -> Result<f64> {
    let d2 = check_distinct(&xi, &xi2)?;
    Ok(-1.0 / (4.0 * PI * PI * d2))
}

fn g4_tail(ratio: f64, greater: f64, nmax: usize) -> f64 {
    // Σ_{n>N} (n+1) tⁿ = t^{N+1} ((N+2) - (N+1) t) / (1-t)²
    let t = ratio;
    let n = nmax as f64;
    let magnitude = 1.0 / ((1.0 - t) * (1.0 - t) * 4.0 * PI * PI * greater * greater);
    (t.powi(nmax as i32 + 1) * ((n + 2.0) - (n + 1.0) * t) + ROUNDING_RELATIVE) * magnitude
}

/// `-Σ_{n≤N} Σ_{ℓm} ξ_<ⁿ / (2(n+1) ξ_>^{n+2}) Y_nℓm(ξ̂) Y*_nℓm(ξ̂')`, summed
/// term by term over the harmonics.
pub fn g4_expansion(xi: Vec4, xi2: Vec4, nmax: usize) -> Result<ExpansionResult> {
    let a = cart_to_spherical4(xi);
    let b = cart_to_spherical4(xi2);
    let radii = RadialPair::new(a.xi, b.xi)?;
    let ya = HarmonicTable4::new(nmax, &a)?;
    let yb = HarmonicTable4::new(nmax, &b)?;
    let mut value = 0.0;
    let mut radial = 1.0 / (radii.greater * radii.greater);
    for n in 0..=nmax {
        value -= radial / (2 * (n + 1)) as f64 * ya.shell_sum(&yb, n).re;
        radial *= radii.ratio;
    }
    Ok(ExpansionResult { value, order: nmax, tail_bound: g4_tail(radii.ratio, radii.greater, nmax) })
}

/// Same series as [`g4_expansion`] with each shell collapsed by the addition
/// theorem to `(n+1)/(2π²) Q_n(cos γ)`.
pub fn g4_expansion_collapsed(xi: Vec4, xi2: Vec4, nmax: usize) -> Result<ExpansionResult> {
    let ra = norm(&xi);
    let rb = norm(&xi2);
    let radii = RadialPair::new(ra, rb)?;
    let cos_gamma = if ra == 0.0 || rb == 0.0 { 1.0 } else { (dot(&xi, &xi2) / (ra * rb)).clamp(-1.0, 1.0) };
    let mut value = 0.0;
    let mut radial = 1.0 / (radii.greater * radii.greater);
    for n in 0..=nmax {
        value -= radial * gegenbauer_q(n, cos_gamma)? / (4.0 * PI * PI);
        radial *= radii.ratio;
    }
    Ok(ExpansionResult { value, order: nmax, tail_bound: g4_tail(radii.ratio, radii.greater, nmax) })
}

/// Outward flux of `∇g` through a circle of radius `eps` about `center`,
/// by the `nodes`-point periodic trapezoid rule. Equals 1 for any `eps`.
pub fn flux_check_2d(center: Vec2, eps: f64, nodes: usize) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if !center.iter().all(|c| c.is_finite()) {
        return Err(Error::domain("center must be finite"));
    }
    if nodes < 8 {
        return Err(Error::domain(format!("need at least 8 nodes, got {nodes}")));
    }
    let rule = periodic_trapezoid(nodes);
    Ok(rule.integrate(|phi| {
        let (s, c) = phi.sin_cos();
        let d = [eps * c, eps * s];
        // ∇g = (ρ - ρ') / (2π |ρ - ρ'|²)
        let grad_dot_normal = (d[0] * c + d[1] * s) / (2.0 * PI * dot(&d, &d));
        grad_dot_normal * eps
    }))
}

/// Outward flux of `∇g₃` through a sphere of radius `eps` about `center`,
/// integrated with the S² product rule.
pub fn flux_check_3d(center: Vec3, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if !center.iter().all(|c| c.is_finite()) {
        return Err(Error::domain("center must be finite"));
    }
    let rule = sphere_rule(2, 2)?;
    Ok(rule.integrate(|a| {
        let (st, ct) = a.theta.sin_cos();
        let (sp, cp) = a.phi.sin_cos();
        let normal = [st * cp, st * sp, ct];
        let diff = normal.map(|x| eps * x);
        let r2 = dot(&diff, &diff);
        // ∇g = (r - r') / (4π |r - r'|³)
        dot(&diff, &normal) / (4.0 * PI * r2 * r2.sqrt()) * eps * eps
    }))
}

/// Residual of
/// `1/(4π²) [(1-ρ)² + ρ(ξ-ξ')²]⁻¹ = Σ_n ρⁿ/(2(n+1)) Σ_ℓm Y_nℓm(ξ) Y*_nℓm(ξ')`
/// for unit points `s`, `s2` and `0 < ρ < 1`, truncated at `nmax`.
pub fn rho_expansion_identity_residual(rho: f64, s: &Spherical4, s2: &Spherical4, nmax: usize) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("rho must lie in (0, 1), got {rho}")));
    }
    let u = s.direction();
    let v = s2.direction();
    let lhs = 1.0 / (4.0 * PI * PI * ((1.0 - rho).powi(2) + rho * dist_sq(&u, &v)));
    let ya = HarmonicTable4::new(nmax, &Spherical4 { xi: 1.0, ..*s })?;
    let yb = HarmonicTable4::new(nmax, &Spherical4 { xi: 1.0, ..*s2 })?;
    let mut rhs = num_complex::Complex64::new(0.0, 0.0);
    let mut power = 1.0;
    for n in 0..=nmax {
        rhs += ya.shell_sum(&yb, n) * (power / (2 * (n + 1)) as f64);
        power *= rho;
    }
    Ok((rhs - lhs).norm())
}
