//! Bound-state hydrogen wave functions in momentum space.
//!
//! With `p_n = Z/n` (atomic units), the Fock map sends a momentum `p` to the
//! point of S³ with `cos χ = (p_n² - p²)/(p_n² + p²)` and `(θ, φ)` the direction
//! of `p`. Wave functions are normalised as `(2π)⁻³ ∫ d³p |ψ|² = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::{cart_to_spherical3, ylm, ynlm, ComplexValue};
use crate::polynomials::assoc_gegenbauer_q;
use crate::quadrature::{gauss_chebyshev_u, sphere_rule};
use crate::{Vec3, Vec4};

/// Unit conventions. All of them are 1 in atomic units and appear only as
/// documentation of where they would enter.
pub mod units {
    /// Reduced Planck constant.
    pub const HBAR: f64 = 1.0;
    /// Electron mass.
    pub const ELECTRON_MASS: f64 = 1.0;
    /// Bohr radius `a₀ = ħ/(α mₑ c)`.
    pub const BOHR_RADIUS: f64 = 1.0;
}

/// `(n, ℓ, m)` with `n ≥ 1`, `ℓ < n`, `|m| ≤ ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundStateIndex {
    n: u32,
    l: u32,
    m: i32,
}

impl BoundStateIndex {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("principal quantum number must be at least 1"));
        }
        if l >= n {
            return Err(Error::domain(format!("l = {l} must be below n = {n}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(BoundStateIndex { n, l, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Every bound state with principal number `≤ nmax`.
    pub fn all_up_to(nmax: u32) -> Vec<BoundStateIndex> {
        (1..=nmax)
            .flat_map(|n| (0..n).flat_map(move |l| (-(l as i32)..=l as i32).map(move |m| BoundStateIndex { n, l, m })))
            .collect()
    }
}

/// Momentum with its modulus and direction angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPoint {
    pub p: Vec3,
    pub magnitude: f64,
    pub theta: f64,
    pub phi: f64,
}

impl MomentumPoint {
    pub fn new(p: Vec3) -> Result<Self> {
        if !p.iter().all(|x| x.is_finite()) {
            return Err(Error::domain("momentum components must be finite"));
        }
        let s = cart_to_spherical3(p);
        Ok(MomentumPoint { p, magnitude: s.r, theta: s.theta, phi: s.phi })
    }
}

fn check_charge(z: u32) -> Result<()> {
    if z == 0 {
        return Err(Error::domain("nuclear charge Z must be at least 1"));
    }
    Ok(())
}

/// Fock angle `χ ∈ [0, π]` with `cos χ = (p_n² - p²)/(p_n² + p²)`, `p_n = Z/n`.
pub fn fock_chi(p_magnitude: f64, n: u32, z: u32) -> f64 {
    let scale = units::HBAR * z as f64 / (units::BOHR_RADIUS * n as f64);
    2.0 * p_magnitude.atan2(scale)
}

/// Unit 4-vector `(2 p₀ p, p₀² - p²)/(p₀² + p²)` of the Fock map with scale `p₀`.
pub fn fock_unit_vector(p: &Vec3, scale: f64) -> Vec4 {
    let p2 = crate::dot(p, p);
    let denom = scale * scale + p2;
    [2.0 * scale * p[0] / denom, 2.0 * scale * p[1] / denom, 2.0 * scale * p[2] / denom, (scale * scale - p2) / denom]
}

/// `√((n-1-ℓ)!/(n+ℓ)!)`.
fn factorial_root(n: u32, l: u32) -> f64 {
    ((n - l)..=(n + l)).fold(1.0, |acc, k| acc / k as f64).sqrt()
}

/// Hydrogen wave function in explicit Gegenbauer-type form:
///
/// ```text
/// ψ_nℓm(p) = 16π n² (a₀/Z)^{3/2} √((n-1-ℓ)!/(n+ℓ)!) (1 + y)⁻² Q^ℓ_{n-1}((1-y)/(1+y)) Y_ℓm(p̂)
/// ```
///
/// with `y = n² a₀² p² / Z²`.
pub fn psi_momentum(idx: BoundStateIndex, p: &MomentumPoint, z: u32) -> Result<ComplexValue> {
    check_charge(z)?;
    let (n, l) = (idx.n, idx.l);
    let zf = z as f64;
    let y = (n as f64 * units::BOHR_RADIUS * p.magnitude / zf).powi(2);
    let prefactor = 16.0 * PI * (n * n) as f64 * (units::BOHR_RADIUS / zf).powf(1.5);
    let x = ((1.0 - y) / (1.0 + y)).clamp(-1.0, 1.0);
    let radial = prefactor * factorial_root(n, l) * assoc_gegenbauer_q((n - 1) as usize, l as usize, x)? / (1.0 + y).powi(2);
    Ok(ylm(l as usize, idx.m, p.theta, p.phi)? * radial)
}

/// Hydrogen wave function through the four-dimensional harmonic
/// `Y_{(n-1)ℓm}` on the Fock sphere (`Z = 1` only):
///
/// ```text
/// ψ_nℓm(p) = (2π)^{3/2} 4 p_n^{5/2} / (p_n² + p²)² · Y_{(n-1)ℓm}(χ, θ, φ)
/// ```
///
/// With the harmonics used here this coincides with [`psi_momentum`]; see
/// [`relative_phase`].
pub fn psi_via_ynlm(idx: BoundStateIndex, p: &MomentumPoint, z: u32) -> Result<ComplexValue> {
    check_charge(z)?;
    if z != 1 {
        return Err(Error::UnsupportedCharge(z));
    }
    let pn = units::HBAR / (units::BOHR_RADIUS * idx.n as f64);
    let chi = fock_chi(p.magnitude, idx.n, 1);
    let y = ynlm((idx.n - 1) as usize, idx.l as usize, idx.m, chi, p.theta, p.phi)?;
    let radial = (2.0 * PI).powf(1.5) * 4.0 * pn.powf(2.5) / (pn * pn + p.magnitude * p.magnitude).powi(2);
    Ok(y * radial)
}

/// Factor `s` with `psi_via_ynlm = s · psi_momentum`.
///
/// Both forms are built from the same `Q^ℓ_{n-1}`, so the factor is `+1` for
/// every state. The `(-1)^{n-1}` that textbook tables carry relative to this
/// phase is [`textbook_phase`].
pub fn relative_phase(_idx: BoundStateIndex) -> f64 {
    1.0
}

/// `(-1)^{n-1}`: phase between these wave functions and the convention of the
/// classic Bethe-Salpeter tables, which is absorbed into the global phase here.
pub fn textbook_phase(idx: BoundStateIndex) -> f64 {
    if idx.n % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `(2π)⁻³ ∫ d³p ψ_a*(p) ψ_b(p)` by a product rule: the radial integral is
/// mapped to `u = cos χ` of a Fock sphere with scale `Z/√(n_a n_b)` and done
/// with `radial_nodes` Gauss-Chebyshev nodes; the angular integral uses the S²
/// product rule, exact for the harmonics involved.
///
/// For `n_a = n_b` the radial integrand is a polynomial in `u` and a few nodes
/// are exact; otherwise it is analytic and convergence is geometric.
pub fn inner_product(a: BoundStateIndex, b: BoundStateIndex, z: u32, radial_nodes: usize) -> Result<Complex64> {
    check_charge(z)?;
    let scale = z as f64 / ((a.n * b.n) as f64).sqrt();
    let radial = gauss_chebyshev_u(radial_nodes.max(1));
    let angular = sphere_rule(2, a.l.max(b.l) as usize)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (&u, &w) in radial.nodes.iter().zip(&radial.weights) {
        // p = p₀ tan(χ/2); p² dp = p₀³ √(1-u²)/(1+u)³ du, the root is in w
        let p = scale * ((1.0 - u) / (1.0 + u)).sqrt();
        let radial_weight = w * scale.powi(3) / (1.0 + u).powi(3);
        let mut shell = Complex64::new(0.0, 0.0);
        for (node, &wa) in angular.nodes.iter().zip(&angular.weights) {
            let (st, ct) = node.theta.sin_cos();
            let (sp, cp) = node.phi.sin_cos();
            let point = MomentumPoint { p: [p * st * cp, p * st * sp, p * ct], magnitude: p, theta: node.theta, phi: node.phi };
            shell += psi_momentum(a, &point, z)?.conj() * psi_momentum(b, &point, z)? * wa;
        }
        total += shell * radial_weight;
    }
    Ok(total / (2.0 * PI).powi(3))
}

/// Matrix of `(2π)⁻³ ∫ d³p ψ_a* ψ_b` over all bound states with
/// `n ≤ nmax`, ordered as [`BoundStateIndex::all_up_to`]. Blocks of equal
/// `(n_a, n_b)` share one grid, as in [`inner_product`].
pub fn bound_state_gram(nmax: u32, z: u32, radial_nodes: usize) -> Result<Vec<Vec<Complex64>>> {
    check_charge(z)?;
    let states = BoundStateIndex::all_up_to(nmax);
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); states.len()]; states.len()];
    let radial = gauss_chebyshev_u(radial_nodes.max(1));
    let angular = sphere_rule(2, nmax.saturating_sub(1) as usize)?;
    let offset = |n: u32| ((n - 1) * n * (2 * n - 1) / 6) as usize;
    for na in 1..=nmax {
        for nb in na..=nmax {
            let scale = z as f64 / ((na * nb) as f64).sqrt();
            let block_a: Vec<BoundStateIndex> = states.iter().copied().filter(|s| s.n == na).collect();
            let block_b: Vec<BoundStateIndex> = states.iter().copied().filter(|s| s.n == nb).collect();
            let mut acc = vec![vec![Complex64::new(0.0, 0.0); block_b.len()]; block_a.len()];
            for (&u, &w) in radial.nodes.iter().zip(&radial.weights) {
                let p = scale * ((1.0 - u) / (1.0 + u)).sqrt();
                let radial_weight = w * scale.powi(3) / (1.0 + u).powi(3);
                for (node, &wa) in angular.nodes.iter().zip(&angular.weights) {
                    let (st, ct) = node.theta.sin_cos();
                    let (sp, cp) = node.phi.sin_cos();
                    let point = MomentumPoint { p: [p * st * cp, p * st * sp, p * ct], magnitude: p, theta: node.theta, phi: node.phi };
                    let va: Vec<Complex64> = block_a.iter().map(|&s| psi_momentum(s, &point, z)).collect::<Result<_>>()?;
                    let vb: Vec<Complex64> = block_b.iter().map(|&s| psi_momentum(s, &point, z)).collect::<Result<_>>()?;
                    let weight = radial_weight * wa / (2.0 * PI).powi(3);
                    for (i, a) in va.iter().enumerate() {
                        for (j, b) in vb.iter().enumerate() {
                            acc[i][j] += a.conj() * b * weight;
                        }
                    }
                }
            }
            for (i, row) in acc.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let (r, c) = (offset(na) + i, offset(nb) + j);
                    gram[r][c] = *v;
                    gram[c][r] = v.conj();
                }
            }
        }
    }
    Ok(gram)
}
