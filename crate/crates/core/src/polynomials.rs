//! Legendre and Gegenbauer-type polynomials.
//!
//! `Q_n` is defined by the generating function
//!
//! ```text
//! 1 / (1 - 2 x t + t²) = Σ_n Q_n(x) tⁿ
//! ```
//!
//! so that `Q_n = C_n^1`, the Chebyshev polynomial of the second kind. The
//! associated functions carry the same `(-1)^ℓ (1 - x²)^{ℓ/2} dˡ/dxˡ` structure
//! as the associated Legendre functions, Condon-Shortley phase included.
//!
//! Up to degree [`COEFFICIENT_TABLE_MAX_DEGREE`] the associated functions are
//! evaluated by differentiating a coefficient array of the base polynomial in
//! a Gegenbauer basis; above that they fall back to three-term recurrences in
//! degree.

use crate::error::{Error, Result};

/// Largest degree served by the Gegenbauer coefficient tables.
pub const COEFFICIENT_TABLE_MAX_DEGREE: usize = 64;

/// Polynomial families known to this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyKind {
    /// `P_ℓ(x)`.
    LegendreP,
    /// `P_ℓ^m(x)` for a fixed order `m`; the degree runs over `ℓ ≥ m`.
    AssocLegendreP { m: usize },
    /// `Q_n(x)`.
    GegenbauerQ,
    /// `Q_n^ℓ(x)` for a fixed order `ℓ`; the degree runs over `n ≥ ℓ`.
    AssocGegenbauerQ { l: usize },
    /// Canonical `C_n^α(x)`.
    CanonicalGegenbauerC { alpha: f64 },
}

impl PolyKind {
    /// Evaluates the member of degree `degree` at `x`.
    pub fn eval(&self, degree: usize, x: f64) -> Result<f64> {
        match *self {
            PolyKind::LegendreP => legendre_p(degree, x),
            PolyKind::AssocLegendreP { m } => assoc_legendre_p(degree, m, x),
            PolyKind::GegenbauerQ => gegenbauer_q(degree, x),
            PolyKind::AssocGegenbauerQ { l } => assoc_gegenbauer_q(degree, l, x),
            PolyKind::CanonicalGegenbauerC { alpha } => canonical_gegenbauer_c(degree, alpha, x),
        }
    }

    /// Lowest degree for which the family is defined.
    pub fn min_degree(&self) -> usize {
        match *self {
            PolyKind::AssocLegendreP { m } => m,
            PolyKind::AssocGegenbauerQ { l } => l,
            _ => 0,
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("|x| must not exceed 1, got x = {x}")))
    }
}

/// Legendre polynomial `P_ℓ(x)` by the upward three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(legendre_unchecked(l, x))
}

fn legendre_unchecked(l: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if l == 0 {
        return prev;
    }
    for k in 1..l {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Returns `(P_l(x), P_l'(x))`; used for the Gauss-Legendre Newton step.
pub(crate) fn legendre_with_derivative(l: usize, x: f64) -> (f64, f64) {
    if l == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    let (mut dprev, mut dcur) = (0.0, 1.0);
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        let dnext = dprev + (2.0 * kf + 1.0) * cur;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    (cur, dcur)
}

/// Associated Legendre function `P_ℓ^m(x) = (-1)^m (1 - x²)^{m/2} d^m P_ℓ / dx^m`.
///
/// Only `0 ≤ m ≤ ℓ` is accepted; negative orders are mapped by the harmonics
/// layer.
pub fn assoc_legendre_p(l: usize, m: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    if m > l {
        return Err(Error::domain(format!("order m = {m} exceeds degree l = {l}")));
    }
    if m == 0 {
        return Ok(legendre_unchecked(l, x));
    }
    if x.abs() == 1.0 {
        return Ok(0.0);
    }
    let s = (1.0 - x * x).sqrt();
    let phase = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    if l <= COEFFICIENT_TABLE_MAX_DEGREE {
        let d = GegenbauerSeries::basis(0.5, l).nth_derivative(m);
        Ok(phase * s.powi(m as i32) * d.eval(x))
    } else {
        Ok(assoc_legendre_recurrence(l, m, x, s))
    }
}

fn assoc_legendre_recurrence(l: usize, m: usize, x: f64, s: f64) -> f64 {
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * s;
        odd += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for k in (m + 2)..=l {
        let next = ((2 * k - 1) as f64 * x * cur - (k + m - 1) as f64 * prev) / (k - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer-type polynomial `Q_n(x)`: `Q_0 = 1`, `Q_1 = 2x`,
/// `Q_n = 2x Q_{n-1} - Q_{n-2}`.
pub fn gegenbauer_q(n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(gegenbauer_q_unchecked(n, x))
}

pub(crate) fn gegenbauer_q_unchecked(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Gegenbauer-type function `Q_n^ℓ(x) = (-1)^ℓ (1 - x²)^{ℓ/2} dˡ Q_n / dxˡ`.
pub fn assoc_gegenbauer_q(n: usize, l: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    if l > n {
        return Err(Error::domain(format!("order l = {l} exceeds degree n = {n}")));
    }
    if l == 0 {
        return Ok(gegenbauer_q_unchecked(n, x));
    }
    if x.abs() == 1.0 {
        return Ok(0.0);
    }
    let s = (1.0 - x * x).sqrt();
    let phase = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    if n <= COEFFICIENT_TABLE_MAX_DEGREE {
        let d = GegenbauerSeries::basis(1.0, n).nth_derivative(l);
        Ok(phase * s.powi(l as i32) * d.eval(x))
    } else {
        // dˡ C_n^1 / dxˡ = 2ˡ ℓ! C_{n-ℓ}^{ℓ+1}
        let mut scale = 1.0;
        for k in 1..=l {
            scale *= 2.0 * k as f64;
        }
        Ok(phase * s.powi(l as i32) * scale * gegenbauer_c_unchecked(n - l, (l + 1) as f64, x))
    }
}

/// Canonical Gegenbauer polynomial `C_n^α(x)` by its standard recurrence.
pub fn canonical_gegenbauer_c(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    check_x(x)?;
    Ok(gegenbauer_c_unchecked(n, alpha, x))
}

fn gegenbauer_c_unchecked(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * alpha * x);
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + alpha - 1.0) * cur - (kf + 2.0 * alpha - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ_{k=0}^{N} poly_k(x) t^k`, skipping degrees below the family's minimum.
pub fn generating_partial_sum(kind: PolyKind, x: f64, t: f64, n: usize) -> Result<f64> {
    if !(t.abs() < 1.0) {
        return Err(Error::domain(format!("|t| must be below 1, got t = {t}")));
    }
    check_x(x)?;
    let mut sum = 0.0;
    let mut tk = t.powi(kind.min_degree() as i32);
    for k in kind.min_degree()..=n {
        sum += kind.eval(k, x)? * tk;
        tk *= t;
    }
    Ok(sum)
}

/// Polynomial stored as coefficients in the Gegenbauer basis `C_k^λ`:
/// `p(x) = Σ_k coeffs[k] C_k^λ(x)`. Differentiation maps `C_k^λ` to
/// `2λ C_{k-1}^{λ+1}`, so the coefficients never mix and no cancellation
/// builds up, unlike the monomial or Chebyshev bases.
#[derive(Debug, Clone, PartialEq)]
struct GegenbauerSeries {
    lambda: f64,
    coeffs: Vec<f64>,
}

impl GegenbauerSeries {
    fn basis(lambda: f64, degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        GegenbauerSeries { lambda, coeffs }
    }

    fn derivative(&self) -> Self {
        let factor = 2.0 * self.lambda;
        let coeffs = if self.coeffs.len() > 1 { self.coeffs[1..].iter().map(|c| factor * c).collect() } else { vec![0.0] };
        GegenbauerSeries { lambda: self.lambda + 1.0, coeffs }
    }

    fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    fn eval(&self, x: f64) -> f64 {
        let a = self.lambda;
        let (mut prev, mut cur) = (1.0, 2.0 * a * x);
        let mut sum = self.coeffs[0];
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            if k > 1 {
                let kf = k as f64;
                let next = (2.0 * x * (kf + a - 1.0) * cur - (kf + 2.0 * a - 2.0) * prev) / kf;
                prev = cur;
                cur = next;
            }
            sum += c * cur;
        }
        sum
    }
}
