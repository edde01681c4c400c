//! Deterministic quadrature rules.
//!
//! All rules are built sequentially and summed in a fixed order, so repeated
//! calls are bitwise reproducible.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polynomials::legendre_with_derivative;

/// Integration domain of a one-dimensional rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    /// `[0, 2π)` with periodic integrand.
    Periodic,
}

impl Domain {
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Periodic => 2.0 * PI,
        }
    }
}

/// One-dimensional rule. Nodes are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affine map of an interval rule onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let Domain::Interval { a: a0, b: b0 } = self.domain else {
            return self.clone();
        };
        let scale = (b - a) / (b0 - a0);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - a0) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            domain: Domain::Interval { a, b },
        }
    }
}

/// `n`-point Gauss-Legendre rule on `[-1, 1]`, exact through degree `2n - 1`.
///
/// Nodes are Newton-polished roots of `P_n`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights, domain: Domain::Interval { a: -1.0, b: 1.0 } }
}

/// `n`-point Gauss-Chebyshev rule of the second kind on `[-1, 1]`.
///
/// The weight `√(1 - x²)` is folded into the returned weights, so
/// `rule.integrate(f)` approximates `∫ f(x) √(1 - x²) dx` exactly for
/// polynomial `f` of degree `≤ 2n - 1`.
pub fn gauss_chebyshev_u(n: usize) -> QuadratureRule {
    assert!(n >= 1, "Gauss-Chebyshev rule needs at least one node");
    let h = PI / (n + 1) as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let angle = k as f64 * h;
        nodes.push(angle.cos());
        weights.push(h * angle.sin().powi(2));
    }
    QuadratureRule { nodes, weights, domain: Domain::Interval { a: -1.0, b: 1.0 } }
}

/// Uniform trapezoid rule on `[0, 2π)`; exact for trigonometric polynomials
/// of degree below `n`.
pub fn periodic_trapezoid(n: usize) -> QuadratureRule {
    assert!(n >= 1, "trapezoid rule needs at least one node");
    let h = 2.0 * PI / n as f64;
    QuadratureRule {
        nodes: (0..n).map(|k| k as f64 * h).collect(),
        weights: vec![h; n],
        domain: Domain::Periodic,
    }
}

/// Angles of a node on S² or S³. On S² `chi` is fixed at `π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleNode {
    pub chi: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    /// 2 for S², 3 for S³.
    pub dim: usize,
    pub nodes: Vec<AngleNode>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn integrate<T>(&self, f: impl Fn(&AngleNode) -> T) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        self.nodes.iter().zip(&self.weights).map(|(node, &w)| f(node) * w).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Product rule on S² (`dim = 2`) or S³ (`dim = 3`), exact for every product
/// of two harmonics of degree `≤ max_degree`.
///
/// Gauss-Legendre in `cos θ`, Gauss-Chebyshev (second kind) in `cos χ` to
/// absorb the `sin²χ` weight, and a uniform trapezoid with
/// `2·max_degree + 3` nodes in `φ`.
pub fn sphere_rule(dim: usize, max_degree: usize) -> Result<SphereRule> {
    let polar_order = max_degree + 2;
    let theta_rule = gauss_legendre(polar_order);
    let phi_rule = periodic_trapezoid(2 * max_degree + 3);
    let chi_rule = match dim {
        2 => QuadratureRule {
            nodes: vec![0.0],
            weights: vec![1.0],
            domain: Domain::Interval { a: -1.0, b: 1.0 },
        },
        3 => gauss_chebyshev_u(polar_order),
        _ => return Err(Error::domain(format!("sphere dimension must be 2 or 3, got {dim}"))),
    };
    let mut nodes = Vec::with_capacity(chi_rule.len() * theta_rule.len() * phi_rule.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (&u, &wu) in chi_rule.nodes.iter().zip(&chi_rule.weights) {
        let chi = u.acos();
        for (&x, &wx) in theta_rule.nodes.iter().zip(&theta_rule.weights) {
            let theta = x.acos();
            for (&phi, &wphi) in phi_rule.nodes.iter().zip(&phi_rule.weights) {
                nodes.push(AngleNode { chi, theta, phi });
                weights.push(wu * wx * wphi);
            }
        }
    }
    Ok(SphereRule { dim, nodes, weights })
}

/// Controls for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions { tol: 1e-10, max_intervals: 4000 }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveEstimate {
    pub value: f64,
    pub est_error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Each pass bisects, left to right, every interval whose error estimate
/// exceeds its share `tol / count` of the budget. The subdivision therefore
/// depends only on interval position and the integrand, never on sort order
/// of error magnitudes. Endpoints are never evaluated.
pub fn integrate_adaptive(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: AdaptiveOptions,
) -> Result<AdaptiveEstimate> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("need finite a < b, got [{a}, {b}]")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        let value: f64 = intervals.iter().map(|iv| iv.2).sum();
        if !value.is_finite() {
            return Err(Error::domain("integrand is not finite on the interval"));
        }
        if total_err <= opts.tol {
            return Ok(AdaptiveEstimate { value, est_error: total_err, intervals: intervals.len(), evaluations });
        }
        let share = opts.tol / intervals.len() as f64;
        let mut next = Vec::with_capacity(2 * intervals.len());
        let mut split_any = false;
        for &(lo, hi, v, e) in &intervals {
            let mid = 0.5 * (lo + hi);
            if e > share && mid > lo && mid < hi {
                let (v1, e1) = gk15(&f, lo, mid);
                let (v2, e2) = gk15(&f, mid, hi);
                evaluations += 30;
                next.push((lo, mid, v1, e1));
                next.push((mid, hi, v2, e2));
                split_any = true;
            } else {
                next.push((lo, hi, v, e));
            }
        }
        intervals = next;
        if !split_any || intervals.len() > opts.max_intervals {
            let est_error: f64 = intervals.iter().map(|iv| iv.3).sum();
            return Err(Error::NonConvergence { est_error, tol: opts.tol, intervals: intervals.len() });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn classical_small_rules() {
        let r = gauss_legendre(1);
        assert_eq!(r.nodes, vec![0.0]);
        assert_abs_diff_eq!(r.weights[0], 2.0, epsilon = 1e-15);
        let r = gauss_legendre(2);
        let x = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(r.nodes[0], -x, epsilon = 1e-15);
        assert_abs_diff_eq!(r.nodes[1], x, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn quartic_with_three_nodes() {
        let r = gauss_legendre(3);
        assert_abs_diff_eq!(r.integrate(|x| x.powi(4)), 0.4, epsilon = 1e-15);
    }

    #[test]
    fn nodes_are_roots_and_increasing() {
        for n in [5, 17, 40, 101] {
            let r = gauss_legendre(n);
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            for &x in &r.nodes {
                let (p, dp) = legendre_with_derivative(n, x);
                assert!((p / dp).abs() <= 1e-15, "n={n} x={x}");
            }
            assert_abs_diff_eq!(r.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(r.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn chebyshev_u_rule_weight() {
        let r = gauss_chebyshev_u(7);
        assert_abs_diff_eq!(r.weights.iter().sum::<f64>(), PI / 2.0, epsilon = 1e-14);
        // ∫ x² √(1-x²) dx = π/8
        assert_abs_diff_eq!(r.integrate(|x| x * x), PI / 8.0, epsilon = 1e-14);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sphere_measures() {
        let s2 = sphere_rule(2, 4).unwrap();
        assert_abs_diff_eq!(s2.weights.iter().sum::<f64>(), 4.0 * PI, epsilon = 1e-13);
        let s3 = sphere_rule(3, 4).unwrap();
        assert_abs_diff_eq!(s3.weights.iter().sum::<f64>(), 2.0 * PI * PI, epsilon = 1e-12);
        assert!(sphere_rule(4, 1).is_err());
    }

    #[test]
    fn adaptive_simple_and_singular() {
        let opts = AdaptiveOptions { tol: 1e-12, ..Default::default() };
        let one = integrate_adaptive(|_| 1.0, 0.0, 1.0, opts).unwrap();
        assert_abs_diff_eq!(one.value, 1.0, epsilon = 1e-14);
        let opts = AdaptiveOptions { tol: 1e-10, ..Default::default() };
        let r = integrate_adaptive(|x: f64| x.powf(-0.5), 0.0, 1.0, opts).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-10, "{r:?}");
        assert!(r.est_error <= 1e-10);
    }

    #[test]
    fn adaptive_is_deterministic() {
        let opts = AdaptiveOptions::default();
        let f = |x: f64| (10.0 * x).sin() / (1.0 + x * x);
        let a = integrate_adaptive(f, -3.0, 2.0, opts).unwrap();
        let b = integrate_adaptive(f, -3.0, 2.0, opts).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.intervals, b.intervals);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let opts = AdaptiveOptions { tol: 1e-12, max_intervals: 8 };
        let err = integrate_adaptive(|x: f64| x.powf(-0.9), 0.0, 1.0, opts).unwrap_err();
        assert!(err.is_numerical());
    }
}
