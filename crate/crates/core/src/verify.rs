//! Invariant suites run by `greenfn verify`. Each suite reports its measured
//! residuals next to fixed tolerances; sampling is seeded so that reports are
//! reproducible.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coulomb::residue_check;
use crate::error::{Error, Result};
use crate::harmonics::{addition_theorem_residual, HarmonicTable3, HarmonicTable4, QuantumIndex, Spherical4};
use crate::hydrogen::{bound_state_gram, psi_momentum, psi_via_ynlm, relative_phase, BoundStateIndex, MomentumPoint};
use crate::kernels::{flux_check_2d, flux_check_3d};
use crate::quadrature::sphere_rule;
use crate::report::OutputRecord;
use crate::Vec3;

pub const ORTHONORMALITY_3D_TOL: f64 = 1e-10;
pub const ORTHONORMALITY_4D_TOL: f64 = 1e-9;
pub const ADDITION_TOL: f64 = 1e-10;
pub const FLUX_TOL: f64 = 1e-12;
pub const HYDROGEN_NORM_TOL: f64 = 1e-8;
pub const REPRESENTATION_TOL: f64 = 1e-12;
pub const RESIDUE_SPREAD_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Orthonormality,
    Addition,
    Flux,
    HydrogenNorm,
    CoulombResidue,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Orthonormality => "orthonormality",
            Suite::Addition => "addition",
            Suite::Flux => "flux",
            Suite::HydrogenNorm => "hydrogen-norm",
            Suite::CoulombResidue => "coulomb-residue",
        }
    }
}

/// One measured quantity and its acceptance threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Additional named numbers, reported but not tested.
    pub extra: Vec<(String, f64)>,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { name: name.into(), residual, tolerance, extra: Vec::new() }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.push((key.to_string(), value));
        self
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn records(&self) -> Vec<OutputRecord> {
        self.checks
            .iter()
            .map(|c| {
                let mut rec = OutputRecord::new("verify")
                    .input("suite", self.suite.name())
                    .input("check", c.name.as_str())
                    .output("residual", c.residual)
                    .output("tolerance", c.tolerance);
                for (k, v) in &c.extra {
                    rec = rec.output(k, *v);
                }
                rec.meta("passed", c.passed())
            })
            .collect()
    }
}

/// `max |G_ij - δ_ij|` of the Gram matrix of all `Y_ℓm`, `ℓ ≤ lmax`.
pub fn gram_residual_3d(lmax: usize) -> Result<f64> {
    let rule = sphere_rule(2, lmax)?;
    let count = (lmax + 1) * (lmax + 1);
    let mut gram = vec![vec![num_complex::Complex64::new(0.0, 0.0); count]; count];
    let index = QuantumIndex::all_3d(lmax);
    for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
        let table = HarmonicTable3::new(lmax, node.theta, node.phi)?;
        let values: Vec<_> = index.iter().map(|q| table.get(q.l, q.m)).collect();
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                gram[i][j] += a * b.conj() * w;
            }
        }
    }
    Ok(max_identity_residual(&gram))
}

/// `max |G_ij - δ_ij|` of the Gram matrix of all `Y_nℓm`, `n ≤ nmax`.
pub fn gram_residual_4d(nmax: usize) -> Result<f64> {
    let rule = sphere_rule(3, nmax)?;
    let index = QuantumIndex::all_4d(nmax);
    let mut gram = vec![vec![num_complex::Complex64::new(0.0, 0.0); index.len()]; index.len()];
    for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
        let table = HarmonicTable4::new(nmax, &Spherical4::unit(node.chi, node.theta, node.phi))?;
        let values: Vec<_> = index.iter().map(|q| table.get(q.n, q.l, q.m)).collect();
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                gram[i][j] += a * b.conj() * w;
            }
        }
    }
    Ok(max_identity_residual(&gram))
}

fn max_identity_residual(gram: &[Vec<num_complex::Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}

pub fn orthonormality(lmax: usize, nmax: usize) -> Result<SuiteReport> {
    let r3 = gram_residual_3d(lmax)?;
    let r4 = gram_residual_4d(nmax)?;
    Ok(SuiteReport {
        suite: Suite::Orthonormality,
        checks: vec![
            Check::new(format!("gram_3d_lmax_{lmax}"), r3, ORTHONORMALITY_3D_TOL)
                .with("functions", ((lmax + 1) * (lmax + 1)) as f64),
            Check::new(format!("gram_4d_nmax_{nmax}"), r4, ORTHONORMALITY_4D_TOL)
                .with("functions", QuantumIndex::all_4d(nmax).len() as f64),
        ],
    })
}

/// Random point of S³ with angles drawn uniformly.
pub fn random_unit4(rng: &mut impl Rng) -> Spherical4 {
    Spherical4::unit(rng.gen_range(0.0..PI), rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI))
}

pub fn addition(nmax: usize, pairs: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let a = random_unit4(&mut rng);
        let b = random_unit4(&mut rng);
        for n in 0..=nmax {
            worst = worst.max(addition_theorem_residual(n, &a, &b)?);
        }
    }
    Ok(SuiteReport {
        suite: Suite::Addition,
        checks: vec![Check::new(format!("addition_nmax_{nmax}"), worst, ADDITION_TOL).with("pairs", pairs as f64)],
    })
}

pub fn flux(eps: &[f64], nodes: usize) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &e in eps {
        let v2 = flux_check_2d([0.3, -0.7], e, nodes)?;
        checks.push(Check::new(format!("flux_2d_eps_{e:e}"), (v2 - 1.0).abs(), FLUX_TOL).with("flux", v2));
        let v3 = flux_check_3d([0.3, -0.7, 0.2], e)?;
        checks.push(Check::new(format!("flux_3d_eps_{e:e}"), (v3 - 1.0).abs(), FLUX_TOL).with("flux", v3));
    }
    Ok(SuiteReport { suite: Suite::Flux, checks })
}

/// Default number of radial nodes of the hydrogen suite.
pub const HYDROGEN_RADIAL_NODES: usize = 48;

pub fn hydrogen_norm(nmax: u32, z: u32, radial_nodes: usize, seed: u64) -> Result<SuiteReport> {
    let gram = bound_state_gram(nmax, z, radial_nodes)?;
    let mut norm_dev: f64 = 0.0;
    let mut overlap: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                norm_dev = norm_dev.max((v - 1.0).norm());
            } else {
                overlap = overlap.max(v.norm());
            }
        }
    }
    let states = BoundStateIndex::all_up_to(nmax);
    let mut checks = vec![
        Check::new(format!("norm_nmax_{nmax}"), norm_dev, HYDROGEN_NORM_TOL).with("states", states.len() as f64),
        Check::new(format!("orthogonality_nmax_{nmax}"), overlap, HYDROGEN_NORM_TOL),
    ];
    if z == 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let p = MomentumPoint::new(random_momentum(&mut rng))?;
            for &idx in &states {
                let direct = psi_momentum(idx, &p, 1)?;
                let via = psi_via_ynlm(idx, &p, 1)?;
                let scale = direct.norm().max(1.0);
                worst = worst.max((via - direct * relative_phase(idx)).norm() / scale);
            }
        }
        checks.push(Check::new("representations_agree", worst, REPRESENTATION_TOL));
    }
    Ok(SuiteReport { suite: Suite::HydrogenNorm, checks })
}

/// Random momentum with components in `[-1.5, 1.5]`.
pub fn random_momentum(rng: &mut impl Rng) -> Vec3 {
    [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)]
}

/// Random pair of momenta at least `0.3` apart.
pub fn random_momentum_pair(rng: &mut impl Rng) -> (Vec3, Vec3) {
    loop {
        let a = random_momentum(rng);
        let b = random_momentum(rng);
        if crate::dist_sq(&a, &b) >= 0.09 {
            return (a, b);
        }
    }
}

pub fn coulomb_residue(levels: &[u32], pairs: usize, z: u32, seed: u64) -> Result<SuiteReport> {
    if pairs == 0 {
        return Err(Error::domain("need at least one momentum pair"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for &n in levels {
        let mut ratios = Vec::with_capacity(pairs);
        for _ in 0..pairs {
            let (p, p2) = random_momentum_pair(&mut rng);
            ratios.push(residue_check(n, &p, &p2, z)?.ratio);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|r| (r / mean - 1.0).abs()).fold(0.0, f64::max);
        checks.push(Check::new(format!("residue_ratio_spread_n_{n}"), spread, RESIDUE_SPREAD_TOL).with("mean_ratio", mean));
    }
    Ok(SuiteReport { suite: Suite::CoulombResidue, checks })
}
