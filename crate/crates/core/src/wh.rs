//! Weyl-Heisenberg (Glauber) coherent states.
//!
//! Group elements are `e^{iθ}U(λ)` with `λ ∈ ℂᴹ` for an M-mode field, and
//! composition `U(λ₁)U(λ₂) = e^{i Im(λ₂*·λ₁)} U(λ₁ + λ₂)`. The reference state
//! is the Fock vacuum, with `⟨0|U(λ)|0⟩ = e^{−‖λ‖²/2}`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{self, CMatrix, FockVector};
use crate::group::CoherenceGroup;
use crate::relation::Amplitude;

/// `e^{iθ}U(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WHElement {
    theta: f64,
    lam: Vec<Complex64>,
}

impl WHElement {
    pub fn new(theta: f64, lam: Vec<Complex64>) -> Self {
        WHElement {
            theta: canonical_angle(theta),
            lam,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lam(&self) -> &[Complex64] {
        &self.lam
    }

    pub fn modes(&self) -> usize {
        self.lam.len()
    }
}

fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Complex scalar product `λ₂*·λ₁ = Σ conj(λ₂ⱼ) λ₁ⱼ`.
pub fn scalar_product(lam1: &[Complex64], lam2: &[Complex64]) -> Complex64 {
    lam1.iter().zip(lam2).map(|(a, b)| b.conj() * a).sum()
}

fn norm_sqr(lam: &[Complex64]) -> f64 {
    lam.iter().map(|z| z.norm_sqr()).sum()
}

/// The M-mode Weyl-Heisenberg group.
#[derive(Debug, Clone, Copy)]
pub struct WeylHeisenberg {
    modes: usize,
}

impl WeylHeisenberg {
    pub fn new(modes: usize) -> Self {
        WeylHeisenberg { modes }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    fn check_modes(&self, n: usize) -> Result<()> {
        if n != self.modes {
            return Err(Error::ModeMismatch {
                left: self.modes,
                right: n,
            });
        }
        Ok(())
    }
}

impl CoherenceGroup for WeylHeisenberg {
    type Element = WHElement;
    type Label = Vec<Complex64>;

    fn name(&self) -> &'static str {
        "wh"
    }

    fn identity(&self) -> WHElement {
        WHElement::new(0.0, vec![Complex64::new(0.0, 0.0); self.modes])
    }

    fn compose(&self, g1: &WHElement, g2: &WHElement) -> Result<WHElement> {
        wh_compose(g1, g2)
    }

    fn inverse(&self, g: &WHElement) -> WHElement {
        WHElement::new(-g.theta, g.lam.iter().map(|z| -z).collect())
    }

    fn representative(&self, label: &Vec<Complex64>) -> WHElement {
        WHElement::new(0.0, label.clone())
    }

    fn reference_amplitude(&self, g: &WHElement) -> Amplitude {
        Amplitude(Complex64::from_polar(
            (-0.5 * norm_sqr(&g.lam)).exp(),
            g.theta,
        ))
    }

    /// Maxwellian displacement: the relational hidden-variable law for WH.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WHElement {
        WHElement::new(0.0, sample_maxwellian(rng, self.modes))
    }

    fn amplitude(&self, detector: &Vec<Complex64>, system: &Vec<Complex64>) -> Result<Amplitude> {
        self.check_modes(detector.len())?;
        self.check_modes(system.len())?;
        let g = self.compose(
            &self.inverse(&self.representative(detector)),
            &self.representative(system),
        )?;
        Ok(self.reference_amplitude(&g))
    }
}

/// Group law with the `Im(λ₂*·λ₁)` phase cocycle.
pub fn wh_compose(g1: &WHElement, g2: &WHElement) -> Result<WHElement> {
    if g1.modes() != g2.modes() {
        return Err(Error::ModeMismatch {
            left: g1.modes(),
            right: g2.modes(),
        });
    }
    let cocycle = scalar_product(&g1.lam, &g2.lam).im;
    let lam = g1.lam.iter().zip(&g2.lam).map(|(a, b)| a + b).collect();
    Ok(WHElement::new(g1.theta + g2.theta + cocycle, lam))
}

/// `⟨0|U(λ)|0⟩ = e^{−‖λ‖²/2}`.
pub fn vacuum_amplitude(lam: &[Complex64]) -> Amplitude {
    Amplitude::real((-0.5 * norm_sqr(lam)).exp())
}

/// `⟨λ₁|λ₂⟩ = f(g₁⁻¹g₂)`, including the cocycle phase.
pub fn glauber_overlap(lam1: &[Complex64], lam2: &[Complex64]) -> Result<Amplitude> {
    WeylHeisenberg::new(lam1.len()).amplitude(&lam1.to_vec(), &lam2.to_vec())
}

/// One complex component distributed as `π⁻¹e^{−|μ|²}` per unit area, so that
/// `P(|μ| > r) = e^{−r²}`.
pub fn sample_maxwellian<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> Vec<Complex64> {
    (0..modes)
        .map(|_| {
            // |μ|² ~ Exp(1), arg uniform
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            let r = (-(1.0 - u).ln()).sqrt();
            Complex64::from_polar(r, TAU * v)
        })
        .collect()
}

/// Lattice spacing at which a unit cell covers area π: the von Neumann density.
pub const VON_NEUMANN_SPACING: f64 = 1.772_453_850_905_516; // √π

/// A square window `{(n + i·m)·a : |n|, |m| ≤ M}` of the phase-space lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWindow {
    half_width: usize,
    spacing: f64,
    points: Vec<Complex64>,
    indices: Vec<(i64, i64)>,
}

impl LatticeWindow {
    pub fn new(half_width: usize) -> Self {
        Self::with_spacing(half_width, VON_NEUMANN_SPACING)
    }

    /// Points are enumerated row-major: `m` (imaginary part) outer from `−M`,
    /// `n` inner.
    pub fn with_spacing(half_width: usize, spacing: f64) -> Self {
        let m = half_width as i64;
        let mut points = Vec::new();
        let mut indices = Vec::new();
        for im in -m..=m {
            for re in -m..=m {
                indices.push((re, im));
                points.push(Complex64::new(re as f64, im as f64) * spacing);
            }
        }
        LatticeWindow {
            half_width,
            spacing,
            points,
            indices,
        }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Integer coordinates `(n, m)` of each point.
    pub fn indices(&self) -> &[(i64, i64)] {
        &self.indices
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Result of a lattice overcompleteness probe.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeProbe {
    pub half_width: usize,
    pub n_points: usize,
    #[serde(skip)]
    pub gram: CMatrix,
    pub min_singular: f64,
    pub max_singular: f64,
    /// Moduli of the singular vector belonging to `min_singular`, in window order.
    pub null_coeff_moduli: Vec<f64>,
    /// `(max − min)/mean` of the null moduli over the core points.
    pub coeff_modulus_spread_interior: f64,
    pub core_radius: usize,
    /// Fock truncation diagnostics, present when a truncation was requested.
    pub fock: Option<FockCrossCheck>,
}

/// Comparison of the closed-form Gram matrix with one assembled from
/// truncated Fock vectors.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FockCrossCheck {
    pub dim: usize,
    /// Discarded norm `Σ_{n≥N} |⟨n|λ⟩|²` for the outermost lattice point.
    pub tail_bound: f64,
    pub gram_deviation: f64,
}

/// Default tolerance on the discarded norm for the lattice Fock cross-check.
pub const LATTICE_TAIL_LIMIT: f64 = 1e-6;

/// Discarded norm of a Glauber state `|λ⟩` truncated at `dim` (Poisson tail).
pub fn glauber_tail_mass(lam: f64, dim: usize) -> f64 {
    let r2 = lam * lam;
    if r2 == 0.0 {
        return 0.0;
    }
    // sum the tail directly from the first dropped term; terms decay once n > r²
    let mut log_term = -r2 + dim as f64 * r2.ln() - fock::ln_factorial(dim);
    let mut total = 0.0;
    let mut n = dim;
    loop {
        let t = log_term.exp();
        total += t;
        n += 1;
        log_term += r2.ln() - (n as f64).ln();
        if (n as f64) > r2 && t < total * 1e-17 {
            break;
        }
        if n > dim + 100_000 {
            break;
        }
    }
    total.min(1.0)
}

/// Gram matrix of the window's Glauber states and its smallest singular
/// direction.
///
/// `core_radius` selects the central points `|n|, |m| ≤ core_radius` over
/// which the null-vector modulus spread is measured. With `fock_dim` set, the
/// Gram matrix is also assembled from displaced Fock vacua and compared.
pub fn lattice_gram(
    window: &LatticeWindow,
    core_radius: usize,
    fock_dim: Option<usize>,
    tail_limit: f64,
) -> Result<LatticeProbe> {
    let pts = window.points();
    let n = pts.len();
    let mut gram = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            gram[(j, k)] = glauber_overlap(&[pts[j]], &[pts[k]])?.value();
        }
    }

    let fock = match fock_dim {
        None => None,
        Some(dim) => Some(fock_cross_check(window, &gram, dim, tail_limit)?),
    };

    let svd = gram.clone().svd(true, true);
    let (imin, min_singular) =
        svd.singular_values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, s)| if s < acc.1 { (i, s) } else { acc },
            );
    let max_singular = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let null_coeff_moduli: Vec<f64> = v_t.row(imin).iter().map(|z| z.norm()).collect();

    let r = core_radius as i64;
    let core: Vec<f64> = window
        .indices()
        .iter()
        .zip(&null_coeff_moduli)
        .filter(|((a, b), _)| a.abs() <= r && b.abs() <= r)
        .map(|(_, m)| *m)
        .collect();
    let spread = modulus_spread(&core);

    Ok(LatticeProbe {
        half_width: window.half_width(),
        n_points: n,
        gram,
        min_singular,
        max_singular,
        null_coeff_moduli,
        coeff_modulus_spread_interior: spread,
        core_radius,
        fock,
    })
}

fn modulus_spread(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    if mean == 0.0 {
        0.0
    } else {
        (max - min) / mean
    }
}

fn fock_cross_check(
    window: &LatticeWindow,
    gram: &CMatrix,
    dim: usize,
    tail_limit: f64,
) -> Result<FockCrossCheck> {
    let tail_bound = glauber_tail_mass(window.max_modulus(), dim);
    if !(tail_bound <= tail_limit) {
        return Err(Error::Truncation {
            dim,
            bound: tail_bound,
            limit: tail_limit,
        });
    }
    let vac = FockVector::vacuum(dim, 1);
    let states: Vec<FockVector> = window
        .points()
        .iter()
        .map(|&l| {
            fock::displacement_generator(l, dim)
                .and_then(|g| g.exp_with(&fock::Pade13))
                .map(|u| u.apply(&vac))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (j, sj) in states.iter().enumerate() {
        for (k, sk) in states.iter().enumerate() {
            worst = worst.max((sj.inner(sk) - gram[(j, k)]).norm());
        }
    }
    Ok(FockCrossCheck {
        dim,
        tail_bound,
        gram_deviation: worst,
    })
}
