//! Generalized Bell states on the spin-1/2 sphere.
//!
//! The state `∫dμ |g⟩ ⊗ |g*⟩` is evaluated with a product quadrature
//! (Gauss-Legendre in `cos θ`, uniform in `φ`) normalized to total measure 2,
//! for which `∫dμ |g⟩⟨g| = I` on the spin-1/2 space. The anti-unitary map is
//! time reversal `(c₀, c₁) ↦ (−c₁*, c₀*)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::Amplitude;
use crate::su2::{spinor_of, SphereLabel, Spinor, Su2Element};

/// Total measure of the sphere under the quadrature weights.
pub const SPHERE_MEASURE: f64 = 2.0;

/// Gauss-Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d.is_finite() { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Weighted nodes on the sphere.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    nodes: Vec<SphereLabel>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(nodes: Vec<SphereLabel>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::Quadrature(
                "need the same positive number of nodes and weights".into(),
            ));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::Quadrature("weights must be positive".into()));
        }
        Ok(SphereQuadrature { nodes, weights })
    }

    /// `n_theta` Gauss-Legendre nodes in `cos θ` times `n_phi` equispaced
    /// azimuths, scaled to total measure 2.
    pub fn product_gauss(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::Quadrature("empty quadrature".into()));
        }
        let (x, w) = gauss_legendre(n_theta);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        // Σ w_GL = 2, so each azimuth gets a 1/n_phi share
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for k in 0..n_phi {
                let phi = TAU * k as f64 / n_phi as f64;
                nodes.push(SphereLabel::new(theta, phi)?);
                weights.push(wi / n_phi as f64);
            }
        }
        SphereQuadrature::new(nodes, weights)
    }

    /// The `k × 2k` product rule.
    pub fn of_order(k: usize) -> Result<Self> {
        SphereQuadrature::product_gauss(k, 2 * k)
    }

    pub fn nodes(&self) -> &[SphereLabel] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// All weights multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        SphereQuadrature::new(
            self.nodes.clone(),
            self.weights.iter().map(|w| w * s).collect(),
        )
    }
}

/// `‖Σ wⱼ |gⱼ⟩⟨gⱼ| − c·I‖_max` minimized over real `c`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentityDefect {
    pub defect: f64,
    pub scale: f64,
}

pub fn identity_defect(q: &SphereQuadrature) -> Result<IdentityDefect> {
    if q.is_empty() {
        return Err(Error::Quadrature("empty quadrature".into()));
    }
    let mut s00 = 0.0;
    let mut s11 = 0.0;
    let mut s01 = Complex64::new(0.0, 0.0);
    for (g, w) in q.nodes.iter().zip(&q.weights) {
        let s = spinor_of(g);
        s00 += w * s.c0.norm_sqr();
        s11 += w * s.c1.norm_sqr();
        s01 += s.c0 * s.c1.conj() * *w;
    }
    // the diagonal is best matched by its mean; the off-diagonal is independent of c
    let scale = 0.5 * (s00 + s11);
    let defect = (0.5 * (s00 - s11).abs()).max(s01.norm());
    Ok(IdentityDefect { defect, scale })
}

/// Time reversal `(c₀, c₁) ↦ (−c₁*, c₀*)`.
pub fn conjugate_spinor(s: &Spinor) -> Spinor {
    Spinor::new(-s.c1.conj(), s.c0.conj())
}

/// A two-qubit state over `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinState {
    pub amps: [Complex64; 4],
}

impl TwoSpinState {
    pub fn product(a: &Spinor, b: &Spinor) -> Self {
        TwoSpinState {
            amps: [a.c0 * b.c0, a.c0 * b.c1, a.c1 * b.c0, a.c1 * b.c1],
        }
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        TwoSpinState {
            amps: [z, h, -h, z],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < 1e-10
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        TwoSpinState {
            amps: self.amps.map(|z| z / n),
        }
    }

    pub fn inner(&self, other: &TwoSpinState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    /// Exchanges the two factors.
    pub fn swapped(&self) -> Self {
        let a = self.amps;
        TwoSpinState {
            amps: [a[0], a[2], a[1], a[3]],
        }
    }

    /// `(U₁ ⊗ U₂)|self⟩` for 2×2 matrices.
    #[allow(clippy::needless_range_loop)]
    pub fn apply_local(&self, u1: &[[Complex64; 2]; 2], u2: &[[Complex64; 2]; 2]) -> Self {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[2 * i + j] += u1[i][k] * u2[j][l] * self.amps[2 * k + l];
                    }
                }
            }
        }
        TwoSpinState { amps: out }
    }

    /// `|⟨singlet|ψ⟩|²/‖ψ‖²`.
    pub fn singlet_fidelity(&self) -> f64 {
        TwoSpinState::singlet().inner(self).norm_sqr() / self.norm_sqr()
    }
}

/// Time reversal applied to a rotation, `T U T⁻¹`, as a 2×2 matrix.
pub fn conjugate_rotation(h: &Su2Element) -> [[Complex64; 2]; 2] {
    // columns are T U T⁻¹ applied to the basis; T⁻¹ = −T on spin-1/2
    let basis = [
        Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        Spinor::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    ];
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, e) in basis.iter().enumerate() {
        let t_inv = conjugate_spinor(e).scale(Complex64::new(-1.0, 0.0));
        let col = conjugate_spinor(&h.apply(&t_inv));
        m[0][j] = col.c0;
        m[1][j] = col.c1;
    }
    m
}

/// Quadrature defect above which Bell-state construction is refused.
pub const BELL_DEFECT_LIMIT: f64 = 1e-8;

/// `Σ wⱼ |gⱼ⟩ ⊗ |gⱼ*⟩` (unnormalized).
pub fn build_bell(q: &SphereQuadrature) -> Result<TwoSpinState> {
    let d = identity_defect(q)?;
    if !(d.defect < BELL_DEFECT_LIMIT) {
        return Err(Error::Quadrature(format!(
            "resolution-of-identity defect {:e} exceeds {BELL_DEFECT_LIMIT:e}",
            d.defect
        )));
    }
    Ok(bell_sum(q))
}

fn bell_sum(q: &SphereQuadrature) -> TwoSpinState {
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (g, w) in q.nodes.iter().zip(&q.weights) {
        let s = spinor_of(g);
        let t = TwoSpinState::product(&s, &conjugate_spinor(&s));
        for (acc, x) in amps.iter_mut().zip(t.amps) {
            *acc += x * *w;
        }
    }
    TwoSpinState { amps }
}

/// `(⟨g₁| ⊗ ⟨g₂*|) b`.
pub fn bell_correlation(g1: &SphereLabel, g2: &SphereLabel, b: &TwoSpinState) -> Amplitude {
    let detector = TwoSpinState::product(&spinor_of(g1), &conjugate_spinor(&spinor_of(g2)));
    Amplitude(detector.inner(b))
}

/// Squared norm of the unnormalized Bell state, `Σ wⱼwₖ ⟨gⱼ|gₖ⟩⟨gⱼ*|gₖ*⟩`,
/// evaluated as the double sum without assembling the state.
pub fn bell_norm(q: &SphereQuadrature) -> f64 {
    let spinors: Vec<Spinor> = q.nodes.iter().map(spinor_of).collect();
    let mut total = 0.0;
    for (sj, wj) in spinors.iter().zip(&q.weights) {
        let tj = conjugate_spinor(sj);
        for (sk, wk) in spinors.iter().zip(&q.weights) {
            let tk = conjugate_spinor(sk);
            total += wj * wk * (sj.inner(sk) * tj.inner(&tk)).re;
        }
    }
    total
}
