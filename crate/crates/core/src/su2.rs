//! Spin-1/2 coherent states on the sphere `SU(2)/U(1)`.
//!
//! The reference state is the north pole `(1, 0)`. The coset representative
//! for `(θ, φ)` is the rotation by `θ` about the axis `(−sin φ, cos φ, 0)`:
//!
//! ```text
//! R(θ, φ) = [[cos θ/2, −e^{−iφ} sin θ/2],
//!            [e^{iφ} sin θ/2, cos θ/2]]
//! ```

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::CoherenceGroup;
use crate::relation::{Amplitude, RelationSize};

/// Polar/azimuthal coordinates of a point on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereLabel {
    theta: f64,
    phi: f64,
}

impl SphereLabel {
    /// `theta` must lie in `[0, π]`; `phi` is reduced mod 2π and dropped at
    /// the poles.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "sphere label needs theta in [0, pi] and finite phi, got ({theta}, {phi})"
            )));
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            let p = phi.rem_euclid(TAU);
            if p >= TAU {
                0.0
            } else {
                p
            }
        };
        Ok(SphereLabel { theta, phi })
    }

    pub fn north() -> Self {
        SphereLabel {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit vector in R³.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Recovers the label of a normalized spinor (global phase discarded).
    pub fn from_spinor(s: &Spinor) -> Self {
        let theta = 2.0 * s.c1.norm().atan2(s.c0.norm());
        let phi = s.c1.arg() - s.c0.arg();
        // theta is in [0, pi] by construction
        SphereLabel::new(theta.clamp(0.0, PI), phi).unwrap()
    }
}

/// A two-component spin state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl Spinor {
    pub fn new(c0: Complex64, c1: Complex64) -> Self {
        Spinor { c0, c1 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    pub fn scale(&self, k: Complex64) -> Spinor {
        Spinor::new(self.c0 * k, self.c1 * k)
    }
}

impl std::ops::Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

/// `R(θ, φ)|↑⟩`.
pub fn spinor_of(label: &SphereLabel) -> Spinor {
    let (s, c) = (0.5 * label.theta).sin_cos();
    Spinor::new(Complex64::new(c, 0.0), Complex64::from_polar(s, label.phi))
}

/// An SU(2) matrix `[[a, −b*], [b, a*]]` with `|a|² + |b|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element {
    pub a: Complex64,
    pub b: Complex64,
}

impl Su2Element {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, -self.b.conj()], [self.b, self.a.conj()]]
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        Spinor::new(
            self.a * s.c0 - self.b.conj() * s.c1,
            self.b * s.c0 + self.a.conj() * s.c1,
        )
    }

    /// Rotates a point on the sphere.
    pub fn act(&self, label: &SphereLabel) -> SphereLabel {
        SphereLabel::from_spinor(&self.apply(&spinor_of(label)))
    }
}

/// The group `SU(2)` in its two-dimensional representation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Su2;

impl CoherenceGroup for Su2 {
    type Element = Su2Element;
    type Label = SphereLabel;

    fn name(&self) -> &'static str {
        "su2"
    }

    fn identity(&self) -> Su2Element {
        Su2Element {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    fn compose(&self, g1: &Su2Element, g2: &Su2Element) -> Result<Su2Element> {
        Ok(Su2Element {
            a: g1.a * g2.a - g1.b.conj() * g2.b,
            b: g1.b * g2.a + g1.a.conj() * g2.b,
        })
    }

    fn inverse(&self, g: &Su2Element) -> Su2Element {
        Su2Element {
            a: g.a.conj(),
            b: -g.b,
        }
    }

    fn representative(&self, label: &SphereLabel) -> Su2Element {
        let s = spinor_of(label);
        Su2Element { a: s.c0, b: s.c1 }
    }

    fn reference_amplitude(&self, g: &Su2Element) -> Amplitude {
        Amplitude(g.a)
    }

    /// Haar-random element from a uniformly distributed unit quaternion.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Su2Element {
        use rand_distr::{Distribution, StandardNormal};
        let mut q = [0.0f64; 4];
        loop {
            for x in q.iter_mut() {
                *x = StandardNormal.sample(rng);
            }
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                q.iter_mut().for_each(|x| *x /= n);
                break;
            }
        }
        Su2Element {
            a: Complex64::new(q[0], q[1]),
            b: Complex64::new(q[2], q[3]),
        }
    }
}

/// `⟨detector|system⟩` through the group law.
pub fn su2_amplitude(detector: &SphereLabel, system: &SphereLabel) -> Amplitude {
    // composition in SU(2) cannot fail
    Su2.amplitude(detector, system).unwrap()
}

/// Half the Euclidean chord between the two points, `sin(Θ/2)`.
pub fn chord_size(detector: &SphereLabel, system: &SphereLabel) -> RelationSize {
    let d = detector.direction();
    let s = system.direction();
    let chord = d
        .iter()
        .zip(s.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    RelationSize::new((0.5 * chord).min(1.0)).unwrap()
}

/// A point uniformly distributed over the area of the sphere.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(rng: &mut R) -> SphereLabel {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let cos_theta = 1.0 - 2.0 * u;
    let theta = cos_theta.clamp(-1.0, 1.0).acos();
    SphereLabel::new(theta, TAU * v).unwrap()
}
