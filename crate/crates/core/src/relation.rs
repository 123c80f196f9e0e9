//! Amplitudes, probabilities and relation sizes.
//!
//! Everything observable about a relation between a detector state and a
//! system state follows from a single complex amplitude `f`: the probability
//! that the relation holds is `|f|²` and its size (distance from the group
//! identity) is `√(1 − |f|²)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Overshoot of `|f|` above one that is silently clamped (truncation noise).
pub const CLAMP_WINDOW: f64 = 1e-12;

/// Overshoot of `|f|` above one that is still accepted (and clamped).
pub const REJECT_THRESHOLD: f64 = 1e-9;

/// The overlap between a detector state and a system state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplitude(pub Complex64);

impl Amplitude {
    pub fn new(value: Complex64) -> Self {
        Amplitude(value)
    }

    pub fn real(re: f64) -> Self {
        Amplitude(Complex64::new(re, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    /// Swapping the roles of system and detector conjugates the amplitude.
    pub fn conj(&self) -> Self {
        Amplitude(self.0.conj())
    }

    /// `|f|` clamped to `[0, 1]`.
    ///
    /// Values in `(1, 1 + 1e-9]` are clamped to one; anything larger means the
    /// states feeding the amplitude were not normalized.
    pub fn checked_modulus(&self) -> Result<f64> {
        let m = self.modulus();
        if !m.is_finite() || m > 1.0 + REJECT_THRESHOLD {
            return Err(Error::AmplitudeOvershoot { modulus: m });
        }
        Ok(m.min(1.0))
    }
}

impl From<Complex64> for Amplitude {
    fn from(value: Complex64) -> Self {
        Amplitude(value)
    }
}

/// Size `s ∈ [0, 1]` of a relation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct RelationSize(f64);

impl RelationSize {
    /// Builds a size directly, rejecting values outside `[0, 1]`.
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "relation size {s} outside [0, 1]"
            )));
        }
        Ok(RelationSize(s))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// The cross section `s²` of the relation.
    pub fn cross_section(&self) -> f64 {
        self.0 * self.0
    }
}

/// Probability that a relation holds, optionally carrying Monte Carlo metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probability {
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_halfwidth: Option<f64>,
}

impl Probability {
    pub fn exact(p: f64) -> Self {
        Probability {
            p,
            n_samples: None,
            ci_halfwidth: None,
        }
    }

    pub fn value(&self) -> f64 {
        self.p
    }
}

/// `p = |f|²`.
pub fn probability_of(amp: Amplitude) -> Result<Probability> {
    let m = amp.checked_modulus()?;
    Ok(Probability::exact(m * m))
}

/// `s = √(1 − |f|²)`.
pub fn relation_size(amp: Amplitude) -> Result<RelationSize> {
    let m = amp.checked_modulus()?;
    // (1 - m)(1 + m) keeps precision when m is close to one
    let s2 = ((1.0 - m) * (1.0 + m)).max(0.0);
    Ok(RelationSize(s2.sqrt().min(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn identical_and_orthogonal() {
        assert_eq!(probability_of(Amplitude::real(1.0)).unwrap().p, 1.0);
        assert_eq!(probability_of(Amplitude::real(0.0)).unwrap().p, 0.0);
        assert_eq!(relation_size(Amplitude::real(1.0)).unwrap().value(), 0.0);
        assert_eq!(relation_size(Amplitude::real(0.0)).unwrap().value(), 1.0);
    }

    #[test]
    fn vacuum_amplitude_at_unit_displacement() {
        let p = probability_of(Amplitude::real((-0.5f64).exp())).unwrap();
        assert_abs_diff_eq!(p.p, (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.p, 0.36788, epsilon = 1e-5);
    }

    #[test]
    fn chord_size_at_right_angle() {
        let s = relation_size(Amplitude::real(FRAC_PI_4.cos())).unwrap();
        assert_abs_diff_eq!(s.value(), FRAC_PI_4.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.value(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn overshoot_policy() {
        let tiny = Amplitude::real(1.0 + 5e-13);
        assert_eq!(probability_of(tiny).unwrap().p, 1.0);
        assert_eq!(relation_size(tiny).unwrap().value(), 0.0);
        // still accepted up to the reject threshold
        assert_eq!(probability_of(Amplitude::real(1.0 + 5e-10)).unwrap().p, 1.0);
        let bad = Amplitude::real(1.0 + 1e-6);
        assert!(matches!(
            probability_of(bad),
            Err(Error::AmplitudeOvershoot { .. })
        ));
        assert!(relation_size(bad).is_err());
        assert!(probability_of(Amplitude::real(f64::NAN)).is_err());
    }

    #[test]
    fn conjugation_leaves_probability() {
        let a = Amplitude::new(Complex64::new(0.3, -0.6));
        assert_eq!(
            probability_of(a).unwrap().p,
            probability_of(a.conj()).unwrap().p
        );
    }

    #[test]
    fn size_rejects_out_of_range() {
        assert!(RelationSize::new(1.5).is_err());
        assert!(RelationSize::new(-0.1).is_err());
        assert_eq!(RelationSize::new(0.5).unwrap().cross_section(), 0.25);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn probability_plus_cross_section_is_one(r in 0.0f64..=1.0, arg in 0.0f64..6.3) {
                let amp = Amplitude::new(Complex64::from_polar(r, arg));
                let p = probability_of(amp).unwrap().p;
                let s = relation_size(amp).unwrap();
                prop_assert!((p + s.cross_section() - 1.0).abs() < 1e-14);
                prop_assert!((0.0..=1.0).contains(&s.value()));
            }
        }
    }
}
