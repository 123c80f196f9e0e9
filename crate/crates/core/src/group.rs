//! Group-agnostic relation algebra.
//!
//! A coherence group acts on a reference state; the amplitude between a
//! detector prepared by `g₁` and a system prepared by `g₂` depends only on
//! `g = g₁⁻¹g₂` through `f(g) = ⟨0|U(g)|0⟩`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::relation::{relation_size, Amplitude, RelationSize};

/// A group of preparation transformations together with its reference state.
pub trait CoherenceGroup {
    /// A group element.
    type Element: Clone;
    /// A coset representative label (what an experimentalist dials in).
    type Label;

    fn name(&self) -> &'static str;

    fn identity(&self) -> Self::Element;

    fn compose(&self, g1: &Self::Element, g2: &Self::Element) -> Result<Self::Element>;

    fn inverse(&self, g: &Self::Element) -> Self::Element;

    /// The fixed coset representative for a label.
    fn representative(&self, label: &Self::Label) -> Self::Element;

    /// `f(g) = ⟨0|U(g)|0⟩`.
    fn reference_amplitude(&self, g: &Self::Element) -> Amplitude;

    /// Draws a group element from the invariant measure (or, for non-compact
    /// groups, from the relational hidden-variable law on the coset space).
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Element;

    /// Amplitude `⟨detector|system⟩ = f(g_d⁻¹ g_s)`.
    fn amplitude(&self, detector: &Self::Label, system: &Self::Label) -> Result<Amplitude> {
        let gd = self.representative(detector);
        let gs = self.representative(system);
        let g = self.compose(&self.inverse(&gd), &gs)?;
        Ok(self.reference_amplitude(&g))
    }
}

/// Distance between two coherent states of the same group.
///
/// Both orderings are evaluated and their moduli averaged, so the result is
/// symmetric to the last bit rather than up to rounding.
pub fn pairwise_distance<G: CoherenceGroup>(
    group: &G,
    state1: &G::Label,
    state2: &G::Label,
) -> Result<RelationSize> {
    let m12 = group.amplitude(state1, state2)?.checked_modulus()?;
    let m21 = group.amplitude(state2, state1)?.checked_modulus()?;
    relation_size(Amplitude::real(0.5 * (m12 + m21)))
}

/// A label for one of the built-in groups, used where the group is chosen at
/// runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyLabel {
    Sphere(crate::su2::SphereLabel),
    Glauber(Vec<Complex64>),
}

impl AnyLabel {
    pub fn group_name(&self) -> &'static str {
        match self {
            AnyLabel::Sphere(_) => "su2",
            AnyLabel::Glauber(_) => "wh",
        }
    }
}

/// Distance between two runtime-typed labels; fails on a group mismatch.
pub fn pairwise_distance_any(state1: &AnyLabel, state2: &AnyLabel) -> Result<RelationSize> {
    match (state1, state2) {
        (AnyLabel::Sphere(a), AnyLabel::Sphere(b)) => pairwise_distance(&crate::su2::Su2, a, b),
        (AnyLabel::Glauber(a), AnyLabel::Glauber(b)) => {
            pairwise_distance(&crate::wh::WeylHeisenberg::new(a.len()), a, b)
        }
        _ => Err(crate::Error::GroupMismatch {
            left: state1.group_name().into(),
            right: state2.group_name().into(),
        }),
    }
}
