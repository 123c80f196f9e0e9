//! Runtime selection of coherence groups by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::group::{AnyLabel, CoherenceGroup};
use crate::hv::{sample_size_su2, sample_size_wh};
use crate::relation::{probability_of, relation_size, Amplitude, RelationSize};
use crate::su2::{SphereLabel, Su2};
use crate::wh::WeylHeisenberg;

/// User-facing label parameters; each model reads the fields it needs.
#[derive(Debug, Clone, Default)]
pub struct LabelParams {
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub lam: Option<Vec<Complex64>>,
}

/// A coherence group with its hidden-variable law, usable behind `dyn`.
pub trait RelationModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn parse_label(&self, params: &LabelParams) -> Result<AnyLabel>;

    /// The reference state, `g = e`.
    fn reference(&self, like: &AnyLabel) -> Result<AnyLabel>;

    fn amplitude(&self, detector: &AnyLabel, system: &AnyLabel) -> Result<Amplitude>;

    /// Draws `s(h)` for a random relation.
    fn sample_size(&self, rng: &mut dyn RngCore) -> f64;

    /// Size of the relation between the reference and `label`.
    fn size(&self, label: &AnyLabel) -> Result<RelationSize> {
        relation_size(self.amplitude(&self.reference(label)?, label)?)
    }

    /// Born probability of the relation between the reference and `label`.
    fn analytic_probability(&self, label: &AnyLabel) -> Result<f64> {
        Ok(probability_of(self.amplitude(&self.reference(label)?, label)?)?.value())
    }

    /// Whether `g` holds against one random relation.
    fn hv_trial(&self, g_size: RelationSize, rng: &mut dyn RngCore) -> bool {
        g_size.value() < self.sample_size(rng)
    }
}

fn mismatch(expected: &str, got: &AnyLabel) -> Error {
    Error::GroupMismatch {
        left: expected.into(),
        right: got.group_name().into(),
    }
}

/// Spin-1/2 coherent states on the sphere.
pub struct Su2Model;

impl Su2Model {
    fn sphere<'a>(&self, l: &'a AnyLabel) -> Result<&'a SphereLabel> {
        match l {
            AnyLabel::Sphere(s) => Ok(s),
            other => Err(mismatch("su2", other)),
        }
    }
}

impl RelationModel for Su2Model {
    fn name(&self) -> &'static str {
        "su2"
    }

    fn parse_label(&self, params: &LabelParams) -> Result<AnyLabel> {
        if params.lam.is_some() {
            return Err(Error::InvalidParameter(
                "su2 takes --theta/--phi, not --lam".into(),
            ));
        }
        let theta = params
            .theta
            .ok_or_else(|| Error::InvalidParameter("su2 needs --theta".into()))?;
        Ok(AnyLabel::Sphere(SphereLabel::new(
            theta,
            params.phi.unwrap_or(0.0),
        )?))
    }

    fn reference(&self, _like: &AnyLabel) -> Result<AnyLabel> {
        Ok(AnyLabel::Sphere(SphereLabel::north()))
    }

    fn amplitude(&self, detector: &AnyLabel, system: &AnyLabel) -> Result<Amplitude> {
        Su2.amplitude(self.sphere(detector)?, self.sphere(system)?)
    }

    fn sample_size(&self, mut rng: &mut dyn RngCore) -> f64 {
        sample_size_su2(&mut rng)
    }
}

/// Glauber coherent states of the Weyl-Heisenberg group.
pub struct WhModel;

impl WhModel {
    fn glauber<'a>(&self, l: &'a AnyLabel) -> Result<&'a [Complex64]> {
        match l {
            AnyLabel::Glauber(v) => Ok(v),
            other => Err(mismatch("wh", other)),
        }
    }
}

impl RelationModel for WhModel {
    fn name(&self) -> &'static str {
        "wh"
    }

    fn parse_label(&self, params: &LabelParams) -> Result<AnyLabel> {
        if params.theta.is_some() || params.phi.is_some() {
            return Err(Error::InvalidParameter(
                "wh takes --lam, not --theta/--phi".into(),
            ));
        }
        let lam = params
            .lam
            .clone()
            .ok_or_else(|| Error::InvalidParameter("wh needs --lam".into()))?;
        if lam.is_empty() || lam.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter(
                "--lam must be finite and nonempty".into(),
            ));
        }
        Ok(AnyLabel::Glauber(lam))
    }

    fn reference(&self, like: &AnyLabel) -> Result<AnyLabel> {
        let modes = self.glauber(like)?.len();
        Ok(AnyLabel::Glauber(vec![Complex64::new(0.0, 0.0); modes]))
    }

    fn amplitude(&self, detector: &AnyLabel, system: &AnyLabel) -> Result<Amplitude> {
        let d = self.glauber(detector)?;
        let s = self.glauber(system)?;
        WeylHeisenberg::new(d.len()).amplitude(&d.to_vec(), &s.to_vec())
    }

    fn sample_size(&self, mut rng: &mut dyn RngCore) -> f64 {
        sample_size_wh(&mut rng)
    }
}

/// Models keyed by name.
#[derive(Clone)]
pub struct ModelRegistry {
    models: BTreeMap<&'static str, Arc<dyn RelationModel>>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry {
            models: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = ModelRegistry::empty();
        r.register(Arc::new(Su2Model));
        r.register(Arc::new(WhModel));
        r
    }

    pub fn register(&mut self, model: Arc<dyn RelationModel>) {
        self.models.insert(model.name(), model);
    }

    pub fn get(&self, name: &str) -> Result<&dyn RelationModel> {
        self.models
            .get(name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "group",
                name: name.into(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.models.keys().copied().collect()
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        ModelRegistry::builtin()
    }
}
