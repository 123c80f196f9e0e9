//! Closed forms versus the truncated Fock-space oracle, as named suites.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell::{
    bell_correlation, bell_norm, build_bell, identity_defect, SphereQuadrature, TwoSpinState,
};
use crate::error::{Error, Result};
use crate::fock::expm::ExpmMethod;
use crate::fock::{
    displacement_tail_bound, displacement_with, squeeze_tail_bound, two_mode_squeeze_op_with,
    FockOperator, FockVector, DEFAULT_DIM_ONE_MODE, DEFAULT_DIM_TWO_MODE,
};
use crate::squeeze::{
    annihilator_residual, boundary_limit, boundary_probability, epr_amplitude, normal_order,
    squeeze_overlap, squeezed_vacuum, xi_of, SqueezeParam, XiParam,
};
use crate::su2::{su2_amplitude, SphereLabel};
use crate::wh::{vacuum_amplitude, wh_compose, WHElement};

/// Truncations, seed and exponential used by the suites.
pub struct OracleConfig<'a> {
    pub dim_one_mode: usize,
    pub dim_two_mode: usize,
    pub seed: u64,
    pub expm: &'a dyn ExpmMethod,
}

impl<'a> OracleConfig<'a> {
    pub fn new(expm: &'a dyn ExpmMethod) -> Self {
        OracleConfig {
            dim_one_mode: DEFAULT_DIM_ONE_MODE,
            dim_two_mode: DEFAULT_DIM_TWO_MODE,
            seed: 0,
            expm,
        }
    }

    /// Forces the same truncation on one- and two-mode suites.
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim_one_mode = dim;
        self.dim_two_mode = dim;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(salt);
        r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub max_error: Option<f64>,
    pub tolerance: f64,
    /// Largest truncation tail bound encountered, when the suite truncates.
    pub tail_bound: Option<f64>,
    pub error: Option<String>,
}

struct Tally {
    cases: usize,
    max_error: f64,
    tail: Option<f64>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            max_error: 0.0,
            tail: None,
        }
    }

    fn err(&mut self, e: f64) {
        self.cases += 1;
        // NaN must fail the suite
        self.max_error = if e.is_nan() || self.max_error.is_nan() {
            f64::NAN
        } else {
            self.max_error.max(e)
        };
    }

    fn tail(&mut self, t: f64) {
        self.tail = Some(self.tail.map_or(t, |x: f64| x.max(t)));
    }
}

fn finish(name: &'static str, tolerance: f64, run: Result<Tally>) -> SuiteResult {
    match run {
        Ok(t) => SuiteResult {
            name,
            passed: t.max_error < tolerance,
            cases: t.cases,
            max_error: Some(t.max_error),
            tolerance,
            tail_bound: t.tail,
            error: None,
        },
        Err(e) => {
            let tail_bound = match &e {
                Error::Truncation { bound, .. } => Some(*bound),
                _ => None,
            };
            SuiteResult {
                name,
                passed: false,
                cases: 0,
                max_error: None,
                tolerance,
                tail_bound,
                error: Some(e.to_string()),
            }
        }
    }
}

fn random_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.random::<f64>())
}

fn max_diff(a: &FockVector, b: &FockVector) -> f64 {
    a.amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn glauber_pair(
    la: Complex64,
    lb: Complex64,
    dim: usize,
    m: &dyn ExpmMethod,
) -> Result<FockVector> {
    let va = displacement_with(la, dim, m)?.apply(&FockVector::vacuum(dim, 1));
    let vb = displacement_with(lb, dim, m)?.apply(&FockVector::vacuum(dim, 1));
    FockVector::tensor(&va, &vb)
}

fn squeezed_state(p: &SqueezeParam, dim: usize, m: &dyn ExpmMethod) -> Result<(FockVector, f64)> {
    let d = two_mode_squeeze_op_with(xi_of(p).value(), dim, m)?;
    let tail = squeeze_tail_bound(p.zeta().norm(), dim);
    Ok((d.apply(&FockVector::vacuum(dim, 2)), tail))
}

/// `⟨0|U(λ)|0⟩` from the oracle against `e^{−|λ|²/2}` for 50 random `|λ| ≤ 2`.
pub fn glauber_vacuum(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let mut rng = cfg.rng(1);
        let mut t = Tally::new();
        for _ in 0..50 {
            let lam = random_disk(&mut rng, 2.0);
            t.tail(displacement_tail_bound(lam, cfg.dim_one_mode));
            let u = displacement_with(lam, cfg.dim_one_mode, cfg.expm)?;
            t.err((u.entry(0, 0) - vacuum_amplitude(&[lam]).value()).norm());
        }
        Ok(t)
    };
    finish("glauber_vacuum", 1e-9, run())
}

/// `U(λ₁)U(λ₂) = e^{iθ}U(λ₁+λ₂)` with `θ` from the group law, on the lower
/// half block, for 20 random pairs.
pub fn composition_cocycle(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let mut rng = cfg.rng(2);
        let n = cfg.dim_one_mode;
        let mut t = Tally::new();
        for _ in 0..20 {
            let l1 = random_disk(&mut rng, 1.0);
            let l2 = random_disk(&mut rng, 1.0);
            let g = wh_compose(
                &WHElement::new(0.0, vec![l1]),
                &WHElement::new(0.0, vec![l2]),
            )?;
            for l in [l1, l2, g.lam()[0]] {
                t.tail(displacement_tail_bound(l, n));
            }
            let lhs = displacement_with(l1, n, cfg.expm)?.mul(&displacement_with(l2, n, cfg.expm)?);
            let rhs: FockOperator = displacement_with(g.lam()[0], n, cfg.expm)?
                .scale(Complex64::from_polar(1.0, g.theta()));
            t.err(lhs.max_deviation_in_block(&rhs, n / 2));
        }
        Ok(t)
    };
    finish("composition_cocycle", 1e-8, run())
}

/// Normal-ordered squeezed vacuum against `𝒟(ξ)|0,0⟩` for `|ξ| ≤ 0.7`.
pub fn squeezed_vacuum_suite(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let mut rng = cfg.rng(3);
        let n = cfg.dim_two_mode;
        let mut t = Tally::new();
        let mut xis = vec![Complex64::new(0.7, 0.0), Complex64::new(0.0, -0.7)];
        xis.extend((0..6).map(|_| random_disk(&mut rng, 0.7)));
        for xi in xis {
            let p = normal_order(XiParam::new(xi)?)?;
            let closed = squeezed_vacuum(&p, n)?;
            let (oracle, tail) = squeezed_state(&p, n, cfg.expm)?;
            t.tail(tail);
            t.err(max_diff(&closed, &oracle));
        }
        Ok(t)
    };
    finish("squeezed_vacuum", 1e-8, run())
}

/// Grid of `(λa, λb, ζ)` points, 5 values each.
pub fn epr_grid() -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
    let c = Complex64::new;
    let la = vec![
        c(0.0, 0.0),
        c(0.5, 0.0),
        c(-0.3, 0.6),
        c(0.0, -1.0),
        c(0.8, 0.4),
    ];
    let lb = vec![
        c(0.0, 0.0),
        c(0.4, -0.2),
        c(-0.7, 0.0),
        c(0.2, 0.9),
        c(-0.5, -0.5),
    ];
    let z = vec![
        c(0.0, 0.0),
        c(0.3, 0.0),
        Complex64::from_polar(0.5, PI / 3.0),
        c(0.0, 0.6),
        c(-0.45, 0.0),
    ];
    (la, lb, z)
}

/// `⟨λa, λb|ζ⟩` in closed form against oracle inner products on the 125-point grid.
pub fn epr_amplitude_suite(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let n = cfg.dim_two_mode;
        let (la, lb, zs) = epr_grid();
        let mut detectors = Vec::new();
        let mut t = Tally::new();
        for a in &la {
            for b in &lb {
                t.tail(displacement_tail_bound(*a, n).max(displacement_tail_bound(*b, n)));
                detectors.push((*a, *b, glauber_pair(*a, *b, n, cfg.expm)?));
            }
        }
        for z in zs {
            let p = SqueezeParam::new(z)?;
            let (state, tail) = squeezed_state(&p, n, cfg.expm)?;
            t.tail(tail);
            for (a, b, det) in &detectors {
                let oracle = det.inner(&state);
                t.err((oracle - epr_amplitude(*a, *b, &p).value()).norm());
            }
        }
        Ok(t)
    };
    finish("epr_amplitude", 1e-7, run())
}

/// `(a − ζb†)|ζ⟩` and `(b − ζa†)|ζ⟩` vanish at `ζ = 0.5`.
pub fn annihilator_suite(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let n = cfg.dim_two_mode;
        let mut t = Tally::new();
        for z in [Complex64::new(0.5, 0.0), Complex64::from_polar(0.5, 2.0)] {
            let p = SqueezeParam::new(z)?;
            t.tail(squeeze_tail_bound(0.5, n));
            t.err(annihilator_residual(&p, n)?);
        }
        Ok(t)
    };
    finish("annihilator", 1e-8, run())
}

/// `⟨ζ₁|ζ₂⟩` in closed form against oracle states.
pub fn overlap_suite(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let mut rng = cfg.rng(4);
        let n = cfg.dim_two_mode;
        let mut t = Tally::new();
        for _ in 0..6 {
            let p1 = normal_order(XiParam::new(random_disk(&mut rng, 0.7))?)?;
            let p2 = normal_order(XiParam::new(random_disk(&mut rng, 0.7))?)?;
            let (s1, t1) = squeezed_state(&p1, n, cfg.expm)?;
            let (s2, t2) = squeezed_state(&p2, n, cfg.expm)?;
            t.tail(t1.max(t2));
            t.err((s1.inner(&s2) - squeeze_overlap(&p1, &p2).value()).norm());
        }
        Ok(t)
    };
    finish("squeeze_overlap", 1e-8, run())
}

/// Richardson limit of `|⟨λ|ζ⟩|²/β²` against the boundary profile for 10
/// random `(λa, λb, φ)`.
pub fn boundary_suite(cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let mut rng = cfg.rng(5);
        let mut t = Tally::new();
        for _ in 0..10 {
            let a = random_disk(&mut rng, 1.0);
            let b = random_disk(&mut rng, 1.0);
            let phi = TAU * rng.random::<f64>();
            t.err((boundary_limit(a, b, phi)? - boundary_probability(a, b, phi)).abs());
        }
        Ok(t)
    };
    finish("boundary_limit", 1e-4, run())
}

fn bell_state_at_16() -> Result<(SphereQuadrature, TwoSpinState, f64)> {
    let q = SphereQuadrature::of_order(16)?;
    let scale = identity_defect(&q)?.scale;
    let b = build_bell(&q)?;
    Ok((q, b, scale))
}

/// Resolution-of-identity defect of the 16×32 quadrature.
pub fn bell_identity_suite(_cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let mut t = Tally::new();
        t.err(identity_defect(&SphereQuadrature::of_order(16)?)?.defect);
        Ok(t)
    };
    finish("bell_identity", 1e-12, run())
}

/// `1 −` fidelity of the normalized Bell state with the singlet.
pub fn bell_singlet_suite(_cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let (_, b, _) = bell_state_at_16()?;
        let mut t = Tally::new();
        t.err((1.0 - b.singlet_fidelity()).abs());
        Ok(t)
    };
    finish("bell_singlet", 1e-10, run())
}

/// `(⟨g₁| ⊗ ⟨g₂*|)ℬ = c⟨g₁|g₂⟩` on a 10×10 grid.
pub fn bell_correlation_suite(_cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let (_, b, c) = bell_state_at_16()?;
        let grid: Vec<SphereLabel> = (0..10)
            .map(|k| SphereLabel::new(PI * k as f64 / 9.0, 0.61 * k as f64))
            .collect::<Result<_>>()?;
        let mut t = Tally::new();
        for g1 in &grid {
            for g2 in &grid {
                let e = bell_correlation(g1, g2, &b).value() - su2_amplitude(g1, g2).value() * c;
                t.err(e.norm());
            }
        }
        Ok(t)
    };
    finish("bell_correlation", 1e-9, run())
}

/// Double-sum norm against the assembled state's norm and `c·Σw`.
pub fn bell_norm_suite(_cfg: &OracleConfig) -> SuiteResult {
    let run = || -> Result<Tally> {
        let (q, b, c) = bell_state_at_16()?;
        let nrm = bell_norm(&q);
        let mut t = Tally::new();
        t.err((nrm - b.norm_sqr()).abs());
        t.err((nrm - c * q.total_weight()).abs());
        Ok(t)
    };
    finish("bell_norm", 1e-10, run())
}

pub type Suite = fn(&OracleConfig) -> SuiteResult;

/// All suites in reporting order.
pub const SUITES: [(&str, Suite); 11] = [
    ("glauber_vacuum", glauber_vacuum),
    ("composition_cocycle", composition_cocycle),
    ("squeezed_vacuum", squeezed_vacuum_suite),
    ("epr_amplitude", epr_amplitude_suite),
    ("annihilator", annihilator_suite),
    ("squeeze_overlap", overlap_suite),
    ("boundary_limit", boundary_suite),
    ("bell_identity", bell_identity_suite),
    ("bell_singlet", bell_singlet_suite),
    ("bell_correlation", bell_correlation_suite),
    ("bell_norm", bell_norm_suite),
];

pub fn run_all(cfg: &OracleConfig) -> Vec<SuiteResult> {
    SUITES.iter().map(|(_, s)| s(cfg)).collect()
}
