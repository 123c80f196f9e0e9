//! The two-mode squeezing automorphism and its distorted vacuum.
//!
//! `𝒟(ξ) = exp(ξa†b† − ξ*ab)` normal-orders to `β e^{ζa†b†} e^{−ζ*ab}` with
//! `ζ = e^{i arg ξ} tanh|ξ|` and `β = √(1 − |ζ|²)`, so the squeezed vacuum is
//! `|ζ⟩ = β Σₙ ζⁿ |n, n⟩`.
//!
//! Conjugation convention (fixed against the truncated Fock oracle): with the
//! detector `⟨λ| = ⟨0|U†(λ)` the relation amplitude is
//!
//! ```text
//! ⟨λa, λb|ζ⟩ = β e^{−(|λa|² + |λb|²)/2} e^{ζ λa* λb*}
//! ```
//!
//! and the boundary profile `|⟨λ|ζ⟩|²/β²` along `ζ → e^{iφ}` is
//! `exp(−|λa − e^{iφ} λb*|²)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{self, FockOperator, FockVector, Mode};
use crate::relation::Amplitude;

/// Largest admissible `|ζ|`; the boundary itself is singular.
pub const ZETA_MAX: f64 = 1.0 - 1e-9;

/// Exponent argument `ξ` of the squeezing operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiParam(Complex64);

impl XiParam {
    pub fn new(xi: Complex64) -> Result<Self> {
        if !xi.re.is_finite() || !xi.im.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite xi {xi}")));
        }
        Ok(XiParam(xi))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Normal-ordered squeezing parameter `ζ` with cached `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    zeta: Complex64,
    beta: f64,
}

impl SqueezeParam {
    pub fn new(zeta: Complex64) -> Result<Self> {
        let r = zeta.norm();
        if !r.is_finite() || r >= ZETA_MAX {
            return Err(Error::InvalidParameter(format!(
                "|zeta| = {r} must be below {ZETA_MAX}"
            )));
        }
        Ok(SqueezeParam {
            zeta,
            beta: ((1.0 - r) * (1.0 + r)).sqrt(),
        })
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `ζ = e^{i arg ξ} tanh|ξ|`, `β = sech|ξ|`.
pub fn normal_order(xi: XiParam) -> Result<SqueezeParam> {
    let r = xi.0.norm();
    if r == 0.0 {
        return SqueezeParam::new(Complex64::new(0.0, 0.0));
    }
    let t = r.tanh();
    if t >= ZETA_MAX {
        return Err(Error::InvalidParameter(format!(
            "|xi| = {r} puts zeta on the unit circle"
        )));
    }
    Ok(SqueezeParam {
        zeta: xi.0 * (t / r),
        beta: 1.0 / r.cosh(),
    })
}

/// Inverse of [`normal_order`]: `ξ = e^{i arg ζ} artanh|ζ|`.
pub fn xi_of(p: &SqueezeParam) -> XiParam {
    let r = p.zeta.norm();
    if r == 0.0 {
        XiParam(Complex64::new(0.0, 0.0))
    } else {
        XiParam(p.zeta * (r.atanh() / r))
    }
}

/// `β Σ_{n<N} ζⁿ |n, n⟩`.
pub fn squeezed_vacuum(p: &SqueezeParam, dim: usize) -> Result<FockVector> {
    check_tail(p, dim)?;
    let mut v = FockVector::zeros(dim, 2);
    let mut amps = v.amps().to_vec();
    let mut term = Complex64::new(p.beta, 0.0);
    for n in 0..dim {
        amps[n * dim + n] = term;
        term *= p.zeta;
    }
    v = FockVector::from_amps(dim, 2, amps)?;
    Ok(v)
}

fn check_tail(p: &SqueezeParam, dim: usize) -> Result<()> {
    let bound = fock::squeeze_tail_bound(p.zeta.norm(), dim);
    if !(bound < fock::SQUEEZE_TAIL_LIMIT) {
        return Err(Error::Truncation {
            dim,
            bound,
            limit: fock::SQUEEZE_TAIL_LIMIT,
        });
    }
    Ok(())
}

/// `⟨λa, λb|ζ⟩`.
pub fn epr_amplitude(lambda_a: Complex64, lambda_b: Complex64, p: &SqueezeParam) -> Amplitude {
    let gauss = -0.5 * (lambda_a.norm_sqr() + lambda_b.norm_sqr());
    let corr = p.zeta * lambda_a.conj() * lambda_b.conj();
    Amplitude((Complex64::new(gauss, 0.0) + corr).exp() * p.beta)
}

/// `exp(−|λa − e^{iφ} λb*|²)`: the `|ζ| → 1` limit of `|⟨λ|ζ⟩|²/β²` along
/// `ζ = r e^{iφ}`.
pub fn boundary_probability(lambda_a: Complex64, lambda_b: Complex64, phi: f64) -> f64 {
    let comb = lambda_a - Complex64::from_polar(1.0, phi) * lambda_b.conj();
    (-comb.norm_sqr()).exp()
}

/// Radii used for the boundary extrapolation.
pub const BOUNDARY_RADII: [f64; 3] = [0.9, 0.99, 0.999];

/// Richardson (polynomial) extrapolation of `|⟨λ|ζ⟩|²/β²` to `r = 1` from the
/// radii in [`BOUNDARY_RADII`].
pub fn boundary_limit(lambda_a: Complex64, lambda_b: Complex64, phi: f64) -> Result<f64> {
    let mut h = [0.0; 3];
    let mut f = [0.0; 3];
    for (i, r) in BOUNDARY_RADII.iter().enumerate() {
        let p = SqueezeParam::new(Complex64::from_polar(*r, phi))?;
        let amp = epr_amplitude(lambda_a, lambda_b, &p).modulus();
        h[i] = 1.0 - r;
        f[i] = amp * amp / (p.beta * p.beta);
    }
    Ok(richardson_at_zero(&h, &f))
}

/// Value at `h = 0` of the interpolating polynomial through `(h_i, f_i)`.
pub fn richardson_at_zero(h: &[f64], f: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..h.len() {
        let mut w = 1.0;
        for j in 0..h.len() {
            if j != i {
                w *= h[j] / (h[j] - h[i]);
            }
        }
        total += w * f[i];
    }
    total
}

/// `⟨ζ₁|ζ₂⟩ = β₁β₂ / (1 − ζ₁*ζ₂)`.
pub fn squeeze_overlap(p1: &SqueezeParam, p2: &SqueezeParam) -> Amplitude {
    let denom = Complex64::new(1.0, 0.0) - p1.zeta.conj() * p2.zeta;
    Amplitude(Complex64::new(p1.beta * p2.beta, 0.0) / denom)
}

/// `max(‖(a − ζb†)|ζ⟩‖, ‖(b − ζa†)|ζ⟩‖)` in the truncated space, ignoring
/// components at the top truncation level.
pub fn annihilator_residual(p: &SqueezeParam, dim: usize) -> Result<f64> {
    let v = squeezed_vacuum(p, dim)?;
    let res = |lower: Mode, raise: Mode| {
        let r = v.annihilate(lower).sub(&v.create(raise).scale(p.zeta));
        r.below_level(dim - 1).norm()
    };
    Ok(res(Mode::A, Mode::B).max(res(Mode::B, Mode::A)))
}

/// Space-time translation phases `k_a·x_a`, `k_b·x_b` (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePair {
    phase_a: f64,
    phase_b: f64,
}

impl PhasePair {
    pub fn new(phase_a: f64, phase_b: f64) -> Self {
        let canon = |x: f64| {
            let r = x.rem_euclid(TAU);
            if r >= TAU {
                0.0
            } else {
                r
            }
        };
        PhasePair {
            phase_a: canon(phase_a),
            phase_b: canon(phase_b),
        }
    }

    pub fn phase_a(&self) -> f64 {
        self.phase_a
    }

    pub fn phase_b(&self) -> f64 {
        self.phase_b
    }
}

/// Multiplying `a`, `b` by phases multiplies `ζ` by their product.
pub fn translate_zeta(p: &SqueezeParam, phases: PhasePair) -> SqueezeParam {
    SqueezeParam {
        zeta: p.zeta * Complex64::from_polar(1.0, phases.phase_a + phases.phase_b),
        beta: p.beta,
    }
}

/// Image of `(λa, λb)` under conjugation by `𝒟(ξ)`:
/// `𝒟 U(λ) 𝒟† = U(λ′)` with `λ′a = cosh r λa + e^{iθ} sinh r λb*` and
/// `λ′b = cosh r λb + e^{iθ} sinh r λa*`, where `ξ = r e^{iθ}`.
pub fn bogoliubov_map(xi: XiParam, lambda: [Complex64; 2]) -> [Complex64; 2] {
    let r = xi.0.norm();
    let ch = r.cosh();
    let sh = if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        xi.0 * (r.sinh() / r)
    };
    [
        lambda[0] * ch + sh * lambda[1].conj(),
        lambda[1] * ch + sh * lambda[0].conj(),
    ]
}

/// Outcome of [`bogoliubov_check`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BogoliubovReport {
    /// `λ′` read off the transformed operator's action on the vacuum.
    pub fitted: [[f64; 2]; 2],
    /// `λ′` from [`bogoliubov_map`].
    pub mapped: [[f64; 2]; 2],
    /// `|⟨00|T|00⟩ / ⟨00|U(λ′)|00⟩ − 1|`: a phase would show up here.
    pub phase_defect: f64,
    /// Max-norm deviation between `𝒟U(λ)𝒟†` and `U(λ′)` on low-lying columns,
    /// combined with the fitted-vs-mapped discrepancy.
    pub deviation: f64,
}

/// Number of low occupations per mode whose columns are compared.
const BOGOLIUBOV_COLUMNS: usize = 3;

/// Verifies numerically that conjugating a two-mode displacement by the
/// squeezing operator yields another displacement, and that its argument is
/// given by [`bogoliubov_map`].
pub fn bogoliubov_check(
    xi: XiParam,
    lambda: [Complex64; 2],
    dim: usize,
) -> Result<BogoliubovReport> {
    let d = fock::two_mode_squeeze_op(xi.0, dim)?;
    let d_adj = d.adjoint();
    let ua = fock::displacement(lambda[0], dim)?;
    let ub = fock::displacement(lambda[1], dim)?;
    let transformed = |v: &FockVector| d.apply(&fock::apply_product(&ua, &ub, &d_adj.apply(v)));

    let vac = FockVector::vacuum(dim, 2);
    let tv = transformed(&vac);
    let x00 = tv.get2(0, 0);
    let fitted = [tv.get2(1, 0) / x00, tv.get2(0, 1) / x00];
    let mapped = bogoliubov_map(xi, lambda);

    let ua2 = fock::displacement(fitted[0], dim)?;
    let ub2 = fock::displacement(fitted[1], dim)?;
    let reference = |v: &FockVector| fock::apply_product(&ua2, &ub2, v);
    let phase = x00 / reference(&vac).get2(0, 0);

    let keep = dim / 2;
    let mut worst = (fitted[0] - mapped[0])
        .norm()
        .max((fitted[1] - mapped[1]).norm());
    for m in 0..BOGOLIUBOV_COLUMNS {
        for n in 0..BOGOLIUBOV_COLUMNS {
            let e = FockVector::number2(dim, m, n);
            let diff = transformed(&e)
                .sub(&reference(&e).scale(phase))
                .below_level(keep);
            let max = diff.amps().iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(max);
        }
    }
    let pair = |z: [Complex64; 2]| [[z[0].re, z[0].im], [z[1].re, z[1].im]];
    Ok(BogoliubovReport {
        fitted: pair(fitted),
        mapped: pair(mapped),
        phase_defect: (phase - Complex64::new(1.0, 0.0)).norm(),
        deviation: worst,
    })
}

/// `⟨λa, λb|ζ⟩` computed entirely in the truncated Fock space: the state is
/// `𝒟(ξ)|0,0⟩` from the sector exponential and the detector is a pair of
/// displaced vacua.
pub fn epr_amplitude_oracle(
    lambda_a: Complex64,
    lambda_b: Complex64,
    p: &SqueezeParam,
    dim: usize,
) -> Result<Complex64> {
    let d = fock::two_mode_squeeze_op(xi_of(p).0, dim)?;
    let state = d.apply(&FockVector::vacuum(dim, 2));
    let detector = fock::glauber_pair_state(lambda_a, lambda_b, dim)?;
    Ok(detector.inner(&state))
}

/// Squeezed vacuum produced by the squeezing exponential.
pub fn squeezed_vacuum_oracle(xi: XiParam, dim: usize) -> Result<FockVector> {
    let d: FockOperator = fock::two_mode_squeeze_op(xi.0, dim)?;
    Ok(d.apply(&FockVector::vacuum(dim, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zp(re: f64, im: f64) -> SqueezeParam {
        SqueezeParam::new(c(re, im)).unwrap()
    }

    #[test]
    fn normal_order_examples() {
        let p = normal_order(XiParam::new(c(0.0, 0.0)).unwrap()).unwrap();
        assert_eq!(p.zeta(), c(0.0, 0.0));
        assert_eq!(p.beta(), 1.0);

        let p = normal_order(XiParam::new(c(1.0, 0.0)).unwrap()).unwrap();
        assert_abs_diff_eq!(p.zeta().re, 1f64.tanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.zeta().re, 0.76159, epsilon = 1e-5);
        assert_abs_diff_eq!(p.beta(), 0.64805, epsilon = 1e-5);

        let p = normal_order(XiParam::new(c(0.0, 1.0)).unwrap()).unwrap();
        assert_abs_diff_eq!(p.zeta().re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.zeta().im, 1f64.tanh(), epsilon = 1e-15);

        assert!(normal_order(XiParam::new(c(30.0, 0.0)).unwrap()).is_err());
        assert!(XiParam::new(c(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn beta_identity_and_boundary_rejection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let xi = c(rng.random::<f64>() * 3.0, rng.random::<f64>() * 3.0 - 1.5);
            let p = normal_order(XiParam::new(xi).unwrap()).unwrap();
            assert!((p.beta().powi(2) + p.zeta().norm_sqr() - 1.0).abs() < 1e-14);
            let back = xi_of(&p).value();
            assert!((back - xi).norm() < 1e-9 * xi.norm().max(1.0));
        }
        assert!(SqueezeParam::new(c(1.0, 0.0)).is_err());
        assert!(SqueezeParam::new(c(0.0, 1.0 - 1e-10)).is_err());
        assert!(SqueezeParam::new(c(0.999, 0.0)).is_ok());
    }

    #[test]
    fn squeezed_vacuum_examples() {
        let v = squeezed_vacuum(&zp(0.0, 0.0), 10).unwrap();
        assert_eq!(v, FockVector::vacuum(10, 2));
        let p = zp(0.5, 0.0);
        let v = squeezed_vacuum(&p, 40).unwrap();
        assert_abs_diff_eq!(v.get2(1, 1).re, p.beta() * 0.5, epsilon = 1e-16);
        assert_eq!(v.get2(1, 2), c(0.0, 0.0));
        assert!(v.is_normalized());
        assert!(squeezed_vacuum(&zp(0.9, 0.0), 40).is_err());
        assert!(squeezed_vacuum(&zp(0.9, 0.0), 200).is_ok());
    }

    #[test]
    fn squeezed_vacuum_matches_exponential() {
        for xi in [c(0.3, 0.0), c(0.0, 0.55), c(-0.4, 0.5), c(0.7, 0.0)] {
            let xi = XiParam::new(xi).unwrap();
            let closed = squeezed_vacuum(&normal_order(xi).unwrap(), 40).unwrap();
            let oracle = squeezed_vacuum_oracle(xi, 40).unwrap();
            let err = closed
                .sub(&oracle)
                .amps()
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "xi={:?}: {err}", xi);
        }
    }

    #[test]
    fn epr_examples() {
        let p = zp(0.3, -0.2);
        assert_abs_diff_eq!(
            epr_amplitude(c(0.0, 0.0), c(0.0, 0.0), &p).0.re,
            p.beta(),
            epsilon = 1e-15
        );
        let (a, b) = (c(0.7, -0.2), c(-0.1, 0.4));
        let vac = zp(0.0, 0.0);
        let fact = crate::wh::vacuum_amplitude(&[a]).0 * crate::wh::vacuum_amplitude(&[b]).0;
        assert!((epr_amplitude(a, b, &vac).0 - fact).norm() < 1e-15);
    }

    #[test]
    fn epr_matches_oracle_at_half() {
        let p = zp(0.5, 0.0);
        let oracle = epr_amplitude_oracle(c(1.0, 0.0), c(1.0, 0.0), &p, 40).unwrap();
        let closed = epr_amplitude(c(1.0, 0.0), c(1.0, 0.0), &p).value();
        assert!((oracle - closed).norm() < 1e-8, "{oracle} vs {closed}");
    }

    #[test]
    fn epr_conjugation_is_the_one_the_oracle_picks() {
        // complex λ and ζ: the unconjugated exponent ζλaλb gives a different value
        let p = zp(0.2, 0.4);
        let (a, b) = (c(0.3, 0.8), c(-0.5, 0.6));
        let oracle = epr_amplitude_oracle(a, b, &p, 40).unwrap();
        let closed = epr_amplitude(a, b, &p).value();
        assert!((oracle - closed).norm() < 1e-9);
        let naive =
            (c(-0.5 * (a.norm_sqr() + b.norm_sqr()), 0.0) + p.zeta() * a * b).exp() * p.beta();
        assert!((oracle - naive).norm() > 1e-3);
    }

    #[test]
    fn correlation_does_not_factorize() {
        let p = zp(0.5, 0.0);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let joint = epr_amplitude(one, one, &p).modulus();
        let split = epr_amplitude(one, zero, &p).modulus() * epr_amplitude(zero, one, &p).modulus()
            / p.beta();
        assert!((joint - split).abs() > 1e-3);
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_probability(c(0.0, 0.0), c(0.0, 0.0), 1.3), 1.0);
        let (a, b) = (c(0.6, 0.2), c(-0.3, 0.5));
        let argmin = |b: Complex64| {
            (0..3600)
                .map(|k| k as f64 * TAU / 3600.0)
                .max_by(|x, y| {
                    boundary_probability(a, b, *x)
                        .partial_cmp(&boundary_probability(a, b, *y))
                        .unwrap()
                })
                .unwrap()
        };
        let shift = (argmin(-b) - argmin(b)).rem_euclid(TAU);
        assert!((shift - PI).abs() < 2.0 * TAU / 3600.0, "{shift}");
    }

    #[test]
    fn richardson_limit_matches_profile() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let a = Complex64::from_polar(rng.random::<f64>(), rng.random::<f64>() * TAU);
            let b = Complex64::from_polar(rng.random::<f64>(), rng.random::<f64>() * TAU);
            let phi = rng.random::<f64>() * TAU;
            let lim = boundary_limit(a, b, phi).unwrap();
            assert!((lim - boundary_probability(a, b, phi)).abs() < 1e-4);
        }
    }

    #[test]
    fn richardson_is_exact_on_quadratics() {
        let h = [0.1, 0.01, 0.001];
        let f: Vec<f64> = h.iter().map(|x| 2.0 - 3.0 * x + 5.0 * x * x).collect();
        assert_abs_diff_eq!(richardson_at_zero(&h, &f), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let p = zp(0.3, 0.4);
        assert_abs_diff_eq!(squeeze_overlap(&p, &p).0.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(squeeze_overlap(&p, &p).0.im, 0.0, epsilon = 1e-15);
        let o = squeeze_overlap(&zp(0.0, 0.0), &zp(0.5, 0.0));
        assert_abs_diff_eq!(o.0.re, 0.75f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(o.0.re, 0.86603, epsilon = 1e-5);
    }

    #[test]
    fn overlap_matches_oracle() {
        let (p1, p2) = (zp(0.3, 0.0), zp(0.0, 0.5));
        let v1 = squeezed_vacuum_oracle(xi_of(&p1), 40).unwrap();
        let v2 = squeezed_vacuum_oracle(xi_of(&p2), 40).unwrap();
        let oracle = v1.inner(&v2);
        assert!((oracle - squeeze_overlap(&p1, &p2).value()).norm() < 1e-8);
    }

    #[test]
    fn overlap_sharpens_towards_boundary() {
        let m: Vec<f64> = [0.5, 0.9, 0.99]
            .iter()
            .map(|&r| {
                squeeze_overlap(
                    &SqueezeParam::new(Complex64::from_polar(r, 0.0)).unwrap(),
                    &SqueezeParam::new(Complex64::from_polar(r, 0.1)).unwrap(),
                )
                .modulus()
            })
            .collect();
        assert!(m[0] > m[1] && m[1] > m[2], "{m:?}");
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(annihilator_residual(&zp(0.0, 0.0), 10).unwrap(), 0.0);
        assert!(annihilator_residual(&zp(0.5, 0.0), 40).unwrap() < 1e-8);
        assert!(annihilator_residual(&zp(0.9, 0.0), 200).unwrap() < 1e-6);
        assert!(annihilator_residual(&zp(0.3, 0.4), 40).unwrap() < 1e-12);
        // a alone does not annihilate |ζ⟩
        let v = squeezed_vacuum(&zp(0.5, 0.0), 40).unwrap();
        assert!(v.annihilate(Mode::A).norm() > 0.1);
    }

    #[test]
    fn translation_examples() {
        let p = zp(0.4, -0.3);
        assert_eq!(translate_zeta(&p, PhasePair::new(0.0, 0.0)), p);
        let q = translate_zeta(&p, PhasePair::new(FRAC_PI_2, FRAC_PI_2));
        assert!((q.zeta() + p.zeta()).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let ph = PhasePair::new(rng.random::<f64>() * 20.0 - 10.0, rng.random::<f64>() * 7.0);
            let q = translate_zeta(&p, ph);
            assert!((q.zeta().norm() - p.zeta().norm()).abs() < 1e-15);
            assert_eq!(q.beta(), p.beta());
        }
    }

    #[test]
    fn translation_is_compensated_by_rotating_lambda_b() {
        let p = zp(0.45, 0.2);
        let (a, b) = (c(0.8, -0.3), c(0.2, 0.9));
        let delta = 0.77;
        let q = translate_zeta(&p, PhasePair::new(delta, 0.0));
        let before = epr_amplitude(a, b, &p).modulus();
        let after = epr_amplitude(a, b * Complex64::from_polar(1.0, delta), &q).modulus();
        assert!((before - after).abs() < 1e-14);
        // the rotation matters: without it the probability changes
        assert!((epr_amplitude(a, b, &q).modulus() - before).abs() > 1e-3);
    }

    #[test]
    fn bogoliubov_identity() {
        let lam = [c(0.6, -0.2), c(0.1, 0.3)];
        let r = bogoliubov_check(XiParam::new(c(0.0, 0.0)).unwrap(), lam, 24).unwrap();
        assert!(r.deviation < 1e-12);
        assert_eq!(bogoliubov_map(XiParam::new(c(0.0, 0.0)).unwrap(), lam), lam);
    }

    #[test]
    fn bogoliubov_half() {
        let xi = XiParam::new(c(0.5, 0.0)).unwrap();
        let r = bogoliubov_check(xi, [c(1.0, 0.0), c(0.0, 0.0)], 40).unwrap();
        assert!(r.deviation < 1e-6, "{r:?}");
        assert!(r.phase_defect < 1e-8);
        let r = bogoliubov_check(
            XiParam::new(c(0.2, 0.3)).unwrap(),
            [c(0.3, 0.4), c(-0.5, 0.1)],
            40,
        )
        .unwrap();
        assert!(r.deviation < 1e-6, "{r:?}");
    }

    #[test]
    fn bogoliubov_preserves_symplectic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut rc = || {
            c(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        };
        for _ in 0..200 {
            let xi = XiParam::new(rc()).unwrap();
            let l1 = [rc(), rc()];
            let l2 = [rc(), rc()];
            let before = crate::wh::scalar_product(&l1, &l2).im;
            let m1 = bogoliubov_map(xi, l1);
            let m2 = bogoliubov_map(xi, l2);
            let after = crate::wh::scalar_product(&m1, &m2).im;
            assert!((before - after).abs() < 1e-8 * (1.0 + before.abs()));
        }
    }
}
