//! The relational hidden variable.
//!
//! A random relation `h` is drawn with `P(s(h) < r) = r²`; the relation `g`
//! "holds" when `s(g) < s(h)`, which happens with probability `1 − s(g)² = |f(g)|²`.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::AnyLabel;
use crate::registry::RelationModel;
use crate::relation::RelationSize;
use crate::su2::{chord_size, sample_uniform_sphere, SphereLabel};
use crate::wh::sample_maxwellian;

/// Trials per independent stream. Fixed so results do not depend on the
/// number of worker threads.
pub const CHUNK: u64 = 1 << 14;

/// Kolmogorov-Smirnov critical coefficient at the 1% level.
pub const KS_CRITICAL_1PCT: f64 = 1.63;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HvEstimate {
    pub p_hat: f64,
    pub n: u64,
    pub stderr: f64,
    pub seed: u64,
}

impl HvEstimate {
    pub fn from_counts(hits: u64, n: u64, seed: u64) -> Self {
        let p_hat = hits as f64 / n as f64;
        HvEstimate {
            p_hat,
            n,
            stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
            seed,
        }
    }

    /// `|p_hat − p| / stderr`; infinite when the estimate is degenerate but wrong.
    pub fn z_score(&self, p: f64) -> f64 {
        let d = (self.p_hat - p).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// Size of a uniformly random relation on the sphere, measured from the pole.
pub fn sample_size_su2<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let h = sample_uniform_sphere(rng);
    chord_size(&SphereLabel::north(), &h).value()
}

/// Size `√(1 − e^{−|μ|²})` of a Maxwellian relation.
pub fn sample_size_wh<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let mu = sample_maxwellian(rng, 1)[0];
    (-(-mu.norm_sqr()).exp_m1()).sqrt()
}

pub fn hv_trial_su2<R: Rng + ?Sized>(g_size: RelationSize, rng: &mut R) -> bool {
    g_size.value() < sample_size_su2(rng)
}

pub fn hv_trial_wh<R: Rng + ?Sized>(lambda: Complex64, rng: &mut R) -> bool {
    let mu = sample_maxwellian(rng, 1)[0];
    lambda.norm() < mu.norm()
}

/// Stream `index` of the generator family keyed by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Counts successes of `trial` over `n` draws, split into fixed chunks that
/// each own a stream.
pub fn count_hits<F>(n: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut dyn RngCore) -> bool + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum()
}

/// Runs `n` hidden-variable trials for `label`, measured from the model's
/// reference state.
pub fn estimate(
    model: &dyn RelationModel,
    label: &AnyLabel,
    n: u64,
    seed: u64,
) -> Result<HvEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let size = model.size(label)?;
    let hits = count_hits(n, seed, |rng| model.hv_trial(size, rng));
    Ok(HvEstimate::from_counts(hits, n, seed))
}

/// `n` relation sizes drawn from the model's hidden-variable law, in stream order.
pub fn sample_sizes(model: &dyn RelationModel, n: u64, seed: u64) -> Vec<f64> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream(seed, c);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len)
                .map(|_| model.sample_size(&mut rng))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// The disk law `P(s < r) = r²`.
pub fn disk_cdf(r: f64) -> f64 {
    r.clamp(0.0, 1.0).powi(2)
}

/// Outcome of a KS test at the 1% level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical: f64,
    pub n: usize,
    pub passed: bool,
}

pub fn ks_disk_law(samples: &[f64]) -> KsReport {
    let statistic = ks_statistic(samples, disk_cdf);
    let critical = KS_CRITICAL_1PCT / (samples.len() as f64).sqrt();
    KsReport {
        statistic,
        critical,
        n: samples.len(),
        passed: statistic < critical,
    }
}
