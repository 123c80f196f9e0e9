use std::f64::consts::{PI, TAU};
use std::time::Instant;

use csq_core::bell::{bell_correlation, bell_norm, build_bell, identity_defect, SphereQuadrature};
use csq_core::fock::expm::ExpmMethod;
use csq_core::group::AnyLabel;
use csq_core::hv::{estimate, HvEstimate};
use csq_core::oracle_check::{run_all, OracleConfig, SuiteResult};
use csq_core::registry::{LabelParams, ModelRegistry};
use csq_core::relation::{probability_of, relation_size};
use csq_core::squeeze::{epr_amplitude, SqueezeParam};
use csq_core::su2::{su2_amplitude, SphereLabel};
use csq_core::wh::{lattice_gram, LatticeProbe, LatticeWindow, LATTICE_TAIL_LIMIT};
use csq_core::Error;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::cli::{AmpArgs, BellArgs, GlobalArgs, HvArgs, LatticeArgs, ScanArgs, StateArgs};
use crate::output::{csv_document, json_document, RunManifest};

/// How a command failed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit code 1.
    Usage(String),
    /// A numerical contract was not met: exit code 2. Carries any output
    /// produced before the failure was detected.
    Contract {
        message: String,
        output: Option<String>,
    },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::GroupMismatch { .. }
            | Error::ModeMismatch { .. }
            | Error::UnknownStrategy { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Contract {
                message: e.to_string(),
                output: None,
            },
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Contract {
            message: format!("serialization failed: {e}"),
            output: None,
        }
    }
}

pub type Outcome = Result<String, Failure>;

/// Settings shared by every command.
pub struct Context<'a> {
    pub global: &'a GlobalArgs,
    pub models: ModelRegistry,
    pub expm: &'a dyn ExpmMethod,
    /// Set when wall time should be recorded.
    pub started: Option<Instant>,
}

impl Context<'_> {
    pub fn manifest(
        &self,
        command: &'static str,
        params: impl Serialize,
        dims: serde_json::Value,
    ) -> RunManifest {
        RunManifest {
            command,
            params: serde_json::to_value(params).unwrap_or(serde_json::Value::Null),
            seed: self.global.seed,
            tol: self.global.tol,
            dims,
            expm: self.global.expm.clone(),
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s: self.started.map(|t| t.elapsed().as_secs_f64()),
        }
    }
}

fn label_params(s: &StateArgs) -> LabelParams {
    LabelParams {
        theta: s.theta,
        phi: s.phi,
        lam: if s.lam.is_empty() {
            None
        } else {
            Some(s.lam.iter().map(|c| c.0).collect())
        },
    }
}

#[derive(Serialize)]
struct AmpBody {
    group: &'static str,
    amplitude_re: f64,
    amplitude_im: f64,
    modulus: f64,
    size: f64,
    probability: f64,
}

pub fn amp(ctx: &Context, args: &AmpArgs) -> Outcome {
    let model = ctx.models.get(&args.group)?;
    let system = model.parse_label(&label_params(&args.state))?;
    let det_given = args.det_theta.is_some() || args.det_phi.is_some() || !args.det_lam.is_empty();
    let detector = if det_given {
        model.parse_label(&LabelParams {
            theta: args.det_theta,
            phi: args.det_phi,
            lam: (!args.det_lam.is_empty()).then(|| args.det_lam.iter().map(|c| c.0).collect()),
        })?
    } else {
        model.reference(&system)?
    };
    let a = model.amplitude(&detector, &system)?;
    let body = AmpBody {
        group: model.name(),
        amplitude_re: a.value().re,
        amplitude_im: a.value().im,
        modulus: a.checked_modulus()?,
        size: relation_size(a)?.value(),
        probability: probability_of(a)?.value(),
    };
    Ok(json_document(
        &ctx.manifest("amp", args, serde_json::Value::Null),
        &body,
    )?)
}

#[derive(Serialize)]
struct HvBody {
    group: &'static str,
    #[serde(flatten)]
    estimate: HvEstimate,
    analytic_p: f64,
    z_score: f64,
}

pub fn hv(ctx: &Context, args: &HvArgs) -> Outcome {
    if args.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let model = ctx.models.get(&args.group)?;
    let label: AnyLabel = model.parse_label(&label_params(&args.state))?;
    let est = estimate(model, &label, args.samples, ctx.global.seed)?;
    let analytic_p = model.analytic_probability(&label)?;
    let body = HvBody {
        group: model.name(),
        estimate: est,
        analytic_p,
        z_score: est.z_score(analytic_p),
    };
    Ok(json_document(
        &ctx.manifest("hv", args, serde_json::Value::Null),
        &body,
    )?)
}

pub const SCAN_HEADER: [&str; 9] = [
    "zeta_re",
    "zeta_im",
    "lambda_a_re",
    "lambda_a_im",
    "lambda_b_re",
    "lambda_b_im",
    "amp_re",
    "amp_im",
    "probability",
];

pub fn squeeze_scan(ctx: &Context, args: &ScanArgs) -> Outcome {
    let zeta = args.zeta.0;
    if !(zeta.norm() < 1.0) {
        return Err(Failure::Usage(format!(
            "|zeta| = {} must be below 1",
            zeta.norm()
        )));
    }
    let zetas: Vec<Complex64> = match args.phase_steps {
        None => vec![zeta],
        Some(0) => return Err(Failure::Usage("--phase-steps must be at least 1".into())),
        Some(k) => (0..k)
            .map(|j| zeta * Complex64::from_polar(1.0, TAU * j as f64 / k as f64))
            .collect(),
    };
    let axis = args.grid.values();
    let plane = |pin: Option<Complex64>| -> Vec<Complex64> {
        match pin {
            Some(z) => vec![z],
            None => axis
                .iter()
                .flat_map(|re| axis.iter().map(move |im| Complex64::new(*re, *im)))
                .collect(),
        }
    };
    let las = plane(args.lambda_a.map(|c| c.0));
    let lbs = plane(args.lambda_b.map(|c| c.0));

    let mut rows = Vec::with_capacity(zetas.len() * las.len() * lbs.len());
    for z in &zetas {
        let p = SqueezeParam::new(*z)?;
        for la in &las {
            for lb in &lbs {
                let a = epr_amplitude(*la, *lb, &p);
                rows.push(vec![
                    z.re,
                    z.im,
                    la.re,
                    la.im,
                    lb.re,
                    lb.im,
                    a.value().re,
                    a.value().im,
                    probability_of(a)?.value(),
                ]);
            }
        }
    }
    Ok(csv_document(
        &ctx.manifest("squeeze-scan", args, serde_json::Value::Null),
        &SCAN_HEADER,
        &rows,
    )?)
}

#[derive(Serialize)]
struct CorrelationEntry {
    g1: [f64; 2],
    g2: [f64; 2],
    re: f64,
    im: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct BellBody {
    nodes: usize,
    identity_defect: f64,
    scale: f64,
    singlet_fidelity: f64,
    norm: f64,
    norm_direct: f64,
    max_correlation_deviation: f64,
    correlation_table: Vec<CorrelationEntry>,
}

/// Minimum quadrature order accepted by `bell`.
pub const BELL_MIN_ORDER: usize = 8;

/// Order at and above which the singlet fidelity is checked.
pub const BELL_CHECKED_ORDER: usize = 16;

pub fn bell(ctx: &Context, args: &BellArgs) -> Outcome {
    if args.grid_order < BELL_MIN_ORDER {
        return Err(Failure::Usage(format!(
            "--grid-order must be at least {BELL_MIN_ORDER}"
        )));
    }
    let q = SphereQuadrature::of_order(args.grid_order)?;
    let d = identity_defect(&q)?;
    let b = build_bell(&q)?;
    let grid: Vec<SphereLabel> = (0..5)
        .map(|k| SphereLabel::new(PI * k as f64 / 4.0, 1.3 * k as f64))
        .collect::<csq_core::Result<_>>()?;
    let mut table = Vec::new();
    let mut worst = 0.0f64;
    for g1 in &grid {
        for g2 in &grid {
            let c = bell_correlation(g1, g2, &b).value();
            let dev = (c - su2_amplitude(g1, g2).value() * d.scale).norm();
            worst = worst.max(dev);
            table.push(CorrelationEntry {
                g1: [g1.theta(), g1.phi()],
                g2: [g2.theta(), g2.phi()],
                re: c.re,
                im: c.im,
                deviation: dev,
            });
        }
    }
    let body = BellBody {
        nodes: q.len(),
        identity_defect: d.defect,
        scale: d.scale,
        singlet_fidelity: b.singlet_fidelity(),
        norm: bell_norm(&q),
        norm_direct: b.norm_sqr(),
        max_correlation_deviation: worst,
        correlation_table: table,
    };
    let out = json_document(&ctx.manifest("bell", args, serde_json::Value::Null), &body)?;
    let tol = ctx.global.tol.unwrap_or(1e-10);
    if args.grid_order >= BELL_CHECKED_ORDER && !(1.0 - body.singlet_fidelity < tol) {
        return Err(Failure::Contract {
            message: format!(
                "singlet fidelity {} is not within {tol:e} of 1",
                body.singlet_fidelity
            ),
            output: Some(out),
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct WindowSummary {
    half_width: usize,
    n_points: usize,
    min_singular: f64,
    max_singular: f64,
    coeff_modulus_spread_interior: f64,
    tail_bound: Option<f64>,
    gram_deviation: Option<f64>,
}

impl From<&LatticeProbe> for WindowSummary {
    fn from(p: &LatticeProbe) -> Self {
        WindowSummary {
            half_width: p.half_width,
            n_points: p.n_points,
            min_singular: p.min_singular,
            max_singular: p.max_singular,
            coeff_modulus_spread_interior: p.coeff_modulus_spread_interior,
            tail_bound: p.fock.map(|f| f.tail_bound),
            gram_deviation: p.fock.map(|f| f.gram_deviation),
        }
    }
}

#[derive(Serialize)]
struct LatticeBody<'a> {
    min_singular: f64,
    coeff_modulus_spread_interior: f64,
    tail_bound: Option<f64>,
    min_singular_decreasing: bool,
    probe: &'a LatticeProbe,
    windows: Vec<WindowSummary>,
}

/// Default truncation for the lattice cross-check.
pub const LATTICE_FOCK_DIM: usize = 100;

pub fn lattice(ctx: &Context, args: &LatticeArgs) -> Outcome {
    let dim = ctx.global.fock_dim.unwrap_or(LATTICE_FOCK_DIM);
    let tail_limit = ctx.global.tol.unwrap_or(LATTICE_TAIL_LIMIT);
    let probes: Vec<LatticeProbe> = (0..=args.window)
        .map(|m| {
            lattice_gram(
                &LatticeWindow::new(m),
                args.core_radius,
                Some(dim),
                tail_limit,
            )
        })
        .collect::<csq_core::Result<_>>()?;
    let last = probes.last().expect("window range is nonempty");
    let decreasing = probes
        .windows(2)
        .skip(1)
        .all(|w| w[1].min_singular < w[0].min_singular);
    let body = LatticeBody {
        min_singular: last.min_singular,
        coeff_modulus_spread_interior: last.coeff_modulus_spread_interior,
        tail_bound: last.fock.map(|f| f.tail_bound),
        min_singular_decreasing: decreasing,
        probe: last,
        windows: probes.iter().map(WindowSummary::from).collect(),
    };
    let dims = json!({ "fock_dim": dim });
    Ok(json_document(&ctx.manifest("lattice", args, dims), &body)?)
}

#[derive(Serialize)]
struct OracleBody {
    all_passed: bool,
    suites: Vec<SuiteResult>,
}

pub fn oracle_check(ctx: &Context) -> Outcome {
    let mut cfg = OracleConfig::new(ctx.expm).with_seed(ctx.global.seed);
    if let Some(n) = ctx.global.fock_dim {
        cfg = cfg.with_dim(n);
    }
    let suites = run_all(&cfg);
    let all_passed = suites.iter().all(|s| s.passed);
    let dims = json!({
        "fock_dim_one_mode": cfg.dim_one_mode,
        "fock_dim_two_mode": cfg.dim_two_mode,
    });
    let out = json_document(
        &ctx.manifest("oracle-check", json!({}), dims),
        &OracleBody { all_passed, suites },
    )?;
    if all_passed {
        Ok(out)
    } else {
        Err(Failure::Contract {
            message: "one or more oracle suites failed".into(),
            output: Some(out),
        })
    }
}
