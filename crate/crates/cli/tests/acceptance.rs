//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! criteria execute in order, are timed without contention, and always print.

use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use csq_core::fock::expm::Pade13;
use csq_core::group::{pairwise_distance, AnyLabel};
use csq_core::hv::{estimate, ks_disk_law, sample_sizes, stream};
use csq_core::oracle_check::{
    annihilator_suite, bell_correlation_suite, bell_identity_suite, bell_norm_suite,
    bell_singlet_suite, boundary_suite, composition_cocycle, epr_amplitude_suite, glauber_vacuum,
    overlap_suite, squeezed_vacuum_suite, OracleConfig, SuiteResult,
};
use csq_core::registry::ModelRegistry;
use csq_core::su2::{sample_uniform_sphere, SphereLabel, Su2};
use csq_core::wh::{
    lattice_gram, sample_maxwellian, LatticeWindow, WeylHeisenberg, LATTICE_TAIL_LIMIT,
};
use num_complex::Complex64;

/// Seed used for every statistical criterion (also the CLI default).
const SHIPPED_SEED: u64 = 20240607;

struct Outcome {
    passed: bool,
    detail: String,
}

fn suites(results: &[SuiteResult]) -> Outcome {
    let passed = results.iter().all(|r| r.passed);
    let detail = results
        .iter()
        .map(|r| match (&r.error, r.max_error) {
            (Some(e), _) => format!("{}: {e}", r.name),
            (None, Some(m)) => format!("{} {:.2e}/{:.0e}", r.name, m, r.tolerance),
            (None, None) => format!("{}: no result", r.name),
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn criterion_1() -> Outcome {
    suites(&[glauber_vacuum(
        &OracleConfig::new(&Pade13).with_seed(SHIPPED_SEED),
    )])
}

fn criterion_2() -> Outcome {
    suites(&[composition_cocycle(
        &OracleConfig::new(&Pade13).with_seed(SHIPPED_SEED),
    )])
}

fn criterion_3() -> Outcome {
    let cfg = OracleConfig::new(&Pade13).with_seed(SHIPPED_SEED);
    let results = [
        squeezed_vacuum_suite(&cfg),
        epr_amplitude_suite(&cfg),
        annihilator_suite(&cfg),
        overlap_suite(&cfg),
    ];
    let mut o = suites(&results);
    let grid = results[1].cases;
    if grid != 125 {
        o.passed = false;
        o.detail
            .push_str(&format!("; grid has {grid} points, expected 125"));
    }
    o
}

fn criterion_4() -> Outcome {
    let r = boundary_suite(&OracleConfig::new(&Pade13).with_seed(SHIPPED_SEED));
    let mut o = suites(std::slice::from_ref(&r));
    if r.cases != 10 {
        o.passed = false;
    }
    o
}

fn criterion_5() -> Outcome {
    let reg = ModelRegistry::builtin();
    let su2 = reg.get("su2").unwrap();
    let wh = reg.get("wh").unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for theta in [PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
        let label = AnyLabel::Sphere(SphereLabel::new(theta, 0.0).unwrap());
        let e = estimate(su2, &label, 100_000, SHIPPED_SEED).unwrap();
        let p = (theta / 2.0).cos().powi(2);
        let z = e.z_score(p);
        passed &= z < 3.0;
        parts.push(format!("su2 θ={theta:.4} z={z:.2}"));
    }
    for (lam, n) in [(0.5, 100_000), (1.0, 100_000), (2.0, 1_000_000)] {
        let label = AnyLabel::Glauber(vec![Complex64::new(lam, 0.0)]);
        let e = estimate(wh, &label, n, SHIPPED_SEED).unwrap();
        let p = (-lam * lam).exp();
        let z = e.z_score(p);
        passed &= z < 3.0;
        parts.push(format!("wh |λ|={lam} z={z:.2}"));
    }
    Outcome {
        passed,
        detail: parts.join("; "),
    }
}

fn criterion_6() -> Outcome {
    let reg = ModelRegistry::builtin();
    let mut passed = true;
    let mut parts = Vec::new();
    for name in ["su2", "wh"] {
        let ks = ks_disk_law(&sample_sizes(reg.get(name).unwrap(), 100_000, SHIPPED_SEED));
        passed &= ks.passed;
        parts.push(format!("{name} D={:.5} < {:.5}", ks.statistic, ks.critical));
    }
    Outcome {
        passed,
        detail: parts.join("; "),
    }
}

fn criterion_7() -> Outcome {
    let cfg = OracleConfig::new(&Pade13);
    suites(&[
        bell_identity_suite(&cfg),
        bell_singlet_suite(&cfg),
        bell_correlation_suite(&cfg),
        bell_norm_suite(&cfg),
    ])
}

fn criterion_8() -> Outcome {
    let mut rng = stream(SHIPPED_SEED, 8);
    let mut worst_triangle = f64::NEG_INFINITY;
    let mut asymmetric = 0;
    for _ in 0..1000 {
        let [a, b, c] = [(); 3].map(|_| sample_uniform_sphere(&mut rng));
        let d = |x: &SphereLabel, y: &SphereLabel| pairwise_distance(&Su2, x, y).unwrap().value();
        asymmetric += (d(&a, &b).to_bits() != d(&b, &a).to_bits()) as usize;
        worst_triangle = worst_triangle.max(d(&a, &c) - d(&a, &b) - d(&b, &c));
    }
    let g = WeylHeisenberg::new(1);
    for _ in 0..1000 {
        let [a, b, c] = [(); 3].map(|_| vec![sample_maxwellian(&mut rng, 1)[0] * 1.5]);
        let d =
            |x: &Vec<Complex64>, y: &Vec<Complex64>| pairwise_distance(&g, x, y).unwrap().value();
        asymmetric += (d(&a, &b).to_bits() != d(&b, &a).to_bits()) as usize;
        worst_triangle = worst_triangle.max(d(&a, &c) - d(&a, &b) - d(&b, &c));
    }
    Outcome {
        passed: asymmetric == 0 && worst_triangle <= 1e-12,
        detail: format!("asymmetric pairs {asymmetric}; worst triangle excess {worst_triangle:.2e} (slack 1e-12)"),
    }
}

fn criterion_9() -> Outcome {
    let mut mins = Vec::new();
    let mut parts = Vec::new();
    for m in 1..=3 {
        match lattice_gram(&LatticeWindow::new(m), 1, Some(100), LATTICE_TAIL_LIMIT) {
            Ok(p) => {
                mins.push(p.min_singular);
                parts.push(format!(
                    "M={m} σmin={:.4e} spread={:.3}",
                    p.min_singular, p.coeff_modulus_spread_interior
                ));
            }
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("M={m}: {e}"),
                }
            }
        }
    }
    Outcome {
        passed: mins.windows(2).all(|w| w[1] < w[0]),
        detail: parts.join("; "),
    }
}

fn run_cli(args: &[&str], threads: &str) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_csq"))
        .args(args)
        .env_remove("CSQ_SEED")
        .env_remove("CSQ_TIMING")
        .env("CSQ_THREADS", threads)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_10() -> Outcome {
    let commands: [&[&str]; 8] = [
        &["amp", "su2", "--theta", "1.2", "--phi", "0.4"],
        &["amp", "wh", "--lam", "1,0.5", "--det-lam", "-0.2,0.1"],
        &[
            "hv",
            "su2",
            "--theta",
            "1.0471975511965976",
            "--samples",
            "200000",
        ],
        &["hv", "wh", "--lam", "1,0", "--samples", "200000"],
        &[
            "squeeze-scan",
            "--zeta",
            "0.5,0.2",
            "--grid",
            "-1:1:3",
            "--phase-steps",
            "4",
        ],
        &["bell", "--grid-order", "16"],
        &["lattice", "--window", "2"],
        &["oracle-check"],
    ];
    let mut bad = Vec::new();
    for args in commands {
        let (code, first) = run_cli(args, "1");
        let (_, second) = run_cli(args, "1");
        let (_, parallel) = run_cli(args, "4");
        if code != Some(0) || first.is_empty() || first != second || first != parallel {
            bad.push(format!("{} (exit {code:?})", args.join(" ")));
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!(
                "{} commands byte-identical across 2 runs and 1 vs 4 threads",
                commands.len()
            )
        } else {
            format!("differs: {}", bad.join(", "))
        },
    }
}

type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

const CRITERIA: [Criterion; 10] = [
    (1, "Glauber amplitude vs Fock oracle", Some(5), criterion_1),
    (
        2,
        "composition cocycle, operator level",
        Some(10),
        criterion_2,
    ),
    (3, "squeezed-vacuum suite", Some(60), criterion_3),
    (
        4,
        "boundary limit by Richardson extrapolation",
        Some(10),
        criterion_4,
    ),
    (5, "hidden-variable Born rule", Some(30), criterion_5),
    (
        6,
        "hidden-variable disk law (KS, 1%)",
        Some(10),
        criterion_6,
    ),
    (7, "Bell suite", Some(5), criterion_7),
    (8, "metric axioms", Some(5), criterion_8),
    (9, "lattice probe at N = 100", Some(60), criterion_9),
    (10, "CLI determinism", None, criterion_10),
];

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let mut failures = 0;
    for (id, title, limit, check) in CRITERIA {
        let t = Instant::now();
        let mut o = check();
        let elapsed = t.elapsed();
        if let Some(s) = limit {
            if elapsed > Duration::from_secs(s) {
                o.passed = false;
                o.detail.push_str(&format!("; over the {s} s budget"));
            }
        }
        failures += !o.passed as u32;
        let _ = writeln!(
            stdout,
            "criterion {id:>2} [{}] {title} ({:.2} s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            o.detail
        );
    }
    let _ = writeln!(
        stdout,
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() as u32 - failures,
        CRITERIA.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
