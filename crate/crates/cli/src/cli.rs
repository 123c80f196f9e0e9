use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// A complex number written `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{x}` is not a finite number"))
        };
        Ok(ComplexArg(Complex64::new(parse(re)?, parse(im)?)))
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

/// An inclusive range `lo:hi:n` sampled at `n` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected `lo:hi:n`, got `{s}`"));
        };
        let f = |x: &str| {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{x}` is not a finite number"))
        };
        let n: usize = n.parse().map_err(|_| format!("`{n}` is not a count"))?;
        if n == 0 {
            return Err("grid needs at least one point".into());
        }
        Ok(GridSpec {
            lo: f(lo)?,
            hi: f(hi)?,
            n,
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "csq",
    version,
    about = "Coherent-state relations, hidden variables, squeezing and Bell states"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "CSQ_SEED", default_value_t = 20240607)]
    pub seed: u64,

    /// Fock truncation (per mode); overrides the command's default.
    #[arg(long, global = true, env = "CSQ_FOCK_DIM")]
    pub fock_dim: Option<usize>,

    /// Contract tolerance for commands that check one.
    #[arg(long, global = true, env = "CSQ_TOL")]
    pub tol: Option<f64>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, env = "CSQ_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Matrix exponential used by the Fock oracle.
    #[arg(long, global = true, env = "CSQ_EXPM", default_value = "pade13")]
    pub expm: String,

    /// Record wall time in the manifest (makes output run-dependent).
    #[arg(long, global = true, env = "CSQ_TIMING")]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplitude, relation size and probability of a coherent state.
    Amp(AmpArgs),
    /// Hidden-variable estimate of a Born probability.
    Hv(HvArgs),
    /// CSV scan of the two-mode squeezed correlation amplitude.
    SqueezeScan(ScanArgs),
    /// Generalized Bell state on the sphere.
    Bell(BellArgs),
    /// Gram-matrix probe of a von Neumann lattice window.
    Lattice(LatticeArgs),
    /// Closed forms against the truncated Fock-space oracle.
    OracleCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Amp(_) => "amp",
            Command::Hv(_) => "hv",
            Command::SqueezeScan(_) => "squeeze-scan",
            Command::Bell(_) => "bell",
            Command::Lattice(_) => "lattice",
            Command::OracleCheck => "oracle-check",
        }
    }
}

/// A state label for either group.
#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    /// Polar angle on the sphere (su2).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Azimuth on the sphere (su2).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,

    /// Displacement `re,im`, once per mode (wh).
    #[arg(long, allow_hyphen_values = true)]
    pub lam: Vec<ComplexArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct AmpArgs {
    /// `su2` or `wh`.
    pub group: String,

    #[command(flatten)]
    pub state: StateArgs,

    /// Detector polar angle (su2); the reference state when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub det_theta: Option<f64>,

    /// Detector azimuth (su2).
    #[arg(long, allow_hyphen_values = true)]
    pub det_phi: Option<f64>,

    /// Detector displacement `re,im`, once per mode (wh).
    #[arg(long, allow_hyphen_values = true)]
    pub det_lam: Vec<ComplexArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct HvArgs {
    /// `su2` or `wh`.
    pub group: String,

    #[command(flatten)]
    pub state: StateArgs,

    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Squeezing parameter `re,im` with `|ζ| < 1`.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: ComplexArg,

    /// Range `lo:hi:n` applied to each of Re λa, Im λa, Re λb, Im λb.
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1:3")]
    pub grid: GridSpec,

    /// Pin λa instead of scanning it.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_a: Option<ComplexArg>,

    /// Pin λb instead of scanning it.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_b: Option<ComplexArg>,

    /// Also rotate ζ through this many equally spaced phases at fixed `|ζ|`.
    #[arg(long)]
    pub phase_steps: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BellArgs {
    /// Gauss-Legendre order k; the rule has k × 2k nodes.
    #[arg(long, default_value_t = 16)]
    pub grid_order: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeArgs {
    /// Window half-width M; the window has (2M+1)² points.
    #[arg(long)]
    pub window: usize,

    /// Null-vector moduli are compared over |n|, |m| ≤ this radius.
    #[arg(long, default_value_t = 1)]
    pub core_radius: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_syntax() {
        assert_eq!(
            "1,0".parse::<ComplexArg>().unwrap().0,
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            " -0.5 , 2e-1".parse::<ComplexArg>().unwrap().0,
            Complex64::new(-0.5, 0.2)
        );
        assert!("1".parse::<ComplexArg>().is_err());
        assert!("1,x".parse::<ComplexArg>().is_err());
        assert!("nan,0".parse::<ComplexArg>().is_err());
    }

    #[test]
    fn grid_syntax() {
        let g: GridSpec = "-1:1:5".parse().unwrap();
        assert_eq!(g.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!("2:3:1".parse::<GridSpec>().unwrap().values(), vec![2.0]);
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from(["csq", "amp", "wh", "--lam", "-1,-2"]).unwrap();
        let Command::Amp(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.state.lam[0].0, Complex64::new(-1.0, -2.0));
    }
}
