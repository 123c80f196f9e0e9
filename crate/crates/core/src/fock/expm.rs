//! Dense complex matrix exponential.
//!
//! Two interchangeable methods are registered by name: a scaling-and-squaring
//! Padé approximant (Higham 2005, degrees 3 through 13) and a scaled Taylor
//! series whose term count is fixed by an explicit remainder bound. The second
//! exists to cross-check the first.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// A method for computing `exp(m)`.
pub trait ExpmMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn expm(&self, m: &CMatrix) -> Result<CMatrix>;
}

/// Maximum absolute column sum.
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn check_input(m: &CMatrix) -> Result<()> {
    assert!(m.is_square(), "expm needs a square matrix");
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn check_output(m: CMatrix) -> Result<CMatrix> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

fn square_repeatedly(mut x: CMatrix, s: u32) -> CMatrix {
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

fn scaled(m: &CMatrix, s: u32) -> CMatrix {
    if s == 0 {
        m.clone()
    } else {
        m * Complex64::new(0.5f64.powi(s as i32), 0.0)
    }
}

/// Scaling and squaring with a diagonal Padé approximant.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pade13;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `(V − U)⁻¹ (V + U)` for a low-degree approximant, built from even powers.
fn pade_low(a: &CMatrix, b: &[f64]) -> Result<CMatrix> {
    let n = a.nrows();
    let eye = CMatrix::identity(n, n);
    let a2 = a * a;
    let mut even = eye.clone();
    let mut u_acc = CMatrix::zeros(n, n);
    let mut v_acc = CMatrix::zeros(n, n);
    let m = b.len() - 1;
    let mut k = 0;
    while 2 * k <= m {
        v_acc += &even * re(b[2 * k]);
        if 2 * k < m {
            u_acc += &even * re(b[2 * k + 1]);
        }
        even = &even * &a2;
        k += 1;
    }
    let u = a * u_acc;
    solve(&v_acc - &u, &v_acc + &u)
}

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let eye = CMatrix::identity(n, n);
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let w1 = &a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]);
    let w2 = &a6 * re(b[7]) + &a4 * re(b[5]) + &a2 * re(b[3]) + &eye * re(b[1]);
    let u = a * (&a6 * w1 + w2);
    let z1 = &a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]);
    let z2 = &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + &eye * re(b[0]);
    let v = &a6 * z1 + z2;
    solve(&v - &u, &v + &u)
}

fn solve(lhs: CMatrix, rhs: CMatrix) -> Result<CMatrix> {
    lhs.lu().solve(&rhs).ok_or(Error::NonFinite)
}

impl ExpmMethod for Pade13 {
    fn name(&self) -> &'static str {
        "pade13"
    }

    fn expm(&self, m: &CMatrix) -> Result<CMatrix> {
        check_input(m)?;
        if m.nrows() == 0 {
            return Ok(m.clone());
        }
        let norm = norm1(m);
        for (deg, theta) in THETA {
            if norm <= theta {
                let b: &[f64] = match deg {
                    3 => &B3,
                    5 => &B5,
                    7 => &B7,
                    _ => &B9,
                };
                return check_output(pade_low(m, b)?);
            }
        }
        let s = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil().max(0.0) as u32
        } else {
            0
        };
        let r = pade13(&scaled(m, s))?;
        check_output(square_repeatedly(r, s))
    }
}

/// Scaled Taylor series with an a-priori term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct Taylor;

/// Remainder target relative to `‖exp(B)‖ ≥ e^{-‖B‖} ≥ e^{-1/2}`.
const TAYLOR_REMAINDER: f64 = 1e-18;

impl Taylor {
    /// Smallest `k` such that the series truncated after `B^k/k!` has a
    /// remainder below the target for `‖B‖₁ ≤ bnorm ≤ 1/2`.
    pub fn term_count(bnorm: f64) -> usize {
        // remainder ≤ bnorm^{k+1}/(k+1)! · 1/(1 - bnorm/(k+2))
        let mut k = 0usize;
        let mut term = 1.0f64;
        loop {
            term *= bnorm / (k + 1) as f64;
            let tail = term / (1.0 - bnorm / (k + 2) as f64);
            if tail <= TAYLOR_REMAINDER {
                return k;
            }
            k += 1;
        }
    }
}

impl ExpmMethod for Taylor {
    fn name(&self) -> &'static str {
        "taylor"
    }

    fn expm(&self, m: &CMatrix) -> Result<CMatrix> {
        check_input(m)?;
        let n = m.nrows();
        if n == 0 {
            return Ok(m.clone());
        }
        let norm = norm1(m);
        let s = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let b = scaled(m, s);
        let k = Taylor::term_count(norm1(&b));
        // Horner: I + B(I + B/2(I + B/3(...)))
        let eye = CMatrix::identity(n, n);
        let mut acc = eye.clone();
        for j in (1..=k).rev() {
            acc = &eye + (&b * acc) * re(1.0 / j as f64);
        }
        check_output(square_repeatedly(acc, s))
    }
}

/// Name-indexed collection of expm methods.
pub struct ExpmRegistry {
    methods: BTreeMap<&'static str, Box<dyn ExpmMethod>>,
}

impl ExpmRegistry {
    pub fn empty() -> Self {
        ExpmRegistry {
            methods: BTreeMap::new(),
        }
    }

    /// Registry holding `pade13` and `taylor`.
    pub fn builtin() -> Self {
        let mut r = ExpmRegistry::empty();
        r.register(Box::new(Pade13));
        r.register(Box::new(Taylor));
        r
    }

    /// Adds a method; a method with the same name is replaced.
    pub fn register(&mut self, method: Box<dyn ExpmMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ExpmMethod> {
        self.methods
            .get(name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "expm method",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.keys().copied().collect()
    }
}

impl Default for ExpmRegistry {
    fn default() -> Self {
        ExpmRegistry::builtin()
    }
}

/// `exp(m)` with the default (Padé) method.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    Pade13.expm(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn max_rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
        let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, target_norm: f64) -> CMatrix {
        let m = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let k = target_norm / norm1(&m);
        m * re(k)
    }

    #[test]
    fn zero_gives_identity() {
        let reg = ExpmRegistry::builtin();
        for name in reg.names() {
            let e = reg.get(name).unwrap().expm(&CMatrix::zeros(5, 5)).unwrap();
            assert_eq!(e, CMatrix::identity(5, 5), "{name}");
        }
    }

    #[test]
    fn scalar_phase() {
        let m = CMatrix::from_diagonal_element(4, 4, Complex64::new(0.0, PI));
        for name in ["pade13", "taylor"] {
            let e = ExpmRegistry::builtin().get(name).unwrap().expm(&m).unwrap();
            let want = -CMatrix::identity(4, 4);
            assert!(max_rel_err(&e, &want) < 1e-15, "{name}");
        }
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let d: Vec<Complex64> = (0..6)
            .map(|k| Complex64::new(-3.0 + k as f64, 0.7 * k as f64))
            .collect();
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone()));
        let e = expm(&m).unwrap();
        for (k, z) in d.iter().enumerate() {
            assert!((e[(k, k)] - z.exp()).norm() / z.exp().norm() < 1e-14);
        }
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        // exp of a strictly upper shift: sum of N^k/k!
        let mut m = CMatrix::zeros(4, 4);
        for i in 0..3 {
            m[(i, i + 1)] = re(2.0);
        }
        let e = expm(&m).unwrap();
        assert!((e[(0, 3)] - re(8.0 / 6.0)).norm() < 1e-13);
        assert!((e[(0, 2)] - re(2.0)).norm() < 1e-13);
        assert!((e[(1, 3)] - re(2.0)).norm() < 1e-13);
    }

    #[test]
    fn pade_and_taylor_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for i in 0..20 {
            let n = 3 + i % 8;
            let target = [0.01, 0.2, 1.0, 3.0, 8.0, 20.0, 50.0][i % 7];
            // anti-Hermitian part keeps exp bounded at larger norms
            let g = random_matrix(&mut rng, n, target);
            let m = if target > 5.0 { &g - g.adjoint() } else { g };
            let p = Pade13.expm(&m).unwrap();
            let t = Taylor.expm(&m).unwrap();
            assert!(
                max_rel_err(&p, &t) < 1e-11,
                "case {i}: {}",
                max_rel_err(&p, &t)
            );
        }
    }

    #[test]
    fn inverse_pair_multiplies_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(&mut rng, 12, 40.0);
        let h = &m - m.adjoint();
        let e = expm(&h).unwrap();
        let ei = expm(&(-h)).unwrap();
        let prod = e * ei;
        assert!(max_rel_err(&prod, &CMatrix::identity(12, 12)) < 1e-12);
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(expm(&m), Err(Error::NonFinite));
        assert_eq!(Taylor.expm(&m), Err(Error::NonFinite));
        let big = CMatrix::from_diagonal_element(2, 2, re(1000.0));
        assert_eq!(expm(&big), Err(Error::NonFinite));
    }

    #[test]
    fn registry_lookup() {
        let reg = ExpmRegistry::builtin();
        assert_eq!(reg.names(), vec!["pade13", "taylor"]);
        assert!(matches!(
            reg.get("magnus"),
            Err(Error::UnknownStrategy { .. })
        ));
    }

    #[test]
    fn taylor_term_count_grows_with_norm() {
        assert!(Taylor::term_count(0.5) > Taylor::term_count(0.01));
        assert_eq!(Taylor::term_count(0.0), 0);
    }
}
