//! Truncated Fock-space linear algebra.
//!
//! This is the brute-force side of every closed-form check in the crate:
//! states and operators are dense complex arrays over `{|n⟩ : n < N}` (one
//! mode) or `{|n_a, n_b⟩}` stored row-major in `(n_a, n_b)` (two modes), and
//! group elements are realized as matrix exponentials of truncated ladder
//! operators. Every constructor that truncates computes a tail bound and
//! refuses to run when it is too large.

pub mod expm;

use num_complex::Complex64;

use crate::error::{Error, Result};
pub use expm::{expm, CMatrix, ExpmMethod, ExpmRegistry, Pade13, Taylor};

/// Default truncation for single-mode checks.
pub const DEFAULT_DIM_ONE_MODE: usize = 64;
/// Default truncation per mode for two-mode checks.
pub const DEFAULT_DIM_TWO_MODE: usize = 40;

/// Largest admissible `⟨N|λ⟩` amplitude for a displacement at dimension `N`.
pub const DISPLACEMENT_TAIL_LIMIT: f64 = 1e-14;
/// Largest admissible discarded norm `|ζ|^{2N}` of a squeezed vacuum.
pub const SQUEEZE_TAIL_LIMIT: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Which mode of a two-mode space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// A state in a truncated one- or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    dim: usize,
    modes: usize,
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn from_amps(dim: usize, modes: usize, amps: Vec<Complex64>) -> Result<Self> {
        if !(modes == 1 || modes == 2) {
            return Err(Error::InvalidParameter(format!(
                "{modes} modes unsupported"
            )));
        }
        if amps.len() != dim.pow(modes as u32) {
            return Err(Error::InvalidParameter(format!(
                "expected {} amplitudes, got {}",
                dim.pow(modes as u32),
                amps.len()
            )));
        }
        Ok(FockVector { dim, modes, amps })
    }

    pub fn zeros(dim: usize, modes: usize) -> Self {
        FockVector {
            dim,
            modes,
            amps: vec![c(0.0); dim.pow(modes as u32)],
        }
    }

    pub fn vacuum(dim: usize, modes: usize) -> Self {
        let mut v = FockVector::zeros(dim, modes);
        v.amps[0] = c(1.0);
        v
    }

    /// `|n⟩` for one mode.
    pub fn number(dim: usize, n: usize) -> Self {
        let mut v = FockVector::zeros(dim, 1);
        v.amps[n] = c(1.0);
        v
    }

    /// `|n_a, n_b⟩`.
    pub fn number2(dim: usize, na: usize, nb: usize) -> Self {
        let mut v = FockVector::zeros(dim, 2);
        v.amps[na * dim + nb] = c(1.0);
        v
    }

    /// `|a⟩ ⊗ |b⟩` from two single-mode vectors of equal dimension.
    pub fn tensor(a: &FockVector, b: &FockVector) -> Result<Self> {
        if a.modes != 1 || b.modes != 1 || a.dim != b.dim {
            return Err(Error::InvalidParameter(
                "tensor needs two single-mode vectors of equal dim".into(),
            ));
        }
        let n = a.dim;
        let mut amps = Vec::with_capacity(n * n);
        for x in &a.amps {
            for y in &b.amps {
                amps.push(x * y);
            }
        }
        Ok(FockVector {
            dim: n,
            modes: 2,
            amps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn get2(&self, na: usize, nb: usize) -> Complex64 {
        self.amps[na * self.dim + nb]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-10
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        assert_eq!(self.amps.len(), other.amps.len(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        FockVector {
            dim: self.dim,
            modes: self.modes,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> FockVector {
        FockVector {
            dim: self.dim,
            modes: self.modes,
            amps: self.amps.iter().map(|x| x * k).collect(),
        }
    }

    fn mode_index(&self, idx: usize, mode: Mode) -> usize {
        match (self.modes, mode) {
            (1, _) => idx,
            (_, Mode::A) => idx / self.dim,
            (_, Mode::B) => idx % self.dim,
        }
    }

    fn mode_stride(&self, mode: Mode) -> usize {
        match (self.modes, mode) {
            (1, _) | (_, Mode::B) => 1,
            (_, Mode::A) => self.dim,
        }
    }

    /// Applies the (truncated) annihilation operator of `mode`.
    pub fn annihilate(&self, mode: Mode) -> FockVector {
        let stride = self.mode_stride(mode);
        let mut out = FockVector::zeros(self.dim, self.modes);
        for (i, z) in self.amps.iter().enumerate() {
            let n = self.mode_index(i, mode);
            if n > 0 {
                out.amps[i - stride] += z * (n as f64).sqrt();
            }
        }
        out
    }

    /// Applies the truncated creation operator of `mode`; the top level maps
    /// to zero.
    pub fn create(&self, mode: Mode) -> FockVector {
        let stride = self.mode_stride(mode);
        let mut out = FockVector::zeros(self.dim, self.modes);
        for (i, z) in self.amps.iter().enumerate() {
            let n = self.mode_index(i, mode);
            if n + 1 < self.dim {
                out.amps[i + stride] += z * ((n + 1) as f64).sqrt();
            }
        }
        out
    }

    /// Drops every component with an occupation at or above `level`.
    pub fn below_level(&self, level: usize) -> FockVector {
        let mut out = self.clone();
        for (i, z) in out.amps.iter_mut().enumerate() {
            let top = match self.modes {
                1 => i,
                _ => (i / self.dim).max(i % self.dim),
            };
            if top >= level {
                *z = c(0.0);
            }
        }
        out
    }
}

/// A dense operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    modes: usize,
    mat: CMatrix,
}

impl FockOperator {
    pub fn from_matrix(dim: usize, modes: usize, mat: CMatrix) -> Result<Self> {
        let n = dim.pow(modes as u32);
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "operator must be {n}x{n}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(FockOperator { dim, modes, mat })
    }

    pub fn identity(dim: usize, modes: usize) -> Self {
        let n = dim.pow(modes as u32);
        FockOperator {
            dim,
            modes,
            mat: CMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            dim: self.dim,
            modes: self.modes,
            mat: self.mat.adjoint(),
        }
    }

    pub fn mul(&self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            dim: self.dim,
            modes: self.modes,
            mat: &self.mat * &rhs.mat,
        }
    }

    pub fn scale(&self, k: Complex64) -> FockOperator {
        FockOperator {
            dim: self.dim,
            modes: self.modes,
            mat: &self.mat * k,
        }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        assert_eq!(self.mat.ncols(), v.amps.len(), "dimension mismatch");
        let out = &self.mat * nalgebra::DVector::from_column_slice(&v.amps);
        FockVector {
            dim: v.dim,
            modes: v.modes,
            amps: out.iter().copied().collect(),
        }
    }

    /// `exp(self)` with the given method.
    pub fn exp_with(&self, method: &dyn ExpmMethod) -> Result<FockOperator> {
        Ok(FockOperator {
            dim: self.dim,
            modes: self.modes,
            mat: method.expm(&self.mat)?,
        })
    }

    fn in_block(&self, idx: usize, block: usize) -> bool {
        match self.modes {
            1 => idx < block,
            _ => idx / self.dim < block && idx % self.dim < block,
        }
    }

    /// `max |(self − other)_{ij}|` over rows and columns whose occupations are
    /// all below `block`.
    pub fn max_deviation_in_block(&self, other: &FockOperator, block: usize) -> f64 {
        let n = self.mat.nrows();
        let mut worst = 0.0f64;
        for j in (0..n).filter(|&j| self.in_block(j, block)) {
            for i in (0..n).filter(|&i| self.in_block(i, block)) {
                worst = worst.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        worst
    }

    /// `‖U†U − I‖_max` restricted to occupations below `block`.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let prod = self.adjoint().mul(self);
        let n = self.mat.nrows();
        prod.max_deviation_in_block(&FockOperator::identity(self.dim, self.modes), block.min(n))
    }

    /// Whether the operator is unitary to `tol` away from the truncation edge.
    pub fn is_unitary(&self, tol: f64, block: usize) -> bool {
        self.unitarity_defect(block) < tol
    }
}

/// Single-mode `(a, a†)` at truncation `dim`.
pub fn ladder_ops(dim: usize) -> Result<(FockOperator, FockOperator)> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "ladder operators need dim >= 2, got {dim}"
        )));
    }
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    let ad = a.adjoint();
    Ok((
        FockOperator {
            dim,
            modes: 1,
            mat: a,
        },
        FockOperator {
            dim,
            modes: 1,
            mat: ad,
        },
    ))
}

/// `|⟨N|λ⟩| = e^{−|λ|²/2} |λ|^N / √N!`, the first amplitude cut off by the
/// truncation.
pub fn displacement_tail_bound(lambda: Complex64, dim: usize) -> f64 {
    let r2 = lambda.norm_sqr();
    if r2 == 0.0 {
        return 0.0;
    }
    let n = dim as f64;
    let log = -0.5 * r2 + 0.5 * n * r2.ln() - 0.5 * ln_factorial(dim);
    log.exp()
}

/// Discarded norm `|ζ|^{2N}` of a two-mode squeezed vacuum truncated at `N`.
pub fn squeeze_tail_bound(zeta_modulus: f64, dim: usize) -> f64 {
    zeta_modulus.powi(2 * dim as i32)
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `λa† − λ*a`.
pub fn displacement_generator(lambda: Complex64, dim: usize) -> Result<FockOperator> {
    let (a, ad) = ladder_ops(dim)?;
    let mat = ad.mat * lambda - a.mat * lambda.conj();
    Ok(FockOperator { dim, modes: 1, mat })
}

/// `U(λ) = exp(λa† − λ*a)` with the default expm method.
pub fn displacement(lambda: Complex64, dim: usize) -> Result<FockOperator> {
    displacement_with(lambda, dim, &Pade13)
}

pub fn displacement_with(
    lambda: Complex64,
    dim: usize,
    method: &dyn ExpmMethod,
) -> Result<FockOperator> {
    let bound = displacement_tail_bound(lambda, dim);
    if !(bound < DISPLACEMENT_TAIL_LIMIT) {
        return Err(Error::Truncation {
            dim,
            bound,
            limit: DISPLACEMENT_TAIL_LIMIT,
        });
    }
    displacement_generator(lambda, dim)?.exp_with(method)
}

/// Dense `ξa†b† − ξ*ab` on the `N²`-dimensional two-mode space.
pub fn two_mode_squeeze_generator(xi: Complex64, dim: usize) -> Result<FockOperator> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dim {dim} < 2")));
    }
    let n2 = dim * dim;
    let mut g = CMatrix::zeros(n2, n2);
    for na in 0..dim - 1 {
        for nb in 0..dim - 1 {
            let from = na * dim + nb;
            let to = (na + 1) * dim + nb + 1;
            let k = (((na + 1) * (nb + 1)) as f64).sqrt();
            // a†b† raises, ab lowers
            g[(to, from)] += xi * k;
            g[(from, to)] -= xi.conj() * k;
        }
    }
    Ok(FockOperator {
        dim,
        modes: 2,
        mat: g,
    })
}

/// `𝒟(ξ) = exp(ξa†b† − ξ*ab)` on the two-mode space.
///
/// The generator conserves `n_a − n_b`, so the exponential is assembled from
/// one small exponential per difference sector.
pub fn two_mode_squeeze_op(xi: Complex64, dim: usize) -> Result<FockOperator> {
    two_mode_squeeze_op_with(xi, dim, &Pade13)
}

pub fn two_mode_squeeze_op_with(
    xi: Complex64,
    dim: usize,
    method: &dyn ExpmMethod,
) -> Result<FockOperator> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dim {dim} < 2")));
    }
    if !xi.re.is_finite() || !xi.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let bound = squeeze_tail_bound(xi.norm().tanh(), dim);
    if !(bound < SQUEEZE_TAIL_LIMIT) {
        return Err(Error::Truncation {
            dim,
            bound,
            limit: SQUEEZE_TAIL_LIMIT,
        });
    }
    sector_exponential(xi, dim, method)
}

fn sector_exponential(xi: Complex64, dim: usize, method: &dyn ExpmMethod) -> Result<FockOperator> {
    let n2 = dim * dim;
    let mut out = CMatrix::zeros(n2, n2);
    for d in -(dim as isize - 1)..=(dim as isize - 1) {
        // sector states (na, nb) = (k + max(d,0), k + max(-d,0))
        let oa = d.max(0) as usize;
        let ob = (-d).max(0) as usize;
        let len = dim - oa.max(ob);
        let idx: Vec<usize> = (0..len).map(|k| (k + oa) * dim + k + ob).collect();
        let mut g = CMatrix::zeros(len, len);
        for k in 0..len.saturating_sub(1) {
            let amp = (((k + oa + 1) * (k + ob + 1)) as f64).sqrt();
            g[(k + 1, k)] = xi * amp;
            g[(k, k + 1)] = -xi.conj() * amp;
        }
        let e = method.expm(&g)?;
        for (r, &ir) in idx.iter().enumerate() {
            for (s, &is) in idx.iter().enumerate() {
                out[(ir, is)] = e[(r, s)];
            }
        }
    }
    Ok(FockOperator {
        dim,
        modes: 2,
        mat: out,
    })
}

/// `(U_a ⊗ U_b)|v⟩` for single-mode operators on a two-mode vector.
pub fn apply_product(ua: &FockOperator, ub: &FockOperator, v: &FockVector) -> FockVector {
    let n = v.dim;
    assert!(v.modes == 2 && ua.dim == n && ub.dim == n);
    // reshape v as an n×n matrix V[na, nb]; result is U_a V U_bᵀ
    let vm = CMatrix::from_row_slice(n, n, &v.amps);
    let r = &ua.mat * vm * ub.mat.transpose();
    let mut amps = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            amps.push(r[(i, j)]);
        }
    }
    FockVector {
        dim: n,
        modes: 2,
        amps,
    }
}

/// Two-mode Glauber state `U(λa)|0⟩ ⊗ U(λb)|0⟩` built from displacement
/// exponentials.
pub fn glauber_pair_state(
    lambda_a: Complex64,
    lambda_b: Complex64,
    dim: usize,
) -> Result<FockVector> {
    let ua = displacement(lambda_a, dim)?;
    let ub = displacement(lambda_b, dim)?;
    let va = ua.apply(&FockVector::vacuum(dim, 1));
    let vb = ub.apply(&FockVector::vacuum(dim, 1));
    FockVector::tensor(&va, &vb)
}
