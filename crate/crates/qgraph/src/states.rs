//! Density matrices from graphs: the map `sigma_G = K(G)/trace(K(G))` with
//! `K` the combinatorial or signless Laplacian, purity classification,
//! spectral mixtures, unitary conjugation, and the exact two-qubit PPT
//! separability test.

use crate::graph::WeightedDigraph;
use crate::laplacians::{kernel_multiplicity, laplacian, MatrixFlavor, ZERO_EIG_RELATIVE};
use crate::spectra::{hermitian_eigen, partial_transpose_b, Complex, ComplexMatrix, SpectraError};
use thiserror::Error;

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const PURITY_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("total degree is zero: the graph has no density matrix")]
    DegreeZero,
    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),
    #[error("matrix is not positive semi-definite (lambda_min = {0:.3e})")]
    NotPsd(f64),
    #[error("state is not pure (purity = {0})")]
    NotPure(f64),
    #[error("matrix is not unitary (||U'U - I||_max = {0:.3e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected a 4x4 two-qubit state, got {0}x{0}")]
    WrongDimension(usize),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Trace-one Hermitian PSD matrix. Validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn from_matrix(mat: ComplexMatrix) -> Result<Self, StateError> {
        mat.check_finite().map_err(StateError::Spectra)?;
        let fro = mat.frobenius_norm();
        let herm = mat.hermiticity_error();
        if herm > HERMITICITY_TOL * (1.0 + fro) {
            return Err(StateError::Spectra(SpectraError::NotHermitian(herm)));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(StateError::InvalidTrace(tr.re));
        }
        let eig = hermitian_eigen(&mat, HERMITICITY_TOL)?;
        let lam_min = eig.values.first().copied().unwrap_or(0.0);
        if lam_min < -PSD_TOL * (1.0 + fro) {
            return Err(StateError::NotPsd(lam_min));
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Pure,
    Mixed,
}

/// Purity verdict: `Pure` iff `|tr(rho^2) - 1| <= PURITY_TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateClass {
    pub kind: StateKind,
    pub purity: f64,
}

/// Rank-one terms of the spectral decomposition, zero-weight terms dropped.
#[derive(Debug, Clone)]
pub struct SpectralMixture {
    pub terms: Vec<(f64, Vec<Complex>)>,
}

/// `sigma_G = K(G) / trace(K(G))` for `K` in {L, Q}.
///
/// The normalizer is the total degree for loop-free graphs; with loops the
/// trace keeps the output exactly trace-one (the combinatorial trace drops
/// loop weights, the signless trace counts each twice).
pub fn density_from_graph(
    g: &WeightedDigraph,
    flavor: MatrixFlavor,
) -> Result<DensityMatrix, StateError> {
    let k = laplacian(g, flavor);
    let tr = k.trace().re;
    if tr <= 0.0 {
        return Err(StateError::DegreeZero);
    }
    DensityMatrix::from_matrix(k.scale(Complex::new(1.0 / tr, 0.0)))
}

pub fn classify(rho: &DensityMatrix) -> StateClass {
    let m = rho.matrix();
    let purity = m.mul(m).trace().re;
    let kind = if (purity - 1.0).abs() <= PURITY_TOL {
        StateKind::Pure
    } else {
        StateKind::Mixed
    };
    StateClass { kind, purity }
}

pub fn spectral_mixture(rho: &DensityMatrix) -> Result<SpectralMixture, StateError> {
    let eig = hermitian_eigen(rho.matrix(), HERMITICITY_TOL)?;
    let lam_max = eig.values.last().copied().unwrap_or(0.0).max(1.0);
    let mut terms = Vec::new();
    for (i, &p) in eig.values.iter().enumerate() {
        if p > ZERO_EIG_RELATIVE * lam_max {
            terms.push((p, eig.eigenvector(i)));
        }
    }
    // Largest weight first.
    terms.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    Ok(SpectralMixture { terms })
}

/// Unit eigenvector of a pure state; global phase fixed as in the eigensolver.
pub fn pure_state_vector(rho: &DensityMatrix) -> Result<Vec<Complex>, StateError> {
    let class = classify(rho);
    if class.kind != StateKind::Pure {
        return Err(StateError::NotPure(class.purity));
    }
    let eig = hermitian_eigen(rho.matrix(), HERMITICITY_TOL)?;
    Ok(eig.eigenvector(rho.dim() - 1))
}

/// `U rho U†` with a unitarity precondition (`||U†U - I||_max <= 1e-10`).
pub fn conjugate_by_unitary(
    rho: &DensityMatrix,
    u: &ComplexMatrix,
) -> Result<DensityMatrix, StateError> {
    if !u.is_square() || u.rows() != rho.dim() {
        return Err(StateError::DimensionMismatch(u.rows(), rho.dim()));
    }
    let gram = u.dagger().mul(u);
    let dev = gram.max_abs_diff(&ComplexMatrix::identity(u.rows()));
    if dev > UNITARY_TOL {
        return Err(StateError::NotUnitary(dev));
    }
    DensityMatrix::from_matrix(u.mul(rho.matrix()).mul(&u.dagger()))
}

/// Outcome of the Peres-Horodecki test on a two-qubit state. `borderline`
/// flags a minimum eigenvalue within tolerance of zero, where the verdict is
/// `separable` by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptVerdict {
    pub separable: bool,
    pub min_eigenvalue: f64,
    pub borderline: bool,
}

pub fn ppt_verdict(rho: &DensityMatrix) -> Result<PptVerdict, StateError> {
    if rho.dim() != 4 {
        return Err(StateError::WrongDimension(rho.dim()));
    }
    let pt = partial_transpose_b(rho.matrix())?;
    let eig = hermitian_eigen(&pt, HERMITICITY_TOL)?;
    let min_eigenvalue = eig.values[0];
    let tol = PSD_TOL * (1.0 + pt.frobenius_norm());
    Ok(PptVerdict {
        separable: min_eigenvalue >= -tol,
        min_eigenvalue,
        borderline: min_eigenvalue.abs() <= tol,
    })
}

/// Exact separability for 2x2 systems: PSD partial transpose.
pub fn ppt_separable_2q(rho: &DensityMatrix) -> Result<bool, StateError> {
    Ok(ppt_verdict(rho)?.separable)
}

/// Multiplicity of the zero eigenvalue of a density matrix (rank deficiency).
pub fn zero_multiplicity(rho: &DensityMatrix) -> Result<usize, StateError> {
    let eig = hermitian_eigen(rho.matrix(), HERMITICITY_TOL)?;
    Ok(kernel_multiplicity(&eig.values))
}
