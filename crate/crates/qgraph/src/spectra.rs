//! Dense complex matrix kernel: arithmetic, Kronecker products, Hermitian
//! eigendecomposition, PSD/rank queries, and the two-qubit partial transpose.
//!
//! Everything here targets small dense matrices (n ≲ 64). The eigensolver is a
//! cyclic complex Jacobi iteration: unconditionally stable in this regime and
//! fully deterministic, which the golden-file tests rely on.

use num_complex::Complex64;
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Scalar type used across the crate.
pub type Complex = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("expected a {0}x{0} matrix, got {1}x{2}")]
    WrongDimension(usize, usize, usize),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NotConverged(usize),
    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Build from nested rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row {i}");
            for (j, z) in row.iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        m
    }

    /// Shorthand for real-entry test matrices.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let as_complex: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|x| Complex::new(*x, 0.0)).collect())
            .collect();
        Self::from_rows(&as_complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex]) -> Vec<Complex> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> Complex {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max_{i,j} |m_ij - conj(m_ji)|.
    pub fn hermiticity_error(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn check_finite(&self) -> Result<(), SpectraError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(SpectraError::NonFinite(i, j));
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }
}

// Matrices serialize as row-major nested arrays of [re, im] pairs, the wire
// format shared by recipe files and CLI reports.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<[f64; 2]> = (0..self.cols)
                .map(|j| [self[(i, j)].re, self[(i, j)].im])
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MatVisitor;
        impl<'de> Visitor<'de> for MatVisitor {
            type Value = ComplexMatrix;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a nested array of [re, im] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut rows: Vec<Vec<Complex>> = Vec::new();
                while let Some(row) = seq.next_element::<Vec<[f64; 2]>>()? {
                    rows.push(
                        row.into_iter()
                            .map(|[re, im]| Complex::new(re, im))
                            .collect(),
                    );
                }
                let c = rows.first().map_or(0, |r| r.len());
                if rows.iter().any(|r| r.len() != c) {
                    return Err(serde::de::Error::custom("ragged matrix rows"));
                }
                Ok(ComplexMatrix::from_rows(&rows))
            }
        }
        deserializer.deserialize_seq(MatVisitor)
    }
}

/// Principal complex square root: the root with argument in (-pi/2, pi/2],
/// the branch cut on the negative real axis resolving to +pi/2.
pub fn principal_sqrt(z: Complex) -> Complex {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            return Complex::new(z.re.sqrt(), 0.0);
        }
        return Complex::new(0.0, (-z.re).sqrt());
    }
    z.sqrt()
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues with
/// orthonormal eigenvector columns and the worst per-pair residual
/// `max_i ||M v_i - lambda_i v_i||_2`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub residual: f64,
}

impl HermitianEigen {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex> {
        self.vectors.column(i)
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi for Hermitian matrices.
///
/// `tol` gates the Hermiticity precondition: the call fails with
/// `NotHermitian` when `||M - M'||_max > tol * (1 + ||M||_F)`. Eigenvector
/// phases are fixed so the first component of largest modulus is real and
/// nonnegative; under degenerate eigenvalues only the spanned subspace is
/// meaningful.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen, SpectraError> {
    if !m.is_square() {
        return Err(SpectraError::NotSquare(m.rows, m.cols));
    }
    m.check_finite()?;
    let n = m.rows;
    let fro = m.frobenius_norm();
    let herm_err = m.hermiticity_error();
    if herm_err > tol * (1.0 + fro) {
        return Err(SpectraError::NotHermitian(herm_err));
    }

    // Work on the exactly Hermitized copy; diagonal imaginary parts drop out.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = Complex::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let target = 1e-12 * fro;
    let mut converged = fro == 0.0 || off(&a) <= target;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b == 0.0 {
                    continue;
                }
                // Unitary 2x2: phase out the pivot, then a real rotation.
                let phi = beta.conj() / b;
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns:  col_p <- c*col_p - phi*s*col_q ; col_q <- s*col_p + phi*c*col_q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * (phi * s);
                    a[(k, q)] = akp * s + akq * (phi * c);
                }
                // Rows (conjugate transform).
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * (phi.conj() * s);
                    a[(q, k)] = apk * s + aqk * (phi.conj() * c);
                }
                a[(p, q)] = Complex::new(0.0, 0.0);
                a[(q, p)] = Complex::new(0.0, 0.0);
                a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * (phi * s);
                    v[(k, q)] = vkp * s + vkq * (phi * c);
                }
            }
        }
        if off(&a) <= target {
            converged = true;
        }
    }
    if !converged {
        return Err(SpectraError::NotConverged(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut col = v.column(old_col);
        // Phase canonicalization: first component of largest modulus becomes
        // real nonnegative.
        let mut best = 0usize;
        let mut best_mod = -1.0;
        for (k, z) in col.iter().enumerate() {
            if z.norm() > best_mod + 1e-15 {
                best_mod = z.norm();
                best = k;
            }
        }
        if best_mod > 0.0 {
            let phase = col[best] / col[best].norm();
            for z in col.iter_mut() {
                *z /= phase;
            }
        }
        for k in 0..n {
            vectors[(k, new_col)] = col[k];
        }
    }

    let mut residual = 0.0f64;
    for (i, &lam) in values.iter().enumerate() {
        let vi = vectors.column(i);
        let mv = m.mul_vec(&vi);
        let r2: f64 = mv
            .iter()
            .zip(vi.iter())
            .map(|(a, b)| (a - b * lam).norm_sqr())
            .sum();
        residual = residual.max(r2.sqrt());
    }

    Ok(HermitianEigen {
        values,
        vectors,
        residual,
    })
}

/// Standard Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = a[(i, j)];
            if z.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = z * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial transpose of the second tensor factor of a 4x4 matrix viewed as a
/// 2x2 system: out[(i,j),(k,l)] = in[(i,l),(k,j)].
pub fn partial_transpose_b(m: &ComplexMatrix) -> Result<ComplexMatrix, SpectraError> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(SpectraError::WrongDimension(4, m.rows(), m.cols()));
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = m[(2 * i + l, 2 * k + j)];
                }
            }
        }
    }
    Ok(out)
}

/// Count of eigenvalues above `tol * max(1, lambda_max)` for a Hermitian PSD input.
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> Result<usize, SpectraError> {
    let eig = hermitian_eigen(m, 1e-10)?;
    let lam_max = eig.values.last().copied().unwrap_or(0.0);
    let thr = tol * lam_max.max(1.0);
    Ok(eig.values.iter().filter(|&&l| l > thr).count())
}

/// True iff lambda_min >= -tol * (1 + ||M||_F) for Hermitian M.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool, SpectraError> {
    let eig = hermitian_eigen(m, 1e-10)?;
    let lam_min = eig.values.first().copied().unwrap_or(0.0);
    Ok(lam_min >= -tol * (1.0 + m.frobenius_norm()))
}
