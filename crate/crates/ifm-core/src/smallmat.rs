//! Dense complex small-matrix algebra.
//!
//! Everything here is sized for the problem at hand: the matrices are at
//! most 16-dimensional (3-level photon, optionally tensored with a qubit
//! ancilla), so a cyclic Jacobi eigensolver with complex rotations is both
//! simple and accurate, and no external linear-algebra dependency is
//! needed.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{IfmError, Result};

/// Convergence threshold on the off-diagonal Frobenius norm.
const JACOBI_OFF_TOL: f64 = 1e-13;
/// Hard cap on Jacobi sweeps.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest dimension accepted by the eigensolver.
const MAX_EIGEN_DIM: usize = 16;

/// Which factor of a bipartite system to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Builds a matrix from rows of complex entries; all rows must have the
    /// same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().copied().collect();
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a square matrix from real row entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let as_complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&as_complex)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
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

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// `<v|M|v>` without building the projector.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        assert!(self.is_square() && self.rows == v.len());
        let mut acc = Complex64::ZERO;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += v[i].conj() * self[(i, j)] * v[j];
            }
        }
        acc
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference `max |self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    sum += self[(i, j)].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// Deviation from Hermiticity, `max |M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    /// Extracts column `j`.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Compression onto a subset of basis indices (rows and columns).
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), keep.len(), |i, j| self[(keep[i], keep[j])])
    }
}

/// Result of the Hermitian eigendecomposition: eigenvalues sorted in
/// descending order, the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenResult {
    /// Reassembles `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            (0..dim)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi with complex
/// rotations. Deterministic: fixed sweep order, descending eigenvalue sort,
/// and each eigenvector phase fixed so its first significant entry is real
/// positive.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigenResult> {
    if !m.is_square() {
        return Err(IfmError::DimensionMismatch(format!(
            "eigensolver needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dim = m.rows();
    if dim > MAX_EIGEN_DIM {
        return Err(IfmError::DimensionMismatch(format!(
            "eigensolver accepts dim <= {MAX_EIGEN_DIM}, got {dim}"
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(IfmError::NotHermitian {
            deviation: defect,
            tol,
        });
    }

    // Work on the exactly-Hermitian average (M + M†)/2.
    let mut a = ComplexMatrix::from_fn(dim, dim, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(dim);

    let mut converged = dim < 2;
    let mut off = a.off_diagonal_frobenius();
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off < JACOBI_OFF_TOL {
            converged = true;
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        off = a.off_diagonal_frobenius();
    }
    if !converged && off >= JACOBI_OFF_TOL {
        return Err(IfmError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_norm: off,
        });
    }

    let mut order: Vec<usize> = (0..dim).collect();
    let eig_raw: Vec<f64> = (0..dim).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| eig_raw[j].partial_cmp(&eig_raw[i]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig_raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::from_fn(dim, dim, |i, j| v[(i, order[j])]);
    for j in 0..dim {
        fix_column_phase(&mut eigenvectors, j);
    }

    Ok(HermitianEigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates the (p, q) entry of a Hermitian `a` with a complex Jacobi
/// rotation, accumulating the rotation into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a[(p, q)];
    let beta_mag = beta.norm();
    if beta_mag < 1e-300 {
        return;
    }
    let phase = beta / beta_mag;
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    // Smaller-angle root of t^2 + 2 zeta t - 1 = 0 with the 2x2 block
    // [[alpha, beta], [beta*, gamma]].
    let zeta = (alpha - gamma) / (2.0 * beta_mag);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let dim = a.rows();
    // Column update: A <- A R with R[p][p]=c, R[p][q]=-s*phase,
    // R[q][p]=s*conj(phase), R[q][q]=c.
    for i in 0..dim {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c + aiq * s * phase.conj();
        a[(i, q)] = aiq * c - aip * s * phase;
    }
    // Row update: A <- R† A.
    for j in 0..dim {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c + aqj * s * phase;
        a[(q, j)] = aqj * c - apj * s * phase.conj();
    }
    // Clean the pivot pair: the rotation makes them real/zero analytically.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // Accumulate eigenvectors: V <- V R.
    for i in 0..dim {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c + viq * s * phase.conj();
        v[(i, q)] = viq * c - vip * s * phase;
    }
}

/// Multiplies column `j` by a unit phase so that its first significant
/// entry becomes real positive.
fn fix_column_phase(v: &mut ComplexMatrix, j: usize) {
    let dim = v.rows();
    let max_mag = (0..dim).map(|i| v[(i, j)].norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return;
    }
    let lead = (0..dim)
        .find(|&i| v[(i, j)].norm() > 1e-6 * max_mag)
        .unwrap();
    let phase = v[(lead, j)] / v[(lead, j)].norm();
    let correction = phase.conj();
    for i in 0..dim {
        v[(i, j)] *= correction;
    }
}

/// Trace norm `‖M‖ = Tr sqrt(M†M)`, the sum of singular values.
///
/// Hermitian inputs take the accurate path `Σ |λ_i|`; general square
/// matrices go through the eigenvalues of `M†M`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(IfmError::DimensionMismatch(format!(
            "trace norm needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.is_hermitian(1e-12) {
        let eig = hermitian_eigen(m, 1e-12)?;
        return Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum());
    }
    let gram = m.adjoint().mul(m);
    let tol = 1e-10 * gram.max_abs().max(1.0);
    let eig = hermitian_eigen(&gram, tol)?;
    Ok(eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum())
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Partial trace of a `dim_a * dim_b` square matrix over one factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != dim_a * dim_b {
        return Err(IfmError::DimensionMismatch(format!(
            "partial trace expects a {}x{} matrix, got {}x{}",
            dim_a * dim_b,
            dim_a * dim_b,
            m.rows(),
            m.cols()
        )));
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|i| m[(i * dim_b + k, i * dim_b + l)]).sum()
        }),
    };
    Ok(out)
}

/// The 2x2 Pauli matrices, handy for building test fixtures.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::ZERO, Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::ZERO],
    ])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
}
