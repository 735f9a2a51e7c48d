//! Pure-state reduction of the interrogation cycle.
//!
//! For pure inputs supported on `|1>, |2>` the channels collapse to 2x2
//! transfer matrices: `T = [diag(1,a) R_θ]^N` when the object is present
//! and the constant quarter-turn `D = [[0,-1],[1,0]]` when it is absent.
//! A basis rotation by `U = exp(-i σ_y θ/2)` turns the single-cycle matrix
//! into `C1 = ((1-a)/2)(σ_z - i k1 σ_y + k2 I)`, whose N-th power has the
//! analytic form `C = ((1-a)/2)^N [f1 (σ_z - i k1 σ_y) + f2 I]`.
//!
//! Basis bookkeeping: methods and functions below say explicitly whether a
//! matrix or state lives in the old (computational) basis or the rotated
//! one. `basis_change(θ)` maps old-basis coordinates to new-basis ones;
//! its adjoint goes back.

use num_complex::Complex64;

use crate::channels::IfmParams;
use crate::error::{IfmError, Result};
use crate::smallmat::ComplexMatrix;

/// Width of the critical window on `|1 - k1^2|` inside which the binomial
/// sums are evaluated by their k1 -> 1 limits.
const CRITICAL_EPS: f64 = 1e-9;
/// Transparency amplitudes above `1 - 1e-12` are rejected by the
/// coefficient paths; the channel/product paths remain valid there.
const DEGENERATE_A: f64 = 1.0 - 1e-12;

/// A normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
            return Err(IfmError::InvalidParams(format!(
                "pure state norm is {}, expected 1",
                norm_sq.sqrt()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(IfmError::InvalidParams(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Basis state `|i>` of dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; dim];
        amps[i] = Complex64::ONE;
        Self { amplitudes: amps }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Projector `|ψ><ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Amplitudes padded with zeros up to `dim`.
    pub fn embedded(&self, dim: usize) -> Vec<Complex64> {
        let mut amps = self.amplitudes.clone();
        amps.resize(dim, Complex64::ZERO);
        amps
    }
}

/// A possibly sub-normalized amplitude vector, as produced by the lossy
/// transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnnormalizedVector {
    amplitudes: Vec<Complex64>,
}

impl UnnormalizedVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq.sqrt() > 1.0 + 1e-12 {
            return Err(IfmError::InvalidParams(format!(
                "lossy output norm {} exceeds 1",
                norm_sq.sqrt()
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Which branch of the binomial sums applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `k1 < 1`: both sum bases are real.
    Sub,
    /// `|1 - k1^2| <= 1e-9`: 0/0 in the sub-regime formulas; limit forms.
    Critical,
    /// `k1 > 1`: the sum bases form a complex-conjugate pair.
    Super,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Sub => "SUB",
            Regime::Critical => "CRITICAL",
            Regime::Super => "SUPER",
        }
    }
}

/// The coefficient bundle describing `C = C1^N` analytically.
///
/// `sigma1`/`sigma2` are the odd/even binomial sums and `f1`/`f2` the
/// coefficients of `(σ_z - i k1 σ_y)` and `I`; in the super-critical
/// regime the odd sum is purely imaginary and `sigma1` stores its
/// imaginary part (`Σ1 = i sigma1`). These raw sums grow like `k2^N` and
/// overflow for very large `N`; `scaled_f1`/`scaled_f2` carry the products
/// `((1-a)/2)^N f_i`, evaluated stably by raising the combined bases
/// `λ± = ((1-a)/2)(k2 ± sqrt(1-k1^2))` (or the complex pair's
/// modulus/phase) to the N-th power, and stay bounded for all `N`.
#[derive(Debug, Clone, Copy)]
pub struct TransferCoeffs {
    pub k1: f64,
    pub k2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub f1: f64,
    pub f2: f64,
    /// `(1 - a)/2`.
    pub prefactor_base: f64,
    pub regime: Regime,
    /// `((1-a)/2)^N f1`.
    pub scaled_f1: f64,
    /// `((1-a)/2)^N f2`.
    pub scaled_f2: f64,
}

/// Evaluates `k1, k2` and the binomial sums for the given parameters.
/// Fails with `DegenerateTransparency` as `a -> 1`, where `k1, k2`
/// diverge.
pub fn coeffs(p: &IfmParams) -> Result<TransferCoeffs> {
    let a = p.a();
    if a >= DEGENERATE_A {
        return Err(IfmError::DegenerateTransparency(a));
    }
    let n = p.n_cycles() as i32;
    let theta = p.theta();
    let ratio = (1.0 + a) / (1.0 - a);
    let k1 = ratio * theta.sin();
    let k2 = ratio * theta.cos();
    let pb = (1.0 - a) / 2.0;
    let disc = 1.0 - k1 * k1;

    let (regime, sigma1, sigma2, f1, f2, scaled_f1, scaled_f2);
    if disc > CRITICAL_EPS {
        regime = Regime::Sub;
        let d = disc.sqrt();
        let hi = (k2 + d).powi(n);
        let lo = (k2 - d).powi(n);
        sigma1 = (hi - lo) / 2.0;
        sigma2 = (hi + lo) / 2.0;
        f1 = sigma1 / d;
        f2 = sigma2;
        let lam_hi = (pb * (k2 + d)).powi(n);
        let lam_lo = (pb * (k2 - d)).powi(n);
        scaled_f1 = (lam_hi - lam_lo) / (2.0 * d);
        scaled_f2 = (lam_hi + lam_lo) / 2.0;
    } else if disc < -CRITICAL_EPS {
        regime = Regime::Super;
        let e = (-disc).sqrt();
        // (k2 + i e)^N by modulus and phase; the conjugate pair keeps the
        // combinations real.
        let modulus = k2.hypot(e);
        let phase = e.atan2(k2);
        let (sin_n, cos_n) = (n as f64 * phase).sin_cos();
        let pow = modulus.powi(n);
        sigma1 = pow * sin_n;
        sigma2 = pow * cos_n;
        f1 = sigma1 / e;
        f2 = sigma2;
        let pow_scaled = (pb * modulus).powi(n);
        scaled_f1 = pow_scaled * sin_n / e;
        scaled_f2 = pow_scaled * cos_n;
    } else {
        // Inside the window the branch expressions hit 0/0; expand the
        // binomial sums in powers of disc = 1 - k1² instead (the same
        // series covers both signs). The first correction term keeps the
        // relative truncation error at O(disc²) ~ 1e-18, which the bare
        // k1 = 1 limits (error O(disc)) would not.
        regime = Regime::Critical;
        let nf = n as f64;
        let c2 = nf * (nf - 1.0) / 2.0;
        let c3 = c2 * (nf - 2.0) / 3.0;
        let pow = |base: f64, e: i32| if e < 0 { 0.0 } else { base.powi(e) };
        f1 = nf * pow(k2, n - 1) + c3 * disc * pow(k2, n - 3);
        f2 = pow(k2, n) + c2 * disc * pow(k2, n - 2);
        sigma1 = disc.abs().sqrt() * f1;
        sigma2 = f2;
        let mu = pb * k2;
        scaled_f1 = nf * pb * pow(mu, n - 1) + c3 * disc * pb.powi(3) * pow(mu, n - 3);
        scaled_f2 = pow(mu, n) + c2 * disc * pb * pb * pow(mu, n - 2);
    }

    Ok(TransferCoeffs {
        k1,
        k2,
        sigma1,
        sigma2,
        f1,
        f2,
        prefactor_base: pb,
        regime,
        scaled_f1,
        scaled_f2,
    })
}

/// Single-cycle transfer matrix in the old basis: `diag(1, a) R_θ`.
pub fn cycle_matrix_old(p: &IfmParams) -> ComplexMatrix {
    let (s, c) = p.theta().sin_cos();
    let a = p.a();
    ComplexMatrix::from_real_rows(&[vec![c, -s], vec![a * s, a * c]])
}

/// Single-cycle transfer matrix in the new basis, from the analytic form
/// `((1-a)/2)(σ_z - i k1 σ_y + k2 I)`.
pub fn cycle_matrix_new(p: &IfmParams) -> Result<ComplexMatrix> {
    let tc = coeffs(p)?;
    let pb = tc.prefactor_base;
    Ok(ComplexMatrix::from_real_rows(&[
        vec![pb * (1.0 + tc.k2), -pb * tc.k1],
        vec![pb * tc.k1, pb * (tc.k2 - 1.0)],
    ]))
}

/// N-fold product `[diag(1,a) R_θ]^N` in the old basis, built by direct
/// matrix multiplication. Valid for every `a` in `[0, 1]`.
pub fn transfer_present(p: &IfmParams) -> ComplexMatrix {
    let cycle = cycle_matrix_old(p);
    let mut acc = ComplexMatrix::identity(2);
    for _ in 0..p.n_cycles() {
        acc = cycle.mul(&acc);
    }
    acc
}

/// Object-absent transfer matrix, the quarter turn `D = [[0,-1],[1,0]]`.
pub fn transfer_absent() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]])
}

/// Basis rotation `U = exp(-i σ_y θ/2)`; maps old-basis coordinates to the
/// basis in which the cycle matrix takes its analytic form.
pub fn basis_change(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_real_rows(&[vec![c, -s], vec![s, c]])
}

/// Analytic N-cycle matrix `C = ((1-a)/2)^N [f1 (σ_z - i k1 σ_y) + f2 I]`
/// in the new basis, evaluated through the scaled coefficients so it stays
/// accurate up to `N = 10^4` and beyond.
pub fn closed_form_c(p: &IfmParams) -> Result<ComplexMatrix> {
    let tc = coeffs(p)?;
    let (g1, g2, k1) = (tc.scaled_f1, tc.scaled_f2, tc.k1);
    Ok(ComplexMatrix::from_real_rows(&[
        vec![g2 + g1, -k1 * g1],
        vec![k1 * g1, g2 - g1],
    ]))
}

/// Applies the present-object transfer to old-basis amplitudes `(α, β)`.
pub fn apply_present(p: &IfmParams, state: &PureState) -> Result<UnnormalizedVector> {
    if state.dim() != 2 {
        return Err(IfmError::DimensionMismatch(format!(
            "transfer matrices act on 2-dimensional states, got dim {}",
            state.dim()
        )));
    }
    UnnormalizedVector::new(transfer_present(p).matvec(state.amplitudes()))
}

/// Applies the absent-object transfer (`D`) to old-basis amplitudes.
pub fn apply_absent(state: &PureState) -> Result<PureState> {
    if state.dim() != 2 {
        return Err(IfmError::DimensionMismatch(format!(
            "transfer matrices act on 2-dimensional states, got dim {}",
            state.dim()
        )));
    }
    PureState::new(transfer_absent().matvec(state.amplitudes()))
}
