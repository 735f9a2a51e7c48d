//! Optimal input states and the grid oracle that certifies them.
//!
//! The minimal-loss state is the top eigenvector of `C†C`, a 2x2 spin
//! Hamiltonian; the zero-error states sit at Bloch coordinates
//! `r_x = k1, r_y = 0, r_z = ±sqrt(1 - k1²)` in the rotated basis and
//! exist exactly when `k1 <= 1`. [`brute_force_min`] scans the full Bloch
//! sphere through the independent direct-product evaluation path, so the
//! analytic optima can be checked against something that does not share
//! their derivation.

use num_complex::Complex64;

use crate::channels::{self, DensityMatrix, IfmParams};
use crate::error::{IfmError, Result};
use crate::metrics::{self, DiscriminationResult, MetricKernel};
use crate::smallmat::{self, ComplexMatrix, Subsystem};
use crate::transfer::{self, PureState};

/// A qubit state as `ρ = (I + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Result<Self> {
        let norm_sq = rx * rx + ry * ry + rz * rz;
        if norm_sq > 1.0 + 1e-12 {
            return Err(IfmError::InvalidParams(format!(
                "Bloch vector length {} exceeds 1",
                norm_sq.sqrt()
            )));
        }
        Ok(Self { rx, ry, rz })
    }

    pub fn norm(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    /// Pure states sit on the unit sphere.
    pub fn is_pure(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-10
    }

    /// The density matrix `(I + r·σ)/2`.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![
                Complex64::new((1.0 + self.rz) / 2.0, 0.0),
                Complex64::new(self.rx / 2.0, -self.ry / 2.0),
            ],
            vec![
                Complex64::new(self.rx / 2.0, self.ry / 2.0),
                Complex64::new((1.0 - self.rz) / 2.0, 0.0),
            ],
        ])
    }

    /// Amplitudes `(cos(t/2), e^{iφ} sin(t/2))` of a pure Bloch vector.
    pub fn pure_state(&self) -> Result<PureState> {
        if !self.is_pure() {
            return Err(IfmError::InvalidParams(format!(
                "Bloch vector of length {} is not pure",
                self.norm()
            )));
        }
        let t = self.rz.clamp(-1.0, 1.0).acos();
        let phi = self.ry.atan2(self.rx);
        PureState::new(vec![
            Complex64::new((t / 2.0).cos(), 0.0),
            Complex64::from_polar((t / 2.0).sin(), phi),
        ])
    }

    pub fn from_pure_state(state: &PureState) -> Self {
        assert_eq!(state.dim(), 2);
        let a = state.amplitudes()[0];
        let b = state.amplitudes()[1];
        let cross = a.conj() * b;
        Self {
            rx: 2.0 * cross.re,
            ry: 2.0 * cross.im,
            rz: a.norm_sqr() - b.norm_sqr(),
        }
    }
}

/// An optimizer output: the state in both bases, the achieved objective
/// value, and the Bloch-sphere angle of the state where one is defined
/// (`θ1` for the minimal-loss state, `θ2` for the zero-error pair, the
/// polar grid parameter for brute-force results).
#[derive(Debug, Clone)]
pub struct Optimum {
    pub state_new_basis: PureState,
    pub state_old_basis: PureState,
    pub value: f64,
    pub angle: f64,
    /// Set when the top eigenvalue of `C†C` is numerically degenerate and
    /// the returned eigenvector is merely the conventional representative.
    pub degenerate: bool,
}

/// Which figure of merit a brute-force scan minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Loss,
    Error,
    Fail,
}

fn old_from_new(p: &IfmParams, new_basis: &PureState) -> PureState {
    let u_dag = transfer::basis_change(p.theta()).adjoint();
    PureState::new(u_dag.matvec(new_basis.amplitudes())).expect("unitary preserves norm")
}

fn new_from_old(p: &IfmParams, old_basis: &PureState) -> PureState {
    let u = transfer::basis_change(p.theta());
    PureState::new(u.matvec(old_basis.amplitudes())).expect("unitary preserves norm")
}

/// The unique loss-minimizing input state and its value
/// `q [1 - ((1-a)/2)^{2N} (f1 + sqrt(f2² + f1² k1²))²]`.
pub fn min_ploss(p: &IfmParams) -> Result<Optimum> {
    let tc = transfer::coeffs(p)?;
    let (g1, g2, k1) = (tc.scaled_f1, tc.scaled_f2, tc.k1);
    let root = (g2 * g2 + g1 * g1 * k1 * k1).sqrt();
    let survival = (g1 + root) * (g1 + root);
    let value = (p.q() * (1.0 - survival)).max(0.0);
    let theta1 = (g1 * k1).atan2(g2);
    let state_new = PureState::new(vec![
        Complex64::new((theta1 / 2.0).cos(), 0.0),
        Complex64::new(-(theta1 / 2.0).sin(), 0.0),
    ])?;
    let state_old = old_from_new(p, &state_new);
    // The eigenvalue gap of C†C is 4 f1 sqrt(f2² + f1² k1²); it closes
    // only where f1 underflows.
    let scale = g1 * g1 * (1.0 + k1 * k1) + g2 * g2;
    let degenerate = 4.0 * g1 * root <= 1e-14 * scale;
    Ok(Optimum {
        state_new_basis: state_new,
        state_old_basis: state_old,
        value,
        angle: theta1,
        degenerate,
    })
}

/// The pair of perfect-discrimination states `φ±`, or `None` when
/// `k1 > 1` and no input reaches zero error. The `φ+` member always has
/// the smaller loss.
pub fn zero_error_states(p: &IfmParams) -> Result<Option<(Optimum, Optimum)>> {
    let tc = transfer::coeffs(p)?;
    if tc.k1 > 1.0 {
        return Ok(None);
    }
    let (g1, g2, k1) = (tc.scaled_f1, tc.scaled_f2, tc.k1);
    let d = (1.0 - k1 * k1).max(0.0).sqrt();
    let theta2 = k1.min(1.0).asin();
    let (s2, c2) = (theta2 / 2.0).sin_cos();

    let plus_new = PureState::from_real(&[c2, s2])?;
    let minus_new = PureState::from_real(&[s2, c2])?;
    let plus = Optimum {
        state_old_basis: old_from_new(p, &plus_new),
        state_new_basis: plus_new,
        value: (p.q() * (1.0 - (g1 * d + g2) * (g1 * d + g2))).max(0.0),
        angle: theta2,
        degenerate: false,
    };
    let minus = Optimum {
        state_old_basis: old_from_new(p, &minus_new),
        state_new_basis: minus_new,
        value: (p.q() * (1.0 - (g2 - g1 * d) * (g2 - g1 * d))).max(0.0),
        angle: theta2,
        degenerate: false,
    };
    Ok(Some((plus, minus)))
}

/// The loss-optimal member of the zero-error family, `φ+`, with value
/// `q [1 - ((1-a)/2)^{2N} (f1 sqrt(1-k1²) + f2)²]`.
pub fn best_zero_error(p: &IfmParams) -> Result<Optimum> {
    match zero_error_states(p)? {
        Some((plus, _)) => Ok(plus),
        None => {
            let tc = transfer::coeffs(p)?;
            Err(IfmError::NoZeroErrorState(tc.k1))
        }
    }
}

/// The three named opaque-case states: `φ_a` minimizes the loss, `φ_b`
/// and `φ_c` discriminate perfectly, with `φ_c` sacrificing the photon
/// whenever the object is present.
pub fn opaque_specials(n: u32, q: f64) -> Result<(Optimum, Optimum, Optimum)> {
    let p = IfmParams::new(n, 0.0, q)?;
    let theta = p.theta();
    let (s, c) = theta.sin_cos();
    let build = |amps: [f64; 2], value: f64| -> Result<Optimum> {
        let old = PureState::from_real(&amps)?;
        Ok(Optimum {
            state_new_basis: new_from_old(&p, &old),
            state_old_basis: old,
            value,
            angle: theta,
            degenerate: false,
        })
    };
    let ni = n as i32;
    let phi_a = build([c, -s], q * (1.0 - c.powi(2 * ni - 2)))?;
    let phi_b = build([1.0, 0.0], q * (1.0 - c.powi(2 * ni)))?;
    let phi_c = build([s, c], q)?;
    Ok((phi_a, phi_b, phi_c))
}

/// Evaluates one member `α φ+ |φ1> + β φ- |φ1⊥>` of the zero-error
/// entangled family through the full 6-dimensional channel simulation and
/// Helstrom measurement.
pub fn entangled_family_check(
    alpha: f64,
    beta: f64,
    p: &IfmParams,
) -> Result<DiscriminationResult> {
    if (alpha * alpha + beta * beta - 1.0).abs() > 1e-9 {
        return Err(IfmError::InvalidParams(format!(
            "family coefficients must satisfy α² + β² = 1, got {}",
            alpha * alpha + beta * beta
        )));
    }
    let (plus, minus) = zero_error_states(p)?.ok_or_else(|| {
        let k1 = transfer::coeffs(p).map(|tc| tc.k1).unwrap_or(f64::NAN);
        IfmError::NoZeroErrorState(k1)
    })?;

    // α φ+ ⊗ |0>_B + β φ- ⊗ |1>_B on A(3) ⊗ B(2), loss slot empty.
    let mut v6 = vec![Complex64::ZERO; 6];
    for i in 0..2 {
        v6[2 * i] = alpha * plus.state_old_basis.amplitudes()[i];
        v6[2 * i + 1] = beta * minus.state_old_basis.amplitudes()[i];
    }
    let rho = DensityMatrix::from_amplitudes(&v6)?;
    let (p_error, povm) = metrics::p_error_density_with_povm(&rho, p)?;
    let rho_present = channels::ifm_present(&rho, p)?;
    let p_loss = p.q() * (rho_present.population(4) + rho_present.population(5));

    // Overlap and λ pair from the reduced state on the 2x2 A subspace.
    let v4 = [v6[0], v6[1], v6[2], v6[3]];
    let joint = ComplexMatrix::outer(&v4, &v4);
    let rho_a = smallmat::partial_trace(&joint, 2, 2, Subsystem::A)?;
    let kernel = MetricKernel::new(p);
    let (lambda1, lambda2) = kernel.lambdas(&rho_a);

    Ok(DiscriminationResult {
        p_loss,
        p_error,
        p_fail: p_loss + p_error,
        inner_product: kernel.inner(&rho_a),
        lambda1,
        lambda2,
        povm: Some(povm),
    })
}

fn objective_fn<'k>(
    kernel: &'k MetricKernel,
    objective: Objective,
) -> impl Fn(&[Complex64; 2]) -> f64 + 'k {
    move |amps: &[Complex64; 2]| match objective {
        Objective::Loss => kernel.p_loss_amps(amps),
        Objective::Error => kernel.p_error_amps(amps),
        Objective::Fail => kernel.p_fail_amps(amps),
    }
}

fn amps_of(t: f64, phi: f64) -> [Complex64; 2] {
    [
        Complex64::new((t / 2.0).cos(), 0.0),
        Complex64::from_polar((t / 2.0).sin(), phi),
    ]
}

/// Golden-section minimization of a 1-d slice; deterministic, returns the
/// best probe point.
fn golden_min(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes one objective over all pure single-photon inputs
/// `(cos(t/2), e^{iφ} sin(t/2))` by a full `grid × grid` scan followed by
/// golden-section coordinate refinement.
///
/// The evaluation goes through the direct-product transfer matrices, not
/// the binomial coefficients, so this scan is an independent oracle for
/// the analytic optima. The relative phase `φ` is scanned even though all
/// analytic optima are real, precisely so that the oracle does not assume
/// the claim it certifies. Works for every `a` in `[0, 1]`.
pub fn brute_force_min(p: &IfmParams, objective: Objective, grid: usize) -> Optimum {
    assert!(grid >= 8, "grid must be at least 8");
    let kernel = MetricKernel::new(p);
    let obj = objective_fn(&kernel, objective);

    let t_step = std::f64::consts::PI / (grid - 1) as f64;
    let phi_step = std::f64::consts::TAU / grid as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid {
        let t = i as f64 * t_step;
        for j in 0..grid {
            let phi = j as f64 * phi_step;
            let v = obj(&amps_of(t, phi));
            if v < best.0 {
                best = (v, t, phi);
            }
        }
    }

    let (mut value, mut t, mut phi) = best;
    for _ in 0..200 {
        let (t_ref, _) = golden_min(
            |x| obj(&amps_of(x, phi)),
            (t - t_step).max(0.0),
            (t + t_step).min(std::f64::consts::PI),
        );
        t = t_ref;
        let (phi_ref, v) = golden_min(|x| obj(&amps_of(t, x)), phi - phi_step, phi + phi_step);
        phi = phi_ref;
        if value - v < 1e-12 {
            value = value.min(v);
            break;
        }
        value = v;
    }

    let state_old = PureState::new(amps_of(t, phi).to_vec()).expect("parametrized states are unit");
    Optimum {
        state_new_basis: new_from_old(p, &state_old),
        state_old_basis: state_old,
        value,
        angle: t,
        degenerate: false,
    }
}
