//! Loss probability, minimum discrimination error, and the combined
//! failure probability.
//!
//! Pure inputs (single-photon or photon-plus-ancilla) are evaluated
//! through the 2x2 transfer matrices: with `T` the present-object product,
//! `D` the absent-object quarter turn and `ρ_A` the reduced input on the
//! `|1>, |2>` subspace,
//!
//! ```text
//! P_loss  = q (1 - Tr[T†T ρ_A])
//! λ1      = q Tr[T†T ρ_A] + (1 - q)
//! λ2      = 2 sqrt(q(1-q)) |Tr[D†T ρ_A]|
//! P_error = (λ1 - sqrt(λ1² - λ2²)) / 2
//! P_f     = 1 - (λ1 + sqrt(λ1² - λ2²)) / 2
//! ```
//!
//! The same quantities are also computable by simulating the N-cycle
//! channels on the full density matrix and taking the Helstrom value
//! `(1 - ‖q ρ' - (1-q) ρ''‖)/2`; that route is the definition for mixed
//! inputs, serves as the independent cross-check for pure ones, and is
//! authoritative at transparency amplitudes within 1e-12 of 1.

use num_complex::Complex64;

use crate::channels::{self, DensityMatrix, IfmParams};
use crate::error::{IfmError, Result};
use crate::smallmat::{self, ComplexMatrix, Subsystem};
use crate::transfer::{self, PureState};

/// Above this transparency amplitude the channel simulation is used for
/// the probabilities.
const CHANNEL_AUTHORITATIVE_A: f64 = 1.0 - 1e-12;

/// `α |1>|φ1> + β |2>|φ2>` with nonnegative real `α, β`: the general pure
/// input of photon A entangled with an ancilla photon B. Phases can always
/// be pushed into the B states.
#[derive(Debug, Clone)]
pub struct BipartitePureState {
    alpha: f64,
    beta: f64,
    phi_b1: PureState,
    phi_b2: PureState,
}

impl BipartitePureState {
    pub fn new(alpha: f64, beta: f64, phi_b1: PureState, phi_b2: PureState) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 {
            return Err(IfmError::InvalidParams(
                "bipartite coefficients must be nonnegative".into(),
            ));
        }
        if (alpha * alpha + beta * beta - 1.0).abs() > 1e-12 {
            return Err(IfmError::InvalidParams(format!(
                "bipartite coefficients must satisfy α² + β² = 1, got {}",
                alpha * alpha + beta * beta
            )));
        }
        if phi_b1.dim() != 2 || phi_b2.dim() != 2 {
            return Err(IfmError::DimensionMismatch(
                "ancilla states must be 2-dimensional".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            phi_b1,
            phi_b2,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Amplitudes on the 4-dimensional `{|1>, |2>} ⊗ B` space,
    /// index = 2 i_A + i_B.
    pub fn amplitudes_a12(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; 4];
        for k in 0..2 {
            v[k] += self.alpha * self.phi_b1.amplitudes()[k];
            v[2 + k] += self.beta * self.phi_b2.amplitudes()[k];
        }
        v
    }
}

/// A pure IFM input: either a single photon on `|1>, |2>` or a photon
/// entangled with a 2-dimensional ancilla.
#[derive(Debug, Clone)]
pub enum InputState {
    Single(PureState),
    Bipartite(BipartitePureState),
}

impl InputState {
    /// Reduced density matrix on the `|1>, |2>` subspace of photon A.
    pub fn reduced_a(&self) -> ComplexMatrix {
        match self {
            InputState::Single(s) => {
                assert_eq!(s.dim(), 2, "single-photon inputs live on |1>, |2>");
                s.projector()
            }
            InputState::Bipartite(b) => {
                let v = b.amplitudes_a12();
                let joint = ComplexMatrix::outer(&v, &v);
                smallmat::partial_trace(&joint, 2, 2, Subsystem::A)
                    .expect("4 = 2 x 2 by construction")
            }
        }
    }

    /// Full input amplitudes including the loss slot: dim 3 for single
    /// inputs, dim 6 (A ⊗ B with A = 3) for bipartite ones.
    pub fn full_amplitudes(&self) -> Vec<Complex64> {
        match self {
            InputState::Single(s) => s.embedded(3),
            InputState::Bipartite(b) => {
                let mut v = b.amplitudes_a12();
                v.resize(6, Complex64::ZERO);
                v
            }
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_amplitudes(&self.full_amplitudes())
    }
}

/// Precomputed transfer bilinears for one parameter point: `gram = T†T`
/// and `overlap = D†T`. Every pure-state figure of merit is a trace
/// against the reduced input density, so batch evaluations (grid oracles,
/// sweeps) build this once.
#[derive(Debug, Clone)]
pub struct MetricKernel {
    q: f64,
    gram: ComplexMatrix,
    overlap: ComplexMatrix,
}

impl MetricKernel {
    pub fn new(p: &IfmParams) -> Self {
        let t = transfer::transfer_present(p);
        let d = transfer::transfer_absent();
        Self {
            q: p.q(),
            gram: t.adjoint().mul(&t),
            overlap: d.adjoint().mul(&t),
        }
    }

    /// `Tr[T†T ρ_A]`, the probability that the photon survives absorption.
    pub fn survival(&self, rho_a: &ComplexMatrix) -> f64 {
        self.gram.mul(rho_a).trace().re
    }

    /// `<φ''|φ'> = Tr[D†T ρ_A]`.
    pub fn inner(&self, rho_a: &ComplexMatrix) -> Complex64 {
        self.overlap.mul(rho_a).trace()
    }

    pub fn p_loss(&self, rho_a: &ComplexMatrix) -> f64 {
        self.q * (1.0 - self.survival(rho_a))
    }

    /// `(λ1, λ2)` of the pure-state error expression.
    pub fn lambdas(&self, rho_a: &ComplexMatrix) -> (f64, f64) {
        let l1 = self.q * self.survival(rho_a) + (1.0 - self.q);
        let l2 = 2.0 * (self.q * (1.0 - self.q)).sqrt() * self.inner(rho_a).norm();
        (l1, l2)
    }

    pub fn p_error(&self, rho_a: &ComplexMatrix) -> f64 {
        let (l1, l2) = self.lambdas(rho_a);
        0.5 * (l1 - (l1 * l1 - l2 * l2).max(0.0).sqrt())
    }

    pub fn p_fail(&self, rho_a: &ComplexMatrix) -> f64 {
        let (l1, l2) = self.lambdas(rho_a);
        1.0 - 0.5 * (l1 + (l1 * l1 - l2 * l2).max(0.0).sqrt())
    }

    /// Allocation-free evaluations on pure 2-dimensional amplitudes, for
    /// tight grid loops.
    pub fn survival_amps(&self, amps: &[Complex64]) -> f64 {
        self.gram.quadratic_form(amps).re
    }

    pub fn inner_amps(&self, amps: &[Complex64]) -> Complex64 {
        self.overlap.quadratic_form(amps)
    }

    pub fn p_loss_amps(&self, amps: &[Complex64]) -> f64 {
        self.q * (1.0 - self.survival_amps(amps))
    }

    pub fn p_error_amps(&self, amps: &[Complex64]) -> f64 {
        let l1 = self.q * self.survival_amps(amps) + (1.0 - self.q);
        let l2 = 2.0 * (self.q * (1.0 - self.q)).sqrt() * self.inner_amps(amps).norm();
        0.5 * (l1 - (l1 * l1 - l2 * l2).max(0.0).sqrt())
    }

    pub fn p_fail_amps(&self, amps: &[Complex64]) -> f64 {
        let l1 = self.q * self.survival_amps(amps) + (1.0 - self.q);
        let l2 = 2.0 * (self.q * (1.0 - self.q)).sqrt() * self.inner_amps(amps).norm();
        1.0 - 0.5 * (l1 + (l1 * l1 - l2 * l2).max(0.0).sqrt())
    }
}

fn channel_outputs(state: &InputState, p: &IfmParams) -> Result<(DensityMatrix, DensityMatrix)> {
    let rho = state.to_density()?;
    Ok((
        channels::ifm_present(&rho, p)?,
        channels::ifm_absent(&rho, p)?,
    ))
}

/// Total population on the loss slot(s) of a channel output.
fn loss_population(rho: &DensityMatrix) -> f64 {
    match rho.dim() {
        3 => rho.population(2),
        6 => rho.population(4) + rho.population(5),
        d => unreachable!("IFM outputs are dim 3 or 6, got {d}"),
    }
}

/// Loss probability `q (1 - <φ'|φ'>)`. Valid for every `a` in `[0, 1]`;
/// near `a = 1` the value comes from the channel simulation.
pub fn p_loss(state: &InputState, p: &IfmParams) -> f64 {
    if p.a() >= CHANNEL_AUTHORITATIVE_A {
        let (rho_p, _) = channel_outputs(state, p).expect("valid input state");
        return p.q() * loss_population(&rho_p);
    }
    MetricKernel::new(p).p_loss(&state.reduced_a())
}

/// Minimum discrimination error for a pure input, from the closed form.
pub fn p_error(state: &InputState, p: &IfmParams) -> f64 {
    if p.a() >= CHANNEL_AUTHORITATIVE_A {
        let rho = state.to_density().expect("valid input state");
        return p_error_density(&rho, p).expect("valid input state");
    }
    MetricKernel::new(p).p_error(&state.reduced_a())
}

/// Failure probability `P_f = 1 - (λ1 + sqrt(λ1² - λ2²))/2`, equal to
/// `P_loss + P_error`.
pub fn p_fail(state: &InputState, p: &IfmParams) -> f64 {
    if p.a() >= CHANNEL_AUTHORITATIVE_A {
        return p_loss(state, p) + p_error(state, p);
    }
    MetricKernel::new(p).p_fail(&state.reduced_a())
}

/// The overlap `<φ''|φ'>` between the two possible outputs. Computed from
/// the transfer product, which is valid for every `a`.
pub fn inner_pp(state: &InputState, p: &IfmParams) -> Complex64 {
    MetricKernel::new(p).inner(&state.reduced_a())
}

/// Helstrom bound `(1 - ‖q ρ' - (1-q) ρ''‖)/2` evaluated on the full
/// channel outputs. This is the definition of the error for arbitrary
/// (also mixed) inputs.
pub fn p_error_density(rho: &DensityMatrix, p: &IfmParams) -> Result<f64> {
    let rho_p = channels::ifm_present(rho, p)?;
    let rho_a = channels::ifm_absent(rho, p)?;
    let dist = channels::generalized_trace_distance(&rho_p, &rho_a, p.q())?;
    Ok(0.5 * (1.0 - dist))
}

/// Same as [`p_error_density`], additionally returning the projector pair
/// achieving the bound (`P1` votes "present", `P0` votes "absent").
pub fn p_error_density_with_povm(
    rho: &DensityMatrix,
    p: &IfmParams,
) -> Result<(f64, (ComplexMatrix, ComplexMatrix))> {
    let rho_p = channels::ifm_present(rho, p)?;
    let rho_a = channels::ifm_absent(rho, p)?;
    let m = rho_p
        .matrix()
        .scale_re(p.q())
        .sub(&rho_a.matrix().scale_re(1.0 - p.q()));
    let povm = channels::optimal_projectors(&m)?;
    let dist = smallmat::trace_norm(&m)?;
    Ok((0.5 * (1.0 - dist), povm))
}

/// Trace norm of `p |ψ1><ψ1| - |ψ2><ψ2|` for pure states and `p > 0`:
/// `sqrt((p+1)² - 4 p |<ψ1|ψ2>|²)`.
pub fn pure_trace_norm(pfac: f64, psi1: &PureState, psi2: &PureState) -> f64 {
    assert!(pfac > 0.0, "the rank-two formula needs a positive weight");
    assert_eq!(psi1.dim(), psi2.dim(), "states must share a dimension");
    let overlap_sq = psi1.inner(psi2).norm_sqr();
    ((pfac + 1.0).powi(2) - 4.0 * pfac * overlap_sq)
        .max(0.0)
        .sqrt()
}

/// Everything about discriminating one input: the three probabilities, the
/// output overlap, the `λ` pair, and the optimal measurement.
#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub p_loss: f64,
    pub p_error: f64,
    pub p_fail: f64,
    pub inner_product: Complex64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `(P0, P1)` on the full output space; `P1` projects where "present"
    /// is declared.
    pub povm: Option<(ComplexMatrix, ComplexMatrix)>,
}

/// Full discrimination report for a pure input, including the optimal
/// POVM on the channel outputs.
pub fn discriminate(state: &InputState, p: &IfmParams) -> Result<DiscriminationResult> {
    let rho_a = state.reduced_a();
    let kernel = MetricKernel::new(p);
    let inner = kernel.inner(&rho_a);
    let (lambda1, lambda2) = kernel.lambdas(&rho_a);

    let (loss, error) = if p.a() >= CHANNEL_AUTHORITATIVE_A {
        (p_loss(state, p), p_error(state, p))
    } else {
        (kernel.p_loss(&rho_a), kernel.p_error(&rho_a))
    };
    let fail = loss + error;

    let (_, povm) = p_error_density_with_povm(&state.to_density()?, p)?;

    debug_assert!(error <= p.q().min(1.0 - p.q()) + 1e-12);
    Ok(DiscriminationResult {
        p_loss: loss,
        p_error: error,
        p_fail: fail,
        inner_product: inner,
        lambda1,
        lambda2,
        povm: Some(povm),
    })
}
