//! Kraus-channel model of the interrogation cycle.
//!
//! The photon lives in the 3-dimensional basis `|1> (up), |2> (down),
//! |3> (loss)`. One cycle rotates up/down by `θ` and, when the object is
//! present, partially transfers the down amplitude onto the loss state.
//! Composing the two channels N times gives the "present" output; N bare
//! rotations give the "absent" output.
//!
//! The loss label: the detector-model derivation (dim 4, with a vacuum
//! state `|v>`) and the effective 3-dimensional channel count the absorbed
//! photon in different basis slots. Both bookkeepings are equivalent, and
//! this module identifies `|v>` with `|3>` when compressing the detector
//! model down to three dimensions.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{IfmError, Result};
use crate::smallmat::{self, ComplexMatrix};

/// Tolerance on channel completeness and density-matrix invariants.
const CHANNEL_TOL: f64 = 1e-12;
/// Allowed negativity of density-matrix eigenvalues; covers rounding
/// accumulated over compositions up to N = 10^4.
const PSD_TOL: f64 = -1e-10;

/// The experiment triple: cycle count `N`, transparency amplitude `a`
/// (`a^2` is the object transparency) and prior probability `q` that the
/// object is present. The per-cycle rotation angle `θ = π/2N` is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfmParams {
    n_cycles: u32,
    transparency_amp: f64,
    prior: f64,
    theta: f64,
}

impl IfmParams {
    pub fn new(n_cycles: u32, transparency_amp: f64, prior: f64) -> Result<Self> {
        if n_cycles < 1 {
            return Err(IfmError::InvalidParams("n_cycles must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&transparency_amp) || !transparency_amp.is_finite() {
            return Err(IfmError::InvalidParams(format!(
                "transparency amplitude must lie in [0, 1], got {transparency_amp}"
            )));
        }
        if !(0.0..=1.0).contains(&prior) || !prior.is_finite() {
            return Err(IfmError::InvalidParams(format!(
                "prior must lie in [0, 1], got {prior}"
            )));
        }
        Ok(Self {
            n_cycles,
            transparency_amp,
            prior,
            theta: FRAC_PI_2 / n_cycles as f64,
        })
    }

    pub fn n_cycles(&self) -> u32 {
        self.n_cycles
    }

    /// Transparency amplitude `a`.
    pub fn a(&self) -> f64 {
        self.transparency_amp
    }

    /// Prior probability `q` of the object being present.
    pub fn q(&self) -> f64 {
        self.prior
    }

    /// Per-cycle rotation angle `θ = π/2N`.
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// A completely positive trace-preserving map given by its Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates the completeness relation `Σ K_i† K_i = I` before
    /// accepting the operator list.
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match kraus_ops.first() {
            Some(k) if k.is_square() => k.rows(),
            _ => {
                return Err(IfmError::DimensionMismatch(
                    "a channel needs at least one square Kraus operator".into(),
                ))
            }
        };
        if kraus_ops.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(IfmError::DimensionMismatch(
                "all Kraus operators must share one dimension".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &kraus_ops {
            sum = sum.add(&k.adjoint().mul(k));
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > CHANNEL_TOL {
            return Err(IfmError::InvalidParams(format!(
                "Kraus completeness violated by {defect:.3e}"
            )));
        }
        Ok(Self { dim, kraus_ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    /// The same channel acting on the A factor of A ⊗ B, with `dim_b`
    /// trivial on B.
    pub fn lift_left(&self, dim_b: usize) -> Self {
        let eye = ComplexMatrix::identity(dim_b);
        let ops = self
            .kraus_ops
            .iter()
            .map(|k| smallmat::kron(k, &eye))
            .collect();
        Self {
            dim: self.dim * dim_b,
            kraus_ops: ops,
        }
    }

    /// Compression of every Kraus operator onto a subset of basis indices.
    /// Fails unless the compressed operators still form a channel, i.e.
    /// unless the subspace is closed under the dynamics.
    pub fn restricted(&self, keep: &[usize]) -> Result<Self> {
        let ops = self.kraus_ops.iter().map(|k| k.submatrix(keep)).collect();
        Self::new(ops)
    }
}

/// A Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(IfmError::DimensionMismatch(
                "density matrix must be square".into(),
            ));
        }
        let defect = mat.hermiticity_defect();
        if defect > CHANNEL_TOL {
            return Err(IfmError::NotHermitian {
                deviation: defect,
                tol: CHANNEL_TOL,
            });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > CHANNEL_TOL || tr.im.abs() > CHANNEL_TOL {
            return Err(IfmError::InvalidParams(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let eig = smallmat::hermitian_eigen(&mat, CHANNEL_TOL)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < PSD_TOL {
            return Err(IfmError::InvalidParams(format!(
                "density matrix has eigenvalue {min:.3e} below {PSD_TOL:.0e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Rank-one density `|ψ><ψ|` from normalized amplitudes.
    pub fn from_amplitudes(amps: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(IfmError::InvalidParams(format!(
                "amplitudes have squared norm {norm_sq}, expected 1"
            )));
        }
        Self::new(ComplexMatrix::outer(amps, amps))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Diagonal entry `<i|ρ|i>`.
    pub fn population(&self, i: usize) -> f64 {
        self.mat[(i, i)].re
    }

    /// `Tr(ρ^2)`.
    pub fn purity(&self) -> f64 {
        self.mat.mul(&self.mat).trace().re
    }

    /// Convex combination `Σ w_i ρ_i`.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let dim = parts
            .first()
            .map(|(_, r)| r.dim())
            .ok_or_else(|| IfmError::InvalidParams("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            acc = acc.add(&rho.mat.scale_re(*w));
        }
        Self::new(acc)
    }

    /// Reduced state of one tensor factor.
    pub fn partial_trace(
        &self,
        dim_a: usize,
        dim_b: usize,
        keep: smallmat::Subsystem,
    ) -> Result<Self> {
        let reduced = smallmat::partial_trace(&self.mat, dim_a, dim_b, keep)?;
        Self::new(reduced)
    }
}

/// Applies `ρ -> Σ K_i ρ K_i†`, then symmetrizes and rescales the trace.
/// The cleanup is a no-op up to 1e-12 for a valid channel and input; a
/// larger drift indicates a bug and panics.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(IfmError::DimensionMismatch(format!(
            "channel dim {} vs state dim {}",
            ch.dim(),
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(ch.dim(), ch.dim());
    for k in ch.kraus_ops() {
        out = out.add(&k.mul(rho.matrix()).mul(&k.adjoint()));
    }
    let symmetrized = out.add(&out.adjoint()).scale_re(0.5);
    let drift = out.max_abs_diff(&symmetrized);
    assert!(
        drift < CHANNEL_TOL,
        "channel output symmetry drift {drift:.3e}"
    );
    let tr = symmetrized.trace().re;
    assert!(
        (tr - 1.0).abs() < CHANNEL_TOL,
        "channel output trace drift {:.3e}",
        tr - 1.0
    );
    DensityMatrix::new(symmetrized.scale_re(1.0 / tr))
}

/// The per-cycle rotation channel: a single unitary Kraus operator mixing
/// `|1>` and `|2>` by `θ` and leaving the loss state alone.
pub fn rotation_channel(theta: f64) -> KrausChannel {
    debug_assert!(theta > 0.0 && theta <= FRAC_PI_2 + 1e-15);
    let (s, c) = theta.sin_cos();
    let r =
        ComplexMatrix::from_real_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]);
    KrausChannel::new(vec![r]).expect("rotation is unitary")
}

/// The absorption channel of a semitransparent object: the down amplitude
/// survives with amplitude `a`, the rest lands on the loss state.
pub fn absorption_channel(a: f64) -> KrausChannel {
    debug_assert!((0.0..=1.0).contains(&a));
    let a0 = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, a, 0.0],
        vec![0.0, 0.0, 1.0],
    ]);
    let mut a1 = ComplexMatrix::zeros(3, 3);
    a1[(2, 1)] = Complex64::new((1.0 - a * a).sqrt(), 0.0);
    KrausChannel::new(vec![a0, a1]).expect("absorption channel is complete")
}

fn cycle_channels(p: &IfmParams, dim: usize) -> Result<(KrausChannel, KrausChannel)> {
    let rot = rotation_channel(p.theta());
    let abs = absorption_channel(p.a());
    match dim {
        3 => Ok((rot, abs)),
        6 => Ok((rot.lift_left(2), abs.lift_left(2))),
        d => Err(IfmError::DimensionMismatch(format!(
            "IFM states are 3-dimensional (single photon) or 6-dimensional \
             (photon tensored with a qubit ancilla), got {d}"
        ))),
    }
}

/// N-cycle output when the object is present: rotation then absorption,
/// repeated. Accepts single-photon (dim 3) or bipartite (dim 6) inputs; in
/// the bipartite case the cycle acts on the A factor only.
pub fn ifm_present(rho: &DensityMatrix, p: &IfmParams) -> Result<DensityMatrix> {
    let (rot, abs) = cycle_channels(p, rho.dim())?;
    let mut state = rho.clone();
    for _ in 0..p.n_cycles() {
        state = apply_channel(&abs, &apply_channel(&rot, &state)?)?;
    }
    Ok(state)
}

/// N-cycle output when the object is absent: N bare rotations.
pub fn ifm_absent(rho: &DensityMatrix, p: &IfmParams) -> Result<DensityMatrix> {
    let (rot, _) = cycle_channels(p, rho.dim())?;
    let mut state = rho.clone();
    for _ in 0..p.n_cycles() {
        state = apply_channel(&rot, &state)?;
    }
    Ok(state)
}

/// The object modeled explicitly as a beamsplitter followed by a
/// photon-counting detector, on the 4-dimensional basis
/// `|1>, |2>, |3>, |v>`. The Kraus operators are `C_i = D_i U_b` with
/// `U_b` the beamsplitter unitary and `D_0, D_1` the detector operators.
pub fn detector_model_channel(a: f64) -> KrausChannel {
    debug_assert!((0.0..=1.0).contains(&a));
    let t = (1.0 - a * a).sqrt();
    let u_b = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, a, -t, 0.0],
        vec![0.0, t, a, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ]);
    // Detector: photons in |3> are absorbed into the vacuum |v>, everything
    // else passes through.
    let d0 = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ]);
    let mut d1 = ComplexMatrix::zeros(4, 4);
    d1[(3, 2)] = Complex64::ONE;
    let c0 = d0.mul(&u_b);
    let c1 = d1.mul(&u_b);
    KrausChannel::new(vec![c0, c1]).expect("detector model channel is complete")
}

/// Generalized trace distance `D_q(ρ1, ρ2) = ‖q ρ1 - (1-q) ρ2‖`.
pub fn generalized_trace_distance(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    q: f64,
) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(IfmError::DimensionMismatch(format!(
            "trace distance needs equal dims, got {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let m = rho1
        .matrix()
        .scale_re(q)
        .sub(&rho2.matrix().scale_re(1.0 - q));
    smallmat::trace_norm(&m)
}

/// The projector pair maximizing `Tr[(P1 - P0) M]` over all decompositions
/// of the identity: `P1` projects onto the nonnegative eigenspace of the
/// Hermitian `M`, `P0` onto the rest, and the achieved value is `‖M‖`.
pub fn optimal_projectors(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let eig = smallmat::hermitian_eigen(m, 1e-10)?;
    let dim = m.rows();
    let mut p1 = ComplexMatrix::zeros(dim, dim);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda >= 0.0 {
            let col = eig.eigenvectors.column(k);
            p1 = p1.add(&ComplexMatrix::outer(&col, &col));
        }
    }
    let p0 = ComplexMatrix::identity(dim).sub(&p1);
    Ok((p0, p1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::Subsystem;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pure3(amps: [f64; 3]) -> DensityMatrix {
        let v: Vec<Complex64> = amps.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        DensityMatrix::from_amplitudes(&v).unwrap()
    }

    fn random_density(rng: &mut StdRng, dim: usize) -> DensityMatrix {
        // Random rank-`dim` mixture of random pure states.
        let mut acc = ComplexMatrix::zeros(dim, dim);
        let weights: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            let v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let v: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
            acc = acc.add(&ComplexMatrix::outer(&v, &v).scale_re(w / total));
        }
        DensityMatrix::new(acc).unwrap()
    }

    #[test]
    fn params_validate_ranges() {
        assert!(IfmParams::new(0, 0.5, 0.5).is_err());
        assert!(IfmParams::new(3, 1.5, 0.5).is_err());
        assert!(IfmParams::new(3, 0.5, -0.1).is_err());
        let p = IfmParams::new(4, 0.5, 0.5).unwrap();
        assert!((p.theta() * 4.0 - FRAC_PI_2).abs() < 1e-16);
    }

    #[test]
    fn quarter_rotation_moves_up_to_down() {
        let ch = rotation_channel(FRAC_PI_2);
        let out = apply_channel(&ch, &pure3([1.0, 0.0, 0.0])).unwrap();
        assert!((out.population(1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_fixes_loss_state() {
        let ch = rotation_channel(0.3);
        let out = apply_channel(&ch, &pure3([0.0, 0.0, 1.0])).unwrap();
        assert!((out.population(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn n_rotations_complete_the_quarter_turn() {
        let n = 7;
        let p = IfmParams::new(n, 1.0, 0.5).unwrap();
        let ch = rotation_channel(p.theta());
        let mut rho = pure3([1.0, 0.0, 0.0]);
        for _ in 0..n {
            rho = apply_channel(&ch, &rho).unwrap();
        }
        assert!((rho.population(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transparent_object_absorbs_nothing() {
        let ch = absorption_channel(1.0);
        let mut rng = StdRng::seed_from_u64(3);
        let rho = random_density(&mut rng, 3);
        let out = apply_channel(&ch, &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn opaque_object_absorbs_down_state() {
        let ch = absorption_channel(0.0);
        let out = apply_channel(&ch, &pure3([0.0, 1.0, 0.0])).unwrap();
        assert!((out.population(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_absorption_splits_population() {
        let ch = absorption_channel(0.6);
        let out = apply_channel(&ch, &pure3([0.0, 1.0, 0.0])).unwrap();
        assert!((out.population(1) - 0.36).abs() < 1e-14);
        assert!((out.population(2) - 0.64).abs() < 1e-14);
    }

    #[test]
    fn absorption_preserves_trace_on_mixed_input() {
        let ch = absorption_channel(0.6);
        let out = apply_channel(&ch, &DensityMatrix::maximally_mixed(3)).unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_then_inverse_is_identity() {
        let mut rng = StdRng::seed_from_u64(9);
        let rho = random_density(&mut rng, 3);
        let fwd = rotation_channel(0.4);
        // Inverse rotation: transpose of the real rotation matrix.
        let inv = KrausChannel::new(vec![fwd.kraus_ops()[0].adjoint()]).unwrap();
        let back = apply_channel(&inv, &apply_channel(&fwd, &rho).unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn present_with_transparent_object_equals_absent() {
        let p = IfmParams::new(5, 1.0, 0.3).unwrap();
        let mut rng = StdRng::seed_from_u64(17);
        let rho = random_density(&mut rng, 3);
        let with = ifm_present(&rho, &p).unwrap();
        let without = ifm_absent(&rho, &p).unwrap();
        assert!(with.matrix().max_abs_diff(without.matrix()) < 1e-12);
    }

    #[test]
    fn single_cycle_opaque_loses_everything_from_up() {
        let p = IfmParams::new(1, 0.0, 0.5).unwrap();
        let out = ifm_present(&pure3([1.0, 0.0, 0.0]), &p).unwrap();
        assert!((out.population(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn absent_keeps_pure_states_pure() {
        let p = IfmParams::new(6, 0.3, 0.5).unwrap();
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..10 {
            let v: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let v: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
            let rho = DensityMatrix::from_amplitudes(&v).unwrap();
            let out = ifm_absent(&rho, &p).unwrap();
            assert!((out.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn absent_maps_up_to_down() {
        let p = IfmParams::new(9, 0.2, 0.5).unwrap();
        let out = ifm_absent(&pure3([1.0, 0.0, 0.0]), &p).unwrap();
        assert!((out.population(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detector_model_reduces_to_absorption_channel() {
        // Keep |1>, |2>, |v| and compare against the 3-dim channel with the
        // loss state in the last slot.
        for &a in &[0.0, 0.3, 0.7, 1.0] {
            let full = detector_model_channel(a);
            let reduced = full.restricted(&[0, 1, 3]).unwrap();
            let effective = absorption_channel(a);
            for (r, e) in reduced.kraus_ops().iter().zip(effective.kraus_ops()) {
                assert!(r.max_abs_diff(e) < 1e-12, "a = {a}");
            }
        }
    }

    #[test]
    fn detector_model_opaque_absorbs_down_state() {
        let ch = detector_model_channel(0.0);
        let amps = [
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
        ];
        let out = apply_channel(&ch, &DensityMatrix::from_amplitudes(&amps).unwrap()).unwrap();
        assert!((out.population(3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn detector_model_transparent_keeps_down_state() {
        let ch = detector_model_channel(1.0);
        let amps = [
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
        ];
        let out = apply_channel(&ch, &DensityMatrix::from_amplitudes(&amps).unwrap()).unwrap();
        assert!(out.population(3).abs() < 1e-14);
        assert!((out.population(1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_distance_basics() {
        let mut rng = StdRng::seed_from_u64(29);
        let rho = random_density(&mut rng, 3);
        assert!(generalized_trace_distance(&rho, &rho, 0.5).unwrap() < 1e-12);
        let e1 = pure3([1.0, 0.0, 0.0]);
        let e2 = pure3([0.0, 1.0, 0.0]);
        assert!((generalized_trace_distance(&e1, &e2, 0.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_contracts_under_partial_trace() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..25 {
            let q: f64 = rng.gen_range(0.0..1.0);
            let rho1 = random_density(&mut rng, 6);
            let rho2 = random_density(&mut rng, 6);
            let full = generalized_trace_distance(&rho1, &rho2, q).unwrap();
            let m1 = rho1.partial_trace(3, 2, Subsystem::A).unwrap();
            let m2 = rho2.partial_trace(3, 2, Subsystem::A).unwrap();
            let reduced = generalized_trace_distance(&m1, &m2, q).unwrap();
            assert!(full >= reduced - 1e-10);
        }
    }

    #[test]
    fn optimal_projectors_achieve_trace_norm() {
        let z = crate::smallmat::pauli_z();
        let (p0, p1) = optimal_projectors(&z).unwrap();
        let achieved = p1.sub(&p0).mul(&z).trace().re;
        assert!((achieved - 2.0).abs() < 1e-12);
        assert!((p1[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((p0[(1, 1)].re - 1.0).abs() < 1e-12);

        let zero = ComplexMatrix::zeros(3, 3);
        let (q0, q1) = optimal_projectors(&zero).unwrap();
        assert!(q1.sub(&q0).mul(&zero).trace().re.abs() < 1e-14);

        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..25 {
            let raw = ComplexMatrix::from_fn(4, 4, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let h = raw.add(&raw.adjoint()).scale_re(0.5);
            let (p0, p1) = optimal_projectors(&h).unwrap();
            assert!(p0.add(&p1).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
            let achieved = p1.sub(&p0).mul(&h).trace().re;
            let norm = smallmat::trace_norm(&h).unwrap();
            assert!((achieved - norm).abs() < 1e-10);
        }
    }

    #[test]
    fn channels_reject_dim_mismatch() {
        let ch = rotation_channel(0.2);
        let rho4 = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            apply_channel(&ch, &rho4),
            Err(IfmError::DimensionMismatch(_))
        ));
        assert!(matches!(
            ifm_present(&rho4, &IfmParams::new(2, 0.5, 0.5).unwrap()),
            Err(IfmError::DimensionMismatch(_))
        ));
    }
}
