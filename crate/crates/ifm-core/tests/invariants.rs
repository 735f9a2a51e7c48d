//! Cross-module invariants and property tests that do not belong to a
//! single acceptance criterion.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ifm_core::channels::{self, DensityMatrix, IfmParams};
use ifm_core::metrics::{self, InputState};
use ifm_core::optimal::{self, BlochVector};
use ifm_core::smallmat::{self, ComplexMatrix, Subsystem};
use ifm_core::transfer::{self, PureState};

fn params(n: u32, a: f64, q: f64) -> IfmParams {
    IfmParams::new(n, a, q).unwrap()
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    raw.add(&raw.adjoint()).scale_re(0.5)
}

fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6 {
            return PureState::normalized(v).unwrap();
        }
    }
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let parts: Vec<(f64, DensityMatrix)> = (0..dim)
        .map(|_| {
            let s = random_pure(rng, dim);
            (
                rng.gen_range(0.05..1.0),
                DensityMatrix::new(s.projector()).unwrap(),
            )
        })
        .collect();
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    let normalized: Vec<(f64, DensityMatrix)> =
        parts.into_iter().map(|(w, r)| (w / total, r)).collect();
    DensityMatrix::mixture(&normalized).unwrap()
}

#[test]
fn trace_norm_dominates_trace_and_sums_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..1000 {
        let dim = rng.gen_range(2..=8);
        let h = random_hermitian(&mut rng, dim);
        let norm = smallmat::trace_norm(&h).unwrap();
        assert!(norm >= h.trace().re.abs() - 1e-10);
        let eig = smallmat::hermitian_eigen(&h, 1e-10).unwrap();
        let lambda_sum: f64 = eig.eigenvalues.iter().map(|l| l.abs()).sum();
        assert!((norm - lambda_sum).abs() < 1e-10);
    }
}

#[test]
fn partial_trace_commutes_with_channels_on_the_kept_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..20 {
        let rho = random_density(&mut rng, 6);
        let a = rng.gen_range(0.0..=1.0);
        let lifted = channels::absorption_channel(a).lift_left(2);
        let after_channel = channels::apply_channel(&lifted, &rho).unwrap();
        let route1 = after_channel.partial_trace(3, 2, Subsystem::A).unwrap();
        let marginal = rho.partial_trace(3, 2, Subsystem::A).unwrap();
        let route2 = channels::apply_channel(&channels::absorption_channel(a), &marginal).unwrap();
        assert!(route1.matrix().max_abs_diff(route2.matrix()) < 1e-12);
    }
}

#[test]
fn kron_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..10 {
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 3);
        let c = random_hermitian(&mut rng, 2);
        let left = smallmat::kron(&smallmat::kron(&a, &b), &c);
        let right = smallmat::kron(&a, &smallmat::kron(&b, &c));
        assert!(left.max_abs_diff(&right) < 1e-12);
    }
}

#[test]
fn constructed_channels_preserve_state_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..50 {
        let theta = rng.gen_range(1e-3..std::f64::consts::FRAC_PI_2);
        let a = rng.gen_range(0.0..=1.0);
        let rho3 = random_density(&mut rng, 3);
        // apply_channel re-validates trace, Hermiticity and positivity on
        // every output; reaching the assertions below means both passed.
        let out = channels::apply_channel(&channels::rotation_channel(theta), &rho3).unwrap();
        let out = channels::apply_channel(&channels::absorption_channel(a), &out).unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        let rho4 = random_density(&mut rng, 4);
        let out4 = channels::apply_channel(&channels::detector_model_channel(a), &rho4).unwrap();
        assert!((out4.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn helstrom_error_splits_off_the_loss_block() {
    // On pure inputs the full 3-dim Helstrom value equals
    // (1 - P_loss - ‖q|φ'><φ'| - (1-q)|φ''><φ''|‖)/2: the loss population
    // contributes no confusion.
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..100 {
        let p = params(
            rng.gen_range(1..=9),
            rng.gen_range(0.0..0.98),
            rng.gen_range(0.0..=1.0),
        );
        let state = random_pure(&mut rng, 2);
        let phi_p = transfer::apply_present(&p, &state).unwrap();
        let phi_a = transfer::apply_absent(&state).unwrap();
        let outer_p = ComplexMatrix::outer(phi_p.amplitudes(), phi_p.amplitudes());
        let outer_a = ComplexMatrix::outer(phi_a.amplitudes(), phi_a.amplitudes());
        let m = outer_p.scale_re(p.q()).sub(&outer_a.scale_re(1.0 - p.q()));
        let loss = p.q() * (1.0 - phi_p.norm_sq());
        let split = 0.5 * (1.0 - loss - smallmat::trace_norm(&m).unwrap());

        let rho = DensityMatrix::from_amplitudes(&state.embedded(3)).unwrap();
        let full = metrics::p_error_density(&rho, &p).unwrap();
        assert!((full - split).abs() < 1e-10);
    }
}

#[test]
fn projecting_onto_the_xz_plane_never_hurts() {
    // At fixed r_x in the rotated basis, the state with r_y = 0 and
    // r_z = sqrt(1 - r_x²) has the smallest error and failure rate.
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..200 {
        let p = params(
            rng.gen_range(1..=8),
            rng.gen_range(0.0..0.95),
            rng.gen_range(0.05..0.95),
        );
        let state = random_pure(&mut rng, 2);
        let u = transfer::basis_change(p.theta());
        let new_amps = u.matvec(state.amplitudes());
        let bloch = BlochVector::from_pure_state(&PureState::new(new_amps).unwrap());
        let flattened = BlochVector::new(bloch.rx, 0.0, (1.0 - bloch.rx * bloch.rx).sqrt())
            .unwrap()
            .pure_state()
            .unwrap();
        let back = PureState::new(u.adjoint().matvec(flattened.amplitudes())).unwrap();

        let original = InputState::Single(state);
        let projected = InputState::Single(back);
        assert!(metrics::p_error(&projected, &p) <= metrics::p_error(&original, &p) + 1e-12);
        assert!(metrics::p_fail(&projected, &p) <= metrics::p_fail(&original, &p) + 1e-12);
    }
}

#[test]
fn high_transparency_loss_curve_rises_then_falls() {
    // For large a the normalized loss minimum grows with N up to a peak
    // at or after the first N admitting zero-error states, then decays.
    let a = 0.8;
    let values: Vec<f64> = (2..=200u32)
        .map(|n| optimal::min_ploss(&params(n, a, 1.0)).unwrap().value)
        .collect();
    let boundary_n = (2..=200u32)
        .find(|&n| {
            let theta = std::f64::consts::FRAC_PI_2 / n as f64;
            (1.0 + a) / (1.0 - a) * theta.sin() <= 1.0
        })
        .unwrap();
    let (argmax_idx, &peak) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .unwrap();
    let argmax_n = argmax_idx as u32 + 2;
    assert!(
        argmax_n >= boundary_n,
        "peak at N = {argmax_n} before the k1 = 1 boundary N = {boundary_n}"
    );
    assert!(peak > values[0] && peak > *values.last().unwrap());
    assert!(argmax_idx > 0 && argmax_idx < values.len() - 1);
}

#[test]
fn constrained_optimum_never_beats_the_minimum() {
    for n in (2..=40u32).step_by(2) {
        for &a in &[0.0, 0.15, 0.35, 0.55, 0.75] {
            let p = params(n, a, 0.6);
            if let Ok(plus) = optimal::best_zero_error(&p) {
                let floor = optimal::min_ploss(&p).unwrap().value;
                assert!(plus.value >= floor - 1e-12, "N = {n}, a = {a}");
            }
        }
    }
}

proptest! {
    #[test]
    fn failure_probability_decomposes(
        n in 1u32..12,
        a in 0.0f64..1.0,
        q in 0.0f64..1.0,
        re0 in -1.0f64..1.0,
        im0 in -1.0f64..1.0,
        re1 in -1.0f64..1.0,
        im1 in -1.0f64..1.0,
    ) {
        let norm_sq = re0 * re0 + im0 * im0 + re1 * re1 + im1 * im1;
        prop_assume!(norm_sq > 1e-3);
        let p = params(n, a, q);
        let state = InputState::Single(
            PureState::normalized(vec![
                Complex64::new(re0, im0),
                Complex64::new(re1, im1),
            ])
            .unwrap(),
        );
        let fail = metrics::p_fail(&state, &p);
        let split = metrics::p_loss(&state, &p) + metrics::p_error(&state, &p);
        prop_assert!((fail - split).abs() < 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&fail));
    }

    #[test]
    fn rank_two_trace_norm_formula_holds(
        pfac in 0.01f64..6.0,
        v in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let s1 = [Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])];
        let s2 = [Complex64::new(v[4], v[5]), Complex64::new(v[6], v[7])];
        prop_assume!(s1.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        prop_assume!(s2.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        let psi1 = PureState::normalized(s1.to_vec()).unwrap();
        let psi2 = PureState::normalized(s2.to_vec()).unwrap();
        let m = psi1.projector().scale_re(pfac).sub(&psi2.projector());
        let eigen = smallmat::trace_norm(&m).unwrap();
        prop_assert!((metrics::pure_trace_norm(pfac, &psi1, &psi2) - eigen).abs() < 1e-10);
    }
}
