//! The cross-check oracle runner behind `ifm verify`.
//!
//! Every suite pits one computation path against an independent one:
//! analytic matrix powers against direct products, eigen-solved optima
//! against grid scans, transfer-matrix figures against full channel
//! simulation, and the structural claims against randomized instances.
//! A fixed seed makes the whole report reproducible byte for byte.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ifm_core::channels::{self, DensityMatrix, IfmParams};
use ifm_core::metrics::{self, BipartitePureState, InputState};
use ifm_core::optimal::{self, Objective, Optimum};
use ifm_core::smallmat::{self, Subsystem};
use ifm_core::transfer::{self, PureState};

/// Outcome of one oracle suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub max_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl SuiteResult {
    fn new(name: &'static str, max_err: f64, tol: f64) -> Self {
        Self {
            name,
            max_err,
            tol,
            pass: max_err <= tol,
        }
    }
}

/// The loss-minimizer under test; swappable so the suite's sensitivity to
/// implementation faults can itself be tested.
pub type MinPlossFn = dyn Fn(&IfmParams) -> ifm_core::Result<Optimum> + Sync;

fn params(n: u32, a: f64, q: f64) -> IfmParams {
    IfmParams::new(n, a, q).unwrap()
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6 {
            return PureState::normalized(v).unwrap();
        }
    }
}

fn random_bipartite(rng: &mut ChaCha8Rng) -> BipartitePureState {
    let mix = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    BipartitePureState::new(
        mix.cos(),
        mix.sin(),
        random_pure(rng, 2),
        random_pure(rng, 2),
    )
    .unwrap()
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let weights: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let parts: Vec<(f64, DensityMatrix)> = weights
        .into_iter()
        .map(|w| {
            let s = random_pure(rng, dim);
            (w / total, DensityMatrix::new(s.projector()).unwrap())
        })
        .collect();
    DensityMatrix::mixture(&parts).unwrap()
}

fn suite_closed_form_vs_product() -> SuiteResult {
    let mut max_rel = 0.0f64;
    for i in 0..=9 {
        let a = i as f64 * 0.1;
        for n in (1..=200).chain([1000]) {
            let p = params(n, a, 0.5);
            let u = transfer::basis_change(p.theta());
            let direct = u.mul(&transfer::transfer_present(&p)).mul(&u.adjoint());
            let analytic = transfer::closed_form_c(&p).unwrap();
            let scale = direct.max_abs().max(1e-300);
            max_rel = max_rel.max(analytic.max_abs_diff(&direct) / scale);
        }
    }
    SuiteResult::new("closed-form-vs-product", max_rel, 1e-10)
}

fn suite_eigen_vs_grid(rng: &mut ChaCha8Rng, min_ploss: &MinPlossFn) -> SuiteResult {
    let mut max_err = 0.0f64;
    let mut points: Vec<(u32, f64, f64)> = vec![(1, 0.0, 1.0), (4, 0.2, 0.7), (6, 0.8, 0.5)];
    for _ in 0..5 {
        points.push((
            rng.gen_range(1..=8),
            rng.gen_range(0.0..0.95),
            rng.gen_range(0.05..1.0),
        ));
    }
    for (n, a, q) in points {
        let p = params(n, a, q);
        let analytic = min_ploss(&p).unwrap();
        let scanned = optimal::brute_force_min(&p, Objective::Loss, 64);
        max_err = max_err.max((analytic.value - scanned.value).abs());
        let achieved = metrics::p_loss(&InputState::Single(analytic.state_old_basis), &p);
        max_err = max_err.max((achieved - scanned.value).abs());
    }
    SuiteResult::new("eigen-vs-grid", max_err, 1e-6)
}

fn suite_channel_vs_transfer(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut max_err = 0.0f64;
    for trial in 0..40 {
        let p = params(
            rng.gen_range(1..=10),
            rng.gen_range(0.0..0.99),
            rng.gen_range(0.0..=1.0),
        );
        let state = if trial % 2 == 0 {
            InputState::Single(random_pure(rng, 2))
        } else {
            InputState::Bipartite(random_bipartite(rng))
        };
        let rho = state.to_density().unwrap();
        let out = channels::ifm_present(&rho, &p).unwrap();
        let loss_channel = p.q()
            * match rho.dim() {
                3 => out.population(2),
                _ => out.population(4) + out.population(5),
            };
        max_err = max_err.max((metrics::p_loss(&state, &p) - loss_channel).abs());
        let error_channel = metrics::p_error_density(&rho, &p).unwrap();
        max_err = max_err.max((metrics::p_error(&state, &p) - error_channel).abs());
    }
    SuiteResult::new("channel-vs-transfer", max_err, 1e-10)
}

fn suite_convexity(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut max_err = 0.0f64;
    for _ in 0..50 {
        let p = params(
            rng.gen_range(1..=6),
            rng.gen_range(0.0..0.95),
            rng.gen_range(0.0..=1.0),
        );
        let count = rng.gen_range(2..=4);
        let mut weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let states: Vec<PureState> = (0..count).map(|_| random_pure(rng, 2)).collect();
        let parts: Vec<(f64, DensityMatrix)> = weights
            .iter()
            .zip(&states)
            .map(|(&w, s)| (w, DensityMatrix::from_amplitudes(&s.embedded(3)).unwrap()))
            .collect();
        let mixed = DensityMatrix::mixture(&parts).unwrap();

        let loss_mixed = p.q() * channels::ifm_present(&mixed, &p).unwrap().population(2);
        let loss_avg: f64 = weights
            .iter()
            .zip(&states)
            .map(|(&w, s)| w * metrics::p_loss(&InputState::Single(s.clone()), &p))
            .sum();
        max_err = max_err.max((loss_mixed - loss_avg).abs());

        let error_mixed = metrics::p_error_density(&mixed, &p).unwrap();
        let error_avg: f64 = weights
            .iter()
            .zip(&states)
            .map(|(&w, s)| w * metrics::p_error(&InputState::Single(s.clone()), &p))
            .sum();
        max_err = max_err.max((error_avg - error_mixed).max(0.0));
    }
    SuiteResult::new("mixture-convexity", max_err, 1e-10)
}

fn suite_bipartite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut max_err = 0.0f64;
    for _ in 0..50 {
        let p = params(
            rng.gen_range(1..=6),
            rng.gen_range(0.0..0.95),
            rng.gen_range(0.0..=1.0),
        );
        let rho_ab = InputState::Bipartite(random_bipartite(rng))
            .to_density()
            .unwrap();
        let rho_a = rho_ab.partial_trace(3, 2, Subsystem::A).unwrap();
        let out_ab = channels::ifm_present(&rho_ab, &p).unwrap();
        let loss_ab = p.q() * (out_ab.population(4) + out_ab.population(5));
        let loss_a = p.q() * channels::ifm_present(&rho_a, &p).unwrap().population(2);
        max_err = max_err.max((loss_ab - loss_a).abs());
        let err_ab = metrics::p_error_density(&rho_ab, &p).unwrap();
        let err_a = metrics::p_error_density(&rho_a, &p).unwrap();
        max_err = max_err.max((err_ab - err_a).max(0.0));
    }
    SuiteResult::new("bipartite-marginal", max_err, 1e-10)
}

fn suite_iff(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut mismatches = 0u32;
    for trial in 0..100 {
        let p = params(
            rng.gen_range(1..=8),
            rng.gen_range(0.0..0.95),
            rng.gen_range(0.1..0.9),
        );
        let state = if trial % 3 == 0 {
            match optimal::zero_error_states(&p).unwrap() {
                Some((plus, _)) => InputState::Single(plus.state_old_basis),
                None => InputState::Single(random_pure(rng, 2)),
            }
        } else {
            InputState::Single(random_pure(rng, 2))
        };
        let zero_error = metrics::p_error(&state, &p) < 1e-10;
        let zero_overlap = metrics::inner_pp(&state, &p).norm() < 1e-8;
        if zero_error != zero_overlap {
            mismatches += 1;
        }
    }
    SuiteResult::new("zero-error-iff-overlap", mismatches as f64, 0.0)
}

fn suite_positivity() -> SuiteResult {
    let mut min_coeff = f64::INFINITY;
    for i in 0..=9 {
        let a = i as f64 * 0.1;
        for n in 1..=200u32 {
            let tc = transfer::coeffs(&params(n, a, 0.5)).unwrap();
            min_coeff = min_coeff.min(tc.f1).min(tc.f2);
        }
    }
    SuiteResult::new("coefficient-positivity", (-min_coeff).max(0.0), 0.0)
}

fn suite_rank_two_norm(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut max_err = 0.0f64;
    for _ in 0..200 {
        let dim = rng.gen_range(2..=6);
        let psi1 = random_pure(rng, dim);
        let psi2 = random_pure(rng, dim);
        let pfac = rng.gen_range(0.05..5.0);
        let m = psi1.projector().scale_re(pfac).sub(&psi2.projector());
        let eigen = smallmat::trace_norm(&m).unwrap();
        max_err = max_err.max((metrics::pure_trace_norm(pfac, &psi1, &psi2) - eigen).abs());
    }
    SuiteResult::new("rank-two-trace-norm", max_err, 1e-10)
}

fn suite_detector_reduction() -> SuiteResult {
    let mut max_err = 0.0f64;
    for &a in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let reduced = channels::detector_model_channel(a)
            .restricted(&[0, 1, 3])
            .unwrap();
        for (r, e) in reduced
            .kraus_ops()
            .iter()
            .zip(channels::absorption_channel(a).kraus_ops())
        {
            max_err = max_err.max(r.max_abs_diff(e));
        }
    }
    SuiteResult::new("detector-model-reduction", max_err, 1e-12)
}

fn suite_contractivity(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut max_err = 0.0f64;
    for _ in 0..40 {
        let q = rng.gen_range(0.0..=1.0);
        let rho1 = random_density(rng, 6);
        let rho2 = random_density(rng, 6);
        let full = channels::generalized_trace_distance(&rho1, &rho2, q).unwrap();
        let m1 = rho1.partial_trace(3, 2, Subsystem::A).unwrap();
        let m2 = rho2.partial_trace(3, 2, Subsystem::A).unwrap();
        let reduced = channels::generalized_trace_distance(&m1, &m2, q).unwrap();
        max_err = max_err.max((reduced - full).max(0.0));
    }
    SuiteResult::new("trace-distance-contractivity", max_err, 1e-10)
}

/// Runs every suite with the production loss minimizer.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    run_all_with(seed, &|p| optimal::min_ploss(p))
}

/// Runs every suite, using the given loss minimizer in the eigen-vs-grid
/// suite.
pub fn run_all_with(seed: u64, min_ploss: &MinPlossFn) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        suite_closed_form_vs_product(),
        suite_eigen_vs_grid(&mut rng, min_ploss),
        suite_channel_vs_transfer(&mut rng),
        suite_convexity(&mut rng),
        suite_bipartite(&mut rng),
        suite_iff(&mut rng),
        suite_positivity(),
        suite_rank_two_norm(&mut rng),
        suite_detector_reduction(),
        suite_contractivity(&mut rng),
    ]
}

/// Renders the verification report; one line per suite plus a summary.
pub fn render_report(results: &[SuiteResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "suite {:<32} max_err={:.6e} tol={:.0e} {}\n",
            r.name,
            r.max_err,
            r.tol,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    let all = results.iter().all(|r| r.pass);
    out.push_str(&format!(
        "verification: {} ({}/{} suites)\n",
        if all { "PASS" } else { "FAIL" },
        results.iter().filter(|r| r.pass).count(),
        results.len()
    ));
    out
}
