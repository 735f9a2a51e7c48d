//! wasm-bindgen surface for the browser demo (`www/index.html`).
//!
//! Three interactive operations, each returning a JSON string the page
//! parses: loss-rate curves over the cycle count, the zero-error boundary
//! in the (N, a) plane, and a single-point discrimination report with the
//! optimal input states. Errors surface as thrown JS strings.

use num_complex::Complex64;
use serde_json::json;
use wasm_bindgen::prelude::*;

use ifm_core::metrics::{self, InputState};
use ifm_core::optimal;
use ifm_core::transfer::{self, PureState};
use ifm_core::{asymptotics, IfmParams};

fn params(n: u32, a: f64, q: f64) -> Result<IfmParams, String> {
    IfmParams::new(n, a, q).map_err(|e| e.to_string())
}

fn amps_json(amps: &[Complex64]) -> serde_json::Value {
    serde_json::Value::Array(amps.iter().map(|z| json!([z.re, z.im])).collect())
}

pub fn sweep_curves_impl(n_min: u32, n_max: u32, a: f64, q: f64) -> Result<String, String> {
    if n_min < 1 || n_min > n_max || n_max - n_min > 100_000 {
        return Err(format!("bad cycle range {n_min}..{n_max}"));
    }
    if !(0.0..1.0).contains(&a) {
        return Err(format!(
            "transparency amplitude must lie in [0, 1), got {a}"
        ));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(format!("prior must lie in [0, 1], got {q}"));
    }
    let mut ns = Vec::new();
    let mut k1s = Vec::new();
    let mut min_curve = Vec::new();
    let mut plus_curve = Vec::new();
    let mut leading_curve = Vec::new();
    for n in n_min..=n_max {
        let p = params(n, a, 1.0)?;
        let tc = transfer::coeffs(&p).map_err(|e| e.to_string())?;
        ns.push(n);
        k1s.push(tc.k1);
        min_curve.push(json!(
            optimal::min_ploss(&p).map_err(|e| e.to_string())?.value
        ));
        plus_curve.push(if tc.k1 <= 1.0 {
            json!(
                optimal::best_zero_error(&p)
                    .map_err(|e| e.to_string())?
                    .value
            )
        } else {
            serde_json::Value::Null
        });
        leading_curve.push(json!(asymptotics::leading_term(&p)));
    }
    let doc = json!({
        "a": a,
        "q": q,
        "n": ns,
        "k1": k1s,
        "ploss_min_over_q": min_curve,
        "ploss_plus_over_q": plus_curve,
        "leading_over_q": leading_curve,
    });
    Ok(doc.to_string())
}

pub fn boundary_curve_impl(n_min: u32, n_max: u32) -> Result<String, String> {
    if n_min < 2 || n_min > n_max || n_max - n_min > 100_000 {
        return Err(format!("bad cycle range {n_min}..{n_max}"));
    }
    let mut ns = Vec::new();
    let mut a_stars = Vec::new();
    for n in n_min..=n_max {
        let theta = std::f64::consts::FRAC_PI_2 / n as f64;
        ns.push(n);
        a_stars.push((1.0 - theta.sin()) / (1.0 + theta.sin()));
    }
    Ok(json!({ "n": ns, "a_star": a_stars }).to_string())
}

pub fn discriminate_impl(
    n: u32,
    a: f64,
    q: f64,
    re1: f64,
    im1: f64,
    re2: f64,
    im2: f64,
) -> Result<String, String> {
    if !(0.0..=1.0).contains(&a) {
        return Err(format!(
            "transparency amplitude must lie in [0, 1], got {a}"
        ));
    }
    let p = params(n, a, q)?;
    let amps = vec![Complex64::new(re1, im1), Complex64::new(re2, im2)];
    let state = PureState::normalized(amps).map_err(|e| e.to_string())?;
    let result =
        metrics::discriminate(&InputState::Single(state.clone()), &p).map_err(|e| e.to_string())?;

    // The optimal-state block needs the coefficient bundle, which is not
    // defined arbitrarily close to a = 1.
    let optimal_block = match transfer::coeffs(&p) {
        Ok(tc) => {
            let min_opt = optimal::min_ploss(&p).map_err(|e| e.to_string())?;
            let zero_error = match optimal::zero_error_states(&p).map_err(|e| e.to_string())? {
                Some((plus, minus)) => json!({
                    "theta2": plus.angle,
                    "ploss_plus": plus.value,
                    "ploss_minus": minus.value,
                    "state_plus_old_basis": amps_json(plus.state_old_basis.amplitudes()),
                    "state_minus_old_basis": amps_json(minus.state_old_basis.amplitudes()),
                }),
                None => serde_json::Value::Null,
            };
            json!({
                "k1": tc.k1,
                "regime": tc.regime.label(),
                "theta1": min_opt.angle,
                "ploss_min": min_opt.value,
                "state_min_old_basis": amps_json(min_opt.state_old_basis.amplitudes()),
                "zero_error": zero_error,
            })
        }
        Err(_) => serde_json::Value::Null,
    };

    let doc = json!({
        "n": n,
        "a": a,
        "q": q,
        "input_state": amps_json(state.amplitudes()),
        "p_loss": result.p_loss,
        "p_error": result.p_error,
        "p_fail": result.p_fail,
        "inner_product": [result.inner_product.re, result.inner_product.im],
        "lambda1": result.lambda1,
        "lambda2": result.lambda2,
        "optimal": optimal_block,
    });
    Ok(doc.to_string())
}

/// Loss-rate curves (normalized by the prior) over `n_min..=n_max` at one
/// transparency amplitude.
#[wasm_bindgen]
pub fn sweep_curves(n_min: u32, n_max: u32, a: f64, q: f64) -> Result<String, JsValue> {
    sweep_curves_impl(n_min, n_max, a, q).map_err(|e| JsValue::from_str(&e))
}

/// The zero-error boundary a*(N).
#[wasm_bindgen]
pub fn boundary_curve(n_min: u32, n_max: u32) -> Result<String, JsValue> {
    boundary_curve_impl(n_min, n_max).map_err(|e| JsValue::from_str(&e))
}

/// Discrimination report for one input state, with the optimal states for
/// the same parameters.
#[wasm_bindgen]
pub fn discriminate(
    n: u32,
    a: f64,
    q: f64,
    re1: f64,
    im1: f64,
    re2: f64,
    im2: f64,
) -> Result<String, JsValue> {
    discriminate_impl(n, a, q, re1, im1, re2, im2).map_err(|e| JsValue::from_str(&e))
}
