//! Implementations of the data-producing subcommands.

use num_complex::Complex64;
use rayon::prelude::*;

use ifm_core::asymptotics;
use ifm_core::metrics::{self, InputState};
use ifm_core::optimal::{self, Objective};
use ifm_core::transfer::{self, PureState};
use ifm_core::IfmParams;

use crate::report::{amplitudes_json, matrix_json, Cell, Format, Table};
use crate::CliError;

/// Grid used when the sweep has to find the nonzero error minimum
/// numerically (no closed form exists for k1 > 1).
const SWEEP_ERROR_GRID: usize = 48;

fn params(n: u32, a: f64, q: f64) -> Result<IfmParams, CliError> {
    IfmParams::new(n, a, q).map_err(CliError::from)
}

fn validate_range(n_min: u32, n_max: u32) -> Result<(), CliError> {
    if n_min < 1 || n_min > n_max {
        return Err(CliError::Invalid(format!(
            "cycle range must satisfy 1 <= n-min <= n-max, got {n_min}..{n_max}"
        )));
    }
    Ok(())
}

fn validate_amp(a: f64) -> Result<(), CliError> {
    if !(0.0..1.0).contains(&a) {
        return Err(CliError::Invalid(format!(
            "transparency amplitude must lie in [0, 1), got {a}"
        )));
    }
    Ok(())
}

fn validate_prior(q: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(CliError::Invalid(format!(
            "prior must lie in [0, 1], got {q}"
        )));
    }
    Ok(())
}

/// `ploss-sweep`: normalized optimal loss rates and the error minimum per
/// (N, a) point. The loss columns are reported divided by q (they scale
/// linearly with it); the error minimum uses the given prior.
pub fn ploss_sweep(
    n_min: u32,
    n_max: u32,
    n_step: u32,
    a_list: &[f64],
    q: f64,
    format: Format,
) -> Result<String, CliError> {
    validate_range(n_min, n_max)?;
    if n_step < 1 {
        return Err(CliError::Invalid("n-step must be >= 1".into()));
    }
    if a_list.is_empty() {
        return Err(CliError::Invalid(
            "at least one transparency amplitude is required".into(),
        ));
    }
    for &a in a_list {
        validate_amp(a)?;
    }
    validate_prior(q)?;

    let points: Vec<(f64, u32)> = a_list
        .iter()
        .flat_map(|&a| {
            (n_min..=n_max)
                .step_by(n_step as usize)
                .map(move |n| (a, n))
        })
        .collect();

    let rows: Result<Vec<Vec<Cell>>, CliError> = points
        .par_iter()
        .map(|&(a, n)| {
            let p_unit = params(n, a, 1.0)?;
            let tc = transfer::coeffs(&p_unit)?;
            let min_opt = optimal::min_ploss(&p_unit)?;
            let (plus_cell, theta2_cell, p_error_min) = if tc.k1 <= 1.0 {
                let plus = optimal::best_zero_error(&p_unit)?;
                (Cell::Float(plus.value), Cell::Float(plus.angle), 0.0)
            } else {
                let p_q = params(n, a, q)?;
                let found = optimal::brute_force_min(&p_q, Objective::Error, SWEEP_ERROR_GRID);
                (Cell::Missing, Cell::Missing, found.value)
            };
            Ok(vec![
                Cell::Int(n as u64),
                Cell::Float(a),
                Cell::Float(q),
                Cell::Float(min_opt.value),
                plus_cell,
                Cell::Float(tc.k1),
                Cell::Text(tc.regime.label().to_string()),
                Cell::Float(min_opt.angle),
                theta2_cell,
                Cell::Float(p_error_min),
            ])
        })
        .collect();

    let mut table = Table::new(vec![
        "n",
        "a",
        "q",
        "ploss_min_over_q",
        "ploss_plus_over_q",
        "k1",
        "regime",
        "theta1",
        "theta2",
        "p_error_min",
    ]);
    for row in rows? {
        table.push(row);
    }
    Ok(table.render(format))
}

/// `boundary`: the transparency amplitude a*(N) on which k1 = 1, the edge
/// of the zero-error region.
pub fn boundary(n_min: u32, n_max: u32, format: Format) -> Result<String, CliError> {
    if n_min < 2 {
        return Err(CliError::Invalid(
            "the boundary is defined for n-min >= 2 (k1 > 1 is impossible at N = 1 only for a = 0)"
                .into(),
        ));
    }
    validate_range(n_min, n_max)?;
    let mut table = Table::new(vec!["n", "a_star"]);
    for n in n_min..=n_max {
        let theta = std::f64::consts::FRAC_PI_2 / n as f64;
        let a_star = (1.0 - theta.sin()) / (1.0 + theta.sin());
        table.push(vec![Cell::Int(n as u64), Cell::Float(a_star)]);
    }
    Ok(table.render(format))
}

/// `asymptotics`: exact optimal losses against the shared 1/N leading
/// term, plus the two state angles, over a geometric ladder of N. The
/// `theta1` column carries a negative sign: that state sits on the
/// negative-x side of the Bloch sphere.
pub fn asymptotics_table(a: f64, q: f64, n_max: u32, format: Format) -> Result<String, CliError> {
    validate_amp(a)?;
    validate_prior(q)?;
    if n_max < 8 {
        return Err(CliError::Invalid(
            "n-max must be >= 8 for the ladder".into(),
        ));
    }
    let mut table = Table::new(vec![
        "n",
        "exact_min",
        "exact_plus",
        "leading",
        "theta1",
        "theta2",
    ]);
    let mut n = 8u32;
    while n <= n_max {
        let p = params(n, a, q)?;
        let tc = transfer::coeffs(&p)?;
        let est_min = asymptotics::ploss_min_asym(&p)?;
        let theta1 = optimal::min_ploss(&p)?.angle;
        let (plus_cell, theta2_cell) = if tc.k1 <= 1.0 {
            let est_plus = asymptotics::ploss_plus_asym(&p)?;
            let (_, theta2) = asymptotics::angles(&p)?;
            (Cell::Float(est_plus.exact), Cell::Float(theta2))
        } else {
            (Cell::Missing, Cell::Missing)
        };
        table.push(vec![
            Cell::Int(n as u64),
            Cell::Float(est_min.exact),
            plus_cell,
            Cell::Float(est_min.leading),
            Cell::Float(-theta1),
            theta2_cell,
        ]);
        n = match n.checked_mul(2) {
            Some(next) => next,
            None => break,
        };
    }
    Ok(table.render(format))
}

/// `optimize`: the optimal input states for one parameter point.
pub fn optimize(n: u32, a: f64, q: f64, format: Format) -> Result<String, CliError> {
    validate_amp(a)?;
    validate_prior(q)?;
    let p = params(n, a, q)?;
    let tc = transfer::coeffs(&p)?;
    let min_opt = optimal::min_ploss(&p)?;
    let pair = optimal::zero_error_states(&p)?;

    match format {
        Format::Csv => {
            let mut table = Table::new(vec![
                "n",
                "a",
                "q",
                "k1",
                "regime",
                "ploss_min",
                "theta1",
                "ploss_plus",
                "theta2",
            ]);
            let (plus_cell, theta2_cell) = match &pair {
                Some((plus, _)) => (Cell::Float(plus.value), Cell::Float(plus.angle)),
                None => (Cell::Missing, Cell::Missing),
            };
            table.push(vec![
                Cell::Int(n as u64),
                Cell::Float(a),
                Cell::Float(q),
                Cell::Float(tc.k1),
                Cell::Text(tc.regime.label().to_string()),
                Cell::Float(min_opt.value),
                Cell::Float(min_opt.angle),
                plus_cell,
                theta2_cell,
            ]);
            Ok(table.to_csv())
        }
        Format::Json => {
            let zero_error = match pair {
                Some((plus, minus)) => serde_json::json!({
                    "theta2": plus.angle,
                    "ploss_plus": plus.value,
                    "ploss_minus": minus.value,
                    "state_plus_old_basis": amplitudes_json(plus.state_old_basis.amplitudes()),
                    "state_plus_new_basis": amplitudes_json(plus.state_new_basis.amplitudes()),
                    "state_minus_old_basis": amplitudes_json(minus.state_old_basis.amplitudes()),
                    "state_minus_new_basis": amplitudes_json(minus.state_new_basis.amplitudes()),
                }),
                None => serde_json::Value::Null,
            };
            let doc = serde_json::json!({
                "n": n,
                "a": a,
                "q": q,
                "k1": tc.k1,
                "regime": tc.regime.label(),
                "ploss_min": {
                    "value": min_opt.value,
                    "theta1": min_opt.angle,
                    "degenerate": min_opt.degenerate,
                    "state_old_basis": amplitudes_json(min_opt.state_old_basis.amplitudes()),
                    "state_new_basis": amplitudes_json(min_opt.state_new_basis.amplitudes()),
                },
                "zero_error": zero_error,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("valid JSON");
            s.push('\n');
            Ok(s)
        }
    }
}

/// `discriminate`: the full report for one input state, POVM included.
/// Returns the JSON document and whether the input needed renormalizing.
pub fn discriminate(
    n: u32,
    a: f64,
    q: f64,
    state_raw: [f64; 4],
) -> Result<(String, bool), CliError> {
    if !(0.0..=1.0).contains(&a) {
        return Err(CliError::Invalid(format!(
            "transparency amplitude must lie in [0, 1], got {a}"
        )));
    }
    validate_prior(q)?;
    let p = params(n, a, q)?;
    let amps = vec![
        Complex64::new(state_raw[0], state_raw[1]),
        Complex64::new(state_raw[2], state_raw[3]),
    ];
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(CliError::Invalid(
            "input state amplitudes are all zero".into(),
        ));
    }
    let renormalized = (norm - 1.0).abs() > 1e-6;
    let state = PureState::normalized(amps).map_err(CliError::from)?;

    let result =
        metrics::discriminate(&InputState::Single(state.clone()), &p).map_err(CliError::from)?;
    let (p0, p1) = result
        .povm
        .as_ref()
        .expect("discriminate always returns a POVM");
    let doc = serde_json::json!({
        "n": n,
        "a": a,
        "q": q,
        "input_state": amplitudes_json(state.amplitudes()),
        "renormalized": renormalized,
        "p_loss": result.p_loss,
        "p_error": result.p_error,
        "p_fail": result.p_fail,
        "inner_product": [result.inner_product.re, result.inner_product.im],
        "lambda1": result.lambda1,
        "lambda2": result.lambda2,
        "povm": { "p0": matrix_json(p0), "p1": matrix_json(p1) },
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("valid JSON");
    s.push('\n');
    Ok((s, renormalized))
}

/// Parses the `--state re,im,re,im` flag.
pub fn parse_state_flag(raw: &str) -> Result<[f64; 4], CliError> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Invalid(format!(
            "--state needs four comma-separated numbers re,im,re,im, got '{raw}'"
        )));
    }
    let mut values = [0.0f64; 4];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Invalid(format!("cannot parse '{part}' as a number")))?;
        if !slot.is_finite() {
            return Err(CliError::Invalid("state amplitudes must be finite".into()));
        }
    }
    Ok(values)
}
