//! Python bindings with a JSON-string API.
//!
//! Every function takes the same JSON documents as the command-line tool
//! (group files, bundle files, form files) as strings, and returns the
//! corresponding report as a JSON string. Input or precondition problems
//! raise `ValueError` with the same message the CLI prints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use torocoh::bundle::{invariants, normalize, BundleInvariants, Homomorphism};
use torocoh::classify::{classify as classify_core, ClassifyOptions};
use torocoh::dbar::{check_closed, solve as solve_core, witness_non_hausdorff, FourierForm};
use torocoh::diophantine::{certify as certify_core, refute as refute_core, scan as scan_core};
use torocoh::report::{cvec_json, mat_json, sigma0_json};
use torocoh::scalars::lacunary::WitnessRule;
use torocoh::scalars::render_rational;
use torocoh::spectral::{find_sigma0, k_sigma, m0, pivot, LatticeIndex, ZSet};
use torocoh::torus::{build_frame, check_irrationality, PeriodMatrix, RealCoordFrame};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_json(text: &str) -> PyResult<Value> {
    serde_json::from_str(text).map_err(err)
}

fn load_group(text: &str) -> PyResult<(PeriodMatrix, RealCoordFrame)> {
    let v = parse_json(text)?;
    let p = PeriodMatrix::from_json(&v).map_err(err)?;
    let frame = build_frame(&p).map_err(err)?;
    Ok((p, frame))
}

fn load_bundle(
    text: &str,
    frame: &RealCoordFrame,
) -> PyResult<(Homomorphism, BundleInvariants)> {
    let v = parse_json(text)?;
    let d = Homomorphism::from_json(&v, frame.n, frame.m).map_err(err)?;
    let (norm, _cert) = normalize(&d, frame).map_err(err)?;
    let inv = invariants(&norm, frame).map_err(err)?;
    Ok((norm, inv))
}

fn load_all(
    group: &str,
    bundle: &str,
) -> PyResult<(RealCoordFrame, Homomorphism, BundleInvariants, ZSet)> {
    let (_, frame) = load_group(group)?;
    let (norm, inv) = load_bundle(bundle, &frame)?;
    let z = find_sigma0(&frame, &inv).map_err(err)?;
    Ok((frame, norm, inv, z))
}

fn rule_of(name: &str) -> PyResult<WitnessRule> {
    match name {
        "factorial-pow10" => Ok(WitnessRule::FactorialPow10),
        "supergap" => Ok(WitnessRule::Supergap),
        _ => Err(err("rule must be one of: factorial-pow10, supergap")),
    }
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

fn to_value<T: serde::Serialize>(t: &T) -> PyResult<Value> {
    serde_json::to_value(t).map_err(err)
}

/// Check the period-matrix shape and the irrationality condition.
#[pyfunction]
#[pyo3(signature = (group, tau_bound = 20))]
fn validate(group: &str, tau_bound: u64) -> PyResult<String> {
    let (p, _frame) = load_group(group)?;
    let rep = check_irrationality(&p, tau_bound.max(1)).map_err(err)?;
    Ok(render(&json!({
        "n": p.n,
        "m": p.m,
        "irrationality": to_value(&rep)?,
        "frame_invertible": true,
    })))
}

/// Real coordinate frame (A, B, C) of a group.
#[pyfunction]
#[pyo3(signature = (group, precision = 30))]
fn frame(group: &str, precision: u32) -> PyResult<String> {
    let (p, frame) = load_group(group)?;
    Ok(render(&json!({
        "n": p.n,
        "m": p.m,
        "A": mat_json(&frame.a, precision),
        "B": mat_json(&frame.b, precision),
        "C": mat_json(&frame.c, precision),
        "AC": mat_json(&frame.ac, precision),
    })))
}

/// Normalized bundle data and its invariants (alpha, beta, d(L)).
#[pyfunction]
#[pyo3(signature = (group, bundle, precision = 30))]
fn bundle(group: &str, bundle: &str, precision: u32) -> PyResult<String> {
    let (_, frame) = load_group(group)?;
    let (norm, inv) = load_bundle(bundle, &frame)?;
    Ok(render(&json!({
        "normalized_d_e": cvec_json(&norm.d_e, precision),
        "normalized_d_s": cvec_json(&norm.d_s, precision),
        "alpha": cvec_json(&inv.alpha, precision),
        "beta_over_pi": cvec_json(&inv.beta_over_pi, precision),
        "d_L": cvec_json(&inv.d_l, precision),
        "trivial": inv.trivial,
    })))
}

/// Locate the exceptional lattice mode, if any, with its residual and the
/// minimal distance over the purely third-block modes.
#[pyfunction]
#[pyo3(signature = (group, bundle, precision = 30))]
fn sigma0(group: &str, bundle: &str, precision: u32) -> PyResult<String> {
    let (frame, _norm, inv, z) = load_all(group, bundle)?;
    let residual = match &z.sigma0 {
        Some(idx) => {
            let sh = k_sigma(idx, &frame, &inv).map_err(err)?;
            Some(cvec_json(&sh.k_plus_dl, precision))
        }
        None => None,
    };
    let m0_val = m0(&frame, &inv, &z, precision).ok().map(|(enc, arg)| {
        json!({
            "value": enc.render(precision),
            "enclosure": [
                render_rational(&enc.lo, precision),
                render_rational(&enc.hi, precision)
            ],
            "argmin_sigma3": arg
                .iter()
                .map(|x| num::ToPrimitive::to_i64(x).unwrap_or(i64::MAX))
                .collect::<Vec<_>>(),
        })
    });
    Ok(render(&json!({
        "sigma0": sigma0_json(&z),
        "residual": residual,
        "m0": m0_val,
    })))
}

/// Spectral shift vectors at one lattice index of length n+m.
#[pyfunction]
#[pyo3(signature = (group, bundle, sigma, precision = 30))]
fn shift(group: &str, bundle: &str, sigma: Vec<i64>, precision: u32) -> PyResult<String> {
    let (frame, _norm, inv, _z) = load_all(group, bundle)?;
    if sigma.len() != frame.n + frame.m {
        return Err(err(format!(
            "sigma must have n+m = {} components",
            frame.n + frame.m
        )));
    }
    let idx = LatticeIndex::from_i64(&sigma, frame.n, frame.m).map_err(err)?;
    let sh = k_sigma(&idx, &frame, &inv).map_err(err)?;
    let piv = pivot(&sh).ok();
    Ok(render(&json!({
        "sigma": sigma,
        "K": cvec_json(&sh.k, precision),
        "Ktilde_over_pi": cvec_json(&sh.ktilde_over_pi, precision),
        "shifted_over_pi": cvec_json(&sh.shifted_over_pi, precision),
        "K_plus_dL": cvec_json(&sh.k_plus_dl, precision),
        "pivot": piv,
        "note": "Ktilde and the shifted vector carry an implicit factor pi",
    })))
}

/// Shell scan of the minimal shifted norms up to the given radius.
#[pyfunction]
#[pyo3(signature = (group, bundle, radius = 12))]
fn scan(group: &str, bundle: &str, radius: i64) -> PyResult<String> {
    if radius < 1 {
        return Err(err("radius must be >= 1"));
    }
    let (frame, _norm, inv, z) = load_all(group, bundle)?;
    let sc = scan_core(&frame, &inv, &z, radius).map_err(err)?;
    Ok(render(&to_value(&sc)?))
}

/// Certified lower-bound proof attempt for the small-denominators condition.
#[pyfunction]
fn certify(group: &str, bundle: &str) -> PyResult<String> {
    let (frame, _norm, inv, z) = load_all(group, bundle)?;
    let rep = certify_core(&frame, &inv, &z).map_err(err)?;
    Ok(render(&to_value(&rep)?))
}

/// Certified refutation attempt via a lacunary witness family.
#[pyfunction]
#[pyo3(signature = (group, bundle, rule, nu_max = 3))]
fn refute(group: &str, bundle: &str, rule: &str, nu_max: u32) -> PyResult<String> {
    let (frame, _norm, inv, z) = load_all(group, bundle)?;
    let rep = refute_core(&frame, &inv, &z, rule_of(rule)?, nu_max).map_err(err)?;
    Ok(render(&to_value(&rep)?))
}

/// Solve the degree-raising equation per mode on a truncated closed form.
#[pyfunction]
#[pyo3(signature = (group, bundle, form, mode = "exact"))]
fn solve(group: &str, bundle: &str, form: &str, mode: &str) -> PyResult<String> {
    let (frame, _norm, inv, z) = load_all(group, bundle)?;
    let phi = FourierForm::from_json(&parse_json(form)?).map_err(err)?;
    let rel_tol = match mode {
        "exact" => 0.0,
        "numeric" => 1e-12,
        _ => return Err(err("mode must be one of: exact, numeric")),
    };
    let violations = check_closed(&phi, &frame, &inv, rel_tol).map_err(err)?;
    if !violations.is_empty() {
        return Err(err(format!(
            "input form is not closed: {} violation(s), first {:?}",
            violations.len(),
            violations[0]
        )));
    }
    let res = solve_core(&phi, &frame, &inv, &z).map_err(err)?;
    let harmonic = res.harmonic.as_ref().map(|(sigma, coeffs)| {
        let cmap: serde_json::Map<String, Value> = coeffs
            .iter()
            .map(|(idx, v)| {
                let key: String = idx.iter().map(|i| i.to_string()).collect();
                let (re, im) = v.to_f64();
                (key, json!({ "re": re, "im": im }))
            })
            .collect();
        json!({ "sigma": sigma, "coeffs": cmap })
    });
    Ok(render(&json!({
        "psi": res.psi.to_json().map_err(err)?,
        "harmonic": harmonic,
        "residual_sup": res.residual_sup,
    })))
}

/// Certify the divergent-preimage/convergent-image witness family.
#[pyfunction]
#[pyo3(signature = (group, bundle, rule, nu_max = 3))]
fn witness(group: &str, bundle: &str, rule: &str, nu_max: u32) -> PyResult<String> {
    let (frame, _norm, inv, _z) = load_all(group, bundle)?;
    let res = witness_non_hausdorff(&frame, &inv, rule_of(rule)?, nu_max).map_err(err)?;
    Ok(render(&to_value(&res)?))
}

/// Full three-way classification.
#[pyfunction]
#[pyo3(signature = (
    group,
    bundle,
    accept_evidence = false,
    allow_trivial = false,
    external_facts = false,
    radius = 12,
    witness_rule = None,
    nu_max = 3,
))]
#[allow(clippy::too_many_arguments)]
fn classify(
    group: &str,
    bundle: &str,
    accept_evidence: bool,
    allow_trivial: bool,
    external_facts: bool,
    radius: i64,
    witness_rule: Option<&str>,
    nu_max: u32,
) -> PyResult<String> {
    if radius < 1 {
        return Err(err("radius must be >= 1"));
    }
    let (frame, norm, inv, _z) = load_all(group, bundle)?;
    if inv.trivial && !allow_trivial {
        return Err(err(
            "the bundle is analytically trivial; pass allow_trivial=True for the citation stub",
        ));
    }
    let opts = ClassifyOptions {
        scan_radius: radius,
        witness_rule: witness_rule.map(rule_of).transpose()?,
        nu_max,
        accept_evidence,
        external_facts,
    };
    let res = classify_core(&frame, &norm, &opts).map_err(err)?;
    Ok(render(&to_value(&res)?))
}

#[pymodule]
fn torocoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(frame, m)?)?;
    m.add_function(wrap_pyfunction!(bundle, m)?)?;
    m.add_function(wrap_pyfunction!(sigma0, m)?)?;
    m.add_function(wrap_pyfunction!(shift, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(refute, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    Ok(())
}
