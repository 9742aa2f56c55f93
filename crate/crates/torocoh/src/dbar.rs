//! Truncated Fourier-coefficient model of the twisted dbar complex: finitely
//! supported (0,p)-forms with constant per-mode tensors, the degree-raising
//! operator (wedging with the invariant (0,1)-form plus the reduced dbar),
//! closedness checks, the per-mode division solving the equation, decay
//! reports, and the non-Hausdorff witness computation.
//!
//! A global power of pi is tracked separately on each form (`pi_pow`) so the
//! per-mode multiplier (Ktilde_j + beta_j) = pi * w_j can act exactly: the
//! operator multiplies coefficients by w_j and increments `pi_pow`.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::BundleInvariants;
use crate::scalars::lacunary::{lacunary_gap, log10_exp_neg, ExpVal, LogValue, WitnessRule};
use crate::scalars::transcend::{log10_enclosure, pi_enclosure};
use crate::scalars::{CScalar, Scalar, ScalarError, Sign};
use crate::spectral::{k_sigma, pivot, LatticeIndex, SpectralError, ZSet};
use crate::torus::RealCoordFrame;

#[derive(Debug, Error)]
pub enum DbarError {
    #[error("form: {0}")]
    Invalid(String),
    #[error("division undecided: pivot denominator at sigma {0:?} cannot be certified nonzero")]
    DivisionUndecided(Vec<i64>),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Multi-index 1..m, strictly increasing in canonical storage.
pub type MultiIndex = Vec<usize>;

/// Coefficients of one Fourier mode: canonical multi-index -> complex value.
pub type ModeCoeffs = BTreeMap<MultiIndex, CScalar>;

/// A finitely supported degree-p form with constant per-mode tensors. All
/// coefficients carry an implicit common factor pi^pi_pow.
#[derive(Debug, Clone)]
pub struct FourierForm {
    pub p: usize,
    pub m: usize,
    pub pi_pow: i32,
    pub modes: BTreeMap<Vec<i64>, ModeCoeffs>,
}

impl FourierForm {
    pub fn zero(p: usize, m: usize) -> Self {
        FourierForm { p, m, pi_pow: 0, modes: BTreeMap::new() }
    }

    pub fn validate(&self) -> Result<(), DbarError> {
        if self.p > self.m {
            return Err(DbarError::Invalid(format!(
                "degree {} exceeds the torus dimension {}",
                self.p, self.m
            )));
        }
        for coeffs in self.modes.values() {
            for idx in coeffs.keys() {
                if idx.len() != self.p {
                    return Err(DbarError::Invalid(format!(
                        "multi-index {idx:?} has wrong length for degree {}",
                        self.p
                    )));
                }
                if idx.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(DbarError::Invalid(format!(
                        "multi-index {idx:?} is not strictly increasing"
                    )));
                }
                if idx.iter().any(|i| *i < 1 || *i > self.m) {
                    return Err(DbarError::Invalid(format!(
                        "multi-index {idx:?} out of range 1..{}",
                        self.m
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical access with permutation-sign resolution; repeated indices
    /// read as zero.
    pub fn get(&self, sigma: &[i64], indices: &[usize]) -> CScalar {
        let (sign, canon) = match canonicalize(indices) {
            Some(sc) => sc,
            None => return CScalar::zero(),
        };
        let v = self
            .modes
            .get(sigma)
            .and_then(|c| c.get(&canon))
            .cloned()
            .unwrap_or_else(CScalar::zero);
        if sign < 0 {
            v.neg()
        } else {
            v
        }
    }

    fn add_at(&mut self, sigma: Vec<i64>, indices: &[usize], v: &CScalar) -> Result<(), ScalarError> {
        let (sign, canon) = match canonicalize(indices) {
            Some(sc) => sc,
            None => return Ok(()),
        };
        let v = if sign < 0 { v.neg() } else { v.clone() };
        let entry = self
            .modes
            .entry(sigma)
            .or_default()
            .entry(canon)
            .or_insert_with(CScalar::zero);
        *entry = entry.add(&v)?;
        Ok(())
    }

    /// Drop certified-zero coefficients and empty modes.
    pub fn prune(&mut self) {
        for coeffs in self.modes.values_mut() {
            coeffs.retain(|_, v| v.cert_zero() != Sign::Zero);
        }
        self.modes.retain(|_, c| !c.is_empty());
    }

    pub fn is_zero(&self) -> bool {
        self.modes
            .values()
            .all(|c| c.values().all(|v| v.cert_zero() == Sign::Zero))
    }

    pub fn scale(&self, c: &CScalar) -> Result<Self, ScalarError> {
        let mut out = self.clone();
        for coeffs in out.modes.values_mut() {
            for v in coeffs.values_mut() {
                *v = v.mul(c)?;
            }
        }
        Ok(out)
    }

    /// Sup of |coefficient| midpoints, for relative tolerances in reports.
    pub fn sup_norm_f64(&self) -> Result<f64, ScalarError> {
        let mut sup: f64 = 0.0;
        for coeffs in self.modes.values() {
            for v in coeffs.values() {
                let (re, im) = v.to_f64();
                sup = sup.max((re * re + im * im).sqrt());
            }
        }
        Ok(sup)
    }
}

/// Sort indices, return (permutation sign, sorted); None when repeated.
pub fn canonicalize(indices: &[usize]) -> Option<(i8, MultiIndex)> {
    let mut v: Vec<usize> = indices.to_vec();
    let mut sign = 1i8;
    // insertion sort counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// The per-mode multiplier vector w with Ktilde_j + beta_j = pi * w_j.
fn shift_vector(
    sigma: &[i64],
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
) -> Result<Vec<CScalar>, DbarError> {
    let idx = LatticeIndex::from_i64(sigma, frame.n, frame.m)?;
    Ok(k_sigma(&idx, frame, inv)?.shifted_over_pi)
}

/// Degree-raising operator: (wedge with the invariant (0,1)-form + reduced
/// dbar) acts per mode as phi_{j,I} = (Ktilde_j + beta_j) psi_I for every
/// j not in I, assembled with wedge signs. The pi factor goes to `pi_pow`.
pub fn forward(
    psi: &FourierForm,
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
) -> Result<FourierForm, DbarError> {
    psi.validate()?;
    if psi.p + 1 > psi.m {
        return Err(DbarError::Invalid("forward would exceed top degree".into()));
    }
    let mut out = FourierForm::zero(psi.p + 1, psi.m);
    out.pi_pow = psi.pi_pow + 1;
    for (sigma, coeffs) in &psi.modes {
        let w = shift_vector(sigma, frame, inv)?;
        for (idx, b) in coeffs {
            for j in 1..=psi.m {
                if idx.contains(&j) {
                    continue;
                }
                let val = b.mul(&w[j - 1])?;
                let mut full = vec![j];
                full.extend_from_slice(idx);
                out.add_at(sigma.clone(), &full, &val)?;
            }
        }
    }
    out.prune();
    Ok(out)
}

/// A closedness violation at one mode.
#[derive(Debug, Clone, Serialize)]
pub struct ClosednessViolation {
    pub sigma: Vec<i64>,
    pub relation: String,
    pub indices: Vec<usize>,
}

/// Verify the per-mode closedness relations: for every index set J of size
/// p+1, the alternating sum over a ∈ J of w_a · phi_{J \ a} vanishes, where
/// w is the per-mode shift vector (this is the coefficient of the raised
/// form on J). Exact coefficients are checked by certified zero tests;
/// float-tainted data against the relative tolerance.
pub fn check_closed(
    phi: &FourierForm,
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    rel_tol: f64,
) -> Result<Vec<ClosednessViolation>, DbarError> {
    phi.validate()?;
    if phi.p == 0 {
        return Err(DbarError::Invalid("closedness needs degree >= 1".into()));
    }
    let mut violations = vec![];
    let sup = phi.sup_norm_f64()?;
    let tol = rel_tol * sup.max(1e-300);
    for sigma in phi.modes.keys() {
        let w = shift_vector(sigma, frame, inv)?;
        for j_set in increasing_subsets(phi.m, phi.p + 1) {
            let mut sum = CScalar::zero();
            for (pos, a) in j_set.iter().enumerate() {
                let rest: MultiIndex =
                    j_set.iter().filter(|b| *b != a).cloned().collect();
                let term = phi.get(sigma, &rest).mul(&w[a - 1])?;
                sum = if pos % 2 == 0 { sum.add(&term)? } else { sum.sub(&term)? };
            }
            if !approx_zero(&sum, tol)? {
                violations.push(ClosednessViolation {
                    sigma: sigma.clone(),
                    relation: "wedge closedness".into(),
                    indices: j_set.clone(),
                });
            }
        }
    }
    Ok(violations)
}

fn approx_zero(v: &CScalar, tol: f64) -> Result<bool, DbarError> {
    match v.cert_zero() {
        Sign::Zero => Ok(true),
        Sign::Undecided => {
            let (re, im) = v.to_f64();
            Ok((re * re + im * im).sqrt() <= tol)
        }
        _ => Ok(false),
    }
}

fn increasing_subsets(m: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, m: usize, k: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(1, m, k, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub psi: FourierForm,
    /// The surviving mode when the exceptional index lies in the support.
    pub harmonic: Option<(Vec<i64>, ModeCoeffs)>,
    /// Per-mode residual sup (midpoint magnitudes) of
    /// forward(psi) + harmonic - phi.
    pub residual_sup: f64,
}

/// Per-mode division by the pivot denominator: psi_I = phi_{j(sigma),I} /
/// (Ktilde_{j(sigma)} + beta_{j(sigma)}) for sigma in Z; the excluded
/// exceptional mode is returned as the harmonic part.
pub fn solve(
    phi: &FourierForm,
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    z: &ZSet,
) -> Result<SolveResult, DbarError> {
    phi.validate()?;
    if phi.p == 0 {
        return Err(DbarError::Invalid("solve needs degree >= 1".into()));
    }
    let mut psi = FourierForm::zero(phi.p - 1, phi.m);
    psi.pi_pow = phi.pi_pow - 1;
    let mut harmonic: Option<(Vec<i64>, ModeCoeffs)> = None;
    for (sigma, coeffs) in &phi.modes {
        let idx = LatticeIndex::from_i64(sigma, frame.n, frame.m)?;
        if !z.contains(&idx) {
            harmonic = Some((sigma.clone(), coeffs.clone()));
            continue;
        }
        let sh = k_sigma(&idx, frame, inv)?;
        let jp = pivot(&sh).map_err(|_| DbarError::DivisionUndecided(sigma.clone()))?;
        let wj = &sh.shifted_over_pi[jp - 1];
        match wj.cert_zero() {
            Sign::Zero => {
                // all components vanish but the mode is in Z: only possible
                // with a zero coefficient tensor; nonzero means non-closable
                if coeffs.values().any(|v| v.cert_zero() != Sign::Zero) {
                    return Err(DbarError::Invalid(format!(
                        "mode {sigma:?} has zero shift but nonzero coefficients"
                    )));
                }
                continue;
            }
            Sign::Undecided => return Err(DbarError::DivisionUndecided(sigma.clone())),
            _ => {}
        }
        for i_set in increasing_subsets(phi.m, phi.p - 1) {
            let mut jpi = vec![jp];
            jpi.extend_from_slice(&i_set);
            let num = phi.get(sigma, &jpi);
            if num.cert_zero() == Sign::Zero {
                continue;
            }
            let val = num.div(wj)?;
            psi.add_at(sigma.clone(), &i_set, &val)?;
        }
    }
    psi.prune();
    // residual: forward(psi) + harmonic vs phi
    let fwd = forward(&psi, frame, inv)?;
    let mut residual_sup: f64 = 0.0;
    let mut sigmas: std::collections::BTreeSet<Vec<i64>> = phi.modes.keys().cloned().collect();
    sigmas.extend(fwd.modes.keys().cloned());
    for sigma in &sigmas {
        if let Some((hs, _)) = &harmonic {
            if hs == sigma {
                // the harmonic mode is carried over verbatim; residual zero
                continue;
            }
        }
        for idx in increasing_subsets(phi.m, phi.p) {
            let d = fwd.get(sigma, &idx).sub(&phi.get(sigma, &idx))?;
            if d.cert_zero() == Sign::Zero {
                continue;
            }
            let (re, im) = d.to_f64();
            residual_sup = residual_sup.max((re * re + im * im).sqrt());
        }
    }
    Ok(SolveResult { psi, harmonic, residual_sup })
}

// ---------------------------------------------------------------------------
// decay report

#[derive(Debug, Clone, Serialize)]
pub struct DecayEntry {
    pub r: f64,
    pub k: u32,
    pub sup: f64,
    pub argmax_sigma: Vec<i64>,
    /// sups over nested truncations (growing radii); a strictly increasing
    /// tail flags a divergence trend
    pub truncation_sups: Vec<f64>,
    pub trend: String,
}

/// Exact-support sup of |a^sigma| * R^{|sigma''|} * |sigma|^k per requested
/// (R, k), with |sigma|^k := 1 at sigma = 0. A truncation-level surrogate for
/// the convergence criterion: trends, never verdicts.
pub fn decay_report(
    form: &FourierForm,
    frame: &RealCoordFrame,
    r_list: &[f64],
    k_list: &[u32],
) -> Result<Vec<DecayEntry>, DbarError> {
    form.validate()?;
    let (n, m) = (frame.n, frame.m);
    // collect (|sigma|_1, |sigma''|_1, max coeff magnitude, sigma)
    let mut rows: Vec<(i64, i64, f64, Vec<i64>)> = vec![];
    for (sigma, coeffs) in &form.modes {
        if sigma.len() != n + m {
            return Err(DbarError::Invalid("mode index has wrong dimension".into()));
        }
        let l1: i64 = sigma.iter().map(|x| x.abs()).sum();
        let l1_second: i64 = sigma[m..n].iter().map(|x| x.abs()).sum();
        let mut mag: f64 = 0.0;
        for v in coeffs.values() {
            let (re, im) = v.to_f64();
            mag = mag.max((re * re + im * im).sqrt());
        }
        rows.push((l1, l1_second, mag, sigma.clone()));
    }
    let max_l1 = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let mut out = vec![];
    for r in r_list {
        for k in k_list {
            let weight = |row: &(i64, i64, f64, Vec<i64>)| -> f64 {
                let poly = if row.0 == 0 { 1.0 } else { (row.0 as f64).powi(*k as i32) };
                row.2 * r.powi(row.1 as i32) * poly
            };
            let mut sup = 0.0;
            let mut argmax = vec![0i64; n + m];
            for row in &rows {
                let w = weight(row);
                if w > sup {
                    sup = w;
                    argmax = row.3.clone();
                }
            }
            // nested truncations at quarters of the support radius
            let mut truncs = vec![];
            for q in 1..=4 {
                let cut = (max_l1 * q) / 4;
                let s = rows
                    .iter()
                    .filter(|row| row.0 <= cut)
                    .map(weight)
                    .fold(0.0f64, f64::max);
                truncs.push(s);
            }
            let trend = if truncs.len() >= 2 && truncs[3] > truncs[1] * 1.5 + 1e-300 {
                "growing"
            } else {
                "stable"
            };
            out.push(DecayEntry {
                r: *r,
                k: *k,
                sup,
                argmax_sigma: argmax,
                truncation_sups: truncs,
                trend: trend.into(),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// non-Hausdorff witness

#[derive(Debug, Clone, Serialize)]
pub struct WitnessNuRecord {
    pub nu: u32,
    /// log10 enclosure of the preimage coefficient magnitude |delta|
    pub delta_log10: [String; 2],
    /// certificate |delta| > nu (divergence of the preimages)
    pub diverges: bool,
    /// log10 enclosure of the image coefficient magnitude (pivot component)
    pub image_log10: [String; 2],
    /// the pivot-component image equals exp(-nu |sigma''|) exactly
    pub pivot_equality: bool,
    /// certificate image <= exp(-nu |sigma''|)
    pub image_converges: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessResult {
    pub records: Vec<WitnessNuRecord>,
    pub all_pass: bool,
}

/// Case-II witness: for each nu, the preimage coefficient
/// delta = exp(-nu |sigma''|)/(Ktilde_pivot + beta_pivot) grows beyond nu
/// while its image under the degree-raising operator stays below
/// exp(-nu |sigma''|). Requires the two-variable lacunary geometry used by
/// the certified refutation (there |Ktilde + beta| = pi |q alpha - p|).
pub fn witness_non_hausdorff(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    rule: WitnessRule,
    nu_max: u32,
) -> Result<WitnessResult, DbarError> {
    if frame.n != 2 || frame.m != 1 {
        return Err(DbarError::Invalid(
            "witness requires the two-variable lacunary geometry".into(),
        ));
    }
    // |c_11| must be 1 so that |Ktilde + beta| = pi * gap exactly
    let c11 = &frame.c1()[0][0];
    if c11.sub(&Scalar::one())?.cert_sign() != Sign::Zero {
        return Err(DbarError::Invalid(
            "witness geometry needs unit leading imaginary block".into(),
        ));
    }
    // d(L) = -alpha so that K_{sigma(nu)} + d(L) = q_nu alpha - p_nu
    if inv.d_l[0].im.cert_sign() != Sign::Zero
        || inv.d_l[0].re.add(&frame.a[1][0])?.cert_sign() != Sign::Zero
    {
        return Err(DbarError::Invalid(
            "witness geometry needs d(L) = -alpha".into(),
        ));
    }
    let series = rule.series_rule();
    let (pi_lo, pi_hi) = pi_enclosure(20);
    let (lpi_lo, _) = log10_enclosure(&pi_lo, 12);
    let (_, lpi_hi) = log10_enclosure(&pi_hi, 12);
    let mut records = vec![];
    let mut all_pass = true;
    for nu in 1..=nu_max {
        let e = rule.q_exponent(nu).map_err(DbarError::Scalar)?;
        let gap = lacunary_gap(&series, &e, nu).map_err(DbarError::Scalar)?;
        // |sigma''| = q_nu + 1 bracketed as in the refutation
        let (s_lo, s_hi) = sigma_second_bounds(&e)?;
        let exp_term_lo = log10_exp_neg(nu, &s_hi)?;
        let exp_term_hi = log10_exp_neg(nu, &s_lo)?;
        // log10 |delta| = log10 exp(-nu|sigma''|) - log10 pi - log10 gap
        let delta_lo = sub_log(&exp_term_lo.add_rat(&-&lpi_hi), &gap.hi);
        let delta_hi = sub_log(&exp_term_hi.add_rat(&-&lpi_lo), &gap.lo);
        // divergence: delta_lo > log10 nu
        let nu_rat = BigRational::from(BigInt::from(nu));
        let lnu_hi = if nu == 1 {
            BigRational::zero()
        } else {
            log10_enclosure(&nu_rat, 12).1
        };
        let diverges = LogValue::Rat(lnu_hi).lt_total(&delta_lo).unwrap_or(false);
        // pivot image = (Ktilde + beta) * delta = exp(-nu|sigma''|) exactly
        let image_lo = exp_term_lo.clone();
        let image_hi = exp_term_hi.clone();
        // image <= exp(-nu|sigma''|): equality at the pivot, so the
        // certificate is the consistency of the brackets
        let image_converges = !image_hi
            .lt_total(&exp_term_lo)
            .unwrap_or(false);
        if !(diverges && image_converges) {
            all_pass = false;
        }
        records.push(WitnessNuRecord {
            nu,
            delta_log10: [delta_lo.render(), delta_hi.render()],
            diverges,
            image_log10: [image_lo.render(), image_hi.render()],
            pivot_equality: true,
            image_converges,
        });
    }
    Ok(WitnessResult { records, all_pass })
}

/// a - b on the log10 scale where b may be huge; widening via negation.
fn sub_log(a: &LogValue, b: &LogValue) -> LogValue {
    match (a, b) {
        (LogValue::Rat(x), LogValue::Rat(y)) => LogValue::Rat(x - y),
        _ => {
            // general case: add the negation; both operands in our uses are
            // Huge with matching scales or rational offsets
            match (a, b.neg()) {
                (LogValue::Rat(x), nb) => nb.add_rat(x),
                (LogValue::Huge { .. }, LogValue::Rat(y)) => a.add_rat(&y),
                (LogValue::Huge { lo, hi, exp }, LogValue::Huge { lo: bl, hi: bh, exp: be }) => {
                    // align exponents conservatively: fold the smaller scale
                    // into the larger coefficient interval
                    if exp == &be {
                        LogValue::Huge {
                            lo: lo + &bl,
                            hi: hi + &bh,
                            exp: exp.clone(),
                        }
                        .normalize_pub()
                    } else {
                        // the larger scale dominates: widen its coefficient
                        // interval by a bound on the other term's contribution
                        let (dlo, dhi, dexp, slo, shi, sexp) = if exp > &be {
                            (lo.clone(), hi.clone(), exp.clone(), bl, bh, be)
                        } else {
                            (bl.clone(), bh.clone(), be.clone(), lo.clone(), hi.clone(), exp.clone())
                        };
                        let m = slo.abs().max(shi.abs());
                        let w = coef_contribution(&m, &(&dexp - &sexp));
                        LogValue::Huge { lo: dlo - &w, hi: dhi + &w, exp: dexp }
                            .normalize_pub()
                    }
                }
            }
        }
    }
}

/// Upper bound on m / 10^diff for diff >= 1, kept representable: exact when
/// diff is materializable, a safe small constant when the scale difference
/// dwarfs m, and m itself otherwise (sound since diff >= 0).
fn coef_contribution(m: &BigRational, diff: &BigInt) -> BigRational {
    if m.is_zero() {
        return BigRational::zero();
    }
    let digits = m.numer().magnitude().to_str_radix(10).len() as i64;
    if diff - BigInt::from(digits) >= BigInt::from(30) {
        return BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30));
    }
    match diff.to_u32() {
        Some(d) if d <= 4_000 => m.abs() / BigRational::from(BigInt::from(10u32).pow(d)),
        _ => m.abs(),
    }
}

/// Bracket |sigma''| = 10^E + 1: exact when materializable, else
/// [10^E, 2*10^E].
pub(crate) fn sigma_second_bounds(e: &ExpVal) -> Result<(ExpVal, ExpVal), DbarError> {
    match e.as_int() {
        Ok(ei) if ei.to_u32().map(|v| v < 90_000).unwrap_or(false) => {
            let q1 = BigInt::from(10u32).pow(ei.to_u32().unwrap()) + BigInt::one();
            Ok((ExpVal::Int(q1.clone()), ExpVal::Int(q1)))
        }
        _ => {
            let ei = e.as_int().map_err(DbarError::Scalar)?;
            Ok((
                ExpVal::Pow { coef: BigInt::one(), exp: ei.clone() },
                ExpVal::Pow { coef: BigInt::from(2), exp: ei },
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// JSON form files

#[derive(Debug, Serialize, Deserialize)]
pub struct FormFile {
    pub p: usize,
    pub m: usize,
    #[serde(default)]
    pub pi_pow: i32,
    pub modes: Vec<FormMode>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FormMode {
    pub sigma: Vec<i64>,
    pub coeffs: BTreeMap<String, serde_json::Value>,
}

impl FourierForm {
    pub fn from_json(v: &serde_json::Value) -> Result<Self, DbarError> {
        let file: FormFile = serde_json::from_value(v.clone())
            .map_err(|e| DbarError::Invalid(format!("form file: {e}")))?;
        let mut form = FourierForm::zero(file.p, file.m);
        form.pi_pow = file.pi_pow;
        for mode in &file.modes {
            let mut coeffs = ModeCoeffs::new();
            for (key, val) in &mode.coeffs {
                let idx: MultiIndex = if key.is_empty() {
                    vec![]
                } else {
                    key.chars()
                        .map(|c| {
                            c.to_digit(10)
                                .map(|d| d as usize)
                                .ok_or_else(|| DbarError::Invalid(format!("bad index key {key}")))
                        })
                        .collect::<Result<_, _>>()?
                };
                let c = CScalar::from_json(val).map_err(DbarError::Scalar)?;
                coeffs.insert(idx, c);
            }
            form.modes.insert(mode.sigma.clone(), coeffs);
        }
        form.validate()?;
        Ok(form)
    }

    pub fn to_json(&self) -> Result<serde_json::Value, DbarError> {
        let mut modes = vec![];
        for (sigma, coeffs) in &self.modes {
            let mut cmap: BTreeMap<String, serde_json::Value> = BTreeMap::new();
            for (idx, v) in coeffs {
                let key: String = idx.iter().map(|i| i.to_string()).collect();
                let (re, im) = v.to_f64();
                cmap.insert(
                    key,
                    serde_json::json!({ "re": re, "im": im }),
                );
            }
            modes.push(serde_json::json!({ "sigma": sigma, "coeffs": cmap }));
        }
        Ok(serde_json::json!({
            "p": self.p,
            "m": self.m,
            "pi_pow": self.pi_pow,
            "modes": modes,
        }))
    }
}
