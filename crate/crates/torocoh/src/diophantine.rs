//! Decision machinery for the small-denominator condition on the shifted
//! spectral gaps ||K_sigma + d(L)||: certified exponential lower bounds via
//! effective Liouville estimates (HS' constants (C, a)), certified
//! refutations via lacunary witness families compared in exponent
//! arithmetic, empirical shell scans, and the conversions between the three
//! equivalent constant formats HS (radius r), HS' (C, a over |(s',s'')|)
//! and HS'' (C, a over |s''| only).

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bundle::BundleInvariants;
use crate::linalg::l1_shell;
use crate::scalars::lacunary::{lacunary_gap, log10_exp_neg, ExpVal, WitnessRule};
use crate::scalars::transcend::{exp_enclosure, ln_enclosure, log10_enclosure};
use crate::scalars::{
    liouville_lower_bound, BasisKey, LinearBasis, Scalar, ScalarError, Sign,
};
use crate::spectral::{k_sigma, sqrt_interval, LatticeIndex, SpectralError, ZSet};
use crate::torus::RealCoordFrame;

#[derive(Debug, Error)]
pub enum DioError {
    #[error("diophantine: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    #[serde(rename = "HS")]
    Hs,
    #[serde(rename = "HS'")]
    HsPrime,
    #[serde(rename = "HS''")]
    HsSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CondStatus {
    CertifiedHolds,
    CertifiedFails,
    EvidenceHolds,
    EvidenceFails,
    Unknown,
}

fn ser_rat_opt<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&format!("{r}")),
        None => s.serialize_none(),
    }
}

/// Lower-bound constants in whichever formats have been established:
/// gap >= r^{-|(s',s'')|}, or >= c*exp(-a|(s',s'')|) (HS'), or
/// >= c*exp(-a|s''|) (HS'').
#[derive(Debug, Clone, Default, Serialize)]
pub struct Constants {
    #[serde(serialize_with = "ser_rat_opt", skip_serializing_if = "Option::is_none")]
    pub r: Option<BigRational>,
    #[serde(serialize_with = "ser_rat_opt", skip_serializing_if = "Option::is_none")]
    pub c: Option<BigRational>,
    #[serde(serialize_with = "ser_rat_opt", skip_serializing_if = "Option::is_none")]
    pub a: Option<BigRational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapRecord {
    pub shell: i64,
    pub sigma: Vec<i64>,
    #[serde(serialize_with = "ser_rat")]
    pub gap_lo: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub gap_hi: BigRational,
    pub min_gap_log10_lo: f64,
    pub min_gap_log10_hi: f64,
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v}"))
}

/// One checked witness index sigma(nu) with both sides of the refutation
/// inequality ||K_sigma + d(L)|| < (1/nu) exp(-nu |sigma''|) as log10
/// enclosures, plus the probe of the textbook inequality
/// |q alpha - p| <= exp(-q^2).
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub nu: u32,
    pub sigma: String,
    pub gap_log10: [String; 2],
    pub threshold_log10: [String; 2],
    pub refutation_holds: bool,
    pub probe_log10: [String; 2],
    pub probe_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub status: CondStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_radius: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_slope: Option<f64>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(condition: Condition, status: CondStatus) -> Self {
        ConditionReport {
            condition,
            status,
            constants: None,
            witnesses: vec![],
            scan_radius: None,
            decay_slope: None,
            notes: vec![],
        }
    }
}

// ---------------------------------------------------------------------------
// scan

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub records: Vec<GapRecord>,
    pub slope: Option<f64>,
    pub super_exponential_slope: Option<f64>,
    pub status: CondStatus,
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a crude digit count for out-of-range magnitudes
        let num_digits = r.numer().to_string().len() as i32;
        let den_digits = r.denom().to_string().len() as i32;
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * 10f64.powi(num_digits - den_digits)
    })
}

/// Per-shell minima of ||K_sigma + d(L)|| over sigma in Z with
/// |(sigma', sigma'')|_1 = rho, sigma''' chosen per coordinate by
/// nearest-integer rounding of the real part with +-1 guards.
pub fn scan(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    z: &ZSet,
    radius: i64,
) -> Result<ScanResult, DioError> {
    let (n, m) = (frame.n, frame.m);
    if radius < 1 {
        return Err(DioError::Invalid("scan radius must be >= 1".into()));
    }
    let mut records = Vec::with_capacity(radius as usize);
    for rho in 1..=radius {
        let mut best: Option<(f64, Scalar, Vec<i64>)> = None;
        for head in l1_shell(n, rho) {
            // nearest-integer sigma''' per coordinate with +-1 guards
            let mut base_sigma: Vec<BigInt> = head.iter().map(|x| BigInt::from(*x)).collect();
            base_sigma.extend(std::iter::repeat(BigInt::zero()).take(m));
            let idx0 = LatticeIndex::new(base_sigma, n, m)?;
            let sh0 = k_sigma(&idx0, frame, inv)?;
            let mut centers = Vec::with_capacity(m);
            for k in 0..m {
                let e = sh0.k_plus_dl[k].re.enclosure(12)?;
                let mid = (&e.lo + &e.hi) / BigRational::from(BigInt::from(2));
                centers.push(mid.round().to_integer());
            }
            let mut offsets = vec![-1i64; m];
            loop {
                let mut sigma: Vec<BigInt> = head.iter().map(|x| BigInt::from(*x)).collect();
                for (c, o) in centers.iter().zip(&offsets) {
                    sigma.push(c + BigInt::from(*o));
                }
                let idx = LatticeIndex::new(sigma, n, m)?;
                if z.contains(&idx) {
                    let mut norm_sq = Scalar::zero();
                    for k in 0..m {
                        let re = sh0.k_plus_dl[k]
                            .re
                            .sub(&Scalar::from_bigint(idx.sigma[n + k].clone()))?;
                        let im = sh0.k_plus_dl[k].im.clone();
                        norm_sq = norm_sq.add(&re.mul(&re)?)?.add(&im.mul(&im)?)?;
                    }
                    let e = norm_sq.enclosure(30)?;
                    let mid = rat_f64(&((&e.lo + &e.hi) / BigRational::from(BigInt::from(2))));
                    let better = best.as_ref().map(|(b, _, _)| mid < *b).unwrap_or(true);
                    if better {
                        let sig_i64: Vec<i64> = idx
                            .sigma
                            .iter()
                            .map(|x| x.to_i64().unwrap_or(i64::MAX))
                            .collect();
                        best = Some((mid, norm_sq, sig_i64));
                    }
                }
                let mut i = 0;
                loop {
                    if i == m {
                        break;
                    }
                    offsets[i] += 1;
                    if offsets[i] <= 1 {
                        break;
                    }
                    offsets[i] = -1;
                    i += 1;
                }
                if i == m {
                    break;
                }
            }
        }
        let (_, norm_sq, sigma) =
            best.ok_or_else(|| DioError::Invalid("empty shell".into()))?;
        let e = norm_sq.enclosure(60)?;
        let (gap_lo, gap_hi) = sqrt_interval(&e.lo, &e.hi, 30);
        let (llo, lhi) = if gap_lo.is_positive() {
            (
                rat_f64(&log10_enclosure(&gap_lo, 12).0),
                rat_f64(&log10_enclosure(&gap_hi, 12).1),
            )
        } else if gap_hi.is_positive() {
            (-999.0, rat_f64(&log10_enclosure(&gap_hi, 12).1))
        } else {
            (-999.0, -999.0)
        };
        records.push(GapRecord {
            shell: rho,
            sigma,
            gap_lo,
            gap_hi,
            min_gap_log10_lo: llo,
            min_gap_log10_hi: lhi,
        });
    }
    // least-squares slope of ln(min gap) vs shell
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            let mid = (rat_f64(&r.gap_lo) + rat_f64(&r.gap_hi)) / 2.0;
            (mid > 0.0).then(|| (r.shell as f64, mid.ln()))
        })
        .collect();
    let slope = least_squares_slope(&pts);
    // super-exponential detector: slope of ln(-ln gap) vs shell
    let pts2: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            let mid = (rat_f64(&r.gap_lo) + rat_f64(&r.gap_hi)) / 2.0;
            (mid > 0.0 && mid < 1.0).then(|| (r.shell as f64, (-mid.ln()).ln()))
        })
        .collect();
    let super_slope = if pts2.len() >= 3 { least_squares_slope(&pts2) } else { None };
    let status = match super_slope {
        Some(s) if s > 1.1 => CondStatus::EvidenceFails,
        _ => CondStatus::EvidenceHolds,
    };
    Ok(ScanResult { records, slope, super_exponential_slope: super_slope, status })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let den = n * sxx - sx * sx;
    (den.abs() > 1e-12).then(|| (n * sxy - sx * sy) / den)
}

// ---------------------------------------------------------------------------
// certify

/// Affine form in (sigma_1..sigma_{n+1}) with rational coefficients over the
/// basis {1, alpha}: value = (one part) + (alpha part) * alpha.
#[derive(Debug, Clone)]
struct AffineForm {
    one_coefs: Vec<BigRational>,
    one_const: BigRational,
    alp_coefs: Vec<BigRational>,
    alp_const: BigRational,
}

impl AffineForm {
    fn zero(vars: usize) -> Self {
        AffineForm {
            one_coefs: vec![BigRational::zero(); vars],
            one_const: BigRational::zero(),
            alp_coefs: vec![BigRational::zero(); vars],
            alp_const: BigRational::zero(),
        }
    }

    fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self
            .one_coefs
            .iter()
            .chain(self.alp_coefs.iter())
            .chain([&self.one_const, &self.alp_const])
        {
            l = l.lcm(c.denom());
        }
        l
    }

    fn alpha_part_is_zero(&self) -> bool {
        self.alp_coefs.iter().all(|c| c.is_zero()) && self.alp_const.is_zero()
    }

    /// max |alpha coefficient| + |alpha constant|, so that the alpha part is
    /// bounded by this times the shell radius for radius >= 1.
    fn alpha_growth(&self) -> BigRational {
        let mut mx = BigRational::zero();
        for c in &self.alp_coefs {
            if c.abs() > mx {
                mx = c.abs();
            }
        }
        mx + self.alp_const.abs()
    }
}

/// Pattern-based certification: for m = 1 data whose scalars live in
/// Q + Q*alpha for a single algebraic irrational alpha, every nonzero value
/// of K_sigma + d(L) is bounded below either by 1/denominator (a nonzero
/// rational) or by the effective Liouville floor of a linear form
/// q*alpha - p. Emits certified HS' constants (C, a = degree - 1) and the
/// converted HS radius; returns an unknown report when the pattern does not
/// apply.
pub fn certify(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    _z: &ZSet,
) -> Result<ConditionReport, DioError> {
    let mut rep = ConditionReport::new(Condition::HsPrime, CondStatus::Unknown);
    let (n, m) = (frame.n, frame.m);
    if m != 1 {
        rep.notes.push("pattern requires m = 1".into());
        return Ok(rep);
    }
    // decompose every relevant scalar over a joint linear basis
    let mut basis = LinearBasis::new();
    let mut entries: Vec<(usize, bool, Scalar)> = vec![]; // (var, is_im, value)
    for l in 0..n {
        entries.push((l, false, frame.a[l][0].clone()));
        entries.push((l, true, frame.b[l][0].clone()));
    }
    let mut decomps = vec![];
    for (var, is_im, s) in &entries {
        match basis.decompose(s) {
            Ok(d) => decomps.push((*var, *is_im, d)),
            Err(ScalarError::Undecided) | Err(ScalarError::IncompatibleScalars) => {
                rep.notes.push("scalars outside the certifiable pattern".into());
                return Ok(rep);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let dl_re = match basis.decompose(&inv.d_l[0].re) {
        Ok(d) => d,
        Err(_) => {
            rep.notes.push("d(L) outside the certifiable pattern".into());
            return Ok(rep);
        }
    };
    let dl_im = match basis.decompose(&inv.d_l[0].im) {
        Ok(d) => d,
        Err(_) => {
            rep.notes.push("d(L) outside the certifiable pattern".into());
            return Ok(rep);
        }
    };
    // exactly one irrational key across everything
    let mut irr_keys: std::collections::BTreeSet<BasisKey> = Default::default();
    for (_, _, d) in &decomps {
        for (k, c) in d {
            if *k != BasisKey::One && !c.is_zero() {
                irr_keys.insert(k.clone());
            }
        }
    }
    for d in [&dl_re, &dl_im] {
        for (k, c) in d {
            if *k != BasisKey::One && !c.is_zero() {
                irr_keys.insert(k.clone());
            }
        }
    }
    if irr_keys.len() > 1 {
        rep.notes.push(format!(
            "pattern requires at most one irrational direction, found {}",
            irr_keys.len()
        ));
        return Ok(rep);
    }
    if irr_keys.is_empty() {
        // all-rational data: every value on Z is a nonzero rational whose
        // denominator divides the lcm of all coefficient denominators
        let mut re = AffineForm::zero(n + 1);
        let mut im = AffineForm::zero(n + 1);
        for (var, is_im, d) in &decomps {
            let target = if *is_im { &mut im } else { &mut re };
            for (k, c) in d {
                if *k == BasisKey::One {
                    target.one_coefs[*var] = c.clone();
                }
            }
        }
        re.one_coefs[n] = -BigRational::one();
        for (k, c) in &dl_re {
            if *k == BasisKey::One {
                re.one_const = c.clone();
            }
        }
        for (k, c) in &dl_im {
            if *k == BasisKey::One {
                im.one_const = c.clone();
            }
        }
        let mden = BigRational::from(re.denominator_lcm().max(im.denominator_lcm()));
        rep.status = CondStatus::CertifiedHolds;
        rep.constants = Some(Constants {
            r: None,
            c: Some(mden.recip()),
            a: Some(BigRational::zero()),
        });
        rep.notes
            .push("certified via the fixed rational denominator floor".into());
        return Ok(rep);
    }
    let irr_key = irr_keys.into_iter().next().unwrap();
    // reconstruct alpha itself from a generator entry carrying it
    let mut alpha: Option<Scalar> = None;
    for ((_, _, d), (_, _, s)) in decomps.iter().zip(&entries) {
        let coef = d
            .iter()
            .find(|(k, _)| *k == irr_key)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero);
        if coef.is_zero() {
            continue;
        }
        let one = d
            .iter()
            .find(|(k, _)| *k == BasisKey::One)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero);
        let adj = s
            .sub(&Scalar::from_rat(one))?
            .mul(&Scalar::from_rat(coef.recip()))?;
        alpha = Some(adj);
        break;
    }
    let alpha = match alpha {
        Some(a) => a,
        None => {
            // alpha appears only in d(L); reconstruct from there
            let pick = |d: &[(BasisKey, BigRational)], s: &Scalar| -> Option<Scalar> {
                let coef = d.iter().find(|(k, _)| *k == irr_key)?.1.clone();
                if coef.is_zero() {
                    return None;
                }
                let one = d
                    .iter()
                    .find(|(k, _)| *k == BasisKey::One)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(BigRational::zero);
                s.sub(&Scalar::from_rat(one))
                    .ok()?
                    .mul(&Scalar::from_rat(coef.recip()))
                    .ok()
            };
            match pick(&dl_re, &inv.d_l[0].re).or_else(|| pick(&dl_im, &inv.d_l[0].im)) {
                Some(a) => a,
                None => {
                    rep.notes.push("could not isolate the irrational generator".into());
                    return Ok(rep);
                }
            }
        }
    };
    let degree = match &alpha {
        Scalar::Quad(_) => 2usize,
        Scalar::Alg(a) => a.gen.minpoly.len() - 1,
        _ => {
            rep.notes.push("irrational direction is not algebraic".into());
            return Ok(rep);
        }
    };
    let c_liouville = match liouville_lower_bound(&alpha, &BigInt::one()) {
        Ok(c) => c,
        Err(_) => {
            rep.notes.push("no effective Liouville floor available".into());
            return Ok(rep);
        }
    };
    // build the two real affine forms of K_sigma + d(L)
    let vars = n + 1;
    let mut re = AffineForm::zero(vars);
    let mut im = AffineForm::zero(vars);
    for (var, is_im, d) in &decomps {
        let target = if *is_im { &mut im } else { &mut re };
        for (k, c) in d {
            if *k == BasisKey::One {
                target.one_coefs[*var] = c.clone();
            } else {
                target.alp_coefs[*var] = c.clone();
            }
        }
    }
    re.one_coefs[n] = -BigRational::one(); // the sigma''' slot
    for (k, c) in &dl_re {
        if *k == BasisKey::One {
            re.one_const = c.clone();
        } else {
            re.alp_const = c.clone();
        }
    }
    for (k, c) in &dl_im {
        if *k == BasisKey::One {
            im.one_const = c.clone();
        } else {
            im.alp_const = c.clone();
        }
    }
    // constants: C = min over components of their floors, a = degree - 1
    let mut candidates: Vec<BigRational> = vec![];
    for form in [&re, &im] {
        let mden = BigRational::from(form.denominator_lcm());
        candidates.push(mden.recip());
        if !form.alpha_part_is_zero() {
            let growth = form.alpha_growth() * &mden;
            if growth.is_zero() {
                continue;
            }
            let mut g_pow = BigRational::one();
            for _ in 0..degree.saturating_sub(1) {
                g_pow *= &growth;
            }
            candidates.push(&c_liouville / (&mden * g_pow));
        }
    }
    let c = candidates.into_iter().min().unwrap();
    let a = BigRational::from(BigInt::from((degree - 1) as i64));
    rep.status = CondStatus::CertifiedHolds;
    rep.constants = Some(Constants { r: None, c: Some(c), a: Some(a) });
    rep.notes.push(format!(
        "certified via effective Liouville floor for a degree-{degree} algebraic direction"
    ));
    Ok(rep)
}

// ---------------------------------------------------------------------------
// refute

/// Certified refutation for lacunary-series data of the two-variable shape
/// (n = 2, m = 1, s_11 = i, s_21 = alpha lacunary, d(L) = -alpha): the
/// witness family sigma(nu) = (0, q_nu + 1, p_nu) makes
/// ||K_sigma + d(L)|| = |q_nu alpha - p_nu|, which is compared against
/// (1/nu) exp(-nu |sigma''|) purely in exponent arithmetic. Also probes the
/// textbook inequality |q_nu alpha - p_nu| <= exp(-q_nu^2) for each nu.
pub fn refute(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    _z: &ZSet,
    rule: WitnessRule,
    nu_max: u32,
) -> Result<ConditionReport, DioError> {
    let mut rep = ConditionReport::new(Condition::Hs, CondStatus::Unknown);
    let series = rule.series_rule();
    // structural checks for the witness geometry
    let shape_ok = frame.n == 2
        && frame.m == 1
        && frame.a[0][0].is_zero()
        && frame.b[0][0].sub(&Scalar::one())?.cert_sign() == Sign::Zero
        && frame.b[1][0].is_zero()
        && matches!(&frame.a[1][0], Scalar::Lac(l) if l.gen.rule == series
            && l.coeffs == vec![BigRational::zero(), BigRational::one()])
        && inv.d_l[0].im.cert_sign() == Sign::Zero
        && inv.d_l[0].re.add(&frame.a[1][0])?.cert_sign() == Sign::Zero;
    if !shape_ok {
        rep.notes.push(
            "witness rule requires the two-variable lacunary shape with d(L) = -alpha".into(),
        );
        return Ok(rep);
    }
    let mut all_hold = true;
    for nu in 1..=nu_max {
        let e = rule.q_exponent(nu)?;
        let gap = match lacunary_gap(&series, &e, nu) {
            Ok(g) => g,
            Err(ScalarError::NonIntegerP) => {
                rep.notes
                    .push(format!("nu = {nu}: p_nu is not an integer (NON_INTEGER_P)"));
                all_hold = false;
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        // |sigma''| = q_nu + 1 with q_nu = 10^E; bracket by [10^E+1 exact]
        // when materializable, else [10^E, 2*10^E]
        let (s_lo, s_hi) = match e.as_int() {
            Ok(ei) if ei.to_u32().map(|v| v < 90_000).unwrap_or(false) => {
                let q1 = BigInt::from(10u32).pow(ei.to_u32().unwrap()) + BigInt::one();
                (ExpVal::Int(q1.clone()), ExpVal::Int(q1))
            }
            _ => {
                let ei = e.as_int()?; // E itself is always materializable here
                (
                    ExpVal::Pow { coef: BigInt::one(), exp: ei.clone() },
                    ExpVal::Pow { coef: BigInt::from(2), exp: ei },
                )
            }
        };
        // threshold (1/nu) exp(-nu |sigma''|) in log10
        let nu_rat = BigRational::from(BigInt::from(nu));
        let (lnu_lo, lnu_hi) = log10_enclosure(&nu_rat, 12);
        let thr_lo = log10_exp_neg(nu, &s_hi)?.add_rat(&-lnu_hi);
        let thr_hi = log10_exp_neg(nu, &s_lo)?.add_rat(&-lnu_lo);
        let holds = gap.hi.lt_total(&thr_lo)?;
        // probe: |q alpha - p| <= exp(-q^2); q^2 = 10^{2E}
        let ei = e.as_int()?;
        let q_sq = ExpVal::Pow { coef: BigInt::one(), exp: BigInt::from(2) * ei };
        let probe_rhs = log10_exp_neg(1, &q_sq)?;
        let probe_holds = gap.hi.lt_total(&probe_rhs)?;
        if !holds {
            all_hold = false;
            rep.notes
                .push(format!("nu = {nu}: refutation inequality fails"));
        }
        if !probe_holds {
            rep.notes
                .push(format!("nu = {nu}: textbook gap inequality fails"));
        }
        rep.witnesses.push(WitnessRecord {
            nu,
            sigma: format!("(0, 10^{} + 1, p_{nu})", render_expval(&e)),
            gap_log10: [gap.lo.render(), gap.hi.render()],
            threshold_log10: [thr_lo.render(), thr_hi.render()],
            refutation_holds: holds,
            probe_log10: [probe_rhs.render(), probe_rhs.render()],
            probe_holds,
        });
    }
    rep.status = if all_hold && !rep.witnesses.is_empty() {
        CondStatus::CertifiedFails
    } else {
        CondStatus::Unknown
    };
    if rep.status == CondStatus::Unknown {
        rep.notes.push(
            "witness family does not certify failure; condition undecided by this rule".into(),
        );
    }
    Ok(rep)
}

fn render_expval(e: &ExpVal) -> String {
    match e {
        ExpVal::Int(n) => format!("{n}"),
        ExpVal::Pow { coef, exp } => format!("{coef}e{exp}"),
    }
}

// ---------------------------------------------------------------------------
// constant conversions

/// Convert a certified report between the three constant formats, always in
/// the sound direction (floors only get smaller, radii larger).
pub fn convert_constants(
    report: &ConditionReport,
    target: Condition,
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
) -> Result<ConditionReport, DioError> {
    if report.status != CondStatus::CertifiedHolds {
        let mut out = report.clone();
        out.notes.push("conversion requires a certified report; passed through".into());
        return Ok(out);
    }
    if report.condition == target {
        return Ok(report.clone());
    }
    let consts = report
        .constants
        .as_ref()
        .ok_or_else(|| DioError::Invalid("certified report without constants".into()))?;
    let out = match (report.condition, target) {
        (Condition::Hs, Condition::HsPrime) => {
            let r = consts
                .r
                .as_ref()
                .ok_or_else(|| DioError::Invalid("HS report without r".into()))?;
            // C = 1, a = log r (upper bound; for r <= 1 take a = 0)
            let a = if r <= &BigRational::one() {
                BigRational::zero()
            } else {
                ln_enclosure(r, 64).1
            };
            with_constants(report, Condition::HsPrime, Constants {
                r: None,
                c: Some(BigRational::one()),
                a: Some(a),
            })
        }
        (Condition::HsPrime, Condition::Hs) => {
            let (c, a) = take_ca(consts)?;
            // log r > max{a - log C, a}; exp upper bound + 1
            let ln_c_lo = ln_enclosure(c, 64).0;
            let u = (a - &ln_c_lo).max(a.clone());
            let r = exp_enclosure(&u, 40).1 + BigRational::one();
            with_constants(report, Condition::Hs, Constants { r: Some(r), c: None, a: None })
        }
        (Condition::HsPrime, Condition::HsSecond) => {
            let (c, a) = take_ca(consts)?;
            let (g1p, g2p) = gamma_primes(frame, inv)?;
            // C'' = min(1, C exp(-a g1')), a'' = a (1 + g2')
            let c2 = {
                let e = exp_enclosure(&-(a * &g1p), 40).0;
                (c * e).min(BigRational::one())
            };
            let a2 = a * (BigRational::one() + g2p);
            with_constants(report, Condition::HsSecond, Constants {
                r: None,
                c: Some(c2),
                a: Some(a2),
            })
        }
        (Condition::HsSecond, Condition::HsPrime) => {
            // inclusion: identical constants
            with_constants(report, Condition::HsPrime, consts.clone())
        }
        (Condition::Hs, Condition::HsSecond) => {
            let mid = convert_constants(report, Condition::HsPrime, frame, inv)?;
            return convert_constants(&mid, Condition::HsSecond, frame, inv);
        }
        (Condition::HsSecond, Condition::Hs) => {
            let mid = convert_constants(report, Condition::HsPrime, frame, inv)?;
            return convert_constants(&mid, Condition::Hs, frame, inv);
        }
        _ => unreachable!("same-condition handled above"),
    };
    Ok(out)
}

fn take_ca(c: &Constants) -> Result<(&BigRational, &BigRational), DioError> {
    match (&c.c, &c.a) {
        (Some(c), Some(a)) => Ok((c, a)),
        _ => Err(DioError::Invalid("report lacks (C, a) constants".into())),
    }
}

fn with_constants(src: &ConditionReport, cond: Condition, consts: Constants) -> ConditionReport {
    let mut out = src.clone();
    out.condition = cond;
    out.constants = Some(consts);
    out.notes.push("constants converted".into());
    out
}

/// gamma_1' = (1 + ||d(L)||)/gamma_2 and gamma_2' = gamma_1/gamma_2 where
/// gamma_1 = max |s_{j,l}| and gamma_2 is the certified constant with
/// max_l |sum_j sigma_j Im s_{j,l}| >= gamma_2 * sum |sigma_j|, realized as
/// the reciprocal of the entrywise l1 norm of the inverse of the leading
/// imaginary block.
fn gamma_primes(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
) -> Result<(BigRational, BigRational), DioError> {
    let (n, m) = (frame.n, frame.m);
    // gamma_1 upper bound
    let mut g1_hi = BigRational::zero();
    for l in 0..n {
        for k in 0..m {
            let sq = frame.a[l][k]
                .mul(&frame.a[l][k])?
                .add(&frame.b[l][k].mul(&frame.b[l][k])?)?;
            let e = sq.enclosure(30)?;
            let (_, hi) = sqrt_interval(&e.lo, &e.hi, 15);
            if hi > g1_hi {
                g1_hi = hi;
            }
        }
    }
    // ||d(L)|| upper bound
    let mut dl_sq = Scalar::zero();
    for k in 0..m {
        dl_sq = dl_sq.add(&inv.d_l[k].norm_sq()?)?;
    }
    let e = dl_sq.enclosure(30)?;
    let (_, dl_hi) = sqrt_interval(&e.lo, &e.hi, 15);
    // gamma_2 lower bound: 1 / upper bound of sum |C1 entries|
    let c1 = frame.c1();
    let mut sum = Scalar::zero();
    for row in c1.iter().take(m) {
        for v in row.iter().take(m) {
            let a = match v.cert_sign() {
                Sign::Negative => v.neg(),
                _ => v.clone(),
            };
            sum = sum.add(&a)?;
        }
    }
    let e = sum.enclosure(30)?;
    let g2_lo = if e.hi.is_positive() {
        e.hi.recip()
    } else {
        return Err(DioError::Invalid("degenerate imaginary block".into()));
    };
    let g1p = (BigRational::one() + dl_hi) / &g2_lo;
    let g2p = g1_hi / g2_lo;
    Ok((g1p, g2p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{invariants, Homomorphism};
    use crate::scalars::lacunary::{LacExt, LacGen};
    use crate::scalars::{parse_rational, CScalar};
    use crate::spectral::find_sigma0;
    use crate::torus::{build_frame, PeriodMatrix};
    use std::sync::Arc;

    fn setup_10_1() -> (RealCoordFrame, BundleInvariants, ZSet) {
        let s = vec![
            vec![CScalar::imaginary(Scalar::sqrt_of(2))],
            vec![CScalar::i()],
        ];
        let frame = build_frame(&PeriodMatrix::new(2, 1, s).unwrap()).unwrap();
        let d = Homomorphism {
            d_e: vec![CScalar::zero(), CScalar::zero()],
            d_s: vec![CScalar::real(parse_rational("1/2").unwrap().into())],
        };
        let inv = invariants(&d, &frame).unwrap();
        let z = find_sigma0(&frame, &inv).unwrap();
        (frame, inv, z)
    }

    fn setup_10_2() -> (RealCoordFrame, BundleInvariants, ZSet) {
        let s = vec![
            vec![CScalar::i()],
            vec![CScalar::real(Scalar::sqrt_of(2))],
        ];
        let frame = build_frame(&PeriodMatrix::new(2, 1, s).unwrap()).unwrap();
        let d = Homomorphism {
            d_e: vec![CScalar::zero(), CScalar::zero()],
            d_s: vec![CScalar::real(Scalar::sqrt_of(2))],
        };
        let inv = invariants(&d, &frame).unwrap();
        let z = find_sigma0(&frame, &inv).unwrap();
        (frame, inv, z)
    }

    fn setup_10_3(rule: WitnessRule) -> (RealCoordFrame, BundleInvariants, ZSet) {
        let gen = Arc::new(LacGen { rule: rule.series_rule() });
        let alpha = Scalar::Lac(LacExt::alpha(gen));
        let s = vec![
            vec![CScalar::i()],
            vec![CScalar::real(alpha.clone())],
        ];
        let frame = build_frame(&PeriodMatrix::new(2, 1, s).unwrap()).unwrap();
        let d = Homomorphism {
            d_e: vec![CScalar::zero(), CScalar::zero()],
            d_s: vec![CScalar::real(alpha)],
        };
        let inv = invariants(&d, &frame).unwrap();
        let z = find_sigma0(&frame, &inv).unwrap();
        (frame, inv, z)
    }

    #[test]
    fn certify_first_example() {
        let (frame, inv, z) = setup_10_1();
        let rep = certify(&frame, &inv, &z).unwrap();
        assert_eq!(rep.status, CondStatus::CertifiedHolds);
        let c = rep.constants.as_ref().unwrap();
        assert!(c.c.as_ref().unwrap().is_positive());
        assert_eq!(c.a.as_ref().unwrap(), &BigRational::one());
    }

    #[test]
    fn certify_second_example() {
        let (frame, inv, z) = setup_10_2();
        let rep = certify(&frame, &inv, &z).unwrap();
        assert_eq!(rep.status, CondStatus::CertifiedHolds);
    }

    #[test]
    fn certify_unknown_for_lacunary() {
        let (frame, inv, z) = setup_10_3(WitnessRule::Supergap);
        let rep = certify(&frame, &inv, &z).unwrap();
        assert_eq!(rep.status, CondStatus::Unknown);
    }

    #[test]
    fn scan_respects_certified_floor() {
        let (frame, inv, z) = setup_10_1();
        let rep = certify(&frame, &inv, &z).unwrap();
        let c = rep.constants.as_ref().unwrap().c.clone().unwrap();
        let a = rep.constants.as_ref().unwrap().a.clone().unwrap();
        let res = scan(&frame, &inv, &z, 8).unwrap();
        assert_eq!(res.status, CondStatus::EvidenceHolds);
        for r in &res.records {
            // C exp(-a rho) <= C (a >= 0), and floors are conservative:
            // compare against the rational upper bound exp(-a rho) <= 1
            let floor = &c
                * exp_enclosure(&(-&a * BigRational::from(BigInt::from(r.shell))), 20).0;
            assert!(
                r.gap_lo >= floor,
                "shell {} gap {} below certified floor {}",
                r.shell,
                r.gap_hi,
                floor
            );
        }
    }

    #[test]
    fn refute_factorial_rule_probes_erratum() {
        let (frame, inv, z) = setup_10_3(WitnessRule::FactorialPow10);
        let rep = refute(&frame, &inv, &z, WitnessRule::FactorialPow10, 2).unwrap();
        // the printed witness family does not satisfy the operative
        // inequality; status stays unknown and each nu is recorded
        assert_eq!(rep.status, CondStatus::Unknown);
        assert_eq!(rep.witnesses.len(), 2);
        for w in &rep.witnesses {
            assert!(!w.refutation_holds);
            assert!(!w.probe_holds);
        }
        // nu = 1 gap enclosure matches the exponent arithmetic: [-89, -89 + log10 2]
        assert!(rep.witnesses[0].gap_log10[0].starts_with("-89"));
    }

    #[test]
    fn refute_supergap_certifies_failure() {
        let (frame, inv, z) = setup_10_3(WitnessRule::Supergap);
        let rep = refute(&frame, &inv, &z, WitnessRule::Supergap, 3).unwrap();
        assert_eq!(rep.status, CondStatus::CertifiedFails);
        assert_eq!(rep.witnesses.len(), 3);
        assert!(rep.witnesses.iter().all(|w| w.refutation_holds));
    }

    #[test]
    fn refute_rejects_wrong_shape() {
        let (frame, inv, z) = setup_10_1();
        let rep = refute(&frame, &inv, &z, WitnessRule::Supergap, 3).unwrap();
        assert_eq!(rep.status, CondStatus::Unknown);
    }

    #[test]
    fn constant_conversions_round_trip() {
        let (frame, inv, z) = setup_10_1();
        let rep = certify(&frame, &inv, &z).unwrap();
        let hs = convert_constants(&rep, Condition::Hs, &frame, &inv).unwrap();
        assert_eq!(hs.status, CondStatus::CertifiedHolds);
        let r = hs.constants.as_ref().unwrap().r.clone().unwrap();
        assert!(r > BigRational::one());
        // back to HS': status preserved, a grows (weaker) but stays finite
        let back = convert_constants(&hs, Condition::HsPrime, &frame, &inv).unwrap();
        assert_eq!(back.status, CondStatus::CertifiedHolds);
        let a0 = rep.constants.as_ref().unwrap().a.clone().unwrap();
        let a1 = back.constants.as_ref().unwrap().a.clone().unwrap();
        assert!(a1 >= a0);
        // HS' -> HS'' with the example frame constants
        let hs2 = convert_constants(&rep, Condition::HsSecond, &frame, &inv).unwrap();
        assert_eq!(hs2.status, CondStatus::CertifiedHolds);
        assert!(hs2.constants.as_ref().unwrap().c.as_ref().unwrap().is_positive());
        // HS'' -> HS' keeps constants unchanged (inclusion direction)
        let incl = convert_constants(&hs2, Condition::HsPrime, &frame, &inv).unwrap();
        assert_eq!(
            incl.constants.as_ref().unwrap().c,
            hs2.constants.as_ref().unwrap().c
        );
    }

    #[test]
    fn gamma_constants_first_example() {
        // gamma_1 = sqrt(2), gamma_2 = sqrt(2) for the first example frame
        let (frame, inv, _) = setup_10_1();
        let (g1p, g2p) = gamma_primes(&frame, &inv).unwrap();
        // gamma_2' = gamma_1/gamma_2 = 1 up to enclosure slack
        let one = BigRational::one();
        let tol = parse_rational("1e-10").unwrap();
        assert!((g2p.clone() - &one).abs() < tol, "gamma_2' = {g2p}");
        // gamma_1' = (1 + 1/2)/sqrt(2) ~ 1.06066
        let want = parse_rational("1.06066").unwrap();
        assert!((g1p.clone() - &want).abs() < parse_rational("1e-4").unwrap(), "gamma_1' = {g1p}");
    }
}
