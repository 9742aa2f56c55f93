//! Lacunary decimal series sum_j 10^{-N_j} and the exponent-level arithmetic
//! used to reason about them without ever materializing the large integers
//! that appear in their rational approximations.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::sync::Arc;

use super::transcend::{log10_2_bounds, log10_e_bounds, ulp};
use super::ScalarError;

/// Exponent sequence rule for a lacunary series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LacRule {
    /// N_j = 10^{j!} (the series of Example-type growth).
    FactorialPow10,
    /// N_1 = 1, N_{j+1} = 10^{j * N_j}; gaps grow fast enough to defeat any
    /// exponential lower bound.
    Supergap,
    /// Finite user-supplied strictly increasing exponent list; the value is
    /// then rational.
    Custom(Vec<BigInt>),
}

/// An exact nonnegative integer that may only be representable through its
/// decimal exponent. `Pow { coef, exp }` denotes coef * 10^exp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpVal {
    Int(BigInt),
    Pow { coef: BigInt, exp: BigInt },
}

/// Materialization guard: 10^e is only expanded below this exponent.
const MATERIALIZE_LIMIT: u32 = 100_000;

impl ExpVal {
    pub fn as_int(&self) -> Result<BigInt, ScalarError> {
        match self {
            ExpVal::Int(n) => Ok(n.clone()),
            ExpVal::Pow { coef, exp } => {
                let e = exp.to_u32().filter(|e| *e < MATERIALIZE_LIMIT).ok_or(ScalarError::ExponentOverflow)?;
                Ok(coef * BigInt::from(10u32).pow(e))
            }
        }
    }

    /// Outward rational bounds on log10 of the value (which must be positive).
    pub fn log10_bounds(&self) -> Result<(BigRational, BigRational), ScalarError> {
        match self {
            ExpVal::Int(n) => {
                if !n.is_positive() {
                    return Err(ScalarError::InvalidDescriptor("log10 of non-positive exponent value".into()));
                }
                let digits = n.to_string().len() as i64;
                Ok((
                    BigRational::from(BigInt::from(digits - 1)),
                    BigRational::from(BigInt::from(digits)),
                ))
            }
            ExpVal::Pow { coef, exp } => {
                if !coef.is_positive() {
                    return Err(ScalarError::InvalidDescriptor("log10 of non-positive exponent value".into()));
                }
                let digits = coef.to_string().len() as i64;
                Ok((
                    BigRational::from(exp + BigInt::from(digits - 1)),
                    BigRational::from(exp + BigInt::from(digits)),
                ))
            }
        }
    }
}

impl LacRule {
    /// N_j for j >= 1. Errors with ExponentOverflow once the exponent itself
    /// can no longer be held exactly.
    pub fn exponent(&self, j: u32) -> Result<ExpVal, ScalarError> {
        match self {
            LacRule::FactorialPow10 => {
                // N_j = 10^{j!}
                let mut fact = BigInt::one();
                for i in 2..=j {
                    fact *= BigInt::from(i);
                }
                match fact.to_u32().filter(|f| *f < MATERIALIZE_LIMIT) {
                    Some(f) => Ok(ExpVal::Int(BigInt::from(10u32).pow(f))),
                    None => Ok(ExpVal::Pow { coef: BigInt::one(), exp: fact }),
                }
            }
            LacRule::Supergap => {
                // N_1 = 1, N_{j+1} = 10^{j N_j}
                let mut n = ExpVal::Int(BigInt::one());
                for i in 1..j {
                    let prev = match &n {
                        ExpVal::Int(v) => v.clone(),
                        ExpVal::Pow { .. } => return Err(ScalarError::ExponentOverflow),
                    };
                    let e = BigInt::from(i) * prev;
                    n = match e.to_u32().filter(|e| *e < MATERIALIZE_LIMIT) {
                        Some(e) => ExpVal::Int(BigInt::from(10u32).pow(e)),
                        None => ExpVal::Pow { coef: BigInt::one(), exp: e },
                    };
                }
                Ok(n)
            }
            LacRule::Custom(list) => list
                .get((j - 1) as usize)
                .cloned()
                .map(ExpVal::Int)
                .ok_or(ScalarError::ExponentOverflow),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LacRule::Custom(_))
    }

    pub fn validate(&self) -> Result<(), ScalarError> {
        if let LacRule::Custom(list) = self {
            if list.is_empty() {
                return Err(ScalarError::InvalidDescriptor("empty lacunary exponent list".into()));
            }
            let mut prev: Option<&BigInt> = None;
            for n in list {
                if *n < BigInt::one() {
                    return Err(ScalarError::InvalidDescriptor("lacunary exponents must satisfy N_1 >= 1".into()));
                }
                if let Some(p) = prev {
                    if n <= p {
                        return Err(ScalarError::InvalidDescriptor("lacunary exponents must be strictly increasing".into()));
                    }
                }
                prev = Some(n);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LacGen {
    pub rule: LacRule,
}

impl LacGen {
    /// Enclosure of the series value with width <= 10^{-digits}.
    ///
    /// Terms with materializable exponents are summed exactly; the tail after
    /// the last summed term is bracketed between its first term and twice its
    /// first term (the exponents at least decuple term to term). A tail whose
    /// first exponent is too large to materialize is bracketed by
    /// [0, 10^{-cap}], which is far below the requested width.
    pub fn enclosure(&self, digits: u32) -> Result<(BigRational, BigRational), ScalarError> {
        let cap = (digits + 50).min(MATERIALIZE_LIMIT - 1);
        let mut sum = BigRational::zero();
        let mut j = 1u32;
        loop {
            let nj = match self.rule.exponent(j) {
                Ok(n) => n,
                Err(ScalarError::ExponentOverflow) => {
                    if self.rule.is_finite() {
                        return Ok((sum.clone(), sum)); // exact rational value
                    }
                    // tail unrepresentably small
                    let t = ulp(cap);
                    return Ok((sum.clone(), sum + t));
                }
                Err(e) => return Err(e),
            };
            let small = match &nj {
                ExpVal::Int(n) => n.to_u32().filter(|n| *n <= cap),
                ExpVal::Pow { .. } => None,
            };
            match small {
                Some(e) if e <= digits + 2 => {
                    sum += ulp(e);
                    j += 1;
                }
                Some(e) => {
                    // first tail term exactly representable: tail in [t, 2t]
                    let t = ulp(e);
                    return Ok((&sum + &t, sum + BigRational::from(BigInt::from(2)) * t));
                }
                None => {
                    let t = ulp(cap);
                    return Ok((sum.clone(), sum + t));
                }
            }
        }
    }
}

/// Element c_0 + c_1 * alpha + ... + c_k * alpha^k of Q[alpha] for a lacunary
/// generator alpha. Division is available only by rationals; the series value
/// of the built-in rules is transcendental (Liouville), so the zero test is
/// coefficient emptiness, while a finite custom rule denotes a rational and is
/// normalized away before reaching this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LacExt {
    pub gen: Arc<LacGen>,
    pub coeffs: Vec<BigRational>,
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

impl LacExt {
    pub fn from_rational(gen: Arc<LacGen>, r: BigRational) -> Self {
        LacExt { gen, coeffs: trim(vec![r]) }
    }

    pub fn alpha(gen: Arc<LacGen>) -> Self {
        LacExt { gen, coeffs: vec![BigRational::zero(), BigRational::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn same_gen(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.gen, &other.gen) || *self.gen == *other.gen
    }

    pub fn add(&self, other: &Self) -> Result<Self, ScalarError> {
        if !self.same_gen(other) {
            return Err(ScalarError::IncompatibleScalars);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Ok(LacExt { gen: self.gen.clone(), coeffs: trim(out) })
    }

    pub fn neg(&self) -> Self {
        LacExt { gen: self.gen.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if !self.same_gen(other) {
            return Err(ScalarError::IncompatibleScalars);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(LacExt { gen: self.gen.clone(), coeffs: vec![] });
        }
        let mut prod = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(LacExt { gen: self.gen.clone(), coeffs: trim(prod) })
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self.as_rational() {
            Some(r) if !r.is_zero() => Ok(LacExt::from_rational(self.gen.clone(), r.recip())),
            Some(_) => Err(ScalarError::DivisionByZero),
            None => Err(ScalarError::UnsupportedDivision),
        }
    }

    pub fn enclosure(&self, digits: u32) -> Result<(BigRational, BigRational), ScalarError> {
        if let Some(r) = self.as_rational() {
            return Ok((r.clone(), r));
        }
        let d = digits + 4 + self.coeffs.len() as u32;
        let (alo, ahi) = self.gen.enclosure(d)?;
        let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
        for c in self.coeffs.iter().rev() {
            let cands = [&lo * &alo, &lo * &ahi, &hi * &alo, &hi * &ahi];
            let nlo = cands.iter().min().unwrap().clone();
            let nhi = cands.iter().max().unwrap().clone();
            lo = nlo + c;
            hi = nhi + c;
        }
        Ok((lo, hi))
    }

    pub fn sign(&self) -> Result<i8, ScalarError> {
        if self.is_zero() {
            return Ok(0);
        }
        if let Some(r) = self.as_rational() {
            return Ok(if r.is_positive() { 1 } else { -1 });
        }
        let mut digits = 12u32;
        loop {
            let (lo, hi) = self.enclosure(digits)?;
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            digits *= 2;
            if digits > MATERIALIZE_LIMIT {
                // a nonzero polynomial in a transcendental value is nonzero,
                // but its magnitude may sit below the materialization cap
                return Err(ScalarError::NonConvergent);
            }
        }
    }
}

/// Certified log10 enclosure of |q_nu * alpha - p_nu| for a lacunary alpha,
/// computed purely in exponent arithmetic.
///
/// Both witness rules produce q_nu = 10^{E_nu} (times a power of ten factor
/// folded into E_nu) and p_nu = q_nu * (partial sum through nu). Then
/// q_nu * alpha - p_nu = q_nu * tail(nu), and the tail is bracketed between
/// its first term and twice its first term.
#[derive(Debug, Clone)]
pub struct GapLog {
    /// log10 lower bound: E_nu - N_{nu+1} (exact integer-valued part).
    pub lo: LogValue,
    /// log10 upper bound: lower bound + log10 2.
    pub hi: LogValue,
}

/// A possibly huge exact-or-bounded signed value on the log10 scale:
/// sign * coef * 10^exp + off with rational interval coef.
#[derive(Debug, Clone)]
pub enum LogValue {
    Rat(BigRational),
    Huge {
        /// coefficient interval, both endpoints of the same sign
        lo: BigRational,
        hi: BigRational,
        exp: BigInt,
    },
}

impl LogValue {
    pub fn from_expval_diff(a: &ExpVal, b: &ExpVal) -> Result<LogValue, ScalarError> {
        // a - b where a is materializable-or-pow, same for b
        match (a, b) {
            (ExpVal::Int(x), ExpVal::Int(y)) => Ok(LogValue::Rat(BigRational::from(x - y))),
            (ExpVal::Int(x), ExpVal::Pow { coef, exp }) => {
                // x - coef*10^exp: |x| << 10^exp in all our uses; fold x into
                // the coefficient interval by widening
                let w = widen_for_offset(x, exp);
                let c = BigRational::from(coef.clone());
                Ok(LogValue::Huge { lo: -(&c + &w), hi: -(&c - &w), exp: exp.clone() })
            }
            (ExpVal::Pow { coef, exp }, ExpVal::Int(y)) => {
                let w = widen_for_offset(y, exp);
                let c = BigRational::from(coef.clone());
                Ok(LogValue::Huge { lo: &c - &w, hi: &c + &w, exp: exp.clone() })
            }
            (ExpVal::Pow { .. }, ExpVal::Pow { .. }) => Err(ScalarError::ExponentOverflow),
        }
    }

    /// Multiply by a rational interval [clo, chi].
    pub fn scale(&self, clo: &BigRational, chi: &BigRational) -> LogValue {
        match self {
            LogValue::Rat(r) => {
                let cands = [r * clo, r * chi];
                let lo = cands.iter().min().unwrap().clone();
                let hi = cands.iter().max().unwrap().clone();
                LogValue::Huge { lo, hi, exp: BigInt::zero() }.normalize()
            }
            LogValue::Huge { lo, hi, exp } => {
                let cands = [lo * clo, lo * chi, hi * clo, hi * chi];
                let nlo = cands.iter().min().unwrap().clone();
                let nhi = cands.iter().max().unwrap().clone();
                LogValue::Huge { lo: nlo, hi: nhi, exp: exp.clone() }.normalize()
            }
        }
    }

    /// Add a plain rational (absorbed into the coefficient interval when the
    /// exponent is huge).
    pub fn add_rat(&self, r: &BigRational) -> LogValue {
        match self {
            LogValue::Rat(x) => LogValue::Rat(x + r),
            LogValue::Huge { lo, hi, exp } => match exp.to_u32() {
                // materializable scale: fold into an exact exponent-0 interval
                Some(e) if e <= 4_000 => {
                    let p = BigRational::from(BigInt::from(10u32).pow(e));
                    LogValue::Huge {
                        lo: lo * &p + r,
                        hi: hi * &p + r,
                        exp: BigInt::zero(),
                    }
                    .normalize()
                }
                _ => {
                    let w = widen_for_offset_rat(r, exp);
                    LogValue::Huge { lo: lo - &w, hi: hi + &w, exp: exp.clone() }
                }
            },
        }
    }

    pub fn neg(&self) -> LogValue {
        match self {
            LogValue::Rat(r) => LogValue::Rat(-r.clone()),
            LogValue::Huge { lo, hi, exp } => {
                LogValue::Huge { lo: -hi.clone(), hi: -lo.clone(), exp: exp.clone() }
            }
        }
    }

    pub fn normalize_pub(self) -> LogValue {
        self.normalize()
    }

    fn normalize(self) -> LogValue {
        match self {
            LogValue::Huge { lo, hi, exp } if exp.is_zero() && lo == hi => LogValue::Rat(lo),
            other => other,
        }
    }

    /// Certified strict comparison; None when the intervals overlap.
    pub fn lt(&self, other: &LogValue) -> Option<bool> {
        let (alo, ahi) = self.bounds_scaled();
        let (blo, bhi) = other.bounds_scaled();
        match (alo, ahi, blo, bhi) {
            (Some(alo), Some(ahi), Some(blo), Some(bhi)) => {
                if ahi < blo {
                    Some(true)
                } else if bhi < alo {
                    Some(false)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Comparable rational bounds when the exponent is materializable; for
    /// huge exponents falls back to sign and magnitude-order comparison via
    /// an f64-safe path on (sign, exp, coef).
    fn bounds_scaled(&self) -> (Option<BigRational>, Option<BigRational>) {
        match self {
            LogValue::Rat(r) => (Some(r.clone()), Some(r.clone())),
            LogValue::Huge { lo, hi, exp } => match exp.to_u32() {
                Some(e) if e < 4_000 => {
                    let p = BigRational::from(BigInt::from(10u32).pow(e));
                    (Some(lo * &p), Some(hi * &p))
                }
                _ => (None, None),
            },
        }
    }

    /// Total comparison that also handles non-materializable exponents by
    /// comparing magnitudes on the second log scale.
    pub fn lt_total(&self, other: &LogValue) -> Result<bool, ScalarError> {
        if let Some(b) = self.lt(other) {
            return Ok(b);
        }
        // both huge (or one huge, one rational with overlap impossible):
        // decide by sign and exponent
        let key = |v: &LogValue| -> Result<(i8, BigRational), ScalarError> {
            match v {
                LogValue::Rat(r) => {
                    let s = if r.is_positive() { 1 } else if r.is_negative() { -1 } else { 0 };
                    Ok((s, BigRational::zero()))
                }
                LogValue::Huge { lo, hi, exp } => {
                    if lo.is_positive() {
                        // log10 magnitude = exp + log10 coef
                        let (l10, _) = super::transcend::log10_enclosure(lo, 8);
                        Ok((1, BigRational::from(exp.clone()) + l10))
                    } else if hi.is_negative() {
                        let (l10, _) = super::transcend::log10_enclosure(&-hi.clone(), 8);
                        Ok((-1, BigRational::from(exp.clone()) + l10))
                    } else {
                        Err(ScalarError::Undecided)
                    }
                }
            }
        };
        let (sa, ma) = key(self)?;
        let (sb, mb) = key(other)?;
        if sa != sb {
            return Ok(sa < sb);
        }
        if sa == 0 {
            return Err(ScalarError::Undecided);
        }
        // same sign: larger magnitude means larger value for positive,
        // smaller for negative; magnitudes differ vastly in all our uses
        if ma == mb {
            return Err(ScalarError::Undecided);
        }
        Ok((sa > 0) == (ma < mb))
    }

    /// Decimal rendering for reports.
    pub fn render(&self) -> String {
        match self {
            LogValue::Rat(r) => {
                let f = r.to_f64().map(|v| format!("{v:.6}")).unwrap_or_else(|| r.to_string());
                f
            }
            LogValue::Huge { lo, hi, exp } => {
                format!("[{:.4}, {:.4}]*10^{}", lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN), exp)
            }
        }
    }
}

fn widen_for_offset(x: &BigInt, exp: &BigInt) -> BigRational {
    // |x| / 10^exp bounded by 10^{digits(x) - exp}; widen by 10^-30 when the
    // gap is large, else compute exactly
    let digits = x.magnitude().to_str_radix(10).len() as i64;
    let gap = exp - BigInt::from(digits);
    match gap.to_u32() {
        Some(g) if g <= 4_000 => {
            BigRational::new(x.abs(), BigInt::from(10u32).pow(exp.to_u32().unwrap_or(4_000)))
        }
        _ => BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30)),
    }
}

fn widen_for_offset_rat(r: &BigRational, exp: &BigInt) -> BigRational {
    if r.is_zero() {
        return BigRational::zero();
    }
    // |r| <= 10^digits, so |r| / 10^exp <= 10^{digits - exp}; negligible only
    // when the scale exceeds the offset by a safe margin
    let digits = r.numer().magnitude().to_str_radix(10).len() as i64;
    let gap = exp - BigInt::from(digits);
    if gap >= BigInt::from(30) {
        return BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30));
    }
    match exp.to_u32() {
        Some(e) if e <= 4_000 => r.abs() / BigRational::from(BigInt::from(10u32).pow(e)),
        // exp >= 0 by construction, so dividing by 10^exp only shrinks |r|
        _ => r.abs(),
    }
}

/// Witness numerator/denominator rules for the refutation machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessRule {
    /// q_nu = 10^{nu!} * 10^{10^{nu!}}; p_nu = q_nu * partial sum.
    FactorialPow10,
    /// q_nu = 10^{N_nu} for the supergap sequence; p_nu = q_nu * partial sum.
    Supergap,
}

impl WitnessRule {
    pub fn series_rule(&self) -> LacRule {
        match self {
            WitnessRule::FactorialPow10 => LacRule::FactorialPow10,
            WitnessRule::Supergap => LacRule::Supergap,
        }
    }

    /// E_nu with q_nu = 10^{E_nu}.
    pub fn q_exponent(&self, nu: u32) -> Result<ExpVal, ScalarError> {
        match self {
            WitnessRule::FactorialPow10 => {
                let mut fact = BigInt::one();
                for i in 2..=nu {
                    fact *= BigInt::from(i);
                }
                // E = nu! + 10^{nu!}
                let n = LacRule::FactorialPow10.exponent(nu)?;
                match n {
                    ExpVal::Int(v) => Ok(ExpVal::Int(v + fact)),
                    ExpVal::Pow { .. } => Err(ScalarError::ExponentOverflow),
                }
            }
            WitnessRule::Supergap => LacRule::Supergap.exponent(nu),
        }
    }
}

/// Integrality check and certified log10 enclosure of |q_nu alpha - p_nu|
/// with p_nu := q_nu * (partial sum through nu): p is an integer iff
/// E_nu >= N_j for every j <= nu, checked purely on exponents.
pub fn lacunary_gap(rule: &LacRule, q_exp: &ExpVal, nu: u32) -> Result<GapLog, ScalarError> {
    // integrality of p = sum_j 10^{E - N_j}, j <= nu
    for j in 1..=nu {
        let nj = rule.exponent(j)?;
        let diff = LogValue::from_expval_diff(q_exp, &nj)?;
        let nonneg = match &diff {
            LogValue::Rat(r) => !r.is_negative(),
            LogValue::Huge { lo, .. } => lo.is_positive(),
        };
        if !nonneg {
            return Err(ScalarError::NonIntegerP);
        }
    }
    // gap = q * tail, tail in [10^{-N_{nu+1}}, 2*10^{-N_{nu+1}}]
    let next = rule.exponent(nu + 1)?;
    let base = LogValue::from_expval_diff(q_exp, &next)?;
    let (_, l2_hi) = log10_2_bounds();
    Ok(GapLog { lo: base.clone(), hi: base.add_rat(&l2_hi) })
}

/// log10 enclosure of exp(-nu * s) for a possibly huge integer s:
/// -nu * s * log10(e), as an outward interval on the log scale.
pub fn log10_exp_neg(nu: u32, s: &ExpVal) -> Result<LogValue, ScalarError> {
    let (le_lo, le_hi) = log10_e_bounds();
    let n = BigRational::from(BigInt::from(nu));
    match s {
        ExpVal::Int(v) => {
            let v = BigRational::from(v.clone());
            Ok(LogValue::Huge {
                lo: -(&v * &n * &le_hi),
                hi: -(&v * &n * &le_lo),
                exp: BigInt::zero(),
            }
            .normalize_pub())
        }
        ExpVal::Pow { coef, exp } => {
            let c = BigRational::from(coef.clone());
            Ok(LogValue::Huge {
                lo: -(&c * &n * &le_hi),
                hi: -(&c * &n * &le_lo),
                exp: exp.clone(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_rule_exponents() {
        let r = LacRule::FactorialPow10;
        assert_eq!(r.exponent(1).unwrap(), ExpVal::Int(BigInt::from(10)));
        assert_eq!(r.exponent(2).unwrap(), ExpVal::Int(BigInt::from(100)));
        assert_eq!(r.exponent(3).unwrap(), ExpVal::Int(BigInt::from(1_000_000)));
    }

    #[test]
    fn supergap_rule_exponents() {
        let r = LacRule::Supergap;
        assert_eq!(r.exponent(1).unwrap(), ExpVal::Int(BigInt::from(1)));
        assert_eq!(r.exponent(2).unwrap(), ExpVal::Int(BigInt::from(10)));
        assert_eq!(r.exponent(3).unwrap(), ExpVal::Int(BigInt::from(10u64).pow(20)));
        match r.exponent(4).unwrap() {
            ExpVal::Pow { coef, exp } => {
                assert_eq!(coef, BigInt::one());
                assert_eq!(exp, BigInt::from(3) * BigInt::from(10u64).pow(20));
            }
            other => panic!("expected symbolic exponent, got {other:?}"),
        }
    }

    #[test]
    fn series_enclosure_first_terms() {
        let g = LacGen { rule: LacRule::FactorialPow10 };
        let (lo, hi) = g.enclosure(12).unwrap();
        // value = 10^-10 + 10^-100 + ...; enclosure must contain it and be tight
        let first = ulp(10);
        assert!(lo >= first.clone());
        assert!(hi <= &first + ulp(50));
        assert!(&hi - &lo <= ulp(12));
    }

    #[test]
    fn gap_log_factorial_nu1() {
        // q_1 = 10^11 (exponent E_1 = 1! + 10^{1!} = 11), gap log10 in [-89, -89 + log10 2]
        let q = WitnessRule::FactorialPow10.q_exponent(1).unwrap();
        assert_eq!(q, ExpVal::Int(BigInt::from(11)));
        let g = lacunary_gap(&LacRule::FactorialPow10, &q, 1).unwrap();
        match (&g.lo, &g.hi) {
            (LogValue::Rat(lo), LogValue::Rat(hi)) => {
                assert_eq!(*lo, BigRational::from(BigInt::from(-89)));
                let width = hi - lo;
                let (_, l2hi) = log10_2_bounds();
                assert!(width <= l2hi);
            }
            other => panic!("expected rational log bounds, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_p_detected() {
        // q = 10^3 cannot clear the denominator of the nu=1 factorial term 10^-10
        let q = ExpVal::Int(BigInt::from(3));
        let err = lacunary_gap(&LacRule::FactorialPow10, &q, 1).unwrap_err();
        assert!(matches!(err, ScalarError::NonIntegerP));
    }
}
