//! Certified scalar arithmetic: exact number kinds with provable sign
//! decisions, interval refinement, and the two Diophantine primitives the
//! classification needs (effective Liouville lower bounds and lacunary gap
//! enclosures).

pub mod algebraic;
pub mod lacunary;
pub mod quad;
pub mod transcend;

use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

use algebraic::{AlgExt, AlgGen};
use lacunary::{LacExt, LacGen, LacRule};
use quad::QuadExt;
use transcend::ulp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("invalid scalar descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("interval refinement did not converge")]
    NonConvergent,
    #[error("scalars from incompatible extensions cannot be combined exactly")]
    IncompatibleScalars,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exact division by this scalar kind is not supported")]
    UnsupportedDivision,
    #[error("witness numerator is not an integer for this index")]
    NonIntegerP,
    #[error("exponent too large to represent exactly")]
    ExponentOverflow,
    #[error("sign undecided at available precision")]
    Undecided,
    #[error("requested precision exceeds the certified error of a float input")]
    Uncertifiable,
    #[error("operation requires an irrational algebraic scalar")]
    NotAlgebraic,
}

/// Certified sign of a real value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Undecided,
}

impl Sign {
    pub fn from_i8(s: i8) -> Sign {
        match s.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }
}

/// Outward-rounded rational enclosure of a real value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    /// true when lo == hi is the exact value
    pub exact: bool,
}

impl Enclosure {
    pub fn point(v: BigRational) -> Self {
        Enclosure { lo: v.clone(), hi: v, exact: true }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering of the midpoint to the given number of places.
    pub fn render(&self, digits: u32) -> String {
        render_rational(&((&self.lo + &self.hi) / BigRational::from(BigInt::from(2))), digits)
    }
}

/// Fixed-point decimal rendering of a rational (round toward zero).
pub fn render_rational(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from(scale)).trunc();
    let n = scaled.numer().clone();
    let neg = n.is_negative();
    let mag = n.magnitude().to_str_radix(10);
    let mag = if mag.len() as u32 <= digits {
        format!("{}{}", "0".repeat((digits + 1 - mag.len() as u32) as usize), mag)
    } else {
        mag
    };
    let (int_part, frac_part) = mag.split_at(mag.len() - digits as usize);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// A certified real number. Exact kinds support field arithmetic with
/// decidable zero tests; the float kind carries only an interval and taints
/// every result derived from it as evidence-grade.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rat(BigRational),
    Quad(QuadExt),
    Alg(AlgExt),
    Lac(LacExt),
    Float { lo: BigRational, hi: BigRational },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Rat(BigRational::from(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar::Rat(BigRational::from(v))
    }

    pub fn from_rat(r: BigRational) -> Self {
        Scalar::Rat(r)
    }

    pub fn sqrt_of(d: u64) -> Self {
        Scalar::Quad(QuadExt::sqrt_term(BigRational::one(), &BigUint::from(d))).normalized()
    }

    /// True when any input in the value's history was float-tagged.
    pub fn is_evidence(&self) -> bool {
        matches!(self, Scalar::Float { .. })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Alg(a) => a.is_zero(),
            Scalar::Lac(l) => l.is_zero(),
            Scalar::Float { lo, hi } => lo.is_zero() && hi.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rat(r) => Some(r.clone()),
            Scalar::Quad(q) => q.as_rational(),
            Scalar::Alg(a) => a.as_rational(),
            Scalar::Lac(l) => l.as_rational(),
            Scalar::Float { lo, hi } if lo == hi => Some(lo.clone()),
            Scalar::Float { .. } => None,
        }
    }

    /// Demote extension elements that happen to be rational; keeps cross-kind
    /// arithmetic exact whenever it can be.
    fn normalized(self) -> Scalar {
        match &self {
            Scalar::Quad(q) => {
                if let Some(r) = q.as_rational() {
                    return Scalar::Rat(r);
                }
            }
            Scalar::Alg(a) => {
                if let Some(r) = a.as_rational() {
                    return Scalar::Rat(r);
                }
            }
            Scalar::Lac(l) => {
                if let Some(r) = l.as_rational() {
                    return Scalar::Rat(r);
                }
            }
            _ => {}
        }
        self
    }

    pub fn enclosure(&self, digits: u32) -> Result<Enclosure, ScalarError> {
        match self {
            Scalar::Rat(r) => Ok(Enclosure::point(r.clone())),
            Scalar::Quad(q) => {
                let (lo, hi) = q.enclosure(digits);
                Ok(Enclosure { lo, hi, exact: false })
            }
            Scalar::Alg(a) => {
                let (lo, hi) = a.enclosure(digits)?;
                let exact = lo == hi;
                Ok(Enclosure { lo, hi, exact })
            }
            Scalar::Lac(l) => {
                let (lo, hi) = l.enclosure(digits)?;
                let exact = lo == hi;
                Ok(Enclosure { lo, hi, exact })
            }
            Scalar::Float { lo, hi } => Ok(Enclosure { lo: lo.clone(), hi: hi.clone(), exact: lo == hi }),
        }
    }

    /// Enclosure of width <= 10^{-digits}; float inputs whose stated error is
    /// wider than requested are rejected rather than silently tightened.
    pub fn refine(&self, digits: u32) -> Result<Enclosure, ScalarError> {
        let enc = self.enclosure(digits)?;
        if enc.width() > ulp(digits) {
            return Err(ScalarError::Uncertifiable);
        }
        Ok(enc)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
            Scalar::Alg(a) => Scalar::Alg(a.neg()),
            Scalar::Lac(l) => Scalar::Lac(l.neg()),
            Scalar::Float { lo, hi } => Scalar::Float { lo: -hi.clone(), hi: -lo.clone() },
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binop(other, BinOp::Add)
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binop(other, BinOp::Sub)
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binop(other, BinOp::Mul)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        Ok(match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                Scalar::Rat(r.recip())
            }
            Scalar::Quad(q) => Scalar::Quad(q.inv().ok_or(ScalarError::DivisionByZero)?).normalized(),
            Scalar::Alg(a) => Scalar::Alg(a.inv()?).normalized(),
            Scalar::Lac(l) => Scalar::Lac(l.inv()?).normalized(),
            Scalar::Float { lo, hi } => {
                if !lo.is_positive() && !hi.is_negative() {
                    return Err(ScalarError::Undecided);
                }
                Scalar::Float { lo: hi.recip(), hi: lo.recip() }
            }
        })
    }

    fn binop(&self, other: &Scalar, op: BinOp) -> Result<Scalar, ScalarError> {
        use Scalar::*;
        let out = match (self, other) {
            (Float { .. }, _) | (_, Float { .. }) => {
                let a = self.float_bounds()?;
                let b = other.float_bounds()?;
                let (lo, hi) = interval_op(&a, &b, op);
                Float { lo, hi }
            }
            (Rat(a), Rat(b)) => Rat(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
            }),
            (Quad(_), _) | (_, Quad(_)) => {
                let a = self.to_quad()?;
                let b = other.to_quad()?;
                Quad(match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                })
            }
            (Alg(_), _) | (_, Alg(_)) => {
                let gen = self.alg_gen().or_else(|| other.alg_gen()).unwrap();
                let a = self.to_alg(&gen)?;
                let b = other.to_alg(&gen)?;
                Alg(match op {
                    BinOp::Add => a.add(&b)?,
                    BinOp::Sub => a.sub(&b)?,
                    BinOp::Mul => a.mul(&b)?,
                })
            }
            (Lac(_), _) | (_, Lac(_)) => {
                let gen = self.lac_gen().or_else(|| other.lac_gen()).unwrap();
                let a = self.to_lac(&gen)?;
                let b = other.to_lac(&gen)?;
                Lac(match op {
                    BinOp::Add => a.add(&b)?,
                    BinOp::Sub => a.sub(&b)?,
                    BinOp::Mul => a.mul(&b)?,
                })
            }
        };
        Ok(out.normalized())
    }

    fn float_bounds(&self) -> Result<(BigRational, BigRational), ScalarError> {
        match self {
            Scalar::Float { lo, hi } => Ok((lo.clone(), hi.clone())),
            other => {
                let e = other.enclosure(40)?;
                Ok((e.lo, e.hi))
            }
        }
    }

    fn to_quad(&self) -> Result<QuadExt, ScalarError> {
        match self {
            Scalar::Rat(r) => Ok(QuadExt::from_rational(r.clone())),
            Scalar::Quad(q) => Ok(q.clone()),
            _ => Err(ScalarError::IncompatibleScalars),
        }
    }

    fn alg_gen(&self) -> Option<Arc<AlgGen>> {
        match self {
            Scalar::Alg(a) => Some(a.gen.clone()),
            _ => None,
        }
    }

    fn to_alg(&self, gen: &Arc<AlgGen>) -> Result<AlgExt, ScalarError> {
        match self {
            Scalar::Rat(r) => Ok(AlgExt::from_rational(gen.clone(), r.clone())),
            Scalar::Alg(a) => Ok(a.clone()),
            _ => Err(ScalarError::IncompatibleScalars),
        }
    }

    fn lac_gen(&self) -> Option<Arc<LacGen>> {
        match self {
            Scalar::Lac(l) => Some(l.gen.clone()),
            _ => None,
        }
    }

    fn to_lac(&self, gen: &Arc<LacGen>) -> Result<LacExt, ScalarError> {
        match self {
            Scalar::Rat(r) => Ok(LacExt::from_rational(gen.clone(), r.clone())),
            Scalar::Lac(l) => Ok(l.clone()),
            _ => Err(ScalarError::IncompatibleScalars),
        }
    }

    /// Certified sign. Zero is returned only when provable; the undecided
    /// outcome is reserved for float-tagged inputs straddling zero (and for
    /// refinements that hit their hard step caps).
    pub fn cert_sign(&self) -> Sign {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Sign::Zero
                } else if r.is_positive() {
                    Sign::Positive
                } else {
                    Sign::Negative
                }
            }
            Scalar::Quad(q) => Sign::from_i8(q.sign()),
            Scalar::Alg(a) => a.sign().map(Sign::from_i8).unwrap_or(Sign::Undecided),
            Scalar::Lac(l) => l.sign().map(Sign::from_i8).unwrap_or(Sign::Undecided),
            Scalar::Float { lo, hi } => {
                if lo.is_positive() {
                    Sign::Positive
                } else if hi.is_negative() {
                    Sign::Negative
                } else if lo.is_zero() && hi.is_zero() {
                    Sign::Zero
                } else {
                    Sign::Undecided
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(17).map(|e| e.mid_f64()).unwrap_or(f64::NAN)
    }

    /// The scalar's kind name as used in descriptors and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Scalar::Rat(_) => "rational",
            Scalar::Quad(_) => "quadratic",
            Scalar::Alg(_) => "algebraic",
            Scalar::Lac(_) => "lacunary",
            Scalar::Float { .. } => "float",
        }
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
}

fn interval_op(
    a: &(BigRational, BigRational),
    b: &(BigRational, BigRational),
    op: BinOp,
) -> (BigRational, BigRational) {
    match op {
        BinOp::Add => (&a.0 + &b.0, &a.1 + &b.1),
        BinOp::Sub => (&a.0 - &b.1, &a.1 - &b.0),
        BinOp::Mul => {
            let cands = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
            (
                cands.iter().min().unwrap().clone(),
                cands.iter().max().unwrap().clone(),
            )
        }
    }
}

/// Effective Liouville lower bound: a positive rational c with
/// |q*s - p| >= c for every integer p, of the form C/|q|^{N-1} where N is the
/// degree of s and C comes from a derivative bound of the minimal polynomial
/// near the root.
pub fn liouville_lower_bound(s: &Scalar, q: &BigInt) -> Result<BigRational, ScalarError> {
    if q.is_zero() {
        return Err(ScalarError::InvalidDescriptor("q must be nonzero".into()));
    }
    let minpoly = match s {
        Scalar::Quad(qd) => {
            if qd.as_rational().is_some() {
                return Err(ScalarError::NotAlgebraic);
            }
            quad_minpoly(qd)?
        }
        Scalar::Alg(a) => a.gen.minpoly.clone(),
        _ => return Err(ScalarError::NotAlgebraic),
    };
    let n = minpoly.len() - 1;
    if n < 2 {
        return Err(ScalarError::NotAlgebraic);
    }
    // radius bound R >= |s| + 1 from a coarse enclosure
    let e = s.enclosure(2)?;
    let r_bound = e
        .lo
        .abs()
        .max(e.hi.abs())
        .ceil()
        .numer()
        .clone()
        + BigInt::from(2);
    // M >= sup |f'(x)| over |x| <= R: sum k*|a_k|*R^{k-1}
    let mut m = BigInt::zero();
    for (k, c) in minpoly.iter().enumerate().skip(1) {
        m += BigInt::from(k) * c.abs() * r_bound.pow((k - 1) as u32);
    }
    if m < BigInt::one() {
        m = BigInt::one();
    }
    // |q s - p| >= min(1, 1/M) / |q|^{N-1}; M >= 1 here
    let qn = q.abs().pow((n - 1) as u32);
    Ok(BigRational::new(BigInt::one(), m * qn))
}

/// Integer minimal polynomial of an irrational a + b*sqrt(D): the monic
/// x^2 - 2a x + (a^2 - b^2 D) cleared of denominators. Requires a single
/// radicand; multi-radical values are outside the published input shapes.
fn quad_minpoly(q: &QuadExt) -> Result<Vec<BigInt>, ScalarError> {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut d = BigUint::one();
    for (rad, c) in &q.terms {
        if rad.is_one() {
            a = c.clone();
        } else if d.is_one() {
            d = rad.clone();
            b = c.clone();
        } else {
            return Err(ScalarError::NotAlgebraic);
        }
    }
    if b.is_zero() {
        return Err(ScalarError::NotAlgebraic);
    }
    let c0 = &a * &a - &b * &b * BigRational::from(BigInt::from(d));
    let c1 = BigRational::from(BigInt::from(-2)) * &a;
    // clear denominators of [c0, c1, 1]
    let den = c0.denom().clone() * c1.denom() / num::integer::gcd(c0.denom().clone(), c1.denom().clone());
    let den_r = BigRational::from(den);
    Ok(vec![
        (&c0 * &den_r).to_integer(),
        (&c1 * &den_r).to_integer(),
        den_r.to_integer(),
    ])
}

// ---------------------------------------------------------------------------
// Descriptor parsing

/// JSON form of a scalar literal, e.g. {"kind":"quadratic","a":"0","b":"1","D":2}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalarDescriptor {
    Rational {
        num: serde_json::Value,
        den: serde_json::Value,
    },
    Quadratic {
        a: serde_json::Value,
        b: serde_json::Value,
        #[serde(rename = "D")]
        d: u64,
    },
    Algebraic {
        minpoly: Vec<serde_json::Value>,
        interval: [serde_json::Value; 2],
    },
    Lacunary {
        rule: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponents: Option<Vec<serde_json::Value>>,
    },
    Float {
        value: String,
        err: serde_json::Value,
    },
}

fn json_to_bigint(v: &serde_json::Value) -> Result<BigInt, ScalarError> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| ScalarError::InvalidDescriptor(format!("non-integer number {n}"))),
        serde_json::Value::String(s) => BigInt::from_str(s.trim())
            .map_err(|_| ScalarError::InvalidDescriptor(format!("bad integer literal {s:?}"))),
        other => Err(ScalarError::InvalidDescriptor(format!("expected integer, got {other}"))),
    }
}

fn json_to_rational(v: &serde_json::Value) -> Result<BigRational, ScalarError> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string())
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(ScalarError::InvalidDescriptor(format!("expected rational, got {other}"))),
    }
}

/// Parse "a/b", plain integers, decimals ("1.25"), and scientific notation
/// ("1e-7", "-3.5e2") into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let s = s.trim();
    let bad = || ScalarError::InvalidDescriptor(format!("bad rational literal {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, i64::from_str(e).map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let neg = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if !int_digits.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{int_digits}{frac_part}");
    let joined = if joined.is_empty() { "0".to_string() } else { joined };
    let mut num = BigInt::from_str(&joined).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from(num * ten.pow(shift as u32))
    } else {
        BigRational::new(num, ten.pow((-shift) as u32))
    })
}

impl ScalarDescriptor {
    pub fn to_scalar(&self) -> Result<Scalar, ScalarError> {
        match self {
            ScalarDescriptor::Rational { num, den } => {
                let n = json_to_bigint(num)?;
                let d = json_to_bigint(den)?;
                if d.is_zero() {
                    return Err(ScalarError::InvalidDescriptor("zero denominator".into()));
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            ScalarDescriptor::Quadratic { a, b, d } => {
                let a = json_to_rational(a)?;
                let b = json_to_rational(b)?;
                if *d == 0 {
                    return Err(ScalarError::InvalidDescriptor("radicand must be positive".into()));
                }
                let q = QuadExt::from_rational(a).add(&QuadExt::sqrt_term(b, &BigUint::from(*d)));
                Ok(Scalar::Quad(q).normalized())
            }
            ScalarDescriptor::Algebraic { minpoly, interval } => {
                let mp = minpoly.iter().map(json_to_bigint).collect::<Result<Vec<_>, _>>()?;
                let lo = json_to_rational(&interval[0])?;
                let hi = json_to_rational(&interval[1])?;
                algebraic_scalar(mp, lo, hi)
            }
            ScalarDescriptor::Lacunary { rule, exponents } => {
                let rule = match rule.as_str() {
                    "factorial-pow10" => LacRule::FactorialPow10,
                    "supergap" => LacRule::Supergap,
                    "custom" => {
                        let exps = exponents
                            .as_ref()
                            .ok_or_else(|| ScalarError::InvalidDescriptor("custom rule needs exponents".into()))?
                            .iter()
                            .map(json_to_bigint)
                            .collect::<Result<Vec<_>, _>>()?;
                        LacRule::Custom(exps)
                    }
                    other => {
                        return Err(ScalarError::InvalidDescriptor(format!("unknown lacunary rule {other:?}")))
                    }
                };
                rule.validate()?;
                let gen = Arc::new(LacGen { rule });
                if gen.rule.is_finite() {
                    // finite sums are plain rationals
                    let (v, _) = gen.enclosure(1)?;
                    return Ok(Scalar::Rat(v));
                }
                Ok(Scalar::Lac(LacExt::alpha(gen)))
            }
            ScalarDescriptor::Float { value, err } => {
                let v = parse_rational(value)?;
                let e = json_to_rational(err)?;
                if e.is_negative() {
                    return Err(ScalarError::InvalidDescriptor("negative error bound".into()));
                }
                Ok(Scalar::Float { lo: &v - &e, hi: v + e })
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Scalar, ScalarError> {
        // bare numbers and strings are shorthand for rationals
        match v {
            serde_json::Value::Number(_) | serde_json::Value::String(_) => {
                Ok(Scalar::Rat(json_to_rational(v)?))
            }
            serde_json::Value::Object(_) => {
                let d: ScalarDescriptor = serde_json::from_value(v.clone())
                    .map_err(|e| ScalarError::InvalidDescriptor(e.to_string()))?;
                d.to_scalar()
            }
            other => Err(ScalarError::InvalidDescriptor(format!("bad scalar literal {other}"))),
        }
    }
}

/// Build the scalar for an algebraic descriptor. Degrees 1 and 2 normalize to
/// the rational / quadratic kinds so their exact zero tests stay available;
/// higher degrees keep the isolating-interval representation.
fn algebraic_scalar(minpoly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Scalar, ScalarError> {
    let mut mp = minpoly;
    while mp.last().map(|c| c.is_zero()).unwrap_or(false) {
        mp.pop();
    }
    match mp.len() {
        0 | 1 => Err(ScalarError::InvalidDescriptor("minimal polynomial must have degree >= 1".into())),
        2 => {
            let root = BigRational::new(-mp[0].clone(), mp[1].clone());
            if root < lo || root > hi {
                return Err(ScalarError::InvalidDescriptor("isolating interval misses the root".into()));
            }
            Ok(Scalar::Rat(root))
        }
        3 => {
            // roots (-b ± sqrt(b^2 - 4ac)) / 2a in Q(sqrt(disc))
            let a = BigRational::from(mp[2].clone());
            let b = BigRational::from(mp[1].clone());
            let c = BigRational::from(mp[0].clone());
            let disc = &b * &b - BigRational::from(BigInt::from(4)) * &a * &c;
            if !disc.is_positive() {
                return Err(ScalarError::InvalidDescriptor(
                    "quadratic has no real irrational root in the interval".into(),
                ));
            }
            // sqrt(p/q) = sqrt(p*q)/q
            let pq = disc.numer() * disc.denom();
            let sqrt_disc = QuadExt::sqrt_term(
                BigRational::new(BigInt::one(), disc.denom().clone()),
                pq.magnitude(),
            );
            let two_a = BigRational::from(BigInt::from(2)) * &a;
            let scale = QuadExt::from_rational(two_a.recip());
            let base = QuadExt::from_rational(-b);
            for cand in [base.add(&sqrt_disc), base.sub(&sqrt_disc)] {
                let root = cand.mul(&scale);
                let in_lo = root.sub(&QuadExt::from_rational(lo.clone())).sign() >= 0;
                let in_hi = QuadExt::from_rational(hi.clone()).sub(&root).sign() >= 0;
                if in_lo && in_hi {
                    return Ok(Scalar::Quad(root).normalized());
                }
            }
            Err(ScalarError::InvalidDescriptor("isolating interval misses both roots".into()))
        }
        _ => {
            let gen = Arc::new(AlgGen::new(mp, lo, hi)?);
            Ok(Scalar::Alg(AlgExt::theta(gen)))
        }
    }
}

// ---------------------------------------------------------------------------
// Complex values

/// A complex number with certified real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl CScalar {
    pub fn zero() -> Self {
        CScalar { re: Scalar::zero(), im: Scalar::zero() }
    }

    pub fn real(re: Scalar) -> Self {
        CScalar { re, im: Scalar::zero() }
    }

    pub fn imaginary(im: Scalar) -> Self {
        CScalar { re: Scalar::zero(), im }
    }

    pub fn i() -> Self {
        CScalar::imaginary(Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_evidence(&self) -> bool {
        self.re.is_evidence() || self.im.is_evidence()
    }

    pub fn conj(&self) -> Self {
        CScalar { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        CScalar { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(CScalar { re: self.re.add(&o.re)?, im: self.im.add(&o.im)? })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(CScalar { re: self.re.sub(&o.re)?, im: self.im.sub(&o.im)? })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ScalarError> {
        let re = self.re.mul(&o.re)?.sub(&self.im.mul(&o.im)?)?;
        let im = self.re.mul(&o.im)?.add(&self.im.mul(&o.re)?)?;
        Ok(CScalar { re, im })
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self, ScalarError> {
        Ok(CScalar { re: self.re.mul(s)?, im: self.im.mul(s)? })
    }

    /// |z|^2 as a certified real.
    pub fn norm_sq(&self) -> Result<Scalar, ScalarError> {
        self.re.mul(&self.re)?.add(&self.im.mul(&self.im)?)
    }

    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        let n = o.norm_sq()?;
        if n.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let num = self.mul(&o.conj())?;
        Ok(CScalar { re: num.re.div(&n)?, im: num.im.div(&n)? })
    }

    pub fn cert_zero(&self) -> Sign {
        match (self.re.cert_sign(), self.im.cert_sign()) {
            (Sign::Zero, Sign::Zero) => Sign::Zero,
            (Sign::Undecided, _) | (_, Sign::Undecided) => Sign::Undecided,
            _ => Sign::Positive, // nonzero
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Parse {"re": <scalar literal>, "im": <scalar literal>}; a bare scalar
    /// literal is taken as real.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        if let serde_json::Value::Object(map) = v {
            if map.contains_key("re") || map.contains_key("im") {
                let re = map
                    .get("re")
                    .map(ScalarDescriptor::from_json)
                    .transpose()?
                    .unwrap_or_else(Scalar::zero);
                let im = map
                    .get("im")
                    .map(ScalarDescriptor::from_json)
                    .transpose()?
                    .unwrap_or_else(Scalar::zero);
                return Ok(CScalar { re, im });
            }
        }
        Ok(CScalar::real(ScalarDescriptor::from_json(v)?))
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

// ---------------------------------------------------------------------------
// Rational decomposition over a shared irrational basis

/// Basis element for writing exact scalars as rational linear combinations:
/// 1, the square roots of distinct square-free integers, powers of a single
/// algebraic generator, or powers of a single lacunary generator. Within one
/// [`LinearBasis`] these are jointly linearly independent over the rationals,
/// which is what makes linear integrality questions decidable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisKey {
    One,
    Sqrt(BigUint),
    AlgPow(u32),
    LacPow(u32),
}

/// Tracks which irrational generators a family of scalars uses, and rejects
/// combinations whose joint independence over the rationals is not
/// guaranteed (two distinct algebraic generators, or square roots mixed with
/// a higher-degree algebraic generator).
#[derive(Debug, Default, Clone)]
pub struct LinearBasis {
    alg: Option<Arc<AlgGen>>,
    lac: Option<Arc<LacGen>>,
    has_sqrt: bool,
}

impl LinearBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Decompose a scalar into rational coordinates over the shared basis.
    /// Fails with `IncompatibleScalars` when independence cannot be
    /// guaranteed, and `Undecided` for float-tagged values.
    pub fn decompose(&mut self, s: &Scalar) -> Result<Vec<(BasisKey, BigRational)>, ScalarError> {
        match s {
            Scalar::Rat(r) => Ok(if r.is_zero() { vec![] } else { vec![(BasisKey::One, r.clone())] }),
            Scalar::Quad(q) => {
                if self.alg.is_some() {
                    return Err(ScalarError::IncompatibleScalars);
                }
                self.has_sqrt = self.has_sqrt || q.terms.keys().any(|r| !r.is_one());
                Ok(q
                    .terms
                    .iter()
                    .map(|(rad, c)| {
                        let key = if rad.is_one() { BasisKey::One } else { BasisKey::Sqrt(rad.clone()) };
                        (key, c.clone())
                    })
                    .collect())
            }
            Scalar::Alg(a) => {
                if self.has_sqrt {
                    return Err(ScalarError::IncompatibleScalars);
                }
                match &self.alg {
                    Some(g) if **g != *a.gen => return Err(ScalarError::IncompatibleScalars),
                    Some(_) => {}
                    None => self.alg = Some(a.gen.clone()),
                }
                Ok(a
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| {
                        let key = if i == 0 { BasisKey::One } else { BasisKey::AlgPow(i as u32) };
                        (key, c.clone())
                    })
                    .collect())
            }
            Scalar::Lac(l) => {
                match &self.lac {
                    Some(g) if **g != *l.gen => return Err(ScalarError::IncompatibleScalars),
                    Some(_) => {}
                    None => self.lac = Some(l.gen.clone()),
                }
                Ok(l
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| {
                        let key = if i == 0 { BasisKey::One } else { BasisKey::LacPow(i as u32) };
                        (key, c.clone())
                    })
                    .collect())
            }
            Scalar::Float { .. } => Err(ScalarError::Undecided),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Scalar {
        Scalar::sqrt_of(2)
    }

    #[test]
    fn refine_rational_exact() {
        let s = Scalar::Rat(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let e = s.refine(3).unwrap();
        assert!(e.exact);
        assert_eq!(e.lo, e.hi);
        assert_eq!(e.render(3), "0.500");
    }

    #[test]
    fn refine_sqrt2() {
        let e = sqrt2().refine(5).unwrap();
        assert!(e.width() <= ulp(5));
        let s = e.render(5);
        assert!(s.starts_with("1.4142"), "got {s}");
    }

    #[test]
    fn cert_sign_exact_identities() {
        // sqrt2 * sqrt2 - 2 == 0
        let x = sqrt2().mul(&sqrt2()).unwrap().sub(&Scalar::from_int(2)).unwrap();
        assert_eq!(x.cert_sign(), Sign::Zero);
        // 3 sqrt2 - 4 > 0
        let y = Scalar::from_int(3).mul(&sqrt2()).unwrap().sub(&Scalar::from_int(4)).unwrap();
        assert_eq!(y.cert_sign(), Sign::Positive);
    }

    #[test]
    fn float_taints_and_straddles() {
        let f = Scalar::Float {
            lo: parse_rational("1.41421").unwrap(),
            hi: parse_rational("1.41422").unwrap(),
        };
        let z = f.sub(&sqrt2()).unwrap();
        assert!(z.is_evidence());
        assert_eq!(z.cert_sign(), Sign::Undecided);
    }

    #[test]
    fn float_refine_uncertifiable() {
        let f = Scalar::Float {
            lo: parse_rational("1.4").unwrap(),
            hi: parse_rational("1.5").unwrap(),
        };
        assert_eq!(f.refine(7).unwrap_err(), ScalarError::Uncertifiable);
    }

    #[test]
    fn liouville_bound_sqrt2_bruteforce() {
        // enclosure of |q sqrt2 - p| respects the bound for small p, q
        for q in 1i64..=50 {
            let c = liouville_lower_bound(&sqrt2(), &BigInt::from(q)).unwrap();
            assert!(c.is_positive());
            for p in 0i64..=100 {
                let gap = Scalar::from_int(q)
                    .mul(&sqrt2())
                    .unwrap()
                    .sub(&Scalar::from_int(p))
                    .unwrap();
                let e = gap.enclosure(30).unwrap();
                let lo_abs = e.lo.abs().min(e.hi.abs());
                assert!(
                    lo_abs >= c,
                    "violated at p={p} q={q}: |gap| ~ {} < {c}",
                    lo_abs
                );
            }
        }
    }

    #[test]
    fn liouville_rejects_rationals() {
        let r = Scalar::from_int(1);
        assert_eq!(
            liouville_lower_bound(&r, &BigInt::from(3)).unwrap_err(),
            ScalarError::NotAlgebraic
        );
    }

    #[test]
    fn descriptor_parsing_all_kinds() {
        let cases = [
            (r#"{"kind":"rational","num":"1","den":"2"}"#, "rational"),
            (r#"{"kind":"quadratic","a":"0","b":"1","D":2}"#, "quadratic"),
            (r#"{"kind":"algebraic","minpoly":[-2,0,0,1],"interval":["1","2"]}"#, "algebraic"),
            (r#"{"kind":"lacunary","rule":"factorial-pow10"}"#, "lacunary"),
            (r#"{"kind":"float","value":"1.4142135","err":"1e-7"}"#, "float"),
        ];
        for (json, kind) in cases {
            let v: serde_json::Value = serde_json::from_str(json).unwrap();
            let s = ScalarDescriptor::from_json(&v).unwrap();
            assert_eq!(s.kind(), kind, "for {json}");
        }
        // degree-2 algebraic descriptor lands in the quadratic kind
        let v: serde_json::Value =
            serde_json::from_str(r#"{"kind":"algebraic","minpoly":[-2,0,1],"interval":["1","2"]}"#).unwrap();
        let s = ScalarDescriptor::from_json(&v).unwrap();
        assert_eq!(s.kind(), "quadratic");
        let diff = s.sub(&Scalar::sqrt_of(2)).unwrap();
        assert_eq!(diff.cert_sign(), Sign::Zero);
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(parse_rational("-3.5e2").unwrap(), BigRational::from(BigInt::from(-350)));
        assert_eq!(parse_rational("1e-7").unwrap(), BigRational::new(BigInt::one(), BigInt::from(10_000_000)));
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn complex_mul_div_roundtrip() {
        let a = CScalar { re: Scalar::from_int(3), im: sqrt2() };
        let b = CScalar { re: sqrt2(), im: Scalar::from_int(-1) };
        let prod = a.mul(&b).unwrap();
        let back = prod.div(&b).unwrap();
        assert_eq!(back.sub(&a).unwrap().cert_zero(), Sign::Zero);
    }

    #[test]
    fn lacunary_descriptor_refines() {
        let v: serde_json::Value = serde_json::from_str(r#"{"kind":"lacunary","rule":"factorial-pow10"}"#).unwrap();
        let s = ScalarDescriptor::from_json(&v).unwrap();
        let e = s.refine(12).unwrap();
        assert!(e.width() <= ulp(12));
        // value starts 0.0000000001 (first term 10^-10)
        assert!(e.lo >= ulp(10));
        assert!(e.hi < ulp(9));
    }
}
