//! Real algebraic numbers presented by an integer minimal polynomial and an
//! isolating interval, and arithmetic in the field Q(theta) they generate.
//!
//! Irreducibility of the minimal polynomial is asserted by the caller (the
//! published input contract); under that assertion the zero test on
//! polynomial representatives is exact and sign decisions are certified by
//! interval bisection.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::sync::Arc;

use super::transcend::ulp;
use super::ScalarError;

/// Hard cap on bisection steps before reporting a stalled refinement.
pub const MAX_BISECTIONS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgGen {
    /// Integer coefficients, low degree first; degree >= 3 here (lower
    /// degrees normalize to rationals or quadratic extensions upstream).
    pub minpoly: Vec<BigInt>,
    /// Isolating interval with a sign change at the endpoints.
    pub lo: BigRational,
    pub hi: BigRational,
}

impl AlgGen {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn new(minpoly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Self, ScalarError> {
        let mut mp = minpoly;
        while mp.last().map(|c| c.is_zero()).unwrap_or(false) {
            mp.pop();
        }
        if mp.len() < 2 {
            return Err(ScalarError::InvalidDescriptor("minimal polynomial must have degree >= 1".into()));
        }
        if lo > hi {
            return Err(ScalarError::InvalidDescriptor("isolating interval endpoints out of order".into()));
        }
        let gen = AlgGen { minpoly: mp, lo, hi };
        let flo = gen.eval_rational(&gen.lo);
        let fhi = gen.eval_rational(&gen.hi);
        if flo.is_zero() || fhi.is_zero() {
            return Err(ScalarError::InvalidDescriptor(
                "isolating interval endpoint is a root; shrink or use a rational kind".into(),
            ));
        }
        if flo.is_positive() == fhi.is_positive() {
            return Err(ScalarError::NonConvergent);
        }
        Ok(gen)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.minpoly.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Shrink the isolating interval to width <= 10^{-digits} by bisection.
    pub fn refine_root(&self, digits: u32) -> Result<(BigRational, BigRational), ScalarError> {
        let target = ulp(digits);
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let sign_lo = self.eval_rational(&lo).is_positive();
        let mut sign_lo = sign_lo;
        let mut steps = 0u64;
        while &hi - &lo > target {
            let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
            let fm = self.eval_rational(&mid);
            if fm.is_zero() {
                // rational root contradicts irreducibility of degree >= 2;
                // treat as a bad certificate
                return Err(ScalarError::NonConvergent);
            }
            if fm.is_positive() == sign_lo {
                lo = mid;
                sign_lo = fm.is_positive();
            } else {
                hi = mid;
            }
            steps += 1;
            if steps > MAX_BISECTIONS {
                return Err(ScalarError::NonConvergent);
            }
        }
        Ok((lo, hi))
    }
}

/// Element of Q(theta): a polynomial in theta of degree < deg(minpoly)
/// with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgExt {
    pub gen: Arc<AlgGen>,
    /// Low degree first, trailing zeros trimmed.
    pub coeffs: Vec<BigRational>,
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

impl AlgExt {
    pub fn from_rational(gen: Arc<AlgGen>, r: BigRational) -> Self {
        AlgExt { gen, coeffs: trim(vec![r]) }
    }

    pub fn theta(gen: Arc<AlgGen>) -> Self {
        AlgExt { gen, coeffs: vec![BigRational::zero(), BigRational::one()] }
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
        Ok(AlgExt { gen: self.gen.clone(), coeffs: trim(out) })
    }

    pub fn neg(&self) -> Self {
        AlgExt { gen: self.gen.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.add(&other.neg())
    }

    /// Monic rational image of the minimal polynomial.
    fn monic_minpoly(&self) -> Vec<BigRational> {
        let lead = BigRational::from(self.gen.minpoly.last().unwrap().clone());
        self.gen
            .minpoly
            .iter()
            .map(|c| BigRational::from(c.clone()) / &lead)
            .collect()
    }

    fn reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.gen.degree();
        let mp = self.monic_minpoly();
        while poly.len() > deg {
            let k = poly.len() - 1;
            let c = poly[k].clone();
            if !c.is_zero() {
                // x^k = -(mp[0..deg]) * x^{k-deg} modulo minpoly
                for j in 0..deg {
                    let adj = &c * &mp[j];
                    poly[k - deg + j] -= adj;
                }
            }
            poly.pop();
        }
        trim(poly)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if !self.same_gen(other) {
            return Err(ScalarError::IncompatibleScalars);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(AlgExt { gen: self.gen.clone(), coeffs: vec![] });
        }
        let mut prod = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(AlgExt { gen: self.gen.clone(), coeffs: self.reduce(prod) })
    }

    /// Inverse modulo the minimal polynomial via the extended Euclidean
    /// algorithm; the gcd is 1 because the minimal polynomial is irreducible.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mp = self.monic_minpoly();
        let (mut r0, mut r1) = (mp, self.coeffs.clone());
        let (mut t0, mut t1) = (vec![], vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        // r0 is a nonzero constant gcd
        if r0.len() != 1 {
            return Err(ScalarError::IncompatibleScalars);
        }
        let scale = r0[0].clone().recip();
        let coeffs = t0.into_iter().map(|c| c * &scale).collect::<Vec<_>>();
        Ok(AlgExt { gen: self.gen.clone(), coeffs: self.reduce(coeffs) })
    }

    /// Enclosure of the value by interval Horner evaluation over a refined
    /// root interval.
    pub fn enclosure(&self, digits: u32) -> Result<(BigRational, BigRational), ScalarError> {
        if let Some(r) = self.as_rational() {
            return Ok((r.clone(), r));
        }
        // crude magnitude bound on coefficients to pick working precision
        let extra = 2 + self.coeffs.len() as u32;
        let mut d = digits + extra;
        loop {
            let (tlo, thi) = self.gen.refine_root(d)?;
            let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
            for c in self.coeffs.iter().rev() {
                let cands = [&lo * &tlo, &lo * &thi, &hi * &tlo, &hi * &thi];
                let nlo = cands.iter().min().unwrap().clone() + BigRational::from(BigInt::zero());
                let nhi = cands.iter().max().unwrap().clone();
                lo = nlo + c;
                hi = nhi + c;
            }
            if &hi - &lo <= ulp(digits) {
                return Ok((lo, hi));
            }
            d += digits.max(8);
            if d > 100_000 {
                return Err(ScalarError::NonConvergent);
            }
        }
    }

    /// Certified sign; the exact zero test is representation emptiness.
    pub fn sign(&self) -> Result<i8, ScalarError> {
        if self.is_zero() {
            return Ok(0);
        }
        if let Some(r) = self.as_rational() {
            return Ok(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            });
        }
        let mut digits = 10u32;
        loop {
            let (lo, hi) = self.enclosure(digits)?;
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            digits *= 2;
            if digits > 1 << 18 {
                return Err(ScalarError::NonConvergent);
            }
        }
    }
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let dr = rem.len() - 1;
        let c = rem[dr].clone() / &lead;
        if !c.is_zero() {
            quot[dr - db] = c.clone();
            for j in 0..=db {
                let adj = &c * &b[j];
                rem[dr - db + j] -= adj;
            }
        }
        rem.pop();
        while rem.last().map(|x| x.is_zero()).unwrap_or(false) {
            rem.pop();
        }
        if rem.len() <= db {
            break;
        }
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}
