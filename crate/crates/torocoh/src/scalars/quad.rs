//! Arithmetic in multi-quadratic extensions of the rationals.
//!
//! A value is a finite sum  sum_s c_s * sqrt(s)  over square-free positive
//! integers s, with rational coefficients. This is closed under the four
//! field operations and has a decidable, certified zero test: the square
//! roots of distinct square-free integers are linearly independent over Q.

use super::transcend::ulp;
use num::{BigInt, BigRational, BigUint, One, Signed, Zero};
use std::collections::BTreeMap;

/// Square-free decomposition n = f^2 * s; returns (f, s).
pub fn squarefree_part(n: &BigUint) -> (BigUint, BigUint) {
    let mut f = BigUint::one();
    let mut s = BigUint::one();
    let mut n = n.clone();
    let two = BigUint::from(2u32);
    let mut p = two.clone();
    // trial division; radicands here stay small in practice
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= &p;
            }
        }
        p += if p == two { BigUint::one() } else { BigUint::from(2u32) };
    }
    if n > BigUint::one() {
        s *= n;
    }
    (f, s)
}

/// Element of a multi-quadratic extension. Keys are square-free radicands
/// (1 for the rational part); zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub terms: BTreeMap<BigUint, BigRational>,
}

impl QuadExt {
    pub fn zero() -> Self {
        QuadExt { terms: BTreeMap::new() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut q = QuadExt::zero();
        q.insert(BigUint::one(), r);
        q
    }

    /// c * sqrt(d); d is reduced to square-free form.
    pub fn sqrt_term(c: BigRational, d: &BigUint) -> Self {
        let (f, s) = squarefree_part(d);
        let mut q = QuadExt::zero();
        q.insert(s, c * BigRational::from(BigInt::from(f)));
        q
    }

    fn insert(&mut self, rad: BigUint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(rad.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&rad);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&BigUint::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (rad, c) in &other.terms {
            out.insert(rad.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QuadExt { terms: self.terms.iter().map(|(r, c)| (r.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = QuadExt::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &other.terms {
                // sqrt(r1)*sqrt(r2) = g * sqrt(r1*r2/g^2), g = gcd(r1,r2)
                let g = num::integer::gcd(r1.clone(), r2.clone());
                let rad = (r1 / &g) * (r2 / &g);
                let coef = c1 * c2 * BigRational::from(BigInt::from(g));
                out.insert(rad, coef);
            }
        }
        out
    }

    /// Multiplicative inverse. Radical primes are eliminated one at a time by
    /// conjugation; the final denominator is rational.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut num = QuadExt::from_rational(BigRational::one());
        let mut den = self.clone();
        loop {
            if let Some(r) = den.as_rational() {
                if r.is_zero() {
                    // impossible for a nonzero element: conjugates of a nonzero
                    // element are nonzero, so the rational norm is nonzero
                    return None;
                }
                return Some(num.mul(&QuadExt::from_rational(r.recip())));
            }
            // pick a prime dividing some radicand > 1
            let rad = den.terms.keys().find(|r| **r > BigUint::one()).unwrap().clone();
            let p = smallest_prime_factor(&rad);
            let mut keep = QuadExt::zero();
            let mut flip = QuadExt::zero();
            for (r, c) in &den.terms {
                if (r % &p).is_zero() {
                    flip.insert(r.clone(), c.clone());
                } else {
                    keep.insert(r.clone(), c.clone());
                }
            }
            let conj = keep.sub(&flip);
            num = num.mul(&conj);
            den = den.mul(&conj);
        }
    }

    /// Enclosure of the value with width <= 10^{-digits}.
    pub fn enclosure(&self, digits: u32) -> (BigRational, BigRational) {
        let nterms = self.terms.len().max(1) as u32;
        let extra = 1 + nterms.ilog10().max(0) as u32 + 1;
        let d = digits + extra;
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (rad, c) in &self.terms {
            if rad.is_one() {
                lo += c;
                hi += c;
            } else {
                let (slo, shi) = sqrt_enclosure(rad, d);
                if c.is_positive() {
                    lo += c * &slo;
                    hi += c * &shi;
                } else {
                    lo += c * &shi;
                    hi += c * &slo;
                }
            }
        }
        (lo, hi)
    }

    /// Certified sign. Zero exactly when the representation is empty.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        let mut digits = 10u32;
        loop {
            let (lo, hi) = self.enclosure(digits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            digits *= 2;
            // nonzero multi-quadratic values are bounded away from zero,
            // so this terminates; the cap guards against blowups only
            assert!(digits < 1 << 20, "sign refinement runaway on nonzero element");
        }
    }
}

fn smallest_prime_factor(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return two;
    }
    let mut p = BigUint::from(3u32);
    while &p * &p <= *n {
        if (n % &p).is_zero() {
            return p;
        }
        p += BigUint::from(2u32);
    }
    n.clone()
}

/// sqrt(rad) in [isqrt(rad*10^2d)/10^d, (isqrt+1)/10^d].
pub fn sqrt_enclosure(rad: &BigUint, digits: u32) -> (BigRational, BigRational) {
    let scale = BigUint::from(10u32).pow(digits);
    let scaled = rad * &scale * &scale;
    let r = scaled.sqrt();
    let denom = BigInt::from(scale);
    (
        BigRational::new(BigInt::from(r.clone()), denom.clone()),
        BigRational::new(BigInt::from(r + BigUint::one()), denom),
    )
}

/// Enclosure width sanity for refine contracts.
pub fn enclosure_within(lo: &BigRational, hi: &BigRational, digits: u32) -> bool {
    hi - lo <= ulp(digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let s2 = QuadExt::sqrt_term(BigRational::one(), &BigUint::from(2u32));
        let prod = s2.mul(&s2);
        assert_eq!(prod.as_rational(), Some(q(2, 1)));
    }

    #[test]
    fn mixed_radicals_inverse() {
        // x = 1 + sqrt(2) + sqrt(3); x * x^-1 = 1
        let mut x = QuadExt::from_rational(BigRational::one());
        x = x.add(&QuadExt::sqrt_term(BigRational::one(), &BigUint::from(2u32)));
        x = x.add(&QuadExt::sqrt_term(BigRational::one(), &BigUint::from(3u32)));
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv).as_rational(), Some(BigRational::one()));
    }

    #[test]
    fn sign_decisions() {
        // 3*sqrt(2) - 4 > 0
        let e = QuadExt::sqrt_term(q(3, 1), &BigUint::from(2u32))
            .sub(&QuadExt::from_rational(q(4, 1)));
        assert_eq!(e.sign(), 1);
        // sqrt(8) - 2 sqrt(2) = 0 through square-free reduction
        let z = QuadExt::sqrt_term(BigRational::one(), &BigUint::from(8u32))
            .sub(&QuadExt::sqrt_term(q(2, 1), &BigUint::from(2u32)));
        assert!(z.is_zero());
    }

    #[test]
    fn enclosure_contains_sqrt2() {
        let s2 = QuadExt::sqrt_term(BigRational::one(), &BigUint::from(2u32));
        let (lo, hi) = s2.enclosure(12);
        assert!(enclosure_within(&lo, &hi, 12));
        let v = 2f64.sqrt();
        assert!(num::ToPrimitive::to_f64(&lo).unwrap() <= v);
        assert!(num::ToPrimitive::to_f64(&hi).unwrap() >= v);
    }
}
