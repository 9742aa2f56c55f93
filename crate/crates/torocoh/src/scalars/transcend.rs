//! Certified rational enclosures of the transcendental constants and
//! elementary functions the rest of the crate needs: pi, exp, ln and
//! decimal logarithms. Everything returns outward-rounded rational bounds.

use num::{BigInt, BigRational, One, Signed, Zero};

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// 10^{-digits} as a rational.
pub fn ulp(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow10(digits))
}

/// Enclosure of arctan(1/x) for integer x >= 2, to the requested accuracy.
/// Alternating Gregory series; truncation error is bounded by the first
/// omitted term.
fn atan_inv(x: u64, digits: u32) -> (BigRational, BigRational) {
    let eps = ulp(digits + 1);
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut term = BigRational::new(BigInt::one(), x.clone());
    let mut sum = BigRational::zero();
    let mut k: u64 = 0;
    loop {
        let contrib = &term / BigRational::from(BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum += &contrib;
        } else {
            sum -= &contrib;
        }
        term /= BigRational::from(x2.clone());
        let next = &term / BigRational::from(BigInt::from(2 * k + 3));
        if next < eps {
            // alternating series: error within the first omitted term
            if k % 2 == 0 {
                return (sum.clone() - next, sum);
            } else {
                return (sum.clone(), sum + next);
            }
        }
        k += 1;
    }
}

/// Certified enclosure of pi with width <= 10^{-digits} (Machin's formula).
pub fn pi_enclosure(digits: u32) -> (BigRational, BigRational) {
    let d = digits + 2;
    let (a_lo, a_hi) = atan_inv(5, d);
    let (b_lo, b_hi) = atan_inv(239, d);
    let sixteen = BigRational::from(BigInt::from(16));
    let four = BigRational::from(BigInt::from(4));
    (&sixteen * &a_lo - &four * &b_hi, &sixteen * &a_hi - &four * &b_lo)
}

/// Enclosure of exp(x) for rational x, width <= 10^{-digits} relative-ish.
/// Argument is halved until |x| <= 1/2, then Taylor with a geometric tail
/// bound, then squared back up.
pub fn exp_enclosure(x: &BigRational, digits: u32) -> (BigRational, BigRational) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut halvings = 0u32;
    let mut y = x.clone();
    while y.abs() > half {
        y /= BigRational::from(BigInt::from(2));
        halvings += 1;
        if halvings > 64 {
            // |x| > 2^64 is outside any sensible use here
            break;
        }
    }
    let d = digits + 2 * halvings + 4;
    let eps = ulp(d);
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let mut k: u64 = 1;
    loop {
        term = term * &y / BigRational::from(BigInt::from(k as i64));
        sum += &term;
        // |y| <= 1/2 so the tail is bounded by |term| * sum of (1/2)^j = |term|
        if term.abs() < eps {
            break;
        }
        k += 1;
    }
    let mut lo = &sum - term.abs();
    let mut hi = &sum + term.abs();
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    for _ in 0..halvings {
        let (nl, nh) = (&lo * &lo, &hi * &hi);
        lo = nl;
        hi = nh;
    }
    // keep representations small for downstream exact arithmetic
    (
        round_sig_rat(&lo, digits + 10, false),
        round_sig_rat(&hi, digits + 10, true),
    )
}

/// Directed rounding to at most `sig` significant decimal digits. `up`
/// rounds toward +infinity, otherwise toward -infinity.
pub fn round_sig_rat(x: &BigRational, sig: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let neg = x.is_negative();
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let dn = num.to_str_radix(10).len() as i64;
    let dd = den.to_str_radix(10).len() as i64;
    let shift = sig as i64 - (dn - dd);
    let ten = num::BigUint::from(10u32);
    let (scaled_num, scaled_den) = if shift >= 0 {
        (num * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), den * ten.pow((-shift) as u32))
    };
    let (q, r) = (
        &scaled_num / &scaled_den,
        &scaled_num % &scaled_den,
    );
    // round magnitude up when the directed rounding moves away from zero
    let away = up != neg;
    let q = if away && !r.is_zero() { q + num::BigUint::from(1u32) } else { q };
    let mag = if shift >= 0 {
        BigRational::new(BigInt::from(q), BigInt::from(ten.pow(shift as u32)))
    } else {
        BigRational::from(BigInt::from(q * ten.pow((-shift) as u32)))
    };
    if neg {
        -mag
    } else {
        mag
    }
}

/// Enclosure of log10(x) for a positive rational x, width <= 2^-prec-ish.
/// Uses the power trick: 10^k <= x^N < 10^{k+1} gives log10 x in [k/N,(k+1)/N].
pub fn log10_enclosure(x: &BigRational, prec_bits: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive(), "log10 of non-positive rational");
    let n: u32 = prec_bits.clamp(4, 16);
    let nn = 1u64 << n; // x^(2^n)
    // mantissa/exponent chains with directed truncation at every squaring so
    // repeated squaring never materializes astronomically long integers
    let mut lo = Mantissa::from_rat(x, false);
    let mut hi = Mantissa::from_rat(x, true);
    for _ in 0..n {
        lo = lo.square(false);
        hi = hi.square(true);
    }
    // lo.value <= x^{2^n} <= hi.value: floor/ceil of log10 from the mantissa
    let k_lo = lo.floor_log10();
    let k_hi = hi.floor_log10() + 1;
    (
        BigRational::new(BigInt::from(k_lo), BigInt::from(nn)),
        BigRational::new(BigInt::from(k_hi), BigInt::from(nn)),
    )
}

/// Positive value mant * 10^exp with a short integer mantissa; directed
/// rounding keeps every operation outward-safe.
struct Mantissa {
    mant: BigInt,
    exp: i64,
}

impl Mantissa {
    const SIG: i64 = 48;

    fn from_rat(x: &BigRational, up: bool) -> Mantissa {
        let num = x.numer().magnitude();
        let den = x.denom().magnitude();
        let dn = num.to_str_radix(10).len() as i64;
        let dd = den.to_str_radix(10).len() as i64;
        let shift = Self::SIG - (dn - dd);
        let ten = num::BigUint::from(10u32);
        let (sn, sd) = if shift >= 0 {
            (num * ten.pow(shift as u32), den.clone())
        } else {
            (num.clone(), den * ten.pow((-shift) as u32))
        };
        let (q, r) = (&sn / &sd, &sn % &sd);
        let q = if up && !r.is_zero() { q + num::BigUint::from(1u32) } else { q };
        let q = if q.is_zero() { num::BigUint::from(1u32) } else { q };
        Mantissa { mant: BigInt::from(q), exp: -shift }
    }

    fn square(&self, up: bool) -> Mantissa {
        let prod = &self.mant * &self.mant;
        let digits = prod.magnitude().to_str_radix(10).len() as i64;
        let drop = (digits - Self::SIG).max(0);
        let ten = BigInt::from(10);
        let scale = ten.pow(drop as u32);
        let (q, r) = (&prod / &scale, &prod % &scale);
        let q = if up && !r.is_zero() { q + BigInt::one() } else { q };
        Mantissa { mant: q, exp: 2 * self.exp + drop }
    }

    /// k with 10^k <= value (exact from the representation).
    fn floor_log10(&self) -> i64 {
        let d = self.mant.magnitude().to_str_radix(10).len() as i64;
        d - 1 + self.exp
    }
}

/// Enclosure of ln(x) for positive rational x via ln x = log10 x * ln 10.
pub fn ln_enclosure(x: &BigRational, prec_bits: u32) -> (BigRational, BigRational) {
    let (l10_lo, l10_hi) = log10_enclosure(x, prec_bits);
    let (ln10_lo, ln10_hi) = ln10_bounds();
    let cands = [
        &l10_lo * &ln10_lo,
        &l10_lo * &ln10_hi,
        &l10_hi * &ln10_lo,
        &l10_hi * &ln10_hi,
    ];
    let lo = cands.iter().min().unwrap().clone();
    let hi = cands.iter().max().unwrap().clone();
    (lo, hi)
}

fn rat(num: &str, den_pow10: u32) -> BigRational {
    BigRational::new(num.parse::<BigInt>().unwrap(), pow10(den_pow10))
}

/// ln 10 to 30 digits, outward rounded.
pub fn ln10_bounds() -> (BigRational, BigRational) {
    (
        rat("2302585092994045684017991454684", 30),
        rat("2302585092994045684017991454685", 30),
    )
}

/// log10 2 to 30 digits, outward rounded.
pub fn log10_2_bounds() -> (BigRational, BigRational) {
    (
        rat("301029995663981195213738894724", 30),
        rat("301029995663981195213738894725", 30),
    )
}

/// log10 e to 30 digits, outward rounded.
pub fn log10_e_bounds() -> (BigRational, BigRational) {
    (
        rat("434294481903251827651128918916", 30),
        rat("434294481903251827651128918917", 30),
    )
}
