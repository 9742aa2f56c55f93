//! Lattice-index bookkeeping: the spectral shifts K_sigma and
//! Ktilde_sigma, the pivot index, the exceptional index sigma_0 solving
//! K_sigma + d(L) = 0, the punctured index set Z, and the floor constant m0.
//!
//! A factor pi is kept symbolic throughout: the fields named *_over_pi hold
//! the exact value divided by pi, which is enough for all comparisons (pi
//! cancels) and re-enters only in decimal renderings.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::bundle::BundleInvariants;
use crate::linalg::{self, QMat};
use crate::scalars::{
    BasisKey, CScalar, Enclosure, LinearBasis, Scalar, ScalarError, Sign,
};
use crate::torus::RealCoordFrame;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("lattice index: {0}")]
    Invalid(String),
    #[error("magnitude tie undecidable at available precision")]
    UndecidedTie,
    #[error("exceptional-index solve needs exact scalars; got float-tagged data")]
    Uncertified,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// sigma in Z^{n+m} split as (sigma' in Z^m, sigma'' in Z^{n-m}, sigma''' in Z^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIndex {
    pub sigma: Vec<BigInt>,
    pub n: usize,
    pub m: usize,
}

impl LatticeIndex {
    pub fn new(sigma: Vec<BigInt>, n: usize, m: usize) -> Result<Self, SpectralError> {
        if sigma.len() != n + m {
            return Err(SpectralError::Invalid(format!(
                "index must have n+m = {} components, got {}",
                n + m,
                sigma.len()
            )));
        }
        Ok(LatticeIndex { sigma, n, m })
    }

    pub fn from_i64(sigma: &[i64], n: usize, m: usize) -> Result<Self, SpectralError> {
        Self::new(sigma.iter().map(|x| BigInt::from(*x)).collect(), n, m)
    }

    /// first n components (sigma', sigma'')
    pub fn head(&self) -> &[BigInt] {
        &self.sigma[..self.n]
    }

    /// last m components sigma'''
    pub fn tail(&self) -> &[BigInt] {
        &self.sigma[self.n..]
    }

    pub fn l1(&self) -> BigInt {
        self.sigma.iter().map(|x| x.abs()).sum()
    }

    pub fn l1_head(&self) -> BigInt {
        self.head().iter().map(|x| x.abs()).sum()
    }

    /// |sigma''| over the C*-directions m+1..n
    pub fn l1_second(&self) -> BigInt {
        self.sigma[self.m..self.n].iter().map(|x| x.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.sigma.iter().all(|x| x.is_zero())
    }
}

/// The shift vectors attached to one lattice index.
#[derive(Debug, Clone)]
pub struct SpectralShift {
    pub index: LatticeIndex,
    /// K_sigma = (sigma', sigma'') S - sigma'''
    pub k: Vec<CScalar>,
    /// Ktilde_sigma / pi = K_sigma C1
    pub ktilde_over_pi: Vec<CScalar>,
    /// (Ktilde_sigma + beta) / pi
    pub shifted_over_pi: Vec<CScalar>,
    /// K_sigma + d(L)
    pub k_plus_dl: Vec<CScalar>,
}

pub fn k_sigma(
    index: &LatticeIndex,
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
) -> Result<SpectralShift, SpectralError> {
    let (n, m) = (frame.n, frame.m);
    if index.n != n || index.m != m {
        return Err(SpectralError::Invalid("index shape does not match the group".into()));
    }
    let mut k = Vec::with_capacity(m);
    for col in 0..m {
        let mut acc = CScalar::zero();
        for l in 0..n {
            let s_lk = CScalar { re: frame.a[l][col].clone(), im: frame.b[l][col].clone() };
            acc = acc.add(&s_lk.scale(&Scalar::from_bigint(index.sigma[l].clone()))?)?;
        }
        acc = acc.sub(&CScalar::real(Scalar::from_bigint(index.sigma[n + col].clone())))?;
        k.push(acc);
    }
    let c1 = frame.c1();
    let ktilde_over_pi = cvec_mul_mat(&k, &c1)?;
    let mut shifted_over_pi = Vec::with_capacity(m);
    let mut k_plus_dl = Vec::with_capacity(m);
    for j in 0..m {
        shifted_over_pi.push(ktilde_over_pi[j].add(&inv.beta_over_pi[j])?);
        k_plus_dl.push(k[j].add(&inv.d_l[j])?);
    }
    Ok(SpectralShift { index: index.clone(), k, ktilde_over_pi, shifted_over_pi, k_plus_dl })
}

/// Row vector of complex scalars times a real matrix.
fn cvec_mul_mat(v: &[CScalar], m: &linalg::Mat) -> Result<Vec<CScalar>, ScalarError> {
    let cols = m[0].len();
    let mut out = vec![CScalar::zero(); cols];
    for (i, vi) in v.iter().enumerate() {
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = slot.add(&vi.scale(&m[i][j])?)?;
        }
    }
    Ok(out)
}

/// Pivot index j(sigma): 1-based argmax of |Ktilde_j + beta_j| with
/// smallest-index tie-break, certified by comparing squared magnitudes.
pub fn pivot(shift: &SpectralShift) -> Result<usize, SpectralError> {
    let mut best = 0usize;
    let mut best_sq = shift.shifted_over_pi[0].norm_sq()?;
    for (j, v) in shift.shifted_over_pi.iter().enumerate().skip(1) {
        let sq = v.norm_sq()?;
        match sq.sub(&best_sq)?.cert_sign() {
            Sign::Positive => {
                best = j;
                best_sq = sq;
            }
            Sign::Negative | Sign::Zero => {}
            Sign::Undecided => return Err(SpectralError::UndecidedTie),
        }
    }
    Ok(best + 1)
}

/// Z = Z^{n+m} or Z^{n+m} minus the recorded exceptional index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSet {
    pub sigma0: Option<LatticeIndex>,
}

impl ZSet {
    pub fn full() -> Self {
        ZSet { sigma0: None }
    }

    pub fn contains(&self, idx: &LatticeIndex) -> bool {
        self.sigma0.as_ref() != Some(idx)
    }
}

/// Solve K_sigma + d(L) = 0 for an integer index: the 2m real linear
/// equations are decomposed over the shared irrational basis into a rational
/// linear system in the n+m unknowns, solved exactly, and the solution is
/// kept only if integral. Complete for exact single-generator data.
pub fn find_sigma0(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
) -> Result<ZSet, SpectralError> {
    let (n, m) = (frame.n, frame.m);
    let mut basis = LinearBasis::new();
    // decompose every coefficient; floats abort with Uncertified
    let dec = |s: &Scalar, b: &mut LinearBasis| -> Result<Vec<(BasisKey, BigRational)>, SpectralError> {
        b.decompose(s).map_err(|e| match e {
            ScalarError::Undecided => SpectralError::Uncertified,
            other => SpectralError::Scalar(other),
        })
    };
    // coefficient tables: a[l][k], b[l][k] for l<n, k<m; d(L)_k re/im
    let mut a_co = Vec::with_capacity(n);
    let mut b_co = Vec::with_capacity(n);
    for l in 0..n {
        let mut ar = Vec::with_capacity(m);
        let mut br = Vec::with_capacity(m);
        for k in 0..m {
            ar.push(dec(&frame.a[l][k], &mut basis)?);
            br.push(dec(&frame.b[l][k], &mut basis)?);
        }
        a_co.push(ar);
        b_co.push(br);
    }
    let mut dl_re = Vec::with_capacity(m);
    let mut dl_im = Vec::with_capacity(m);
    for k in 0..m {
        dl_re.push(dec(&inv.d_l[k].re, &mut basis)?);
        dl_im.push(dec(&inv.d_l[k].im, &mut basis)?);
    }
    // collect the basis keys appearing per (k, re/im) equation
    let mut keys: std::collections::BTreeSet<(usize, bool, BasisKey)> = Default::default();
    for k in 0..m {
        for l in 0..n {
            for (key, _) in &a_co[l][k] {
                keys.insert((k, false, key.clone()));
            }
            for (key, _) in &b_co[l][k] {
                keys.insert((k, true, key.clone()));
            }
        }
        for (key, _) in &dl_re[k] {
            keys.insert((k, false, key.clone()));
        }
        for (key, _) in &dl_im[k] {
            keys.insert((k, true, key.clone()));
        }
        // sigma''' enters the (k, re, One) equation even if no other term does
        keys.insert((k, false, BasisKey::One));
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let lookup = |coords: &[(BasisKey, BigRational)], key: &BasisKey| -> BigRational {
        coords
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    };
    // rows: one per (k, re/im, key); unknowns sigma_1..sigma_{n+m}
    let mut mat: QMat = Vec::with_capacity(keys.len());
    let mut rhs = Vec::with_capacity(keys.len());
    for (k, is_im, key) in &keys {
        let mut row = vec![BigRational::zero(); n + m];
        for l in 0..n {
            let co = if *is_im { &b_co[l][*k] } else { &a_co[l][*k] };
            row[l] = lookup(co, key);
        }
        if !*is_im && *key == BasisKey::One {
            row[n + k] = -BigRational::one();
        }
        let d = if *is_im { &dl_im[*k] } else { &dl_re[*k] };
        rhs.push(-lookup(d, key));
        mat.push(row);
    }
    match linalg::solve_rational(&mat, &rhs) {
        None => Ok(ZSet::full()),
        Some((_, false)) => {
            // a full affine line of solutions contradicts the uniqueness that
            // (IS) forces; refuse to guess
            Err(SpectralError::UndecidedTie)
        }
        Some((x, true)) => {
            if x.iter().any(|c| !c.is_integer()) {
                return Ok(ZSet::full());
            }
            let sigma: Vec<BigInt> = x.iter().map(|c| c.to_integer()).collect();
            let idx = LatticeIndex::new(sigma, n, m)?;
            if idx.is_zero() {
                // sigma = 0 cannot satisfy the equation for a nontrivial
                // bundle; treat as no exceptional index
                return Ok(ZSet::full());
            }
            // certified residual check
            let shift = k_sigma(&idx, frame, inv)?;
            for v in &shift.k_plus_dl {
                if v.cert_zero() != Sign::Zero {
                    return Ok(ZSet::full());
                }
            }
            Ok(ZSet { sigma0: Some(idx) })
        }
    }
}

/// Outward sqrt enclosure of a nonnegative rational interval.
pub fn sqrt_interval(lo: &BigRational, hi: &BigRational, digits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::from(10u32).pow(digits);
    let sq = |r: &BigRational, up: bool| -> BigRational {
        if r.is_negative() {
            return BigRational::zero();
        }
        let scaled = r * BigRational::from(&scale * &scale);
        let v = scaled.to_integer().sqrt();
        let v = if up { v + BigInt::one() } else { v };
        BigRational::new(v, scale.clone())
    };
    (sq(lo, false), sq(hi, true))
}

/// m0 = min over integer sigma''' (with (0,0,sigma''') in Z) of
/// ||-sigma''' + d(L)||, as a certified positive enclosure. The minimizer is
/// found among nearest-integer roundings of Re d(L) and their +-1 neighbors.
pub fn m0(
    frame: &RealCoordFrame,
    inv: &BundleInvariants,
    z: &ZSet,
    digits: u32,
) -> Result<(Enclosure, Vec<BigInt>), SpectralError> {
    let (n, m) = (frame.n, frame.m);
    // nearest integers to Re d(L)_k
    let mut centers = Vec::with_capacity(m);
    for k in 0..m {
        let e = inv.d_l[k].re.enclosure(12)?;
        let mid = (&e.lo + &e.hi) / BigRational::from(BigInt::from(2));
        centers.push(mid.round().to_integer());
    }
    let mut best: Option<(Scalar, Vec<BigInt>)> = None;
    let mut offsets = vec![-1i64; m];
    loop {
        let cand: Vec<BigInt> = centers
            .iter()
            .zip(&offsets)
            .map(|(c, o)| c + BigInt::from(*o))
            .collect();
        let mut full = vec![BigInt::zero(); n];
        full.extend(cand.iter().cloned());
        let idx = LatticeIndex::new(full, n, m)?;
        if z.contains(&idx) {
            // ||-sigma''' + d(L)||^2 exactly
            let mut norm_sq = Scalar::zero();
            for k in 0..m {
                let re = inv.d_l[k].re.sub(&Scalar::from_bigint(cand[k].clone()))?;
                let im = inv.d_l[k].im.clone();
                norm_sq = norm_sq.add(&re.mul(&re)?)?.add(&im.mul(&im)?)?;
            }
            let better = match &best {
                None => true,
                Some((b, _)) => norm_sq.sub(b)?.cert_sign() == Sign::Negative,
            };
            if better {
                best = Some((norm_sq, cand.clone()));
            }
        }
        // advance offsets through {-1,0,1}^m
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
    let (norm_sq, argmin) = best.ok_or_else(|| SpectralError::Invalid("empty candidate set".into()))?;
    if norm_sq.cert_sign() != Sign::Positive {
        return Err(SpectralError::Invalid(
            "floor constant is not positive; the exceptional index was not excluded".into(),
        ));
    }
    let e = norm_sq.enclosure(2 * digits + 4)?;
    let (lo, hi) = sqrt_interval(&e.lo, &e.hi, digits);
    Ok((Enclosure { lo, hi, exact: false }, argmin))
}

/// Upper bound (over pi) for the operator norm of v -> pi v C1:
/// sqrt(m) * max column l1 norm of C1, as an exact scalar (the pi and sqrt(m)
/// factors are left to the caller, squared comparisons avoid both).
pub fn c1_max_col_l1(frame: &RealCoordFrame) -> Result<Scalar, SpectralError> {
    let c1 = frame.c1();
    let m = frame.m;
    let mut best = Scalar::zero();
    for j in 0..m {
        let mut acc = Scalar::zero();
        for row in c1.iter().take(m) {
            let v = &row[j];
            let a = match v.cert_sign() {
                Sign::Negative => v.neg(),
                _ => v.clone(),
            };
            acc = acc.add(&a)?;
        }
        if acc.sub(&best)?.cert_sign() == Sign::Positive {
            best = acc;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{invariants, Homomorphism};
    use crate::scalars::parse_rational;
    use crate::torus::{build_frame, PeriodMatrix};

    fn setup_10_1(ds: &str) -> (RealCoordFrame, BundleInvariants) {
        let s = vec![
            vec![CScalar::imaginary(Scalar::sqrt_of(2))],
            vec![CScalar::i()],
        ];
        let frame = build_frame(&PeriodMatrix::new(2, 1, s).unwrap()).unwrap();
        let d = Homomorphism {
            d_e: vec![CScalar::zero(), CScalar::zero()],
            d_s: vec![CScalar::real(parse_rational(ds).unwrap().into())],
        };
        let inv = invariants(&d, &frame).unwrap();
        (frame, inv)
    }

    fn setup_10_2() -> (RealCoordFrame, BundleInvariants) {
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
        (frame, inv)
    }

    fn assert_czero(c: &CScalar) {
        assert_eq!(c.cert_zero(), Sign::Zero, "expected zero, got {c:?}");
    }

    #[test]
    fn zero_index_zero_shift() {
        let (frame, inv) = setup_10_1("1/2");
        let idx = LatticeIndex::from_i64(&[0, 0, 0], 2, 1).unwrap();
        let sh = k_sigma(&idx, &frame, &inv).unwrap();
        assert_czero(&sh.k[0]);
        assert_czero(&sh.ktilde_over_pi[0]);
    }

    #[test]
    fn example_10_1_shift_formula() {
        // K_{sigma,1} = i(sigma_1 alpha + sigma_2) - sigma_3 at (1,1,2)
        let (frame, inv) = setup_10_1("1/2");
        let idx = LatticeIndex::from_i64(&[1, 1, 2], 2, 1).unwrap();
        let sh = k_sigma(&idx, &frame, &inv).unwrap();
        let want_im = Scalar::sqrt_of(2).add(&Scalar::one()).unwrap();
        assert_eq!(sh.k[0].re.sub(&Scalar::from_int(-2)).unwrap().cert_sign(), Sign::Zero);
        assert_eq!(sh.k[0].im.sub(&want_im).unwrap().cert_sign(), Sign::Zero);
        // K + d(L) = i(sqrt2+1) - 5/2
        let want_re: Scalar = parse_rational("-5/2").unwrap().into();
        assert_eq!(sh.k_plus_dl[0].re.sub(&want_re).unwrap().cert_sign(), Sign::Zero);
        assert_eq!(sh.k_plus_dl[0].im.sub(&want_im).unwrap().cert_sign(), Sign::Zero);
    }

    #[test]
    fn identity_8_1_on_random_indices() {
        // (Ktilde + beta)/pi = (K + d(L)) C1 componentwise
        let (frame, inv) = setup_10_1("1/2");
        let c1 = frame.c1();
        for sigma in [[1, 1, 2], [0, 3, -1], [-2, 5, 7], [4, 0, 0]] {
            let idx = LatticeIndex::from_i64(&sigma, 2, 1).unwrap();
            let sh = k_sigma(&idx, &frame, &inv).unwrap();
            let rhs = cvec_mul_mat(&sh.k_plus_dl, &c1).unwrap();
            for j in 0..1 {
                assert_czero(&sh.shifted_over_pi[j].sub(&rhs[j]).unwrap());
            }
        }
    }

    #[test]
    fn sigma0_found_in_example_10_2() {
        let (frame, inv) = setup_10_2();
        let z = find_sigma0(&frame, &inv).unwrap();
        let idx = z.sigma0.expect("sigma0 must exist");
        assert_eq!(idx.sigma, vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)]);
        // residual certified zero
        let sh = k_sigma(&idx, &frame, &inv).unwrap();
        assert_czero(&sh.k_plus_dl[0]);
        assert_czero(&sh.shifted_over_pi[0]);
        // pivot at the exceptional index is 1
        assert_eq!(pivot(&sh).unwrap(), 1);
    }

    #[test]
    fn sigma0_absent_in_example_10_1() {
        let (frame, inv) = setup_10_1("1/2");
        let z = find_sigma0(&frame, &inv).unwrap();
        assert!(z.sigma0.is_none());
    }

    #[test]
    fn m0_examples() {
        let (frame, inv) = setup_10_1("1/2");
        let z = find_sigma0(&frame, &inv).unwrap();
        let (enc, argmin) = m0(&frame, &inv, &z, 20).unwrap();
        // d(L) = -1/2: m0 = 1/2 at sigma''' in {0, -1}
        let half = parse_rational("1/2").unwrap();
        assert!(enc.lo <= half && half <= enc.hi);
        assert!((&enc.hi - &enc.lo) <= parse_rational("1e-19").unwrap());
        assert!(argmin == vec![BigInt::from(0)] || argmin == vec![BigInt::from(-1)]);
        let (frame, inv) = setup_10_1("1/4");
        let z = find_sigma0(&frame, &inv).unwrap();
        let (enc, _) = m0(&frame, &inv, &z, 20).unwrap();
        let quarter = parse_rational("1/4").unwrap();
        assert!(enc.lo <= quarter && quarter <= enc.hi);
    }

    #[test]
    fn pivot_inequality_and_bound() {
        // ||Ktilde + beta||^2 <= m * |pivot component|^2 (pi cancels)
        let (frame, inv) = setup_10_2();
        for sigma in [[1, 0, 0], [2, -1, 3], [0, 4, 1]] {
            let idx = LatticeIndex::from_i64(&sigma, 2, 1).unwrap();
            let sh = k_sigma(&idx, &frame, &inv).unwrap();
            let j = pivot(&sh).unwrap();
            let mut total = Scalar::zero();
            for v in &sh.shifted_over_pi {
                total = total.add(&v.norm_sq().unwrap()).unwrap();
            }
            let piv_sq = sh.shifted_over_pi[j - 1].norm_sq().unwrap();
            let m = Scalar::from_int(frame.m as i64);
            let diff = m.mul(&piv_sq).unwrap().sub(&total).unwrap();
            assert_ne!(diff.cert_sign(), Sign::Negative);
        }
    }

    #[test]
    fn sigma0_uniqueness_bruteforce() {
        // at most one index with K + d(L) = 0 in |sigma|_1 <= 6
        let (frame, inv) = setup_10_2();
        let mut hits = vec![];
        for rho in 0..=6i64 {
            for sigma in crate::linalg::l1_shell(3, rho) {
                let idx = LatticeIndex::from_i64(&sigma, 2, 1).unwrap();
                let sh = k_sigma(&idx, &frame, &inv).unwrap();
                if sh.k_plus_dl.iter().all(|v| v.cert_zero() == Sign::Zero) {
                    hits.push(sigma);
                }
            }
        }
        assert_eq!(hits, vec![vec![0, 1, 0]]);
    }
}
