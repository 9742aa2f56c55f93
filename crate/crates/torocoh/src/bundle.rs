//! Homogeneous line bundles given by a representation e(d) of the period
//! lattice: normalization of the defining homomorphism to a real-valued one,
//! the linear summand a(t) with its cocycle identity, and the bundle
//! invariants alpha, beta, d(L).

use num::{BigInt, Zero};
use thiserror::Error;

use crate::linalg;
use crate::scalars::{CScalar, Scalar, ScalarError, Sign};
use crate::torus::RealCoordFrame;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("homomorphism data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Values of the defining homomorphism on the lattice generators
/// e_1..e_n, s_1..s_m. Complex values are allowed before normalization.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    pub d_e: Vec<CScalar>,
    pub d_s: Vec<CScalar>,
}

impl Homomorphism {
    pub fn from_json(v: &serde_json::Value, n: usize, m: usize) -> Result<Self, BundleError> {
        let obj = v
            .as_object()
            .ok_or_else(|| BundleError::Invalid("expected a JSON object".into()))?;
        let read = |key: &str, len: usize| -> Result<Vec<CScalar>, BundleError> {
            let arr = obj
                .get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| BundleError::Invalid(format!("missing {key}")))?;
            if arr.len() != len {
                return Err(BundleError::Invalid(format!("{key} must have length {len}")));
            }
            arr.iter().map(|x| Ok(CScalar::from_json(x)?)).collect()
        };
        Ok(Homomorphism { d_e: read("d_e", n)?, d_s: read("d_s", m)? })
    }

    pub fn is_real(&self) -> bool {
        self.d_e.iter().chain(&self.d_s).all(|c| c.im.cert_sign() == Sign::Zero)
    }
}

/// Record of the equivalence used in normalization: the complex-linear form
/// ell (coefficients on z_1..z_n), the real-linear form k = Im(ell) tabulated
/// on the real basis e_1..e_n, s_1..s_n, and the integer adjustments removed
/// from the e-generators.
#[derive(Debug, Clone)]
pub struct NormalizationCertificate {
    pub ell: Vec<CScalar>,
    pub k_e: Vec<Scalar>,
    pub k_s: Vec<Scalar>,
    pub integer_shifts_e: Vec<BigInt>,
}

/// Exact integer floor of a certified real scalar. Exact kinds that equal an
/// integer are rational by normalization, so refinement terminates.
pub fn exact_floor(s: &Scalar) -> Result<BigInt, ScalarError> {
    if let Some(r) = s.as_rational() {
        return Ok(r.floor().to_integer());
    }
    let mut digits = 12u32;
    loop {
        let e = s.enclosure(digits)?;
        let flo = e.lo.floor().to_integer();
        let fhi = e.hi.floor().to_integer();
        if flo == fhi {
            return Ok(flo);
        }
        digits *= 2;
        if digits > 1 << 16 {
            return Err(ScalarError::NonConvergent);
        }
    }
}

/// Evaluate the complex-linear form with the given z-coefficients on a
/// lattice generator: e_i has coordinates the standard basis vector, s_j the
/// j-th column of S (read off the frame as a_{.j} + i b_{.j}).
fn ell_on_s(ell: &[CScalar], frame: &RealCoordFrame, j: usize) -> Result<CScalar, ScalarError> {
    let mut acc = CScalar::zero();
    for i in 0..frame.n {
        let sij = CScalar { re: frame.a[i][j].clone(), im: frame.b[i][j].clone() };
        acc = acc.add(&ell[i].mul(&sij)?)?;
    }
    Ok(acc)
}

/// k(i e_j) for a real-linear k tabulated on the real basis: expand i e_j in
/// that basis via the coordinate relations (slots -(AC)_{.j} on the e part
/// and C_{.j} on the s part).
fn k_at_i_ej(
    k_e: &[Scalar],
    k_s: &[Scalar],
    frame: &RealCoordFrame,
    j: usize,
) -> Result<Scalar, ScalarError> {
    let mut acc = Scalar::zero();
    for p in 0..frame.n {
        acc = acc.sub(&frame.ac[p][j].mul(&k_e[p])?)?;
        acc = acc.add(&frame.c[p][j].mul(&k_s[p])?)?;
    }
    Ok(acc)
}

/// Subtract the complex-linear form with coefficients `ell` from d on all
/// generators.
fn subtract_ell(d: &mut Homomorphism, ell: &[CScalar], frame: &RealCoordFrame) -> Result<(), ScalarError> {
    for (i, v) in d.d_e.iter_mut().enumerate() {
        *v = v.sub(&ell[i])?;
    }
    for (j, v) in d.d_s.iter_mut().enumerate() {
        let lj = ell_on_s(ell, frame, j)?;
        *v = v.sub(&lj)?;
    }
    Ok(())
}

/// Reduce the integer parts of the real e-generator values; accumulates into
/// the recorded shifts.
fn reduce_integer_parts(d: &mut Homomorphism, shifts: &mut [BigInt]) -> Result<(), ScalarError> {
    for (i, v) in d.d_e.iter_mut().enumerate() {
        let f = exact_floor(&v.re)?;
        if !f.is_zero() {
            v.re = v.re.sub(&Scalar::from_bigint(f.clone()))?;
            shifts[i] += f;
        }
    }
    Ok(())
}

/// Normalize d to an equivalent real-valued homomorphism with
/// d(e_{m+j}) = 0, and return the certificate of the equivalence.
pub fn normalize(
    d: &Homomorphism,
    frame: &RealCoordFrame,
) -> Result<(Homomorphism, NormalizationCertificate), BundleError> {
    let (n, m) = (frame.n, frame.m);
    if d.d_e.len() != n || d.d_s.len() != m {
        return Err(BundleError::Invalid(format!(
            "need {n} e-values and {m} s-values, got {} and {}",
            d.d_e.len(),
            d.d_s.len()
        )));
    }
    let mut cur = d.clone();
    let mut shifts = vec![BigInt::zero(); n];
    reduce_integer_parts(&mut cur, &mut shifts)?;

    // pass 1: kill imaginary parts with ell_a built from k = Im(d),
    // extended by k(s_{m+j}) = 0
    let k_e: Vec<Scalar> = cur.d_e.iter().map(|c| c.im.clone()).collect();
    let mut k_s: Vec<Scalar> = cur.d_s.iter().map(|c| c.im.clone()).collect();
    k_s.resize(n, Scalar::zero());
    let mut ell_a = Vec::with_capacity(n);
    for j in 0..n {
        ell_a.push(CScalar { re: k_at_i_ej(&k_e, &k_s, frame, j)?, im: k_e[j].clone() });
    }
    subtract_ell(&mut cur, &ell_a, frame)?;

    // pass 2: kill the (real) values on e_{m+1}..e_n with the coordinate form
    // ell_b = sum d(e_{m+j}) z_{m+j}
    let mut ell_b = vec![CScalar::zero(); n];
    for j in m..n {
        ell_b[j] = cur.d_e[j].clone();
    }
    subtract_ell(&mut cur, &ell_b, frame)?;

    // pass 3: pass 2 reintroduces imaginary parts on the s-generators; a
    // second Im-based form removes them without touching the e-values
    let k2_e = vec![Scalar::zero(); n];
    let mut k2_s: Vec<Scalar> = cur.d_s.iter().map(|c| c.im.clone()).collect();
    k2_s.resize(n, Scalar::zero());
    let mut ell_c = Vec::with_capacity(n);
    for j in 0..n {
        ell_c.push(CScalar { re: k_at_i_ej(&k2_e, &k2_s, frame, j)?, im: Scalar::zero() });
    }
    subtract_ell(&mut cur, &ell_c, frame)?;

    reduce_integer_parts(&mut cur, &mut shifts)?;

    // total ell and its imaginary part on the real basis
    let mut ell = Vec::with_capacity(n);
    for j in 0..n {
        ell.push(ell_a[j].add(&ell_b[j])?.add(&ell_c[j])?);
    }
    let cert_k_e: Vec<Scalar> = ell.iter().map(|c| c.im.clone()).collect();
    let mut cert_k_s = Vec::with_capacity(n);
    for j in 0..n {
        if j < m {
            cert_k_s.push(ell_on_s(&ell, frame, j)?.im);
        } else {
            // s_{m+j} = i e_{m+j}: Im(i * ell_j) = Re(ell_j)
            cert_k_s.push(ell[j].re.clone());
        }
    }
    Ok((
        cur,
        NormalizationCertificate { ell, k_e: cert_k_e, k_s: cert_k_s, integer_shifts_e: shifts },
    ))
}

impl NormalizationCertificate {
    /// Verify ell(v) = k(i v) + i k(v) on all 2n real basis vectors.
    pub fn verify_linearity(&self, frame: &RealCoordFrame) -> Result<bool, ScalarError> {
        let n = frame.n;
        for j in 0..n {
            // basis vector e_j
            let lhs = &self.ell[j];
            let k_iv = k_at_i_ej(&self.k_e, &self.k_s, frame, j)?;
            let rhs = CScalar { re: k_iv, im: self.k_e[j].clone() };
            if lhs.sub(&rhs)?.cert_zero() != Sign::Zero {
                return Ok(false);
            }
            // basis vector s_j: i s_j expanded via coordinates of i s_j
            let sj = CScalar { re: Scalar::zero(), im: Scalar::one() };
            let lhs_s = ell_on_s(&self.ell, frame, j)?;
            // k(i s_j): coordinates of i s_j = i(a_{.j} + i b_{.j}) = -b_{.j} + i a_{.j}
            let mut k_isj = Scalar::zero();
            {
                // t-coordinates of the point x = -b_{.j}, y = a_{.j}
                let mut x = Vec::with_capacity(n);
                let mut y = Vec::with_capacity(n);
                for i in 0..n {
                    x.push(frame.b[i][j].neg());
                    y.push(frame.a[i][j].clone());
                }
                let acy = linalg::mat_vec(&frame.ac, &y)?;
                let cy = linalg::mat_vec(&frame.c, &y)?;
                for p in 0..n {
                    let tp = x[p].sub(&acy[p])?;
                    k_isj = k_isj.add(&tp.mul(&self.k_e[p])?)?;
                    k_isj = k_isj.add(&cy[p].mul(&self.k_s[p])?)?;
                }
            }
            let rhs_s = CScalar { re: k_isj, im: self.k_s[j].clone() };
            let _ = sj;
            if lhs_s.sub(&rhs_s)?.cert_zero() != Sign::Zero {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Bundle invariants computed from a normalized homomorphism: the 2m
/// coefficients of a(t), the vector alpha, beta/pi (beta = pi*i*conj(alpha)),
/// and d(L) = i*conj(alpha)*C1^{-1}.
#[derive(Debug, Clone)]
pub struct BundleInvariants {
    /// coefficient of t_i is -d(e_i), of t_{n+i} is -d(s_i), i = 1..m
    pub a_coeffs_t: Vec<Scalar>,
    pub a_coeffs_tn: Vec<Scalar>,
    pub alpha: Vec<CScalar>,
    /// beta_j / pi = i * conj(alpha_j); beta itself carries a factor pi
    pub beta_over_pi: Vec<CScalar>,
    pub d_l: Vec<CScalar>,
    pub trivial: bool,
    /// normalized generator values (kept for the spectral shift K_sigma)
    pub d_e: Vec<Scalar>,
    pub d_s: Vec<Scalar>,
}

pub fn invariants(d: &Homomorphism, frame: &RealCoordFrame) -> Result<BundleInvariants, BundleError> {
    let m = frame.m;
    if !d.is_real() {
        return Err(BundleError::Invalid("invariants need a normalized (real) homomorphism".into()));
    }
    let d_e: Vec<Scalar> = d.d_e.iter().map(|c| c.re.clone()).collect();
    let d_s: Vec<Scalar> = d.d_s.iter().map(|c| c.re.clone()).collect();
    let a_coeffs_t: Vec<Scalar> = d_e[..m].iter().map(|x| x.neg()).collect();
    let a_coeffs_tn: Vec<Scalar> = d_s.iter().map(|x| x.neg()).collect();

    // alpha = d_e' - i (d_s - d_e' A1) C1
    let de_row: Vec<Scalar> = d_e[..m].to_vec();
    let a1 = frame.a1();
    let c1 = frame.c1();
    let de_a1 = linalg::row_mul(&de_row, &a1)?;
    let mut diff = Vec::with_capacity(m);
    for j in 0..m {
        diff.push(d_s[j].sub(&de_a1[j])?);
    }
    let im_part = linalg::row_mul(&diff, &c1)?;
    let mut alpha = Vec::with_capacity(m);
    for j in 0..m {
        alpha.push(CScalar { re: de_row[j].clone(), im: im_part[j].neg() });
    }

    // beta/pi = i * conj(alpha)
    let beta_over_pi: Vec<CScalar> = alpha
        .iter()
        .map(|a| CScalar::i().mul(&a.conj()))
        .collect::<Result<_, _>>()?;

    // d(L) = i * conj(alpha) * C1^{-1}; conj(alpha) has real C1^{-1} factors
    let c1_inv = frame.c1_inv()?;
    let re_row: Vec<Scalar> = alpha.iter().map(|a| a.re.clone()).collect();
    let im_row: Vec<Scalar> = alpha.iter().map(|a| a.im.neg()).collect(); // conj
    let re_mul = linalg::row_mul(&re_row, &c1_inv)?;
    let im_mul = linalg::row_mul(&im_row, &c1_inv)?;
    let mut d_l = Vec::with_capacity(m);
    for j in 0..m {
        // i * (re_mul + i im_mul) = -im_mul + i re_mul
        d_l.push(CScalar { re: im_mul[j].neg(), im: re_mul[j].clone() });
    }

    // trivial iff the representation is identically 1: every generator value
    // an integer (alpha = 0 forces all values 0, a special case of this)
    let mut trivial = true;
    for v in d_e.iter().chain(&d_s) {
        let f = exact_floor(v)?;
        if v.sub(&Scalar::from_bigint(f))?.cert_sign() != Sign::Zero {
            trivial = false;
            break;
        }
    }

    Ok(BundleInvariants {
        a_coeffs_t,
        a_coeffs_tn,
        alpha,
        beta_over_pi,
        d_l,
        trivial,
        d_e,
        d_s,
    })
}

impl BundleInvariants {
    /// a(t) = -sum d(e_i) t_i - sum d(s_i) t_{n+i} over i = 1..m.
    pub fn summand(&self, frame: &RealCoordFrame, t: &[Scalar]) -> Result<Scalar, ScalarError> {
        let n = frame.n;
        assert_eq!(t.len(), 2 * n, "t must have 2n components");
        let mut acc = Scalar::zero();
        for (i, c) in self.a_coeffs_t.iter().enumerate() {
            acc = acc.add(&c.mul(&t[i])?)?;
        }
        for (i, c) in self.a_coeffs_tn.iter().enumerate() {
            acc = acc.add(&c.mul(&t[n + i])?)?;
        }
        Ok(acc)
    }

    /// Verify a(t+gamma) + d(gamma) - a(t) = 0 for every generator. The shift
    /// by e_i adds 1 to t_i, the shift by s_i adds 1 to t_{n+i}, so the check
    /// is linear and exact.
    pub fn check_cocycle(&self, frame: &RealCoordFrame) -> Result<Vec<(String, bool)>, ScalarError> {
        let (n, m) = (frame.n, frame.m);
        let mut out = Vec::with_capacity(n + m);
        for i in 0..n {
            let delta = if i < m { self.a_coeffs_t[i].clone() } else { Scalar::zero() };
            let dv = self.d_e[i].clone();
            let ok = delta.add(&dv)?.cert_sign() == Sign::Zero;
            out.push((format!("e{}", i + 1), ok));
        }
        for i in 0..m {
            let ok = self.a_coeffs_tn[i].add(&self.d_s[i])?.cert_sign() == Sign::Zero;
            out.push((format!("s{}", i + 1), ok));
        }
        Ok(out)
    }

    /// Coefficients of -a(t) on t_1..t_{2n} recomputed from alpha through
    /// Re(sum alpha_j z_j(t)) — the closed-form identity for -a.
    pub fn neg_a_from_alpha(&self, frame: &RealCoordFrame) -> Result<Vec<Scalar>, ScalarError> {
        let n = frame.n;
        let m = frame.m;
        let mut coeffs = vec![Scalar::zero(); 2 * n];
        for j in 0..m {
            // z_j = t_j + sum_l a_{jl} t_{n+l} + i sum_l b_{jl} t_{n+l}
            // Re(alpha_j z_j) contributes Re(alpha_j) on t_j and
            // Re(alpha_j)*a_{jl} - Im(alpha_j)*b_{jl} on t_{n+l}
            coeffs[j] = coeffs[j].add(&self.alpha[j].re)?;
            for l in 0..n {
                let term = self.alpha[j]
                    .re
                    .mul(&frame.a[j][l])?
                    .sub(&self.alpha[j].im.mul(&frame.b[j][l])?)?;
                coeffs[n + l] = coeffs[n + l].add(&term)?;
            }
        }
        Ok(coeffs)
    }
}
