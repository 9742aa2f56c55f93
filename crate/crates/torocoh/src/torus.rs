//! Period matrices in first normal form (I_n S), the associated real
//! coordinate frame (A, B, C), the z <-> t coordinate maps, the
//! Wirtinger-frame vectors for the d-bar operator, and the irrationality
//! condition on S.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Mat};
use crate::scalars::{BasisKey, CScalar, LinearBasis, Scalar, ScalarError, Sign};

#[derive(Debug, Error)]
pub enum TorusError {
    #[error("period matrix: {0}")]
    Invalid(String),
    #[error("imaginary part of the top block is not certifiably invertible")]
    SingularB,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Period matrix (I_n S) with S an n x m complex matrix whose top m x m
/// block has invertible imaginary part.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub n: usize,
    pub m: usize,
    /// n rows, m columns
    pub s: Vec<Vec<CScalar>>,
}

impl PeriodMatrix {
    pub fn new(n: usize, m: usize, s: Vec<Vec<CScalar>>) -> Result<Self, TorusError> {
        if n == 0 || m == 0 || m > n {
            return Err(TorusError::Invalid(format!("need 1 <= m <= n, got n={n} m={m}")));
        }
        if s.len() != n || s.iter().any(|row| row.len() != m) {
            return Err(TorusError::Invalid(format!("S must be {n} x {m}")));
        }
        let p = PeriodMatrix { n, m, s };
        // det Im S1 != 0, certified
        let im_s1: Mat = (0..m).map(|i| (0..m).map(|j| p.s[i][j].im.clone()).collect()).collect();
        if !linalg::cert_nonsingular(&im_s1)? {
            return Err(TorusError::SingularB);
        }
        Ok(p)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, TorusError> {
        let obj = v
            .as_object()
            .ok_or_else(|| TorusError::Invalid("expected a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| TorusError::Invalid("missing n".into()))? as usize;
        let m = obj
            .get("m")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| TorusError::Invalid("missing m".into()))? as usize;
        let rows = obj
            .get("S")
            .and_then(|x| x.as_array())
            .ok_or_else(|| TorusError::Invalid("missing S".into()))?;
        let mut s = Vec::with_capacity(rows.len());
        for row in rows {
            let cells = row
                .as_array()
                .ok_or_else(|| TorusError::Invalid("S rows must be arrays".into()))?;
            let mut out = Vec::with_capacity(cells.len());
            for cell in cells {
                out.push(CScalar::from_json(cell)?);
            }
            s.push(out);
        }
        PeriodMatrix::new(n, m, s)
    }
}

/// The real coordinate frame: A = Re, B = Im of the extended column set
/// (s_1..s_n) with s_{m+j} := i e_{m+j}; C = B^{-1}. Products used downstream
/// (A C and the top-left blocks) are precomputed.
#[derive(Debug, Clone)]
pub struct RealCoordFrame {
    pub n: usize,
    pub m: usize,
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    /// A * C (enters the t_j relation and the frame vectors)
    pub ac: Mat,
}

impl RealCoordFrame {
    pub fn a1(&self) -> Mat {
        submatrix(&self.a, self.m)
    }

    pub fn c1(&self) -> Mat {
        submatrix(&self.c, self.m)
    }

    pub fn c1_inv(&self) -> Result<Mat, ScalarError> {
        linalg::mat_inv(&self.c1())
    }
}

fn submatrix(m: &Mat, k: usize) -> Mat {
    (0..k).map(|i| (0..k).map(|j| m[i][j].clone()).collect()).collect()
}

/// Build the frame by exact linear algebra over the scalar field.
pub fn build_frame(p: &PeriodMatrix) -> Result<RealCoordFrame, TorusError> {
    let (n, m) = (p.n, p.m);
    let mut a = linalg::zeros(n, n);
    let mut b = linalg::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if j < m {
                a[i][j] = p.s[i][j].re.clone();
                b[i][j] = p.s[i][j].im.clone();
            } else {
                // s_{m+j} = i * e_{m+j}
                b[i][j] = if i == j { Scalar::one() } else { Scalar::zero() };
            }
        }
    }
    let c = match linalg::mat_inv(&b) {
        Ok(c) => c,
        Err(ScalarError::DivisionByZero) | Err(ScalarError::Undecided) => return Err(TorusError::SingularB),
        Err(e) => return Err(e.into()),
    };
    let ac = linalg::mat_mul(&a, &c)?;
    Ok(RealCoordFrame { n, m, a, b, c, ac })
}

/// z -> t: t_j = x_j - sum_k (AC)_{jk} y_k, t_{n+j} = sum_k c_{jk} y_k.
pub fn coord_z_to_t(frame: &RealCoordFrame, z: &[CScalar]) -> Result<Vec<Scalar>, ScalarError> {
    let n = frame.n;
    assert_eq!(z.len(), n, "point must have n complex components");
    let x: Vec<Scalar> = z.iter().map(|c| c.re.clone()).collect();
    let y: Vec<Scalar> = z.iter().map(|c| c.im.clone()).collect();
    let acy = linalg::mat_vec(&frame.ac, &y)?;
    let cy = linalg::mat_vec(&frame.c, &y)?;
    let mut t = Vec::with_capacity(2 * n);
    for j in 0..n {
        t.push(x[j].sub(&acy[j])?);
    }
    t.extend(cy);
    Ok(t)
}

/// t -> z: x = t' + A t'', y = B t''.
pub fn coord_t_to_z(frame: &RealCoordFrame, t: &[Scalar]) -> Result<Vec<CScalar>, ScalarError> {
    let n = frame.n;
    assert_eq!(t.len(), 2 * n, "point must have 2n real components");
    let t2 = &t[n..];
    let at = linalg::mat_vec(&frame.a, t2)?;
    let bt = linalg::mat_vec(&frame.b, t2)?;
    (0..n)
        .map(|j| Ok(CScalar { re: t[j].add(&at[j])?, im: bt[j].clone() }))
        .collect()
}

/// Coefficients of d/dt_1..d/dt_{2n} in the expansion of d/dzbar_j:
/// 1/2 on slot j, -(i/2) (AC)_{kj} on slots k <= n, (i/2) c_{kj} on slots n+k.
pub fn dbar_vector(frame: &RealCoordFrame, j: usize) -> Result<Vec<CScalar>, ScalarError> {
    assert!(j >= 1 && j <= frame.n, "j out of range");
    let n = frame.n;
    let half = Scalar::Rat(BigRational::new(BigInt::one(), BigInt::from(2)));
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let delta = if k == j - 1 { half.clone() } else { Scalar::zero() };
        let im = frame.ac[k][j - 1].neg().mul(&half)?;
        out.push(CScalar { re: delta, im });
    }
    for k in 0..n {
        out.push(CScalar { re: Scalar::zero(), im: frame.c[k][j - 1].mul(&half)? });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Irrationality condition

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrStatus {
    CertifiedHolds,
    CertifiedFails,
    EvidenceHolds,
    Unknown,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrationalityReport {
    pub status: IrStatus,
    /// lex-smallest violating tau (sign-canonicalized: first nonzero entry
    /// positive), when the condition fails
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_tau: Option<Vec<i64>>,
    pub search_bound: u64,
}

/// Decide whether tau * S is never integral for nonzero integer tau.
///
/// Exact inputs sharing one irrational generator family reduce to a rational
/// kernel computation and are decided completely; otherwise a bounded search
/// either finds a certified violation or downgrades to evidence.
pub fn check_irrationality(p: &PeriodMatrix, tau_bound: u64) -> Result<IrrationalityReport, TorusError> {
    if tau_bound == 0 {
        return Err(TorusError::Invalid("tau_bound must be >= 1".into()));
    }
    let (n, m) = (p.n, p.m);
    if m == n {
        // tau * Im(S1) != 0 for tau != 0 because Im(S1) is invertible, so
        // tau * S always has a nonzero imaginary part
        return Ok(IrrationalityReport {
            status: IrStatus::CertifiedHolds,
            violating_tau: None,
            search_bound: 0,
        });
    }
    match exact_kernel_analysis(p) {
        Ok(Some(kernel_witness)) => {
            // a violation exists; locate the lex-smallest one by shells
            let bound = kernel_witness.iter().map(|x| x.abs()).sum::<i64>().max(1) as u64;
            let found = search_violation(p, bound.min(60))?;
            let tau = found.unwrap_or(kernel_witness);
            Ok(IrrationalityReport {
                status: IrStatus::CertifiedFails,
                violating_tau: Some(tau),
                search_bound: bound,
            })
        }
        Ok(None) => Ok(IrrationalityReport {
            status: IrStatus::CertifiedHolds,
            violating_tau: None,
            search_bound: 0,
        }),
        Err(_) => {
            // data outside the decidable patterns: bounded search
            match search_violation(p, tau_bound)? {
                Some(tau) => Ok(IrrationalityReport {
                    status: IrStatus::CertifiedFails,
                    violating_tau: Some(tau),
                    search_bound: tau_bound,
                }),
                None => Ok(IrrationalityReport {
                    status: IrStatus::EvidenceHolds,
                    violating_tau: None,
                    search_bound: tau_bound,
                }),
            }
        }
    }
}

/// Complete analysis for exact single-generator data. Returns Ok(None) when
/// the condition certifiably holds, Ok(Some(tau)) with an integer violating
/// tau otherwise, and Err when the data is outside the decidable patterns.
fn exact_kernel_analysis(p: &PeriodMatrix) -> Result<Option<Vec<i64>>, ScalarError> {
    let (n, m) = (p.n, p.m);
    let mut basis = LinearBasis::new();
    // per entry: coordinates of Re and Im over the shared basis
    let mut re_coords = Vec::with_capacity(n);
    let mut im_coords = Vec::with_capacity(n);
    for i in 0..n {
        let mut re_row = Vec::with_capacity(m);
        let mut im_row = Vec::with_capacity(m);
        for j in 0..m {
            re_row.push(basis.decompose(&p.s[i][j].re)?);
            im_row.push(basis.decompose(&p.s[i][j].im)?);
        }
        re_coords.push(re_row);
        im_coords.push(im_row);
    }
    // constraint columns: for each (column j, basis key k) with k != One the
    // Re and Im coefficient sums must vanish; for k = One only the Im sum
    let mut keys: std::collections::BTreeSet<(usize, BasisKey, bool)> = Default::default();
    for i in 0..n {
        for j in 0..m {
            for (k, _) in &re_coords[i][j] {
                if *k != BasisKey::One {
                    keys.insert((j, k.clone(), false));
                }
            }
            for (k, _) in &im_coords[i][j] {
                keys.insert((j, k.clone(), true));
            }
        }
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let mut mat: linalg::QMat = vec![vec![BigRational::zero(); keys.len()]; n];
    for (col, (j, key, is_im)) in keys.iter().enumerate() {
        for (i, row) in mat.iter_mut().enumerate() {
            let coords = if *is_im { &im_coords[i][*j] } else { &re_coords[i][*j] };
            if let Some((_, c)) = coords.iter().find(|(k, _)| k == key) {
                row[col] = c.clone();
            }
        }
    }
    let kernel = linalg::left_kernel(&mat);
    if kernel.is_empty() {
        return Ok(None);
    }
    // build an integer violating tau from the first kernel vector: clear the
    // denominators of tau itself and of tau * Re(S)_rational
    let v = &kernel[0];
    let mut denom = BigInt::one();
    for x in v {
        denom = num::integer::lcm(denom, x.denom().clone());
    }
    let tau_q: Vec<BigRational> = v.iter().map(|x| x * BigRational::from(denom.clone())).collect();
    // rational part of tau * S per column
    let mut scale = BigInt::one();
    for j in 0..m {
        let mut acc = BigRational::zero();
        for i in 0..n {
            if let Some((_, c)) = re_coords[i][j].iter().find(|(k, _)| *k == BasisKey::One) {
                acc += c * &tau_q[i];
            }
        }
        scale = num::integer::lcm(scale, acc.denom().clone());
    }
    let tau: Vec<i64> = tau_q
        .iter()
        .map(|x| {
            (x * BigRational::from(scale.clone()))
                .to_integer()
                .to_i64()
                .unwrap_or(i64::MAX)
        })
        .collect();
    Ok(Some(canonical_sign(tau)))
}

fn canonical_sign(mut tau: Vec<i64>) -> Vec<i64> {
    if let Some(first) = tau.iter().find(|x| **x != 0) {
        if *first < 0 {
            for x in tau.iter_mut() {
                *x = -*x;
            }
        }
    }
    tau
}

/// Shell search for the lex-smallest certified violation with |tau|_1 <= bound.
fn search_violation(p: &PeriodMatrix, bound: u64) -> Result<Option<Vec<i64>>, TorusError> {
    for rho in 1..=bound {
        let mut best: Option<Vec<i64>> = None;
        for tau in linalg::l1_shell(p.n, rho as i64) {
            let tau = canonical_sign(tau);
            if let Some(b) = &best {
                if *b <= tau {
                    continue;
                }
            }
            if is_certified_violation(p, &tau)? {
                best = Some(tau);
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

fn is_certified_violation(p: &PeriodMatrix, tau: &[i64]) -> Result<bool, TorusError> {
    for j in 0..p.m {
        let mut re = Scalar::zero();
        let mut im = Scalar::zero();
        for i in 0..p.n {
            let t = Scalar::from_int(tau[i]);
            re = re.add(&p.s[i][j].re.mul(&t)?)?;
            im = im.add(&p.s[i][j].im.mul(&t)?)?;
        }
        if im.cert_sign() != Sign::Zero {
            return Ok(false);
        }
        // Re must be a certified integer: compare against the rounded midpoint
        let enc = re.enclosure(12)?;
        let mid = (&enc.lo + &enc.hi) / BigRational::from(BigInt::from(2));
        let nearest = mid.round();
        let diff = re.sub(&Scalar::Rat(nearest))?;
        if diff.cert_sign() != Sign::Zero {
            return Ok(false);
        }
    }
    Ok(true)
}
