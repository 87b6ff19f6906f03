//! Regularization machinery for the Gauss-Newton step: discrete smoothing
//! operators, the generalized SVD of a (Jacobian, operator) pair, truncated
//! GSVD solves, and the minimum-gradient-support reweighting.
//!
//! The GSVD of `(A, L)` is computed from a QR factorization of the stacked
//! matrix `[A; L]` followed by an eigendecomposition of the lower block of
//! `Q` (the CS decomposition route):
//!
//! ```text
//! A = U diag(c) inv(Z),  L = V diag(s) inv(Z),  c_i^2 + s_i^2 = 1
//! ```
//!
//! with `c` ascending over the first `p = rows(L)` entries and `c_i = 1` on
//! the trailing `n - p` entries, which span the null space of `L`. Fewer
//! data rows than parameters are allowed; directions the data cannot see
//! simply have `c_i = 0` and bound the usable truncation level.

use core::fmt;

use nalgebra::{DMatrix, DVector};

#[allow(unused_imports)]
use num_traits::Float;

/// Relative threshold below which a `c_i` is treated as zero (the direction
/// lies in the numerical null space of `A`).
const C_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub enum RegError {
    /// `A` and `L` share a null-space direction; the stacked matrix is rank
    /// deficient and the GSVD is not defined.
    NullSpaceOverlap,
    /// Dimension mismatch between `A` and `L`.
    ShapeMismatch { a_cols: usize, l_cols: usize },
    /// The operator needs more parameters than the model has.
    OperatorTooLarge { n: usize },
    /// Requested truncation level keeps directions that the data cannot
    /// resolve (`c_i` numerically zero).
    TruncationExceedsRank { ell: usize, max_ell: usize },
    /// Internal linear-algebra failure.
    Numerical,
}

impl fmt::Display for RegError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegError::NullSpaceOverlap => {
                write!(f, "jacobian and operator share a null-space direction")
            }
            RegError::ShapeMismatch { a_cols, l_cols } => {
                write!(f, "jacobian has {a_cols} columns, operator {l_cols}")
            }
            RegError::OperatorTooLarge { n } => {
                write!(f, "operator does not fit a model with {n} layers")
            }
            RegError::TruncationExceedsRank { ell, max_ell } => {
                write!(f, "truncation level {ell} exceeds usable rank {max_ell}")
            }
            RegError::Numerical => write!(f, "linear algebra routine failed"),
        }
    }
}

impl core::error::Error for RegError {}

/// Identity operator, n x n.
pub fn reg_identity(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

/// First-difference operator, (n-1) x n rows `[-1, 1]`.
pub fn reg_d1(n: usize) -> Result<DMatrix<f64>, RegError> {
    if n < 2 {
        return Err(RegError::OperatorTooLarge { n });
    }
    let mut l = DMatrix::zeros(n - 1, n);
    for r in 0..n - 1 {
        l[(r, r)] = -1.0;
        l[(r, r + 1)] = 1.0;
    }
    Ok(l)
}

/// Second-difference operator, (n-2) x n rows `[1, -2, 1]`.
pub fn reg_d2(n: usize) -> Result<DMatrix<f64>, RegError> {
    if n < 3 {
        return Err(RegError::OperatorTooLarge { n });
    }
    let mut l = DMatrix::zeros(n - 2, n);
    for r in 0..n - 2 {
        l[(r, r)] = 1.0;
        l[(r, r + 1)] = -2.0;
        l[(r, r + 2)] = 1.0;
    }
    Ok(l)
}

/// GSVD of a matrix pair, in the form used by the truncated solver.
#[derive(Debug, Clone)]
pub struct GsvdFactors {
    /// Left vectors of `A`, one column per parameter; columns where the data
    /// has no resolution (`c_i = 0`) are zero.
    pub u: DMatrix<f64>,
    /// `A`-part generalized values, ascending over the first `p` entries,
    /// exactly 1 beyond.
    pub c: DVector<f64>,
    /// `L`-part generalized values, descending over the first `p` entries,
    /// 0 beyond.
    pub s: DVector<f64>,
    /// Right vectors `z_i` (columns), `A z_i = c_i u_i`.
    pub z: DMatrix<f64>,
    /// Row count of `L`.
    pub p: usize,
    /// Largest usable truncation level: number of regularized directions
    /// with `c_i` above the rank threshold.
    pub max_ell: usize,
}

/// Computes the GSVD of `(a, l)`.
pub fn gsvd(a: &DMatrix<f64>, l: &DMatrix<f64>) -> Result<GsvdFactors, RegError> {
    let n = a.ncols();
    if l.ncols() != n {
        return Err(RegError::ShapeMismatch {
            a_cols: n,
            l_cols: l.ncols(),
        });
    }
    let mt = a.nrows();
    let p = l.nrows();
    if mt + p < n {
        return Err(RegError::NullSpaceOverlap);
    }

    // QR of the stacked pair; R singular means A and L share null space.
    let mut stacked = DMatrix::zeros(mt + p, n);
    stacked.rows_mut(0, mt).copy_from(a);
    stacked.rows_mut(mt, p).copy_from(l);
    let qr = stacked.qr();
    let q = qr.q();
    let r = qr.r();
    let rmax = (0..n).map(|i| r[(i, i)].abs()).fold(0.0f64, f64::max);
    if rmax == 0.0 || (0..n).any(|i| r[(i, i)].abs() < 1e-13 * rmax) {
        return Err(RegError::NullSpaceOverlap);
    }
    let q1 = q.rows(0, mt).into_owned();
    let q2 = q.rows(mt, p).into_owned();

    // Full right basis W from the spectrum of Q2^T Q2; eigenvalues are s^2.
    let eig = (q2.transpose() * &q2).symmetric_eigen();
    let mut order: alloc::vec::Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut w = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        w.set_column(dst, &eig.eigenvectors.column(src));
    }

    // c, s as the exact norms of the Q-block images of each basis vector;
    // this avoids cancellation in sqrt(1 - s^2) for small c.
    let q1w = &q1 * &w;
    let q2w = &q2 * &w;
    let mut c = DVector::zeros(n);
    let mut s = DVector::zeros(n);
    let mut u = DMatrix::zeros(mt, n);
    for i in 0..n {
        let ci = q1w.column(i).norm();
        c[i] = ci;
        s[i] = if i < p { q2w.column(i).norm() } else { 0.0 };
        if ci > C_TOL {
            u.set_column(i, &(q1w.column(i) / ci));
        }
    }
    // usable truncation levels are counted from the top of the band: a tiny
    // c_i interspersed among near-degenerate directions caps the band there
    let max_ell = (0..p).rev().take_while(|&i| c[i] > C_TOL).count();

    let z = r
        .solve_upper_triangular(&w)
        .ok_or(RegError::Numerical)?;

    Ok(GsvdFactors {
        u,
        c,
        s,
        z,
        p,
        max_ell,
    })
}

impl GsvdFactors {
    /// Number of parameters.
    pub fn n(&self) -> usize {
        self.z.ncols()
    }
}

/// Truncated-GSVD solution of `min || A q - rhs ||` keeping the `ell` least
/// regularized of the `p` damped directions plus the whole null space of `L`.
pub fn tgsvd_solve(
    factors: &GsvdFactors,
    rhs: &DVector<f64>,
    ell: usize,
) -> Result<DVector<f64>, RegError> {
    let n = factors.n();
    let p = factors.p;
    if ell > factors.max_ell {
        return Err(RegError::TruncationExceedsRank {
            ell,
            max_ell: factors.max_ell,
        });
    }
    let mut q = DVector::zeros(n);
    for i in (p - ell)..n {
        let ci = factors.c[i];
        if i < p && ci <= C_TOL {
            // unreachable given the max_ell guard, but keep the solve honest
            return Err(RegError::TruncationExceedsRank {
                ell,
                max_ell: factors.max_ell,
            });
        }
        if ci <= C_TOL {
            continue; // data-null direction outside the operator range
        }
        let coeff = factors.u.column(i).dot(rhs) / ci;
        q.axpy(coeff, &factors.z.column(i).into_owned(), 1.0);
    }
    Ok(q)
}

/// Minimum-gradient-support stabilizer
/// `S_tau(q) = sum_r t_r^2/(t_r^2 + 1)` with `t_r = (L q)_r/(tau q_r)`.
///
/// Counts, in the limit of small `tau`, the number of active rows of `L`
/// (interfaces), independent of their amplitude.
pub fn mgs_functional(q: &DVector<f64>, l: &DMatrix<f64>, tau: f64) -> f64 {
    let lq = l * q;
    let floor = clamp_floor(q);
    let mut total = 0.0;
    for r in 0..lq.len() {
        let qa = q[r].abs().max(floor);
        let t = lq[r] / (tau * qa);
        total += t * t / (t * t + 1.0);
    }
    total
}

/// Diagonal of the MGS reweighting matrix `D_{tau}` at the current model, so
/// that `|| D L q ||^2 = S_tau(q)`.
pub fn mgs_weights(q: &DVector<f64>, l: &DMatrix<f64>, tau: f64) -> DVector<f64> {
    let lq = l * q;
    let floor = clamp_floor(q);
    DVector::from_fn(lq.len(), |r, _| {
        let qa = q[r].abs().max(floor);
        let t = lq[r] / (tau * qa);
        1.0 / (tau * qa * (t * t + 1.0).sqrt())
    })
}

/// Rows of `l` scaled by the weights `d`.
pub fn weighted_rows(l: &DMatrix<f64>, d: &DVector<f64>) -> DMatrix<f64> {
    let mut out = l.clone();
    for r in 0..out.nrows() {
        let w = d[r];
        for v in out.row_mut(r).iter_mut() {
            *v *= w;
        }
    }
    out
}

/// Guard against division by vanishing model entries in the MGS weights.
fn clamp_floor(q: &DVector<f64>) -> f64 {
    1e-8 * q.amax().max(1.0)
}
