//! Tridiagonal linear algebra: Thomas solves and Sturm-bisection eigenvalues.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Solve a tridiagonal system in place via the Thomas algorithm.
///
/// `sub[i]` couples row `i+1` to `i`, `sup[i]` couples row `i` to `i+1`.
/// Stable without pivoting for the diagonally dominant systems produced by
/// the implicit time stepper.
pub fn thomas_solve<F: Scalar>(sub: &[F], diag: &[F], sup: &[F], rhs: &mut [F]) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(sub.len(), n.saturating_sub(1));
    debug_assert_eq!(sup.len(), n.saturating_sub(1));
    debug_assert_eq!(rhs.len(), n);
    if n == 0 {
        return Ok(());
    }
    let mut c_star = vec![F::zero(); n.saturating_sub(1)];
    let mut denom = diag[0];
    if denom == F::zero() || !denom.is_finite() {
        return Err(Error::SingularSolve(0));
    }
    if n > 1 {
        c_star[0] = sup[0] / denom;
    }
    rhs[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i - 1] * c_star[i - 1];
        if denom == F::zero() || !denom.is_finite() {
            return Err(Error::SingularSolve(i));
        }
        if i < n - 1 {
            c_star[i] = sup[i] / denom;
        }
        rhs[i] = (rhs[i] - sub[i - 1] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] = rhs[i] - c_star[i] * rhs[i + 1];
    }
    Ok(())
}

/// Count eigenvalues of the symmetric tridiagonal matrix strictly below `x`.
///
/// Sturm sequence via the LDL^T pivots; the number of negative pivots equals
/// the eigenvalue count below the shift.
pub fn sturm_count<F: Scalar>(diag: &[F], off: &[F], x: F) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let guard = F::min_positive_value() / F::epsilon();
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < F::zero() {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < guard {
            if q >= F::zero() {
                guard
            } else {
                -guard
            }
        } else {
            q
        };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / q_safe;
        if q < F::zero() {
            count += 1;
        }
    }
    count
}

/// k-th smallest eigenvalue (0-indexed) of a symmetric tridiagonal matrix,
/// by bisection on the Sturm count inside the Gershgorin interval.
pub fn eigenvalue_kth<F: Scalar>(diag: &[F], off: &[F], k: usize) -> Result<F> {
    let n = diag.len();
    if k >= n {
        return Err(Error::Eigensolver("eigenvalue index out of range"));
    }
    if n == 1 {
        return Ok(diag[0]);
    }
    let mut lo = F::infinity();
    let mut hi = F::neg_infinity();
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { F::zero() };
        let right = if i < n - 1 { off[i].abs() } else { F::zero() };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    lo = lo - F::one();
    hi = hi + F::one();
    let two = lit::<F>(2.0);
    for _ in 0..4 * 8 * std::mem::size_of::<F>() {
        let mid = (lo + hi) * lit(0.5);
        if hi - lo < two * F::epsilon() * mid.abs().max(F::one()) {
            break;
        }
        if sturm_count(diag, off, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * lit(0.5))
}

/// Eigenvector for an isolated eigenvalue estimate, by inverse iteration.
///
/// Returns the normalized vector and the residual `||T v - lambda v||_2`.
pub fn inverse_iteration<F: Scalar>(diag: &[F], off: &[F], lambda: F) -> Result<(Vec<F>, F)> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::Eigensolver("empty matrix"));
    }
    // Small shift off the eigenvalue keeps the factorization nonsingular.
    let scale = diag.iter().fold(F::zero(), |m, &d| m.max(d.abs())).max(F::one());
    let shift = lambda + scale * F::epsilon() * lit(8.0);
    let shifted: Vec<F> = diag.iter().map(|&d| d - shift).collect();
    let mut v: Vec<F> = (0..n)
        .map(|i| lit::<F>(((i * 2654435761 + 1013904223) % 1000) as f64 / 1000.0 - 0.5))
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut w = v.clone();
        thomas_solve(off, &shifted, off, &mut w)?;
        normalize(&mut w);
        v = w;
    }
    // Rayleigh quotient refinement of the residual.
    let tv = apply_symmetric(diag, off, &v);
    let rayleigh: F = tv.iter().zip(&v).map(|(&a, &b)| a * b).sum();
    let mut res = F::zero();
    for i in 0..n {
        let r = tv[i] - rayleigh * v[i];
        res = res + r * r;
    }
    Ok((v, res.sqrt()))
}

fn apply_symmetric<F: Scalar>(diag: &[F], off: &[F], v: &[F]) -> Vec<F> {
    let n = v.len();
    let mut out = vec![F::zero(); n];
    for i in 0..n {
        let mut acc = diag[i] * v[i];
        if i > 0 {
            acc = acc + off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            acc = acc + off[i] * v[i + 1];
        }
        out[i] = acc;
    }
    out
}

fn normalize<F: Scalar>(v: &mut [F]) {
    let norm: F = v.iter().map(|&x| x * x).sum::<F>().sqrt();
    if norm > F::zero() {
        for x in v.iter_mut() {
            *x = *x / norm;
        }
    }
}
