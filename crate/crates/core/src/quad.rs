//! Adaptive Simpson quadrature with an explicit error estimate.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<F> {
    pub value: F,
    pub error_estimate: F,
    pub evaluations: usize,
}

const MAX_DEPTH: usize = 48;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Classic adaptive Simpson with Richardson correction. The accumulated
/// error estimate is returned; if it exceeds `tol` (recursion bottomed out
/// on a rough integrand) the call fails rather than returning a silently
/// inaccurate value.
pub fn adaptive_simpson<F: Scalar>(
    f: impl Fn(F) -> F,
    a: F,
    b: F,
    tol: F,
) -> Result<Quadrature<F>> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::NonFinite("integration interval"));
    }
    let mut evals = 0usize;
    let mut eval = |x: F| {
        evals += 1;
        f(x)
    };
    let m = (a + b) * lit(0.5);
    let fa = eval(a);
    let fm = eval(m);
    let fb = eval(b);
    let whole = simpson_rule(a, b, fa, fm, fb);

    struct Ctx<'a, F, G: FnMut(F) -> F> {
        eval: &'a mut G,
        err: F,
    }

    fn recurse<F: Scalar, G: FnMut(F) -> F>(
        ctx: &mut Ctx<'_, F, G>,
        a: F,
        b: F,
        fa: F,
        fm: F,
        fb: F,
        whole: F,
        tol: F,
        depth: usize,
    ) -> F {
        let m = (a + b) * lit(0.5);
        let lm = (a + m) * lit(0.5);
        let rm = (m + b) * lit(0.5);
        let flm = (ctx.eval)(lm);
        let frm = (ctx.eval)(rm);
        let left = simpson_rule(a, m, fa, flm, fm);
        let right = simpson_rule(m, b, fm, frm, fb);
        let delta = left + right - whole;
        let fifteen = lit::<F>(15.0);
        if depth >= MAX_DEPTH || delta.abs() <= fifteen * tol {
            ctx.err = ctx.err + delta.abs() / fifteen;
            left + right + delta / fifteen
        } else {
            let half_tol = tol * lit(0.5);
            let l = recurse(ctx, a, m, fa, flm, fm, left, half_tol, depth + 1);
            let r = recurse(ctx, m, b, fm, frm, fb, right, half_tol, depth + 1);
            l + r
        }
    }

    let mut ctx = Ctx {
        eval: &mut eval,
        err: F::zero(),
    };
    let value = recurse(&mut ctx, a, b, fa, fm, fb, whole, tol, 0);
    let error_estimate = ctx.err;
    if !value.is_finite() {
        return Err(Error::NonFinite("quadrature value"));
    }
    if error_estimate > tol {
        return Err(Error::QuadratureNonConvergence {
            estimate: error_estimate.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Quadrature {
        value,
        error_estimate,
        evaluations: evals,
    })
}

#[inline]
fn simpson_rule<F: Scalar>(a: F, b: F, fa: F, fm: F, fb: F) -> F {
    (b - a) / lit::<F>(6.0) * (fa + lit::<F>(4.0) * fm + fb)
}
