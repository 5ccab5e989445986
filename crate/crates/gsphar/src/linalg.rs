//! Small shared dense-regression helpers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves the (possibly ridge-augmented) normal equations `(XᵀX + Λ)β = Xᵀy`.
///
/// `ridge` is added to every diagonal entry of `XᵀX` except the columns
/// listed in `unpenalized` (typically the intercept). Failure of the
/// Cholesky factorization is reported as a singular design.
pub(crate) fn ridge_solve(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    ridge: f64,
    unpenalized: &[usize],
    context: &str,
) -> Result<DVector<f64>> {
    let mut xtx = x.transpose() * x;
    for k in 0..xtx.nrows() {
        if !unpenalized.contains(&k) {
            xtx[(k, k)] += ridge;
        }
    }
    let xty = x.transpose() * y;
    solve_spd(&xtx, &xty, context)
}

/// Solves `A β = b` for symmetric positive definite `A` via Cholesky.
pub(crate) fn solve_spd(a: &DMatrix<f64>, b: &DVector<f64>, context: &str) -> Result<DVector<f64>> {
    let chol = a.clone().cholesky().ok_or_else(|| Error::SingularRegression {
        context: context.to_string(),
    })?;
    Ok(chol.solve(b))
}

/// OLS fit returning coefficients and their standard errors.
///
/// `se_k = sqrt(s² [(XᵀX)⁻¹]_kk)` with `s² = RSS / (n − p)`.
pub(crate) fn ols_with_stderr(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    context: &str,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let n = x.nrows();
    let p = x.ncols();
    if n <= p {
        return Err(Error::SingularRegression {
            context: format!("{context}: {n} rows for {p} regressors"),
        });
    }
    let xtx = x.transpose() * x;
    let chol = xtx.cholesky().ok_or_else(|| Error::SingularRegression {
        context: context.to_string(),
    })?;
    let beta = chol.solve(&(x.transpose() * y));
    let resid = y - x * &beta;
    let s2 = resid.norm_squared() / (n - p) as f64;
    let inv = chol.inverse();
    let se = DVector::from_fn(p, |k, _| (s2 * inv[(k, k)]).sqrt());
    Ok((beta, se))
}

/// Spectral radius of a square real matrix.
pub(crate) fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
