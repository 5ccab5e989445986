//! Spillover-graph estimation via generalized forecast-error variance
//! decomposition.
//!
//! A VAR(p) fit supplies moving-average matrices `B_h`; the H-step GFEVD
//!
//! ```text
//! θ_ij = σ_jj⁻¹ Σ_h (e_iᵀ B_h Σ e_j)² / Σ_h (e_iᵀ B_h Σ B_hᵀ e_i)
//! ```
//!
//! measures the share of index i's forecast-error variance attributable to
//! shocks in index j. Row normalization and the positive-part difference
//! `max(θ̃_ij − θ̃_ji, 0)` yield the directed net pairwise spillover graph.
//! Windowed absolute Pearson matrices modulate that graph into the dynamic
//! adjacency used by the dynamic forecasting model.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::panel::VolPanel;

/// Estimated VAR(p) with equation-by-equation least squares.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarFit {
    pub p: usize,
    /// `coefficients[k]` is the N×N matrix on lag k+1.
    pub coefficients: Vec<DMatrix<f64>>,
    pub intercept: DVector<f64>,
    /// Residual covariance with denominator T − p.
    pub sigma: DMatrix<f64>,
    /// Spectral radius of the companion matrix.
    pub companion_radius: f64,
    /// Set when the companion radius is ≥ 1.
    pub nonstationary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpilloverKind {
    Raw,
    Normalized,
    NetPairwise,
}

impl std::fmt::Display for SpilloverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpilloverKind::Raw => "raw",
            SpilloverKind::Normalized => "normalized",
            SpilloverKind::NetPairwise => "net_pairwise",
        };
        f.write_str(s)
    }
}

/// N×N spillover matrix at horizon `horizon`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpilloverMatrix {
    pub values: DMatrix<f64>,
    pub horizon: usize,
    pub kind: SpilloverKind,
}

/// Inputs for the correlation-modulated dynamic adjacency.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynamicAdjacency {
    /// Net pairwise spillover graph estimated on the in-sample split.
    pub base: SpilloverMatrix,
    /// Convex weight on the mid-window correlation term.
    pub rho: f64,
    pub mid_window: usize,
    pub long_window: usize,
}

impl DynamicAdjacency {
    pub fn new(base: SpilloverMatrix, rho: f64) -> Result<Self> {
        if base.kind != SpilloverKind::NetPairwise {
            return Err(Error::InvalidConfig(format!(
                "dynamic adjacency base must be net_pairwise, got {}",
                base.kind
            )));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidConfig(format!("rho must lie in [0,1], got {rho}")));
        }
        Ok(Self { base, rho, mid_window: 5, long_window: 22 })
    }
}

/// Fits a VAR(p) by per-equation least squares with an optional trace-scaled
/// ridge penalty on the lag coefficients (the intercept stays unpenalized).
pub fn fit_var(panel: &VolPanel, p: usize, ridge: f64) -> Result<VarFit> {
    let t = panel.t();
    let n = panel.n();
    if p == 0 {
        return Err(Error::InvalidConfig("VAR order p must be positive".into()));
    }
    if t <= n * p + 1 {
        return Err(Error::SeriesTooShort { required: n * p + 2, actual: t });
    }
    let rows = t - p;
    let cols = n * p + 1;
    let mut x = DMatrix::zeros(rows, cols);
    for r in 0..rows {
        x[(r, 0)] = 1.0;
        for lag in 1..=p {
            for j in 0..n {
                x[(r, 1 + (lag - 1) * n + j)] = panel.values[(r + p - lag, j)];
            }
        }
    }

    // Scale the penalty by the mean diagonal of XᵀX so one λ works across
    // very differently scaled panels.
    let xtx = x.transpose() * &x;
    let trace_scale = (1..cols).map(|k| xtx[(k, k)]).sum::<f64>() / (cols - 1) as f64;
    let lambda = ridge * trace_scale;
    let mut xtx_pen = xtx;
    for k in 1..cols {
        xtx_pen[(k, k)] += lambda;
    }
    let chol = xtx_pen.cholesky().ok_or_else(|| Error::SingularRegression {
        context: format!(
            "VAR design is singular with ridge = {ridge}; pass a positive ridge penalty"
        ),
    })?;

    let mut intercept = DVector::zeros(n);
    let mut coefficients = vec![DMatrix::zeros(n, n); p];
    let mut residuals = DMatrix::zeros(rows, n);
    for eq in 0..n {
        let y = DVector::from_fn(rows, |r, _| panel.values[(r + p, eq)]);
        let beta = chol.solve(&(x.transpose() * &y));
        intercept[eq] = beta[0];
        for lag in 0..p {
            for j in 0..n {
                coefficients[lag][(eq, j)] = beta[1 + lag * n + j];
            }
        }
        let fitted = &x * &beta;
        for r in 0..rows {
            residuals[(r, eq)] = y[r] - fitted[r];
        }
    }

    let sigma = residuals.transpose() * &residuals / rows as f64;
    let companion_radius = companion_spectral_radius(&coefficients, n, p);
    Ok(VarFit {
        p,
        coefficients,
        intercept,
        sigma,
        companion_radius,
        nonstationary: companion_radius >= 1.0,
    })
}

fn companion_spectral_radius(coeffs: &[DMatrix<f64>], n: usize, p: usize) -> f64 {
    let dim = n * p;
    let mut companion = DMatrix::zeros(dim, dim);
    for (lag, phi) in coeffs.iter().enumerate() {
        companion.view_mut((0, lag * n), (n, n)).copy_from(phi);
    }
    for k in 0..(dim - n) {
        companion[(n + k, k)] = 1.0;
    }
    linalg::spectral_radius(&companion)
}

/// Moving-average matrices `B_0..B_{H−1}` of the VAR:
/// `B_0 = I`, `B_h = Σ_{j=1..min(h,p)} Φ_j B_{h−j}`.
pub fn ma_coefficients(fit: &VarFit, horizon: usize) -> Vec<DMatrix<f64>> {
    let n = fit.intercept.len();
    let mut b = Vec::with_capacity(horizon);
    b.push(DMatrix::identity(n, n));
    for h in 1..horizon {
        let mut acc = DMatrix::zeros(n, n);
        for j in 1..=h.min(fit.p) {
            acc += &fit.coefficients[j - 1] * &b[h - j];
        }
        b.push(acc);
    }
    b
}

/// Generalized forecast-error variance decomposition at horizon `horizon`.
pub fn gfevd(fit: &VarFit, horizon: usize, labels: &[String]) -> Result<SpilloverMatrix> {
    let n = fit.intercept.len();
    if horizon == 0 {
        return Err(Error::InvalidConfig("GFEVD horizon must be positive".into()));
    }
    for j in 0..n {
        if fit.sigma[(j, j)] <= 0.0 {
            return Err(Error::ZeroResidualVariance {
                label: labels.get(j).cloned().unwrap_or_else(|| format!("#{j}")),
            });
        }
    }
    let b = ma_coefficients(fit, horizon);
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut denom = 0.0;
        for bh in &b {
            let row = bh.row(i);
            // e_iᵀ B_h Σ B_hᵀ e_i
            denom += (row * &fit.sigma * row.transpose())[(0, 0)];
        }
        for j in 0..n {
            let mut num = 0.0;
            for bh in &b {
                let val = (bh.row(i) * fit.sigma.column(j))[(0, 0)];
                num += val * val;
            }
            theta[(i, j)] = num / (fit.sigma[(j, j)] * denom);
        }
    }
    Ok(SpilloverMatrix { values: theta, horizon, kind: SpilloverKind::Raw })
}

/// Row-normalizes a raw decomposition so each row sums to 1.
pub fn normalize_rows(theta: &SpilloverMatrix) -> Result<SpilloverMatrix> {
    let n = theta.values.nrows();
    let mut out = theta.values.clone();
    for i in 0..n {
        let s: f64 = out.row(i).iter().sum();
        if s <= 0.0 {
            return Err(Error::ZeroRowSum { row: i });
        }
        for j in 0..n {
            out[(i, j)] /= s;
        }
    }
    Ok(SpilloverMatrix {
        values: out,
        horizon: theta.horizon,
        kind: SpilloverKind::Normalized,
    })
}

/// Net pairwise spillovers `θ̄_ij = max(θ̃_ij − θ̃_ji, 0)` with a zero
/// diagonal; at most one of each (i,j)/(j,i) pair is nonzero.
pub fn net_pairwise(theta_norm: &SpilloverMatrix) -> Result<SpilloverMatrix> {
    if theta_norm.kind != SpilloverKind::Normalized {
        return Err(Error::InvalidConfig(format!(
            "net_pairwise expects a normalized matrix, got {}",
            theta_norm.kind
        )));
    }
    let n = theta_norm.values.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[(i, j)] = (theta_norm.values[(i, j)] - theta_norm.values[(j, i)]).max(0.0);
            }
        }
    }
    Ok(SpilloverMatrix {
        values: out,
        horizon: theta_norm.horizon,
        kind: SpilloverKind::NetPairwise,
    })
}

/// Full pipeline: VAR(p) → GFEVD(H) → row-normalize → net pairwise.
pub fn spillover_graph(
    panel: &VolPanel,
    p: usize,
    horizon: usize,
    ridge: f64,
) -> Result<SpilloverMatrix> {
    let fit = fit_var(panel, p, ridge)?;
    let theta = gfevd(&fit, horizon, &panel.labels)?;
    net_pairwise(&normalize_rows(&theta)?)
}

/// Absolute Pearson correlation matrix of the window's columns.
///
/// A zero-variance column contributes 0 off-diagonal and keeps 1 on its own
/// diagonal, so downstream element-wise modulation degrades gracefully.
pub fn pearson_window(window: &DMatrix<f64>) -> DMatrix<f64> {
    let rows = window.nrows();
    let n = window.ncols();
    assert!(rows >= 2, "pearson_window needs at least 2 rows");
    let means: Vec<f64> = (0..n).map(|j| window.column(j).sum() / rows as f64).collect();
    let mut centered = window.clone();
    for j in 0..n {
        for r in 0..rows {
            centered[(r, j)] -= means[j];
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| centered.column(j).norm()).collect();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let denom = norms[i] * norms[j];
            let c = if denom == 0.0 {
                0.0
            } else {
                (centered.column(i).dot(&centered.column(j)) / denom).abs()
            };
            out[(i, j)] = c.min(1.0);
            out[(j, i)] = out[(i, j)];
        }
    }
    out
}

/// Correlation-modulated adjacency
/// `A = ρ |A^P_mid| ⊙ A^DY + (1 − ρ) |A^P_long| ⊙ A^DY`
/// from the 22 lag rows preceding a forecast (oldest first).
pub fn dynamic_adjacency(dyn_adj: &DynamicAdjacency, lagged: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if lagged.nrows() != dyn_adj.long_window {
        return Err(Error::DimensionMismatch {
            what: "dynamic adjacency lag window rows".into(),
            expected: dyn_adj.long_window,
            actual: lagged.nrows(),
        });
    }
    let n = dyn_adj.base.values.nrows();
    if lagged.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "dynamic adjacency lag window columns".into(),
            expected: n,
            actual: lagged.ncols(),
        });
    }
    let mid = lagged
        .rows(dyn_adj.long_window - dyn_adj.mid_window, dyn_adj.mid_window)
        .into_owned();
    let corr_mid = pearson_window(&mid);
    let corr_long = pearson_window(lagged);
    Ok(modulate_adjacency(
        &dyn_adj.base.values,
        &corr_mid,
        &corr_long,
        dyn_adj.rho,
    ))
}

/// The convex correlation blend
/// `A = ρ C_mid ⊙ A^DY + (1 − ρ) C_long ⊙ A^DY`.
pub fn modulate_adjacency(
    base: &DMatrix<f64>,
    corr_mid: &DMatrix<f64>,
    corr_long: &DMatrix<f64>,
    rho: f64,
) -> DMatrix<f64> {
    let n = base.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        rho * corr_mid[(i, j)] * base[(i, j)] + (1.0 - rho) * corr_long[(i, j)] * base[(i, j)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{generate_synthetic, synthetic_days, SyntheticSpec};

    fn white_noise_panel(n: usize, t: usize, seed: u64) -> VolPanel {
        generate_synthetic(&SyntheticSpec {
            n,
            t,
            coupling: DMatrix::zeros(n, n),
            noise_scale: 0.4,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn var_on_white_noise_recovers_near_zero_coefficients() {
        let panel = white_noise_panel(3, 5000, 21);
        let fit = fit_var(&panel, 1, 0.0).unwrap();
        for v in fit.coefficients[0].iter() {
            assert!(v.abs() < 0.05, "coefficient {v}");
        }
        assert!(!fit.nonstationary);
    }

    #[test]
    fn var_recovers_diagonal_autoregression() {
        let coupling = DMatrix::from_diagonal(&DVector::from_element(3, 0.5));
        let panel = generate_synthetic(&SyntheticSpec {
            n: 3,
            t: 5000,
            coupling,
            noise_scale: 0.3,
            seed: 4,
        })
        .unwrap();
        // The generator couples logs; fit the logs to recover the matrix.
        let logs = panel.values.map(|v| v.ln());
        let log_panel = VolPanel::new(
            panel.labels.clone(),
            panel.days.clone(),
            logs.map(|v| v - logs.min() + 0.1),
            1.0,
        )
        .unwrap();
        let fit = fit_var(&log_panel, 1, 0.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 0.5 } else { 0.0 };
                let got = fit.coefficients[0][(i, j)];
                assert!((got - target).abs() < 0.05, "phi[{i}{j}] = {got}");
            }
        }
    }

    #[test]
    fn var_huge_ridge_shrinks_to_column_means() {
        let panel = white_noise_panel(2, 400, 5);
        let fit = fit_var(&panel, 1, 1e9).unwrap();
        for v in fit.coefficients[0].iter() {
            assert!(v.abs() < 1e-6, "coefficient {v}");
        }
        for j in 0..2 {
            let mean = panel.values.rows(1, 399).column(j).sum() / 399.0;
            assert!((fit.intercept[j] - mean).abs() < 1e-3);
        }
    }

    #[test]
    fn var_singular_design_advises_ridge() {
        // Duplicated column makes the design rank-deficient.
        let t = 80;
        let mut values = DMatrix::zeros(t, 2);
        let mut x = 1.0f64;
        for r in 0..t {
            x = 0.9 * x + 0.1 * ((r * 37 % 11) as f64 / 11.0 + 0.05);
            values[(r, 0)] = x;
            values[(r, 1)] = x;
        }
        let panel = VolPanel::new(
            vec!["A".into(), "B".into()],
            synthetic_days(t),
            values,
            1.0,
        )
        .unwrap();
        match fit_var(&panel, 1, 0.0) {
            Err(Error::SingularRegression { context }) => {
                assert!(context.contains("ridge"), "message: {context}");
            }
            other => panic!("expected singular design, got {other:?}"),
        }
        assert!(fit_var(&panel, 1, 1e-6).is_ok());
    }

    fn toy_fit(coeffs: Vec<DMatrix<f64>>, sigma: DMatrix<f64>) -> VarFit {
        let n = sigma.nrows();
        let p = coeffs.len();
        let companion_radius = if p == 0 { 0.0 } else { companion_spectral_radius(&coeffs, n, p) };
        VarFit {
            p: p.max(1),
            coefficients: if coeffs.is_empty() {
                vec![DMatrix::zeros(n, n)]
            } else {
                coeffs
            },
            intercept: DVector::zeros(n),
            sigma,
            companion_radius,
            nonstationary: false,
        }
    }

    #[test]
    fn ma_coefficients_zero_phi() {
        let fit = toy_fit(vec![DMatrix::zeros(2, 2)], DMatrix::identity(2, 2));
        let b = ma_coefficients(&fit, 4);
        assert_eq!(b[0], DMatrix::identity(2, 2));
        for bh in &b[1..] {
            assert_eq!(bh, &DMatrix::zeros(2, 2));
        }
    }

    #[test]
    fn ma_coefficients_geometric_recursion() {
        let fit = toy_fit(
            vec![DMatrix::from_diagonal(&DVector::from_element(2, 0.5))],
            DMatrix::identity(2, 2),
        );
        let b = ma_coefficients(&fit, 3);
        assert!((b[1][(0, 0)] - 0.5).abs() < 1e-15);
        assert!((b[2][(1, 1)] - 0.25).abs() < 1e-15);
        assert_eq!(b[1][(0, 1)], 0.0);
    }

    /// Brute-force oracle: propagate a unit shock through the VAR with zero
    /// noise; the state at step h is B_h e_j.
    fn impulse_oracle(fit: &VarFit, horizon: usize) -> Vec<DMatrix<f64>> {
        let n = fit.intercept.len();
        let mut out = Vec::with_capacity(horizon);
        for j in 0..n {
            let mut hist: Vec<DVector<f64>> = vec![DVector::zeros(n); fit.p];
            let mut shocked = DVector::zeros(n);
            shocked[j] = 1.0;
            hist.push(shocked);
            for _ in 1..horizon {
                let mut next = DVector::zeros(n);
                for lag in 1..=fit.p {
                    next += &fit.coefficients[lag - 1] * &hist[hist.len() - lag];
                }
                hist.push(next);
            }
            out.push(hist[fit.p..].to_vec());
        }
        (0..horizon)
            .map(|h| {
                let mut m = DMatrix::zeros(n, n);
                for j in 0..n {
                    m.set_column(j, &out[j][h]);
                }
                m
            })
            .collect()
    }

    #[test]
    fn ma_coefficients_match_impulse_simulation() {
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [2usize, 4, 5] {
            for p in [1usize, 2, 3] {
                let mut coeffs: Vec<DMatrix<f64>> =
                    (0..p).map(|_| DMatrix::from_fn(n, n, |_, _| next())).collect();
                // Scale to a comfortably stable region.
                let radius = companion_spectral_radius(&coeffs, n, p);
                if radius >= 0.95 {
                    let shrink = 0.7 / radius;
                    for (k, c) in coeffs.iter_mut().enumerate() {
                        *c *= shrink.powi(k as i32 + 1);
                    }
                }
                let fit = toy_fit(coeffs, DMatrix::identity(n, n));
                let b = ma_coefficients(&fit, 10);
                let oracle = impulse_oracle(&fit, 10);
                for h in 0..10 {
                    assert!((&b[h] - &oracle[h]).norm() < 1e-8, "n={n} p={p} h={h}");
                }
            }
        }
    }

    #[test]
    fn gfevd_identity_when_uncorrelated_and_static() {
        let fit = toy_fit(vec![DMatrix::zeros(3, 3)], DMatrix::identity(3, 3));
        let theta = gfevd(&fit, 1, &labels(3)).unwrap();
        assert!((theta.values.clone() - DMatrix::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn gfevd_hand_value_for_correlated_noise() {
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let fit = toy_fit(vec![DMatrix::zeros(2, 2)], sigma);
        let theta = gfevd(&fit, 1, &labels(2)).unwrap();
        assert!((theta.values[(0, 1)] - 0.25).abs() < 1e-12);
        assert!((theta.values[(1, 0)] - 0.25).abs() < 1e-12);
        assert!((theta.values[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gfevd_entries_are_nonnegative() {
        let coeffs = vec![DMatrix::from_row_slice(2, 2, &[0.3, -0.2, 0.1, 0.4])];
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, -0.3, -0.3, 0.8]);
        let fit = toy_fit(coeffs, sigma);
        let theta = gfevd(&fit, 6, &labels(2)).unwrap();
        assert!(theta.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn gfevd_at_h1_ignores_phi() {
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 2.0]);
        let quiet = toy_fit(vec![DMatrix::zeros(2, 2)], sigma.clone());
        let wild = toy_fit(
            vec![DMatrix::from_row_slice(2, 2, &[0.5, 0.3, -0.2, 0.4])],
            sigma,
        );
        let a = gfevd(&quiet, 1, &labels(2)).unwrap();
        let b = gfevd(&wild, 1, &labels(2)).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn gfevd_rejects_zero_variance() {
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let fit = toy_fit(vec![DMatrix::zeros(2, 2)], sigma);
        match gfevd(&fit, 1, &labels(2)) {
            Err(Error::ZeroResidualVariance { label }) => assert_eq!(label, "L1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("L{i}")).collect()
    }

    #[test]
    fn normalize_identity_is_fixed_point() {
        let theta = SpilloverMatrix {
            values: DMatrix::identity(3, 3),
            horizon: 1,
            kind: SpilloverKind::Raw,
        };
        let norm = normalize_rows(&theta).unwrap();
        assert_eq!(norm.values, DMatrix::identity(3, 3));
        assert_eq!(norm.kind, SpilloverKind::Normalized);
    }

    #[test]
    fn normalize_hand_row() {
        let theta = SpilloverMatrix {
            values: DMatrix::from_row_slice(2, 2, &[2.0, 2.0, 1.0, 3.0]),
            horizon: 1,
            kind: SpilloverKind::Raw,
        };
        let norm = normalize_rows(&theta).unwrap();
        assert_eq!(norm.values[(0, 0)], 0.5);
        assert_eq!(norm.values[(0, 1)], 0.5);
        for i in 0..2 {
            let s: f64 = norm.values.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn normalize_rejects_zero_row() {
        let theta = SpilloverMatrix {
            values: DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 1.0]),
            horizon: 1,
            kind: SpilloverKind::Raw,
        };
        assert!(matches!(normalize_rows(&theta), Err(Error::ZeroRowSum { row: 0 })));
    }

    #[test]
    fn net_pairwise_symmetric_input_gives_zero() {
        let norm = SpilloverMatrix {
            values: DMatrix::from_row_slice(2, 2, &[0.7, 0.3, 0.3, 0.7]),
            horizon: 1,
            kind: SpilloverKind::Normalized,
        };
        let net = net_pairwise(&norm).unwrap();
        assert_eq!(net.values, DMatrix::zeros(2, 2));
    }

    #[test]
    fn net_pairwise_hand_values_and_complementary_zeros() {
        let norm = SpilloverMatrix {
            values: DMatrix::from_row_slice(2, 2, &[0.7, 0.3, 0.1, 0.9]),
            horizon: 1,
            kind: SpilloverKind::Normalized,
        };
        let net = net_pairwise(&norm).unwrap();
        assert!((net.values[(0, 1)] - 0.2).abs() < 1e-15);
        assert_eq!(net.values[(1, 0)], 0.0);
        assert_eq!(net.values[(0, 0)], 0.0);
    }

    #[test]
    fn net_pairwise_complementary_zeros_random() {
        let mut state = 777u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let raw = DMatrix::from_fn(6, 6, |_, _| next() + 0.01);
        let norm = normalize_rows(&SpilloverMatrix {
            values: raw,
            horizon: 3,
            kind: SpilloverKind::Raw,
        })
        .unwrap();
        let net = net_pairwise(&norm).unwrap();
        for i in 0..6 {
            assert_eq!(net.values[(i, i)], 0.0);
            for j in 0..6 {
                assert_eq!(net.values[(i, j)] * net.values[(j, i)], 0.0);
                assert!(net.values[(i, j)] >= 0.0);
            }
        }
    }

    #[test]
    fn pearson_affine_dependence_is_one() {
        let w = DMatrix::from_fn(10, 2, |r, c| {
            let x = r as f64 * 0.7 + (r as f64).sin();
            if c == 0 { x } else { 2.0 * x + 3.0 }
        });
        let c = pearson_window(&w);
        assert!((c[(0, 1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_sign_invariance() {
        let w = DMatrix::from_fn(10, 2, |r, c| {
            let x = (r as f64 * 1.3).cos();
            if c == 0 { x } else { -x }
        });
        let c = pearson_window(&w);
        assert!((c[(0, 1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_constant_column_convention() {
        let w = DMatrix::from_fn(8, 3, |r, c| match c {
            0 => 5.0,
            1 => r as f64,
            _ => (r as f64).sin() + 1.5,
        });
        let c = pearson_window(&w);
        assert_eq!(c[(0, 0)], 1.0);
        assert_eq!(c[(0, 1)], 0.0);
        assert_eq!(c[(2, 0)], 0.0);
        assert!((c[(1, 2)] - c[(2, 1)]).abs() < 1e-15);
    }

    fn net_base(n: usize) -> SpilloverMatrix {
        let mut values = DMatrix::zeros(n, n);
        values[(0, 1)] = 0.4;
        SpilloverMatrix { values, horizon: 5, kind: SpilloverKind::NetPairwise }
    }

    #[test]
    fn dynamic_adjacency_neutral_when_correlations_are_one() {
        let dyn_adj = DynamicAdjacency::new(net_base(2), 0.3).unwrap();
        // Perfectly affine columns give |corr| = 1 everywhere.
        let lagged = DMatrix::from_fn(22, 2, |r, c| {
            let x = (r as f64).sin() + 2.0;
            if c == 0 { x } else { 3.0 * x + 1.0 }
        });
        let a = dynamic_adjacency(&dyn_adj, &lagged).unwrap();
        assert!((a[(0, 1)] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn dynamic_adjacency_hand_value() {
        let base = net_base(2);
        let corr_mid = DMatrix::from_element(2, 2, 0.5);
        let corr_long = DMatrix::from_element(2, 2, 0.25);
        let a = modulate_adjacency(&base.values, &corr_mid, &corr_long, 0.5);
        assert!((a[(0, 1)] - 0.15).abs() < 1e-15);
        assert_eq!(a[(1, 0)], 0.0);
    }

    #[test]
    fn dynamic_adjacency_rho_one_ignores_long_window() {
        let dyn_adj = DynamicAdjacency::new(net_base(2), 1.0).unwrap();
        let mut lagged = DMatrix::from_fn(22, 2, |r, c| ((r * (c + 2)) as f64 * 0.7).sin() + 2.0);
        let a1 = dynamic_adjacency(&dyn_adj, &lagged).unwrap();
        // Perturb only rows outside the mid window (the first 17 rows).
        for r in 0..17 {
            lagged[(r, 0)] += (r as f64) * 0.11 + 0.3;
        }
        let a2 = dynamic_adjacency(&dyn_adj, &lagged).unwrap();
        assert_eq!(a1, a2);
    }

    #[test]
    fn dynamic_adjacency_requires_22_rows() {
        let dyn_adj = DynamicAdjacency::new(net_base(2), 0.5).unwrap();
        let lagged = DMatrix::zeros(10, 2);
        assert!(matches!(
            dynamic_adjacency(&dyn_adj, &lagged),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pipeline_on_planted_coupling_finds_dominant_direction() {
        // Strong influence from index 1 onto index 0 should appear as a
        // dominant (0←1) net spillover edge... net_pairwise orientation is
        // (i, j) = shock from j received by i.
        let coupling = DMatrix::from_row_slice(2, 2, &[0.2, 0.6, 0.0, 0.2]);
        let mut hits = 0;
        for seed in 0..20u64 {
            let panel = generate_synthetic(&SyntheticSpec {
                n: 2,
                t: 3000,
                coupling: coupling.clone(),
                noise_scale: 0.3,
                seed,
            })
            .unwrap();
            let net = spillover_graph(&panel, 1, 5, 1e-6).unwrap();
            if net.values[(0, 1)] > net.values[(1, 0)] {
                hits += 1;
            }
        }
        assert!(hits >= 19, "hits = {hits}");
    }
}
