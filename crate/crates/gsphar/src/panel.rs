//! Realized-volatility panels.
//!
//! Daily realized volatility is the sum of squared intraday returns; the
//! panels store `scale · sqrt(RV)` (default scale 100, i.e. percentage
//! points) aligned on common trading days across all indices. Descriptive
//! statistics, an augmented Dickey-Fuller unit-root check and a seeded
//! synthetic VAR(1)-in-logs generator round out the module.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default multiplicative scale applied to sqrt(RV).
pub const DEFAULT_SCALE: f64 = 100.0;

/// ADF 5% critical value for the constant-only specification.
pub const ADF_CRIT_5PCT: f64 = -2.86;

/// Intraday log-returns per (day, index) cell.
#[derive(Debug, Clone)]
pub struct ReturnPanel {
    pub labels: Vec<String>,
    pub days: Vec<String>,
    /// `returns[day][index]` holds that cell's intraday returns in order.
    pub returns: Vec<Vec<Vec<f64>>>,
}

impl ReturnPanel {
    pub fn new(labels: Vec<String>, days: Vec<String>, returns: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        check_labels(&labels)?;
        check_days(&days)?;
        if returns.len() != days.len() {
            return Err(Error::InvalidPanel(format!(
                "expected {} day rows, got {}",
                days.len(),
                returns.len()
            )));
        }
        for (d, row) in returns.iter().enumerate() {
            if row.len() != labels.len() {
                return Err(Error::InvalidPanel(format!(
                    "day {} has {} cells for {} labels",
                    days[d],
                    row.len(),
                    labels.len()
                )));
            }
            for (i, cell) in row.iter().enumerate() {
                if cell.is_empty() {
                    return Err(Error::InvalidPanel(format!(
                        "cell (day {}, index {}) has no returns",
                        days[d], labels[i]
                    )));
                }
                if cell.iter().any(|r| !r.is_finite()) {
                    return Err(Error::NonFiniteReturn {
                        day: days[d].clone(),
                        label: labels[i].clone(),
                    });
                }
            }
        }
        Ok(Self { labels, days, returns })
    }
}

/// Aligned panel of scaled square-root realized volatility, T×N.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolPanel {
    pub labels: Vec<String>,
    pub days: Vec<String>,
    pub values: DMatrix<f64>,
    /// Scale already applied to sqrt(RV); metadata only.
    pub scale: f64,
}

impl VolPanel {
    pub fn new(labels: Vec<String>, days: Vec<String>, values: DMatrix<f64>, scale: f64) -> Result<Self> {
        check_labels(&labels)?;
        check_days(&days)?;
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::InvalidPanel(format!("scale must be positive, got {scale}")));
        }
        if values.nrows() != days.len() || values.ncols() != labels.len() {
            return Err(Error::InvalidPanel(format!(
                "value matrix is {}x{}, panel is {}x{}",
                values.nrows(),
                values.ncols(),
                days.len(),
                labels.len()
            )));
        }
        for t in 0..values.nrows() {
            for i in 0..values.ncols() {
                let v = values[(t, i)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidPanel(format!(
                        "value at (day {}, index {}) is {v}",
                        days[t], labels[i]
                    )));
                }
            }
        }
        Ok(Self { labels, days, values, scale })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn t(&self) -> usize {
        self.days.len()
    }

    /// One index's series as a dense vector.
    pub fn series(&self, index: usize) -> DVector<f64> {
        self.values.column(index).into_owned()
    }

    /// Row range as an owned sub-panel matrix (rows `start..end`).
    pub fn window(&self, start: usize, end: usize) -> DMatrix<f64> {
        self.values.rows(start, end - start).into_owned()
    }
}

/// Per-index descriptive statistics in the report column order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexStats {
    pub label: String,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    /// Raw (not excess) kurtosis.
    pub kurtosis: f64,
    pub adf_stat: f64,
    pub adf_reject: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelStats {
    pub rows: Vec<IndexStats>,
}

/// Specification for the synthetic spillover panel generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub t: usize,
    /// Directed VAR(1) coefficient matrix in log space; entry (i, j) is the
    /// influence of index j at t−1 on index i at t.
    pub coupling: DMatrix<f64>,
    pub noise_scale: f64,
    pub seed: u64,
}

/// Builds the scaled sqrt-RV panel from intraday returns.
///
/// `value(t, i) = scale · sqrt(Σ_m r²_{m,t,i})`.
pub fn compute_rv(returns: &ReturnPanel, scale: f64) -> Result<VolPanel> {
    let t = returns.days.len();
    let n = returns.labels.len();
    let mut values = DMatrix::zeros(t, n);
    for d in 0..t {
        for i in 0..n {
            let rv: f64 = returns.returns[d][i].iter().map(|r| r * r).sum();
            values[(d, i)] = scale * rv.sqrt();
        }
    }
    VolPanel::new(returns.labels.clone(), returns.days.clone(), values, scale)
}

/// A single index's dated observations prior to alignment.
#[derive(Debug, Clone)]
pub struct DatedSeries {
    pub label: String,
    pub observations: Vec<(String, f64)>,
}

/// Intersects the series on common dates; column order follows input order.
pub fn align_panels(series: &[DatedSeries], scale: f64) -> Result<VolPanel> {
    if series.is_empty() {
        return Err(Error::EmptyDateIntersection);
    }
    let mut common: Vec<String> = series[0].observations.iter().map(|(d, _)| d.clone()).collect();
    for s in &series[1..] {
        let dates: std::collections::HashSet<&str> =
            s.observations.iter().map(|(d, _)| d.as_str()).collect();
        common.retain(|d| dates.contains(d.as_str()));
    }
    common.sort();
    common.dedup();
    if common.is_empty() {
        return Err(Error::EmptyDateIntersection);
    }

    let n = series.len();
    let mut values = DMatrix::zeros(common.len(), n);
    for (i, s) in series.iter().enumerate() {
        let lookup: std::collections::HashMap<&str, f64> = s
            .observations
            .iter()
            .map(|(d, v)| (d.as_str(), *v))
            .collect();
        for (t, day) in common.iter().enumerate() {
            values[(t, i)] = lookup[day.as_str()];
        }
    }
    let labels = series.iter().map(|s| s.label.clone()).collect();
    VolPanel::new(labels, common, values, scale)
}

/// Descriptive statistics plus the ADF check, one row per index.
///
/// Central moments use the sample mean; the standard deviation uses the
/// `T − 1` denominator; kurtosis is reported raw. A zero-variance series
/// reports std, skewness and kurtosis as 0.
pub fn describe(panel: &VolPanel) -> Result<PanelStats> {
    let t = panel.t();
    if t < 30 {
        return Err(Error::SeriesTooShort { required: 30, actual: t });
    }
    let mut rows = Vec::with_capacity(panel.n());
    for i in 0..panel.n() {
        let x = panel.series(i);
        let mean = x.sum() / t as f64;
        let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / t as f64;
        let degenerate = m2 <= (1e-12 * (1.0 + mean.abs())).powi(2);
        let (std, skewness, kurtosis) = if degenerate {
            (0.0, 0.0, 0.0)
        } else {
            let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / t as f64;
            let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / t as f64;
            let std = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1) as f64).sqrt();
            (std, m3 / m2.powf(1.5), m4 / (m2 * m2))
        };
        // A degenerate column has no unit-root question to answer; report a
        // zero statistic instead of failing the whole panel.
        let (adf_stat, adf_reject) = match adf_test(x.as_slice()) {
            Ok(r) => r,
            Err(Error::SingularRegression { .. }) => (0.0, false),
            Err(e) => return Err(e),
        };
        rows.push(IndexStats {
            label: panel.labels[i].clone(),
            mean,
            std,
            skewness,
            kurtosis,
            adf_stat,
            adf_reject,
        });
    }
    Ok(PanelStats { rows })
}

/// Augmented Dickey-Fuller test, constant-only specification.
///
/// Regresses `Δy_t` on `{1, y_{t−1}, Δy_{t−1}, …, Δy_{t−k}}` with the
/// Schwert lag `k = ⌊12 (T/100)^{1/4}⌋` and returns the t-ratio of the
/// `y_{t−1}` coefficient plus the 5% rejection flag (statistic < −2.86).
pub fn adf_test(series: &[f64]) -> Result<(f64, bool)> {
    let t = series.len();
    if t < 30 {
        return Err(Error::SeriesTooShort { required: 30, actual: t });
    }
    let k = (12.0 * (t as f64 / 100.0).powf(0.25)).floor() as usize;
    let diffs: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    // Row for target Δy_t needs Δy_{t−k}; with Δ indexed 0..T−2 the first
    // usable target is index k.
    let n_eff = diffs.len().checked_sub(k).filter(|&n| n > k + 2).ok_or(
        Error::SeriesTooShort {
            required: 2 * k + 4,
            actual: t,
        },
    )?;
    let p = k + 2;
    let mut x = DMatrix::zeros(n_eff, p);
    let mut y = DVector::zeros(n_eff);
    for row in 0..n_eff {
        let ti = row + k; // index into diffs for the target
        y[row] = diffs[ti];
        x[(row, 0)] = 1.0;
        x[(row, 1)] = series[ti]; // y_{t−1}: level preceding the target diff
        for lag in 1..=k {
            x[(row, 1 + lag)] = diffs[ti - lag];
        }
    }
    let (beta, se) = linalg::ols_with_stderr(&x, &y, "ADF regression")?;
    if !se[1].is_finite() || se[1] == 0.0 {
        return Err(Error::SingularRegression {
            context: "ADF regression: zero standard error".into(),
        });
    }
    let stat = beta[1] / se[1];
    Ok((stat, stat < ADF_CRIT_5PCT))
}

/// Draws a stationary VAR(1)-in-logs panel, exponentiated so values stay
/// positive. Deterministic per seed.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<VolPanel> {
    if spec.coupling.nrows() != spec.n || spec.coupling.ncols() != spec.n {
        return Err(Error::InvalidPanel(format!(
            "coupling matrix is {}x{}, expected {}x{}",
            spec.coupling.nrows(),
            spec.coupling.ncols(),
            spec.n,
            spec.n
        )));
    }
    if spec.noise_scale <= 0.0 || !spec.noise_scale.is_finite() {
        return Err(Error::InvalidPanel(format!(
            "noise scale must be positive, got {}",
            spec.noise_scale
        )));
    }
    let radius = linalg::spectral_radius(&spec.coupling);
    if radius >= 1.0 {
        return Err(Error::ExplosiveCoupling { spectral_radius: radius });
    }

    const BURN_IN: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = StandardNormal;
    let mut state = DVector::<f64>::zeros(spec.n);
    let mut values = DMatrix::zeros(spec.t, spec.n);
    for step in 0..(BURN_IN + spec.t) {
        let eps = DVector::from_fn(spec.n, |_, _| {
            let z: f64 = normal.sample(&mut rng);
            spec.noise_scale * z
        });
        state = &spec.coupling * &state + eps;
        if step >= BURN_IN {
            let t = step - BURN_IN;
            for i in 0..spec.n {
                values[(t, i)] = state[i].exp().max(0.0);
            }
        }
    }

    let labels = (0..spec.n).map(|i| format!("S{:02}", i + 1)).collect();
    let days = synthetic_days(spec.t);
    VolPanel::new(labels, days, values, DEFAULT_SCALE)
}

/// Sequential ISO-8601 dates starting 2000-01-03.
pub fn synthetic_days(t: usize) -> Vec<String> {
    let mut days = Vec::with_capacity(t);
    let (mut y, mut m, mut d) = (2000u32, 1u32, 3u32);
    for _ in 0..t {
        days.push(format!("{y:04}-{m:02}-{d:02}"));
        d += 1;
        if d > days_in_month(y, m) {
            d = 1;
            m += 1;
            if m > 12 {
                m = 1;
                y += 1;
            }
        }
    }
    days
}

fn days_in_month(y: u32, m: u32) -> u32 {
    match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if (y % 4 == 0 && y % 100 != 0) || y % 400 == 0 {
                29
            } else {
                28
            }
        }
        _ => unreachable!(),
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidPanel("no index labels".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidPanel(format!("duplicate label {l}")));
        }
    }
    Ok(())
}

fn check_days(days: &[String]) -> Result<()> {
    if days.is_empty() {
        return Err(Error::InvalidPanel("no days".into()));
    }
    for w in days.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidPanel(format!(
                "days not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}
