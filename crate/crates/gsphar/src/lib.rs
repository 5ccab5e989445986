//! Multivariate realized-volatility forecasting on volatility-spillover graphs.
//!
//! The crate covers the full pipeline at library level:
//!
//! - [`panel`] — realized-volatility panels: construction from intraday
//!   returns, date alignment, descriptive statistics, unit-root checking,
//!   and a seeded synthetic generator.
//! - [`spillover`] — the Diebold–Yilmaz connectedness machinery: VAR
//!   estimation, generalized forecast-error variance decomposition, and the
//!   net pairwise spillover graph, plus the correlation-modulated dynamic
//!   adjacency.
//! - [`spectral`] — magnetic-Laplacian graph Fourier analysis for directed
//!   weighted graphs: Hermitian adjacency, normalized magnetic Laplacian,
//!   eigendecomposition with a deterministic phase convention, GFT/IGFT.
//! - [`models`] — the forecasting model zoo: HAR, VHAR, HAR-KS, GNNHAR and
//!   the spectral-domain GSPHAR family (v-GSPHAR, GSPHAR, d-GSPHAR).
//! - [`eval`] — forecast scoring: per-index MAE, Diebold–Mariano tests with
//!   Newey–West variance, and the Model Confidence Set by block bootstrap.
//! - [`runner`] — the config-driven end-to-end pipeline behind the CLI.

pub mod error;
pub mod eval;
pub(crate) mod linalg;
pub mod io;
pub mod models;
pub mod panel;
pub mod runner;
pub mod spectral;
pub mod spillover;

pub use error::{Error, Result};
