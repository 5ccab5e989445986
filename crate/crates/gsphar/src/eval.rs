//! Forecast evaluation. (implementation pending)
