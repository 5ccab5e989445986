//! Forecasting model zoo. (implementation pending)
