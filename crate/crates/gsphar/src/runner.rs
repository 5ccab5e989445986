//! Config-driven pipeline runner. (implementation pending)
