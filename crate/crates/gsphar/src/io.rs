//! CSV and manifest serialization. (implementation pending)
