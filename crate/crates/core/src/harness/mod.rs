//! Verification pipelines and reports.
