//! Numerical-reasoning probes over tabular natural language inference data.

pub mod corpus;
pub mod evalkit;
pub mod numparse;
pub mod probegen;
