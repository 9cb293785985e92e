//! Seeded law suites, scenario files, reports and the planted-violation
//! corpus.
pub mod fixtures;
pub mod gen;
pub mod laws;
pub mod negative;
pub mod par;
pub mod report;
pub mod scenario;
pub mod suites;
