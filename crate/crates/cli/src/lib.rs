//! Seeded verification suites over `invertibility-core` and the
//! `incl-verify` command-line driver.
//!
//! Every check yields a [`report::Record`] with a status, a slack and a
//! formula anchor from [`anchors::ALL`]. Reports are byte-identical for a
//! fixed command, seed and version.

pub mod analyze;
pub mod anchors;
pub mod cli;
pub mod config;
pub mod report;
pub mod suites;
pub mod sweep;
pub mod zoo_checks;
