//! Host-side companion to `gw-core`: the persistent cache file format, the
//! `gw` command line, table reproduction and seeded verification suites.

pub mod cache;
pub mod cli;
pub mod suites;
pub mod tables;

pub use cli::run;
