//! File formats, expectation tables, the suite runner and the command-line
//! front end around `trigeom-core`.

pub mod cli;
pub mod descriptor;
pub mod dot;
pub mod expect;
pub mod format;
pub mod suite;

pub use trigeom_core as core;
