pub mod assembly;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod lfactors;
pub mod numerics;
pub mod orbital_rank1;
pub mod periods;
pub mod report;
pub mod reps;
pub mod samples;
pub mod suites;
pub mod symfunc;
pub mod volumes;
pub mod whittaker;

pub use error::{Error, Result};
