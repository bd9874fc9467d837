//! Finite-dimensional operator algebra: *-algebras, spectra, positivity,
//! Gelfand theory, states and the GNS construction, spectral measures and
//! one-parameter unitary groups, all on dense complex matrices.

pub mod algebra;
pub mod error;
pub mod evolution;
pub mod gelfand;
pub mod io;
pub mod linalg;
pub mod positivity;
pub mod random;
pub mod report;
pub mod spectral;
pub mod spectrum;
pub mod states;

pub use error::{Error, Result};
