//! Spin-dependent Kapitza-Dirac diffraction of electrons in a bichromatic
//! standing light wave, at the level of the two-photon Compton amplitude.
//!
//! The pipeline runs from kinematics through Dirac bispinors and the Compton
//! tensor to a 2x2 spin-propagation matrix, whose minimised contrast measures
//! how strongly diffraction depends on the initial electron spin.

pub mod cli;
pub mod compton;
pub mod contrast;
pub mod dirac;
pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod sweep;
pub mod taylor;

pub use error::{Error, Result};
