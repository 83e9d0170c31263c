//! Simulation of a momentum-entangled photon pair feeding a filtered
//! double-slit interferometer.
//!
//! Alice measures transverse position or momentum of her photon; Bob sends
//! the twin through a directional filter, a double slit and onto a screen.
//! The crate evaluates Bob's patterns two ways: `Physical` mode applies
//! ordinary linear optics to every collapsed branch, while `PaperNarrative`
//! mode lets position-collapsed branches bypass the directional filter.
//! Only the second mode produces a basis-dependent pattern on Bob's side.
//!
//! Supporting modules cover the two-level slit model and its linearity audit
//! ([`toymodel`]), the perturbative down-conversion correlators ([`spdc`]) and
//! the bench file format plus telegraph runner ([`bench`]).

pub mod bench;
pub mod error;
pub mod measurement;
pub mod numerics;
pub mod optics;
pub mod source;
pub mod spdc;
pub mod toymodel;

pub use error::{Error, Result};
pub use num_complex::Complex64;
