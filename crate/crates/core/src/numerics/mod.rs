//! Grids, sampled complex fields, unitary transforms, histograms and seeded
//! sampling.

mod dft;
mod field;
mod grid;
mod histogram;
mod sampling;

pub use dft::{dft_unitary, spectral_multiply, Direction};
pub use field::{ComplexField1D, ComplexField2D, NORMALIZATION_TOLERANCE};
pub use grid::GridSpec;
pub use histogram::WeightedHistogram;
pub use sampling::{born_sample, BornDistribution, SeededSampler};
