//! Emission and absorption spectra built from an [`EigenSystem`](crate::eigen::EigenSystem).
//!
//! Frequencies are offsets from ω_00 in units of ω_v. Every line is a
//! Lorentzian `κ / ((ω − ω_0)² + κ²)`, whose integral is π.

mod grid;
mod population;
mod series;
mod spectrum;

pub use grid::Grid;
pub use population::PopulationModel;
pub use series::{SpectralSeries, Stick};
pub use spectrum::{
    absorption_spectrum, bound_absorption, ilp_curve, lineshape, lp_blueshift, lpl_spectrum, BlueShift,
    LineOptions, Operator,
};
