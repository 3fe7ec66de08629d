//! Vector fields of tightly focused beams and scattering by a single
//! oscillator sitting at the focus.
//!
//! Reduced Gaussian units with `c = 1`; the default wavenumber is `k = 2pi`
//! so lengths are measured in wavelengths.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beams;
pub mod cli;
pub mod debye;
pub mod error;
pub mod multipole;
pub mod numerics;
pub mod scattering;
pub mod vector;

pub use beams::{incident_power, make_spectrum, AngularSpectrum, BeamKind, BeamParams};
pub use debye::{FocalField, FocalGrid, QuadratureOrders};
pub use error::{Error, Result};
pub use multipole::{MultipoleCoefficients, Parity};
pub use scattering::{Oscillator, OscillatorKind, ScatteringSummary, SweepConfig, SweepRow};
pub use vector::{ComplexField3, TangentVector, Vec3};
