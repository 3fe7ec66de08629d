//! Quadrature rules and special functions.

pub mod quadrature;
pub mod special;

pub use quadrature::{
    gauss_legendre, solid_angle_quadrature, AzimuthNode, PolarNode, QuadratureRule, SolidAngleQuadrature,
};
pub use special::{angle_functions, riccati_s, spherical_bessel_j, AngleFunctions};
