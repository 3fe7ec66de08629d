//! Angular spectra of the focused plane wave (FPW) and the directional
//! x-dipole wave (p_x) on the Gaussian reference sphere.
//!
//! Units are reduced Gaussian units with `c = 1`. The default wavenumber is
//! `k = 2pi` (wavelength 1) and the default amplitude `f E_0 = 1`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::numerics::SolidAngleQuadrature;
use crate::vector::{TangentVector, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamKind {
    /// Aplanatically focused, x-polarized plane wave.
    Fpw,
    /// Time-reversed radiation of an x-oriented electric dipole.
    Px,
}

impl fmt::Display for BeamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeamKind::Fpw => f.write_str("fpw"),
            BeamKind::Px => f.write_str("px"),
        }
    }
}

impl FromStr for BeamKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fpw" => Ok(BeamKind::Fpw),
            "px" | "p_x" => Ok(BeamKind::Px),
            other => invalid(format!("unknown beam kind '{other}' (expected fpw or px)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    pub kind: BeamKind,
    /// Semiaperture angle in radians, `(0, pi/2]`.
    pub alpha: f64,
    /// Wavenumber `2pi / lambda`.
    pub k: f64,
    /// The product `f E_0`.
    pub amplitude: f64,
}

impl BeamParams {
    pub fn new(kind: BeamKind, alpha: f64) -> Result<Self> {
        Self::with_scale(kind, alpha, 2.0 * PI, 1.0)
    }

    pub fn with_scale(kind: BeamKind, alpha: f64, k: f64, amplitude: f64) -> Result<Self> {
        let p = Self {
            kind,
            alpha,
            k,
            amplitude,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= FRAC_PI_2) {
            return invalid(format!("semiaperture {} outside (0, pi/2]", self.alpha));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return invalid(format!("wavenumber must be positive, got {}", self.k));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return invalid(format!("amplitude must be positive, got {}", self.amplitude));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.k
    }
}

/// The vector amplitude `A(theta, phi)` in the `(e_theta, e_phi)` basis.
/// Real valued and zero outside the aperture cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularSpectrum {
    params: BeamParams,
}

impl AngularSpectrum {
    pub fn new(params: BeamParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn params(&self) -> &BeamParams {
        &self.params
    }

    pub fn kind(&self) -> BeamKind {
        self.params.kind
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn k(&self) -> f64 {
        self.params.k
    }

    pub fn amplitude(&self) -> f64 {
        self.params.amplitude
    }

    pub fn evaluate(&self, theta: f64, phi: f64) -> TangentVector {
        if theta > self.params.alpha || theta < 0.0 {
            return TangentVector::default();
        }
        let (sp, cp) = phi.sin_cos();
        let (a_theta, a_phi) = self.components(theta.cos(), cp, sp);
        TangentVector::real(a_theta, a_phi)
    }

    /// `(A_theta, A_phi)` for a direction already known to lie inside the aperture.
    pub(crate) fn components(&self, cos_theta: f64, cos_phi: f64, sin_phi: f64) -> (f64, f64) {
        let a = self.params.amplitude;
        match self.params.kind {
            BeamKind::Fpw => {
                let apod = a * cos_theta.max(0.0).sqrt();
                (apod * cos_phi, -apod * sin_phi)
            }
            BeamKind::Px => (a * cos_theta * cos_phi, -a * sin_phi),
        }
    }

    /// Cartesian `A` and `s x A` for a direction inside the aperture.
    pub(crate) fn cartesian(&self, cos_theta: f64, sin_theta: f64, cos_phi: f64, sin_phi: f64) -> (Vec3, Vec3) {
        let (at, ap) = self.components(cos_theta, cos_phi, sin_phi);
        let e_theta = [cos_theta * cos_phi, cos_theta * sin_phi, -sin_theta];
        let e_phi = [-sin_phi, cos_phi, 0.0];
        let a = [
            at * e_theta[0] + ap * e_phi[0],
            at * e_theta[1] + ap * e_phi[1],
            at * e_theta[2] + ap * e_phi[2],
        ];
        // s x (at e_theta + ap e_phi) = at e_phi - ap e_theta
        let sxa = [
            at * e_phi[0] - ap * e_theta[0],
            at * e_phi[1] - ap * e_theta[1],
            at * e_phi[2] - ap * e_theta[2],
        ];
        (a, sxa)
    }
}

pub fn make_spectrum(params: BeamParams) -> Result<AngularSpectrum> {
    AngularSpectrum::new(params)
}

pub const POWER_ORDERS: (usize, usize) = (32, 16);

/// Power carried through the entrance of the reference sphere,
/// `(1/8pi) ∫ |A|^2 dΣ` with `c = 1`.
pub fn incident_power(spectrum: &AngularSpectrum, n_theta: usize, n_phi: usize) -> Result<f64> {
    let q = SolidAngleQuadrature::cone(spectrum.alpha(), n_theta, n_phi)?;
    let total = q.integrate(|p, a| {
        let (at, ap) = spectrum.components(p.cos_theta, a.cos_phi, a.sin_phi);
        at * at + ap * ap
    });
    Ok(total / (8.0 * PI))
}
