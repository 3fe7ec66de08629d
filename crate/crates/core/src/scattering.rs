//! A single linear dipole (classical oscillator) or two-level system at the
//! focus: cross sections, effective area, transmittance and the on-axis
//! phase shift.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::beams::{incident_power, AngularSpectrum, BeamKind, POWER_ORDERS};
use crate::debye::FocalField;
use crate::error::{invalid, Error, Result};
use crate::multipole::{aperture_factor, expansion_coefficients, MultipoleCoefficients};
use crate::numerics::SolidAngleQuadrature;
use crate::vector::TangentVector;

/// Smallest `kr` accepted by the far-field expressions.
pub const FAR_FIELD_MIN_KR: f64 = 20.0;

const COLLECTION_ORDERS: (usize, usize) = (64, 32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OscillatorKind {
    Classical,
    Tls,
}

impl fmt::Display for OscillatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OscillatorKind::Classical => f.write_str("classical"),
            OscillatorKind::Tls => f.write_str("tls"),
        }
    }
}

impl FromStr for OscillatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" => Ok(OscillatorKind::Classical),
            "tls" => Ok(OscillatorKind::Tls),
            other => invalid(format!("unknown oscillator '{other}' (expected classical or tls)")),
        }
    }
}

/// Linewidth, detuning and Rabi frequency share one (arbitrary) frequency unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub kind: OscillatorKind,
    /// `Gamma` for the classical oscillator, `Gamma_1` for the TLS.
    pub gamma: f64,
    pub detuning: f64,
    /// Zero for the classical oscillator.
    pub rabi: f64,
}

impl Oscillator {
    pub fn classical(gamma: f64, detuning: f64) -> Result<Self> {
        let o = Self {
            kind: OscillatorKind::Classical,
            gamma,
            detuning,
            rabi: 0.0,
        };
        o.validate()?;
        Ok(o)
    }

    pub fn tls(gamma: f64, detuning: f64, rabi: f64) -> Result<Self> {
        let o = Self {
            kind: OscillatorKind::Tls,
            gamma,
            detuning,
            rabi,
        };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return invalid(format!("linewidth must be positive, got {}", self.gamma));
        }
        if !self.detuning.is_finite() {
            return invalid("detuning must be finite");
        }
        if !(self.rabi >= 0.0 && self.rabi.is_finite()) {
            return invalid(format!("Rabi frequency must be >= 0, got {}", self.rabi));
        }
        if self.kind == OscillatorKind::Classical && self.rabi != 0.0 {
            return invalid("a classical oscillator has no Rabi frequency");
        }
        Ok(())
    }

    pub fn with_detuning(&self, detuning: f64) -> Result<Self> {
        let o = Self { detuning, ..*self };
        o.validate()?;
        Ok(o)
    }

    pub fn detuning_over_gamma(&self) -> f64 {
        self.detuning / self.gamma
    }

    /// `sigma / sigma_0`.
    pub fn lineshape(&self) -> f64 {
        let g2 = self.gamma * self.gamma;
        let d2 = 4.0 * self.detuning * self.detuning;
        g2 / (d2 + g2 + 2.0 * self.rabi * self.rabi)
    }

    /// Complex response `Gamma / (2 Delta + i Gamma)` of the classical dipole.
    pub fn response(&self) -> Result<Complex64> {
        if self.kind != OscillatorKind::Classical {
            return invalid("coherent far fields are only defined for the classical oscillator");
        }
        Ok(self.gamma / Complex64::new(2.0 * self.detuning, self.gamma))
    }
}

pub fn resonant_cross_section(lambda: f64) -> f64 {
    3.0 * lambda * lambda / (2.0 * PI)
}

pub fn cross_section(osc: &Oscillator, lambda: f64) -> Result<f64> {
    osc.validate()?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return invalid(format!("wavelength must be positive, got {lambda}"));
    }
    Ok(resonant_cross_section(lambda) * osc.lineshape())
}

/// `P_inc / (2 W_el(O))` with `W_el = |E(O)|^2 / 16pi`.
pub fn effective_area_numeric(spectrum: &AngularSpectrum) -> Result<f64> {
    let power = incident_power(spectrum, POWER_ORDERS.0, POWER_ORDERS.1)?;
    let e = FocalField::new(*spectrum).electric(&[0.0; 3])?;
    let e2 = e.norm_sqr();
    if !(e2 > 0.0) || !e2.is_finite() {
        return Err(Error::DegenerateBeam(format!("|E(O)|^2 = {e2}")));
    }
    Ok(power * 8.0 * PI / e2)
}

/// `K = P_sca / P_inc = sigma / A`; the wavelength is taken from the spectrum.
pub fn scattering_ratio(osc: &Oscillator, spectrum: &AngularSpectrum) -> Result<f64> {
    let sigma = cross_section(osc, spectrum.params().wavelength())?;
    Ok(sigma / effective_area_numeric(spectrum)?)
}

/// Full-collection `(T, R)` with `R = K / 2`.
pub fn transmittance(osc: &Oscillator, spectrum: &AngularSpectrum) -> Result<(f64, f64)> {
    let r = 0.5 * scattering_ratio(osc, spectrum)?;
    Ok((1.0 - r, r))
}

fn check_angle(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= PI / 2.0) {
        return invalid(format!("{name} = {v} outside (0, pi/2]"));
    }
    Ok(())
}

/// Resonant transmittance of the `p_x` beam collected within the cone `beta`.
pub fn transmittance_px(alpha: f64, beta: f64) -> Result<f64> {
    check_angle("alpha", alpha)?;
    check_angle("beta", beta)?;
    let ca = alpha.cos();
    let cm = alpha.max(beta).cos();
    Ok(1.0 - (4.0 - 3.0 * ca - ca * ca * ca) * (4.0 + 3.0 * cm + cm * cm * cm) / 16.0)
}

/// Dipole pattern `cos(theta) cos(phi) e_theta - sin(phi) e_phi`.
fn dipole_pattern(theta: f64, phi: f64) -> TangentVector {
    let (sp, cp) = phi.sin_cos();
    TangentVector::real(theta.cos() * cp, -sp)
}

fn outgoing_wave(k_r: f64) -> Result<Complex64> {
    if !(k_r >= FAR_FIELD_MIN_KR) || !k_r.is_finite() {
        return Err(Error::Domain(format!(
            "far-field expressions need kr >= {FAR_FIELD_MIN_KR}, got {k_r}"
        )));
    }
    Ok(Complex64::new(0.0, k_r).exp() / k_r)
}

/// Far field radiated by the dipole driven by `E_inc(O)` (its x component).
pub fn scattered_far_field(
    osc: &Oscillator,
    e_inc_origin: Complex64,
    theta: f64,
    phi: f64,
    k_r: f64,
) -> Result<TangentVector> {
    let wave = outgoing_wave(k_r)?;
    let amp = -1.5 * e_inc_origin * osc.response()? * wave;
    Ok(dipole_pattern(theta, phi).scale(amp))
}

/// Far field of the source-free beam, `-k A(theta, phi) e^{ikr}/(kr)`.
pub fn incident_far_field(spectrum: &AngularSpectrum, theta: f64, phi: f64, k_r: f64) -> Result<TangentVector> {
    let wave = outgoing_wave(k_r)?;
    Ok(spectrum.evaluate(theta, phi).scale(-spectrum.k() * wave))
}

/// Coherent sum of the incident and scattered far fields; the dipole is
/// driven by `A_{e,1,1}` taken from `coeffs`.
pub fn outgoing_far_field(
    osc: &Oscillator,
    coeffs: &MultipoleCoefficients,
    spectrum: &AngularSpectrum,
    theta: f64,
    phi: f64,
    k_r: f64,
) -> Result<TangentVector> {
    let inc = incident_far_field(spectrum, theta, phi, k_r)?;
    let amp = -coeffs.a_e(1) * osc.response()? * outgoing_wave(k_r)?;
    Ok(inc + dipole_pattern(theta, phi).scale(amp))
}

/// Angular integrals over a collection cone that fix the collected
/// transmittance for any classical detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collection {
    pub beta: f64,
    /// `A_{e,1,1}` in absolute units.
    pub a11: Complex64,
    /// `∫ |k A|^2` over the illuminated part of the cone.
    pub incident: f64,
    /// `∫ (-k A) . P` over the illuminated part of the cone (real).
    pub overlap: f64,
    /// `∫ |P|^2` over the whole cone.
    pub pattern: f64,
}

impl Collection {
    pub fn new(spectrum: &AngularSpectrum, beta: f64) -> Result<Self> {
        check_angle("beta", beta)?;
        let (nt, np) = COLLECTION_ORDERS;
        let a11 = expansion_coefficients(spectrum, 1, nt, np)?.a_e(1);
        let k = spectrum.k();
        let lit = spectrum.alpha().min(beta);
        let cone = SolidAngleQuadrature::cone(lit, nt, np)?;
        let (mut incident, mut overlap, mut pattern) = (0.0, 0.0, 0.0);
        for p in cone.polar() {
            for a in cone.azimuth() {
                let w = p.weight * cone.phi_weight();
                let (at, ap) = spectrum.components(p.cos_theta, a.cos_phi, a.sin_phi);
                let (pt, pp) = (p.cos_theta * a.cos_phi, -a.sin_phi);
                incident += w * k * k * (at * at + ap * ap);
                overlap -= w * k * (at * pt + ap * pp);
                pattern += w * (pt * pt + pp * pp);
            }
        }
        if beta > lit {
            let band = SolidAngleQuadrature::band(lit, beta, nt, np)?;
            pattern += band.integrate(|p, a| {
                let pt = p.cos_theta * a.cos_phi;
                pt * pt + a.sin_phi * a.sin_phi
            });
        }
        Ok(Self {
            beta,
            a11,
            incident,
            overlap,
            pattern,
        })
    }

    /// Power in the cone relative to the incident power in the cone.
    pub fn transmittance(&self, osc: &Oscillator) -> Result<f64> {
        let g = self.a11 * osc.response()?;
        // F_out = F_inc - g P
        let total = self.incident - 2.0 * (g.conj() * self.overlap).re + g.norm_sqr() * self.pattern;
        Ok(total / self.incident)
    }
}

pub fn collected_transmittance(osc: &Oscillator, spectrum: &AngularSpectrum, beta: f64) -> Result<f64> {
    Collection::new(spectrum, beta)?.transmittance(osc)
}

/// On-axis phase shift of the transmitted light,
/// `arg(1 - i Gamma/(2 Delta + i Gamma) c)` with the aperture factor `c`.
pub fn phase_shift(kind: BeamKind, alpha: f64, delta_over_gamma: f64) -> Result<f64> {
    if !delta_over_gamma.is_finite() {
        return invalid("detuning must be finite");
    }
    let c = aperture_factor(kind, alpha)?;
    let z = 1.0 - Complex64::new(0.0, c) / Complex64::new(2.0 * delta_over_gamma, 1.0);
    if z.norm() < 1e-12 {
        return Err(Error::Domain(format!(
            "phase undefined at detuning {delta_over_gamma}: the forward field vanishes"
        )));
    }
    Ok(z.arg())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub kind: BeamKind,
    pub alpha: f64,
    pub beta: f64,
    pub oscillator: OscillatorKind,
    pub gamma: f64,
    pub rabi: f64,
    pub detuning_min: f64,
    pub detuning_max: f64,
    pub steps: usize,
}

impl SweepConfig {
    pub fn new(kind: BeamKind, alpha: f64, beta: f64) -> Self {
        Self {
            kind,
            alpha,
            beta,
            oscillator: OscillatorKind::Classical,
            gamma: 1.0,
            rabi: 0.0,
            detuning_min: -5.0,
            detuning_max: 5.0,
            steps: 201,
        }
    }

    /// Detunings in units of `gamma`, endpoints included.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.detuning_min.is_finite() && self.detuning_max.is_finite()) {
            return invalid("detuning bounds must be finite");
        }
        if !(self.detuning_max > self.detuning_min) || self.steps < 2 {
            return invalid(format!(
                "empty detuning range [{}, {}] with {} steps",
                self.detuning_min, self.detuning_max, self.steps
            ));
        }
        let span = self.detuning_max - self.detuning_min;
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| self.detuning_min + span * i as f64 / last)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub detuning_over_gamma: f64,
    pub sigma_ratio: f64,
    pub scattering_ratio: f64,
    /// Collected within `beta` for the classical oscillator, full collection
    /// `1 - K/2` for the TLS.
    pub transmittance: f64,
    pub reflectance: f64,
    /// `None` where the phase is undefined.
    pub phase: Option<f64>,
}

pub fn detuning_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let spectrum = crate::beams::make_spectrum(crate::beams::BeamParams::new(config.kind, config.alpha)?)?;
    let grid = config.grid()?;
    let base = match config.oscillator {
        OscillatorKind::Classical => Oscillator::classical(config.gamma, 0.0)?,
        OscillatorKind::Tls => Oscillator::tls(config.gamma, 0.0, config.rabi)?,
    };
    let area = effective_area_numeric(&spectrum)?;
    let sigma0 = resonant_cross_section(spectrum.params().wavelength());
    let collection = match config.oscillator {
        OscillatorKind::Classical => Some(Collection::new(&spectrum, config.beta)?),
        OscillatorKind::Tls => {
            check_angle("beta", config.beta)?;
            None
        }
    };
    grid.par_iter()
        .map(|&d| {
            let osc = base.with_detuning(d * config.gamma)?;
            let sigma = sigma0 * osc.lineshape();
            let k = sigma / area;
            let t = match &collection {
                Some(c) => c.transmittance(&osc)?,
                None => 1.0 - 0.5 * k,
            };
            let phase = match phase_shift(config.kind, config.alpha, d) {
                Ok(p) => Some(p),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                detuning_over_gamma: d,
                sigma_ratio: osc.lineshape(),
                scattering_ratio: k,
                transmittance: t,
                reflectance: 1.0 - t,
                phase,
            })
        })
        .collect()
}

/// Observables of one oscillator in one beam. Areas are in units of the
/// squared length unit of the spectrum (`lambda = 1` by default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSummary {
    pub sigma: f64,
    pub area_eff: f64,
    pub k: f64,
    pub t: f64,
    pub r: f64,
    pub phi: Option<f64>,
}

pub fn summarize(osc: &Oscillator, spectrum: &AngularSpectrum) -> Result<ScatteringSummary> {
    let sigma = cross_section(osc, spectrum.params().wavelength())?;
    let area_eff = effective_area_numeric(spectrum)?;
    let k = sigma / area_eff;
    let phi = match phase_shift(spectrum.kind(), spectrum.alpha(), osc.detuning_over_gamma()) {
        Ok(p) => Some(p),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ScatteringSummary {
        sigma,
        area_eff,
        k,
        t: 1.0 - 0.5 * k,
        r: 0.5 * k,
        phi,
    })
}
