use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

use focus_scatter::debye::electric_field;
use focus_scatter::multipole::{aperture_factor, expansion_coefficients};
use focus_scatter::numerics::SolidAngleQuadrature;
use focus_scatter::scattering::{
    collected_transmittance, cross_section, detuning_sweep, effective_area_numeric, incident_far_field,
    outgoing_far_field, phase_shift, resonant_cross_section, scattered_far_field, scattering_ratio, summarize,
    transmittance, transmittance_px, Oscillator, SweepConfig,
};
use focus_scatter::{incident_power, make_spectrum, AngularSpectrum, BeamKind, BeamParams, Error};
use proptest::prelude::*;

fn spectrum(kind: BeamKind, alpha: f64) -> AngularSpectrum {
    make_spectrum(BeamParams::new(kind, alpha).unwrap()).unwrap()
}

fn resonant() -> Oscillator {
    Oscillator::classical(1.0, 0.0).unwrap()
}

fn focus_factor(alpha: f64) -> f64 {
    let c = alpha.cos();
    (4.0 - 3.0 * c - c * c * c) / 4.0
}

#[test]
fn px_effective_area_closed_form() {
    for i in 1..=20 {
        let alpha = FRAC_PI_2 * i as f64 / 20.0;
        let s = spectrum(BeamKind::Px, alpha);
        let area = effective_area_numeric(&s).unwrap();
        let exact = 3.0 * PI / (s.k() * s.k() * focus_factor(alpha));
        assert!((area / exact - 1.0).abs() < 1e-12, "{alpha}");
    }
}

#[test]
fn fpw_full_aperture_effective_area() {
    let s = spectrum(BeamKind::Fpw, FRAC_PI_2);
    let k = s.k();
    let inv = 1.0 / effective_area_numeric(&s).unwrap();
    assert!((inv / (64.0 * k * k / (225.0 * PI)) - 1.0).abs() < 1e-12);
}

#[test]
fn fpw_area_from_flux_at_origin_agrees() {
    // circularly symmetric strength: P_inc / S_z(O) is the same area
    for alpha in [0.4, 1.0, FRAC_PI_2] {
        let s = spectrum(BeamKind::Fpw, alpha);
        let sz = focus_scatter::debye::poynting_z(&s, &[0.0; 3]).unwrap();
        let p = incident_power(&s, 32, 16).unwrap();
        assert!((p / sz / effective_area_numeric(&s).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn resonant_scattering_ratio() {
    let k = scattering_ratio(&resonant(), &spectrum(BeamKind::Px, FRAC_PI_2)).unwrap();
    assert!((k - 2.0).abs() < 1e-12);
    let k = scattering_ratio(&resonant(), &spectrum(BeamKind::Px, PI / 3.0)).unwrap();
    assert!((k - 1.1875).abs() < 1e-12);
    let (t, r) = transmittance(&resonant(), &spectrum(BeamKind::Px, PI / 3.0)).unwrap();
    assert!((t - 0.40625).abs() < 1e-12);
    assert_eq!(t + r, 1.0);
    let far = Oscillator::classical(1.0, 1e6).unwrap();
    assert!(scattering_ratio(&far, &spectrum(BeamKind::Px, 1.0)).unwrap() < 1e-11);
}

#[test]
fn scattered_power_matches_scattering_ratio() {
    // (1/8pi) r^2 ∮ |E_sca|^2 dΩ = K P_inc, with the far field taken at kr = 100
    for (kind, alpha, d) in [(BeamKind::Px, 1.1, 0.0), (BeamKind::Fpw, 0.7, 0.8)] {
        let s = spectrum(kind, alpha);
        let osc = Oscillator::classical(1.0, d).unwrap();
        let e0 = electric_field(&s, &[0.0; 3], 64, 32).unwrap().x();
        let kr = 100.0;
        let q = SolidAngleQuadrature::sphere(32, 16).unwrap();
        let flux = q.integrate(|p, a| scattered_far_field(&osc, e0, p.theta, a.phi, kr).unwrap().norm_sqr());
        let r = kr / s.k();
        let p_sca = flux * r * r / (8.0 * PI);
        let expect = scattering_ratio(&osc, &s).unwrap() * incident_power(&s, 32, 16).unwrap();
        assert!((p_sca / expect - 1.0).abs() < 1e-12, "{kind}: {p_sca} vs {expect}");
    }
}

#[test]
fn forward_extinction_for_full_aperture_dipole_wave() {
    let s = spectrum(BeamKind::Px, FRAC_PI_2);
    let c = expansion_coefficients(&s, 4, 64, 32).unwrap();
    let out = outgoing_far_field(&resonant(), &c, &s, 0.0, 0.0, 200.0).unwrap();
    let inc = incident_far_field(&s, 0.0, 0.0, 200.0).unwrap();
    assert!(out.norm() / inc.norm() < 1e-12);
}

#[test]
fn fpw_forward_field_partially_cancelled() {
    // the scattered field removes the dipole fraction 0.8 of the on-axis plane-wave amplitude
    let s = spectrum(BeamKind::Fpw, FRAC_PI_2);
    let c = expansion_coefficients(&s, 4, 64, 32).unwrap();
    let out = outgoing_far_field(&resonant(), &c, &s, 0.0, 0.0, 200.0).unwrap();
    let inc = incident_far_field(&s, 0.0, 0.0, 200.0).unwrap();
    assert!((out.norm() / inc.norm() - 0.2).abs() < 1e-12);
}

#[test]
fn outgoing_field_tends_to_incident_far_from_resonance() {
    let s = spectrum(BeamKind::Fpw, 1.0);
    let c = expansion_coefficients(&s, 4, 64, 32).unwrap();
    let osc = Oscillator::classical(1.0, 1e8).unwrap();
    let out = outgoing_far_field(&osc, &c, &s, 0.3, 0.2, 100.0).unwrap();
    let inc = incident_far_field(&s, 0.3, 0.2, 100.0).unwrap();
    assert!((out - inc).norm() < 1e-7 * inc.norm());
}

#[test]
fn collected_transmittance_matches_direct_integration() {
    // brute-force integral of |E_out|^2 over the collection cone
    let osc = Oscillator::classical(1.0, 0.3).unwrap();
    for (kind, alpha, beta) in [
        (BeamKind::Fpw, PI / 3.0, PI / 3.0),
        (BeamKind::Fpw, 0.6, 1.2),
        (BeamKind::Px, 1.3, 0.5),
    ] {
        let s = spectrum(kind, alpha);
        let c = expansion_coefficients(&s, 2, 64, 32).unwrap();
        let kr = 50.0;
        let lit = alpha.min(beta);
        let band = |lo: f64, hi: f64| SolidAngleQuadrature::polar_range(lo, hi, 100, 32).unwrap();
        let out_sq = |p: &focus_scatter::numerics::PolarNode, a: &focus_scatter::numerics::AzimuthNode| {
            outgoing_far_field(&osc, &c, &s, p.theta, a.phi, kr).unwrap().norm_sqr()
        };
        let mut out = band(0.0, lit).integrate(out_sq);
        if beta > lit {
            out += band(lit, beta).integrate(out_sq);
        }
        let inc = band(0.0, lit).integrate(|p, a| incident_far_field(&s, p.theta, a.phi, kr).unwrap().norm_sqr());
        let t = collected_transmittance(&osc, &s, beta).unwrap();
        assert!(
            (t - out / inc).abs() < 1e-10,
            "{kind} {alpha} {beta}: {t} vs {}",
            out / inc
        );
    }
}

#[test]
fn fpw_fig1b_dip() {
    let t = collected_transmittance(&resonant(), &spectrum(BeamKind::Fpw, PI / 3.0), PI / 3.0).unwrap();
    assert!((t - 0.18720756554251852).abs() < 1e-12, "{t}");
}

#[test]
fn px_sweep_reaches_zero() {
    let mut c = SweepConfig::new(BeamKind::Px, FRAC_PI_2, FRAC_PI_2);
    c.detuning_min = -2.0;
    c.detuning_max = 2.0;
    c.steps = 41;
    let rows = detuning_sweep(&c).unwrap();
    let mid = &rows[20];
    assert_eq!(mid.detuning_over_gamma, 0.0);
    assert!(mid.transmittance.abs() < 1e-12);
    assert!(mid.phase.is_none());
    for (a, b) in rows.iter().zip(rows.iter().rev()) {
        assert!((a.transmittance - b.transmittance).abs() < 1e-12);
    }
}

#[test]
fn tls_sweep_uses_full_collection() {
    let mut c = SweepConfig::new(BeamKind::Px, FRAC_PI_2, 0.5);
    c.oscillator = focus_scatter::OscillatorKind::Tls;
    c.rabi = 1.0;
    c.detuning_min = -1.0;
    c.detuning_max = 1.0;
    c.steps = 3;
    let rows = detuning_sweep(&c).unwrap();
    // K = 2 sigma/sigma0 and sigma/sigma0 = 1/3 on resonance
    assert!((rows[1].transmittance - (1.0 - 1.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn phase_shift_extremum_analytic() {
    // for aperture factor c the extremum sits at d = sqrt(1 - c)/2 with tan|phi| = c d/(1 - c)
    for (kind, alpha) in [
        (BeamKind::Fpw, FRAC_PI_4),
        (BeamKind::Fpw, FRAC_PI_6),
        (BeamKind::Px, FRAC_PI_4),
    ] {
        let c = aperture_factor(kind, alpha).unwrap();
        let d = (1.0 - c).sqrt() / 2.0;
        let peak = phase_shift(kind, alpha, d).unwrap().abs();
        assert!((peak.tan() - c * d / (1.0 - c)).abs() < 1e-14);
        for off in [-1e-3, 1e-3] {
            assert!(phase_shift(kind, alpha, d + off).unwrap().abs() < peak);
        }
    }
    let v = phase_shift(BeamKind::Fpw, FRAC_PI_4, 0.5).unwrap().to_degrees();
    assert!((v.abs() - 13.1).abs() < 0.05);
}

#[test]
fn summary_is_consistent() {
    let s = spectrum(BeamKind::Fpw, 1.0);
    let osc = Oscillator::classical(2.0, 0.7).unwrap();
    let sum = summarize(&osc, &s).unwrap();
    assert!((sum.k * sum.area_eff - sum.sigma).abs() < 1e-15);
    assert_eq!(sum.t + sum.r, 1.0);
    assert!(sum.phi.is_some());
    let sum = summarize(&resonant(), &spectrum(BeamKind::Px, FRAC_PI_2)).unwrap();
    assert!(sum.phi.is_none());
}

#[test]
fn tls_has_no_coherent_far_field() {
    let tls = Oscillator::tls(1.0, 0.0, 0.5).unwrap();
    let s = spectrum(BeamKind::Px, 1.0);
    assert!(matches!(
        collected_transmittance(&tls, &s, 1.0),
        Err(Error::InvalidArgument(_))
    ));
}

proptest! {
    #[test]
    fn lorentzian_properties(gamma in 0.01f64..10.0, d in -20.0f64..20.0, lambda in 0.1f64..5.0) {
        let s0 = resonant_cross_section(lambda);
        let plus = cross_section(&Oscillator::classical(gamma, d * gamma).unwrap(), lambda).unwrap();
        let minus = cross_section(&Oscillator::classical(gamma, -d * gamma).unwrap(), lambda).unwrap();
        prop_assert!(plus > 0.0 && plus <= s0);
        prop_assert_eq!(plus, minus);
        let half = cross_section(&Oscillator::classical(gamma, 0.5 * gamma).unwrap(), lambda).unwrap();
        prop_assert!((half / s0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn phase_is_antisymmetric(alpha in 0.05f64..FRAC_PI_2, d in 0.0f64..30.0, px in any::<bool>()) {
        let kind = if px { BeamKind::Px } else { BeamKind::Fpw };
        if let (Ok(a), Ok(b)) = (phase_shift(kind, alpha, d), phase_shift(kind, alpha, -d)) {
            prop_assert!((a + b).abs() < 1e-14);
        }
    }

    #[test]
    fn eq7_beta_invariance_and_monotonicity(a in 0.02f64..1.5, b1 in 0.01f64..1.0, b2 in 0.01f64..1.0, step in 1e-4f64..0.05) {
        let (b1, b2) = (b1 * a, b2 * a);
        prop_assert_eq!(transmittance_px(a, b1).unwrap().to_bits(), transmittance_px(a, b2).unwrap().to_bits());
        let beta = 1.0;
        prop_assert!(transmittance_px(a + step, beta).unwrap() <= transmittance_px(a, beta).unwrap());
    }

    #[test]
    fn transmittance_and_reflectance_sum_to_one(alpha in 0.05f64..FRAC_PI_2, d in -5.0f64..5.0) {
        let osc = Oscillator::classical(1.0, d).unwrap();
        let (t, r) = transmittance(&osc, &spectrum(BeamKind::Fpw, alpha)).unwrap();
        prop_assert_eq!(t + r, 1.0);
        prop_assert!((0.0..=1.0).contains(&t));
    }
}
