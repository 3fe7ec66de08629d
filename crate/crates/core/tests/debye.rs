use std::f64::consts::{FRAC_PI_2, PI};

use focus_scatter::debye::{axial_phase, electric_field, focal_plane_map, magnetic_field, poynting_z};
use focus_scatter::vector::{ComplexField3, Vec3};
use focus_scatter::{incident_power, make_spectrum, AngularSpectrum, BeamKind, BeamParams, Error, FocalField};
use num_complex::Complex64;
use proptest::prelude::*;

fn spectrum(kind: BeamKind, alpha: f64) -> AngularSpectrum {
    make_spectrum(BeamParams::new(kind, alpha).unwrap()).unwrap()
}

fn focus_factor(alpha: f64) -> f64 {
    let c = alpha.cos();
    (4.0 - 3.0 * c - c * c * c) / 4.0
}

#[test]
fn px_origin_field_closed_form() {
    for alpha in [PI / 6.0, PI / 4.0, PI / 3.0, FRAC_PI_2, 0.05] {
        let s = spectrum(BeamKind::Px, alpha);
        let e = electric_field(&s, &[0.0; 3], 64, 32).unwrap();
        let expect = Complex64::new(0.0, -2.0 * s.k() / 3.0 * focus_factor(alpha));
        assert!((e.x() - expect).norm() <= 1e-13 * expect.norm());
        assert!(e.y().norm() + e.z().norm() < 1e-15);
    }
}

#[test]
fn fpw_origin_field_closed_form() {
    for alpha in [0.3, PI / 4.0, 1.2, FRAC_PI_2] {
        let s = spectrum(BeamKind::Fpw, alpha);
        let c: f64 = alpha.cos();
        let e = electric_field(&s, &[0.0; 3], 64, 32).unwrap();
        let expect = Complex64::new(0.0, -s.k() / 15.0 * (8.0 - c.powf(1.5) * (5.0 + 3.0 * c)));
        assert!((e.x() - expect).norm() <= 1e-13 * expect.norm(), "{alpha}");
    }
}

#[test]
fn px_full_aperture_origin_energy_flux() {
    let s = spectrum(BeamKind::Px, FRAC_PI_2);
    let k = s.k();
    let h = magnetic_field(&s, &[0.0; 3], 64, 32).unwrap();
    assert!((h.y() - Complex64::new(0.0, -k / 2.0)).norm() < 1e-13);
    let sz = poynting_z(&s, &[0.0; 3]).unwrap();
    assert!((sz - k * k / (24.0 * PI)).abs() < 1e-13);
    // the flux at the origin is not the energy-density value for this beam
    let e = electric_field(&s, &[0.0; 3], 64, 32).unwrap();
    assert!((sz - e.norm_sqr() / (8.0 * PI)).abs() > 0.1 * sz);
}

#[test]
fn fpw_origin_flux_equals_energy_density() {
    let s = spectrum(BeamKind::Fpw, 1.0);
    let e = electric_field(&s, &[0.0; 3], 64, 32).unwrap();
    let sz = poynting_z(&s, &[0.0; 3]).unwrap();
    assert!((sz - e.norm_sqr() / (8.0 * PI)).abs() < 1e-13 * sz);
}

fn curl(f: &dyn Fn(&Vec3) -> ComplexField3, r: &Vec3, h: f64) -> ComplexField3 {
    let d = |axis: usize, comp: usize| {
        let mut a = *r;
        let mut b = *r;
        a[axis] += h;
        b[axis] -= h;
        (f(&a).0[comp] - f(&b).0[comp]) / (2.0 * h)
    };
    ComplexField3([d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)])
}

#[test]
fn fields_satisfy_maxwell_equations() {
    for kind in [BeamKind::Fpw, BeamKind::Px] {
        let field = FocalField::new(spectrum(kind, 1.2));
        let k = field.k();
        for r in [[0.13, -0.4, 0.25], [0.9, 0.3, -1.1]] {
            let (e, h) = field.fields(&r).unwrap();
            let step = 1e-5;
            let curl_e = curl(&|p| field.electric(p).unwrap(), &r, step);
            let curl_h = curl(&|p| field.magnetic(p).unwrap(), &r, step);
            let ik = Complex64::new(0.0, k);
            let scale = e.norm().max(h.norm()) * k;
            assert!((curl_e - h * ik).norm() < 1e-6 * scale, "{kind} curl E");
            assert!((curl_h + e * ik).norm() < 1e-6 * scale, "{kind} curl H");
        }
    }
}

#[test]
fn field_is_antihermitian() {
    let field = FocalField::new(spectrum(BeamKind::Fpw, 1.0));
    for r in [[0.1, 0.2, 0.3], [-0.7, 1.4, 2.2]] {
        let e = field.electric(&r).unwrap();
        let m = field.electric(&r.map(|v| -v)).unwrap();
        assert!((m + e.conj()).norm() < 1e-12 * e.norm().max(1.0));
    }
}

#[test]
fn far_points_need_explicit_error() {
    let field = FocalField::new(spectrum(BeamKind::Px, 1.0));
    let r = [0.0, 0.0, 1001.0 / field.k()];
    assert!(matches!(field.electric(&r), Err(Error::Accuracy(_))));
}

#[test]
fn orders_scale_with_distance() {
    // a point at kz = 80 is resolved only with the raised orders
    let s = spectrum(BeamKind::Fpw, FRAC_PI_2);
    let field = FocalField::new(s);
    let r = [0.3, 0.0, 80.0 / s.k()];
    let auto = field.electric(&r).unwrap();
    let dense = electric_field(&s, &r, 512, 256).unwrap();
    assert!((auto - dense).norm() < 1e-9 * dense.norm());
}

#[test]
fn focal_map_is_normalized_at_origin() {
    let s = spectrum(BeamKind::Px, FRAC_PI_2);
    let grid = focal_plane_map(&s, 6.0, 17).unwrap();
    let centre = grid.index(8, 8);
    assert_eq!(grid.axis[8], 0.0);
    assert!((grid.s_z_normalized()[centre] - 1.0).abs() < 1e-12);
    assert!((grid.ex_sq_normalized()[centre] - 1.0).abs() < 1e-12);
    // mirror symmetry of the intensity
    for iy in 0..17 {
        for ix in 0..17 {
            let a = grid.e_sq[grid.index(ix, iy)];
            let b = grid.e_sq[grid.index(16 - ix, 16 - iy)];
            assert!((a - b).abs() < 1e-11 * grid.e_sq[centre]);
        }
    }
    assert!(focal_plane_map(&s, 6.0, 8).is_err());
    assert!(focal_plane_map(&s, -1.0, 32).is_err());
}

#[test]
fn axial_phase_is_point_symmetric() {
    for kind in [BeamKind::Fpw, BeamKind::Px] {
        let s = spectrum(kind, 1.0);
        let z: Vec<f64> = (1..=10).map(|i| 2.7 * i as f64).collect();
        let minus: Vec<f64> = z.iter().map(|v| -v).collect();
        let a = axial_phase(&s, &z).unwrap();
        let b = axial_phase(&s, &minus).unwrap();
        for (p, q) in a.iter().zip(&b) {
            if let (Some(p), Some(q)) = (p, q) {
                let d = (p + q + PI).rem_euclid(2.0 * PI);
                assert!(d.min(2.0 * PI - d) < 1e-9);
            }
        }
    }
}

#[test]
fn axial_phase_decreases_through_focus() {
    let s = spectrum(BeamKind::Fpw, 0.5);
    let z: Vec<f64> = (-20..=20).map(|i| 0.1 * i as f64).collect();
    let phase: Vec<f64> = axial_phase(&s, &z).unwrap().into_iter().map(Option::unwrap).collect();
    assert!((phase[20] + FRAC_PI_2).abs() < 1e-12);
    assert!(phase.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn small_disk_power_is_bounded_by_incident_power() {
    let s = spectrum(BeamKind::Fpw, 1.0);
    let field = FocalField::new(s);
    let p = field.focal_plane_power(20.0, 64, 8).unwrap();
    let total = incident_power(&s, 32, 16).unwrap();
    assert!(p > 0.5 * total && p < 1.05 * total, "{p} vs {total}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn antihermitian_for_random_points(
        x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0,
        alpha in 0.1f64..FRAC_PI_2, px in any::<bool>(),
    ) {
        let kind = if px { BeamKind::Px } else { BeamKind::Fpw };
        let field = FocalField::new(spectrum(kind, alpha));
        let e = field.electric(&[x, y, z]).unwrap();
        let m = field.electric(&[-x, -y, -z]).unwrap();
        let scale = field.electric(&[0.0; 3]).unwrap().norm();
        prop_assert!((m + e.conj()).norm() < 1e-12 * scale);
    }

    #[test]
    fn transverse_field_is_divergence_free(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let field = FocalField::new(spectrum(BeamKind::Px, 1.3));
        let h = 1e-5;
        let mut div = Complex64::new(0.0, 0.0);
        for axis in 0..3 {
            let mut a = [x, y, z];
            let mut b = [x, y, z];
            a[axis] += h;
            b[axis] -= h;
            div += (field.electric(&a).unwrap().0[axis] - field.electric(&b).unwrap().0[axis]) / (2.0 * h);
        }
        let scale = field.electric(&[0.0; 3]).unwrap().norm() * field.k();
        prop_assert!(div.norm() < 1e-6 * scale);
    }
}
