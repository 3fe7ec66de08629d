//! Vector multipole expansion of x-polarized focused beams.
//!
//! Surface harmonics follow the Bohren–Huffman layout:
//!
//! ```text
//! M~_{e,1,l} = -pi_l sin(phi) e_theta - tau_l cos(phi) e_phi
//! M~_{o,1,l} =  pi_l cos(phi) e_theta - tau_l sin(phi) e_phi
//! N~_{e,1,l} =  tau_l cos(phi) e_theta - pi_l sin(phi) e_phi
//! N~_{o,1,l} =  tau_l sin(phi) e_theta + pi_l cos(phi) e_phi
//! ```
//!
//! and the regular multipoles are `M = j_l M~` and
//! `N = (1/kr) [ l(l+1) j_l P_l^1 (cos|sin)(phi) e_r + S_l N~ ]` with
//! `P_l^1 = sin(theta) pi_l`.
//!
//! For x-polarized beams the electric field only needs `B_{o,1,l}` and
//! `A_{e,1,l}`:
//!
//! ```text
//! E = Σ B_l M_{o,1,l} + A_l N_{e,1,l}
//! H = -i Σ B_l N_{o,1,l} + A_l M_{e,1,l}        (c = 1)
//! A(s) = Σ (-i)^(l-1)/(2k) [ B_l M~_{o,1,l} + i A_l N~_{e,1,l} ]
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::beams::{AngularSpectrum, BeamKind};
use crate::error::{invalid, Error, Result};
use crate::numerics::special::radial_ratios;
use crate::numerics::{spherical_bessel_j, AngleFunctions, SolidAngleQuadrature};
use crate::vector::{to_spherical, ComplexField3, SphericalBasis, TangentVector, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// `i^n` for any integer `n`.
pub(crate) fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn m_tilde(af: &AngleFunctions, ell: usize, parity: Parity, cp: f64, sp: f64) -> (f64, f64) {
    let (p, t) = (af.pi(ell), af.tau(ell));
    match parity {
        Parity::Even => (-p * sp, -t * cp),
        Parity::Odd => (p * cp, -t * sp),
    }
}

fn n_tilde(af: &AngleFunctions, ell: usize, parity: Parity, cp: f64, sp: f64) -> (f64, f64) {
    let (p, t) = (af.pi(ell), af.tau(ell));
    match parity {
        Parity::Even => (t * cp, -p * sp),
        Parity::Odd => (t * sp, p * cp),
    }
}

fn check_direction(ell: usize, theta: f64) -> Result<()> {
    if ell == 0 {
        return invalid("multipole order must be >= 1");
    }
    if !(0.0..=PI).contains(&theta) {
        return invalid(format!("polar angle {theta} outside [0, pi]"));
    }
    Ok(())
}

/// Magnetic surface harmonic `M~_{e/o,1,l}(theta, phi)`; real valued.
pub fn surface_m(ell: usize, parity: Parity, theta: f64, phi: f64) -> Result<TangentVector> {
    check_direction(ell, theta)?;
    let af = AngleFunctions::from_cos(ell, theta.cos());
    let (sp, cp) = phi.sin_cos();
    let (a, b) = m_tilde(&af, ell, parity, cp, sp);
    Ok(TangentVector::real(a, b))
}

/// Electric surface harmonic `N~_{e/o,1,l}(theta, phi)`; real valued.
pub fn surface_n(ell: usize, parity: Parity, theta: f64, phi: f64) -> Result<TangentVector> {
    check_direction(ell, theta)?;
    let af = AngleFunctions::from_cos(ell, theta.cos());
    let (sp, cp) = phi.sin_cos();
    let (a, b) = n_tilde(&af, ell, parity, cp, sp);
    Ok(TangentVector::real(a, b))
}

/// Regular magnetic multipole `j_l(kr) M~` in Cartesian components.
pub fn multipole_m(ell: usize, parity: Parity, k_r: f64, theta: f64, phi: f64) -> Result<ComplexField3> {
    check_direction(ell, theta)?;
    let j = spherical_bessel_j(ell, k_r)?;
    let basis = SphericalBasis::new(theta, phi);
    let t = surface_m(ell, parity, theta, phi)?;
    Ok(t.scale(Complex64::new(j[ell], 0.0)).to_cartesian(&basis))
}

/// Regular electric multipole `N_{e/o,1,l}` in Cartesian components,
/// finite at `k_r = 0`.
pub fn multipole_n(ell: usize, parity: Parity, k_r: f64, theta: f64, phi: f64) -> Result<ComplexField3> {
    check_direction(ell, theta)?;
    let (jx, sx) = radial_ratios(ell, k_r)?;
    let af = AngleFunctions::from_cos(ell, theta.cos());
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let basis = SphericalBasis::from_trig(ct, st, cp, sp);
    let trig = match parity {
        Parity::Even => cp,
        Parity::Odd => sp,
    };
    let lf = ell as f64;
    let radial = lf * (lf + 1.0) * jx[ell] * st * af.pi(ell) * trig;
    let (nt, np) = n_tilde(&af, ell, parity, cp, sp);
    Ok(ComplexField3::from_real([0, 1, 2].map(|c| {
        radial * basis.e_r[c] + sx[ell] * (nt * basis.e_theta[c] + np * basis.e_phi[c])
    })))
}

/// Spherical vector harmonics `Y_l^1`, `Z_l^1 = s x Y_l^1`, normalized so
/// that `∫ |Y_l^1|^2 dΣ = 1`.
pub fn vector_harmonics_yz(ell: usize, theta: f64, phi: f64) -> Result<(TangentVector, TangentVector)> {
    check_direction(ell, theta)?;
    let af = AngleFunctions::from_cos(ell, theta.cos());
    let (sp, cp) = phi.sin_cos();
    let lf = ell as f64;
    let norm = ((2.0 * lf + 1.0) / (4.0 * PI * lf * lf * (lf + 1.0) * (lf + 1.0))).sqrt();
    let pref = Complex64::new(0.0, norm);
    let i = Complex64::new(0.0, 1.0);
    let combine = |e: (f64, f64), o: (f64, f64)| {
        TangentVector::new(
            pref * (Complex64::new(e.0, 0.0) + i * o.0),
            pref * (Complex64::new(e.1, 0.0) + i * o.1),
        )
    };
    let y = combine(
        m_tilde(&af, ell, Parity::Even, cp, sp),
        m_tilde(&af, ell, Parity::Odd, cp, sp),
    );
    let z = combine(
        n_tilde(&af, ell, Parity::Even, cp, sp),
        n_tilde(&af, ell, Parity::Odd, cp, sp),
    );
    Ok((y, z))
}

/// Expansion coefficients `A_{e,1,l}` and `B_{o,1,l}`, `l = 1 ..= ell_max`.
/// Units are those of `f k E_0` for focused beams and `E_0` for the plane wave.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleCoefficients {
    k: f64,
    a_e: Vec<Complex64>,
    b_o: Vec<Complex64>,
}

impl MultipoleCoefficients {
    pub fn from_parts(k: f64, a_e: Vec<Complex64>, b_o: Vec<Complex64>) -> Result<Self> {
        if a_e.is_empty() || a_e.len() != b_o.len() {
            return invalid("coefficient arrays must be nonempty and of equal length");
        }
        if !(k > 0.0) {
            return invalid("wavenumber must be positive");
        }
        Ok(Self { k, a_e, b_o })
    }

    pub fn ell_max(&self) -> usize {
        self.a_e.len()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `A_{e,1,l}`, `l >= 1`.
    pub fn a_e(&self, ell: usize) -> Complex64 {
        self.a_e[ell - 1]
    }

    /// `B_{o,1,l}`, `l >= 1`.
    pub fn b_o(&self, ell: usize) -> Complex64 {
        self.b_o[ell - 1]
    }

    pub fn a_e_values(&self) -> &[Complex64] {
        &self.a_e
    }

    pub fn b_o_values(&self) -> &[Complex64] {
        &self.b_o
    }

    /// The first `ell_max` orders.
    pub fn truncated(&self, ell_max: usize) -> Result<Self> {
        if ell_max == 0 || ell_max > self.ell_max() {
            return invalid(format!("cannot truncate {} orders to {ell_max}", self.ell_max()));
        }
        Ok(Self {
            k: self.k,
            a_e: self.a_e[..ell_max].to_vec(),
            b_o: self.b_o[..ell_max].to_vec(),
        })
    }

    /// Largest `|kr|` the truncated series is trusted for.
    pub fn validity_radius(&self) -> f64 {
        self.ell_max() as f64 - 4.0
    }
}

/// Projects the angular spectrum onto the surface harmonics:
///
/// ```text
/// B_{o,1,l} =  2k i^(l-1) (2l+1)/(2pi l^2 (l+1)^2) ∫ A . M~_{o,1,l} dΣ
/// A_{e,1,l} = -2k i^l     (2l+1)/(2pi l^2 (l+1)^2) ∫ A . N~_{e,1,l} dΣ
/// ```
pub fn expansion_coefficients(
    spectrum: &AngularSpectrum,
    ell_max: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<MultipoleCoefficients> {
    if ell_max == 0 {
        return invalid("ell_max must be >= 1");
    }
    if n_theta < 2 * ell_max {
        return Err(Error::Accuracy(format!(
            "n_theta = {n_theta} under-resolves the expansion up to l = {ell_max} (need >= {})",
            2 * ell_max
        )));
    }
    let q = SolidAngleQuadrature::cone(spectrum.alpha(), n_theta, n_phi)?;
    let mut int_m = vec![0.0; ell_max + 1];
    let mut int_n = vec![0.0; ell_max + 1];
    for p in q.polar() {
        // φ-moments of the spectrum: Σ A_θ cos φ and Σ A_φ sin φ
        let (mut c1, mut c2) = (0.0, 0.0);
        for a in q.azimuth() {
            let (at, ap) = spectrum.components(p.cos_theta, a.cos_phi, a.sin_phi);
            c1 += at * a.cos_phi;
            c2 += ap * a.sin_phi;
        }
        let af = AngleFunctions::from_cos(ell_max, p.cos_theta);
        let w = p.weight * q.phi_weight();
        for ell in 1..=ell_max {
            int_m[ell] += w * (af.pi(ell) * c1 - af.tau(ell) * c2);
            int_n[ell] += w * (af.tau(ell) * c1 - af.pi(ell) * c2);
        }
    }
    let k = spectrum.k();
    let mut a_e = Vec::with_capacity(ell_max);
    let mut b_o = Vec::with_capacity(ell_max);
    for ell in 1..=ell_max {
        let lf = ell as f64;
        let norm = 2.0 * k * (2.0 * lf + 1.0) / (2.0 * PI * lf * lf * (lf + 1.0) * (lf + 1.0));
        let l = ell as i64;
        b_o.push(i_pow(l - 1) * (norm * int_m[ell]));
        a_e.push(-i_pow(l) * (norm * int_n[ell]));
    }
    Ok(MultipoleCoefficients { k, a_e, b_o })
}

/// Coefficients of the unfocused plane wave `E_0 e_x e^{ikz}`:
/// `B_{o,1,l} = i^l E_0 (2l+1)/(l(l+1))`, `A_{e,1,l} = -i^(l+1) E_0 (2l+1)/(l(l+1))`.
pub fn plane_wave_coefficients(ell_max: usize, k: f64, e0: f64) -> Result<MultipoleCoefficients> {
    if ell_max == 0 {
        return invalid("ell_max must be >= 1");
    }
    let (a_e, b_o) = (1..=ell_max)
        .map(|ell| {
            let lf = ell as f64;
            let mag = e0 * (2.0 * lf + 1.0) / (lf * (lf + 1.0));
            let l = ell as i64;
            (-i_pow(l + 1) * mag, i_pow(l) * mag)
        })
        .unzip();
    MultipoleCoefficients::from_parts(k, a_e, b_o)
}

/// Real bracket of the dipole coefficient, `A_{e,1,1} = -i f k E_0 × factor`.
pub fn aperture_factor(kind: BeamKind, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
        return invalid(format!("semiaperture {alpha} outside (0, pi/2]"));
    }
    let c = alpha.cos().max(0.0);
    Ok(match kind {
        BeamKind::Fpw => (8.0 - c.powf(1.5) * (5.0 + 3.0 * c)) / 10.0,
        BeamKind::Px => (4.0 - 3.0 * c - c * c * c) / 4.0,
    })
}

/// Closed-form `A_{e,1,1}` in units of `f k E_0`.
pub fn a11_analytic(kind: BeamKind, alpha: f64) -> Result<Complex64> {
    Ok(Complex64::new(0.0, -aperture_factor(kind, alpha)?))
}

/// Evaluates the truncated series for `(E, H)` at `r`.
pub fn reconstruct_field(coeffs: &MultipoleCoefficients, r: &Vec3) -> Result<(ComplexField3, ComplexField3)> {
    let ell_max = coeffs.ell_max();
    let (radius, theta, phi) = to_spherical(r);
    let k_r = coeffs.k * radius;
    if !k_r.is_finite() {
        return invalid("field point must be finite");
    }
    if k_r > coeffs.validity_radius().max(0.0) {
        return Err(Error::Accuracy(format!(
            "|kr| = {k_r:.3} exceeds the validity radius {} of an l_max = {ell_max} series",
            coeffs.validity_radius()
        )));
    }
    let j = spherical_bessel_j(ell_max, k_r)?;
    let (jx, sx) = radial_ratios(ell_max, k_r)?;
    let af = AngleFunctions::from_cos(ell_max, theta.cos());
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let basis = SphericalBasis::from_trig(ct, st, cp, sp);

    let zero = Complex64::new(0.0, 0.0);
    // spherical components (r, theta, phi)
    let mut e = [zero; 3];
    let mut h = [zero; 3];
    for ell in 1..=ell_max {
        let (a, b) = (coeffs.a_e(ell), coeffs.b_o(ell));
        let lf = ell as f64;
        let radial = lf * (lf + 1.0) * jx[ell] * st * af.pi(ell);

        let mo = m_tilde(&af, ell, Parity::Odd, cp, sp);
        let me = m_tilde(&af, ell, Parity::Even, cp, sp);
        let ne = n_tilde(&af, ell, Parity::Even, cp, sp);
        let no = n_tilde(&af, ell, Parity::Odd, cp, sp);

        e[0] += a * (radial * cp);
        e[1] += b * (j[ell] * mo.0) + a * (sx[ell] * ne.0);
        e[2] += b * (j[ell] * mo.1) + a * (sx[ell] * ne.1);

        h[0] += b * (radial * sp);
        h[1] += b * (sx[ell] * no.0) + a * (j[ell] * me.0);
        h[2] += b * (sx[ell] * no.1) + a * (j[ell] * me.1);
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let to_cart = |v: [Complex64; 3]| {
        ComplexField3([0, 1, 2].map(|c| v[0] * basis.e_r[c] + v[1] * basis.e_theta[c] + v[2] * basis.e_phi[c]))
    };
    Ok((to_cart(e), to_cart(h) * minus_i))
}

/// Truncated-series approximation of the angular spectrum at `(theta, phi)`.
pub fn reconstruct_spectrum(coeffs: &MultipoleCoefficients, theta: f64, phi: f64) -> Result<TangentVector> {
    if !(0.0..=PI).contains(&theta) {
        return invalid(format!("polar angle {theta} outside [0, pi]"));
    }
    let ell_max = coeffs.ell_max();
    let af = AngleFunctions::from_cos(ell_max, theta.cos());
    let (sp, cp) = phi.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let mut out = TangentVector::default();
    for ell in 1..=ell_max {
        let pref = i_pow(-(ell as i64 - 1)) / (2.0 * coeffs.k);
        let mo = m_tilde(&af, ell, Parity::Odd, cp, sp);
        let ne = n_tilde(&af, ell, Parity::Even, cp, sp);
        let (b, a) = (coeffs.b_o(ell), i * coeffs.a_e(ell));
        out = out + TangentVector::new(pref * (b * mo.0 + a * ne.0), pref * (b * mo.1 + a * ne.1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{make_spectrum, BeamParams};

    #[test]
    fn i_pow_cycles() {
        assert_eq!(i_pow(0), Complex64::new(1.0, 0.0));
        assert_eq!(i_pow(5), Complex64::new(0.0, 1.0));
        assert_eq!(i_pow(-1), Complex64::new(0.0, -1.0));
        assert_eq!(i_pow(-2), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn surface_harmonics_direct_substitution() {
        let m = surface_m(1, Parity::Odd, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(m.norm() < 1e-15);
        let n = surface_n(1, Parity::Even, 0.0, 0.0).unwrap();
        assert_eq!(n, TangentVector::real(1.0, 0.0));
        assert!(surface_m(0, Parity::Even, 0.3, 0.1).is_err());
        assert!(surface_n(2, Parity::Even, -0.3, 0.1).is_err());
    }

    #[test]
    fn electric_dipole_at_origin() {
        let n = multipole_n(1, Parity::Even, 0.0, 0.0, 0.0).unwrap();
        assert!((n - ComplexField3::from_real([2.0 / 3.0, 0.0, 0.0])).norm() < 1e-15);
        // direction at the origin is arbitrary
        let n = multipole_n(1, Parity::Even, 0.0, 1.1, -0.4).unwrap();
        assert!((n - ComplexField3::from_real([2.0 / 3.0, 0.0, 0.0])).norm() < 1e-15);
        for ell in 2..8 {
            for parity in [Parity::Even, Parity::Odd] {
                assert!(multipole_n(ell, parity, 0.0, 0.7, 0.2).unwrap().norm() < 1e-300);
            }
        }
        for ell in 1..8 {
            assert_eq!(multipole_m(ell, Parity::Odd, 0.0, 0.7, 0.2).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn a11_closed_forms() {
        assert!((a11_analytic(BeamKind::Px, FRAC_PI_2).unwrap() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((a11_analytic(BeamKind::Fpw, FRAC_PI_2).unwrap() - Complex64::new(0.0, -0.8)).norm() < 1e-15);
        // small-aperture limit 3 alpha^2 / 4
        let f = aperture_factor(BeamKind::Px, 1e-3).unwrap();
        assert!((f / 0.75e-6 - 1.0).abs() < 1e-6);
        assert!(a11_analytic(BeamKind::Px, 0.0).is_err());
    }

    #[test]
    fn plane_wave_magnitudes() {
        let c = plane_wave_coefficients(6, 1.0, 1.0).unwrap();
        assert!((c.a_e(1).norm() - 1.5).abs() < 1e-15);
        assert!((c.b_o(2).norm() - 5.0 / 6.0).abs() < 1e-15);
        for ell in 1..=6 {
            assert!((c.a_e(ell).norm() - c.b_o(ell).norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn under_resolved_expansion_rejected() {
        let s = make_spectrum(BeamParams::new(BeamKind::Px, 1.0).unwrap()).unwrap();
        assert!(matches!(
            expansion_coefficients(&s, 40, 64, 16),
            Err(Error::Accuracy(_))
        ));
        assert!(expansion_coefficients(&s, 0, 64, 16).is_err());
    }

    #[test]
    fn reconstruct_outside_validity_radius() {
        let c = plane_wave_coefficients(10, 1.0, 1.0).unwrap();
        assert!(matches!(
            reconstruct_field(&c, &[0.0, 0.0, 6.5]),
            Err(Error::Accuracy(_))
        ));
        assert!(reconstruct_field(&c, &[0.0, 0.0, 5.5]).is_ok());
    }
}
