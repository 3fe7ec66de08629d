//! Spherical Bessel functions, the Riccati–Bessel derivative and the Mie
//! angle functions `pi_l`, `tau_l`.
//!
//! Associated Legendre functions follow the convention without the
//! Condon–Shortley phase: `P_1^1(cos theta) = sin theta`, so `pi_1 = 1`.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

const SERIES_CUTOFF: f64 = 0.5;

/// `j_0(x) ..= j_{ell_max}(x)` for real `x >= 0`.
///
/// Small arguments use the ascending series; otherwise Miller's downward
/// recurrence normalized against whichever of `j_0`, `j_1` is larger.
pub fn spherical_bessel_j(ell_max: usize, x: f64) -> Result<Vec<f64>> {
    if !(x >= 0.0) || !x.is_finite() {
        return invalid(format!("spherical Bessel argument must be finite and >= 0, got {x}"));
    }
    let mut out = vec![0.0; ell_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    if x < SERIES_CUTOFF {
        for (ell, v) in out.iter_mut().enumerate() {
            *v = ascending_series(ell, x);
        }
        return Ok(out);
    }

    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = (s / x - c) / x;
    if ell_max == 0 {
        out[0] = j0;
        return Ok(out);
    }

    let top = ell_max.max(x.ceil() as usize) + 20 + (12.0 * x.cbrt()).ceil() as usize;
    let mut f_next = 0.0;
    let mut f = 1e-300;
    for ell in (0..=top).rev() {
        if ell <= ell_max {
            out[ell] = f;
        }
        // f_{l-1} = (2l+1)/x f_l - f_{l+1}
        if ell > 0 {
            let f_prev = (2 * ell + 1) as f64 / x * f - f_next;
            f_next = f;
            f = f_prev;
            if f.abs() > 1e250 {
                f *= 1e-250;
                f_next *= 1e-250;
                for v in out.iter_mut() {
                    *v *= 1e-250;
                }
            }
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / out[0] } else { j1 / out[1] };
    for v in out.iter_mut() {
        *v *= scale;
    }
    Ok(out)
}

fn ascending_series(ell: usize, x: f64) -> f64 {
    // x^l / (2l+1)!!
    let mut lead = 1.0;
    for i in 1..=ell {
        lead *= x / (2 * i + 1) as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= y / (k * (2 * ell + 2 * k + 1)) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// `S_l(x) = d(x j_l(x))/dx` for `l = 0 ..= ell_max`.
///
/// Index 0 holds `S_0 = cos x`; the multipole expressions use `l >= 1`.
pub fn riccati_s(ell_max: usize, x: f64) -> Result<Vec<f64>> {
    if ell_max < 1 {
        return invalid("riccati_s needs ell_max >= 1");
    }
    let j = spherical_bessel_j(ell_max, x)?;
    let mut s = vec![0.0; ell_max + 1];
    s[0] = x.cos();
    for ell in 1..=ell_max {
        s[ell] = x * j[ell - 1] - ell as f64 * j[ell];
    }
    Ok(s)
}

/// `j_l(x)/x` and `S_l(x)/x` for `l = 0 ..= ell_max`, finite at `x = 0`.
pub(crate) fn radial_ratios(ell_max: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let ell_max = ell_max.max(1);
    if x == 0.0 {
        let mut jx = vec![0.0; ell_max + 1];
        let mut sx = vec![0.0; ell_max + 1];
        jx[1] = 1.0 / 3.0;
        sx[1] = 2.0 / 3.0;
        return Ok((jx, sx));
    }
    let j = spherical_bessel_j(ell_max, x)?;
    let s = riccati_s(ell_max, x)?;
    Ok((j.iter().map(|v| v / x).collect(), s.iter().map(|v| v / x).collect()))
}

/// Mie angle functions `pi_l(theta)`, `tau_l(theta)` for `l = 1 ..= ell_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleFunctions {
    ell_max: usize,
    pi: Vec<f64>,
    tau: Vec<f64>,
}

impl AngleFunctions {
    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    /// `pi_l`; `l = 0` returns 0.
    pub fn pi(&self, ell: usize) -> f64 {
        self.pi[ell]
    }

    pub fn tau(&self, ell: usize) -> f64 {
        self.tau[ell]
    }

    /// Slice indexed by `l`, entry 0 unused.
    pub fn pi_values(&self) -> &[f64] {
        &self.pi
    }

    pub fn tau_values(&self) -> &[f64] {
        &self.tau
    }

    /// Upward recurrence in `mu = cos theta`. Finite at the poles because
    /// nothing is divided by `sin theta`.
    pub fn from_cos(ell_max: usize, mu: f64) -> Self {
        let ell_max = ell_max.max(1);
        let mut pi = vec![0.0; ell_max + 1];
        let mut tau = vec![0.0; ell_max + 1];
        pi[1] = 1.0;
        tau[1] = mu;
        for n in 2..=ell_max {
            let nf = n as f64;
            pi[n] = ((2.0 * nf - 1.0) * mu * pi[n - 1] - nf * pi[n - 2]) / (nf - 1.0);
            tau[n] = nf * mu * pi[n] - (nf + 1.0) * pi[n - 1];
        }
        Self { ell_max, pi, tau }
    }
}

pub fn angle_functions(ell_max: usize, theta: f64) -> Result<AngleFunctions> {
    if ell_max < 1 {
        return invalid("angle_functions needs ell_max >= 1");
    }
    if !(0.0..=PI).contains(&theta) {
        return invalid(format!("polar angle {theta} outside [0, pi]"));
    }
    Ok(AngleFunctions::from_cos(ell_max, theta.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn j0_closed_form_and_origin() {
        assert_eq!(spherical_bessel_j(3, 0.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        for x in [0.3, 1.0, 3.7, 25.0, 180.0] {
            let j = spherical_bessel_j(0, x).unwrap();
            assert!((j[0] - x.sin() / x).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(spherical_bessel_j(2, -0.1), Err(Error::InvalidArgument(_))));
        assert!(matches!(riccati_s(2, -1.0), Err(Error::InvalidArgument(_))));
        assert!(spherical_bessel_j(2, f64::NAN).is_err());
    }

    #[test]
    fn low_orders_match_rayleigh_formulas_where_stable() {
        for x in [2.0, 7.5, 40.0] {
            let j = spherical_bessel_j(3, x).unwrap();
            let (s, c) = x.sin_cos();
            let j1 = s / (x * x) - c / x;
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((j[1] - j1).abs() < 1e-14);
            assert!((j[2] - j2).abs() < 1e-14);
        }
    }

    #[test]
    fn near_zero_of_j0_uses_j1_normalization() {
        let x = PI * 3.0;
        let j = spherical_bessel_j(4, x).unwrap();
        let (s, c) = x.sin_cos();
        assert!((j[1] - (s / (x * x) - c / x)).abs() < 1e-15);
    }

    #[test]
    fn series_and_recurrence_agree_at_cutoff() {
        let below = spherical_bessel_j(30, SERIES_CUTOFF * (1.0 - 1e-12)).unwrap();
        let above = spherical_bessel_j(30, SERIES_CUTOFF).unwrap();
        for (a, b) in below.iter().zip(&above) {
            assert!((a - b).abs() <= 1e-10 * b.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn riccati_low_order() {
        let s = riccati_s(1, 0.0).unwrap();
        assert_eq!(s[1], 0.0);
        assert_eq!(s[0], 1.0);
        let s = riccati_s(1, 2.3).unwrap();
        assert!((s[0] - 2.3f64.cos()).abs() < 1e-15);
        assert!(riccati_s(0, 1.0).is_err());
    }

    #[test]
    fn radial_ratios_origin_limit() {
        let (jx, sx) = radial_ratios(4, 0.0).unwrap();
        assert_eq!(jx[1], 1.0 / 3.0);
        assert_eq!(sx[1], 2.0 / 3.0);
        assert!(jx[2..].iter().chain(&sx[2..]).all(|&v| v == 0.0));
        let (jx, sx) = radial_ratios(4, 1e-9).unwrap();
        assert!((jx[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((sx[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn angle_functions_low_orders() {
        for theta in [0.0, 0.4, 1.3, 2.9, PI] {
            let a = angle_functions(3, theta).unwrap();
            let c = theta.cos();
            assert_eq!(a.pi(1), 1.0);
            assert!((a.tau(1) - c).abs() < 1e-15);
            assert!((a.pi(2) - 3.0 * c).abs() < 1e-14);
            assert!((a.tau(2) - 3.0 * (2.0 * theta).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn angle_functions_pole_limits() {
        let a = angle_functions(12, 0.0).unwrap();
        let b = angle_functions(12, PI).unwrap();
        for ell in 1..=12 {
            let v = (ell * (ell + 1)) as f64 / 2.0;
            assert!((a.pi(ell) - v).abs() < 1e-12);
            assert!((a.tau(ell) - v).abs() < 1e-12);
            let sign = if ell % 2 == 0 { -1.0 } else { 1.0 };
            assert!((b.pi(ell) - sign * v).abs() < 1e-12);
            assert!((b.tau(ell) + sign * v).abs() < 1e-12);
        }
        // recurrence at a tiny angle agrees with the pole limit
        let c = angle_functions(12, 1e-6).unwrap();
        for ell in 1..=12 {
            let v = (ell * (ell + 1)) as f64 / 2.0;
            assert!((c.pi(ell) - v).abs() < 1e-8 * v);
            assert!((c.tau(ell) - v).abs() < 1e-8 * v);
        }
    }

    #[test]
    fn angle_function_domain() {
        assert!(angle_functions(3, -0.01).is_err());
        assert!(angle_functions(3, PI + 0.01).is_err());
        assert!(angle_functions(0, 1.0).is_err());
    }
}
