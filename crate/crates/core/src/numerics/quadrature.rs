//! Gauss–Legendre rules and the product rules used for integrals over
//! the solid angle of a focusing aperture.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Result};

/// A one-dimensional quadrature rule: abscissae in increasing order and
/// strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affinely maps a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| half * w).collect(),
        }
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The `n`-point Gauss–Legendre rule on `[-1, 1]`, exact for polynomials of
/// degree up to `2n - 1`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return invalid("Gauss-Legendre order must be at least 1");
    }
    if n == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![2.0],
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n / 2 {
        // Tricomi-style first guess, refined by Newton.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// One polar node of a solid-angle rule. `weight` already contains the
/// `sin(theta) dtheta` measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarNode {
    pub theta: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AzimuthNode {
    pub phi: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
}

/// Product rule over a polar band `theta in [theta_min, theta_max]`,
/// `phi in [0, 2pi)`: Gauss–Legendre in the polar variable, uniform
/// trapezoid in azimuth.
///
/// On bands inside the forward hemisphere the polar rule is taken in
/// `t = sqrt(cos theta)`. The apodization `sqrt(cos theta)` of a focused
/// plane wave and every power of `cos theta` are then polynomials in `t`,
/// so the rule stays spectrally accurate up to a semiaperture of `pi/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolidAngleQuadrature {
    polar: Vec<PolarNode>,
    azimuth: Vec<AzimuthNode>,
    phi_weight: f64,
}

impl SolidAngleQuadrature {
    /// Cone `theta in [0, alpha]` around +z, `alpha in (0, pi/2]`.
    pub fn cone(alpha: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
            return invalid(format!("semiaperture {alpha} outside (0, pi/2]"));
        }
        Self::band(0.0, alpha, n_theta, n_phi)
    }

    /// Band `theta in [theta_min, theta_max]` within the forward hemisphere.
    pub fn band(theta_min: f64, theta_max: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !(theta_min >= 0.0 && theta_min < theta_max && theta_max <= FRAC_PI_2) {
            return invalid(format!(
                "polar band [{theta_min}, {theta_max}] must be a nonempty subset of [0, pi/2]"
            ));
        }
        check_orders(n_theta, n_phi)?;
        // distances below t = 1 in half-angle form, so narrow cones keep full precision
        let t_hi = theta_min.cos().sqrt();
        let t_lo = theta_max.cos().max(0.0).sqrt();
        let gap_hi = 2.0 * (0.5 * theta_min).sin().powi(2) / (1.0 + t_hi);
        let width = 2.0 * (0.5 * (theta_max + theta_min)).sin() * (0.5 * (theta_max - theta_min)).sin() / (t_hi + t_lo);
        let base = gauss_legendre(n_theta)?;
        let polar = base
            .nodes()
            .iter()
            .zip(base.weights())
            .map(|(&x, &w)| {
                // e = 1 - t
                let e = gap_hi + 0.5 * width * (1.0 - x);
                let t = 1.0 - e;
                let t2 = t * t;
                let sin_theta = (e * (2.0 - e) * (1.0 + t2)).max(0.0).sqrt();
                PolarNode {
                    theta: sin_theta.atan2(t2),
                    cos_theta: t2,
                    sin_theta,
                    // d(cos theta) = 2 t dt
                    weight: t * w * width,
                }
            })
            .collect();
        Ok(Self::assemble(polar, n_phi))
    }

    /// The whole unit sphere, Gauss–Legendre in `cos theta`.
    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Self> {
        Self::polar_range(0.0, PI, n_theta, n_phi)
    }

    /// Any band `[theta_min, theta_max] ⊂ [0, pi]`, Gauss–Legendre in `cos theta`.
    pub fn polar_range(theta_min: f64, theta_max: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !(theta_min >= 0.0 && theta_min < theta_max && theta_max <= PI) {
            return invalid(format!(
                "polar range [{theta_min}, {theta_max}] must be a nonempty subset of [0, pi]"
            ));
        }
        check_orders(n_theta, n_phi)?;
        let rule = gauss_legendre(n_theta)?.mapped(theta_max.cos(), theta_min.cos());
        let polar = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&u, &w)| {
                let sin_theta = ((1.0 - u) * (1.0 + u)).max(0.0).sqrt();
                PolarNode {
                    theta: sin_theta.atan2(u),
                    cos_theta: u,
                    sin_theta,
                    weight: w,
                }
            })
            .collect();
        Ok(Self::assemble(polar, n_phi))
    }

    fn assemble(polar: Vec<PolarNode>, n_phi: usize) -> Self {
        let phi_weight = 2.0 * PI / n_phi as f64;
        let azimuth = (0..n_phi)
            .map(|j| {
                let phi = phi_weight * j as f64;
                let (sin_phi, cos_phi) = phi.sin_cos();
                AzimuthNode { phi, cos_phi, sin_phi }
            })
            .collect();
        Self {
            polar,
            azimuth,
            phi_weight,
        }
    }

    pub fn polar(&self) -> &[PolarNode] {
        &self.polar
    }

    pub fn azimuth(&self) -> &[AzimuthNode] {
        &self.azimuth
    }

    /// Common weight `2pi / n_phi` of every azimuthal node.
    pub fn phi_weight(&self) -> f64 {
        self.phi_weight
    }

    pub fn len(&self) -> usize {
        self.polar.len() * self.azimuth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn integrate<F: Fn(&PolarNode, &AzimuthNode) -> f64>(&self, f: F) -> f64 {
        let mut total = 0.0;
        for p in &self.polar {
            let ring: f64 = self.azimuth.iter().map(|a| f(p, a)).sum();
            total += p.weight * ring;
        }
        total * self.phi_weight
    }
}

fn check_orders(n_theta: usize, n_phi: usize) -> Result<()> {
    if n_theta < 2 {
        return invalid(format!("n_theta = {n_theta}, need at least 2"));
    }
    if n_phi < 4 {
        return invalid(format!("n_phi = {n_phi}, need at least 4"));
    }
    Ok(())
}

/// Cone rule over `theta in [0, alpha]`.
pub fn solid_angle_quadrature(alpha: f64, n_theta: usize, n_phi: usize) -> Result<SolidAngleQuadrature> {
    SolidAngleQuadrature::cone(alpha, n_theta, n_phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(gauss_legendre(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn low_orders_closed_form() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert_eq!(r1.weights(), &[2.0]);

        let r2 = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r2.nodes()[0] + x).abs() < 1e-15);
        assert!((r2.nodes()[1] - x).abs() < 1e-15);
        for w in r2.weights() {
            assert!((w - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn three_point_rule_integrates_quartic() {
        let r = gauss_legendre(3).unwrap();
        assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn large_rule_is_sorted_and_normalized() {
        for n in [7, 64, 333, 1200] {
            let r = gauss_legendre(n).unwrap();
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.nodes()[0] > -1.0 && r.nodes()[n - 1] < 1.0);
            assert!(r.weights().iter().all(|&w| w > 0.0));
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 2e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn hemisphere_measures() {
        let q = solid_angle_quadrature(FRAC_PI_2, 16, 8).unwrap();
        assert!((q.integrate(|_, _| 1.0) - 2.0 * PI).abs() < 1e-13);
        assert!((q.integrate(|p, _| p.cos_theta) - PI).abs() < 1e-13);
        // polar measure of the hemisphere is 1
        let cos2 = q.integrate(|_, a| a.cos_phi * a.cos_phi);
        assert!((cos2 - PI).abs() < 1e-13);
        let phi_only: f64 = q.azimuth().iter().map(|a| a.cos_phi.powi(2)).sum::<f64>() * q.phi_weight();
        assert!((phi_only - PI).abs() < 1e-14);
    }

    #[test]
    fn sqrt_cos_apodization_is_exact_on_hemisphere() {
        // ∫ sqrt(cos θ) dΣ over the hemisphere = 2π · 2/3
        let q = solid_angle_quadrature(FRAC_PI_2, 8, 4).unwrap();
        let v = q.integrate(|p, _| p.cos_theta.sqrt());
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn aperture_range_checked() {
        assert!(solid_angle_quadrature(0.0, 8, 8).is_err());
        assert!(solid_angle_quadrature(1.6, 8, 8).is_err());
        assert!(solid_angle_quadrature(1.0, 1, 8).is_err());
        assert!(solid_angle_quadrature(1.0, 8, 3).is_err());
    }

    #[test]
    fn sphere_rule_area() {
        let q = SolidAngleQuadrature::sphere(12, 8).unwrap();
        assert!((q.integrate(|_, _| 1.0) - 4.0 * PI).abs() < 1e-13);
    }
}
