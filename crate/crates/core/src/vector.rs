//! Small vector types shared by the field modules.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

pub type Vec3 = [f64; 3];

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// Converts a Cartesian point to `(r, theta, phi)`. On the z axis phi is 0.
pub fn to_spherical(r: &Vec3) -> (f64, f64, f64) {
    let rho = r[0].hypot(r[1]);
    let radius = rho.hypot(r[2]);
    if radius == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let theta = rho.atan2(r[2]);
    let phi = if rho == 0.0 { 0.0 } else { r[1].atan2(r[0]) };
    (radius, theta, phi)
}

/// Local orthonormal frame `(e_r, e_theta, e_phi)` at a direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalBasis {
    pub e_r: Vec3,
    pub e_theta: Vec3,
    pub e_phi: Vec3,
}

impl SphericalBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::from_trig(ct, st, cp, sp)
    }

    pub fn from_trig(cos_theta: f64, sin_theta: f64, cos_phi: f64, sin_phi: f64) -> Self {
        Self {
            e_r: [sin_theta * cos_phi, sin_theta * sin_phi, cos_theta],
            e_theta: [cos_theta * cos_phi, cos_theta * sin_phi, -sin_theta],
            e_phi: [-sin_phi, cos_phi, 0.0],
        }
    }
}

/// A complex Cartesian 3-vector: one sample of E or H.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexField3(pub [Complex64; 3]);

impl ComplexField3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_real(v: Vec3) -> Self {
        Self(v.map(|c| Complex64::new(c, 0.0)))
    }

    pub fn x(&self) -> Complex64 {
        self.0[0]
    }

    pub fn y(&self) -> Complex64 {
        self.0[1]
    }

    pub fn z(&self) -> Complex64 {
        self.0[2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|c| c.conj()))
    }

    /// Bilinear product, no conjugation.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn dot_real(&self, v: &Vec3) -> Complex64 {
        self.0[0] * v[0] + self.0[1] * v[1] + self.0[2] * v[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        Self([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Projects onto the tangent frame of `basis`, dropping the radial part.
    pub fn tangential(&self, basis: &SphericalBasis) -> TangentVector {
        TangentVector {
            theta: self.dot_real(&basis.e_theta),
            phi: self.dot_real(&basis.e_phi),
        }
    }
}

impl Add for ComplexField3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl AddAssign for ComplexField3 {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for ComplexField3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for ComplexField3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<Complex64> for ComplexField3 {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        Self(self.0.map(|c| c * rhs))
    }
}

impl Mul<f64> for ComplexField3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|c| c * rhs))
    }
}

/// Complex tangential vector `v_theta e_theta + v_phi e_phi` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentVector {
    pub theta: Complex64,
    pub phi: Complex64,
}

impl TangentVector {
    pub fn new(theta: Complex64, phi: Complex64) -> Self {
        Self { theta, phi }
    }

    pub fn real(theta: f64, phi: f64) -> Self {
        Self {
            theta: Complex64::new(theta, 0.0),
            phi: Complex64::new(phi, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.theta.norm_sqr() + self.phi.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Bilinear product, no conjugation.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.theta * other.theta + self.phi * other.phi
    }

    pub fn conj(&self) -> Self {
        Self::new(self.theta.conj(), self.phi.conj())
    }

    /// `e_r x v`, using `e_r x e_theta = e_phi` and `e_r x e_phi = -e_theta`.
    pub fn radial_cross(&self) -> Self {
        Self::new(-self.phi, self.theta)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.theta * c, self.phi * c)
    }

    pub fn to_cartesian(&self, basis: &SphericalBasis) -> ComplexField3 {
        let (t, p) = (&basis.e_theta, &basis.e_phi);
        ComplexField3([
            self.theta * t[0] + self.phi * p[0],
            self.theta * t[1] + self.phi * p[1],
            self.theta * t[2] + self.phi * p[2],
        ])
    }
}

impl Add for TangentVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.theta + rhs.theta, self.phi + rhs.phi)
    }
}

impl Sub for TangentVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.theta - rhs.theta, self.phi - rhs.phi)
    }
}
