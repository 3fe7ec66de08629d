//! Debye diffraction integrals for E and H in the focal region.
//!
//! ```text
//! E(r) = -(ik/2pi) ∫ A e^{ik r.s} dΣ,    H(r) = -(ik/2pi) ∫ s x A e^{ik r.s} dΣ
//! ```
//!
//! with `c = 1`. The time-averaged Poynting vector is `(1/8pi) Re(E x H*)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::beams::AngularSpectrum;
use crate::error::{invalid, Error, Result};
use crate::numerics::{gauss_legendre, SolidAngleQuadrature};
use crate::vector::{dot3, norm3, ComplexField3, Vec3};

/// Beyond this `|k r|` the fixed-order scheme is not trusted.
pub const MAX_KR: f64 = 1.0e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadratureOrders {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        Self { n_theta: 64, n_phi: 32 }
    }
}

impl QuadratureOrders {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 4 {
            return invalid(format!(
                "quadrature orders ({n_theta}, {n_phi}) below the minimum (2, 4)"
            ));
        }
        Ok(Self { n_theta, n_phi })
    }

    /// Orders needed to resolve `e^{ik r.s}` at a point with radius `k_r`
    /// and transverse radius `k_rho`, never below `self`.
    pub fn required_for(&self, k_r: f64, k_rho: f64) -> Self {
        let nt = (4.0 * k_r.ceil()) as usize;
        let np = 2 * k_rho.ceil() as usize + 16;
        Self {
            n_theta: self.n_theta.max(nt.next_multiple_of(16)),
            n_phi: self.n_phi.max(np.next_multiple_of(8)),
        }
    }
}

/// Directions and pre-weighted Cartesian amplitudes `w A`, `w s x A`.
struct NodeTable {
    dirs: Vec<Vec3>,
    amp: Vec<Vec3>,
    amp_cross: Vec<Vec3>,
}

impl NodeTable {
    fn build(spectrum: &AngularSpectrum, orders: QuadratureOrders) -> Result<Self> {
        let q = SolidAngleQuadrature::cone(spectrum.alpha(), orders.n_theta, orders.n_phi)?;
        let n = q.len();
        let mut dirs = Vec::with_capacity(n);
        let mut amp = Vec::with_capacity(n);
        let mut amp_cross = Vec::with_capacity(n);
        let wp = q.phi_weight();
        for p in q.polar() {
            for a in q.azimuth() {
                let w = p.weight * wp;
                let (av, sxa) = spectrum.cartesian(p.cos_theta, p.sin_theta, a.cos_phi, a.sin_phi);
                dirs.push([p.sin_theta * a.cos_phi, p.sin_theta * a.sin_phi, p.cos_theta]);
                amp.push(av.map(|c| w * c));
                amp_cross.push(sxa.map(|c| w * c));
            }
        }
        Ok(Self { dirs, amp, amp_cross })
    }
}

/// A focused beam ready for field evaluation. Immutable apart from an
/// internal cache of node tables; safe to share across threads.
pub struct FocalField {
    spectrum: AngularSpectrum,
    orders: QuadratureOrders,
    tables: RwLock<HashMap<QuadratureOrders, Arc<NodeTable>>>,
}

impl fmt::Debug for FocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FocalField")
            .field("spectrum", &self.spectrum)
            .field("orders", &self.orders)
            .finish_non_exhaustive()
    }
}

impl Clone for FocalField {
    fn clone(&self) -> Self {
        Self::with_orders(self.spectrum, self.orders)
    }
}

impl FocalField {
    pub fn new(spectrum: AngularSpectrum) -> Self {
        Self::with_orders(spectrum, QuadratureOrders::default())
    }

    /// `orders` are the minimum orders; they grow with the field-point radius.
    pub fn with_orders(spectrum: AngularSpectrum, orders: QuadratureOrders) -> Self {
        Self {
            spectrum,
            orders,
            tables: RwLock::new(HashMap::new()),
        }
    }

    pub fn spectrum(&self) -> &AngularSpectrum {
        &self.spectrum
    }

    pub fn base_orders(&self) -> QuadratureOrders {
        self.orders
    }

    pub fn k(&self) -> f64 {
        self.spectrum.k()
    }

    /// Orders actually used at `r`.
    pub fn orders_at(&self, r: &Vec3) -> Result<QuadratureOrders> {
        let k = self.k();
        let k_r = k * norm3(r);
        if !k_r.is_finite() {
            return invalid("field point must be finite");
        }
        if k_r > MAX_KR {
            return Err(Error::Accuracy(format!(
                "|kr| = {k_r:.3e} exceeds the converged range |kr| <= {MAX_KR}"
            )));
        }
        Ok(self.orders.required_for(k_r, k * r[0].hypot(r[1])))
    }

    fn table(&self, orders: QuadratureOrders) -> Result<Arc<NodeTable>> {
        if let Some(t) = self.tables.read().expect("node table cache poisoned").get(&orders) {
            return Ok(Arc::clone(t));
        }
        let built = Arc::new(NodeTable::build(&self.spectrum, orders)?);
        let mut guard = self.tables.write().expect("node table cache poisoned");
        Ok(Arc::clone(guard.entry(orders).or_insert(built)))
    }

    /// `(E(r), H(r))` from one pass over the quadrature nodes.
    pub fn fields(&self, r: &Vec3) -> Result<(ComplexField3, ComplexField3)> {
        let orders = self.orders_at(r)?;
        let table = self.table(orders)?;
        let k = self.k();
        let mut e_re = [0.0; 3];
        let mut e_im = [0.0; 3];
        let mut h_re = [0.0; 3];
        let mut h_im = [0.0; 3];
        for ((s, a), b) in table.dirs.iter().zip(&table.amp).zip(&table.amp_cross) {
            let (sn, cs) = (k * dot3(r, s)).sin_cos();
            for c in 0..3 {
                e_re[c] += a[c] * cs;
                e_im[c] += a[c] * sn;
                h_re[c] += b[c] * cs;
                h_im[c] += b[c] * sn;
            }
        }
        // -(ik/2pi)(re + i im) = (k/2pi)(im - i re)
        let pref = k / (2.0 * PI);
        let assemble =
            |re: [f64; 3], im: [f64; 3]| ComplexField3([0, 1, 2].map(|c| Complex64::new(pref * im[c], -pref * re[c])));
        Ok((assemble(e_re, e_im), assemble(h_re, h_im)))
    }

    pub fn electric(&self, r: &Vec3) -> Result<ComplexField3> {
        Ok(self.fields(r)?.0)
    }

    pub fn magnetic(&self, r: &Vec3) -> Result<ComplexField3> {
        Ok(self.fields(r)?.1)
    }

    /// `S_z = (1/8pi) Re(E x H*)_z`.
    pub fn poynting_z(&self, r: &Vec3) -> Result<f64> {
        let (e, h) = self.fields(r)?;
        Ok(poynting_z_of(&e, &h))
    }

    /// Cartesian grid over the focal plane, coordinates in units of `1/k`
    /// spanning `[-extent, extent]` on both axes.
    pub fn focal_plane_map(&self, extent: f64, n: usize) -> Result<FocalGrid> {
        if !(extent > 0.0 && extent.is_finite()) {
            return invalid(format!("grid extent must be positive, got {extent}"));
        }
        if n < 16 {
            return invalid(format!("need at least 16 samples per axis, got {n}"));
        }
        let k = self.k();
        let axis: Vec<f64> = (0..n)
            .map(|i| -extent + 2.0 * extent * i as f64 / (n - 1) as f64)
            .collect();
        let samples: Vec<(ComplexField3, ComplexField3)> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (ix, iy) = (idx % n, idx / n);
                self.fields(&[axis[ix] / k, axis[iy] / k, 0.0])
            })
            .collect::<Result<_>>()?;
        let (e0, h0) = self.fields(&[0.0; 3])?;
        let mut grid = FocalGrid {
            n,
            extent,
            axis,
            s_z: Vec::with_capacity(n * n),
            ex_sq: Vec::with_capacity(n * n),
            ey_sq: Vec::with_capacity(n * n),
            ez_sq: Vec::with_capacity(n * n),
            e_sq: Vec::with_capacity(n * n),
            ex_phase: Vec::with_capacity(n * n),
            s_z_origin: poynting_z_of(&e0, &h0),
            ex_sq_origin: e0.x().norm_sqr(),
        };
        for (e, h) in &samples {
            grid.s_z.push(poynting_z_of(e, h));
            grid.ex_sq.push(e.x().norm_sqr());
            grid.ey_sq.push(e.y().norm_sqr());
            grid.ez_sq.push(e.z().norm_sqr());
            grid.e_sq.push(e.norm_sqr());
            grid.ex_phase.push(e.x().arg());
        }
        Ok(grid)
    }

    /// Phase of `E_x` on the optical axis relative to a plane wave,
    /// `arg E_x(0,0,z) - kz`, unwrapped along the array. `kz` is in units
    /// of `1/k`. Samples where `E_x` vanishes are `None`.
    pub fn axial_phase(&self, kz: &[f64]) -> Result<Vec<Option<f64>>> {
        let k = self.k();
        let reference = self.electric(&[0.0; 3])?.norm();
        let raw: Vec<Option<f64>> = kz
            .par_iter()
            .map(|&z| {
                let ex = self.electric(&[0.0, 0.0, z / k])?.x();
                Ok((ex.norm() > 1e-10 * reference).then(|| wrap_phase(ex.arg() - z)))
            })
            .collect::<Result<_>>()?;
        Ok(unwrap_phases(&raw))
    }

    /// Truncated `∫ S_z d^2r` over the focal-plane disk `k rho <= k_rho_max`.
    /// Composite 8-point Gauss–Legendre panels in `rho`, trapezoid in `phi`.
    pub fn focal_plane_power(&self, k_rho_max: f64, n_rho: usize, n_phi: usize) -> Result<f64> {
        if !(k_rho_max > 0.0 && k_rho_max.is_finite()) {
            return invalid(format!("k rho_max must be positive, got {k_rho_max}"));
        }
        if n_rho < 8 || n_phi < 4 {
            return invalid(format!("orders ({n_rho}, {n_phi}) below the minimum (8, 4)"));
        }
        let k = self.k();
        let panels = n_rho.div_ceil(8);
        let gl = gauss_legendre(8)?;
        let width = k_rho_max / panels as f64;
        let mut radial = Vec::with_capacity(panels * 8);
        for p in 0..panels {
            let rule = gl.mapped(p as f64 * width, (p + 1) as f64 * width);
            radial.extend(rule.nodes().iter().copied().zip(rule.weights().iter().copied()));
        }
        let dphi = 2.0 * PI / n_phi as f64;
        let total: f64 = (0..radial.len() * n_phi)
            .into_par_iter()
            .map(|idx| {
                let (kr, w) = radial[idx / n_phi];
                let (sp, cp) = (dphi * (idx % n_phi) as f64).sin_cos();
                let rho = kr / k;
                let sz = self.poynting_z(&[rho * cp, rho * sp, 0.0])?;
                Ok(w / k * rho * dphi * sz)
            })
            .collect::<Result<Vec<f64>>>()?
            .iter()
            .sum();
        Ok(total)
    }
}

pub(crate) fn poynting_z_of(e: &ComplexField3, h: &ComplexField3) -> f64 {
    let cz = e.x() * h.y().conj() - e.y() * h.x().conj();
    cz.re / (8.0 * PI)
}

fn wrap_phase(p: f64) -> f64 {
    let w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Nearest-branch continuation; gaps are skipped.
fn unwrap_phases(raw: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut prev: Option<f64> = None;
    raw.iter()
        .map(|v| {
            v.map(|p| {
                let out = match prev {
                    Some(q) => p + 2.0 * PI * ((q - p) / (2.0 * PI)).round(),
                    None => p,
                };
                prev = Some(out);
                out
            })
        })
        .collect()
}

/// Sampled focal-plane quantities, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalGrid {
    pub n: usize,
    /// Half-width in units of `1/k`.
    pub extent: f64,
    /// Sample coordinates along either axis, units of `1/k`.
    pub axis: Vec<f64>,
    pub s_z: Vec<f64>,
    pub ex_sq: Vec<f64>,
    pub ey_sq: Vec<f64>,
    pub ez_sq: Vec<f64>,
    pub e_sq: Vec<f64>,
    pub ex_phase: Vec<f64>,
    pub s_z_origin: f64,
    pub ex_sq_origin: f64,
}

impl FocalGrid {
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.n + ix
    }

    pub fn s_z_normalized(&self) -> Vec<f64> {
        self.s_z.iter().map(|v| v / self.s_z_origin).collect()
    }

    pub fn ex_sq_normalized(&self) -> Vec<f64> {
        self.ex_sq.iter().map(|v| v / self.ex_sq_origin).collect()
    }
}

pub fn electric_field(spectrum: &AngularSpectrum, r: &Vec3, n_theta: usize, n_phi: usize) -> Result<ComplexField3> {
    FocalField::with_orders(*spectrum, QuadratureOrders::new(n_theta, n_phi)?).electric(r)
}

pub fn magnetic_field(spectrum: &AngularSpectrum, r: &Vec3, n_theta: usize, n_phi: usize) -> Result<ComplexField3> {
    FocalField::with_orders(*spectrum, QuadratureOrders::new(n_theta, n_phi)?).magnetic(r)
}

pub fn poynting_z(spectrum: &AngularSpectrum, r: &Vec3) -> Result<f64> {
    FocalField::new(*spectrum).poynting_z(r)
}

pub fn focal_plane_map(spectrum: &AngularSpectrum, extent: f64, n: usize) -> Result<FocalGrid> {
    FocalField::new(*spectrum).focal_plane_map(extent, n)
}

pub fn axial_phase(spectrum: &AngularSpectrum, kz: &[f64]) -> Result<Vec<Option<f64>>> {
    FocalField::new(*spectrum).axial_phase(kz)
}

pub fn focal_plane_power(spectrum: &AngularSpectrum, k_rho_max: f64, n_rho: usize, n_phi: usize) -> Result<f64> {
    FocalField::new(*spectrum).focal_plane_power(k_rho_max, n_rho, n_phi)
}
