//! Command-line front end. Every command writes comma-separated tables with
//! `#`-prefixed metadata lines; multi-panel commands write one file per
//! panel next to the requested output path.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;

use crate::beams::{make_spectrum, AngularSpectrum, BeamKind, BeamParams};
use crate::debye::{FocalField, QuadratureOrders};
use crate::error::{invalid, Error, Result};
use crate::multipole::{aperture_factor, expansion_coefficients, plane_wave_coefficients, reconstruct_spectrum};
use crate::scattering::{
    detuning_sweep, phase_shift, summarize, transmittance_px, Oscillator, OscillatorKind, SweepConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Fig1b,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Map,
    Coeffs,
    Sweep,
    Summary,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Fig1b => "fig1b",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Fig5 => "fig5",
            Command::Fig6 => "fig6",
            Command::Map => "map",
            Command::Coeffs => "coeffs",
            Command::Sweep => "sweep",
            Command::Summary => "summary",
        }
    }
}

fn parse_beam(s: &str) -> std::result::Result<BeamKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_oscillator(s: &str) -> std::result::Result<OscillatorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Fields of focused beams and a single scatterer at the focus, as CSV.
#[derive(Debug, Parser)]
#[command(name = "focus-scatter", version)]
pub struct Cli {
    pub command: Command,

    /// fpw or px
    #[arg(long, value_parser = parse_beam)]
    pub beam: Option<BeamKind>,
    /// Semiaperture angle (radians unless --degrees)
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Collection half-angle (radians unless --degrees)
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub ellmax: Option<usize>,
    #[arg(long)]
    pub ntheta: Option<usize>,
    #[arg(long)]
    pub nphi: Option<usize>,
    /// Half-width of focal-plane maps in units of 1/k
    #[arg(long)]
    pub extent: Option<f64>,
    /// Samples per axis or per curve
    #[arg(long)]
    pub samples: Option<usize>,
    /// Detuning range in units of the linewidth
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub detuning_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub detuning_max: f64,
    #[arg(long, default_value_t = 201)]
    pub detuning_steps: usize,
    /// Single detuning for `summary`, in units of the linewidth
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub detuning: f64,
    /// classical or tls
    #[arg(long, value_parser = parse_oscillator, default_value = "classical")]
    pub oscillator: OscillatorKind,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rabi: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read --alpha and --beta in degrees
    #[arg(long)]
    pub degrees: bool,
}

pub const DEFAULT_ELL_MAX: usize = 40;

/// Validated, fully resolved run parameters. Optional fields fall back to
/// per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beam: Option<BeamKind>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub ell_max: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    pub extent: Option<f64>,
    pub samples: Option<usize>,
    pub detuning_min: f64,
    pub detuning_max: f64,
    pub detuning_steps: usize,
    pub detuning: f64,
    pub oscillator: OscillatorKind,
    pub gamma: f64,
    pub rabi: f64,
    pub out: PathBuf,
}

fn check_angle(name: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(a) if !(a > 0.0 && a <= FRAC_PI_2 * (1.0 + 1e-12)) => {
            invalid(format!("--{name} = {a} rad outside (0, pi/2]"))
        }
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let to_rad = |v: Option<f64>| v.map(|a| if cli.degrees { a.to_radians() } else { a });
        // snap inputs within 1e-7 of pi/2
        let clamp = |v: Option<f64>| {
            v.map(|a| {
                if (a - FRAC_PI_2).abs() <= 1e-7 * FRAC_PI_2 {
                    FRAC_PI_2
                } else {
                    a
                }
            })
        };
        let alpha = clamp(to_rad(cli.alpha));
        let beta = clamp(to_rad(cli.beta));
        check_angle("alpha", alpha)?;
        check_angle("beta", beta)?;
        if let Some(n) = cli.samples {
            if n < 2 {
                return invalid("--samples must be >= 2");
            }
        }
        if cli.ellmax == Some(0) {
            return invalid("--ellmax must be >= 1");
        }
        let out = cli
            .out
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cli.command.name())));
        Ok(Self {
            command: cli.command,
            beam: cli.beam,
            alpha,
            beta,
            ell_max: cli.ellmax,
            n_theta: cli.ntheta,
            n_phi: cli.nphi,
            extent: cli.extent,
            samples: cli.samples,
            detuning_min: cli.detuning_min,
            detuning_max: cli.detuning_max,
            detuning_steps: cli.detuning_steps,
            detuning: cli.detuning,
            oscillator: cli.oscillator,
            gamma: cli.gamma,
            rabi: cli.rabi,
            out,
        })
    }

    fn orders(&self) -> Result<QuadratureOrders> {
        QuadratureOrders::new(self.n_theta.unwrap_or(64), self.n_phi.unwrap_or(32))
    }

    /// Polar order for an expansion up to `ell_max`; the default grows with it.
    fn expansion_theta(&self, ell_max: usize) -> usize {
        self.n_theta.unwrap_or(64.max(2 * ell_max))
    }

    fn oscillator(&self, detuning_over_gamma: f64) -> Result<Oscillator> {
        let d = detuning_over_gamma * self.gamma;
        match self.oscillator {
            OscillatorKind::Classical => Oscillator::classical(self.gamma, d),
            OscillatorKind::Tls => Oscillator::tls(self.gamma, d, self.rabi),
        }
    }

    fn sweep(&self, kind: BeamKind, alpha: f64, beta: f64) -> SweepConfig {
        SweepConfig {
            kind,
            alpha,
            beta,
            oscillator: self.oscillator,
            gamma: self.gamma,
            rabi: self.rabi,
            detuning_min: self.detuning_min,
            detuning_max: self.detuning_max,
            steps: self.detuning_steps,
        }
    }

    fn panel_path(&self, panel: &str) -> PathBuf {
        let stem = self
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let ext = self
            .out
            .extension()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "csv".into());
        self.out.with_file_name(format!("{stem}_{panel}.{ext}"))
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let opt_f = |v: Option<f64>| v.map(fmt_f).unwrap_or_else(|| "default".into());
        let opt_u = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_else(|| "default".into());
        vec![
            ("command".into(), self.command.name().into()),
            (
                "beam".into(),
                self.beam.map(|b| b.to_string()).unwrap_or_else(|| "default".into()),
            ),
            ("alpha_rad".into(), opt_f(self.alpha)),
            ("beta_rad".into(), opt_f(self.beta)),
            ("ellmax".into(), opt_u(self.ell_max)),
            ("ntheta".into(), opt_u(self.n_theta)),
            ("nphi".into(), opt_u(self.n_phi)),
            ("extent_over_k".into(), opt_f(self.extent)),
            ("samples".into(), opt_u(self.samples)),
            ("detuning_min".into(), fmt_f(self.detuning_min)),
            ("detuning_max".into(), fmt_f(self.detuning_max)),
            ("detuning_steps".into(), self.detuning_steps.to_string()),
            ("detuning".into(), fmt_f(self.detuning)),
            ("oscillator".into(), self.oscillator.to_string()),
            ("gamma".into(), fmt_f(self.gamma)),
            ("rabi".into(), fmt_f(self.rabi)),
        ]
    }
}

fn fmt_f(v: f64) -> String {
    if v == 0.0 {
        "0.0000000000000000e0".into()
    } else if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".into()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_else(|| "nan".into())
}

/// One CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub path: PathBuf,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(path: PathBuf, config: &RunConfig, columns: &[&str]) -> Self {
        Self {
            path,
            meta: config.metadata(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn note(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.into(), value.into()));
    }

    /// Replaces a `default` metadata entry by the value actually used.
    fn resolve(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.meta.push((key.into(), value)),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str("# focus-scatter ");
        s.push_str(env!("CARGO_PKG_VERSION"));
        s.push('\n');
        s.push_str("# units: Gaussian, c = 1, k = 2pi (wavelength 1), f E0 = 1, angles in radians\n");
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    fn write(&self) -> std::io::Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut w = BufWriter::new(fs::File::create(&self.path)?);
        w.write_all(self.render().as_bytes())?;
        w.flush()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Output {
    tables: Vec<Table>,
    checks: Vec<Check>,
}

impl Output {
    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

/// Builds all tables in memory, then writes them in order.
pub fn run(config: &RunConfig) -> anyhow::Result<RunReport> {
    let out = build(config)?;
    let mut report = RunReport {
        files: Vec::new(),
        checks: out.checks,
    };
    for t in &out.tables {
        t.write()
            .map_err(|e| anyhow::anyhow!("writing {}: {e}", t.path.display()))?;
        report.files.push(t.path.clone());
    }
    Ok(report)
}

fn build(config: &RunConfig) -> Result<Output> {
    match config.command {
        Command::Fig1b => fig1b(config),
        Command::Fig2 => fig2(config),
        Command::Fig3 => fig3(config),
        Command::Fig4 => fig4(config),
        Command::Fig5 => fig5(config),
        Command::Fig6 => fig6(config),
        Command::Map => map(config),
        Command::Coeffs => coeffs(config),
        Command::Sweep => sweep(config),
        Command::Summary => summary(config),
    }
}

fn spectrum(kind: BeamKind, alpha: f64) -> Result<AngularSpectrum> {
    make_spectrum(BeamParams::new(kind, alpha)?)
}

fn beams_or_both(config: &RunConfig) -> Vec<BeamKind> {
    config
        .beam
        .map(|b| vec![b])
        .unwrap_or_else(|| vec![BeamKind::Fpw, BeamKind::Px])
}

fn fig1b(config: &RunConfig) -> Result<Output> {
    let fpw = detuning_sweep(&config.sweep(BeamKind::Fpw, PI / 3.0, PI / 3.0))?;
    let px = detuning_sweep(&config.sweep(BeamKind::Px, FRAC_PI_2, FRAC_PI_2))?;
    let mut t = Table::new(config.out.clone(), config, &["detuning_over_gamma", "t_fpw", "t_px"]);
    t.resolve("beam", "fpw px");
    t.note("curves", "fpw alpha = beta = pi/3; px alpha = beta = pi/2");
    for (a, b) in fpw.iter().zip(&px) {
        t.push(vec![
            fmt_f(a.detuning_over_gamma),
            fmt_f(a.transmittance),
            fmt_f(b.transmittance),
        ]);
    }
    let mut out = Output::default();
    let min_px = px.iter().map(|r| r.transmittance).fold(f64::INFINITY, f64::min);
    if config.oscillator == OscillatorKind::Classical && config.detuning_min <= 0.0 && config.detuning_max >= 0.0 {
        out.check(
            "px_resonant_transmittance",
            min_px.abs() < 1e-9 || px.iter().all(|r| r.detuning_over_gamma != 0.0),
            format!("min T_px = {min_px:e}"),
        );
    }
    let all = fpw
        .iter()
        .chain(&px)
        .all(|r| r.transmittance > -1e-12 && r.transmittance.is_finite());
    out.check("transmittance_nonnegative", all, String::new());
    out.tables.push(t);
    Ok(out)
}

fn fig2(config: &RunConfig) -> Result<Output> {
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let extent = config.extent.unwrap_or(12.0);
    let n = config.samples.unwrap_or(101);
    let mut out = Output::default();
    for kind in beams_or_both(config) {
        let field = FocalField::with_orders(spectrum(kind, alpha)?, config.orders()?);
        let grid = field.focal_plane_map(extent, n)?;
        let mut t = Table::new(
            config.panel_path(&format!("{kind}_map")),
            config,
            &[
                "kx",
                "ky",
                "s_z_norm",
                "ex_sq_norm",
                "ey_sq_norm",
                "ez_sq_norm",
                "ex_phase",
            ],
        );
        resolve_field(&mut t, kind, alpha, extent, n, &field);
        t.note("normalization", "S_z and |E_i|^2 divided by S_z(O) and |E_x(O)|^2");
        let sz = grid.s_z_normalized();
        for iy in 0..n {
            for ix in 0..n {
                let i = grid.index(ix, iy);
                t.push(vec![
                    fmt_f(grid.axis[ix]),
                    fmt_f(grid.axis[iy]),
                    fmt_f(sz[i]),
                    fmt_f(grid.ex_sq[i] / grid.ex_sq_origin),
                    fmt_f(grid.ey_sq[i] / grid.ex_sq_origin),
                    fmt_f(grid.ez_sq[i] / grid.ex_sq_origin),
                    fmt_f(grid.ex_phase[i]),
                ]);
            }
        }
        out.tables.push(t);

        let kz: Vec<f64> = (0..=240).map(|i| -30.0 + 0.25 * i as f64).collect();
        let phase = field.axial_phase(&kz)?;
        let mut t = Table::new(config.panel_path(&format!("{kind}_phase")), config, &["kz", "phase"]);
        resolve_field(&mut t, kind, alpha, extent, n, &field);
        t.note("phase", "arg E_x(0,0,z) - kz, unwrapped; nan where E_x = 0");
        for (z, p) in kz.iter().zip(&phase) {
            t.push(vec![fmt_f(*z), fmt_opt(*p)]);
        }
        out.tables.push(t);

        let mut worst: f64 = 0.0;
        for i in 0..kz.len() / 2 {
            if let (Some(a), Some(b)) = (phase[i], phase[kz.len() - 1 - i]) {
                worst = worst.max(circular_distance(a + b, -PI));
            }
        }
        out.check(
            &format!("{kind}_axial_phase_symmetry"),
            worst < 1e-6,
            format!("max |phi(z) + phi(-z) + pi| mod 2pi = {worst:e}"),
        );
    }
    Ok(out)
}

fn resolve_field(t: &mut Table, kind: BeamKind, alpha: f64, extent: f64, n: usize, field: &FocalField) {
    let o = field.base_orders();
    t.resolve("beam", kind.to_string());
    t.resolve("alpha_rad", fmt_f(alpha));
    t.resolve("extent_over_k", fmt_f(extent));
    t.resolve("samples", n.to_string());
    t.resolve("ntheta", format!("{} (raised with distance from the focus)", o.n_theta));
    t.resolve("nphi", format!("{} (raised with distance from the focus)", o.n_phi));
}

fn resolve_expansion(t: &mut Table, kind: BeamKind, alpha: f64, ell_max: usize, n_theta: usize, n_phi: usize) {
    t.resolve("beam", kind.to_string());
    t.resolve("alpha_rad", fmt_f(alpha));
    t.resolve("ellmax", ell_max.to_string());
    t.resolve("ntheta", n_theta.to_string());
    t.resolve("nphi", n_phi.to_string());
}

/// Distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn fig3(config: &RunConfig) -> Result<Output> {
    let n = config.samples.unwrap_or(90);
    let step = FRAC_PI_2 / n as f64;
    let mut t = Table::new(config.out.clone(), config, &["alpha", "beta", "t0"]);
    t.resolve("beam", "px");
    t.resolve("samples", n.to_string());
    let mut monotone = true;
    let mut edge = true;
    for i in 1..=n {
        let alpha = step * i as f64;
        for j in 1..=n {
            let beta = step * j as f64;
            let v = transmittance_px(alpha, beta)?;
            if i > 1 && v > transmittance_px(step * (i - 1) as f64, beta)? {
                monotone = false;
            }
            if i == n && v != 0.0 {
                edge = false;
            }
            t.push(vec![fmt_f(alpha), fmt_f(beta), fmt_f(v)]);
        }
    }
    let mut out = Output::default();
    out.check("t0_monotone_in_alpha", monotone, String::new());
    out.check("t0_full_aperture_zero", edge, String::new());
    out.tables.push(t);
    Ok(out)
}

fn fig4(config: &RunConfig) -> Result<Output> {
    let kind = config.beam.unwrap_or(BeamKind::Px);
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let ell_max = config.ell_max.unwrap_or(DEFAULT_ELL_MAX);
    let (nt, np) = (config.expansion_theta(ell_max), config.n_phi.unwrap_or(32));
    let s = spectrum(kind, alpha)?;
    let c = expansion_coefficients(&s, ell_max, nt, np)?;
    let pw = plane_wave_coefficients(ell_max, s.k(), 1.0)?;
    let unit = s.k() * s.amplitude();
    let mut t = Table::new(
        config.out.clone(),
        config,
        &["ell", "abs_a_e", "abs_b_o", "arg_a_e", "arg_b_o", "plane_wave_abs"],
    );
    resolve_expansion(&mut t, kind, alpha, ell_max, nt, np);
    t.note(
        "units",
        "focused-beam coefficients in units of f k E0, plane wave in units of E0",
    );
    for ell in 1..=ell_max {
        let (a, b) = (c.a_e(ell) / unit, c.b_o(ell) / unit);
        t.push(vec![
            ell.to_string(),
            fmt_f(a.norm()),
            fmt_f(b.norm()),
            fmt_f(a.arg()),
            fmt_f(b.arg()),
            fmt_f(pw.a_e(ell).norm()),
        ]);
    }
    let mut out = Output::default();
    let exact = aperture_factor(kind, alpha)?;
    let got = c.a_e(1) / unit;
    let err = (got - Complex64::new(0.0, -exact)).norm();
    out.check(
        "a11_closed_form",
        err <= 1e-10 * exact.max(1e-300),
        format!("|A11 - closed form| = {err:e}"),
    );
    out.tables.push(t);
    Ok(out)
}

fn fig5(config: &RunConfig) -> Result<Output> {
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let n = config.samples.unwrap_or(181);
    let mut out = Output::default();
    for kind in beams_or_both(config) {
        let ell_max = config.ell_max.unwrap_or(match kind {
            BeamKind::Fpw => 8,
            BeamKind::Px => 16,
        });
        let (nt, np) = (config.expansion_theta(ell_max), config.n_phi.unwrap_or(32));
        let s = spectrum(kind, alpha)?;
        let c = expansion_coefficients(&s, ell_max, nt, np)?;
        let mut t = Table::new(
            config.panel_path(&kind.to_string()),
            config,
            &[
                "phi",
                "theta",
                "a_theta",
                "a_phi",
                "series_a_theta_re",
                "series_a_theta_im",
                "series_a_phi_re",
                "series_a_phi_im",
            ],
        );
        resolve_expansion(&mut t, kind, alpha, ell_max, nt, np);
        t.resolve("samples", n.to_string());
        t.note("units", "f E0");
        for phi in [0.0, FRAC_PI_2] {
            for i in 0..n {
                let theta = PI * i as f64 / (n - 1) as f64;
                let exact = s.evaluate(theta, phi);
                let approx = reconstruct_spectrum(&c, theta, phi)?;
                t.push(vec![
                    fmt_f(phi),
                    fmt_f(theta),
                    fmt_f(exact.theta.re),
                    fmt_f(exact.phi.re),
                    fmt_f(approx.theta.re),
                    fmt_f(approx.theta.im),
                    fmt_f(approx.phi.re),
                    fmt_f(approx.phi.im),
                ]);
            }
        }
        out.tables.push(t);
    }
    Ok(out)
}

fn fig6(config: &RunConfig) -> Result<Output> {
    let alphas = config
        .alpha
        .map(|a| vec![a])
        .unwrap_or_else(|| vec![FRAC_PI_6, FRAC_PI_4]);
    let beams = beams_or_both(config);
    let mut columns = vec!["detuning_over_gamma".to_string()];
    for kind in &beams {
        for a in &alphas {
            columns.push(format!("phase_{kind}_alpha_{:.4}", a));
        }
    }
    let cols: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut t = Table::new(config.out.clone(), config, &cols);
    t.resolve(
        "alpha_rad",
        alphas.iter().map(|a| fmt_f(*a)).collect::<Vec<_>>().join(" "),
    );
    t.note("phase", "radians; nan where undefined");
    let grid = config.sweep(BeamKind::Fpw, FRAC_PI_2, FRAC_PI_2).grid()?;
    for d in grid {
        let mut row = vec![fmt_f(d)];
        for kind in &beams {
            for a in &alphas {
                let p = match phase_shift(*kind, *a, d) {
                    Ok(v) => Some(v),
                    Err(Error::Domain(_)) => None,
                    Err(e) => return Err(e),
                };
                row.push(fmt_opt(p));
            }
        }
        t.push(row);
    }
    Ok(Output {
        tables: vec![t],
        checks: Vec::new(),
    })
}

fn map(config: &RunConfig) -> Result<Output> {
    let kind = config.beam.unwrap_or(BeamKind::Fpw);
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let extent = config.extent.unwrap_or(12.0);
    let n = config.samples.unwrap_or(101);
    let field = FocalField::with_orders(spectrum(kind, alpha)?, config.orders()?);
    let grid = field.focal_plane_map(extent, n)?;
    let mut t = Table::new(
        config.out.clone(),
        config,
        &["kx", "ky", "s_z", "ex_sq", "ey_sq", "ez_sq", "ex_phase"],
    );
    resolve_field(&mut t, kind, alpha, extent, n, &field);
    t.note("units", "S_z in c (f E0)^2 k^2, |E|^2 in (f E0 k)^2 with k = 2pi");
    for iy in 0..n {
        for ix in 0..n {
            let i = grid.index(ix, iy);
            t.push(vec![
                fmt_f(grid.axis[ix]),
                fmt_f(grid.axis[iy]),
                fmt_f(grid.s_z[i]),
                fmt_f(grid.ex_sq[i]),
                fmt_f(grid.ey_sq[i]),
                fmt_f(grid.ez_sq[i]),
                fmt_f(grid.ex_phase[i]),
            ]);
        }
    }
    let mut out = Output::default();
    let finite = grid.s_z.iter().chain(&grid.e_sq).all(|v| v.is_finite());
    out.check("map_finite", finite, String::new());
    out.tables.push(t);
    Ok(out)
}

fn coeffs(config: &RunConfig) -> Result<Output> {
    let kind = config.beam.unwrap_or(BeamKind::Px);
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let ell_max = config.ell_max.unwrap_or(DEFAULT_ELL_MAX);
    let (nt, np) = (config.expansion_theta(ell_max), config.n_phi.unwrap_or(32));
    let s = spectrum(kind, alpha)?;
    let c = expansion_coefficients(&s, ell_max, nt, np)?;
    let unit = s.k() * s.amplitude();
    let mut t = Table::new(
        config.out.clone(),
        config,
        &["ell", "a_e_re", "a_e_im", "b_o_re", "b_o_im"],
    );
    resolve_expansion(&mut t, kind, alpha, ell_max, nt, np);
    t.note("units", "f k E0");
    for ell in 1..=ell_max {
        let (a, b) = (c.a_e(ell) / unit, c.b_o(ell) / unit);
        t.push(vec![
            ell.to_string(),
            fmt_f(a.re),
            fmt_f(a.im),
            fmt_f(b.re),
            fmt_f(b.im),
        ]);
    }
    Ok(Output {
        tables: vec![t],
        checks: Vec::new(),
    })
}

fn sweep(config: &RunConfig) -> Result<Output> {
    let kind = config.beam.unwrap_or(BeamKind::Px);
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let beta = config.beta.unwrap_or(alpha);
    let rows = detuning_sweep(&config.sweep(kind, alpha, beta))?;
    let mut t = Table::new(
        config.out.clone(),
        config,
        &["detuning_over_gamma", "sigma_over_sigma0", "k", "t", "r", "phase"],
    );
    t.resolve("beam", kind.to_string());
    t.resolve("alpha_rad", fmt_f(alpha));
    t.resolve("beta_rad", fmt_f(beta));
    if config.oscillator == OscillatorKind::Tls {
        t.note("transmittance", "full collection, T = 1 - K/2");
    } else {
        t.note("transmittance", "collected within beta");
    }
    for r in &rows {
        t.push(vec![
            fmt_f(r.detuning_over_gamma),
            fmt_f(r.sigma_ratio),
            fmt_f(r.scattering_ratio),
            fmt_f(r.transmittance),
            fmt_f(r.reflectance),
            fmt_opt(r.phase),
        ]);
    }
    Ok(Output {
        tables: vec![t],
        checks: Vec::new(),
    })
}

fn summary(config: &RunConfig) -> Result<Output> {
    let kind = config.beam.unwrap_or(BeamKind::Px);
    let alpha = config.alpha.unwrap_or(FRAC_PI_2);
    let s = spectrum(kind, alpha)?;
    let osc = config.oscillator(config.detuning)?;
    let sum = summarize(&osc, &s)?;
    let mut t = Table::new(config.out.clone(), config, &["quantity", "value"]);
    t.resolve("beam", kind.to_string());
    t.resolve("alpha_rad", fmt_f(alpha));
    t.note("areas", "in units of lambda^2");
    for (name, v) in [
        ("sigma", Some(sum.sigma)),
        ("area_eff", Some(sum.area_eff)),
        ("k", Some(sum.k)),
        ("t", Some(sum.t)),
        ("r", Some(sum.r)),
        ("phi", sum.phi),
    ] {
        t.push(vec![name.into(), fmt_opt(v)]);
    }
    let mut out = Output::default();
    out.check(
        "k_times_area_is_sigma",
        (sum.k * sum.area_eff - sum.sigma).abs() <= 1e-12 * sum.sigma.max(1e-300),
        String::new(),
    );
    out.tables.push(t);
    Ok(out)
}

/// Renders the tables a configuration would write, without touching disk.
pub fn render(config: &RunConfig) -> Result<Vec<(PathBuf, String)>> {
    Ok(build(config)?
        .tables
        .iter()
        .map(|t| (t.path.clone(), t.render()))
        .collect())
}

pub fn default_out(command: Command, dir: &Path) -> PathBuf {
    dir.join(format!("{}.csv", command.name()))
}
