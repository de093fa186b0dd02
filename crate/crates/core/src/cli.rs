//! Configuration files, scenario runners and CSV/JSON emitters.
//!
//! A run configuration is a flat `key = value unit` file. Lines starting
//! with `#` are comments. Every physical value must name its unit:
//!
//! ```text
//! B = 10 T
//! beta = 2e6 V/m^2
//! mass = 40 u
//! Q1 = 2 e
//! Q2 = 1 e
//! dz = 2 a0
//! n_window = 195.5, 196.2
//! delta = 0.2, 0.5, 2.5
//! ```
//!
//! Output numbers are rounded to a fixed number of significant digits so
//! that repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::dynamics::{propagate, strong_drive_p_left, time_grid, BasisState, TransferSystem};
use crate::electronic::{
    critical_numbers, transverse_channel, ElectronicError, Potential1D,
};
use crate::quantities::{constants, hertz_to_energy, meters_to_bohr};
use crate::spectral::{
    tunnel_pairs, ChannelPotential, NWindow, PairSpectrum, SolverGrid, SolverSettings,
    SpectralError, DEFAULT_MARGIN, DEFAULT_STEP,
};
use crate::trap::{
    single_ion_modes, stability_thresholds, swap_detuning, two_ion_geometry, TrapConfig,
    TrapError,
};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const STABILITY: i32 = 3;
    pub const CONVERGENCE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },
    #[error("stability error: {0}")]
    Stability(#[from] TrapError),
    #[error("electronic structure error: {0}")]
    Electronic(#[from] ElectronicError),
    #[error("convergence failure: {0}")]
    Convergence(SpectralError),
    #[error("spectral solver error: {0}")]
    Spectral(SpectralError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigLine { .. } => exit::CONFIG,
            CliError::Stability(TrapError::InvalidConfig(_)) => exit::CONFIG,
            CliError::Stability(_) | CliError::Electronic(_) => exit::STABILITY,
            CliError::Convergence(_) => exit::CONVERGENCE,
            CliError::Spectral(SpectralError::InvalidGrid(_) | SpectralError::InvalidWindow(_)) => {
                exit::CONFIG
            }
            CliError::Spectral(_) => exit::CONVERGENCE,
            CliError::Io(_) => exit::IO,
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Spectral(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Parameter a scan may sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanAxis {
    /// Magnetic field in T.
    #[value(name = "B")]
    Field,
    /// Quadrupole gradient in V/m^2.
    #[value(name = "beta")]
    Gradient,
    /// Ion mass in u.
    #[value(name = "mass")]
    Mass,
}

impl ScanAxis {
    pub fn unit(self) -> &'static str {
        match self {
            ScanAxis::Field => "T",
            ScanAxis::Gradient => "V/m^2",
            ScanAxis::Mass => "u",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Field => "B",
            ScanAxis::Gradient => "beta",
            ScanAxis::Mass => "mass",
        }
    }

    fn apply(self, cfg: &TrapConfig, value: f64) -> TrapConfig {
        match self {
            ScanAxis::Field => cfg.with_field(value),
            ScanAxis::Gradient => cfg.with_gradient(value),
            ScanAxis::Mass => TrapConfig {
                ion_mass: value * constants().atomic_mass_unit,
                ..*cfg
            },
        }
    }
}

/// Everything a run needs. Defaults are the reference parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub trap: TrapConfig,
    /// Base Numerov step (a₀).
    pub step: f64,
    pub levels: usize,
    pub n_window: (f64, f64),
    pub scan_step_n: f64,
    pub n_tolerance: f64,
    /// Wall distance beyond the outer turning point, as a fraction.
    pub margin: f64,
    /// Allowed relative κ change between the two finest grids.
    pub kappa_tolerance: f64,
    pub deltas: Vec<f64>,
    /// Laser coupling Ω/h (Hz), optional.
    pub omega_hz: Option<f64>,
    /// Tunnel coupling κ/h (Hz), optional.
    pub kappa_hz: Option<f64>,
    /// End of the time window in units of ħ/κ.
    pub t_max: f64,
    pub samples: usize,
    pub asymptotic: bool,
    /// Potential sampling range (a₀).
    pub z_range: (f64, f64),
    pub z_samples: usize,
    pub scan_axis: ScanAxis,
    pub scan_range: (f64, f64),
    pub scan_samples: usize,
    pub format: Format,
    pub precision: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            trap: TrapConfig::default(),
            step: DEFAULT_STEP,
            levels: 3,
            n_window: (195.5, 196.2),
            scan_step_n: 0.01,
            n_tolerance: 1e-3,
            margin: DEFAULT_MARGIN,
            kappa_tolerance: 0.02,
            deltas: vec![0.2, 0.5, 2.5],
            omega_hz: None,
            kappa_hz: None,
            t_max: 20.0,
            samples: 401,
            asymptotic: true,
            z_range: (-300_000.0, 300_000.0),
            z_samples: 2001,
            scan_axis: ScanAxis::Field,
            scan_range: (5.0, 20.0),
            scan_samples: 16,
            format: Format::Json,
            precision: 10,
            out: None,
        }
    }
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::ConfigLine {
            line: self.line,
            message: format!("{}: {}", self.key, message.into()),
        }
    }

    /// Splits `numbers unit` into the numeric part and the unit token.
    fn split_unit(&self) -> (&str, Option<&str>) {
        let v = self.value.trim();
        match v.rsplit_once(char::is_whitespace) {
            Some((num, unit)) if unit.parse::<f64>().is_err() && !unit.ends_with(',') => {
                (num.trim(), Some(unit))
            }
            _ => (v, None),
        }
    }

    fn numbers(&self, s: &str) -> Result<Vec<f64>, CliError> {
        s.split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.err(format!("cannot parse number '{t}'")))
            })
            .collect()
    }

    /// Physical value(s) with a mandatory unit; returns SI-scaled values.
    fn physical(&self, units: &[(&str, f64)]) -> Result<Vec<f64>, CliError> {
        let (num, unit) = self.split_unit();
        let allowed = units.iter().map(|u| u.0).collect::<Vec<_>>().join(", ");
        let unit = unit.ok_or_else(|| self.err(format!("missing unit (one of {allowed})")))?;
        let factor = units
            .iter()
            .find(|u| u.0 == unit)
            .map(|u| u.1)
            .ok_or_else(|| self.err(format!("unit '{unit}' not accepted (one of {allowed})")))?;
        Ok(self.numbers(num)?.into_iter().map(|x| x * factor).collect())
    }

    fn scalar(&self, units: &[(&str, f64)]) -> Result<f64, CliError> {
        match self.physical(units)?.as_slice() {
            [x] => Ok(*x),
            _ => Err(self.err("expected a single value")),
        }
    }

    fn pair(&self, units: &[(&str, f64)]) -> Result<(f64, f64), CliError> {
        match self.physical(units)?.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(self.err("expected two comma-separated values")),
        }
    }

    fn dimensionless(&self) -> Result<Vec<f64>, CliError> {
        let (_, unit) = self.split_unit();
        if let Some(u) = unit {
            return Err(self.err(format!("dimensionless value takes no unit, got '{u}'")));
        }
        self.numbers(self.value)
    }

    fn plain(&self) -> Result<f64, CliError> {
        match self.dimensionless()?.as_slice() {
            [x] => Ok(*x),
            _ => Err(self.err("expected a single value")),
        }
    }

    fn count(&self) -> Result<usize, CliError> {
        self.value
            .trim()
            .parse::<usize>()
            .map_err(|_| self.err("expected a non-negative integer"))
    }

    fn charge(&self) -> Result<u32, CliError> {
        let q = self.scalar(&[("e", 1.0)])?;
        if q.fract() != 0.0 || q < 1.0 {
            return Err(self.err("charge must be a positive whole multiple of e"));
        }
        Ok(q as u32)
    }
}

const TESLA: &[(&str, f64)] = &[("T", 1.0)];
const GRADIENT: &[(&str, f64)] = &[("V/m^2", 1.0), ("V/m2", 1.0)];
const FREQUENCY: &[(&str, f64)] = &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)];

fn mass_units() -> [(&'static str, f64); 2] {
    [("u", constants().atomic_mass_unit), ("kg", 1.0)]
}

fn length_units() -> [(&'static str, f64); 4] {
    let a0 = constants().bohr_radius;
    [("a0", 1.0), ("um", 1e-6 / a0), ("nm", 1e-9 / a0), ("m", 1.0 / a0)]
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::ConfigLine {
                line: idx + 1,
                message: format!("expected 'key = value unit', got '{line}'"),
            })?;
            let e = Entry {
                line: idx + 1,
                key: key.trim(),
                value: value.trim(),
            };
            if let Some(prev) = seen.insert(e.key.to_string(), e.line) {
                return Err(e.err(format!("duplicate key (first set on line {prev})")));
            }
            cfg.apply(&e)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn apply(&mut self, e: &Entry) -> Result<(), CliError> {
        match e.key {
            "B" => self.trap.field = e.scalar(TESLA)?,
            "beta" => self.trap.gradient = e.scalar(GRADIENT)?,
            "mass" => self.trap.ion_mass = e.scalar(&mass_units())?,
            "Q1" => self.trap.charge_1 = e.charge()?,
            "Q2" => self.trap.charge_2 = e.charge()?,
            "dz" => self.step = e.scalar(&length_units())?,
            "levels" => self.levels = e.count()?,
            "n_window" => match e.dimensionless()?.as_slice() {
                [a, b] => self.n_window = (*a, *b),
                _ => return Err(e.err("expected two comma-separated values")),
            },
            "scan_step" => self.scan_step_n = e.plain()?,
            "n_tolerance" => self.n_tolerance = e.plain()?,
            "kappa_tolerance" => self.kappa_tolerance = e.plain()?,
            "margin" => self.margin = e.plain()?,
            "delta" => self.deltas = e.dimensionless()?,
            "omega" => self.omega_hz = Some(e.scalar(FREQUENCY)?),
            "kappa" => self.kappa_hz = Some(e.scalar(FREQUENCY)?),
            "t_max" => self.t_max = e.scalar(&[("hbar/kappa", 1.0)])?,
            "samples" => self.samples = e.count()?,
            "asymptotic" => {
                self.asymptotic = match e.value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(e.err("expected true or false")),
                }
            }
            "z_range" => self.z_range = e.pair(&length_units())?,
            "z_samples" => self.z_samples = e.count()?,
            "scan_axis" => {
                self.scan_axis = ScanAxis::from_str(e.value, false)
                    .map_err(|_| e.err("expected one of B, beta, mass"))?
            }
            "scan_range" => {
                let (unit, factor) = (self.scan_axis.unit(), 1.0);
                self.scan_range = e.pair(&[(unit, factor)])?
            }
            "scan_samples" => self.scan_samples = e.count()?,
            "format" => {
                self.format = Format::from_str(e.value, true).map_err(|_| e.err("expected csv or json"))?
            }
            "precision" => self.precision = e.count()?,
            "out" => self.out = Some(PathBuf::from(e.value)),
            _ => return Err(e.err("unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.trap.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.step > 0.0) {
            return bad(format!("dz must be positive, got {}", self.step));
        }
        if self.levels == 0 || self.levels > 8 {
            return bad(format!("levels must be in 1..=8, got {}", self.levels));
        }
        if !(self.n_window.0 > 0.0 && self.n_window.1 > self.n_window.0) {
            return bad(format!("n_window must satisfy 0 < a < b, got {:?}", self.n_window));
        }
        if !(self.scan_step_n > 0.0) || !(self.n_tolerance > 0.0) || !(self.kappa_tolerance > 0.0) {
            return bad("scan_step and tolerances must be positive".into());
        }
        if self.deltas.iter().any(|d| !(*d >= 0.0)) {
            return bad("delta values must be non-negative".into());
        }
        if !(self.t_max > 0.0) || self.samples < 2 {
            return bad("t_max must be positive and samples at least 2".into());
        }
        if !(self.z_range.1 > self.z_range.0) || self.z_samples < 2 {
            return bad("z_range must be increasing and z_samples at least 2".into());
        }
        if self.scan_samples == 0 {
            return bad("scan_samples must be at least 1".into());
        }
        if self.precision == 0 || self.precision > 17 {
            return bad(format!("precision must be in 1..=17, got {}", self.precision));
        }
        if self.omega_hz.is_some() != self.kappa_hz.is_some() {
            return bad("omega and kappa must be given together".into());
        }
        Ok(())
    }

    /// The δ values to propagate: Ω/κ when both are set, else the list.
    pub fn transfer_deltas(&self) -> Vec<f64> {
        match (self.omega_hz, self.kappa_hz) {
            (Some(o), Some(k)) => vec![o / k],
            _ => self.deltas.clone(),
        }
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Locale-independent decimal rendering after rounding.
pub fn format_number(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    let a = r.abs();
    if r == 0.0 {
        "0".into()
    } else if !(1e-4..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// One named scalar of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub key: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub formula: &'static str,
}

/// Trap and electronic quantities of one configuration, in a fixed order.
/// Fails when the trap is radially unstable or not prolate.
pub fn report_entries(cfg: &TrapConfig) -> Result<Vec<ReportEntry>, CliError> {
    cfg.validate()?;
    cfg.check_stable()?;
    let c = constants();
    let a0 = c.bohr_radius;
    let mhz = |w: f64| w / (2.0 * std::f64::consts::PI * 1e6);
    let ghz = |w: f64| w / (2.0 * std::f64::consts::PI * 1e9);
    let m1 = single_ion_modes(cfg, cfg.charge_1)?;
    let m2 = single_ion_modes(cfg, cfg.charge_2)?;
    let t1 = stability_thresholds(cfg, cfg.charge_1);
    let t2 = stability_thresholds(cfg, cfg.charge_2);
    let g = two_ion_geometry(cfg);
    let ch = transverse_channel(cfg);
    let crit = critical_numbers(cfg, &g)?;
    let swap = swap_detuning(cfg);
    let e = |key, value, unit, formula| ReportEntry {
        key,
        value,
        unit,
        formula,
    };
    let mut v = vec![
        e("zeta", g.zeta * 1e6, "um", "[e/(2 pi eps0 beta)]^(1/3)"),
        e("D", g.separation * 1e6, "um", "Z01 - Z02"),
        e("D_bohr", g.separation / a0, "a0", "Z01 - Z02"),
        e("Z01", g.z1 * 1e6, "um", "zeta/2 * Q2 / (Q1+Q2)^(2/3)"),
        e("Z02", g.z2 * 1e6, "um", "-zeta/2 * Q1 / (Q1+Q2)^(2/3)"),
        e("omega_c_1", mhz(m1.cyclotron), "MHz (omega/2pi)", "Q1 e B / M"),
        e("omega_c_2", mhz(m2.cyclotron), "MHz (omega/2pi)", "Q2 e B / M"),
        e("omega_rho_1", mhz(m1.radial), "MHz (omega/2pi)", "sqrt((2/M)[Q1^2 e^2 B^2/(8M) - Q1 e beta])"),
        e("omega_rho_2", mhz(m2.radial), "MHz (omega/2pi)", "sqrt((2/M)[Q2^2 e^2 B^2/(8M) - Q2 e beta])"),
        e("omega_z_1", mhz(m1.axial), "MHz (omega/2pi)", "sqrt(Q1 e beta / M)"),
        e("omega_z_2", mhz(m2.axial), "MHz (omega/2pi)", "sqrt(Q2 e beta / M)"),
        e("omega_z_plus", mhz(g.omega_plus), "MHz (omega/2pi)", "axial stretch-like normal mode"),
        e("omega_z_minus", mhz(g.omega_minus), "MHz (omega/2pi)", "axial centre-of-mass-like normal mode"),
        e("B1_1", t1.b1, "T", "sqrt(8 M beta / (Q1 e))"),
        e("B1_2", t2.b1, "T", "sqrt(8 M beta / (Q2 e))"),
        e("B2_1", t1.b2, "T", "4 sqrt(M beta / (Q1 e))"),
        e("B2_2", t2.b2, "T", "4 sqrt(M beta / (Q2 e))"),
        e("Omega_rho", ghz(ch.confinement), "GHz (omega/2pi)", "sqrt((2/m)[e^2 B^2/(8m) + e beta])"),
        e("Omega_z", mhz(ch.anti_confinement), "MHz (omega/2pi)", "2 sqrt(e beta / m)"),
        e("rho0", ch.rho0 / a0, "a0", "sqrt(hbar / (m Omega_rho))"),
        e("n_ct", crit.n_ct, "1", "sqrt(D / (2 a0))"),
        e("n_del", crit.n_del, "1", "(e/hbar) sqrt(m D / (16 pi eps0))"),
        e("n_ion", crit.n_ion, "1", "sqrt(gamma |Z02| / a0)"),
        e("gamma", crit.saddle.gamma, "1", "(g-1)^-2 + (g+|Z01/Z02|)^-2 = sigma g"),
        e("z_sd", crit.saddle.distance() / a0, "a0", "gamma |Z02|"),
        e("Delta", swap.energy, "J", "E(swapped) - E(initial), ions frozen"),
        e("Delta_over_h", swap.ordinary_frequency() * 1e-9, "GHz", "Delta / h"),
        e("window_width", crit.window_width_hertz() * 1e-9, "GHz", "[E(n_ion) - E(n_del)] / h"),
    ];
    if let Some(closed) = swap.closed_form {
        v.push(e("Delta_closed_form", closed, "J", "e beta zeta^2 / (2 3^(1/3))"));
    }
    Ok(v)
}

/// Known mismatches with commonly quoted reference numbers.
pub fn discrepancy_notes(entries: &[ReportEntry]) -> Vec<String> {
    let get = |k: &str| entries.iter().find(|e| e.key == k).map(|e| e.value);
    let mut notes = Vec::new();
    if let Some(d) = get("Delta_over_h") {
        notes.push(format!(
            "Delta/h = {} GHz from the energy difference; a quoted value of 844 GHz is not reproduced",
            format_number(d, 4)
        ));
    }
    if let Some(w) = get("window_width") {
        notes.push(format!(
            "delocalisation window width = {} GHz; a quoted value of about 60 GHz is not reproduced",
            format_number(w, 4)
        ));
    }
    notes
}

fn quantity_json(e: &ReportEntry, digits: usize) -> Value {
    json!({
        "formula": e.formula,
        "unit": e.unit,
        "value": round_sig(e.value, digits),
    })
}

fn config_json(cfg: &RunConfig) -> Value {
    let d = cfg.precision;
    let t = &cfg.trap;
    json!({
        "B": {"unit": "T", "value": round_sig(t.field, d)},
        "beta": {"unit": "V/m^2", "value": round_sig(t.gradient, d)},
        "mass": {"unit": "u", "value": round_sig(t.ion_mass / constants().atomic_mass_unit, d)},
        "Q1": {"unit": "e", "value": t.charge_1},
        "Q2": {"unit": "e", "value": t.charge_2},
    })
}

/// JSON report: configuration echo, discrepancy notes and every quantity.
pub fn report_json(cfg: &RunConfig) -> Result<Value, CliError> {
    let entries = report_entries(&cfg.trap)?;
    let mut q = Map::new();
    for e in &entries {
        q.insert(e.key.to_string(), quantity_json(e, cfg.precision));
    }
    Ok(json!({
        "config": config_json(cfg),
        "notes": discrepancy_notes(&entries),
        "quantities": Value::Object(q),
    }))
}

fn report_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let entries = report_entries(&cfg.trap)?;
    let mut out = String::new();
    for n in discrepancy_notes(&entries) {
        writeln!(out, "# note: {n}").unwrap();
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "value", "unit", "formula"]).map_err(csv_err)?;
    for e in &entries {
        w.write_record([e.key, &format_number(e.value, cfg.precision), e.unit, e.formula])
            .map_err(csv_err)?;
    }
    out.push_str(&finish_csv(w)?);
    Ok(out)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(io::Error::other(e))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

/// Frozen-ion potential along the axis: `z [a0], V_full [GHz h], V_noTrap [GHz h]`.
pub fn potential_csv(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.trap.validate()?;
    cfg.trap.check_stable()?;
    let g = two_ion_geometry(&cfg.trap);
    let ch = transverse_channel(&cfg.trap);
    let full = Potential1D::new(&g, &ch);
    let bare = full.with_trap_term(false);
    let c = constants();
    let a0 = c.bohr_radius;
    let ghz = |e_au: f64| e_au * c.hartree / c.planck() * 1e-9;
    let (lo, hi) = cfg.z_range;
    let n = cfg.z_samples;
    let d = cfg.precision;
    let mut out = String::new();
    writeln!(out, "# frozen-ion axial potential, energies divided by h").unwrap();
    writeln!(out, "# Z01 = {} a0, Z02 = {} a0, z_sym = {} a0",
        format_number(g.z1 / a0, d), format_number(g.z2 / a0, d), format_number(full.symmetry_point_bohr(), d)).unwrap();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["z [a0]", "V_full [GHz h]", "V_noTrap [GHz h]"]).map_err(csv_err)?;
    for i in 0..n {
        let z = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        w.write_record([
            format_number(z, d),
            format_number(ghz(full.value_au(z)), d),
            format_number(ghz(bare.value_au(z)), d),
        ])
        .map_err(csv_err)?;
    }
    out.push_str(&finish_csv(w)?);
    Ok(out)
}

/// Result of a spectrum run, with the failure (if any) kept alongside the
/// partial results so both can be emitted.
pub struct SpectrumRun {
    pub spectrum: PairSpectrum,
    pub grid: SolverGrid,
    pub settings: SolverSettings,
    pub failure: Option<SpectralError>,
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<SpectrumRun, CliError> {
    cfg.trap.check_stable()?;
    let g = two_ion_geometry(&cfg.trap);
    let ch = transverse_channel(&cfg.trap);
    let crit = critical_numbers(&cfg.trap, &g)?;
    let (lo, hi) = cfg.n_window;
    if lo <= crit.n_del - 2.0 || hi >= crit.n_ion {
        return Err(CliError::Config(format!(
            "n_window [{lo}, {hi}] must lie inside ({:.4}, {:.4}) = (n_del - 2, n_ion)",
            crit.n_del - 2.0,
            crit.n_ion
        )));
    }
    let pot = ChannelPotential::new(&Potential1D::new(&g, &ch).with_trap_term(false))?;
    let window = NWindow::new(lo, hi)?;
    let grid = SolverGrid::for_window(&pot, window, cfg.step, cfg.margin, cfg.levels)?;
    let settings = SolverSettings {
        scan_step_n: cfg.scan_step_n,
        n_tolerance: cfg.n_tolerance,
    };
    let spectrum = tunnel_pairs(&pot, window, &grid, &settings)?;
    let failure = spectrum.convergence_error(&settings).or_else(|| {
        spectrum
            .pairs
            .iter()
            .find(|p| p.kappa_grid_shift() > cfg.kappa_tolerance)
            .map(|p| SpectralError::NotConverged {
                parity: p.gerade.parity,
                n: p.mean_n(),
                shift_n: (p.gerade.convergence.shift_n).max(p.ungerade.convergence.shift_n),
                tolerance: cfg.n_tolerance,
            })
    });
    Ok(SpectrumRun {
        spectrum,
        grid,
        settings,
        failure,
    })
}

fn pair_converged(p: &crate::spectral::TunnelPair, cfg: &RunConfig) -> bool {
    p.gerade.converged && p.ungerade.converged && p.kappa_grid_shift() <= cfg.kappa_tolerance
}

pub fn spectrum_csv(run: &SpectrumRun, cfg: &RunConfig) -> String {
    let d = cfg.precision;
    let mut out = String::new();
    writeln!(out, "# tunnel pairs, trap term off").unwrap();
    writeln!(out, "# grid: step {} a0, half width {} a0, levels {}",
        format_number(run.grid.step, d), format_number(run.grid.half_width, d), run.grid.levels).unwrap();
    writeln!(out, "# status: {}", status_text(run)).unwrap();
    for s in &run.spectrum.unpaired {
        writeln!(out, "# unpaired {:?} level n = {} (half-line nodes {})", s.parity, format_number(s.n, d), s.half_nodes).unwrap();
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "n_g",
        "n_u",
        "kappa/h [MHz]",
        "left_fraction",
        "kappa_grid_shift",
        "error_ratio_g",
        "error_ratio_u",
        "converged",
    ])
    .unwrap();
    for p in &run.spectrum.pairs {
        let ratio = |s: &crate::spectral::ParityEigenstate| {
            s.convergence.error_ratio.map(|r| format_number(r, 4)).unwrap_or_default()
        };
        w.write_record([
            format_number(p.gerade.n, d),
            format_number(p.ungerade.n, d),
            format_number(p.kappa_hertz() * 1e-6, d),
            format_number(p.left_fraction, d),
            format_number(p.kappa_grid_shift(), 4),
            ratio(&p.gerade),
            ratio(&p.ungerade),
            pair_converged(p, cfg).to_string(),
        ])
        .unwrap();
    }
    out.push_str(&finish_csv(w).expect("in-memory csv"));
    out
}

fn status_text(run: &SpectrumRun) -> String {
    match &run.failure {
        None => "converged".into(),
        Some(e) => format!("partial results, {e}"),
    }
}

pub fn spectrum_json(run: &SpectrumRun, cfg: &RunConfig) -> Value {
    let d = cfg.precision;
    let state = |s: &crate::spectral::ParityEigenstate| {
        json!({
            "n": round_sig(s.n, d),
            "energy": {"unit": "J", "value": round_sig(s.energy, d)},
            "half_line_nodes": s.half_nodes,
            "grid_energies": {"unit": "Eh", "value": s.convergence.grid_energies.iter().map(|e| round_sig(*e, d)).collect::<Vec<_>>()},
            "grid_steps": {"unit": "a0", "value": s.convergence.steps},
            "error_ratio": s.convergence.error_ratio.map(|r| round_sig(r, 4)),
            "shift_n": round_sig(s.convergence.shift_n, 4),
            "converged": s.converged,
        })
    };
    let pairs: Vec<Value> = run
        .spectrum
        .pairs
        .iter()
        .map(|p| {
            json!({
                "gerade": state(&p.gerade),
                "ungerade": state(&p.ungerade),
                "kappa_over_h": {"unit": "MHz", "value": round_sig(p.kappa_hertz() * 1e-6, d)},
                "kappa_grid_shift": round_sig(p.kappa_grid_shift(), 4),
                "left_fraction": round_sig(p.left_fraction, d),
                "converged": pair_converged(p, cfg),
            })
        })
        .collect();
    json!({
        "grid": {
            "step": {"unit": "a0", "value": run.grid.step},
            "half_width": {"unit": "a0", "value": round_sig(run.grid.half_width, d)},
            "levels": run.grid.levels,
        },
        "n_window": [cfg.n_window.0, cfg.n_window.1],
        "pairs": pairs,
        "unpaired": run.spectrum.unpaired.iter().map(state).collect::<Vec<_>>(),
        "status": status_text(run),
        "partial": run.failure.is_some() || run.spectrum.is_partial(),
    })
}

/// Wavefunctions of every pair: `z [a0]` then g, u, l, r per pair, in
/// a0^-1/2, thinned to every `stride`-th sample.
pub fn wavefunction_csv(run: &SpectrumRun, cfg: &RunConfig, stride: usize) -> String {
    let d = cfg.precision;
    let pairs = &run.spectrum.pairs;
    let mut out = String::new();
    writeln!(out, "# wavefunctions in a0^-1/2").unwrap();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["z [a0]".to_string()];
    for (i, _) in pairs.iter().enumerate() {
        for tag in ["g", "u", "l", "r"] {
            header.push(format!("psi_{tag}{}", i + 1));
        }
    }
    w.write_record(&header).unwrap();
    if let Some(first) = pairs.first() {
        let zs: Vec<f64> = first.gerade.positions().collect();
        for i in (0..zs.len()).step_by(stride.max(1)) {
            let mut row = vec![format_number(zs[i], d)];
            for p in pairs {
                for v in [&p.gerade.wavefunction, &p.ungerade.wavefunction, &p.left, &p.right] {
                    row.push(format_number(v[i], d));
                }
            }
            w.write_record(&row).unwrap();
        }
    }
    out.push_str(&finish_csv(w).expect("in-memory csv"));
    out
}

/// One block per δ with populations starting from |G_r⟩, plus the δ ≫ 1
/// curve when requested.
pub fn transfer_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let deltas = cfg.transfer_deltas();
    if deltas.is_empty() {
        return Err(CliError::Config("delta list is empty".into()));
    }
    let d = cfg.precision;
    let taus = time_grid(cfg.t_max, cfg.samples);
    let kappa_j = cfg.kappa_hz.map(hertz_to_energy);
    let start = BasisState::GroundRight.ket();
    let mut out = String::new();
    writeln!(out, "# four-level charge transfer from |G_r>; tau = kappa t / hbar").unwrap();
    for &delta in &deltas {
        let sys = TransferSystem::from_ratio(delta);
        let trace = propagate(&sys, &start, &taus);
        writeln!(out, "# delta = {}", format_number(delta, d)).unwrap();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["tau [hbar/kappa]"];
        if kappa_j.is_some() {
            header.push("t [ns]");
        }
        header.extend(["p_left", "p_right", "p_G_l", "p_E_l", "p_E_r", "p_G_r"]);
        w.write_record(&header).map_err(csv_err)?;
        for (tau, pop) in taus.iter().zip(&trace.populations) {
            let mut row = vec![format_number(*tau, d)];
            if let Some(k) = kappa_j {
                row.push(format_number(tau * constants().hbar / k * 1e9, d));
            }
            let clamp = |p: f64| p.clamp(0.0, 1.0);
            row.push(format_number(clamp(pop[0] + pop[1]), d));
            row.push(format_number(clamp(pop[2] + pop[3]), d));
            row.extend(pop.iter().map(|p| format_number(clamp(*p), d)));
            w.write_record(&row).map_err(csv_err)?;
        }
        out.push_str(&finish_csv(w)?);
    }
    if cfg.asymptotic {
        writeln!(out, "# asymptotic delta >> 1: p_left = (1 - cos tau)/2").unwrap();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["tau [hbar/kappa]", "p_left"]).map_err(csv_err)?;
        for tau in &taus {
            w.write_record([format_number(*tau, d), format_number(strong_drive_p_left(*tau), d)])
                .map_err(csv_err)?;
        }
        out.push_str(&finish_csv(w)?);
    }
    Ok(out)
}

/// Axis values of a scan; a single sample sits at the start of the range.
pub fn scan_values(range: (f64, f64), samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![range.0],
        n => (0..n)
            .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Report quantities along one axis. Points that fail the stability
/// checks carry `unstable` in every quantity column.
pub fn scan_csv(cfg: &RunConfig, axis: ScanAxis, range: (f64, f64), samples: usize) -> Result<String, CliError> {
    if samples == 0 {
        return Err(CliError::Config("scan needs at least one sample".into()));
    }
    let values = scan_values(range, samples);
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(CliError::Config(format!("{} must stay positive over the scan range", axis.name())));
    }
    let rows: Vec<(f64, Result<Vec<ReportEntry>, CliError>)> = values
        .par_iter()
        .map(|&v| (v, report_entries(&axis.apply(&cfg.trap, v))))
        .collect();
    let template = report_entries(&TrapConfig::default())?;
    let d = cfg.precision;
    let mut out = String::new();
    writeln!(out, "# scan over {} [{}]", axis.name(), axis.unit()).unwrap();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![format!("{} [{}]", axis.name(), axis.unit()), "status".into()];
    header.extend(template.iter().map(|e| format!("{} [{}]", e.key, e.unit)));
    w.write_record(&header).map_err(csv_err)?;
    for (v, r) in rows {
        let mut row = vec![format_number(v, d)];
        match r {
            Ok(entries) => {
                row.push("ok".into());
                row.extend(template.iter().map(|t| {
                    entries
                        .iter()
                        .find(|e| e.key == t.key)
                        .map(|e| format_number(e.value, d))
                        .unwrap_or_default()
                }));
            }
            Err(e @ (CliError::Stability(_) | CliError::Electronic(_))) => {
                row.push(format!("unstable: {e}"));
                row.extend(template.iter().map(|_| "unstable".to_string()));
            }
            Err(e) => return Err(e),
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    out.push_str(&finish_csv(w)?);
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(name = "penning-rydberg", version, about = "Two-ion Penning trap with a shared Rydberg electron")]
pub struct Cli {
    /// Run configuration file (`key = value unit` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format where the command supports both.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trap, channel and critical quantities.
    Report,
    /// Frozen-ion axial potential with and without the trap term.
    Potential(RangeArgs),
    /// Gerade/ungerade pairs and tunnel couplings.
    Spectrum(SpectrumArgs),
    /// Four-level transfer traces.
    Transfer(TransferArgs),
    /// Report quantities along one parameter.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// z range in a0, as `a,b`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub range: Option<(f64, f64)>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Effective quantum number window, as `a,b`.
    #[arg(long = "n-window", value_parser = parse_pair)]
    pub n_window: Option<(f64, f64)>,
    /// Also write wavefunctions to this CSV file.
    #[arg(long)]
    pub wavefunctions: Option<PathBuf>,
    /// Keep every k-th wavefunction sample.
    #[arg(long, default_value_t = 50)]
    pub stride: usize,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    /// Comma-separated δ = Ω/κ values.
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub axis: Option<ScanAxis>,
    /// Axis range in the axis unit (T, V/m^2 or u), as `a,b`.
    #[arg(long, value_parser = parse_pair)]
    pub range: Option<(f64, f64)>,
    #[arg(long)]
    pub samples: Option<usize>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.trim().parse().map_err(|_| format!("bad number '{a}'"))?,
            b.trim().parse().map_err(|_| format!("bad number '{b}'"))?,
        )),
        _ => Err(format!("expected 'a,b', got '{s}'")),
    }
}

fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command line. Diagnostics go to `stderr`; the return
/// value is the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute_inner(cli, stdout, stderr) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute_inner(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    let out = cfg.out.clone();
    let out = out.as_deref();
    match &cli.command {
        Command::Report => {
            let text = match cfg.format {
                Format::Json => to_json_string(&report_json(&cfg)?),
                Format::Csv => report_csv(&cfg)?,
            };
            emit(&text, out, stdout)
        }
        Command::Potential(a) => {
            if let Some(r) = a.range {
                cfg.z_range = r;
            }
            if let Some(n) = a.samples {
                cfg.z_samples = n;
            }
            cfg.validate()?;
            emit(&potential_csv(&cfg)?, out, stdout)
        }
        Command::Spectrum(a) => {
            if let Some(w) = a.n_window {
                cfg.n_window = w;
            }
            cfg.validate()?;
            let run = run_spectrum(&cfg)?;
            let text = match cfg.format {
                Format::Json => to_json_string(&spectrum_json(&run, &cfg)),
                Format::Csv => spectrum_csv(&run, &cfg),
            };
            emit(&text, out, stdout)?;
            if let Some(p) = &a.wavefunctions {
                fs::write(p, wavefunction_csv(&run, &cfg, a.stride))?;
            }
            if run.spectrum.is_partial() {
                let _ = writeln!(stderr, "warning: some levels have no partner inside the window");
            }
            match run.failure {
                Some(e) => Err(CliError::Convergence(e)),
                None => Ok(()),
            }
        }
        Command::Transfer(a) => {
            if let Some(d) = &a.delta {
                cfg.deltas = d.clone();
                cfg.omega_hz = None;
                cfg.kappa_hz = None;
            }
            cfg.validate()?;
            emit(&transfer_csv(&cfg)?, out, stdout)
        }
        Command::Scan(a) => {
            let axis = a.axis.unwrap_or(cfg.scan_axis);
            let range = a.range.unwrap_or(cfg.scan_range);
            let samples = a.samples.unwrap_or(cfg.scan_samples);
            emit(&scan_csv(&cfg, axis, range, samples)?, out, stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, stdout, stderr),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                exit::CONFIG
            } else {
                let _ = write!(stdout, "{}", e.render());
                exit::SUCCESS
            }
        }
    }
}

/// Positions in a₀ of the two ions for the given trap.
pub fn ion_positions_bohr(cfg: &TrapConfig) -> (f64, f64) {
    let g = two_ion_geometry(cfg);
    (meters_to_bohr(g.z1), meters_to_bohr(g.z2))
}
