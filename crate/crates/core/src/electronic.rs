//! The Rydberg electron in the trap: transverse channel, the
//! transverse-averaged one-dimensional potential, critical principal
//! quantum numbers and the field-ionization saddle.
//!
//! Both ionic cores are treated as charge 2 (the electron moves between
//! two doubly charged ions), so energies are labelled by the hydrogenic
//! effective quantum number E(n) = −4·Ry/n².

use std::f64::consts::PI;

use thiserror::Error;

use crate::quantities::{constants, energy_to_hertz};
use crate::special::erfcx_unchecked;
use crate::trap::{TrapConfig, TwoIonGeometry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElectronicError {
    #[error("no saddle point beyond the outer ion (gamma search up to {gamma_max}); the electron is always bound")]
    NoSaddle { gamma_max: f64 },
    #[error("effective quantum number requires a negative energy, got {0} J")]
    NonNegativeEnergy(f64),
    #[error("effective quantum number must be positive, got {0}")]
    NonPositiveN(f64),
}

/// Transverse (Landau-like) electronic channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseChannel {
    /// Electron cyclotron frequency eB/m (rad/s).
    pub cyclotron: f64,
    /// Transverse confinement Ω_ρ = √((2/m)[e²B²/(8m) + eβ]) (rad/s).
    pub confinement: f64,
    /// Inverted-parabola frequency Ω_z = 2√(eβ/m) (rad/s).
    pub anti_confinement: f64,
    /// Oscillator length ρ₀ = √(ħ/(mΩ_ρ)) (m).
    pub rho0: f64,
}

pub fn transverse_channel(cfg: &TrapConfig) -> TransverseChannel {
    let c = constants();
    let (e, m) = (c.elementary_charge, c.electron_mass);
    let b = cfg.field;
    let confinement = ((2.0 / m) * (e * e * b * b / (8.0 * m) + e * cfg.gradient)).sqrt();
    TransverseChannel {
        cyclotron: e * b / m,
        confinement,
        anti_confinement: 2.0 * (e * cfg.gradient / m).sqrt(),
        rho0: (c.hbar / (m * confinement)).sqrt(),
    }
}

/// E_{ν,μ} = 2ħΩ_c μ + ħΩ_ρ(2ν + |μ| + 1) in joules.
pub fn transverse_energy(nu: u32, mu: i32, ch: &TransverseChannel) -> f64 {
    let hbar = constants().hbar;
    2.0 * hbar * ch.cyclotron * mu as f64
        + hbar * ch.confinement * (2.0 * nu as f64 + mu.unsigned_abs() as f64 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wells {
    Both,
    /// Only the core at ion 1's position.
    First,
    /// Only the core at ion 2's position.
    Second,
}

/// Longitudinal potential of the channelled electron,
///
/// V(z) = −(e²/2πε₀)(√π/ρ₀) Σₖ erfcx(|z − Zₖ|/ρ₀) − ½ m Ω_z² z².
///
/// Stored in atomic units so the eigensolver can sample it without
/// conversions; the public `energy` entry point is SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential1D {
    centers: [f64; 2],
    rho0: f64,
    anti_confinement: f64,
    include_trap: bool,
    wells: Wells,
}

impl Potential1D {
    /// Potential for the frozen equilibrium geometry, both wells, trap term on.
    pub fn new(geom: &TwoIonGeometry, ch: &TransverseChannel) -> Self {
        Self::from_parts(geom.z1, geom.z2, ch.rho0, ch.anti_confinement)
    }

    /// Raw construction from positions (m), ρ₀ (m) and Ω_z (rad/s).
    pub fn from_parts(z1: f64, z2: f64, rho0: f64, anti_confinement: f64) -> Self {
        let c = constants();
        Self {
            centers: [z1 / c.bohr_radius, z2 / c.bohr_radius],
            rho0: rho0 / c.bohr_radius,
            anti_confinement: anti_confinement * c.atomic_time(),
            include_trap: true,
            wells: Wells::Both,
        }
    }

    pub fn with_trap_term(mut self, on: bool) -> Self {
        self.include_trap = on;
        self
    }

    pub fn with_wells(mut self, wells: Wells) -> Self {
        self.wells = wells;
        self
    }

    pub fn includes_trap_term(&self) -> bool {
        self.include_trap
    }

    pub fn wells(&self) -> Wells {
        self.wells
    }

    /// Well centres (m).
    pub fn centers(&self) -> [f64; 2] {
        let a0 = constants().bohr_radius;
        [self.centers[0] * a0, self.centers[1] * a0]
    }

    /// ρ₀ in Bohr radii.
    pub fn rho0_bohr(&self) -> f64 {
        self.rho0
    }

    /// Midpoint between the ions (m).
    pub fn symmetry_point(&self) -> f64 {
        constants().bohr_radius * self.symmetry_point_bohr()
    }

    /// Reflection centre in Bohr radii: the midpoint for two wells, the
    /// well itself for one.
    pub fn symmetry_point_bohr(&self) -> f64 {
        match self.wells {
            Wells::Both => 0.5 * (self.centers[0] + self.centers[1]),
            Wells::First => self.centers[0],
            Wells::Second => self.centers[1],
        }
    }

    /// Whether V is mirror-symmetric about [`Self::symmetry_point_bohr`].
    pub fn is_symmetric(&self) -> bool {
        !self.include_trap || self.anti_confinement == 0.0
    }

    /// Half-distance between the wells, or zero for a single well (a₀).
    pub fn half_separation_bohr(&self) -> f64 {
        match self.wells {
            Wells::Both => 0.5 * (self.centers[0] - self.centers[1]).abs(),
            _ => 0.0,
        }
    }

    /// Depth of a single regularised well, 2√π/ρ₀ (Hartree).
    pub fn well_depth_hartree(&self) -> f64 {
        2.0 * PI.sqrt() / self.rho0
    }

    /// V at z (a₀), in Hartree.
    #[inline]
    pub fn value_au(&self, z: f64) -> f64 {
        let pref = -2.0 * PI.sqrt() / self.rho0;
        let term = |c: f64| erfcx_unchecked((z - c).abs() / self.rho0);
        let wells = match self.wells {
            Wells::Both => term(self.centers[0]) + term(self.centers[1]),
            Wells::First => term(self.centers[0]),
            Wells::Second => term(self.centers[1]),
        };
        let trap = if self.include_trap {
            -0.5 * self.anti_confinement * self.anti_confinement * z * z
        } else {
            0.0
        };
        pref * wells + trap
    }

    /// V at z (m), in joules.
    pub fn energy(&self, z: f64) -> f64 {
        let c = constants();
        self.value_au(z / c.bohr_radius) * c.hartree
    }
}

/// Equivalent name for [`Potential1D::energy`].
pub fn effective_potential(p: &Potential1D, z: f64) -> f64 {
    p.energy(z)
}

/// E(n) = −4·Ry/n² (J).
pub fn energy_of_n(n: f64) -> Result<f64, ElectronicError> {
    if !(n > 0.0) {
        return Err(ElectronicError::NonPositiveN(n));
    }
    let c = constants();
    Ok(-4.0 * c.rydberg_ev * c.electron_volt() / (n * n))
}

/// Inverse of [`energy_of_n`].
pub fn n_of_energy(energy: f64) -> Result<f64, ElectronicError> {
    if !(energy < 0.0) {
        return Err(ElectronicError::NonNegativeEnergy(energy));
    }
    let c = constants();
    Ok((4.0 * c.rydberg_ev * c.electron_volt() / -energy).sqrt())
}

/// E(n) in Hartree, −2/n².
#[inline]
pub fn energy_of_n_au(n: f64) -> f64 {
    -2.0 / (n * n)
}

#[inline]
pub fn n_of_energy_au(e: f64) -> f64 {
    (-2.0 / e).sqrt()
}

/// Saddle of the pure-Coulomb-plus-inverted-parabola potential beyond the
/// outer ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    /// z_sd / |Z_outer|.
    pub gamma: f64,
    /// Ratio of trap to Coulomb energy at the outer ion.
    pub sigma: f64,
    /// Signed saddle position (m), on the outer ion's side.
    pub position: f64,
}

impl SaddlePoint {
    pub fn distance(&self) -> f64 {
        self.position.abs()
    }
}

/// Upper end of the γ bracket.
pub const GAMMA_MAX: f64 = 50.0;

/// Solves (γ−1)⁻² + (γ+r)⁻² − σγ = 0 for the smallest root γ > 1, where
/// r = |Z_inner|/|Z_outer|, by bisection then Newton polish.
pub fn solve_saddle_equation(sigma: f64, inner_ratio: f64) -> Result<f64, ElectronicError> {
    let f = |g: f64| (g - 1.0).powi(-2) + (g + inner_ratio).powi(-2) - sigma * g;
    let df = |g: f64| -2.0 * (g - 1.0).powi(-3) - 2.0 * (g + inner_ratio).powi(-3) - sigma;
    let (mut lo, mut hi) = (1.0 + 1e-6, GAMMA_MAX);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(ElectronicError::NoSaddle { gamma_max: GAMMA_MAX });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    let mut g = 0.5 * (lo + hi);
    for _ in 0..20 {
        let fg = f(g);
        if fg.abs() < 1e-12 {
            break;
        }
        g -= fg / df(g);
    }
    Ok(g)
}

/// σ = ½Q₁³/(Q₁+Q₂)² and the saddle from the 2:1-shaped equation.
pub fn saddle_point(cfg: &TrapConfig, geom: &TwoIonGeometry) -> Result<SaddlePoint, ElectronicError> {
    let (q1, q2) = (cfg.charge_1 as f64, cfg.charge_2 as f64);
    let outer = geom.outer_position();
    let inner = geom.inner_position();
    let sigma = 0.5 * q1.powi(3) / (q1 + q2).powi(2);
    let gamma = solve_saddle_equation(sigma, inner.abs() / outer.abs())?;
    Ok(SaddlePoint {
        gamma,
        sigma,
        position: gamma * outer,
    })
}

/// Saddle located directly as the root of V'(z) for two charge-2 Coulomb
/// cores plus the inverted parabola, for arbitrary charge assignments.
pub fn saddle_point_numeric(
    geom: &TwoIonGeometry,
    ch: &TransverseChannel,
) -> Result<SaddlePoint, ElectronicError> {
    let c = constants();
    let outer = geom.outer_position() / c.bohr_radius;
    let inner = geom.inner_position() / c.bohr_radius;
    let w = ch.anti_confinement * c.atomic_time();
    let len = outer.abs();
    let dir = outer.signum();
    // Force on the electron along +dir at distance γ·len from the centre.
    let force = |g: f64| {
        let z = dir * g * len;
        let pull = |zc: f64| {
            let d = z - zc;
            -2.0 * d.signum() / (d * d)
        };
        (pull(outer) + pull(inner)) * dir + w * w * g * len
    };
    let (mut lo, mut hi) = (1.0 + 1e-6, GAMMA_MAX);
    if !(force(lo) < 0.0 && force(hi) > 0.0) {
        return Err(ElectronicError::NoSaddle { gamma_max: GAMMA_MAX });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if force(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    let gamma = 0.5 * (lo + hi);
    Ok(SaddlePoint {
        gamma,
        sigma: 0.5 * w * w * len.powi(3),
        position: gamma * geom.outer_position(),
    })
}

/// Principal quantum numbers bounding the delocalisation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalNumbers {
    /// √(D/(2a₀)): orbit-overlap estimate.
    pub n_ct: f64,
    /// Energy at which the two Coulomb wells merge, −2e²/(πε₀D) (J).
    pub e_del: f64,
    /// (e/ħ)√(mD/(16πε₀)).
    pub n_del: f64,
    /// Classical field-ionisation threshold √(γ|Z₂|/a₀).
    pub n_ion: f64,
    pub saddle: SaddlePoint,
    /// E(n_ion) − E(n_del) (J).
    pub window_width: f64,
}

impl CriticalNumbers {
    pub fn window_width_hertz(&self) -> f64 {
        energy_to_hertz(self.window_width)
    }
}

pub fn critical_numbers(
    cfg: &TrapConfig,
    geom: &TwoIonGeometry,
) -> Result<CriticalNumbers, ElectronicError> {
    let c = constants();
    let (e, eps0, a0) = (c.elementary_charge, c.vacuum_permittivity, c.bohr_radius);
    let d = geom.separation;
    let saddle = saddle_point(cfg, geom)?;
    let n_del = (e / c.hbar) * (c.electron_mass * d / (16.0 * PI * eps0)).sqrt();
    let n_ion = (saddle.gamma * geom.outer_position().abs() / a0).sqrt();
    Ok(CriticalNumbers {
        n_ct: (d / (2.0 * a0)).sqrt(),
        e_del: -2.0 * e * e / (PI * eps0 * d),
        n_del,
        n_ion,
        saddle,
        window_width: energy_of_n(n_ion)? - energy_of_n(n_del)?,
    })
}
