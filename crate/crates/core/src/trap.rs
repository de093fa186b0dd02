//! Penning-trap statics for one and two ions.
//!
//! The trap is a homogeneous field `B e_z` plus the quadrupole potential
//! `Φ = −β (x² + y² − 2z²)`. Ion 1 carries the larger charge and sits at
//! positive z.

use std::f64::consts::PI;

use thiserror::Error;

use crate::quantities::{constants, energy_to_angular, energy_to_hertz};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrapError {
    #[error("invalid trap configuration: {0}")]
    InvalidConfig(String),
    #[error("radially unstable: B = {field} T does not exceed B1 = {b1} T for charge {charge}")]
    RadiallyUnstable { field: f64, b1: f64, charge: u32 },
    #[error("not prolate: B = {field} T does not exceed B2 = {b2} T for charge {charge}")]
    NotProlate { field: f64, b2: f64, charge: u32 },
}

/// Trap and ion-species parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    /// Magnetic field (T).
    pub field: f64,
    /// Quadrupole gradient β (V/m²).
    pub gradient: f64,
    /// Ion mass (kg).
    pub ion_mass: f64,
    /// Charge number of ion 1 (the larger one).
    pub charge_1: u32,
    /// Charge number of ion 2.
    pub charge_2: u32,
}

/// ⁴⁰Ca isotope mass in atomic mass units, available as a mass override.
pub const CALCIUM_40_MASS_U: f64 = 39.962_590_9;

impl Default for TrapConfig {
    /// ⁴⁰Ca²⁺ + ⁴⁰Ca⁺ at B = 10 T, β = 2×10⁶ V/m², mass 40 u.
    fn default() -> Self {
        Self {
            field: 10.0,
            gradient: 2.0e6,
            ion_mass: 40.0 * constants().atomic_mass_unit,
            charge_1: 2,
            charge_2: 1,
        }
    }
}

impl TrapConfig {
    pub fn new(
        field: f64,
        gradient: f64,
        ion_mass: f64,
        charge_1: u32,
        charge_2: u32,
    ) -> Result<Self, TrapError> {
        let cfg = Self {
            field,
            gradient,
            ion_mass,
            charge_1,
            charge_2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), TrapError> {
        let bad = |m: &str| Err(TrapError::InvalidConfig(m.to_string()));
        if !(self.field > 0.0 && self.field.is_finite()) {
            return bad("magnetic field must be positive");
        }
        if !(self.gradient > 0.0 && self.gradient.is_finite()) {
            return bad("quadrupole gradient must be positive");
        }
        if !(self.ion_mass > 0.0 && self.ion_mass.is_finite()) {
            return bad("ion mass must be positive");
        }
        if self.charge_2 < 1 || self.charge_1 < self.charge_2 {
            return bad("charges must satisfy Q1 >= Q2 >= 1");
        }
        Ok(())
    }

    pub fn with_field(self, field: f64) -> Self {
        Self { field, ..self }
    }

    pub fn with_gradient(self, gradient: f64) -> Self {
        Self { gradient, ..self }
    }

    /// Both ions radially confined and the trap prolate for each of them.
    pub fn check_stable(&self) -> Result<(), TrapError> {
        for q in [self.charge_1, self.charge_2] {
            let t = stability_thresholds(self, q);
            if self.field <= t.b1 {
                return Err(TrapError::RadiallyUnstable {
                    field: self.field,
                    b1: t.b1,
                    charge: q,
                });
            }
        }
        for q in [self.charge_1, self.charge_2] {
            let t = stability_thresholds(self, q);
            if self.field <= t.b2 {
                return Err(TrapError::NotProlate {
                    field: self.field,
                    b2: t.b2,
                    charge: q,
                });
            }
        }
        Ok(())
    }
}

/// Single-ion frequencies (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleIonModes {
    pub cyclotron: f64,
    pub radial: f64,
    /// √(Qeβ/M). The centre-of-mass oscillation of an ion in the quadrupole
    /// above is 2× this value; see [`TwoIonGeometry::omega_minus`].
    pub axial: f64,
}

/// ω_c = QeB/M, ω_ρ = √((2/M)[Q²e²B²/(8M) − Qeβ]), ω_z = √(Qeβ/M).
pub fn single_ion_modes(cfg: &TrapConfig, charge: u32) -> Result<SingleIonModes, TrapError> {
    let e = constants().elementary_charge;
    let q = charge as f64 * e;
    let m = cfg.ion_mass;
    let t = stability_thresholds(cfg, charge);
    if cfg.field <= t.b1 {
        return Err(TrapError::RadiallyUnstable {
            field: cfg.field,
            b1: t.b1,
            charge,
        });
    }
    let radial_sq = (2.0 / m) * (q * q * cfg.field * cfg.field / (8.0 * m) - q * cfg.gradient);
    Ok(SingleIonModes {
        cyclotron: q * cfg.field / m,
        radial: radial_sq.max(0.0).sqrt(),
        axial: (q * cfg.gradient / m).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityThresholds {
    /// Radial confinement threshold (T).
    pub b1: f64,
    /// Prolate (chain) threshold (T).
    pub b2: f64,
}

/// B₁ = √(8Mβ/(Qe)), B₂ = 4√(Mβ/(Qe)).
pub fn stability_thresholds(cfg: &TrapConfig, charge: u32) -> StabilityThresholds {
    let qe = charge as f64 * constants().elementary_charge;
    let r = cfg.ion_mass * cfg.gradient / qe;
    StabilityThresholds {
        b1: (8.0 * r).sqrt(),
        b2: 4.0 * r.sqrt(),
    }
}

/// Equilibrium geometry and axial normal modes of the two-ion crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoIonGeometry {
    /// Characteristic length ζ = [e/(2πε₀β)]^{1/3} (m).
    pub zeta: f64,
    /// Equilibrium position of ion 1 (m).
    pub z1: f64,
    /// Equilibrium position of ion 2 (m).
    pub z2: f64,
    /// Inter-ion distance (m).
    pub separation: f64,
    /// Stretch-like axial mode (rad/s).
    pub omega_plus: f64,
    /// Centre-of-mass-like axial mode (rad/s).
    pub omega_minus: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

impl TwoIonGeometry {
    /// Midpoint between the two ions.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.z1 + self.z2)
    }

    /// Position of the ion farther from the trap centre.
    pub fn outer_position(&self) -> f64 {
        if self.z2.abs() >= self.z1.abs() {
            self.z2
        } else {
            self.z1
        }
    }

    /// Position of the ion closer to the trap centre.
    pub fn inner_position(&self) -> f64 {
        if self.z2.abs() >= self.z1.abs() {
            self.z1
        } else {
            self.z2
        }
    }
}

pub fn characteristic_length(gradient: f64) -> f64 {
    let c = constants();
    (c.elementary_charge / (2.0 * PI * c.vacuum_permittivity * gradient)).cbrt()
}

/// α± for the 2:1 charge ratio: √(1/2 ± 3/(2√73)).
pub fn alpha_two_to_one() -> (f64, f64) {
    let s = 3.0 / (2.0 * 73f64.sqrt());
    ((0.5 + s).sqrt(), (0.5 - s).sqrt())
}

pub fn two_ion_geometry(cfg: &TrapConfig) -> TwoIonGeometry {
    let e = constants().elementary_charge;
    let (q1, q2) = (cfg.charge_1 as f64, cfg.charge_2 as f64);
    let total = q1 + q2;
    let zeta = characteristic_length(cfg.gradient);
    let position = |k: f64| 0.5 * zeta * ((1.0 - k) * q1 + (2.0 - k) * q2) / total.powf(2.0 / 3.0);
    let z1 = position(1.0);
    let z2 = position(2.0);

    let root = (q1.powi(4) + 14.0 * q1 * q1 * q2 * q2 + q2.powi(4)).sqrt();
    let base = q1 * q1 + 6.0 * q1 * q2 + q2 * q2;
    let pref = 2.0 * e * cfg.gradient / (cfg.ion_mass * total);
    let omega_plus = (pref * (base + root)).sqrt();
    let omega_minus = (pref * (base - root)).sqrt();

    let (alpha_plus, alpha_minus) = if (cfg.charge_1, cfg.charge_2) == (2, 1) {
        alpha_two_to_one()
    } else {
        let modes = axial_hessian_modes(cfg, z1, z2);
        (modes.soft_vector[1], modes.soft_vector[0])
    };

    TwoIonGeometry {
        zeta,
        z1,
        z2,
        separation: (z1 - z2).abs(),
        omega_plus,
        omega_minus,
        alpha_plus,
        alpha_minus,
    }
}

/// Axial potential energy (J) of two ions with charges `q1`, `q2` at axial
/// positions `z1`, `z2` (trap term plus Coulomb repulsion).
pub fn axial_potential_energy(cfg: &TrapConfig, q1: u32, q2: u32, z1: f64, z2: f64) -> f64 {
    let c = constants();
    let e = c.elementary_charge;
    let trap = 2.0 * e * cfg.gradient * (q1 as f64 * z1 * z1 + q2 as f64 * z2 * z2);
    let coulomb = (q1 * q2) as f64 * c.coulomb_energy_length() / (z1 - z2).abs();
    trap + coulomb
}

/// Eigen-decomposition of the axial Hessian at the given positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianModes {
    /// Angular frequencies (soft, stiff) in rad/s.
    pub frequencies: [f64; 2],
    /// Unit eigenvector of the soft mode, oriented with non-negative entries.
    pub soft_vector: [f64; 2],
    /// Unit eigenvector of the stiff mode.
    pub stiff_vector: [f64; 2],
}

/// Analytic Hessian of [`axial_potential_energy`], diagonalised in closed
/// form (the ions have equal mass, so no mass weighting is needed).
pub fn axial_hessian_modes(cfg: &TrapConfig, z1: f64, z2: f64) -> HessianModes {
    let c = constants();
    let e = c.elementary_charge;
    let (q1, q2) = (cfg.charge_1 as f64, cfg.charge_2 as f64);
    let d = (z1 - z2).abs();
    let k = 2.0 * q1 * q2 * c.coulomb_energy_length() / d.powi(3);
    let a = 4.0 * q1 * e * cfg.gradient + k;
    let b = -k;
    let dd = 4.0 * q2 * e * cfg.gradient + k;
    let mean = 0.5 * (a + dd);
    let half_gap = (0.25 * (a - dd) * (a - dd) + b * b).sqrt();
    let (soft, stiff) = (mean - half_gap, mean + half_gap);
    let eigvec = |lambda: f64| {
        // (a - λ) x + b y = 0
        let (x, y) = if b.abs() > 0.0 { (-b, a - lambda) } else { (1.0, 0.0) };
        let n = (x * x + y * y).sqrt();
        [x / n, y / n]
    };
    let mut soft_vector = eigvec(soft);
    if soft_vector[0] < 0.0 {
        soft_vector = [-soft_vector[0], -soft_vector[1]];
    }
    let stiff_vector = eigvec(stiff);
    HessianModes {
        frequencies: [
            (soft / cfg.ion_mass).sqrt(),
            (stiff / cfg.ion_mass).sqrt(),
        ],
        soft_vector,
        stiff_vector,
    }
}

/// (Z_a, Z_b) = (α₋Z₁ + α₊Z₂, −α₊Z₁ + α₋Z₂).
pub fn normal_coordinates(geom: &TwoIonGeometry, z1: f64, z2: f64) -> (f64, f64) {
    let (ap, am) = (geom.alpha_plus, geom.alpha_minus);
    (am * z1 + ap * z2, -ap * z1 + am * z2)
}

/// Energy offset between the frozen initial configuration and the
/// charge-swapped one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapDetuning {
    /// Δ (J), from the potential-energy difference.
    pub energy: f64,
    /// eβζ²/(2·3^{1/3}); only defined for charges (2, 1).
    pub closed_form: Option<f64>,
}

impl SwapDetuning {
    /// Δ/h (Hz).
    pub fn ordinary_frequency(&self) -> f64 {
        energy_to_hertz(self.energy)
    }

    /// Δ/ħ (rad/s).
    pub fn angular_frequency(&self) -> f64 {
        energy_to_angular(self.energy)
    }
}

/// Δ as the difference of total axial potential energy between the swapped
/// and the initial charge assignment with both ions frozen at the initial
/// equilibrium positions.
pub fn swap_detuning(cfg: &TrapConfig) -> SwapDetuning {
    let g = two_ion_geometry(cfg);
    let initial = axial_potential_energy(cfg, cfg.charge_1, cfg.charge_2, g.z1, g.z2);
    let swapped = axial_potential_energy(cfg, cfg.charge_2, cfg.charge_1, g.z1, g.z2);
    let closed_form = ((cfg.charge_1, cfg.charge_2) == (2, 1)).then(|| {
        constants().elementary_charge * cfg.gradient * g.zeta * g.zeta / (2.0 * 3f64.cbrt())
    });
    SwapDetuning {
        energy: swapped - initial,
        closed_form,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::meters_to_bohr;
    use proptest::prelude::*;

    const MHZ: f64 = 2.0 * PI * 1e6;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_single_ion_frequencies() {
        let cfg = TrapConfig::default();
        let one = single_ion_modes(&cfg, 1).unwrap();
        let two = single_ion_modes(&cfg, 2).unwrap();
        assert!(rel(one.radial / MHZ, 1.85) < 0.01);
        assert!(rel(two.radial / MHZ, 3.78) < 0.01);
        // √(2eβ/M) for 40 u
        assert!(rel(two.axial / MHZ, 0.494_368) < 1e-5);
        assert!(one.cyclotron > one.radial && one.radial > 0.0);
    }

    #[test]
    fn thresholds() {
        let cfg = TrapConfig::default();
        let t1 = stability_thresholds(&cfg, 1);
        let t2 = stability_thresholds(&cfg, 2);
        assert!((t1.b1 - 2.576).abs() < 1e-3, "{}", t1.b1);
        assert!((t1.b2 - 3.642).abs() < 1e-3, "{}", t1.b2);
        assert!((t2.b1 - 1.822).abs() < 1e-3, "{}", t2.b1);
        assert!(rel(t2.b1, t1.b1 / 2f64.sqrt()) < 1e-14);
        assert!((t1.b2 / t1.b1 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn radially_unstable_carries_threshold() {
        let cfg = TrapConfig::default().with_field(2.0);
        match single_ion_modes(&cfg, 1) {
            Err(TrapError::RadiallyUnstable { b1, charge, .. }) => {
                assert_eq!(charge, 1);
                assert!((b1 - 2.576).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(TrapConfig::new(-1.0, 2e6, 1e-25, 2, 1).is_err());
        assert!(TrapConfig::new(10.0, 0.0, 1e-25, 2, 1).is_err());
        assert!(TrapConfig::new(10.0, 2e6, 1e-25, 1, 2).is_err());
        assert!(TrapConfig::new(10.0, 2e6, 1e-25, 1, 0).is_err());
        assert!(TrapConfig::new(10.0, 2e6, 1e-25, 3, 1).is_ok());
    }

    #[test]
    fn reference_geometry() {
        let g = two_ion_geometry(&TrapConfig::default());
        assert!(rel(g.zeta * 1e6, 11.29) < 5e-4);
        assert!(rel(g.separation * 1e6, 8.14) < 1e-3);
        assert!(rel(meters_to_bohr(g.separation), 153_884.0) < 1e-5);
        assert!(rel(g.omega_minus / MHZ, 0.83) < 0.01);
        assert!(rel(g.omega_plus / MHZ, 1.44) < 0.01);
        let s = 3f64.powf(2.0 / 3.0);
        assert!(rel(g.z1, g.zeta / (2.0 * s)) < 1e-14);
        assert!(rel(g.z2, -g.zeta / s) < 1e-14);
        assert!((g.z1 * 1e6 - 2.714).abs() < 1e-3);
        assert!((g.z2 * 1e6 + 5.429).abs() < 1e-3);
        assert!(rel(g.separation, 0.5 * g.zeta * 3f64.cbrt()) < 1e-14);
        assert!((2.0 * g.z1 + g.z2).abs() < 1e-12 * g.separation);
    }

    #[test]
    fn alpha_values() {
        let (ap, am) = alpha_two_to_one();
        assert!((ap - 0.821_925_6).abs() < 1e-7, "{ap}");
        assert!((am - 0.569_594_8).abs() < 1e-7, "{am}");
        assert!((ap * ap + am * am - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hessian_eigenvector_matches_closed_form_alpha() {
        let cfg = TrapConfig::default();
        let g = two_ion_geometry(&cfg);
        let m = axial_hessian_modes(&cfg, g.z1, g.z2);
        assert!((m.soft_vector[0] - g.alpha_minus).abs() < 1e-12);
        assert!((m.soft_vector[1] - g.alpha_plus).abs() < 1e-12);
        assert!(rel(m.frequencies[0], g.omega_minus) < 1e-10);
        assert!(rel(m.frequencies[1], g.omega_plus) < 1e-10);
    }

    #[test]
    fn normal_coordinates_zero_and_orthogonal() {
        let g = two_ion_geometry(&TrapConfig::default());
        assert_eq!(normal_coordinates(&g, 0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn swap_detuning_matches_closed_form() {
        let cfg = TrapConfig::default();
        let d = swap_detuning(&cfg);
        let closed = d.closed_form.unwrap();
        assert!(rel(d.energy, closed) < 1e-10);
        assert!(rel(d.energy, 1.416e-23) < 1e-3);
        assert!(rel(d.ordinary_frequency() / 1e9, 21.38) < 1e-3);
        assert!(rel(d.angular_frequency(), 2.0 * PI * d.ordinary_frequency()) < 1e-14);
        let cfg2 = cfg.with_gradient(2.0 * cfg.gradient);
        let ratio = swap_detuning(&cfg2).energy / d.energy;
        assert!((ratio - 2f64.cbrt()).abs() < 1e-10);
    }

    #[test]
    fn swap_detuning_general_charges_has_no_closed_form() {
        let cfg = TrapConfig::new(10.0, 2e6, 40.0 * constants().atomic_mass_unit, 3, 1).unwrap();
        let d = swap_detuning(&cfg);
        assert!(d.closed_form.is_none());
        assert!(d.energy > 0.0);
    }

    fn fd_gradient(cfg: &TrapConfig, z1: f64, z2: f64, h: f64) -> (f64, f64) {
        let u = |a, b| axial_potential_energy(cfg, cfg.charge_1, cfg.charge_2, a, b);
        (
            (u(z1 + h, z2) - u(z1 - h, z2)) / (2.0 * h),
            (u(z1, z2 + h) - u(z1, z2 - h)) / (2.0 * h),
        )
    }

    #[test]
    fn equilibrium_gradient_vanishes() {
        for (q1, q2) in [(2, 1), (1, 1), (3, 1), (3, 2), (5, 3)] {
            let cfg = TrapConfig {
                charge_1: q1,
                charge_2: q2,
                ..TrapConfig::default()
            };
            let g = two_ion_geometry(&cfg);
            let h = g.separation * 1e-5;
            let (g1, g2) = fd_gradient(&cfg, g.z1, g.z2, h);
            // scale: trap force on ion 1
            let scale = 4.0 * q1 as f64 * constants().elementary_charge * cfg.gradient * g.separation;
            assert!(g1.abs() / scale < 1e-8, "{q1},{q2}: {}", g1 / scale);
            assert!(g2.abs() / scale < 1e-8, "{q1},{q2}: {}", g2 / scale);
        }
    }

    #[test]
    fn numerical_hessian_matches_closed_form_modes() {
        for (q1, q2) in [(2, 1), (1, 1), (3, 1), (4, 3)] {
            let cfg = TrapConfig {
                charge_1: q1,
                charge_2: q2,
                ..TrapConfig::default()
            };
            let g = two_ion_geometry(&cfg);
            let u = |a, b| axial_potential_energy(&cfg, q1, q2, a, b);
            let h = g.separation * 1e-4;
            let (z1, z2) = (g.z1, g.z2);
            let h11 = (u(z1 + h, z2) - 2.0 * u(z1, z2) + u(z1 - h, z2)) / (h * h);
            let h22 = (u(z1, z2 + h) - 2.0 * u(z1, z2) + u(z1, z2 - h)) / (h * h);
            let h12 = (u(z1 + h, z2 + h) - u(z1 + h, z2 - h) - u(z1 - h, z2 + h)
                + u(z1 - h, z2 - h))
                / (4.0 * h * h);
            let mean = 0.5 * (h11 + h22);
            let gap = (0.25 * (h11 - h22).powi(2) + h12 * h12).sqrt();
            let w_soft = ((mean - gap) / cfg.ion_mass).sqrt();
            let w_stiff = ((mean + gap) / cfg.ion_mass).sqrt();
            assert!(rel(w_soft, g.omega_minus) < 1e-6, "{q1},{q2}");
            assert!(rel(w_stiff, g.omega_plus) < 1e-6, "{q1},{q2}");
            assert!(g.omega_plus > g.omega_minus && g.omega_minus > 0.0);
            assert!((g.alpha_plus.powi(2) + g.alpha_minus.powi(2) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_charges_com_mode_is_twice_axial_convention() {
        for q in 1..=4 {
            let cfg = TrapConfig {
                charge_1: q,
                charge_2: q,
                ..TrapConfig::default()
            };
            let g = two_ion_geometry(&cfg);
            let single = single_ion_modes(&cfg, q).unwrap();
            assert!(rel(g.omega_minus, 2.0 * single.axial) < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn charge_weighted_centre_is_origin(q2 in 1u32..6, extra in 0u32..6, beta in 1e5f64..1e8) {
            let cfg = TrapConfig { charge_1: q2 + extra, charge_2: q2, gradient: beta, ..TrapConfig::default() };
            let g = two_ion_geometry(&cfg);
            let c = cfg.charge_1 as f64 * g.z1 + cfg.charge_2 as f64 * g.z2;
            prop_assert!(c.abs() <= 1e-12 * g.separation * cfg.charge_1 as f64);
            let total = (cfg.charge_1 + cfg.charge_2) as f64;
            prop_assert!(rel(g.separation, 0.5 * g.zeta * total.cbrt()) < 1e-12);
        }

        #[test]
        fn normal_coordinates_preserve_norm(z1 in -1e-5f64..1e-5, z2 in -1e-5f64..1e-5) {
            let g = two_ion_geometry(&TrapConfig::default());
            let (a, b) = normal_coordinates(&g, z1, z2);
            let lhs = a * a + b * b;
            let rhs = z1 * z1 + z2 * z2;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300));
        }

        #[test]
        fn radial_instability_iff_below_b1(frac in 0.5f64..1.5, q in 1u32..4) {
            let base = TrapConfig::default();
            let b1 = stability_thresholds(&base, q).b1;
            let cfg = base.with_field(b1 * frac);
            prop_assert_eq!(single_ion_modes(&cfg, q).is_err(), cfg.field <= b1);
        }

        #[test]
        fn above_b2_trap_is_prolate(frac in 1.0f64..5.0, q in 1u32..4) {
            let base = TrapConfig::default();
            let b2 = stability_thresholds(&base, q).b2;
            let cfg = base.with_field(b2 * frac * (1.0 + 1e-9));
            let m = single_ion_modes(&cfg, q).unwrap();
            prop_assert!(m.radial > m.axial);
        }
    }
}
