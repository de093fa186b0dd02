//! Physical constants and the handful of unit conversions the rest of the
//! crate needs.
//!
//! Values are SI at every public boundary. The spectral solver works in
//! atomic units (ħ = mₑ = e = 4πε₀ = 1) internally; [`PhysicalConstants`]
//! provides the scale factors.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

/// Fixed CODATA 2018 constant table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Electron mass (kg)
    pub electron_mass: f64,
    /// Elementary charge (C)
    pub elementary_charge: f64,
    /// Vacuum permittivity ε₀ (F/m)
    pub vacuum_permittivity: f64,
    /// Reduced Planck constant ħ (J·s)
    pub hbar: f64,
    /// Bohr radius a₀ (m)
    pub bohr_radius: f64,
    /// Atomic mass unit (kg)
    pub atomic_mass_unit: f64,
    /// Hartree energy (J)
    pub hartree: f64,
    /// Rydberg energy (eV)
    pub rydberg_ev: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    electron_mass: 9.109_383_701_5e-31,
    elementary_charge: 1.602_176_634e-19,
    vacuum_permittivity: 8.854_187_812_8e-12,
    hbar: 1.054_571_817e-34,
    bohr_radius: 5.291_772_109_03e-11,
    atomic_mass_unit: 1.660_539_066_60e-27,
    hartree: 4.359_744_722_207_1e-18,
    rydberg_ev: 13.605_693_122_994,
};

/// The constant table used throughout the crate.
pub fn constants() -> &'static PhysicalConstants {
    &CODATA_2018
}

impl PhysicalConstants {
    /// Planck constant h = 2πħ (J·s).
    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }

    /// Electron volt in joules.
    pub fn electron_volt(&self) -> f64 {
        self.elementary_charge
    }

    /// Coulomb constant e²/(4πε₀) (J·m).
    pub fn coulomb_energy_length(&self) -> f64 {
        self.elementary_charge * self.elementary_charge / (4.0 * PI * self.vacuum_permittivity)
    }

    /// Atomic unit of time ħ/E_h (s).
    pub fn atomic_time(&self) -> f64 {
        self.hbar / self.hartree
    }

    /// a₀ recomputed from (m, e, ε₀, ħ).
    pub fn derived_bohr_radius(&self) -> f64 {
        4.0 * PI * self.vacuum_permittivity * self.hbar * self.hbar
            / (self.electron_mass * self.elementary_charge * self.elementary_charge)
    }

    /// Hartree energy recomputed from (m, e, ε₀, ħ).
    pub fn derived_hartree(&self) -> f64 {
        let k = self.coulomb_energy_length();
        self.electron_mass * k * k / (self.hbar * self.hbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Length,
    AngularFrequency,
    OrdinaryFrequency,
    MagneticField,
    FieldGradient,
    Mass,
    Time,
    Dimensionless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Joule,
    ElectronVolt,
    Hartree,
    Meter,
    Micrometer,
    Bohr,
    RadianPerSecond,
    Hertz,
    Megahertz,
    Gigahertz,
    Tesla,
    VoltPerSquareMeter,
    Kilogram,
    AtomicMassUnit,
    Second,
    Nanosecond,
    AtomicTime,
    One,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            Joule | ElectronVolt | Hartree => Dimension::Energy,
            Meter | Micrometer | Bohr => Dimension::Length,
            RadianPerSecond => Dimension::AngularFrequency,
            Hertz | Megahertz | Gigahertz => Dimension::OrdinaryFrequency,
            Tesla => Dimension::MagneticField,
            VoltPerSquareMeter => Dimension::FieldGradient,
            Kilogram | AtomicMassUnit => Dimension::Mass,
            Second | Nanosecond | AtomicTime => Dimension::Time,
            One => Dimension::Dimensionless,
        }
    }

    /// Multiplier taking a magnitude in this unit to the SI unit of its
    /// dimension.
    pub fn si_factor(self, c: &PhysicalConstants) -> f64 {
        use Unit::*;
        match self {
            Joule => 1.0,
            ElectronVolt => c.electron_volt(),
            Hartree => c.hartree,
            Meter => 1.0,
            Micrometer => 1e-6,
            Bohr => c.bohr_radius,
            RadianPerSecond => 1.0,
            Hertz => 1.0,
            Megahertz => 1e6,
            Gigahertz => 1e9,
            Tesla => 1.0,
            VoltPerSquareMeter => 1.0,
            Kilogram => 1.0,
            AtomicMassUnit => c.atomic_mass_unit,
            Second => 1.0,
            Nanosecond => 1e-9,
            AtomicTime => c.atomic_time(),
            One => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        use Unit::*;
        match self {
            Joule => "J",
            ElectronVolt => "eV",
            Hartree => "Eh",
            Meter => "m",
            Micrometer => "um",
            Bohr => "a0",
            RadianPerSecond => "rad/s",
            Hertz => "Hz",
            Megahertz => "MHz",
            Gigahertz => "GHz",
            Tesla => "T",
            VoltPerSquareMeter => "V/m^2",
            Kilogram => "kg",
            AtomicMassUnit => "u",
            Second => "s",
            Nanosecond => "ns",
            AtomicTime => "atu",
            One => "1",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum UnitError {
    #[error("cannot convert {from:?} to {to:?}")]
    IncompatibleDimensions { from: Dimension, to: Dimension },
}

/// A magnitude tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    pub fn dimension(&self) -> Dimension {
        self.unit.dimension()
    }

    /// Magnitude in the SI unit of this quantity's dimension.
    pub fn si(&self) -> f64 {
        self.value * self.unit.si_factor(constants())
    }

    pub fn to(&self, target: Unit) -> Result<Quantity, UnitError> {
        convert(*self, target)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Converts `q` to `target`.
///
/// Within a dimension this is a rescaling. Across dimensions only the
/// spectroscopic links are defined: E = ħω, E = hf and ω = 2πf.
pub fn convert(q: Quantity, target: Unit) -> Result<Quantity, UnitError> {
    convert_with(q, target, constants())
}

pub fn convert_with(
    q: Quantity,
    target: Unit,
    c: &PhysicalConstants,
) -> Result<Quantity, UnitError> {
    use Dimension::*;
    let from = q.unit.dimension();
    let to = target.dimension();
    let si = q.value * q.unit.si_factor(c);
    let si_target = match (from, to) {
        _ if from == to => si,
        (Energy, AngularFrequency) => si / c.hbar,
        (AngularFrequency, Energy) => si * c.hbar,
        (Energy, OrdinaryFrequency) => si / c.planck(),
        (OrdinaryFrequency, Energy) => si * c.planck(),
        (AngularFrequency, OrdinaryFrequency) => si / (2.0 * PI),
        (OrdinaryFrequency, AngularFrequency) => si * 2.0 * PI,
        _ => return Err(UnitError::IncompatibleDimensions { from, to }),
    };
    Ok(Quantity::new(si_target / target.si_factor(c), target))
}

/// Energy (J) to ordinary frequency E/h (Hz).
pub fn energy_to_hertz(energy: f64) -> f64 {
    energy / constants().planck()
}

/// Energy (J) to angular frequency E/ħ (rad/s).
pub fn energy_to_angular(energy: f64) -> f64 {
    energy / constants().hbar
}

pub fn hertz_to_energy(f: f64) -> f64 {
    f * constants().planck()
}

pub fn angular_to_energy(omega: f64) -> f64 {
    omega * constants().hbar
}

pub fn meters_to_bohr(x: f64) -> f64 {
    x / constants().bohr_radius
}

pub fn bohr_to_meters(x: f64) -> f64 {
    x * constants().bohr_radius
}

pub fn joules_to_hartree(e: f64) -> f64 {
    e / constants().hartree
}

pub fn hartree_to_joules(e: f64) -> f64 {
    e * constants().hartree
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn constants_are_self_consistent() {
        let c = constants();
        assert!(rel(c.derived_bohr_radius(), c.bohr_radius) < 1e-6);
        assert!(rel(c.derived_hartree(), c.hartree) < 1e-6);
        assert!(rel(2.0 * c.rydberg_ev * c.electron_volt(), c.hartree) < 1e-6);
        for v in [
            c.electron_mass,
            c.elementary_charge,
            c.vacuum_permittivity,
            c.hbar,
            c.bohr_radius,
            c.atomic_mass_unit,
            c.hartree,
            c.rydberg_ev,
        ] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn bohr_to_meter() {
        let q = convert(Quantity::new(1.0, Unit::Bohr), Unit::Meter).unwrap();
        assert!(rel(q.value, 5.29177e-11) < 1e-5);
    }

    #[test]
    fn doubly_charged_rydberg_unit() {
        let q = convert(Quantity::new(-4.0 * 13.6, Unit::ElectronVolt), Unit::Hartree).unwrap();
        assert!((q.value + 2.0).abs() < 2e-3);
        let exact = -4.0 * constants().rydberg_ev;
        let q = convert(Quantity::new(exact, Unit::ElectronVolt), Unit::Hartree).unwrap();
        assert!(rel(q.value, -2.0) < 1e-9);
    }

    #[test]
    fn one_megahertz_angular_to_energy() {
        let omega = Quantity::new(2.0 * PI * 1e6, Unit::RadianPerSecond);
        let e = convert(omega, Unit::Joule).unwrap();
        // h × 1 MHz with h = 6.62607015e-34 J s exactly.
        assert!(rel(e.value, 6.626_070_15e-28) < 1e-9);
    }

    #[test]
    fn incompatible_dimensions_are_rejected() {
        let err = convert(Quantity::new(1.0, Unit::Tesla), Unit::Joule).unwrap_err();
        assert_eq!(
            err,
            UnitError::IncompatibleDimensions {
                from: Dimension::MagneticField,
                to: Dimension::Energy
            }
        );
        assert!(convert(Quantity::new(1.0, Unit::Bohr), Unit::Second).is_err());
    }

    const ALL: [Unit; 18] = [
        Unit::Joule,
        Unit::ElectronVolt,
        Unit::Hartree,
        Unit::Meter,
        Unit::Micrometer,
        Unit::Bohr,
        Unit::RadianPerSecond,
        Unit::Hertz,
        Unit::Megahertz,
        Unit::Gigahertz,
        Unit::Tesla,
        Unit::VoltPerSquareMeter,
        Unit::Kilogram,
        Unit::AtomicMassUnit,
        Unit::Second,
        Unit::Nanosecond,
        Unit::AtomicTime,
        Unit::One,
    ];

    proptest! {
        #[test]
        fn round_trip_through_any_compatible_unit(
            mag in 1e-30f64..1e30,
            i in 0usize..18,
            j in 0usize..18,
        ) {
            let q = Quantity::new(mag, ALL[i]);
            if let Ok(there) = convert(q, ALL[j]) {
                let back = convert(there, ALL[i]).unwrap();
                prop_assert!(rel(back.value, mag) < 1e-12);
            }
        }

        #[test]
        fn hbar_omega_equals_h_f(f in 1.0f64..1e15) {
            let via_angular = convert(Quantity::new(2.0 * PI * f, Unit::RadianPerSecond), Unit::Joule).unwrap();
            let via_ordinary = convert(Quantity::new(f, Unit::Hertz), Unit::Joule).unwrap();
            prop_assert!(rel(via_angular.value, via_ordinary.value) < 1e-12);
        }
    }
}
