//! Moving between SI, atomic units and spectroscopic frequencies.

use penning_rydberg::electronic::{energy_of_n, n_of_energy};
use penning_rydberg::quantities::{constants, Quantity, Unit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = constants();
    println!("a0 = {:e} m, Eh = {:e} J, t_au = {:e} s", c.bohr_radius, c.hartree, c.atomic_time());
    println!("a0 from e, hbar, m, eps0 = {:e} m", c.derived_bohr_radius());

    let separation = Quantity::new(8.14, Unit::Micrometer);
    println!("{} um = {:.1} a0", separation.value, separation.to(Unit::Bohr)?.value);

    let e = Quantity::new(energy_of_n(196.14)?, Unit::Joule);
    println!(
        "E(n = 196.14) = {:.5e} J = {:.5e} Eh = {:.3} GHz x h",
        e.value,
        e.to(Unit::Hartree)?.value,
        e.to(Unit::Gigahertz)?.value
    );
    println!("n(E) round trip: {:.6}", n_of_energy(e.value)?);

    let omega = Quantity::new(2.0 * std::f64::consts::PI * 12.3e6, Unit::RadianPerSecond);
    println!("2pi x 12.3 MHz = {:.4} MHz = {:.4e} J", omega.to(Unit::Megahertz)?.value, omega.to(Unit::Joule)?.value);

    match Quantity::new(1.0, Unit::Tesla).to(Unit::Meter) {
        Ok(_) => unreachable!(),
        Err(e) => println!("T -> m: {e}"),
    }
    Ok(())
}
