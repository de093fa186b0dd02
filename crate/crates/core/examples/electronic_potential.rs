//! The frozen-ion potential along the trap axis, with and without the
//! inverted trap parabola, plus the transverse channel it lives in.
//!
//!     cargo run --example electronic_potential > potential.csv

use penning_rydberg::electronic::{transverse_channel, transverse_energy, Potential1D};
use penning_rydberg::quantities::{constants, energy_to_hertz, meters_to_bohr};
use penning_rydberg::trap::{two_ion_geometry, TrapConfig};

fn main() {
    let cfg = TrapConfig::default();
    let g = two_ion_geometry(&cfg);
    let ch = transverse_channel(&cfg);
    let two_pi = 2.0 * std::f64::consts::PI;

    eprintln!("Omega_rho/2pi = {:.3} GHz", ch.confinement / two_pi * 1e-9);
    eprintln!("Omega_z/2pi   = {:.3} MHz", ch.anti_confinement / two_pi * 1e-6);
    eprintln!("rho0          = {:.2} a0", meters_to_bohr(ch.rho0));
    for (nu, mu) in [(0, 0), (0, -1), (1, 0)] {
        eprintln!(
            "E(nu={nu}, mu={mu:+}) / h = {:.3} GHz",
            energy_to_hertz(transverse_energy(nu, mu, &ch)) * 1e-9
        );
    }

    let full = Potential1D::new(&g, &ch);
    let bare = full.with_trap_term(false);
    let ghz = |e: f64| energy_to_hertz(e) * 1e-9;
    let a0 = constants().bohr_radius;

    println!("z [a0],V_full [GHz h],V_noTrap [GHz h]");
    let n = 1201;
    for i in 0..n {
        let z = -3.0e5 + 6.0e5 * i as f64 / (n - 1) as f64;
        println!("{z},{:.6},{:.6}", ghz(full.energy(z * a0)), ghz(bare.energy(z * a0)));
    }
}
