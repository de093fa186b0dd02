//! Single-ion frequencies, stability thresholds and the two-ion crystal.
//!
//!     cargo run --example trap_statics -- [B_tesla] [beta_V_per_m2]

use std::f64::consts::PI;

use penning_rydberg::quantities::meters_to_bohr;
use penning_rydberg::trap::{
    axial_hessian_modes, single_ion_modes, stability_thresholds, swap_detuning, two_ion_geometry,
    TrapConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let defaults = TrapConfig::default();
    let field = args.next().transpose()?.unwrap_or(defaults.field);
    let gradient = args.next().transpose()?.unwrap_or(defaults.gradient);
    let cfg = TrapConfig::new(field, gradient, defaults.ion_mass, 2, 1)?;
    let mhz = |w: f64| w / (2.0 * PI * 1e6);

    println!("B = {field} T, beta = {gradient:e} V/m^2, M = 40 u");
    for q in [cfg.charge_2, cfg.charge_1] {
        let t = stability_thresholds(&cfg, q);
        match single_ion_modes(&cfg, q) {
            Ok(m) => println!(
                "Q = {q}: omega_c/2pi = {:8.4} MHz  omega_rho/2pi = {:7.4} MHz  omega_z/2pi = {:7.4} MHz  B1 = {:.3} T  B2 = {:.3} T",
                mhz(m.cyclotron),
                mhz(m.radial),
                mhz(m.axial),
                t.b1,
                t.b2
            ),
            Err(e) => println!("Q = {q}: {e}"),
        }
    }
    if let Err(e) = cfg.check_stable() {
        println!("{e}");
        return Ok(());
    }

    let g = two_ion_geometry(&cfg);
    println!("\nzeta = {:.4} um", g.zeta * 1e6);
    println!("Z01 = {:+.4} um, Z02 = {:+.4} um", g.z1 * 1e6, g.z2 * 1e6);
    println!("D   = {:.4} um = {:.0} a0", g.separation * 1e6, meters_to_bohr(g.separation));
    println!(
        "axial modes: {:.5} MHz (alpha+ = {:.6}), {:.5} MHz (alpha- = {:.6})",
        mhz(g.omega_plus),
        g.alpha_plus,
        mhz(g.omega_minus),
        g.alpha_minus
    );

    // same modes from the numerical Hessian of the total energy
    let h = axial_hessian_modes(&cfg, g.z1, g.z2);
    println!(
        "Hessian check: {:.5} / {:.5} MHz",
        mhz(h.frequencies[1]),
        mhz(h.frequencies[0])
    );

    let s = swap_detuning(&cfg);
    println!(
        "\nswap detuning Delta = {:.5e} J = h x {:.3} GHz",
        s.energy,
        s.ordinary_frequency() * 1e-9
    );
    Ok(())
}
