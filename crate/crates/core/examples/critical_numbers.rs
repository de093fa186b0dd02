//! Quantum numbers bounding the window of delocalised states, and the
//! field-ionisation saddle.

use penning_rydberg::electronic::{
    critical_numbers, saddle_point_numeric, transverse_channel, Potential1D,
};
use penning_rydberg::quantities::meters_to_bohr;
use penning_rydberg::trap::{two_ion_geometry, TrapConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = TrapConfig::default();
    let g = two_ion_geometry(&cfg);
    let ch = transverse_channel(&cfg);
    let c = critical_numbers(&cfg, &g)?;

    println!("n_ct  = {:.2}   orbit radius reaches D/2", c.n_ct);
    println!("n_del = {:.4} wells merge at E = {:.4e} J", c.n_del, c.e_del);
    println!("n_ion = {:.2}   over the saddle", c.n_ion);
    println!("window width = {:.1} GHz", c.window_width_hertz() * 1e-9);

    let s = c.saddle;
    println!("\ngamma = {:.6}, sigma = {:.4}", s.gamma, s.sigma);
    println!("z_sd  = {:.0} a0 (closed form)", meters_to_bohr(s.position));
    let numeric = saddle_point_numeric(&g, &ch)?;
    println!("z_sd  = {:.0} a0 (force root, point cores)", meters_to_bohr(numeric.position));

    // the regularised potential peaks at nearly the same place
    let p = Potential1D::new(&g, &ch);
    let outer = meters_to_bohr(g.outer_position());
    let peak = (0..=40_000)
        .map(|i| outer * (1.01 + 2.0 * i as f64 / 40_000.0))
        .max_by(|a, b| p.value_au(*a).total_cmp(&p.value_au(*b)))
        .unwrap();
    println!("z_sd  = {peak:.0} a0 (maximum of the channel potential)");
    Ok(())
}
