//! Gerade/ungerade doublets just above the delocalisation threshold.
//!
//!     cargo run --release --example tunnel_splitting -- [n_lo] [n_hi]

use penning_rydberg::electronic::{transverse_channel, Potential1D};
use penning_rydberg::spectral::{
    tunnel_pairs, ChannelPotential, NWindow, SolverGrid, SolverSettings, DEFAULT_MARGIN,
};
use penning_rydberg::trap::{two_ion_geometry, TrapConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let lo = args.next().transpose()?.unwrap_or(195.5);
    let hi = args.next().transpose()?.unwrap_or(196.25);

    let cfg = TrapConfig::default();
    let g = two_ion_geometry(&cfg);
    let p = Potential1D::new(&g, &transverse_channel(&cfg)).with_trap_term(false);
    let pot = ChannelPotential::new(&p)?;
    let window = NWindow::new(lo, hi)?;
    let grid = SolverGrid::for_window(&pot, window, 2.0, DEFAULT_MARGIN, 3)?;
    let settings = SolverSettings::default();
    println!(
        "grid: step {} a0, half width {:.0} a0, {} levels",
        grid.step, grid.half_width, grid.levels
    );

    let spectrum = tunnel_pairs(&pot, window, &grid, &settings)?;
    println!("{:>10} {:>10} {:>14} {:>10} {:>10}", "n_g", "n_u", "kappa/h [MHz]", "P(left)", "grid dk");
    for pair in &spectrum.pairs {
        println!(
            "{:10.5} {:10.5} {:14.4} {:10.5} {:10.2e}",
            pair.gerade.n,
            pair.ungerade.n,
            pair.kappa_hertz() * 1e-6,
            pair.left_fraction,
            pair.kappa_grid_shift()
        );
    }
    for s in &spectrum.unpaired {
        println!("unpaired {:?} level at n = {:.5}", s.parity, s.n);
    }
    if let Some(e) = spectrum.convergence_error(&settings) {
        println!("warning: {e}");
    }
    Ok(())
}
