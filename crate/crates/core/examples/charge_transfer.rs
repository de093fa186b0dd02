//! Laser-assisted transfer of the electron from the right ion to the left.
//!
//!     cargo run --example charge_transfer -- [delta...]

use penning_rydberg::dynamics::{
    analytic_p_left, propagate, strong_drive_p_left, time_grid, transfer_times, BasisState,
    TransferSystem, TransferTimeMode,
};
use penning_rydberg::quantities::hertz_to_energy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut deltas: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    if deltas.is_empty() {
        deltas = vec![0.2, 0.5, 2.5, 100.0];
    }

    let taus = time_grid(20.0, 2001);
    let start = BasisState::GroundRight.ket();
    for &d in &deltas {
        let sys = TransferSystem::from_ratio(d);
        let trace = propagate(&sys, &start, &taus);
        let p = trace.p_left();
        let (i, best) = p
            .iter()
            .enumerate()
            .fold((0, 0.0), |m, (i, &v)| if v > m.1 { (i, v) } else { m });
        let err = taus
            .iter()
            .zip(&p)
            .map(|(t, v)| (analytic_p_left(*t, d) - v).abs())
            .fold(0.0, f64::max);
        println!(
            "delta = {d:6}: max p_left = {best:.4} at kappa t/hbar = {:.3}  (closed form agrees to {err:.1e})",
            taus[i]
        );
    }

    // physical times for a strongly driven pair with kappa/h = 87.5 MHz
    let kappa = hertz_to_energy(87.5e6);
    let sys = TransferSystem::new(10.0 * kappa, kappa);
    println!("\nkappa/h = 87.5 MHz, Omega = 10 kappa:");
    let numeric = transfer_times(&sys, 2, TransferTimeMode::Numeric { tau_max: 20.0, samples: 4000 });
    let strong = transfer_times(&sys, 2, TransferTimeMode::StrongDriving);
    for (m, (a, b)) in numeric.iter().zip(&strong).enumerate() {
        println!(
            "t_{m} = {:.3} ns (p_left {:.4}); strong-drive estimate {:.3} ns (p_left {:.1})",
            sys.seconds(a.tau) * 1e9,
            a.p_left,
            sys.seconds(b.tau) * 1e9,
            strong_drive_p_left(b.tau)
        );
    }
    Ok(())
}
