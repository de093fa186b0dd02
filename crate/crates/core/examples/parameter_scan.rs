//! How the critical numbers and the swap detuning move with the trap
//! gradient, and where the trap stops being prolate as B drops.

use penning_rydberg::cli::{report_entries, scan_values, CliError};
use penning_rydberg::trap::TrapConfig;

fn value(entries: &[penning_rydberg::cli::ReportEntry], key: &str) -> f64 {
    entries.iter().find(|e| e.key == key).map(|e| e.value).unwrap()
}

fn main() {
    let base = TrapConfig::default();
    println!("{:>12} {:>10} {:>10} {:>12}", "beta [V/m2]", "n_del", "n_ion", "Delta/h [GHz]");
    for beta in scan_values((5e5, 8e6), 9) {
        let e = report_entries(&base.with_gradient(beta)).unwrap();
        println!(
            "{beta:12.3e} {:10.3} {:10.3} {:12.4}",
            value(&e, "n_del"),
            value(&e, "n_ion"),
            value(&e, "Delta_over_h")
        );
    }

    println!("\n{:>8}  status", "B [T]");
    for b in scan_values((5.0, 2.0), 13) {
        let status = match report_entries(&base.with_field(b)) {
            Ok(_) => "ok".to_string(),
            Err(CliError::Stability(e)) => e.to_string(),
            Err(e) => format!("error: {e}"),
        };
        println!("{b:8.3}  {status}");
    }
}
