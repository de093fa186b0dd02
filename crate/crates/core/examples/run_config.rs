//! Reading a run configuration and producing the JSON report, as the
//! command-line tool does.

use penning_rydberg::cli::{report_json, RunConfig};

const CONFIG: &str = "\
# reference trap with a heavier species
B = 10 T
beta = 2e6 V/m^2
mass = 88 u
Q1 = 2 e
Q2 = 1 e
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::parse(CONFIG)?;
    let report = report_json(&cfg)?;
    for key in ["D", "n_del", "n_ion", "Delta_over_h"] {
        let q = &report["quantities"][key];
        println!("{key:>14} = {} {}", q["value"], q["unit"].as_str().unwrap());
    }
    for note in report["notes"].as_array().unwrap() {
        println!("note: {}", note.as_str().unwrap());
    }

    // physical values without units are refused
    match RunConfig::parse("B = 10\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
