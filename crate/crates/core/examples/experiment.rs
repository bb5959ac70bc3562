//! Runs an experiment campaign from a JSON config and prints its summary.
//!
//! ```text
//! cargo run --example experiment -- crates/core/examples/data/class_ab.json [report.json]
//! ```

use std::path::PathBuf;

use iterative_ja::harness::{run_experiment_in, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/class_ab.json"));
    let cfg = ExperimentConfig::from_json(&std::fs::read_to_string(&path)?)?;
    let report = run_experiment_in(&cfg, path.parent())?;
    print!("{}", report.summary());
    if let Some(out) = args.next() {
        report.write(out.as_ref())?;
        println!("wrote {out} and its .csv table");
    }
    Ok(())
}
