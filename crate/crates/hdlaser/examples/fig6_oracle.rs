// Dual-isotope density-matrix check of the Lorentzian shift law.
// `cargo run --release --example fig6_oracle -- --golden PATH` rewrites the
// regression file.

use hdlaser::cli_experiments::{run_experiment, ExperimentConfig};

pub fn run_example(points: usize) -> hdlaser::Result<hdlaser::cli_experiments::RunOutput> {
    let cfg = ExperimentConfig::from_toml(&format!("experiment = \"fig6\"\n[sweep]\noracle_points = {points}\n"))?;
    let out = run_experiment(&cfg)?;
    print!("{}", out.report);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let out = run_example(8)?;
    if let Some(i) = args.iter().position(|a| a == "--golden") {
        let path = args.get(i + 1).expect("--golden needs a path");
        std::fs::write(path, out.tables[0].render(12))?;
        println!("wrote {path}");
    }
    Ok(())
}
