// Superluminal shift sweep: −Δ_L/Δ_p against 1/n_g for four pump shifts.
// Small shifts follow the linear law; large ones saturate.

use hdlaser::cli_experiments::{run_experiment, ExperimentConfig};

pub fn run_example() -> hdlaser::Result<String> {
    let cfg = ExperimentConfig::from_toml("experiment = \"fig5\"\n[sweep]\npoints = 13\n")?;
    let out = run_experiment(&cfg)?;
    out.write(std::path::Path::new("out/examples/fig5"), cfg.output.precision)?;
    print!("{}", out.report);
    Ok(out.report)
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    run_example().map(|_| ())
}
