// Scan the two-photon detuning and compare exact ρ₃₁ with θρ₂₁.
// Writes `out/examples/rho31_scan.csv`.

use hdlaser::cli_experiments::{fig7_scan, lambda_params, CsvTable, ExperimentConfig};
use hdlaser::constants::TWO_PI;

pub fn run_example() -> hdlaser::Result<(f64, f64)> {
    let cfg = ExperimentConfig::default();
    let scan = fig7_scan(&lambda_params(&cfg), 201)?;
    let mut t = CsvTable::new("rho31_scan", &["delta_diff_hz", "re_exact", "re_approx", "im_exact", "im_approx"]);
    for r in &scan.rows {
        t.push(vec![(r[0] / TWO_PI).into(), r[1].into(), r[2].into(), r[3].into(), r[4].into()]);
    }
    let dir = std::path::Path::new("out/examples");
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("rho31_scan.csv"), t.render(10))?;
    println!("max |Re dev|/|rho31| = {:.3e}", scan.max_re_dev);
    println!("max |Im dev|/|rho31| = {:.3e}", scan.max_im_dev);
    Ok((scan.max_re_dev, scan.max_im_dev))
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    run_example().map(|_| ())
}
