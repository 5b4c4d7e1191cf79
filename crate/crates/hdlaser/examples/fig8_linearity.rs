// Saturated index of the explicit three-level medium across the lasing
// range, with a straight-line fit against the two candidate slopes.

use hdlaser::cli_experiments::{fig8_linearity, Fig8Result};
use hdlaser::cli_experiments::config::AppendixConfig;

pub fn run_example() -> hdlaser::Result<Fig8Result> {
    let f = fig8_linearity(&AppendixConfig::default(), 41)?;
    println!("half width {:.4e} rad/s", f.half_width);
    println!("slope {:.6e}  R^2 {:.9}", f.slope, f.r2);
    println!("1/(Q Gamma) {:.6e}  1/(2 Q Gamma) {:.6e}  -> {}", f.slope_q_gamma, f.slope_2q_gamma, f.matches);
    Ok(f)
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    run_example().map(|_| ())
}
