// Pump-shift response of a subluminal (n_g > 1) laser: the line follows
// Δ_L = Δ_p (n_g − 1)/n_g, so the laser moves less than the pump.

use hdlaser::constants::TWO_PI;
use hdlaser::gain_medium::{CavityParams, MediumParams};
use hdlaser::lasing_solver::*;

pub fn run_example() -> hdlaser::Result<Vec<SweepRow>> {
    let base = PumpShiftScenario {
        delta_p: 0.0,
        medium: Medium::Sub(MediumParams::with_gain(1e16, hdlaser::constants::MU_RB, 1e6, 2e-6)),
        cavity: CavityParams::with_q(1e6),
    };
    let targets = [1.5, 2.0, 10.0, 100.0, 1e4];
    let rows = sweep_shift_ratio(&base, &targets, &[TWO_PI * 1e3], &SweepOptions::default());
    println!("{:>10} {:>14} {:>14}", "n_g", "dL/dp", "(n_g-1)/n_g");
    for r in &rows {
        println!("{:>10.4} {:>14.8} {:>14.8}", r.n_g, r.ratio, (r.n_g - 1.0) / r.n_g);
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    run_example().map(|_| ())
}
