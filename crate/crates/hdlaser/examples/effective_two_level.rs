// Reduce a far-detuned Λ system to its effective two-level form and compare
// the closed-form steady state with the full three-level solve.

use hdlaser::atomic_core::*;
use hdlaser::constants::TWO_PI;

pub fn run_example() -> hdlaser::Result<f64> {
    let p = ThreeLevelParams {
        omega_l: TWO_PI * 10e6,
        omega_p: TWO_PI * 100e6,
        delta_p: TWO_PI * 3e9,
        delta_diff: TWO_PI * 2e6,
        gamma_eff: TWO_PI * 5e6,
        gamma_3: TWO_PI * 6.0666e6,
    };
    let e = build_effective_two_level(&p)?;
    let two = two_level_steady_state(&e);
    let approx = rho31_approx(&e, &two);
    let exact = three_level_steady_state(&p)?;
    let dev = (exact.rho31() - approx.value).norm() / exact.rho31().norm();
    println!("Omega_eff = {:.4e} rad/s  theta = {:.4e}", e.omega_eff, e.theta);
    println!("rho22 = {:.6e}  rho21 = {:.6e}", two.rho22, two.rho21);
    println!("rho31 exact  = {:.6e}", exact.rho31());
    println!("rho31 approx = {:.6e}  (rel dev {dev:.3e})", approx.value);
    println!("regime: {:?}", validate_elimination_regime(&p, 10.0));
    Ok(dev)
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    run_example().map(|_| ())
}
