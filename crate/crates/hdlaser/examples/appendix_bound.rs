// Upper bound on the intracavity Rabi frequency, from the closed forms and
// from the explicit clamped-field solve.

use hdlaser::cli_experiments::config::AppendixConfig;
use hdlaser::cli_experiments::{appendix_bound, AppendixBound};

pub fn run_example() -> hdlaser::Result<AppendixBound> {
    let b = appendix_bound(&AppendixConfig::default())?;
    println!("Q                         {:.4e}", b.q);
    println!("sqrt(mu^2 N Gamma Q/hbar eps0)      {:.4e}", b.closed_form);
    println!("with (2Q - 1/G0)                    {:.4e}", b.chain_2q);
    println!("with (Q - 1/G0)                     {:.4e}", b.chain_q);
    println!("explicit solve                      {:.4e}", b.explicit);
    println!("reference                           {:.4e}", b.reference_value);
    Ok(b)
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    run_example().map(|_| ())
}
