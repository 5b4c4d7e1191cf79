// Load a TOML config and run it like the `simulate` binary would.
// `cargo run --example run_config -- configs/fig7.toml`

use hdlaser::cli_experiments::{load_config, run_experiment};

pub fn run_example(path: &str) -> hdlaser::Result<i32> {
    let cfg = load_config(std::path::Path::new(path))?;
    let out = run_experiment(&cfg)?;
    print!("{}", out.report);
    Ok(out.exit_code())
}

#[allow(dead_code)]
fn main() -> hdlaser::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig7.toml").into());
    let code = run_example(&path)?;
    std::process::exit(code)
}
