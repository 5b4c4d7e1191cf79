// Each example compiled in as a module so its `run_example` is checked here.

mod effective_two_level {
    include!("../examples/effective_two_level.rs");
}
mod rho31_scan {
    include!("../examples/rho31_scan.rs");
}
mod subluminal_shift {
    include!("../examples/subluminal_shift.rs");
}
mod fig5_sweep {
    include!("../examples/fig5_sweep.rs");
}
mod fig6_oracle {
    include!("../examples/fig6_oracle.rs");
}
mod fig8_linearity {
    include!("../examples/fig8_linearity.rs");
}
mod appendix_bound {
    include!("../examples/appendix_bound.rs");
}
mod run_config {
    include!("../examples/run_config.rs");
}

#[test]
fn effective_two_level_close_to_exact() {
    assert!(effective_two_level::run_example().unwrap() < 0.02);
}

#[test]
fn rho31_scan_within_five_percent() {
    let (re, im) = rho31_scan::run_example().unwrap();
    assert!(re < 0.05 && im < 0.05);
}

#[test]
fn subluminal_ratio_follows_law() {
    for r in subluminal_shift::run_example().unwrap() {
        assert!((r.ratio - (r.n_g - 1.0) / r.n_g).abs() < 1e-8);
    }
}

#[test]
fn fig5_report_has_asymptotes() {
    let rep = fig5_sweep::run_example().unwrap();
    assert!(rep.contains("asymptote_dp_1e6hz"));
    assert!(rep.contains("rows_failed 0"));
}

#[test]
fn fig6_oracle_small_run() {
    let out = fig6_oracle::run_example(3).unwrap();
    assert_eq!(out.exit_code(), 0);
    assert_eq!(out.tables[0].rows.len(), 3);
}

#[test]
fn fig8_is_linear() {
    assert!(fig8_linearity::run_example().unwrap().r2 > 0.999);
}

#[test]
fn appendix_values_finite() {
    let b = appendix_bound::run_example().unwrap();
    assert!(b.closed_form > b.chain_q && b.chain_2q > b.closed_form);
    assert!((b.explicit / b.chain_q - 1.0).abs() < 0.01);
}

#[test]
fn run_config_all_shipped_configs() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            let code = run_config::run_example(p.to_str().unwrap()).unwrap();
            assert_eq!(code, 0, "{}", p.display());
            n += 1;
        }
    }
    assert!(n >= 8);
}
