// Pins the first two lines of every table an experiment emits.

use hdlaser::cli_experiments::{run_experiment, ExperimentConfig};

fn headers(exp: &str) -> Vec<String> {
    let cfg = ExperimentConfig::from_toml(&format!(
        "experiment = \"{exp}\"\n[sweep]\npoints = 3\noracle_points = 2\ndetuning_points = 5\ndelta_p_hz = [1.0]\n"
    ))
    .unwrap();
    let out = run_experiment(&cfg).unwrap();
    out.tables.iter().map(|t| t.render(12).lines().take(2).collect::<Vec<_>>().join("\n")).collect()
}

const SHIFT_TRACE: &str = "inv_ng,delta_p_hz,delta_l_hz,ratio,analytic_ratio,status";
const ROWS: &str = "model,inv_ng,delta_p_hz,delta_l_hz,ratio,status";

#[test]
fn shift_sweep_headers() {
    for exp in ["fig4_sub", "fig4_super", "fig5", "custom_sweep"] {
        assert_eq!(
            headers(exp),
            vec![
                format!("# dls-csv v1 table={exp}_dp_1e0hz\n{SHIFT_TRACE}"),
                format!("# dls-csv v1 table={exp}_rows\n{ROWS}"),
            ]
        );
    }
}

#[test]
fn fig6_headers() {
    assert_eq!(
        headers("fig6"),
        vec![
            "# dls-csv v1 table=fig6_oracle\nng_target,inv_ng_oracle,ratio_oracle,inv_ng_lorentzian,ratio_lorentzian,abs_diff,rel_diff,n2_oracle,iterations,status".to_string(),
            format!("# dls-csv v1 table=fig6_rows\n{ROWS}"),
        ]
    );
}

#[test]
fn fig7_fig8_headers() {
    assert_eq!(
        headers("fig7"),
        vec!["# dls-csv v1 table=fig7_rho31\ndelta_diff_hz,re_rho31_exact,re_rho31_approx,im_rho31_exact,im_rho31_approx"]
    );
    assert_eq!(headers("fig8"), vec!["# dls-csv v1 table=fig8_index\ndelta_hz,dn_three_level,dn_linear_q_gamma"]);
    assert!(headers("appendix").is_empty());
}

#[test]
fn fig6_golden_file_header() {
    let g = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/fig6_oracle.csv")).unwrap();
    assert_eq!(g.lines().take(2).collect::<Vec<_>>().join("\n"), headers("fig6")[0]);
}
