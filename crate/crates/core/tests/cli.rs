use clap::Parser;
use nepg::cli::{exit_code, run, Cli, Outcome};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn invoke(args: &[&str]) -> nepg::Result<Outcome> {
    let cli = Cli::try_parse_from(std::iter::once("nepg").chain(args.iter().copied())).expect("arguments parse");
    run(&cli)
}

fn json(args: &[&str]) -> Value {
    let out = invoke(args).unwrap();
    assert_eq!(out.code, 0);
    serde_json::from_str(&out.text).unwrap()
}

#[test]
fn plus_state_has_one_bit() {
    let v = json(&["coherence", "--state", &data("plus_state.json"), "--hamiltonian", &data("qubit_hamiltonian.json")]);
    assert!((v["results"]["coherence_bits"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["command"], "coherence");
    assert_eq!(v["version"], nepg::cli::VERSION);
}

#[test]
fn eigenstate_is_incoherent() {
    let v = json(&["coherence", "--state", &data("ground_state.json"), "--hamiltonian", &data("qubit_hamiltonian.json")]);
    assert!(v["results"]["coherence_bits"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["results"]["is_incoherent"], true);
}

#[test]
fn identity_gate_sweep_is_exact() {
    let v = json(&["battery-sweep", "--gate", "identity", "--lengths", "2,4", "--d-b", "8", "--starts", "4"]);
    for row in v["results"].as_array().unwrap() {
        assert!(row["eps_wc_upper"].as_f64().unwrap() < 1e-10);
        assert_eq!(row["converged"], true);
    }
}

#[test]
fn commuting_gate_has_zero_bounds() {
    let v = json(&["bounds", "--gate", "s", "--eps", "0.01,0.0001", "--alpha", "1"]);
    assert_eq!(v["results"]["search"]["energy_preserving"], true);
    for r in v["results"]["reports"].as_array().unwrap() {
        assert_eq!(r["coherence_bound"].as_f64().unwrap(), 0.0);
        assert_eq!(r["dim_bound"].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let v = json(&["--config", &data("bounds_config.json"), "bounds", "--eps", "0.001"]);
    let cfg = &v["config"];
    assert_eq!(cfg["variant"], "qubit");
    assert_eq!(cfg["seed"], 7);
    assert_eq!(cfg["eps"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"]["reports"].as_array().unwrap().len(), 1);
}

#[test]
fn missing_alpha_warns() {
    let v = json(&["bounds", "--gate", "hadamard", "--eps", "0.01"]);
    assert_eq!(v["results"]["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"]["reports"][0]["alpha_defaulted"], true);
}

#[test]
fn point_mass_reports_an_error_row() {
    let v = json(&["iid", "--rv", &data("point_mass.json"), "--n", "10"]);
    let row = &v["results"]["rows"][0];
    assert!(row["status"].as_str().unwrap().starts_with("error"));
    assert!(row["bound"].is_null());
}

#[test]
fn bernoulli_rows_are_finite() {
    let v = json(&["iid", "--rv", &data("bernoulli.json"), "--n", "50,100"]);
    for row in v["results"]["rows"].as_array().unwrap() {
        assert_eq!(row["status"], "ok");
        assert_eq!(row["branch"], "lattice");
        assert!(row["gap"].as_f64().unwrap().abs() < 0.1);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["--seed", "3", "bounds", "--gate", "hadamard", "--alpha", "1"],
        vec!["--format", "csv", "battery-sweep", "--lengths", "2,4", "--d-b", "12", "--starts", "4"],
        vec!["--format", "csv", "iid", "--rv", "BERN", "--n", "20,40"],
    ] {
        let bern = data("bernoulli.json");
        let args: Vec<&str> = args.iter().map(|a| if *a == "BERN" { bern.as_str() } else { a }).collect();
        let (a, b) = (invoke(&args).unwrap(), invoke(&args).unwrap());
        for (x, y) in a.text.lines().zip(b.text.lines()) {
            assert_eq!(x, y, "{args:?}");
        }
        assert_eq!(a, b);
    }
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = invoke(&["--format", "csv", "iid", "--rv", &data("bernoulli.json"), "--n", "20,40"]).unwrap();
    let lines: Vec<&str> = out.text.lines().collect();
    assert!(lines[0].starts_with("# nepg "));
    assert!(lines[0].contains("config="));
    assert!(lines[1].starts_with("N,"));
    assert_eq!(lines.len(), 4);
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("nepg-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = invoke(&["--out", p, "bounds", "--gate", "pauli-x", "--alpha", "1"]).unwrap();
    assert!(out.text.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "bounds");
    std::fs::remove_file(path).ok();
}

#[test]
fn bad_inputs_exit_with_code_two() {
    for args in [
        vec!["--format", "xml", "bounds"],
        vec!["bounds", "--variant", "sideways"],
        vec!["bounds", "--gate", "/nonexistent/gate.json"],
    ] {
        let err = invoke(&args).unwrap_err();
        assert_eq!(exit_code(&err), 2, "{args:?}: {err}");
    }
}

#[test]
fn exact_levels_need_a_basis() {
    let v = json(&["bounds", "--gate", &data("three_level_gate.json"), "--eps", "0.001", "--alpha", "1"]);
    assert!(v["results"]["search"]["r2_lower"].as_u64().unwrap() >= 2);
}
