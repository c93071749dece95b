use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn metalfluct(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metalfluct"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("METALFLUCT_OUT_DIR")
        .output()
        .expect("spawn metalfluct")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn heat_transfer_writes_schema_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(&["heat-transfer", "--gap", "0.3um", "--model", "both"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("heat_transfer.csv"));
    assert_eq!(header, ["L_um", "S_erg_s_cm2", "S_TE_pw", "S_TE_ew", "S_TM_pw", "S_TM_ew", "model"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][6], "impedance");
    assert_eq!(rows[1][6], "lifshitz-dielectric");
    let s: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    // impedance exceeds the dielectric result at this gap
    assert!(s[0] > s[1] && s[1] > 0.0);

    let m = manifest(dir.path());
    assert_eq!(m["status"], "ok");
    assert_eq!(m["resolved"]["t1"], 323.0);
    assert_eq!(m["resolved"]["t2"], 300.0);
    assert_eq!(m["results"].as_array().unwrap().len(), 2);
    assert!(m["results"][0]["error"].as_f64().unwrap() >= 0.0);
    assert!(m["constants"]["hbar_erg_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn casimir_manifest_echoes_the_invocation() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["casimir", "--gap", "1um", "--T", "300", "--material", "drude:11.5eV,0.05eV", "--model", "impedance"];
    let o = metalfluct(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let m = manifest(dir.path());
    let argv: Vec<&str> = m["argv"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(&argv[1..=args.len()], &args);
    assert_eq!(m["settings"]["material1"], "drude:11.5eV,0.05eV");
    assert_eq!(m["settings"]["T"], "300");
    assert!(m["results"][0]["zero_term"].is_object());
    let (header, rows) = read_csv(&dir.path().join("casimir.csv"));
    assert_eq!(header, ["L_um", "F_dyn_cm2", "F_TE", "F_TM", "model"]);
    let f: f64 = rows[0][1].parse().unwrap();
    assert!((f - 1.2031e-2).abs() < 1e-5, "{f}");
}

#[test]
fn sweep_gives_one_row_per_gap_and_model() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(
        &["sweep", "--gap", "0.1um:3um:40log", "--command", "heat-transfer", "--model", "both", "--rel-tol", "1e-3"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(header.last().unwrap(), "model");
    assert_eq!(rows.len(), 80);
    assert!(rows[..40].iter().all(|r| r[6] == "impedance"));
    assert!(rows[40..].iter().all(|r| r[6] == "lifshitz-dielectric"));
    let l: Vec<f64> = rows[..40].iter().map(|r| r[0].parse().unwrap()).collect();
    assert!((l[0] - 0.1).abs() < 1e-12 && (l[39] - 3.0).abs() < 1e-10);
    assert!(l.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn spectrum_with_both_models_adds_the_difference_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(
        &["spectrum", "--gap", "0.3um", "--band", "1e8:1e16", "--model", "both", "--points-per-decade", "5"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("spectrum.csv"));
    assert_eq!(header, ["log10_omega", "s_total", "s_TE_ew", "s_TM_ew", "s_pw", "model"]);
    assert_eq!(rows.len(), 2 * 41);
    assert_eq!(rows[0][0], "8.00000000000e0");
    let (header, rows) = read_csv(&dir.path().join("te_ew_difference.csv"));
    assert_eq!(header, ["log10_omega", "s_TE_ew_impedance", "s_TE_ew_lifshitz", "difference"]);
    assert_eq!(rows.len(), 41);
}

#[test]
fn correlations_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(&["correlations", "--omega", "1e13:1e15:3log", "--kperp", "0:1e5:2lin"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("correlations.csv"));
    assert_eq!(header, ["omega", "kperp", "te_density", "tm_density"]);
    assert_eq!(rows.len(), 6);
    // at normal incidence the two polarizations coincide
    assert_eq!(rows[0][2], rows[0][3]);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["casimir", "--gap", "0.5um:2um:4log", "--model", "both"];
    for d in [&a, &b] {
        assert!(metalfluct(&args, d.path()).status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("casimir.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn manifest_settings_reproduce_the_run() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let o = metalfluct(&["casimir", "--gap", "0.7um", "--T", "0", "--material2", "ideal"], a.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = manifest(a.path())["settings_text"].as_str().unwrap().to_string();
    let cfg = b.path().join("replay.conf");
    std::fs::write(&cfg, text).unwrap();
    let o = metalfluct(&["casimir", "--config", cfg.to_str().unwrap()], b.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let read = |d: &Path| std::fs::read(d.join("casimir.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# casimir at two gaps\ngap = 1um:2um:2lin\nmodel = impedance\nT = 300\n").unwrap();
    let o = metalfluct(&["casimir", "--config", cfg.to_str().unwrap(), "--gap", "3um"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&dir.path().join("casimir.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "3.00000000000e0");
    assert_eq!(manifest(dir.path())["config_file"]["contents"].as_str().unwrap().lines().count(), 4);
}

#[test]
fn json_mirrors_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["heat-transfer", "--gap", "1um", "--model", "impedance"];
    assert!(metalfluct(&args, a.path()).status.success());
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    assert!(metalfluct(&json_args, b.path()).status.success());
    let (header, rows) = read_csv(&a.path().join("heat_transfer.csv"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(b.path().join("heat_transfer.json")).unwrap()).unwrap();
    let obj = &v.as_array().unwrap()[0];
    for (k, cell) in header.iter().zip(&rows[0]) {
        match cell.parse::<f64>() {
            Ok(x) => assert_eq!(obj[k].as_f64().unwrap(), x, "{k}"),
            Err(_) => assert_eq!(obj[k].as_str().unwrap(), cell),
        }
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_metalfluct"))
        .args(["casimir", "--gap", "1um", "--model", "impedance"])
        .env("METALFLUCT_OUT_DIR", dir.path().join("nested"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("nested/casimir.csv").is_file());
    assert!(dir.path().join("nested/manifest.json").is_file());
}

#[test]
fn usage_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["heat-transfer", "--gap", "0"], "gap"),
        (&["heat-transfer"], "gap"),
        (&["heat-transfer", "--gap", "1um", "--material", "drude:11.5eV"], "material1"),
        (&["heat-transfer", "--gap", "1um", "--T", "300"], "T"),
        (&["casimir", "--gap", "1um", "--unknown-flag", "1"], "--unknown-flag"),
        (&["sweep", "--gap", "1um:2um:3log"], "command"),
    ];
    for (args, field) in cases {
        let o = metalfluct(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn model_mismatch_is_recorded_in_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(
        &["casimir", "--gap", "1um", "--material", "impedance:1e-3", "--model", "lifshitz-dielectric"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let m = manifest(dir.path());
    assert_eq!(m["status"], "error");
    assert!(m["error"]["message"].as_str().unwrap().contains("permittivity"));
}

#[test]
fn convergence_failure_exits_3_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(
        &["casimir", "--gap", "1um", "--model", "impedance", "--max-terms", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let m = manifest(dir.path());
    assert_eq!(m["error"]["kind"], "convergence");
    assert!(m["error"]["message"].as_str().unwrap().contains("did not converge"));
    assert!(!dir.path().join("casimir.csv").exists());
}

#[test]
fn missing_table_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = metalfluct(&["heat-transfer", "--gap", "1um", "--material", "table:/no/such/file.csv"], dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}
