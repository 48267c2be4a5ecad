use std::process::{Command, Output};

use hcm_core::catalog::CATALOG_DIR_ENV;

fn hcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcm"))
        .args(args)
        .env_remove(CATALOG_DIR_ENV)
        .output()
        .expect("run hcm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CORAL: [&str; 17] = [
    "analyze", "--material", "PETG", "--t", "0.762", "--h", "15", "--L1", "12.5", "--gamma", "6",
    "--theta-deg", "10", "--D", "11.75", "--servo", "MG90S",
];

#[test]
fn analyze_coral_reports_all_metrics() {
    let o = hcm(&CORAL);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for label in ["P_cr", "U_barr", "T_act", "f_m,HCM", "f_m,servo", "f_design", "alpha"] {
        assert!(text.contains(label), "{label} missing from\n{text}");
    }
    // the quoted D differs from the one implied by gamma and theta
    assert!(stderr(&o).contains("warning: quoted D"));
}

#[test]
fn analyze_missing_material_is_usage_error() {
    let o = hcm(&["analyze", "--t", "0.762", "--gamma", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--material"));
    assert!(stderr(&o).contains("Usage: hcm analyze"));
}

#[test]
fn analyze_zero_stroke_is_valid_query() {
    let o = hcm(&["analyze", "--material", "PETG", "--t", "0.762", "--l", "87", "--D", "0", "--servo", "MG90S"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("infeasible design"));
}

#[test]
fn unknown_names_suggest_alternatives() {
    let o = hcm(&["analyze", "--material", "PTEG", "--t", "0.762", "--l", "87"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did you mean PETG?"));
    let o = hcm(&["analyze", "--material", "PETG", "--t", "0.762", "--l", "87", "--servo", "MG09S"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("MG90S"));
}

#[test]
fn unavailable_thickness_is_validation_error() {
    let o = hcm(&["analyze", "--material", "PETG", "--t", "0.5", "--l", "87"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not available"));
}

#[test]
fn analyze_from_prototype_with_overrides() {
    let o = hcm(&["analyze", "--prototype", "coral", "--assumptions"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("assumption: h = 15 mm (prototype coral)"));
    assert!(text.contains("assumption: nu = 0.35 for PETG"));
    assert!(text.contains("assumption: shear formula = paper"));
    assert!(text.contains("servo=MG90S"));
    let o = hcm(&["analyze", "--prototype", "coral", "--shear-formula", "standard", "--assumptions"]);
    assert!(!stdout(&o).contains("assumption: shear formula"));
}

#[test]
fn sweep_grid_has_one_row_per_cell() {
    let o = hcm(&[
        "sweep", "--material", "PETG", "--t", "0.381", "--gamma", "6", "--servo", "MG90S", "--param",
        "l=60:160:21", "--param", "D=5:30:26",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 21 * 26);
    assert!(lines[0].contains("T_act [mm*N]"));
    assert!(lines[1].starts_with("PETG,0.381,15,12.5,47.5,60,"));
    assert!(lines[2].contains(",60,10,6,"));
}

#[test]
fn single_cell_sweep_matches_analyze_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let s = dir.path().join("s.csv");
    let base = ["--material", "PETG", "--t", "0.762", "--l", "87", "--D", "11.75", "--servo", "MG90S"];
    let mut analyze = vec!["analyze"];
    analyze.extend(base);
    analyze.extend(["--csv", a.to_str().unwrap()]);
    assert_eq!(hcm(&analyze).status.code(), Some(0));
    let mut sweep = vec!["sweep"];
    sweep.extend(base);
    sweep.extend(["--param", "l=87:87:1", "--param", "D=11.75:11.75:1", "--output", s.to_str().unwrap()]);
    assert_eq!(hcm(&sweep).status.code(), Some(0));
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(s).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 2);
}

#[test]
fn sweep_rejects_three_axes_and_bad_specs() {
    let base = ["sweep", "--material", "PETG", "--t", "0.381", "--l", "80"];
    let mut three = base.to_vec();
    three.extend(["--param", "l=60:70:2", "--param", "D=5:6:2", "--param", "h=10:15:2"]);
    assert_eq!(hcm(&three).status.code(), Some(2));
    for bad in ["l=60:70", "x=1:2:2", "D=6:5:2", "D=5:6:0"] {
        let mut args = base.to_vec();
        args.extend(["--param", bad]);
        assert_eq!(hcm(&args).status.code(), Some(2), "{bad}");
    }
}

#[test]
fn sweep_marks_invalid_cells() {
    let o = hcm(&["sweep", "--material", "PETG", "--t", "0.381", "--L1", "12.5", "--param", "l=5:20:2", "--D", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].contains("infeasible: invalid"));
    assert!(rows[1].ends_with(",ok"));
}

#[test]
fn sweep_theta_axis_is_in_degrees() {
    let o = hcm(&["sweep", "--material", "PETG", "--t", "0.381", "--gamma", "6", "--param", "theta=0:20:3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let thetas: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert_eq!(thetas.len(), 3);
    for (got, want) in thetas.iter().zip([0.0, 10.0, 20.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn search_ranks_feasible_designs() {
    let o = hcm(&["search", "--alpha-min", "1.0", "--objective", "max-freq", "--top-k", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("candidates "));
    let ranked: Vec<&str> = text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).collect();
    assert_eq!(ranked.len(), 5);
    assert!(ranked[0].trim_start().starts_with("1. f_design"));
}

#[test]
fn search_with_impossible_alpha_names_binding_constraint() {
    let o = hcm(&["search", "--alpha-min", "1e9", "--l-grid", "80:100:3", "--D-grid", "5:10:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("binding constraint: alpha"));
}

#[test]
fn search_target_needs_frequency() {
    let o = hcm(&["search", "--objective", "target"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let o = hcm(&[
        "search", "--objective", "target", "--target-freq", "10", "--l-grid", "60:160:11", "--D-grid", "5:30:6",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = std::fs::read_to_string(csv).unwrap();
    let header: Vec<&str> = table.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "f_design [Hz]").unwrap();
    let freqs: Vec<f64> = table.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect();
    assert!(!freqs.is_empty());
    assert!(freqs.iter().all(|&f| f >= 10.0));
    assert!(freqs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn catalog_list_and_show() {
    let o = hcm(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("materials (3):") && text.contains("servos (7):"));
    let o = hcm(&["catalog", "show", "a66bhlw"]);
    assert!(stdout(&o).contains("3234"));
    let o = hcm(&["catalog", "show", "CFPR"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did you mean CFRP?"));
}

#[test]
fn catalog_editing_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    // editing needs a directory
    assert_eq!(hcm(&["catalog", "remove", "servo", "MG90S"]).status.code(), Some(2));
    assert_eq!(hcm(&["--catalog-dir", d, "catalog", "init"]).status.code(), Some(0));
    assert_eq!(hcm(&["--catalog-dir", d, "catalog", "init"]).status.code(), Some(2));
    assert_eq!(hcm(&["--catalog-dir", d, "catalog", "init", "--force"]).status.code(), Some(0));
    let add = hcm(&[
        "--catalog-dir", d, "catalog", "add", "material", "--name", "POM", "--E", "2800", "--nu", "0.35", "--rho",
        "1.41e-9", "--thicknesses", "0.5,1",
    ]);
    assert_eq!(add.status.code(), Some(0), "{}", stderr(&add));
    let bad = hcm(&["--catalog-dir", d, "catalog", "add", "servo", "--name", "X", "--torque", "-1", "--speed", "1", "--weight", "1", "--horn", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(hcm(&["--catalog-dir", d, "catalog", "remove", "servo", "SG92R"]).status.code(), Some(0));

    let listed = Command::new(env!("CARGO_BIN_EXE_hcm"))
        .args(["catalog", "list"])
        .env(CATALOG_DIR_ENV, d)
        .output()
        .unwrap();
    let text = stdout(&listed);
    assert!(text.contains("materials (4):") && text.contains("servos (6):"), "{text}");
    assert!(text.contains("POM"));
    let o = hcm(&["--catalog-dir", d, "analyze", "--material", "POM", "--t", "1", "--l", "90"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn malformed_catalog_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(hcm(&["--catalog-dir", d, "catalog", "init"]).status.code(), Some(0));
    let path = dir.path().join("servos.csv");
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("BROKEN,abc,1,1,1,\n");
    std::fs::write(&path, text).unwrap();
    let o = hcm(&["--catalog-dir", d, "catalog", "list"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("servos.csv line 9"), "{}", stderr(&o));
}

#[test]
fn verify_passes_on_seed_catalog() {
    let o = hcm(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(hcm(&["--help"]).status.code(), Some(0));
    assert_eq!(hcm(&["--version"]).status.code(), Some(0));
    assert_eq!(hcm(&["bogus"]).status.code(), Some(2));
}

#[test]
fn run_is_callable_in_process() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = hcm_core::cli::run(["hcm", "catalog", "show", "steel"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().starts_with("material steel"));
}
