use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_supergeom"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("supergeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn flat(signature: &str, name: &str) -> PathBuf {
    let path = tmp(name);
    let o = run(&["flat", "--signature", signature, "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    path
}

fn strip_timing(report: &str) -> String {
    report.split("[timing_ms]").next().unwrap().to_string()
}

#[test]
fn flat_4d_runs_clean_and_reports_are_deterministic() {
    let scn = flat("3,1", "flat4.toml");
    let (r1, r2) = (tmp("r1.toml"), tmp("r2.toml"));
    let o = run(&["run", "--scenario", scn.to_str().unwrap(), "--emit-report", r1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("status pass"));
    assert!(!text.contains("[fail]"));
    let o2 = run(&["run", "--scenario", scn.to_str().unwrap(), "--emit-report", r2.to_str().unwrap()]);
    assert_eq!(o2.status.code(), Some(0));
    let (a, b) = (std::fs::read_to_string(&r1).unwrap(), std::fs::read_to_string(&r2).unwrap());
    assert_eq!(strip_timing(&a), strip_timing(&b));
    let re = run(&["report", r1.to_str().unwrap()]);
    assert_eq!(re.status.code(), Some(0));
    assert_eq!(stdout(&re), text);
}

#[test]
fn checks_flag_selects_checks() {
    let scn = flat("3,1", "flat4-sel.toml");
    let o = run(&["run", "--scenario", scn.to_str().unwrap(), "--checks", "strong-lc,jacobi,levi"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let pos: Vec<usize> = ["[pass] jacobi", "[pass] levi", "[pass] strong-lc"]
        .iter()
        .map(|k| text.find(k).unwrap_or_else(|| panic!("{k} missing in {text}")))
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "not in dependency order");
    assert!(!text.contains("gravity-field"));
}

#[test]
fn gamma_prints_the_dirac_matrices() {
    let o = run(&["gamma", "--signature", "3,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Gamma_0\n  [1 0 0 0]\n  [0 1 0 0]\n  [0 0 -1 0]\n  [0 0 0 -1]"), "{text}");
    assert!(text.contains("relations: pass (16 pairs)"));
}

#[test]
fn eleven_dimensional_beta_is_admissible() {
    let scn = flat("10,1", "flat11-adm.toml");
    let o = run(&["admissible", "--scenario", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("admissible: true"));
}

#[test]
fn eleven_dimensional_vacuum_reports_the_fierz_residual() {
    let scn = flat("10,1", "flat11.toml");
    let o = run(&["run", "--scenario", scn.to_str().unwrap(), "--checks", "cjs-constraints,field-equations"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.contains("[pass] cjs-constraints"));
    assert!(text.contains("(i') dF + dZ = 0: fail"));
    for ok in ["(ii') R = 0: pass", "(iii') Einstein: pass", "(i') (d*F)^perp + F^F = 0: pass"] {
        assert!(text.contains(ok), "{ok}");
    }
}

#[test]
fn input_errors_exit_with_two() {
    let scn = flat("3,1", "bad.toml");
    let text = std::fs::read_to_string(&scn).unwrap().replace("n = 4", "n = 5");
    std::fs::write(&scn, text).unwrap();
    let o = run(&["run", "--scenario", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("validation"));

    let garbled = tmp("garbled.toml");
    std::fs::write(&garbled, "version = 1\nchecks = [\"gamma\"\n").unwrap();
    let o = run(&["run", "--scenario", garbled.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = run(&["run", "--scenario", tmp("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
