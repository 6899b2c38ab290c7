use std::path::Path;
use std::process::{Command, Output};

fn dfrc(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfrc"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const TINY: &str = "\
# one proposed trial at desk scale
name = tiny
scale = desk
seeds = [3]
schemes = [proposed]
solver.max_outer = 3
";

#[test]
fn presets_list_and_write() {
    let dir = tempfile::tempdir().unwrap();
    let out = dfrc(&["presets", "list"], dir.path());
    assert_eq!(code(&out), 0);
    for name in ["fig2", "fig3", "fig4"] {
        assert!(stdout(&out).contains(name));
    }

    let out = dfrc(&["presets", "write", "fig4", "--scale", "desk"], dir.path());
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("fig4.spec")).unwrap();
    assert!(text.contains("sweep.axis = qos"));

    let out = dfrc(&["validate", "fig4.spec"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("scenario.power_dbm = 39"));
    assert!(stdout(&out).contains("sweep.values = [6, 8, 10, 12, 14, 16]"));

    assert_eq!(code(&dfrc(&["presets", "write", "fig9"], dir.path())), 2);
}

#[test]
fn validate_applies_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.spec"), TINY).unwrap();
    let out = dfrc(&["validate", "t.spec", "--seeds", "4", "--scheme", "fpa,rpa", "--scale", "paper"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("seeds = 0..4"), "{text}");
    assert!(text.contains("schemes = [fpa, rpa]"));
    assert!(text.contains("scenario.antennas = 8"));
}

#[test]
fn invalid_specs_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "scenario.usres = 2\n",
        "scenario.users = two\n",
        "schemes = [proposed, mystery]\n",
        "scenario.antennas = 30\n",
        "sweep.axis = power\n",
        "scenario.min_distance_wavelengths = 3\n",
    ];
    for (i, body) in cases.iter().enumerate() {
        let name = format!("bad{i}.spec");
        std::fs::write(dir.path().join(&name), body).unwrap();
        let out = dfrc(&["validate", &name], dir.path());
        assert_eq!(code(&out), 2, "case {body:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    // An unreadable spec counts as an invalid one.
    assert_eq!(code(&dfrc(&["validate", "missing.spec"], dir.path())), 2);
}

#[test]
fn run_writes_tables_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.spec"), TINY).unwrap();
    let out = dfrc(&["run", "t.spec", "--out", "res"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let res = dir.path().join("res");
    for f in ["results.csv", "summary.csv", "infeasible.csv", "timings.csv", "trace_3.csv", "convergence.svg"] {
        assert!(res.join(f).exists(), "{f} missing");
    }
    let results = std::fs::read_to_string(res.join("results.csv")).unwrap();
    let mut lines = results.lines();
    assert!(lines.next().unwrap().starts_with("# dfrc-core "));
    assert_eq!(
        lines.next().unwrap(),
        "scheme,seed,power_dbm,status,radar_sinr_db,min_qos_margin_db,passes"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[..3], ["proposed", "3", "39"]);
    assert!(row[4].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn all_infeasible_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.spec"), format!("{TINY}scenario.qos_db = 60\n")).unwrap();
    let out = dfrc(&["run", "t.spec", "--out", "res"], dir.path());
    assert_eq!(code(&out), 3);
    let infeasible = std::fs::read_to_string(dir.path().join("res/infeasible.csv")).unwrap();
    assert!(infeasible.contains("proposed,3,39,infeasible,"));
}
