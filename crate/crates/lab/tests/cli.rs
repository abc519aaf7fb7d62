use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beltrami-lab"))
}

fn run_config(dir: &Path, config: &str, out: &str) -> (i32, String) {
    let cfg = dir.join(format!("{out}.json"));
    std::fs::write(&cfg, config).unwrap();
    let o = lab().args(["run", "--config"]).arg(&cfg).arg("--out").arg(dir.join(out)).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn unit_shell_reports_six_and_admissible() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = run_config(tmp.path(), r#"{"kind":"spectrum","params":{"n":1}}"#, "s1");
    assert_eq!(code, 0);
    let r = report(&tmp.path().join("s1"));
    assert_eq!(r["results"]["multiplicity"], 6);
    assert_eq!(r["results"]["mod8_admissible"], true);
    assert_eq!(r["passed"], true);
}

#[test]
fn empty_shell_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = run_config(tmp.path(), r#"{"kind":"spectrum","params":{"n":7}}"#, "s7");
    assert_eq!(code, 0);
    let r = report(&tmp.path().join("s7"));
    assert_eq!(r["results"]["multiplicity"], 0);
    assert_eq!(r["results"]["shell_nonempty"], false);
    assert_eq!(r["results"]["note"], "empty shell");
}

#[test]
fn malformed_config_exits_two_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    for (i, bad) in [
        r#"{"kind":"spectrum","params":{}}"#,
        r#"{"kind":"spectrum","params":{"n":1,"m":2}}"#,
        r#"{"kind":"perturb","params":{"window":[1.2,0.8]}}"#,
        "not json",
    ]
    .iter()
    .enumerate()
    {
        let out = format!("bad{i}");
        let (code, err) = run_config(tmp.path(), bad, &out);
        assert_eq!(code, 2, "{bad}: {err}");
        assert!(!tmp.path().join(&out).exists());
    }
    let o = lab().args(["run", "--config", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = lab().args(["frobnicate"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn poincare_writes_section_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = run_config(tmp.path(), r#"{"kind":"poincare","params":{"a":1,"b":0.5,"c":0.1,"x0":[0.3,0,1.2],"crossings":50}}"#, "p");
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(tmp.path().join("p/section.csv")).unwrap();
    assert!(text.starts_with("s1,s2\n"));
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn perturb_writes_splitting_curves_and_matrices() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, err) = run_config(tmp.path(), r#"{"kind":"perturb","params":{"k":1,"epsilons":[-0.1,0,0.1]}}"#, "q");
    assert_eq!(code, 0, "{err}");
    let dir = tmp.path().join("q");
    let text = std::fs::read_to_string(dir.join("splitting_curves.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "epsilon,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,lambda_6");
    assert_eq!(text.lines().count(), 4);
    let (m, meta) = beltrami_galerkin::io::read_matrix(&dir, "exterior").unwrap();
    assert_eq!(meta.dimension, 81);
    assert_eq!(m, m.transpose());
    let record: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("run_record.json")).unwrap()).unwrap();
    let files: Vec<&str> = record["files"].as_array().unwrap().iter().map(|f| f["file"].as_str().unwrap()).collect();
    assert_eq!(
        files,
        ["exterior.csv", "exterior.json", "first_order.csv", "mass_derivative.csv", "mass_derivative.json", "report.json", "splitting_curves.csv"]
    );
}

#[test]
fn identical_configs_give_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind":"lyapunov","params":{"a":1,"b":0.5,"c":0.1,"seeds":"uniform","count":3,"t_final":200},"seed":7}"#;
    assert_eq!(run_config(tmp.path(), cfg, "a").0, 0);
    assert_eq!(run_config(tmp.path(), cfg, "b").0, 0);
    for f in ["report.json", "lyapunov.csv", "lyapunov_history.csv"] {
        assert_eq!(std::fs::read(tmp.path().join("a").join(f)).unwrap(), std::fs::read(tmp.path().join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_flag_overrides_and_changes_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.json");
    std::fs::write(&cfg, r#"{"kind":"pi-map","params":{"dim":12,"multiplicity":2,"q":[0.05]}}"#).unwrap();
    let mut hashes = Vec::new();
    for (seed, out) in [("1", "x"), ("2", "y")] {
        let o = lab().args(["--jobs", "2", "run", "--seed", seed, "--config"]).arg(&cfg).arg("--out").arg(tmp.path().join(out)).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        hashes.push(report(&tmp.path().join(out))["config_hash"].clone());
    }
    assert_ne!(hashes[0], hashes[1]);
}

#[test]
fn output_root_comes_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.json");
    std::fs::write(&cfg, r#"{"kind":"spectrum","params":{"n":3}}"#).unwrap();
    let o = lab().env(beltrami_lab::OUTPUT_ROOT_ENV, tmp.path().join("root")).args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let entries: Vec<_> = std::fs::read_dir(tmp.path().join("root")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries.len(), 1);
    assert!(entries[0].to_str().unwrap().starts_with("spectrum-"));
}

#[test]
fn schema_lists_every_kind() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/experiment-config.v1.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let kinds: Vec<&str> = schema["properties"]["kind"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let ours: Vec<&str> = beltrami_lab::Kind::ALL.iter().map(|k| k.name()).collect();
    assert_eq!(kinds, ours);
    for k in ours {
        assert!(schema["$defs"][k].is_object(), "{k}");
    }
}
