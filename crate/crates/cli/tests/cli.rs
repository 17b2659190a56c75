//! Runs the binary: golden text output for every subcommand, exit codes,
//! config files and the KL cache.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hecke-cells"));
    c.env_remove("HECKE_CELLS_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Compares stdout with `tests/golden/<name>.txt`; `UPDATE_GOLDEN=1`
/// rewrites the file instead.
fn golden(name: &str, args: &[&str], code: i32) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    let got = stdout(&o);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(got, want, "{name}");
}

const EX: [&str; 4] = ["--system", "2,4,5", "--weights", "5,1,1"];

fn with(base: &[&str], rest: &[&str]) -> Vec<String> {
    base.iter().chain(rest).map(|s| s.to_string()).collect()
}

fn golden_ex(name: &str, rest: &[&str], code: i32) {
    let args = with(&EX, rest);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    golden(name, &args, code);
}

#[test]
fn group_and_algebra_commands() {
    golden("ball", &["ball", "--system", "2,4,5", "--radius", "2"], 0);
    golden_ex("kl", &["kl", "--w", "rsrs"], 0);
    golden_ex("kl_single", &["kl", "--w", "rsrs", "--y", "rs"], 0);
    golden_ex("cbasis", &["cbasis", "--w", "rsr"], 0);
    golden_ex("mult_t", &["mult", "--x", "rs", "--y", "sr"], 0);
    golden_ex("mult_c", &["mult", "--x", "rs", "--y", "sr", "--basis", "c"], 0);
    golden_ex("afun", &["afun", "--w", "rsr", "--radius", "3"], 0);
    golden_ex("afun_ball", &["afun", "--radius", "2"], 0);
}

#[test]
fn cell_commands() {
    golden_ex("dset_245", &["dset"], 0);
    golden("dset_246_a", &["dset", "--system", "2,4,6", "--weights", "2,1,1"], 0);
    golden("dset_246_f", &["dset", "--system", "2,4,6", "--weights", "14,1,8"], 0);
    golden_ex("decompose", &["decompose", "--w", "rsrtst"], 0);
    golden("cells", &["cells", "--system", "2,4,6", "--weights", "2,1,1", "--radius", "3"], 0);
}

#[test]
fn dset_prints_the_example_table() {
    let o = run(&with(&EX, &["dset"]).iter().map(String::as_str).collect::<Vec<_>>());
    let text = stdout(&o);
    for line in ["D_0 = {e}", "D_1 = {s, t}", "D_5 = {r, ststs}", "D_6 = {rt}", "D_9 = {rsr}", "D_12 = {rsrs}"] {
        assert!(text.contains(&format!("{line}\n")), "{line}");
    }
}

#[test]
fn verifications() {
    golden_ex("verify_p6", &["verify", "--check", "P6", "--radius", "6"], 0);
    golden_ex("verify_bound", &["verify", "--check", "bound", "--level", "9", "--radius", "4"], 0);
    golden_ex("verify_strict", &["verify", "--check", "strict", "--d", "rsr", "--radius", "3"], 0);
    golden_ex("verify_length", &["verify", "--check", "length", "--radius", "3"], 0);
    golden(
        "verify_expansion",
        &["verify", "--check", "expansion", "--case", "reduced2(8.2)", "--system", "2,7,3"],
        0,
    );
    golden("verify_dihedral", &["verify", "--check", "dihedral", "--system", "6", "--weights", "2,1"], 0);
}

#[test]
fn weight_space_commands() {
    golden("critical_1d", &["critical", "--mode", "1d", "--m", "2", "--k", "5"], 0);
    golden("critical_2d", &["critical", "--mode", "2d", "--m", "2", "--n", "3"], 0);
    golden("critical_triples", &["critical", "--mode", "triples", "--m", "2", "--n", "3"], 0);
    let o = run(&["critical", "--mode", "1d", "--m", "2", "--k", "5"]);
    assert!(stdout(&o).ends_with("\n1/2 1 3/2 2 3 4\n"));
    let o = run(&["critical", "--mode", "1d", "--m", "4", "--k", "3"]);
    assert!(stdout(&o).ends_with("\n1/3 1 4/3 3/2 2\n"));
}

#[test]
fn export_writes_the_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["svg", "csv", "json"] {
        let path = dir.path().join(format!("a.{ext}"));
        let o = run(&["export", "--m", "2", "--n", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("wrote 42 loci"));
        let first = std::fs::read(&path).unwrap();
        run(&["export", "--m", "2", "--n", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(std::fs::read(&path).unwrap(), first, "{ext}");
    }
    let csv = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(csv.starts_with("d1,d2,alpha,beta,gamma,chamber,critical"));
    let svg = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    let o = run(&["export", "--m", "2", "--n", "3", "--out", dir.path().join("a.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn counterexamples_exit_with_two_and_write_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = run(&[
        "verify",
        "--check",
        "expansion",
        "--case",
        "reduced2(7.2)",
        "--system",
        "2,7,3",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], Value::Bool(false));
    assert!(!v["result"][0]["failures"].as_array().unwrap().is_empty());
    assert_eq!(v["config"]["case"], "reduced2(7.2)");
}

#[test]
fn usage_and_config_errors_exit_with_one() {
    for args in [
        vec!["frobnicate"],
        vec!["dset"],
        vec!["dset", "--system", "2,4,5,3"],
        vec!["dset", "--system", "2,4"],
        vec!["dset", "--system", "2,4,5", "--weights", "1,0,1"],
        vec!["dset", "--system", "2,4,5", "--weights", "1,-1,1"],
        vec!["dset", "--system", "2,4,5", "--weights", "1,1"],
        vec!["dset", "--system", "2,3,3", "--weights", "1,2,1"],
        vec!["verify", "--system", "2,4,5", "--check", "P16"],
        vec!["verify", "--system", "2,4,5", "--check", "bound"],
        vec!["kl", "--system", "2,4,5", "--w", "rxs"],
        vec!["critical", "--mode", "2d", "--m", "2"],
        vec!["dset", "--config", "/nonexistent/config.json"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_echo_the_resolved_config() {
    let o = run(&["--json", "dset", "--system", "2,4,6"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["config"];
    assert_eq!(c["command"], "dset");
    assert_eq!(c["system"], serde_json::json!(["2", "4", "6"]));
    assert_eq!(c["weights"], serde_json::json!([1, 1, 1]));
    assert_eq!(c["radius"], 4);
    let text = stdout(&run(&["dset", "--system", "2,4,6"]));
    let echo = text.lines().next().unwrap().strip_prefix("# config ").unwrap();
    let mut echoed: Value = serde_json::from_str(echo).unwrap();
    assert_eq!(echoed["json"], false);
    echoed["json"] = Value::Bool(true);
    assert_eq!(&echoed, c);
}

#[test]
fn config_file_mirrors_flags_and_yields_to_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "dset", "system": "2,4,6", "weights": [14, 1, 8], "radius": 3}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["--config", cfg]));
    let direct = stdout(&run(&["dset", "--system", "2,4,6", "--weights", "14,1,8", "--radius", "3"]));
    assert_eq!(from_file, direct);
    let overridden = stdout(&run(&["dset", "--config", cfg, "--weights", "2,1,1"]));
    assert!(overridden.contains("D_3 = {rt, rsr}"));
    assert!(overridden.contains("\"radius\":3"));
}

fn cache_report(dir: &Path, args: &[&str]) -> Value {
    let o = bin().args(args).arg("--json").env("HECKE_CELLS_CACHE", dir).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn kl_cache_is_reused_and_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let args = with(&EX, &["verify", "--check", "bound", "--level", "9", "--radius", "3"]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let cold = cache_report(dir.path(), &args);
    let warm = cache_report(dir.path(), &args);
    assert_eq!(cold["result"], warm["result"]);
    let solves = |v: &Value| v["cache"]["kl_solves"].as_u64().unwrap();
    assert!(solves(&cold) > 0);
    assert!(solves(&warm) < solves(&cold));
    assert!(warm["cache"]["columns_loaded"].as_u64().unwrap() > 0);
    let file = PathBuf::from(cold["cache"]["file"].as_str().unwrap());
    let before = std::fs::read(&file).unwrap();
    cache_report(dir.path(), &args);
    assert_eq!(std::fs::read(&file).unwrap(), before);

    // a corrupted line is reported and the file rewritten
    let mut text = String::from_utf8(before.clone()).unwrap();
    text.push_str("{not json\n");
    std::fs::write(&file, text).unwrap();
    let again = cache_report(dir.path(), &args);
    assert!(again["cache"]["rebuilt"].is_string());
    assert_eq!(again["result"], cold["result"]);
    assert_eq!(std::fs::read(&file).unwrap(), before);

    // other weights get their own file
    let other = cache_report(
        dir.path(),
        &["verify", "--system", "2,4,5", "--weights", "2,1,1", "--check", "bound", "--level", "3", "--radius", "3"],
    );
    assert_ne!(other["cache"]["file"], cold["cache"]["file"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn thread_count_does_not_change_output() {
    let base = ["verify", "--check", "dihedral", "--system", "8", "--weights", "3,1"];
    let one = run(&[&base[..], &["--threads", "1"]].concat());
    let three = run(&[&base[..], &["--threads", "3"]].concat());
    let strip = |o: &Output| stdout(o).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&one), strip(&three));
    assert_eq!(one.status.code(), three.status.code());
}
