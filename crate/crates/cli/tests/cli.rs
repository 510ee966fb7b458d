use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn satrl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satrl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdin_satrl(args: &[&str], dir: &Path, input: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_satrl"))
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture() -> String {
    format!("stub:{}/tests/fixtures/translations.tsv", env!("CARGO_MANIFEST_DIR"))
}

fn model(out: &str) -> Vec<i64> {
    let line = out.lines().find(|l| l.starts_with("v ")).expect("model line");
    line[2..].split_whitespace().map(|t| t.parse().unwrap()).take_while(|&l| l != 0).collect()
}

#[test]
fn version_lists_schema_versions() {
    let dir = tempfile::tempdir().unwrap();
    let o = satrl(&["--version"], dir.path());
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for key in ["checkpoint-format 1", "feature-schema 1", "bench-csv 1"] {
        assert!(s.contains(key), "{s}");
    }
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&satrl(&[], dir.path())), 1);
    assert_eq!(code(&satrl(&["solve", "x.cnf", "--bogus"], dir.path())), 1);
    assert_eq!(code(&satrl(&["solve", "x.cnf", "--heuristic", "rl"], dir.path())), 1);
    assert_eq!(code(&satrl(&["convert", "--translator", "ftp"], dir.path())), 1);
    assert_eq!(code(&satrl(&["--help"], dir.path())), 0);
}

#[test]
fn solve_exit_codes_and_model() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sat.cnf"), "p cnf 3 2\n1 -2 0\n-1 3 0\n").unwrap();
    fs::write(dir.path().join("unsat.cnf"), "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    for h in ["vsids", "random"] {
        let o = satrl(&["solve", "sat.cnf", "--heuristic", h, "--seed", "3"], dir.path());
        assert_eq!(code(&o), 10);
        let m = model(&stdout(&o));
        let t = |v: i64| m.contains(&v);
        assert!((t(1) || t(-2)) && (t(-1) || t(3)), "{m:?}");
        assert_eq!(code(&satrl(&["solve", "unsat.cnf", "--heuristic", h], dir.path())), 20);
    }
    let o = satrl(&["solve", "missing.cnf"], dir.path());
    assert_eq!(code(&o), 2);
    fs::write(dir.path().join("three.cnf"), "p cnf 6 3\n1 2 0\n3 4 0\n5 6 0\n").unwrap();
    let o = satrl(&["solve", "three.cnf", "--max-decisions", "1"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("s UNKNOWN"));
}

#[test]
fn convert_english_and_expressions() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.txt"), "The circus has a Ferris wheel or a rollercoaster.").unwrap();
    let o = satrl(
        &["convert", "one.txt", "--translator", &fixture(), "--out", "one.cnf"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(dir.path().join("one.cnf")).unwrap(), "p cnf 2 1\n1 2 0\n");
    assert_eq!(
        fs::read_to_string(dir.path().join("one.cnf.symbols.tsv")).unwrap(),
        "P\t1\ta Ferris wheel\nQ\t2\ta rollercoaster\n"
    );

    fs::write(dir.path().join("e.txt"), "And(Not(P), Or(Q, R))\n").unwrap();
    let o = satrl(&["convert", "--mode", "expr", "e.txt"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("p cnf 3 2\n-1 0\n2 3 0\n"), "{}", stdout(&o));

    let o = stdin_satrl(&["convert", "--mode", "expr"], dir.path(), "  \n");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("EmptyInput"));
    let o = stdin_satrl(&["convert", "--translator", &fixture()], dir.path(), "An unknown sentence.");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("sentence 0"));
    assert_eq!(code(&satrl(&["convert", "one.txt"], dir.path())), 1);
}

#[test]
fn features_lines_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.cnf"), "p cnf 3 2\n1 -2 0\n-1 3 0\n").unwrap();
    let o = satrl(&["features", "f.cnf"], dir.path());
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 48);
    assert!(s.lines().all(|l| l.split_once('=').is_some_and(|(_, v)| v.parse::<f64>().is_ok())));
    assert!(s.starts_with("num_vars=3\nnum_clauses=2\n"));
    let schema = stdout(&satrl(&["features", "--schema"], dir.path()));
    assert_eq!(schema.lines().filter(|l| !l.starts_with('#')).count(), 48);
    assert_eq!(code(&satrl(&["features"], dir.path())), 1);
}

#[test]
fn generate_train_solve_bench_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = satrl(&["generate", "--out", "ds", "--count", "10", "--vars", "12", "--clauses", "50", "--seed", "5"], d);
    assert_eq!(code(&o), 0);
    let o = satrl(
        &["train", "--dataset", "ds", "--steps", "200", "--out", "p.bin", "--hidden", "16,16", "--rollout-window", "64", "--seed", "1"],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let log = fs::read_to_string(d.join("p.bin.log.csv")).unwrap();
    assert!(log.starts_with("window,steps,mean_reward,mean_decisions\n"));
    assert!(log.lines().last().unwrap().split(',').nth(1) == Some("200"));

    let o = satrl(&["solve", "ds/rand3sat-12-50-0001.cnf", "--heuristic", "rl", "--policy", "p.bin"], d);
    assert_eq!(code(&o), 10);
    fs::write(d.join("small.cnf"), "p cnf 2 1\n1 2 0\n").unwrap();
    let o = satrl(&["solve", "small.cnf", "--heuristic", "rl", "--policy", "p.bin"], d);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("shape mismatch"));

    let o = satrl(&["bench", "--dataset", "ds", "--policy", "p.bin", "--out", "r.csv", "--reps", "1"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(d.join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2, "test split of 10 is 2 instances");
    assert!(stdout(&o).contains("strictly faster"));
    let kv = fs::read_to_string(d.join("r.csv.summary.txt")).unwrap();
    assert!(kv.contains("vsids.median_time_s=") && kv.contains("rl.faster_fraction="));
    assert!(d.join("r.csv.features.csv").exists());

    // Same flags and seed give the same trained bytes.
    let o = satrl(
        &["train", "--dataset", "ds", "--steps", "200", "--out", "q.bin", "--hidden", "16,16", "--rollout-window", "64", "--seed", "1"],
        d,
    );
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(d.join("p.bin")).unwrap(), fs::read(d.join("q.bin")).unwrap());
}
