use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str =
    "case,n,H,psi,delta,interval,measure_lo,measure_hi,measure_rat,poly_count,essential_count,nonessential_count,wall_ms";

fn dioph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(args)
        .current_dir(dir)
        .env_remove("DIOPH_CACHE_DIR")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const MEASURE: &[&str] =
    &["measure", "--case", "big", "--n", "2", "--psi", "pow:c=1,w=3", "--interval", "1:2", "--H", "8", "--tol", "1e-9"];

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(dir: &Path, args: &[String]) -> Output {
    dioph(dir, &args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn measure_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &with(MEASURE, &["--out", "r.csv"]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], HEADER);
    assert!(lines[1].starts_with("big,2,8,\"pow:c=1,w=3\",1/10,1:2,"));
    // wall_ms stays empty without --timing
    assert!(lines[1].ends_with(','));
    assert!(String::from_utf8_lossy(&o.stdout).contains("measure: wrote r.csv"));
    assert!(dir.path().join(".dioph-cache").is_dir());
}

#[test]
fn interval_through_zero_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for iv in ["-1:1", "0:1", "-1:0"] {
        let o = dioph(dir.path(), &["measure", "--interval", iv, "--H", "4"]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("0<c₀(I)"), "{}", stderr(&o));
    }
    let o = dioph(dir.path(), &["measure", "--interval", "-2:-1", "--H", "4", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["measure", "--bogus", "1"],
        vec!["measure", "--H", "8", "--delta", "one/ten"],
        vec!["measure", "--H", "8", "--delta", "3/10"],
        vec!["measure", "--H", "8", "--tol", "x"],
        vec!["measure", "--H", "8", "--psi", "exp:2"],
        vec!["measure", "--H", "8", "--case", "huge"],
        vec!["measure"],
        vec!["frobnicate", "--H", "8"],
        vec!["tau"],
        vec!["wn", "--H", "8"],
    ] {
        let o = dioph(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = dioph(dir.path(), &["measure", "--n", "3", "--H", "40", "--budget", "1000", "--no-cache"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn cache_hits_and_misses() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(dir.path(), &with(MEASURE, &["--out", "a.csv"]));
    assert!(String::from_utf8_lossy(&first.stdout).contains("(computed)"));
    let second = run(dir.path(), &with(MEASURE, &["--out", "b.csv"]));
    assert!(String::from_utf8_lossy(&second.stdout).contains("(cache hit)"));
    assert_eq!(fs::read(dir.path().join("a.csv")).unwrap(), fs::read(dir.path().join("b.csv")).unwrap());
    // the worker count is not part of the key
    let third = run(dir.path(), &with(MEASURE, &["--workers", "3", "--out", "c.csv"]));
    assert!(String::from_utf8_lossy(&third.stdout).contains("(cache hit)"));
    let mut tol = with(MEASURE, &["--out", "d.csv"]);
    let i = tol.iter().position(|a| a == "1e-9").unwrap();
    tol[i] = "1e-12".into();
    let fourth = run(dir.path(), &tol);
    assert!(String::from_utf8_lossy(&fourth.stdout).contains("(computed)"));
    let nocache = run(dir.path(), &with(MEASURE, &["--no-cache", "--out", "e.csv"]));
    assert!(String::from_utf8_lossy(&nocache.stdout).contains("(computed)"));
}

#[test]
fn corrupt_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &with(MEASURE, &["--out", "a.csv"]));
    let root = dir.path().join(".dioph-cache");
    let entry = walk(&root).into_iter().next().expect("one cache entry");
    fs::write(&entry, b"garbage").unwrap();
    let o = run(dir.path(), &with(MEASURE, &["--out", "b.csv"]));
    assert!(stderr(&o).contains("corrupt cache entry"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("(computed)"));
    assert_eq!(fs::read(dir.path().join("a.csv")).unwrap(), fs::read(dir.path().join("b.csv")).unwrap());
    let again = run(dir.path(), &with(MEASURE, &["--out", "c.csv"]));
    assert!(String::from_utf8_lossy(&again.stdout).contains("(cache hit)"));
}

fn walk(p: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn cache_root_from_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(MEASURE)
        .args(["--out", "a.csv"])
        .current_dir(dir.path())
        .env("DIOPH_CACHE_DIR", "from-env")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("from-env").is_dir());
    let o = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(MEASURE)
        .args(["--out", "b.csv", "--cache-dir", "from-flag"])
        .current_dir(dir.path())
        .env("DIOPH_CACHE_DIR", "from-env")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("from-flag").is_dir());
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "# measure settings\nn=1\nH=3\npsi=pow:c=1,w=2\ninterval=1/4:3/4\n").unwrap();
    let o = dioph(dir.path(), &["measure", "--config", "run.cfg", "--no-cache", "--out", "a.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("big,1,3,\"pow:c=1,w=2\",1/10,1/4:3/4,"));
    let o = dioph(dir.path(), &["measure", "--config", "run.cfg", "--H", "2", "--no-cache", "--out", "b.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("big,1,2,"));
    fs::write(dir.path().join("bad.cfg"), "colour=blue\n").unwrap();
    assert_eq!(dioph(dir.path(), &["measure", "--config", "bad.cfg"]).status.code(), Some(2));
}

#[test]
fn psi_tables_are_read_from_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("psi.txt"), "# H value\n1 1/2\n2 1/16\n").unwrap();
    let o = dioph(dir.path(), &["measure", "--psi", "table:psi.txt", "--heights", "1:2", "--no-cache", "--out", "a.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("table:psi.txt"));
    // changing the table contents changes the cache key
    let a = dioph(dir.path(), &["measure", "--psi", "table:psi.txt", "--H", "2", "--out", "x.csv"]);
    assert!(String::from_utf8_lossy(&a.stdout).contains("(computed)"));
    fs::write(dir.path().join("psi.txt"), "1 1/2\n2 1/32\n").unwrap();
    let b = dioph(dir.path(), &["measure", "--psi", "table:psi.txt", "--H", "2", "--out", "y.csv"]);
    assert!(String::from_utf8_lossy(&b.stdout).contains("(computed)"));
}

fn validate(doc: &serde_json::Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&fs::read_to_string(schema_path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}");
}

#[test]
fn json_reports_match_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        MEASURE.to_vec(),
        vec!["measure", "--case", "medium", "--psi", "pow:c=1,w=3/2", "--interval", "1/2:2", "--H", "8"],
        vec!["scaling", "--heights", "4:16:x2"],
        vec!["count", "--heights", "1:4"],
        vec!["enum", "--n", "1", "--H", "2"],
        vec!["bc-sum", "--H", "5"],
        vec!["lemma1-check", "--trials", "20"],
        vec!["lemma2-check", "--heights", "8"],
        vec!["essential", "--n", "3", "--interval", "1/2:2", "--H", "8"],
        vec!["tau", "--blocks", "1:2"],
        vec!["wn", "--target", "alg:-2,0,1@5/4:6/4", "--heights", "1:3"],
    ];
    for args in runs {
        let mut a = args.clone();
        a.extend(["--format", "json", "--no-cache", "--out", "r.json"]);
        let o = dioph(dir.path(), &a);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let doc: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("r.json")).unwrap()).unwrap();
        validate(&doc);
        assert_eq!(doc["report"], args[0]);
    }
}

#[test]
fn schema_rejects_a_malformed_report() {
    let doc = serde_json::json!({
        "version": "dioph-report-1", "report": "measure", "config": {}, "columns": ["case"], "rows": [], "summary": {}
    });
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&fs::read_to_string(schema_path).unwrap()).unwrap();
    assert!(!jsonschema::JSONSchema::compile(&schema).unwrap().is_valid(&doc));
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    for (w, out) in [("1", "w1.csv"), ("8", "w8.csv")] {
        let o = dioph(dir.path(), &["scaling", "--heights", "4:16:x2", "--workers", w, "--no-cache", "--out", out]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(dir.path().join("w1.csv")).unwrap(), fs::read(dir.path().join("w8.csv")).unwrap());
}

#[test]
fn timing_fills_wall_ms() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &with(MEASURE, &["--timing", "--out", "t.csv"]));
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let last = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().to_string();
    assert!(last.parse::<u128>().is_ok(), "wall_ms {last:?}");
    assert!(!dir.path().join(".dioph-cache").exists());
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dioph(dir.path(), &["--help"]).status.code(), Some(0));
}
