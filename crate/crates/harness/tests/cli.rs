use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ergoring_harness::output::read_csv;
use ergoring_harness::{bundled_configs, evaluate, ExperimentConfig, Summary};

fn ergoring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergoring")).args(args).output().expect("binary runs")
}

fn bundled(file: &str) -> &'static str {
    bundled_configs().iter().find(|b| b.file == file).unwrap().source
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_files_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "j.toml", bundled("joint-ergodicity-q.toml"));
    let out = dir.path().join("out");
    let o = ergoring(&["run", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read(out.join("joint-ergodicity-q.csv")).unwrap();
    let summary: Summary = serde_json::from_slice(&fs::read(out.join("joint-ergodicity-q.summary.json")).unwrap()).unwrap();
    assert!(summary.pass);
    assert_eq!(summary.schema_version, 1);
    assert_eq!(summary.wall_time_ms, None);

    // Verdicts follow from the CSV alone.
    let (columns, rows) = read_csv(&csv).unwrap();
    let config = ExperimentConfig::parse(bundled("joint-ergodicity-q.toml")).unwrap();
    assert_eq!(evaluate(&config, &columns, &rows).unwrap(), summary.verdicts);
    let d: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v.toml", &bundled("vdc-check.toml").replace("families = \"1000\"", "families = \"40\""));
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let o = ergoring(&["run", &cfg, "--threads", threads, "--out-dir", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        files.push((fs::read(out.join("vdc-check.csv")).unwrap(), fs::read(out.join("vdc-check.summary.json")).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn seed_override_changes_random_families() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v.toml", &bundled("vdc-check.toml").replace("families = \"1000\"", "families = \"5\""));
    let mut csvs = Vec::new();
    for seed in ["1", "2"] {
        let out = dir.path().join(seed);
        let o = ergoring(&["run", &cfg, "--seed", seed, "--out-dir", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        csvs.push(fs::read(out.join("vdc-check.csv")).unwrap());
    }
    assert_ne!(csvs[0], csvs[1]);
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m.toml", bundled("mean-ergodic-z.toml"));
    let out = dir.path().join("out");
    let o = ergoring(&["run", &cfg, "--timing", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary: Summary = serde_json::from_slice(&fs::read(out.join("mean-ergodic-z.summary.json")).unwrap()).unwrap();
    assert!(summary.wall_time_ms.is_some());
}

#[test]
fn counterexample_distance_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("counterexample.toml")
        .replace("multipliers = [\"2\", \"3\"]", "multipliers = [\"2\"]")
        .replace("control_schedule = [\"64\", \"128\", \"256\", \"512\"]", "control_schedule = [\"512\"]");
    let cfg = write(dir.path(), "c.toml", &text);
    let out = dir.path().join("out");
    let o = ergoring(&["run", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, rows) = read_csv(&fs::read(out.join("counterexample.csv")).unwrap()).unwrap();
    for r in rows.iter().filter(|r| r[0] == "dependent") {
        assert_eq!(r[4], "1");
    }
}

#[test]
fn dependent_polynomials_fail_validation_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("joint-ergodicity-q.toml").replace("polys = [\"n\", \"n^2\"]", "polys = [\"n\", \"2*n+1\"]");
    let cfg = write(dir.path(), "bad.toml", &text);
    let o = ergoring(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("dependent") && err.contains("coefficients (2, -1)"), "{err}");
    let line = text.lines().position(|l| l.starts_with("polys")).unwrap() + 1;
    assert!(err.contains(&format!("line {line}")), "{err}");
}

#[test]
fn syntax_errors_report_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "name = \"x\"\nkind = \"mean-ergodic\"\nseed = 3\n");
    let o = ergoring(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let cfg = write(dir.path(), "unknown.toml", &format!("{}\nbogus = \"1\"\n", bundled("mean-ergodic-z.toml")));
    let o = ergoring(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"), "{}", stderr(&o));
}

#[test]
fn budget_violations_have_their_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("joint-ergodicity-q.toml").replace("schedule = [\"3\", \"4\", \"5\", \"6\"]", "schedule = [\"8\"]");
    let cfg = write(dir.path(), "big.toml", &text);
    let o = ergoring(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn failing_verdicts_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("mean-ergodic-z.toml").replace("max_final_deviation = \"0.01\"", "max_final_deviation = \"1e-9\"");
    let cfg = write(dir.path(), "strict.toml", &text);
    let o = ergoring(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL final_deviation"));
}

#[test]
fn suite_tag_filters_to_pet_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let o = ergoring(&["suite", "--tag", "pet", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = String::from_utf8_lossy(&o.stdout).into_owned();
    assert!(table.contains("pet-linear.toml") && table.contains("pet-golden.toml"), "{table}");
    assert_eq!(table.lines().count(), 3, "{table}");
    assert!(dir.path().join("pet-golden.trace.json").is_file());
}

#[test]
fn unknown_tag_lists_known_tags() {
    let o = ergoring(&["suite", "--tag", "nope"]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("unknown tag `nope`") && err.contains("pet") && err.contains("acceptance"), "{err}");
}

#[test]
fn missing_bundled_config_lists_expected_set() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pet-linear.toml", bundled("pet-linear.toml"));
    let o = ergoring(&["suite", "--config-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("expected set") && err.contains("joint-ergodicity-q.toml") && err.contains("missing"), "{err}");
}

#[test]
fn pet_trace_subcommand_prints_outline() {
    let dir = tempfile::tempdir().unwrap();
    let o = ergoring(&["pet-trace", "n^2, n", "--ring", "Z", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    assert!(text.contains("depth 2: weight (3)") && text.contains("k = 4"), "{text}");
    let trace: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("pet-trace.trace.json")).unwrap()).unwrap();
    assert_eq!(trace["input"]["children"][0]["weight"], serde_json::json!([0, 1]));

    let o = ergoring(&["pet-trace", "n, n+1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn bundled_configs_round_trip() {
    for b in bundled_configs() {
        let c = ExperimentConfig::parse(b.source).unwrap_or_else(|e| panic!("{}: {e}", b.file));
        let again = ExperimentConfig::parse(&c.to_toml()).unwrap();
        assert_eq!(c, again, "{}", b.file);
    }
}
