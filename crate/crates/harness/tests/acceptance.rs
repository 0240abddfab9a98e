//! Acceptance gate: one line per criterion, then a single assertion.

use std::time::{Duration, Instant};

use ergoring_core::pet::{weight_less, TraceNode, Weight};
use ergoring_harness::output::csv_bytes;
use ergoring_harness::{bundled_configs, run_config, ExperimentConfig, ResultRecord, RunOptions};

fn config(file: &str) -> ExperimentConfig {
    let b = bundled_configs().iter().find(|b| b.file == file).unwrap_or_else(|| panic!("{file} is bundled"));
    ExperimentConfig::parse(b.source).unwrap()
}

fn run(file: &str) -> ResultRecord {
    run_config(&config(file), &RunOptions::default()).unwrap_or_else(|e| panic!("{file}: {e}"))
}

fn col(r: &ResultRecord, name: &str) -> Vec<String> {
    let i = r.column(name).unwrap();
    r.rows.iter().map(|row| row[i].clone()).collect()
}

fn nums(r: &ResultRecord, name: &str) -> Vec<f64> {
    col(r, name).iter().map(|x| x.parse().unwrap()).collect()
}

fn failed(r: &ResultRecord) -> Vec<String> {
    r.verdicts.iter().filter(|v| !v.pass).map(|v| format!("{}: {}", v.name, v.detail)).collect()
}

struct Gate {
    lines: Vec<(usize, bool, String)>,
}

impl Gate {
    fn record(&mut self, id: usize, checks: Vec<(bool, String)>, elapsed: Duration, budget_s: Option<u64>) {
        let mut notes: Vec<String> = checks.iter().filter(|(ok, _)| !ok).map(|(_, m)| m.clone()).collect();
        let mut pass = notes.is_empty();
        if let Some(b) = budget_s {
            if elapsed > Duration::from_secs(b) {
                pass = false;
                notes.push(format!("runtime {:.1}s over {b}s", elapsed.as_secs_f64()));
            }
        }
        let detail = if pass {
            format!("{} checks ok in {:.1}s", checks.len(), elapsed.as_secs_f64())
        } else {
            notes.join("; ")
        };
        println!("criterion {id}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        self.lines.push((id, pass, detail));
    }
}

fn criterion_1(gate: &mut Gate) {
    let t = Instant::now();
    let r = run("joint-ergodicity-q.toml");
    let n = col(&r, "n");
    let d = nums(&r, "distance");
    let checks = vec![
        (n == ["3", "4", "5", "6"], format!("schedule {n:?}")),
        (d.last().is_some_and(|x| *x < 0.05), format!("final distance {:?}", d.last())),
        (d.windows(2).all(|w| w[1] < w[0]), format!("not strictly decreasing: {d:?}")),
        (r.pass(), format!("{:?}", failed(&r))),
    ];
    gate.record(1, checks, t.elapsed(), Some(60));
}

fn criterion_2(gate: &mut Gate) {
    let t = Instant::now();
    let r = run("counterexample.toml");
    let cases = col(&r, "case");
    let a = col(&r, "a");
    let n = col(&r, "n");
    let d = nums(&r, "distance");
    let mut checks = Vec::new();
    for mult in ["2", "3"] {
        let dep: Vec<f64> = (0..d.len()).filter(|&i| cases[i] == "dependent" && a[i] == mult).map(|i| d[i]).collect();
        checks.push((!dep.is_empty() && dep.iter().all(|x| (x - 1.0).abs() <= 1e-12), format!("a={mult} dependent {dep:?}")));
        let ctl = (0..d.len()).find(|&i| cases[i] == "control" && a[i] == mult && n[i] == "512").map(|i| d[i]);
        checks.push((ctl.is_some_and(|x| x < 0.1), format!("a={mult} control at 512: {ctl:?}")));
    }
    checks.push((r.pass(), format!("{:?}", failed(&r))));
    gate.record(2, checks, t.elapsed(), Some(30));
}

fn criterion_3(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = config("equidistribution.toml");
    let r = run_config(&cfg, &RunOptions::default()).unwrap();
    let decaying: Vec<_> = cfg.specs.iter().filter(|s| s.expect.as_deref() != Some("one")).collect();
    let rings: std::collections::BTreeSet<&str> = decaying.iter().map(|s| s.ring.as_str()).collect();
    let max_degree = decaying
        .iter()
        .flat_map(|s| s.polys.iter())
        .map(|p| p.split('^').skip(1).filter_map(|e| e[..1].parse::<u32>().ok()).max().unwrap_or(1))
        .max()
        .unwrap_or(0);
    let control = cfg.specs.iter().any(|s| s.expect.as_deref() == Some("one") && s.characters.iter().flatten().all(|c| c == "0"));
    let checks = vec![
        (decaying.len() >= 6, format!("{} decaying specs", decaying.len())),
        (rings.len() == 3, format!("rings {rings:?}")),
        (decaying.iter().all(|s| s.check_hypotheses), "hypotheses not checked on every spec".to_string()),
        (max_degree <= 3, format!("degree {max_degree}")),
        (control, "no all-trivial control".to_string()),
        (r.pass(), format!("{:?}", failed(&r))),
    ];
    gate.record(3, checks, t.elapsed(), Some(60));
}

fn edges_decrease(node: &TraceNode) -> bool {
    node.children.iter().all(|c| weight_less(&Weight(c.weight.clone()), &Weight(node.weight.clone())) && edges_decrease(c))
}

fn criterion_4(gate: &mut Gate) {
    let t = Instant::now();
    let linear = run("pet-linear.toml");
    let golden = run("pet-golden.toml");
    let corpus = run("pet-corpus.toml");
    let ks = col(&linear, "k");
    let mut checks = vec![
        (ks == ["2", "3", "4", "5", "6"], format!("linear k {ks:?}")),
        (linear.pass(), format!("{:?}", failed(&linear))),
        (golden.pass(), format!("{:?}", failed(&golden))),
        (col(&golden, "k").first().map(String::as_str) == Some("4"), "golden k".to_string()),
    ];
    for r in [&linear, &golden] {
        let traces = r.trace.as_ref().and_then(|v| v.as_object()).cloned().unwrap_or_default();
        for (id, v) in traces {
            let node: TraceNode = serde_json::from_value(v).unwrap();
            checks.push((edges_decrease(&node), format!("{id}: trace edge without weight decrease")));
        }
    }
    let corpus_rows = col(&corpus, "case").iter().filter(|c| c.starts_with("corpus-")).count();
    checks.push((corpus_rows == 100, format!("{corpus_rows} corpus systems")));
    checks.push((corpus.pass(), format!("{:?}", failed(&corpus))));
    gate.record(4, checks, t.elapsed(), Some(10));
}

fn criterion_5(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = config("seminorm-table.toml");
    let r = run_config(&cfg, &RunOptions::default()).unwrap();
    let sn = cfg.seminorm.as_ref().unwrap();
    let factor = (0..r.rows.len())
        .find(|&i| col(&r, "observable")[i] == "z-even" && col(&r, "method")[i] == "identity-bound-factor")
        .map(|i| col(&r, "value")[i].clone());
    let checks = vec![
        (sn.observables.len() == 10 && sn.n == "500", "corpus shape".to_string()),
        (sn.orders == ["1", "2", "3"], format!("orders {:?}", sn.orders)),
        (factor.as_deref() == Some("2"), format!("bound factor {factor:?}")),
        (r.pass(), format!("{:?}", failed(&r))),
    ];
    gate.record(5, checks, t.elapsed(), Some(120));
}

fn criterion_6(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = config("vdc-check.toml");
    let r = run_config(&cfg, &RunOptions::default()).unwrap();
    let v = cfg.vdc.as_ref().unwrap();
    let random = col(&r, "case").iter().filter(|c| c.starts_with("random-")).count();
    let checks = vec![
        (random == 1000 && v.dim == "8" && v.n == "20" && v.m == "20", format!("{random} families")),
        (!v.periodic.is_empty(), "no periodic corpus".to_string()),
        (r.pass(), format!("{:?}", failed(&r))),
    ];
    gate.record(6, checks, t.elapsed(), Some(30));
}

fn criterion_7(gate: &mut Gate) {
    let t = Instant::now();
    let z = run("mean-ergodic-z.toml");
    let q = run("mean-ergodic-q.toml");
    let zn = col(&z, "n");
    let zd = nums(&z, "deviation");
    let qd = nums(&q, "deviation");
    let checks = vec![
        (zn.last().map(String::as_str) == Some("1000") && zd.last().is_some_and(|x| *x < 0.01), format!("Z: {zd:?}")),
        (!qd.is_empty() && qd.iter().all(|x| *x == 0.0), format!("Q: {qd:?}")),
        (z.pass() && q.pass(), format!("{:?} {:?}", failed(&z), failed(&q))),
    ];
    gate.record(7, checks, t.elapsed(), Some(10));
}

fn criterion_8(gate: &mut Gate) {
    let t = Instant::now();
    let cfg = config("joint-ergodicity-q.toml");
    let outputs: Vec<Vec<u8>> = [1, 4, 8]
        .iter()
        .map(|&threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| csv_bytes(&run_config(&cfg, &RunOptions::default()).unwrap()).unwrap())
        })
        .collect();
    let checks = vec![(outputs.windows(2).all(|w| w[0] == w[1]), "CSV bytes differ across thread counts".to_string())];
    gate.record(8, checks, t.elapsed(), None);
}

#[test]
fn acceptance() {
    let mut gate = Gate { lines: Vec::new() };
    criterion_1(&mut gate);
    criterion_2(&mut gate);
    criterion_3(&mut gate);
    criterion_4(&mut gate);
    criterion_5(&mut gate);
    criterion_6(&mut gate);
    criterion_7(&mut gate);
    criterion_8(&mut gate);
    let failing: Vec<_> = gate.lines.iter().filter(|(_, ok, _)| !ok).map(|(id, _, d)| format!("{id}: {d}")).collect();
    assert!(failing.is_empty(), "failing criteria:\n{}", failing.join("\n"));
}
