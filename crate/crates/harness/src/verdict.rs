//! Pass/fail verdicts, computed from result rows and config thresholds only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use ergoring_core::polynomials::parse_polynomial;

use crate::config::*;
use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

struct Rows<'a> {
    columns: &'a [String],
    rows: &'a [Vec<String>],
}

impl<'a> Rows<'a> {
    fn idx(&self, name: &str) -> Result<usize, HarnessError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| HarnessError::Runtime(format!("result table has no `{name}` column")))
    }

    fn text(&self, row: &'a [String], name: &str) -> Result<&'a str, HarnessError> {
        let i = self.idx(name)?;
        row.get(i).map(String::as_str).ok_or_else(|| HarnessError::Runtime(format!("short row for `{name}`")))
    }

    /// `None` for an empty cell.
    fn num(&self, row: &'a [String], name: &str) -> Result<Option<f64>, HarnessError> {
        let t = self.text(row, name)?;
        if t.is_empty() {
            return Ok(None);
        }
        t.parse::<f64>().map(Some).map_err(|_| HarnessError::Runtime(format!("`{t}` in column `{name}` is not a number")))
    }

    fn with(&self, name: &str, value: &str) -> Result<Vec<&'a [String]>, HarnessError> {
        let i = self.idx(name)?;
        Ok(self.rows.iter().filter(|r| r.get(i).map(String::as_str) == Some(value)).map(Vec::as_slice).collect())
    }
}

fn cfg_real(s: &str) -> Result<f64, HarnessError> {
    real(s).map_err(|e| HarnessError::Validation { line: None, message: e })
}

pub fn evaluate(config: &ExperimentConfig, columns: &[String], rows: &[Vec<String>]) -> Result<Vec<Verdict>, HarnessError> {
    let t = Rows { columns, rows };
    match config.kind {
        ExperimentKind::JointErgodicity => joint(config, &t),
        ExperimentKind::Counterexample => counterexample(config, &t),
        ExperimentKind::Equidistribution => equidist(config, &t),
        ExperimentKind::PetTrace => pet(config, &t),
        ExperimentKind::SeminormTable => seminorm(config, &t),
        ExperimentKind::VdcCheck => vdc(&t),
        ExperimentKind::MeanErgodic => mean(config, &t),
    }
}

fn column(t: &Rows, name: &str) -> Result<Vec<f64>, HarnessError> {
    t.rows
        .iter()
        .map(|r| t.num(r, name)?.ok_or_else(|| HarnessError::Runtime(format!("empty `{name}` cell"))))
        .collect()
}

fn joint(config: &ExperimentConfig, t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let a = config.average.as_ref().expect("validated");
    let d = column(t, "distance")?;
    let max = cfg_real(&a.max_final_distance)?;
    let last = *d.last().unwrap_or(&f64::NAN);
    let mut out = vec![Verdict::new("final_distance", last < max, format!("{last} < {max}"))];
    if a.strictly_decreasing {
        let ok = d.windows(2).all(|w| w[1] < w[0]);
        out.push(Verdict::new("strictly_decreasing", ok, format!("{d:?}")));
    }
    Ok(out)
}

fn counterexample(config: &ExperimentConfig, t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let c = config.counterexample.as_ref().expect("validated");
    let tol = cfg_real(&c.exact_tolerance)?;
    let threshold = cfg_real(&c.control_threshold)?;
    let mut out = Vec::new();
    for a in &c.multipliers {
        let a = a.trim();
        let rows: Vec<_> = t.with("a", a)?;
        let mut worst = 0.0f64;
        let mut last_control = f64::NAN;
        for r in &rows {
            let d = t.num(r, "distance")?.unwrap_or(f64::NAN);
            match t.text(r, "case")? {
                "dependent" => worst = worst.max((d - 1.0).abs()),
                _ => last_control = d,
            }
        }
        out.push(Verdict::new(format!("dependent_exact_a{a}"), worst <= tol, format!("max |d - 1| = {worst:e} <= {tol:e}")));
        out.push(Verdict::new(
            format!("control_decay_a{a}"),
            last_control < threshold,
            format!("{last_control} < {threshold}"),
        ));
    }
    Ok(out)
}

fn equidist(config: &ExperimentConfig, t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let mut out = Vec::new();
    for s in &config.specs {
        let rows = t.with("spec", &s.id)?;
        let verdict = if s.expect.as_deref() == Some("one") {
            let mut ok = !rows.is_empty();
            for r in &rows {
                ok &= t.num(r, "re")? == Some(1.0) && t.num(r, "im")? == Some(0.0);
            }
            Verdict::new(format!("spec_{}", s.id), ok, "exactly 1 at every N")
        } else {
            let last = rows.last().ok_or_else(|| HarnessError::Runtime(format!("no rows for spec {}", s.id)))?;
            let abs = t.num(last, "abs")?.unwrap_or(f64::NAN);
            let thr = t.num(last, "threshold")?.unwrap_or(f64::NAN);
            Verdict::new(format!("spec_{}", s.id), abs < thr, format!("{abs} < {thr}"))
        };
        out.push(verdict);
    }
    Ok(out)
}

fn pet(config: &ExperimentConfig, t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let p = config.pet.as_ref().expect("validated");
    let ring = ring_of(&p.ring).map_err(HarnessError::Runtime)?;
    let mut out = Vec::new();
    for case in &p.cases {
        let rows = t.with("case", &case.id)?;
        let row = rows.first().ok_or_else(|| HarnessError::Runtime(format!("no row for case {}", case.id)))?;
        let mut failures = Vec::new();
        if t.text(row, "status")? != "terminated" {
            failures.push(format!("status {}", t.text(row, "status")?));
        } else {
            if t.text(row, "edges_decrease")? != "true" {
                failures.push("an edge does not decrease the weight".to_string());
            }
            if let Some(k) = &case.expect_k {
                if t.text(row, "k")? != k.trim() {
                    failures.push(format!("k = {} expected {k}", t.text(row, "k")?));
                }
            }
            if let Some(d) = &case.expect_depth {
                if t.text(row, "depth")? != d.trim() {
                    failures.push(format!("depth = {} expected {d}", t.text(row, "depth")?));
                }
            }
            if !case.expect_weights.is_empty() {
                let got = t.text(row, "weights")?;
                if got != case.expect_weights.join(" ") {
                    failures.push(format!("weights {got} expected {}", case.expect_weights.join(" ")));
                }
            }
            if !case.expect_child.is_empty() && !same_polys(ring, t.text(row, "child")?, &case.expect_child) {
                failures.push(format!("child {} expected {}", t.text(row, "child")?, case.expect_child.join("; ")));
            }
        }
        let detail = if failures.is_empty() { "all expectations met".to_string() } else { failures.join(", ") };
        out.push(Verdict::new(format!("case_{}", case.id), failures.is_empty(), detail));
    }
    if let Some(c) = &p.corpus {
        let max_depth = int(&c.max_trace_depth).map_err(HarnessError::Runtime)?;
        let mut total = 0usize;
        let mut ok = 0usize;
        let mut worst = 0i64;
        for r in t.rows.iter().filter(|r| r.first().is_some_and(|id| id.starts_with("corpus-"))) {
            total += 1;
            let depth = t.num(r, "depth")?.unwrap_or(0.0) as i64;
            worst = worst.max(depth);
            if t.text(r, "status")? == "terminated" && depth < max_depth {
                ok += 1;
            }
        }
        out.push(Verdict::new(
            "corpus_terminates",
            total > 0 && ok == total,
            format!("{ok}/{total} terminate with depth < {max_depth}; deepest chain seen {worst}"),
        ));
    }
    Ok(out)
}

/// Polynomial texts compared as polynomials, in whatever variables occur.
fn same_polys(ring: ergoring_core::algebra::Ring, got: &str, expected: &[String]) -> bool {
    let got: Vec<&str> = got.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    if got.len() != expected.len() {
        return false;
    }
    let mut vars: Vec<String> = Vec::new();
    for text in got.iter().copied().chain(expected.iter().map(String::as_str)) {
        let mut chars = text.char_indices().peekable();
        while let Some((i, ch)) = chars.next() {
            if ch.is_alphabetic() {
                let mut end = i + ch.len_utf8();
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        end = j + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let name = text[i..end].to_string();
                if !vars.contains(&name) {
                    vars.push(name);
                }
            }
        }
    }
    vars.sort();
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    got.iter().zip(expected).all(|(a, b)| {
        match (parse_polynomial(ring, a, &names), parse_polynomial(ring, b, &names)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
    })
}

fn seminorm(config: &ExperimentConfig, t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let sn = config.seminorm.as_ref().expect("validated");
    let mono_tol = cfg_real(&sn.monotonicity_tolerance)?;
    let oracle_tol = cfg_real(&sn.oracle_tolerance)?;
    // (observable, s, method) -> value, or the status text when missing.
    let mut values: BTreeMap<(String, usize, String), Result<f64, String>> = BTreeMap::new();
    for r in t.rows {
        let method = t.text(r, "method")?;
        if method.starts_with("identity") {
            continue;
        }
        let s = t.num(r, "s")?.unwrap_or(0.0) as usize;
        let v = t.num(r, "value")?.ok_or_else(|| t.text(r, "status").unwrap_or_default().to_string());
        values.insert((t.text(r, "observable")?.to_string(), s, method.to_string()), v);
    }
    let get = |id: &str, s: usize, m: &str| values.get(&(id.to_string(), s, m.to_string())).cloned();
    let mut orders: Vec<usize> = sn.orders.iter().filter_map(|o| int(o).ok()).map(|o| o as usize).collect();
    orders.sort_unstable();

    let mut mono_fail = Vec::new();
    let mut oracle_fail = Vec::new();
    let mut worst_gap = 0.0f64;
    let mut eigen_fail = Vec::new();
    for o in &sn.observables {
        for w in orders.windows(2) {
            match (get(&o.id, w[0], "recursive"), get(&o.id, w[1], "recursive")) {
                (Some(Ok(a)), Some(Ok(b))) if a <= b + mono_tol => {}
                (Some(Ok(a)), Some(Ok(b))) => mono_fail.push(format!("{} s={}: {a} > {b} + {mono_tol}", o.id, w[0])),
                (a, b) => mono_fail.push(format!("{} s={}..{}: {}", o.id, w[0], w[1], missing(a, b))),
            }
        }
        for &s in &orders {
            match (get(&o.id, s, "recursive"), get(&o.id, s, "closed-form")) {
                (Some(Ok(a)), Some(Ok(b))) => {
                    worst_gap = worst_gap.max((a - b).abs());
                    if (a - b).abs() >= oracle_tol {
                        oracle_fail.push(format!("{} s={s}: |{a} - {b}|", o.id));
                    }
                }
                (a, b) => oracle_fail.push(format!("{} s={s}: {}", o.id, missing(a, b))),
            }
            if o.eigenfunction && s >= 2 {
                match get(&o.id, s, "closed-form") {
                    Some(Ok(v)) if (v - 1.0).abs() <= 1e-12 => {}
                    other => eigen_fail.push(format!("{} s={s}: {other:?}", o.id)),
                }
                match get(&o.id, s, "recursive") {
                    Some(Ok(v)) if (v - 1.0).abs() < oracle_tol => {}
                    other => eigen_fail.push(format!("{} s={s} truncated: {other:?}", o.id)),
                }
            }
        }
    }
    let mut out = vec![
        Verdict::new("monotonicity", mono_fail.is_empty(), summary(&mono_fail)),
        Verdict::new(
            "oracle_agreement",
            oracle_fail.is_empty(),
            if oracle_fail.is_empty() { format!("max gap {worst_gap:e} < {oracle_tol}") } else { summary(&oracle_fail) },
        ),
    ];
    if sn.observables.iter().any(|o| o.eigenfunction) {
        out.push(Verdict::new("eigenfunctions", eigen_fail.is_empty(), summary(&eigen_fail)));
    }
    for id in &config.identities {
        let rows = t.with("observable", &id.id)?;
        let pick = |m: &str| -> Result<f64, HarnessError> {
            for r in &rows {
                if t.text(r, "method")? == m {
                    return t.num(r, "value")?.ok_or_else(|| HarnessError::Runtime(format!("{m} missing")));
                }
            }
            Err(HarnessError::Runtime(format!("no {m} row for identity {}", id.id)))
        };
        let (lhs, rhs, factor) = (pick("identity-lhs")?, pick("identity-rhs")?, pick("identity-bound-factor")?);
        let tol = cfg_real(&id.tolerance)?;
        let equality = rows.first().map(|r| t.text(r, "status")).transpose()?.unwrap_or("") == "equality";
        let (pass, detail) = if equality {
            ((lhs - rhs).abs() < tol, format!("|{lhs} - {rhs}| < {tol}"))
        } else {
            (lhs <= factor * rhs + tol, format!("{lhs} <= {factor}·{rhs} + {tol}"))
        };
        out.push(Verdict::new(format!("identity_{}", id.id), pass, detail));
    }
    Ok(out)
}

fn missing(a: Option<Result<f64, String>>, b: Option<Result<f64, String>>) -> String {
    [a, b]
        .into_iter()
        .map(|x| match x {
            None => "no row".to_string(),
            Some(Ok(v)) => v.to_string(),
            Some(Err(s)) => s,
        })
        .collect::<Vec<_>>()
        .join(" / ")
}

fn summary(items: &[String]) -> String {
    match items.len() {
        0 => "all hold".into(),
        n => format!("{n} failures; first: {}", items[0]),
    }
}

/// Both sides of the finite-set form are sums of the same products, so
/// only rounding separates them when equality holds.
const PERIODIC_ROUNDOFF: f64 = 1e-12;

fn vdc(t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let mut random = (0usize, 0usize, f64::INFINITY);
    let mut periodic = (0usize, 0usize);
    for r in t.rows {
        let slack = t.num(r, "slack")?.unwrap_or(f64::NAN);
        if t.text(r, "case")?.starts_with("random-") {
            random.0 += 1;
            random.2 = random.2.min(slack);
            if slack >= 0.0 && t.num(r, "outside")? == Some(0.0) {
                random.1 += 1;
            }
        } else {
            periodic.0 += 1;
            if slack >= -PERIODIC_ROUNDOFF {
                periodic.1 += 1;
            }
        }
    }
    let mut out = vec![Verdict::new(
        "random_families",
        random.0 > 0 && random.0 == random.1,
        format!("{}/{} with slack >= 0; min slack {:e}", random.1, random.0, random.2),
    )];
    if periodic.0 > 0 {
        out.push(Verdict::new("periodic_finite_set", periodic.0 == periodic.1, format!("{}/{} hold", periodic.1, periodic.0)));
    }
    Ok(out)
}

fn mean(config: &ExperimentConfig, t: &Rows) -> Result<Vec<Verdict>, HarnessError> {
    let m = config.mean.as_ref().expect("validated");
    let d = column(t, "deviation")?;
    let mut out = Vec::new();
    if let Some(max) = &m.max_final_deviation {
        let max = cfg_real(max)?;
        let last = *d.last().unwrap_or(&f64::NAN);
        out.push(Verdict::new("final_deviation", last < max, format!("{last} < {max}")));
    }
    if m.exact_zero {
        out.push(Verdict::new("exact_zero", d.iter().all(|x| *x == 0.0), format!("{d:?}")));
    }
    if let Some(tol) = &m.monotone_tolerance {
        let tol = cfg_real(tol)?;
        let ok = d.windows(2).all(|w| w[1] <= w[0] + tol);
        out.push(Verdict::new("nonincreasing", ok, format!("within {tol}")));
    }
    Ok(out)
}
