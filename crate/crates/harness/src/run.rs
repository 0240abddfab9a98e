//! Dispatch from a validated config to the owning module.
//!
//! Runners only produce rows; verdicts are then derived from the rows by
//! [`crate::verdict::evaluate`], so a written CSV is enough to recheck them.

use std::time::Instant;

use ergoring_core::averages::{
    counterexample_dependent, mean_ergodic_check, multi_average_fourier, multi_average_grid, vdc_finite_set_check,
    vdc_inequality_check, IndexedFamily,
};
use ergoring_core::equidist::{character_sum, default_threshold};
use ergoring_core::pet::{pet_reduce, pet_reduce_generic, seeded_corpus, PetBudget, PetError, ReductionNode};
use ergoring_core::polynomials::PolySystem;
use ergoring_core::seminorms::{
    linear_seminorm_identity_check, seminorm_closed_form_rotation, seminorm_early_stop, seminorm_truncated,
    SeminormError, SeminormMethod,
};
use ergoring_core::systems::TrigObservable;
use ergoring_core::algebra::Ring;

use crate::config::*;
use crate::verdict::{evaluate, Verdict};
use crate::HarnessError;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the config seed.
    pub seed: Option<u64>,
    /// Record wall time in the summary. Off by default so that result files
    /// stay byte-identical across runs.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRecord {
    pub name: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub verdicts: Vec<Verdict>,
    /// Reduction traces keyed by case id, for pet-trace runs.
    pub trace: Option<serde_json::Value>,
    pub wall_time_ms: Option<u128>,
}

impl ResultRecord {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Shortest round-trip decimal form, so that rows parse back bit-exactly.
/// Negative zero is written as `0`.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

pub fn run_config(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultRecord, HarnessError> {
    let start = Instant::now();
    let seed = match options.seed {
        Some(s) => s,
        None => u64::try_from(int(&config.seed).map_err(HarnessError::Runtime)?)
            .map_err(|_| HarnessError::Validation { line: None, message: "seed must be nonnegative".into() })?,
    };
    let (columns, rows, trace) = match config.kind {
        ExperimentKind::JointErgodicity => joint_ergodicity(config)?,
        ExperimentKind::Counterexample => counterexample(config)?,
        ExperimentKind::Equidistribution => equidistribution(config)?,
        ExperimentKind::PetTrace => pet(config)?,
        ExperimentKind::SeminormTable => seminorm_table(config)?,
        ExperimentKind::VdcCheck => vdc(config, seed)?,
        ExperimentKind::MeanErgodic => mean(config)?,
    };
    let columns: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
    let verdicts = evaluate(config, &columns, &rows)?;
    Ok(ResultRecord {
        name: config.name.clone(),
        kind: config.kind,
        seed,
        columns,
        rows,
        verdicts,
        trace,
        wall_time_ms: options.timing.then(|| start.elapsed().as_millis()),
    })
}

type Table = (&'static [&'static str], Vec<Vec<String>>, Option<serde_json::Value>);

fn v(e: String) -> HarnessError {
    HarnessError::Validation { line: None, message: e }
}

fn system_and_folner(
    config: &ExperimentConfig,
) -> Result<(ergoring_core::systems::RotationSystem, ergoring_core::algebra::FolnerSequence), HarnessError> {
    let sys = build_system(config.system.as_ref().ok_or_else(|| v("missing [system]".into()))?).map_err(v)?;
    let folner =
        build_folner(sys.ring(), config.folner.as_ref().ok_or_else(|| v("missing [folner]".into()))?).map_err(v)?;
    Ok((sys, folner))
}

pub const JOINT_COLUMNS: &[&str] = &["n", "size", "distance"];

fn joint_ergodicity(config: &ExperimentConfig) -> Result<Table, HarnessError> {
    let a = config.average.as_ref().expect("validated");
    let (sys, folner) = system_and_folner(config)?;
    let polys = build_polys(sys.ring(), &a.polys).map_err(v)?;
    let obs = a
        .observables
        .iter()
        .map(|o| build_observable(o, sys.torus_dim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(v)?;
    let grid = match a.method.as_deref() {
        Some("grid") => Some(int(a.grid_points.as_deref().unwrap_or_default()).map_err(v)? as usize),
        _ => None,
    };
    let mut rows = Vec::new();
    for n in schedule(&a.schedule).map_err(v)? {
        let r = match grid {
            Some(points) => multi_average_grid(&sys, &polys, &obs, &folner, n, points)?,
            None => multi_average_fourier(&sys, &polys, &obs, &folner, n)?,
        };
        rows.push(vec![n.to_string(), r.size.to_string(), fmt_f64(r.l2_distance_to_product)]);
    }
    Ok((JOINT_COLUMNS, rows, None))
}

pub const COUNTEREXAMPLE_COLUMNS: &[&str] = &["case", "a", "n", "size", "distance"];

fn counterexample(config: &ExperimentConfig) -> Result<Table, HarnessError> {
    let c = config.counterexample.as_ref().expect("validated");
    let (sys, folner) = system_and_folner(config)?;
    let control = PolySystem::parse(sys.ring(), 1, &["n", "n^2"])?;
    let mut rows = Vec::new();
    for a in &c.multipliers {
        let a = int(a).map_err(v)?;
        for n in schedule(&c.schedule).map_err(v)? {
            let r = counterexample_dependent(&sys, a, &folner, n)?;
            rows.push(vec!["dependent".into(), a.to_string(), n.to_string(), r.size.to_string(), fmt_f64(r.l2_distance_to_product)]);
        }
        let obs = [TrigObservable::exponential(vec![a]), TrigObservable::exponential(vec![-1])];
        for n in schedule(&c.control_schedule).map_err(v)? {
            let r = multi_average_fourier(&sys, &control, &obs, &folner, n)?;
            rows.push(vec!["control".into(), a.to_string(), n.to_string(), r.size.to_string(), fmt_f64(r.l2_distance_to_product)]);
        }
    }
    Ok((COUNTEREXAMPLE_COLUMNS, rows, None))
}

pub const EQUIDIST_COLUMNS: &[&str] = &["spec", "ring", "n", "size", "re", "im", "abs", "threshold"];

fn equidistribution(config: &ExperimentConfig) -> Result<Table, HarnessError> {
    let mut rows = Vec::new();
    for s in &config.specs {
        let spec = build_spec(s).map_err(v)?;
        if s.check_hypotheses {
            spec.check_hypotheses()
                .map_err(|e| v(format!("spec {}: {e}", s.id)))?;
        }
        let fixed = s.threshold.as_deref().map(real).transpose().map_err(v)?;
        for n in schedule(&s.schedule).map_err(v)? {
            let value = character_sum(&spec, n)?;
            let size = spec.folner().size(n)?;
            let threshold = fixed.unwrap_or_else(|| default_threshold(size));
            rows.push(vec![
                s.id.clone(),
                spec.ring().symbol().to_string(),
                n.to_string(),
                size.to_string(),
                fmt_f64(value.re),
                fmt_f64(value.im),
                fmt_f64(value.norm()),
                fmt_f64(threshold),
            ]);
        }
    }
    Ok((EQUIDIST_COLUMNS, rows, None))
}

pub const PET_COLUMNS: &[&str] = &["case", "system", "status", "k", "depth", "nodes", "weights", "edges_decrease", "child"];

fn pet_budget(p: &PetSection) -> Result<PetBudget, HarnessError> {
    let mut budget = PetBudget::default();
    if let Some(d) = &p.max_depth {
        budget.max_depth = int(d).map_err(v)? as usize;
    }
    if let Some(s) = &p.max_size {
        budget.max_size = int(s).map_err(v)? as usize;
    }
    Ok(budget)
}

/// Weights along the first-child path, root first.
fn chain_weights(root: &ReductionNode) -> Vec<String> {
    let mut out = vec![root.weight.to_string()];
    let mut node = root;
    while let Some(c) = node.children.first() {
        out.push(c.weight.to_string());
        node = c;
    }
    out
}

fn pet(config: &ExperimentConfig) -> Result<Table, HarnessError> {
    let p = config.pet.as_ref().expect("validated");
    let ring = ring_of(&p.ring).map_err(v)?;
    let bound = p.degree_bound.as_deref().map(int).transpose().map_err(v)?.map(|b| b as u32);
    let budget = pet_budget(p)?;
    let mut rows = Vec::new();
    let mut traces = serde_json::Map::new();
    for case in &p.cases {
        let polys = build_polys(ring, &case.polys).map_err(v)?;
        let system = case.polys.join("; ");
        match pet_reduce(&polys, bound, budget) {
            Ok(out) => {
                let child = out.trace.children.first().map(|c| c.system.texts().join("; ")).unwrap_or_default();
                rows.push(vec![
                    case.id.clone(),
                    system,
                    "terminated".into(),
                    out.k.to_string(),
                    out.depth.to_string(),
                    out.trace.nodes().len().to_string(),
                    chain_weights(&out.trace).join(" "),
                    out.trace.edges_decrease().to_string(),
                    child,
                ]);
                let json = serde_json::to_value(out.trace.to_trace()).map_err(|e| HarnessError::Runtime(e.to_string()))?;
                traces.insert(case.id.clone(), json);
            }
            Err(PetError::Budget { depth, .. }) => {
                rows.push(vec![case.id.clone(), system, "budget".into(), String::new(), depth.to_string(), String::new(), String::new(), String::new(), String::new()]);
            }
            Err(e) => return Err(v(format!("case {}: {e}", case.id))),
        }
    }
    if let Some(c) = &p.corpus {
        let seed = u64::try_from(int(&c.seed).map_err(v)?).map_err(|_| v("corpus seed must be nonnegative".into()))?;
        let count = int(&c.count).map_err(v)? as usize;
        let systems = seeded_corpus(seed, count, int(&c.max_degree).map_err(v)? as u32, int(&c.max_size).map_err(v)? as usize);
        for (i, sys) in systems.iter().enumerate() {
            let id = format!("corpus-{i:03}");
            let text = sys.polys().iter().map(|q| q.to_string()).collect::<Vec<_>>().join("; ");
            match pet_reduce_generic(sys, None, budget, seed.wrapping_add(i as u64)) {
                Ok(out) => {
                    let ws: Vec<String> = out.weights.iter().map(|w| w.to_string()).collect();
                    rows.push(vec![id, text, "terminated".into(), out.k.to_string(), out.depth.to_string(), out.weights.len().to_string(), ws.join(" "), "true".into(), String::new()]);
                }
                Err(PetError::Budget { depth, .. }) => {
                    rows.push(vec![id, text, "budget".into(), String::new(), depth.to_string(), String::new(), String::new(), String::new(), String::new()]);
                }
                Err(PetError::WeightNotDecreased { parent, child }) => {
                    rows.push(vec![id, text, "weight-not-decreased".into(), String::new(), String::new(), String::new(), format!("{parent} {child}"), "false".into(), String::new()]);
                }
                Err(e) => return Err(HarnessError::Runtime(format!("{id}: {e}"))),
            }
        }
    }
    let trace = (!traces.is_empty()).then_some(serde_json::Value::Object(traces));
    Ok((PET_COLUMNS, rows, trace))
}

/// A one-case pet-trace config for the `pet-trace` subcommand.
pub fn pet_trace_config(name: &str, ring: &str, polys: &[String]) -> Result<ExperimentConfig, HarnessError> {
    let config = ExperimentConfig {
        name: name.into(),
        kind: ExperimentKind::PetTrace,
        description: String::new(),
        tags: vec!["pet".into()],
        seed: "0".into(),
        system: None,
        folner: None,
        average: None,
        counterexample: None,
        specs: Vec::new(),
        pet: Some(PetSection {
            ring: ring.into(),
            degree_bound: None,
            max_depth: None,
            max_size: None,
            cases: vec![PetCase {
                id: "input".into(),
                polys: polys.to_vec(),
                expect_k: None,
                expect_depth: None,
                expect_weights: Vec::new(),
                expect_child: Vec::new(),
            }],
            corpus: None,
        }),
        seminorm: None,
        identities: Vec::new(),
        vdc: None,
        mean: None,
    };
    let text = config.to_toml();
    config.validate(&text)?;
    Ok(config)
}

pub const SEMINORM_COLUMNS: &[&str] = &["observable", "s", "n", "method", "value", "status"];

fn seminorm_table(config: &ExperimentConfig) -> Result<Table, HarnessError> {
    let sn = config.seminorm.as_ref().expect("validated");
    let (sys, folner) = system_and_folner(config)?;
    let n = int(&sn.n).map_err(v)? as u32;
    let orders: Vec<usize> = sn.orders.iter().map(|o| int(o).map(|x| x as usize)).collect::<Result<_, _>>().map_err(v)?;
    let mut rows = Vec::new();
    let push = |rows: &mut Vec<Vec<String>>, id: &str, s: usize, n: String, method: &str, r: Result<f64, SeminormError>| {
        let (value, status) = match r {
            Ok(x) => (fmt_f64(x), "ok".to_string()),
            Err(SeminormError::Integrity(m)) => (String::new(), format!("integrity: {m}")),
            Err(e) => return Err(HarnessError::from(e)),
        };
        rows.push(vec![id.to_string(), s.to_string(), n, method.to_string(), value, status]);
        Ok(())
    };
    for o in &sn.observables {
        let f = build_observable(&o.text, sys.torus_dim()).map_err(v)?;
        for &s in &orders {
            let rec = seminorm_truncated(&sys, &f, s, &[n], &folner).map(|e| e.value);
            push(&mut rows, &o.id, s, n.to_string(), &SeminormMethod::Recursive.to_string(), rec)?;
            let cf = seminorm_closed_form_rotation(&sys, &f, s).map(|e| e.value);
            push(&mut rows, &o.id, s, String::new(), &SeminormMethod::ClosedForm.to_string(), cf)?;
            if (2..=3).contains(&s) {
                let es = seminorm_early_stop(&sys, &f, s, n, &folner).map(|e| e.value);
                push(&mut rows, &o.id, s, n.to_string(), &SeminormMethod::EarlyStop.to_string(), es)?;
            }
        }
    }
    for id in &config.identities {
        let isys = build_system(&id.system).map_err(v)?;
        let ifol = build_folner(isys.ring(), &id.folner).map_err(v)?;
        let f = build_observable(&id.observable, isys.torus_dim()).map_err(v)?;
        let p = build_polys(isys.ring(), std::slice::from_ref(&id.p)).map_err(v)?.polys()[0].clone();
        let k = int(&id.k).map_err(v)? as usize;
        let n = int(&id.n).map_err(v)? as u32;
        let tol = real(&id.tolerance).map_err(v)?;
        let r = linear_seminorm_identity_check(&isys, &f, &p, k, &ifol, n, tol)?;
        let mode = if isys.ring().is_field() { "equality" } else { "bound" };
        for (method, value) in [("identity-lhs", r.lhs), ("identity-rhs", r.rhs), ("identity-bound-factor", r.bound_factor as f64)] {
            rows.push(vec![id.id.clone(), k.to_string(), n.to_string(), method.into(), fmt_f64(value), mode.into()]);
        }
    }
    Ok((SEMINORM_COLUMNS, rows, None))
}

pub const VDC_COLUMNS: &[&str] = &["case", "lhs", "rhs", "remainder", "slack", "outside"];

fn vdc(config: &ExperimentConfig, seed: u64) -> Result<Table, HarnessError> {
    let c = config.vdc.as_ref().expect("validated");
    let count = int(&c.families).map_err(v)? as usize;
    let dim = int(&c.dim).map_err(v)? as usize;
    let (n, m) = (int(&c.n).map_err(v)? as u32, int(&c.m).map_err(v)? as u32);
    let (lo, hi) = (int(&c.lo).map_err(v)?, int(&c.hi).map_err(v)?);
    let zbox = ergoring_core::algebra::FolnerSequence::centered_box(Ring::Integers)?;
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let family = IndexedFamily::random(seed.wrapping_add(i as u64), dim, lo, hi);
        let r = vdc_inequality_check(&family, &zbox, n, m)?;
        rows.push(vec![
            format!("random-{i:04}"),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.remainder),
            fmt_f64(r.slack),
            r.outside_indices.to_string(),
        ]);
    }
    for p in &c.periodic {
        let family = build_periodic(p).map_err(v)?;
        let folner = build_folner(Ring::Integers, &p.folner).map_err(v)?;
        let s: Vec<i64> = p.s.iter().map(|x| int(x)).collect::<Result<_, _>>().map_err(v)?;
        let r = vdc_finite_set_check(&family, &s, &folner, int(&p.n).map_err(v)? as u32)?;
        rows.push(vec![format!("periodic-{}", p.id), fmt_f64(r.lhs), fmt_f64(r.rhs), String::new(), fmt_f64(r.rhs - r.lhs), String::new()]);
    }
    Ok((VDC_COLUMNS, rows, None))
}

pub const MEAN_COLUMNS: &[&str] = &["n", "size", "deviation"];

fn mean(config: &ExperimentConfig) -> Result<Table, HarnessError> {
    let m = config.mean.as_ref().expect("validated");
    let (sys, folner) = system_and_folner(config)?;
    let f = build_observable(&m.observable, sys.torus_dim()).map_err(v)?;
    let mut rows = Vec::new();
    for n in schedule(&m.schedule).map_err(v)? {
        let r = mean_ergodic_check(&sys, &f, &folner, n)?;
        rows.push(vec![n.to_string(), r.size.to_string(), fmt_f64(r.deviation)]);
    }
    Ok((MEAN_COLUMNS, rows, None))
}
