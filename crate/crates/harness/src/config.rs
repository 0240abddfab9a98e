//! Experiment configuration files.
//!
//! Configs are TOML. Every numeric value is written as a decimal string so
//! that no float literal is ever rounded by the reader; see `CONFIG.md` at
//! the crate root for the full grammar.

use serde::{Deserialize, Serialize};

use ergoring_core::algebra::{parse_rational, to_f64, FolnerSequence, Ring, RingElement, DEFAULT_LADDER_CAP};
use ergoring_core::polynomials::PolySystem;
use ergoring_core::systems::{RotationSystem, TrigObservable};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    JointErgodicity,
    Counterexample,
    Equidistribution,
    PetTrace,
    SeminormTable,
    VdcCheck,
    MeanErgodic,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::JointErgodicity => "joint-ergodicity",
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::Equidistribution => "equidistribution",
            ExperimentKind::PetTrace => "pet-trace",
            ExperimentKind::SeminormTable => "seminorm-table",
            ExperimentKind::VdcCheck => "vdc-check",
            ExperimentKind::MeanErgodic => "mean-ergodic",
        }
    }

    /// The section a config of this kind must carry.
    fn section(self) -> &'static str {
        match self {
            ExperimentKind::JointErgodicity => "average",
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::Equidistribution => "spec",
            ExperimentKind::PetTrace => "pet",
            ExperimentKind::SeminormTable => "seminorm",
            ExperimentKind::VdcCheck => "vdc",
            ExperimentKind::MeanErgodic => "mean",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folner: Option<FolnerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average: Option<AverageSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSection>,
    #[serde(default, rename = "spec", skip_serializing_if = "Vec::is_empty")]
    pub specs: Vec<SpecSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pet: Option<PetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seminorm: Option<SeminormSection>,
    #[serde(default, rename = "identity", skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vdc: Option<VdcSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<MeanSection>,
}

fn default_seed() -> String {
    "0".into()
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A rotation `T_r x = x + φ(r)`; one row of frequency literals per torus
/// coordinate, one literal per ring coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub ring: String,
    pub phi: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FolnerSection {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder_cap: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AverageSection {
    pub polys: Vec<String>,
    pub observables: Vec<String>,
    pub schedule: Vec<String>,
    /// `fourier` (default) or `grid`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<String>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub assert_independent: bool,
    pub max_final_distance: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub strictly_decreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleSection {
    pub multipliers: Vec<String>,
    pub schedule: Vec<String>,
    pub exact_tolerance: String,
    pub control_schedule: Vec<String>,
    pub control_threshold: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSection {
    pub id: String,
    pub ring: String,
    pub characters: Vec<Vec<String>>,
    pub polys: Vec<String>,
    pub folner: FolnerSection,
    pub schedule: Vec<String>,
    /// Fixed threshold; `max(0.05, 8/√|Φ_N|)` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    /// `decay` (default) or `one` for the trivial-character control.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub check_hypotheses: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PetSection {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<String>,
    #[serde(default, rename = "case", skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<PetCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PetCorpus>,
}

/// A seeded random corpus run with concrete random shifts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PetCorpus {
    pub seed: String,
    pub count: String,
    pub max_degree: String,
    pub max_size: String,
    /// Every system must terminate with a chain shorter than this.
    pub max_trace_depth: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PetCase {
    pub id: String,
    pub polys: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_depth: Option<String>,
    /// Golden weights root to leaf, e.g. `"(1,1)"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect_weights: Vec<String>,
    /// Golden texts of the first child system.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect_child: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormSection {
    pub orders: Vec<String>,
    pub n: String,
    pub monotonicity_tolerance: String,
    pub oracle_tolerance: String,
    #[serde(rename = "observable")]
    pub observables: Vec<SeminormObservable>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormObservable {
    pub id: String,
    pub text: String,
    /// A modulus-one eigenfunction, whose seminorms must equal 1 for s ≥ 2.
    #[serde(default, skip_serializing_if = "is_false")]
    pub eigenfunction: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySection {
    pub id: String,
    pub system: SystemSection,
    pub folner: FolnerSection,
    pub observable: String,
    pub p: String,
    pub k: String,
    pub n: String,
    pub tolerance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VdcSection {
    pub families: String,
    pub dim: String,
    pub n: String,
    pub m: String,
    /// Window `[lo, hi]` carrying the random families.
    pub lo: String,
    pub hi: String,
    #[serde(default, rename = "periodic", skip_serializing_if = "Vec::is_empty")]
    pub periodic: Vec<PeriodicCase>,
}

/// `x_j = e(phase_j)·vector` for `j` in one period, extended periodically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicCase {
    pub id: String,
    pub vector: Vec<String>,
    pub phases: Vec<String>,
    pub s: Vec<String>,
    pub folner: FolnerSection,
    pub n: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanSection {
    pub observable: String,
    pub schedule: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_final_deviation: Option<String>,
    /// Every deviation must be exactly zero.
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact_zero: bool,
    /// Allowed increase between consecutive deviations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotone_tolerance: Option<String>,
}

/// First line (one-based) mentioning `key`, for error messages.
pub fn line_of(source: &str, key: &str) -> Option<usize> {
    source.lines().position(|l| l.contains(key)).map(|i| i + 1)
}

fn invalid(source: &str, key: &str, message: String) -> HarnessError {
    HarnessError::Validation { line: line_of(source, key), message }
}

impl ExperimentConfig {
    /// Parse and validate TOML text.
    pub fn parse(source: &str) -> Result<Self, HarnessError> {
        let config: ExperimentConfig = toml::from_str(source).map_err(|e| {
            let line = e.span().map(|s| source[..s.start].matches('\n').count() + 1);
            HarnessError::Parse { line, message: e.message().to_string() }
        })?;
        config.validate(source)?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialise")
    }

    /// Build every declared object once so that errors surface before any
    /// experiment starts.
    pub fn validate(&self, source: &str) -> Result<(), HarnessError> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(invalid(source, "name", format!("name `{}` must be nonempty [A-Za-z0-9_-]", self.name)));
        }
        int(&self.seed).map_err(|e| invalid(source, "seed", e))?;
        let present = match self.kind {
            ExperimentKind::JointErgodicity => self.average.is_some(),
            ExperimentKind::Counterexample => self.counterexample.is_some(),
            ExperimentKind::Equidistribution => !self.specs.is_empty(),
            ExperimentKind::PetTrace => self.pet.is_some(),
            ExperimentKind::SeminormTable => self.seminorm.is_some(),
            ExperimentKind::VdcCheck => self.vdc.is_some(),
            ExperimentKind::MeanErgodic => self.mean.is_some(),
        };
        if !present {
            return Err(invalid(
                source,
                "kind",
                format!("kind `{}` needs a [{}] section", self.kind.as_str(), self.kind.section()),
            ));
        }
        let needs_system = matches!(
            self.kind,
            ExperimentKind::JointErgodicity
                | ExperimentKind::Counterexample
                | ExperimentKind::SeminormTable
                | ExperimentKind::MeanErgodic
        );
        if needs_system {
            let sys = self.system.as_ref().ok_or_else(|| invalid(source, "kind", "missing [system]".into()))?;
            let sys = build_system(sys).map_err(|e| invalid(source, "[system]", e))?;
            let folner = self.folner.as_ref().ok_or_else(|| invalid(source, "kind", "missing [folner]".into()))?;
            let folner = build_folner(sys.ring(), folner).map_err(|e| invalid(source, "[folner]", e))?;
            let _ = folner;
        }
        match self.kind {
            ExperimentKind::JointErgodicity => {
                let a = self.average.as_ref().expect("checked");
                let ring = self.system.as_ref().map(|s| ring_of(&s.ring)).transpose().map_err(|e| invalid(source, "ring", e))?;
                let ring = ring.expect("checked");
                let polys = build_polys(ring, &a.polys).map_err(|e| invalid(source, "polys", e))?;
                if a.observables.len() != polys.len() {
                    return Err(invalid(source, "observables", "one observable per polynomial".into()));
                }
                for o in &a.observables {
                    build_observable(o, self.system.as_ref().expect("checked").phi.len())
                        .map_err(|e| invalid(source, "observables", e))?;
                }
                schedule(&a.schedule).map_err(|e| invalid(source, "schedule", e))?;
                real(&a.max_final_distance).map_err(|e| invalid(source, "max_final_distance", e))?;
                if let Some(m) = &a.method {
                    if m != "fourier" && m != "grid" {
                        return Err(invalid(source, "method", format!("method `{m}` is not fourier or grid")));
                    }
                    if m == "grid" && a.grid_points.is_none() {
                        return Err(invalid(source, "method", "the grid method needs grid_points".into()));
                    }
                }
                if let Some(g) = &a.grid_points {
                    int(g).map_err(|e| invalid(source, "grid_points", e))?;
                }
                if a.assert_independent {
                    let ind = ergoring_core::polynomials::is_independent(&polys)
                        .map_err(|e| invalid(source, "polys", e.to_string()))?;
                    if !ind.independent {
                        let w: Vec<String> =
                            ind.witness.unwrap_or_default().iter().map(|x| x.to_string()).collect();
                        return Err(invalid(
                            source,
                            "polys",
                            format!(
                                "polynomials asserted independent are dependent: coefficients ({}) give a constant",
                                w.join(", ")
                            ),
                        ));
                    }
                }
            }
            ExperimentKind::Counterexample => {
                let c = self.counterexample.as_ref().expect("checked");
                for a in &c.multipliers {
                    let a = int(a).map_err(|e| invalid(source, "multipliers", e))?;
                    if a < 2 {
                        return Err(invalid(source, "multipliers", format!("multiplier {a} must be at least 2")));
                    }
                }
                schedule(&c.schedule).map_err(|e| invalid(source, "schedule", e))?;
                schedule(&c.control_schedule).map_err(|e| invalid(source, "control_schedule", e))?;
                real(&c.exact_tolerance).map_err(|e| invalid(source, "exact_tolerance", e))?;
                real(&c.control_threshold).map_err(|e| invalid(source, "control_threshold", e))?;
            }
            ExperimentKind::Equidistribution => {
                for s in &self.specs {
                    let key = format!("\"{}\"", s.id);
                    build_spec(s).map_err(|e| invalid(source, &key, format!("spec {}: {e}", s.id)))?;
                    schedule(&s.schedule).map_err(|e| invalid(source, &key, e))?;
                    if let Some(t) = &s.threshold {
                        real(t).map_err(|e| invalid(source, &key, e))?;
                    }
                    match s.expect.as_deref() {
                        None | Some("decay") | Some("one") => {}
                        Some(x) => return Err(invalid(source, &key, format!("expect `{x}` is not decay or one"))),
                    }
                }
            }
            ExperimentKind::PetTrace => {
                let p = self.pet.as_ref().expect("checked");
                let ring = ring_of(&p.ring).map_err(|e| invalid(source, "ring", e))?;
                for opt in [&p.degree_bound, &p.max_depth, &p.max_size].into_iter().flatten() {
                    int(opt).map_err(|e| invalid(source, "[pet]", e))?;
                }
                if p.cases.is_empty() && p.corpus.is_none() {
                    return Err(invalid(source, "[pet]", "at least one [[pet.case]] or a [pet.corpus] is required".into()));
                }
                if let Some(c) = &p.corpus {
                    for x in [&c.seed, &c.count, &c.max_degree, &c.max_size, &c.max_trace_depth] {
                        if int(x).map_err(|e| invalid(source, "[pet.corpus]", e))? < 0 {
                            return Err(invalid(source, "[pet.corpus]", format!("`{x}` must be nonnegative")));
                        }
                    }
                }
                for c in &p.cases {
                    let key = format!("\"{}\"", c.id);
                    build_polys(ring, &c.polys).map_err(|e| invalid(source, &key, e))?;
                    for v in [&c.expect_k, &c.expect_depth].into_iter().flatten() {
                        int(v).map_err(|e| invalid(source, &key, e))?;
                    }
                }
            }
            ExperimentKind::SeminormTable => {
                let s = self.seminorm.as_ref().expect("checked");
                let dim = self.system.as_ref().expect("checked").phi.len();
                for o in &s.orders {
                    let v = int(o).map_err(|e| invalid(source, "orders", e))?;
                    if !(1..=5).contains(&v) {
                        return Err(invalid(source, "orders", format!("order {v} outside 1..=5")));
                    }
                }
                int(&s.n).map_err(|e| invalid(source, "n =", e))?;
                real(&s.monotonicity_tolerance).map_err(|e| invalid(source, "monotonicity_tolerance", e))?;
                real(&s.oracle_tolerance).map_err(|e| invalid(source, "oracle_tolerance", e))?;
                for o in &s.observables {
                    build_observable(&o.text, dim).map_err(|e| invalid(source, &o.id, e))?;
                }
                for id in &self.identities {
                    let key = format!("\"{}\"", id.id);
                    let sys = build_system(&id.system).map_err(|e| invalid(source, &key, e))?;
                    build_folner(sys.ring(), &id.folner).map_err(|e| invalid(source, &key, e))?;
                    build_observable(&id.observable, sys.torus_dim()).map_err(|e| invalid(source, &key, e))?;
                    build_polys(sys.ring(), std::slice::from_ref(&id.p)).map_err(|e| invalid(source, &key, e))?;
                    for v in [&id.k, &id.n] {
                        int(v).map_err(|e| invalid(source, &key, e))?;
                    }
                    real(&id.tolerance).map_err(|e| invalid(source, &key, e))?;
                }
            }
            ExperimentKind::VdcCheck => {
                let v = self.vdc.as_ref().expect("checked");
                for x in [&v.families, &v.dim, &v.n, &v.m, &v.lo, &v.hi] {
                    int(x).map_err(|e| invalid(source, "[vdc]", e))?;
                }
                for p in &v.periodic {
                    let key = format!("\"{}\"", p.id);
                    build_periodic(p).map_err(|e| invalid(source, &key, e))?;
                    build_folner(Ring::Integers, &p.folner).map_err(|e| invalid(source, &key, e))?;
                    int(&p.n).map_err(|e| invalid(source, &key, e))?;
                    for s in &p.s {
                        int(s).map_err(|e| invalid(source, &key, e))?;
                    }
                }
            }
            ExperimentKind::MeanErgodic => {
                let m = self.mean.as_ref().expect("checked");
                let dim = self.system.as_ref().expect("checked").phi.len();
                build_observable(&m.observable, dim).map_err(|e| invalid(source, "observable", e))?;
                schedule(&m.schedule).map_err(|e| invalid(source, "schedule", e))?;
                for x in [&m.max_final_deviation, &m.monotone_tolerance].into_iter().flatten() {
                    real(x).map_err(|e| invalid(source, "[mean]", e))?;
                }
            }
        }
        Ok(())
    }
}

pub fn int(s: &str) -> Result<i64, String> {
    s.trim().parse::<i64>().map_err(|_| format!("`{s}` is not an integer"))
}

pub fn real(s: &str) -> Result<f64, String> {
    parse_rational(s).map(|q| to_f64(&q)).map_err(|e| e.to_string())
}

pub fn schedule(items: &[String]) -> Result<Vec<u32>, String> {
    if items.is_empty() {
        return Err("schedule must be nonempty".into());
    }
    items
        .iter()
        .map(|s| match int(s)? {
            n if n >= 1 && n <= i64::from(u32::MAX) => Ok(n as u32),
            n => Err(format!("Følner index {n} must be positive")),
        })
        .collect()
}

pub fn ring_of(s: &str) -> Result<Ring, String> {
    Ring::parse(s).ok_or_else(|| format!("unknown ring `{s}`; use Z, Z[i] or Q"))
}

pub fn build_system(s: &SystemSection) -> Result<RotationSystem, String> {
    let ring = ring_of(&s.ring)?;
    let rows: Vec<Vec<&str>> = s.phi.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    RotationSystem::parse(ring, &rows).map_err(|e| e.to_string())
}

pub fn build_folner(ring: Ring, f: &FolnerSection) -> Result<FolnerSequence, String> {
    let element = |s: &Option<String>, what: &str| -> Result<RingElement, String> {
        let s = s.as_ref().ok_or_else(|| format!("shifted-box needs `{what}`"))?;
        RingElement::parse(ring, s).map_err(|e| e.to_string())
    };
    let seq = match f.family.as_str() {
        "centered-box" => FolnerSequence::centered_box(ring),
        "half-open-box" => FolnerSequence::half_open_box(ring),
        "rational-ladder" if ring == Ring::Rationals => Ok(FolnerSequence::rational_ladder()),
        "periodic-ladder" if ring == Ring::Rationals => Ok(FolnerSequence::periodic_ladder()),
        "rational-ladder" | "periodic-ladder" => return Err(format!("{} is only defined on Q", f.family)),
        "shifted-box" => FolnerSequence::shifted_box(element(&f.base, "base")?, element(&f.drift, "drift")?),
        other => {
            return Err(format!(
                "unknown Følner family `{other}`; use centered-box, half-open-box, shifted-box, rational-ladder or periodic-ladder"
            ))
        }
    }
    .map_err(|e| e.to_string())?;
    let cap = match &f.ladder_cap {
        Some(c) => u32::try_from(int(c)?).map_err(|_| format!("ladder cap `{c}` out of range"))?,
        None => DEFAULT_LADDER_CAP,
    };
    Ok(seq.with_ladder_cap(cap))
}

pub fn build_polys(ring: Ring, texts: &[String]) -> Result<PolySystem, String> {
    let texts: Vec<&str> = texts.iter().map(String::as_str).collect();
    PolySystem::parse(ring, 1, &texts).map_err(|e| e.to_string())
}

pub fn build_observable(text: &str, dim: usize) -> Result<TrigObservable, String> {
    TrigObservable::parse(text, dim).map_err(|e| e.to_string())
}

pub fn build_spec(s: &SpecSection) -> Result<ergoring_core::equidist::CharacterSumSpec, String> {
    use ergoring_core::algebra::Character;
    let ring = ring_of(&s.ring)?;
    let chars = s
        .characters
        .iter()
        .map(|c| {
            let lits: Vec<&str> = c.iter().map(String::as_str).collect();
            Character::parse(ring, &lits).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let polys = build_polys(ring, &s.polys)?;
    let folner = build_folner(ring, &s.folner)?;
    ergoring_core::equidist::CharacterSumSpec::new(chars, polys, folner).map_err(|e| e.to_string())
}

pub fn build_periodic(p: &PeriodicCase) -> Result<ergoring_core::averages::PeriodicFamily, String> {
    let v = p
        .vector
        .iter()
        .map(|c| ergoring_core::systems::parse_complex(c).ok_or_else(|| format!("bad complex literal `{c}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let period = p
        .phases
        .iter()
        .map(|t| {
            let u = ergoring_core::algebra::unit(&parse_rational(t).map_err(|e| e.to_string())?);
            Ok(v.iter().map(|c| c * u).collect())
        })
        .collect::<Result<Vec<_>, String>>()?;
    ergoring_core::averages::PeriodicFamily::new(v.len(), period).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MEAN: &str = r#"
name = "m"
kind = "mean-ergodic"

[system]
ring = "Z"
phi = [["sqrt(2)-1"]]

[folner]
family = "centered-box"

[mean]
observable = "e(1)"
schedule = ["10"]
"#;

    #[test]
    fn parses_and_defaults() {
        let c = ExperimentConfig::parse(MEAN).unwrap();
        assert_eq!(c.kind, ExperimentKind::MeanErgodic);
        assert_eq!(c.seed, "0");
        assert!(c.tags.is_empty());
    }

    #[test]
    fn ladders_need_the_rationals() {
        let bad = MEAN.replace("centered-box", "rational-ladder");
        let err = ExperimentConfig::parse(&bad).unwrap_err().to_string();
        assert!(err.contains("only defined on Q") && err.contains("line"), "{err}");
    }

    #[test]
    fn missing_section_is_reported() {
        let bad = MEAN.replace("[mean]", "[other]");
        assert!(matches!(ExperimentConfig::parse(&bad), Err(HarnessError::Parse { .. })));
        let cut = &MEAN[..MEAN.find("[mean]").unwrap()];
        let err = ExperimentConfig::parse(cut).unwrap_err().to_string();
        assert!(err.contains("needs a [mean] section"), "{err}");
    }

    #[test]
    fn numbers_must_be_strings() {
        let bad = MEAN.replace("schedule = [\"10\"]", "schedule = [10]");
        assert!(matches!(ExperimentConfig::parse(&bad), Err(HarnessError::Parse { line: Some(14), .. })));
    }

    #[test]
    fn schedule_entries_are_positive() {
        assert!(schedule(&["0".into()]).is_err());
        assert!(schedule(&[]).is_err());
        assert_eq!(schedule(&["3".into(), " 4 ".into()]).unwrap(), vec![3, 4]);
    }

    #[test]
    fn line_lookup() {
        assert_eq!(line_of("a\nb = 1\nc", "b ="), Some(2));
        assert_eq!(line_of("a", "zzz"), None);
    }
}
