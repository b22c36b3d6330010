//! Persistent pipeline state. A session holds the input, the options and
//! every exact intermediate result, so an interrupted run resumes where it
//! stopped and a finished run replays without recomputation.

use std::path::Path;

use picard_core::pointcount::{DEFAULT_MAX_POINTS, DEFAULT_PRIMES};
use serde::{Deserialize, Serialize};

use crate::codec::{DivisorSetData, Result};
use crate::input::{ExtraDivisor, SurfaceDoc};
use crate::report::{ProvenanceData, Report};
use crate::KitError;

pub const SESSION_VERSION: &str = "picard-session/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_override: Option<u32>,
    pub primes: Vec<u64>,
    pub max_n: u32,
    pub max_points: u64,
    /// Overrides the limit in the surface document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
    /// Largest degree over Q of any field the run may construct.
    pub field_cap: usize,
    /// Reduction steps for the first conic search; doubled on each retry.
    pub conic_steps: u64,
    pub conic_max_steps: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tau_override: None,
            primes: DEFAULT_PRIMES.to_vec(),
            max_n: 11,
            max_points: DEFAULT_MAX_POINTS,
            time_limit_secs: None,
            field_cap: 16,
            conic_steps: 250_000,
            conic_max_steps: 1_000_000,
        }
    }
}

impl Options {
    fn step_one_key(&self) -> (Option<u32>, &[u64], u32, u64) {
        (self.tau_override, &self.primes, self.max_n, self.max_points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateData {
    pub sign: i8,
    pub coeffs: Vec<String>,
    pub tate_count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCounts {
    pub p: u64,
    /// `#X(F_{p^n})` for `n = 1, 2, ...`.
    pub counts: Vec<u64>,
    pub finished: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<CandidateData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOne {
    pub primes: Vec<PrimeCounts>,
    pub done: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelPezzoData {
    pub variables: Vec<usize>,
    pub lower_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepTwo {
    pub set: DivisorSetData,
    pub lines_done: bool,
    pub lines_completed: bool,
    pub del_pezzo_done: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub del_pezzo: Option<DelPezzoData>,
    pub user_done: bool,
    /// Step budget of the next conic search.
    pub conic_budget: u64,
    pub conics_completed: bool,
    pub conics_given_up: bool,
    pub notes: Vec<String>,
    pub rejected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairData {
    Exact { value: i64 },
    Constrained { candidates: Vec<i64> },
    Failed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedPair {
    pub a: String,
    pub b: String,
    pub value: PairData,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepThree {
    /// Every pair computed so far, keyed by labels with `a < b`.
    pub pairs: Vec<CachedPair>,
    /// Labels of the classes entering the current Gram matrix.
    pub used: Vec<String>,
    pub generator_gram: Vec<Vec<i64>>,
    pub rank: usize,
}

impl StepThree {
    pub fn lookup(&self, a: &str, b: &str) -> Option<&PairData> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.pairs.binary_search_by(|p| (p.a.as_str(), p.b.as_str()).cmp(&(a, b))).ok().map(|i| &self.pairs[i].value)
    }

    pub fn store(&mut self, a: &str, b: &str, value: PairData) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        match self.pairs.binary_search_by(|p| (p.a.as_str(), p.b.as_str()).cmp(&(a, b))) {
            Ok(i) => self.pairs[i].value = value,
            Err(i) => self.pairs.insert(i, CachedPair { a: a.into(), b: b.into(), value }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub step: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub version: String,
    pub surface: SurfaceDoc,
    pub options: Options,
    #[serde(default)]
    pub extra: Vec<ExtraDivisor>,
    pub step_one: StepOne,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_two: Option<StepTwo>,
    #[serde(default)]
    pub step_three: StepThree,
    /// Wall-clock seconds spent in earlier runs.
    pub elapsed_secs: f64,
    pub events: Vec<Event>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Report>,
}

impl Session {
    pub fn new(surface: SurfaceDoc, options: Options, extra: Vec<ExtraDivisor>) -> Self {
        Session {
            version: SESSION_VERSION.to_string(),
            surface,
            options,
            extra,
            step_one: StepOne::default(),
            step_two: None,
            step_three: StepThree::default(),
            elapsed_secs: 0.0,
            events: Vec::new(),
            outcome: None,
        }
    }

    pub fn log(&mut self, step: &str, message: impl Into<String>) {
        let seq = self.events.len() as u64;
        self.events.push(Event { seq, step: step.to_string(), message: message.into() });
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    /// Applies new options. Exact results stay; Step I is reopened when its
    /// inputs change, and a stored outcome is dropped unless nothing changed.
    pub fn update_options(&mut self, options: Options) {
        if options == self.options {
            return;
        }
        if options.step_one_key() != self.options.step_one_key() {
            self.step_one.done = false;
            self.step_one.tau = None;
            self.step_one.provenance = None;
            for p in &mut self.step_one.primes {
                p.finished = false;
            }
        }
        if let Some(s2) = &mut self.step_two {
            if options.conic_max_steps > self.options.conic_max_steps && s2.conics_given_up {
                s2.conics_given_up = false;
            }
        }
        self.options = options;
        self.outcome = None;
        self.log("session", "options changed");
    }

    /// Adds user divisors not already present.
    pub fn add_extra(&mut self, extra: Vec<ExtraDivisor>) {
        let mut changed = false;
        for e in extra {
            if !self.extra.contains(&e) {
                self.extra.push(e);
                changed = true;
            }
        }
        if changed {
            if let Some(s2) = &mut self.step_two {
                s2.user_done = false;
            }
            self.outcome = None;
            self.log("session", "user divisors added");
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("session is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| KitError::Format(format!("session: {e}")))?;
        let found = v.get("version").and_then(|x| x.as_str()).unwrap_or("").to_string();
        if found != SESSION_VERSION {
            return Err(KitError::Version { found, expected: SESSION_VERSION.to_string() });
        }
        serde_json::from_value(v).map_err(|e| KitError::Format(format!("session: {e}")))
    }
}

pub fn save_session(s: &Session, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, s.to_json()).map_err(|e| KitError::Io(tmp.display().to_string(), e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| KitError::Io(path.display().to_string(), e.to_string()))
}

pub fn load_session(path: &Path) -> Result<Session> {
    let text = std::fs::read_to_string(path).map_err(|e| KitError::Io(path.display().to_string(), e.to_string()))?;
    Session::from_json(&text)
}
