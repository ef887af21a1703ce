//! Scenario files: one JSON document listing the deals to price.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "deals": [
//!     { "id": "t1-theta2", "c": 100, "t": 1, "delta": 0.5, "r_a": 0.2, "r_b": 0.2,
//!       "lambda_a": 0.1, "lambda_b": 0.1, "theta": 2 }
//!   ],
//!   "mc": { "n_paths": 1000000, "seed": 42, "worker_count": 8 }
//! }
//! ```
//!
//! Every deal carries exactly one of `theta` or `kendall_tau`. Validation
//! collects every problem in the file, each tagged with its line, column and
//! JSON path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde_json::value::RawValue;

use crate::dependence::{GumbelDependence, MarginalIntensity};
use crate::error::FactoringError;
use crate::montecarlo::McConfig;
use crate::pricing::DealTerms;

pub const SCHEMA_VERSION: &str = "1";

const DEAL_FIELDS: [&str; 10] = [
    "id",
    "c",
    "t",
    "delta",
    "r_a",
    "r_b",
    "lambda_a",
    "lambda_b",
    "theta",
    "kendall_tau",
];
const MC_FIELDS: [&str; 4] = ["n_paths", "seed", "worker_count", "confidence_sigmas"];

/// How a deal specified its dependence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DependenceInput {
    Theta(f64),
    KendallTau(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deal {
    pub id: String,
    pub terms: DealTerms,
    pub lambda_a: MarginalIntensity,
    pub lambda_b: MarginalIntensity,
    pub dependence: GumbelDependence,
    pub dependence_input: DependenceInput,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct McOverrides {
    pub n_paths: Option<u64>,
    pub seed: Option<u64>,
    pub worker_count: Option<u32>,
    pub confidence_sigmas: Option<f64>,
}

impl McOverrides {
    pub fn apply(&self, mut cfg: McConfig) -> McConfig {
        if let Some(n) = self.n_paths {
            cfg.n_paths = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(w) = self.worker_count {
            cfg.worker_count = w;
        }
        if let Some(k) = self.confidence_sigmas {
            cfg.confidence_sigmas = k;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub schema_version: String,
    pub deals: Vec<Deal>,
    pub mc: McOverrides,
}

/// One validation problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub line: usize,
    pub column: usize,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.path, self.message)
    }
}

/// All problems found in a scenario file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioErrors(pub Vec<Issue>);

impl fmt::Display for ScenarioErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ScenarioErrors {}

struct Ctx<'a> {
    text: &'a str,
    issues: Vec<Issue>,
}

impl<'a> Ctx<'a> {
    fn position(&self, raw: &RawValue) -> (usize, usize) {
        let offset = (raw.get().as_ptr() as usize).saturating_sub(self.text.as_ptr() as usize);
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, column)
    }

    fn push(&mut self, at: &RawValue, path: impl Into<String>, message: impl Into<String>) {
        let (line, column) = self.position(at);
        self.issues.push(Issue {
            line,
            column,
            path: path.into(),
            message: message.into(),
        });
    }

    fn object(&mut self, raw: &'a RawValue, path: &str) -> Option<BTreeMap<String, &'a RawValue>> {
        match serde_json::from_str::<BTreeMap<String, &'a RawValue>>(raw.get()) {
            Ok(map) => Some(map),
            Err(_) => {
                self.push(raw, path, "expected an object");
                None
            }
        }
    }

    fn number(&mut self, raw: &RawValue, path: &str) -> Option<f64> {
        match serde_json::from_str::<f64>(raw.get()) {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.push(raw, path, format!("expected a finite number, got {}", raw.get()));
                None
            }
        }
    }

    fn unsigned(&mut self, raw: &RawValue, path: &str) -> Option<u64> {
        match serde_json::from_str::<u64>(raw.get()) {
            Ok(v) => Some(v),
            Err(_) => {
                self.push(raw, path, format!("expected a non-negative integer, got {}", raw.get()));
                None
            }
        }
    }

    fn unknown_keys(&mut self, map: &BTreeMap<String, &'a RawValue>, allowed: &[&str], path: &str) {
        for (key, raw) in map {
            if !allowed.contains(&key.as_str()) {
                self.push(raw, format!("{path}.{key}"), "unknown field");
            }
        }
    }
}

fn domain_message(err: FactoringError) -> String {
    match err {
        FactoringError::Domain { value, constraint, .. } => format!("{constraint} (got {value})"),
        other => other.to_string(),
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioErrors> {
    let top: BTreeMap<String, &RawValue> = match serde_json::from_str(text) {
        Ok(top) => top,
        Err(e) => {
            return Err(ScenarioErrors(vec![Issue {
                line: e.line(),
                column: e.column(),
                path: "$".into(),
                message: format!("not a JSON object: {e}"),
            }]))
        }
    };
    let mut ctx = Ctx {
        text,
        issues: Vec::new(),
    };
    ctx.unknown_keys(&top, &["schema_version", "deals", "mc"], "$");

    let schema_version = match top.get("schema_version") {
        Some(raw) => match serde_json::from_str::<String>(raw.get()) {
            Ok(v) if v == SCHEMA_VERSION => v,
            Ok(v) => {
                ctx.push(
                    raw,
                    "$.schema_version",
                    format!("unsupported schema version {v:?}, expected {SCHEMA_VERSION:?}"),
                );
                v
            }
            Err(_) => {
                ctx.push(raw, "$.schema_version", "expected a string");
                String::new()
            }
        },
        None => {
            ctx.issues.push(Issue {
                line: 1,
                column: 1,
                path: "$.schema_version".into(),
                message: "missing field".into(),
            });
            String::new()
        }
    };

    let mut deals = Vec::new();
    match top.get("deals") {
        Some(raw) => match serde_json::from_str::<Vec<&RawValue>>(raw.get()) {
            Ok(items) => {
                if items.is_empty() {
                    ctx.push(raw, "$.deals", "at least one deal is required");
                }
                let mut seen = BTreeSet::new();
                for (i, item) in items.into_iter().enumerate() {
                    let path = format!("$.deals[{i}]");
                    if let Some(deal) = parse_deal(&mut ctx, item, &path, &mut seen) {
                        deals.push(deal);
                    }
                }
            }
            Err(_) => ctx.push(raw, "$.deals", "expected an array of deals"),
        },
        None => ctx.issues.push(Issue {
            line: 1,
            column: 1,
            path: "$.deals".into(),
            message: "missing field".into(),
        }),
    }

    let mc = match top.get("mc") {
        Some(raw) => parse_mc(&mut ctx, raw),
        None => McOverrides::default(),
    };

    if ctx.issues.is_empty() {
        Ok(Scenario {
            schema_version,
            deals,
            mc,
        })
    } else {
        ctx.issues.sort_by_key(|i| (i.line, i.column));
        Err(ScenarioErrors(ctx.issues))
    }
}

fn parse_deal<'a>(ctx: &mut Ctx<'a>, raw: &'a RawValue, path: &str, seen: &mut BTreeSet<String>) -> Option<Deal> {
    let map = ctx.object(raw, path)?;
    ctx.unknown_keys(&map, &DEAL_FIELDS, path);
    let before = ctx.issues.len();

    let id = match map.get("id") {
        Some(v) => match serde_json::from_str::<String>(v.get()) {
            Ok(s) if !s.is_empty() => {
                if !seen.insert(s.clone()) {
                    ctx.push(v, format!("{path}.id"), format!("duplicate deal id {s:?}"));
                }
                Some(s)
            }
            _ => {
                ctx.push(v, format!("{path}.id"), "expected a non-empty string");
                None
            }
        },
        None => {
            ctx.push(raw, format!("{path}.id"), "missing field");
            None
        }
    };

    let num = |ctx: &mut Ctx<'a>, key: &str| -> Option<(f64, &'a RawValue)> {
        match map.get(key) {
            Some(v) => ctx.number(v, &format!("{path}.{key}")).map(|x| (x, *v)),
            None => {
                if key != "theta" && key != "kendall_tau" {
                    ctx.push(raw, format!("{path}.{key}"), "missing field");
                }
                None
            }
        }
    };
    let c = num(ctx, "c");
    let t = num(ctx, "t");
    let delta = num(ctx, "delta");
    let r_a = num(ctx, "r_a");
    let r_b = num(ctx, "r_b");
    let lambda_a = num(ctx, "lambda_a");
    let lambda_b = num(ctx, "lambda_b");
    let theta = num(ctx, "theta");
    let kendall = num(ctx, "kendall_tau");

    // field-level range checks, each reported at its own location
    let range = |ctx: &mut Ctx<'a>, key: &str, field: Option<(f64, &'a RawValue)>, ok: fn(f64) -> bool, msg: &str| {
        if let Some((v, at)) = field {
            if !ok(v) {
                ctx.push(at, format!("{path}.{key}"), format!("{msg} (got {v})"));
            }
        }
    };
    range(ctx, "c", c, |v| v > 0.0, "must be > 0");
    range(ctx, "t", t, |v| v > 0.0, "must be > 0");
    range(ctx, "delta", delta, |v| v >= 0.0, "must be >= 0");
    range(ctx, "r_a", r_a, |v| (0.0..1.0).contains(&v), "must lie in [0, 1)");
    range(ctx, "r_b", r_b, |v| (0.0..=1.0).contains(&v), "must lie in [0, 1]");
    range(ctx, "lambda_a", lambda_a, |v| v >= 0.0, "must be >= 0");
    range(ctx, "lambda_b", lambda_b, |v| v >= 0.0, "must be >= 0");

    let dependence = match (theta, kendall) {
        (Some(_), Some((_, at))) => {
            ctx.push(
                at,
                format!("{path}.kendall_tau"),
                "theta and kendall_tau are mutually exclusive",
            );
            None
        }
        (None, None) => {
            if !map.contains_key("theta") && !map.contains_key("kendall_tau") {
                ctx.push(raw, format!("{path}.theta"), "one of theta or kendall_tau is required");
            }
            None
        }
        (Some((v, at)), None) => match GumbelDependence::new(v) {
            Ok(d) => Some((d, DependenceInput::Theta(v))),
            Err(e) => {
                ctx.push(at, format!("{path}.theta"), domain_message(e));
                None
            }
        },
        (None, Some((v, at))) => match GumbelDependence::from_kendall_tau(v) {
            Ok(d) => Some((d, DependenceInput::KendallTau(v))),
            Err(e) => {
                ctx.push(at, format!("{path}.kendall_tau"), domain_message(e));
                None
            }
        },
    };

    if ctx.issues.len() != before {
        return None;
    }
    let (dependence, dependence_input) = dependence?;
    let terms = DealTerms::new(c?.0, t?.0, delta?.0, r_a?.0, r_b?.0).ok()?;
    Some(Deal {
        id: id?,
        terms,
        lambda_a: MarginalIntensity::new(lambda_a?.0).ok()?,
        lambda_b: MarginalIntensity::new(lambda_b?.0).ok()?,
        dependence,
        dependence_input,
    })
}

fn parse_mc<'a>(ctx: &mut Ctx<'a>, raw: &'a RawValue) -> McOverrides {
    let mut out = McOverrides::default();
    let Some(map) = ctx.object(raw, "$.mc") else {
        return out;
    };
    ctx.unknown_keys(&map, &MC_FIELDS, "$.mc");
    if let Some(v) = map.get("n_paths") {
        match ctx.unsigned(v, "$.mc.n_paths") {
            Some(0) => ctx.push(v, "$.mc.n_paths", "must be > 0"),
            n => out.n_paths = n,
        }
    }
    if let Some(v) = map.get("seed") {
        out.seed = ctx.unsigned(v, "$.mc.seed");
    }
    if let Some(v) = map.get("worker_count") {
        match ctx.unsigned(v, "$.mc.worker_count") {
            Some(w) if w == 0 || w > u32::MAX as u64 => ctx.push(v, "$.mc.worker_count", "must lie in [1, 2^32)"),
            w => out.worker_count = w.map(|w| w as u32),
        }
    }
    if let Some(v) = map.get("confidence_sigmas") {
        match ctx.number(v, "$.mc.confidence_sigmas") {
            Some(k) if k <= 0.0 => ctx.push(v, "$.mc.confidence_sigmas", "must be > 0"),
            k => out.confidence_sigmas = k,
        }
    }
    out
}

/// Reads and validates a scenario file. I/O failures are reported as a
/// single issue at line 0.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioErrors> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ScenarioErrors(vec![Issue {
            line: 0,
            column: 0,
            path: path.display().to_string(),
            message: e.to_string(),
        }])
    })?;
    parse_scenario(&text)
}
