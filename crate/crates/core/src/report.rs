//! Result rows and their CSV / JSON-lines encodings.
//!
//! Computed quantities are rounded to 9 significant digits. Echoed inputs
//! keep their shortest round-trip representation so that re-reading a JSON
//! row reproduces the deal exactly.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::FactoringError;
use crate::montecarlo::{mc_price, mc_standard_price, McConfig, McPrice};
use crate::pricing::{revocatory_price_closed, standard_price_exponential, ModelTag, PriceResult};
use crate::scenario::{Deal, DependenceInput, Issue, McOverrides, Scenario, ScenarioErrors, SCHEMA_VERSION};

/// Column order of the CSV output.
pub const CSV_HEADER: [&str; 18] = [
    "id",
    "model",
    "price",
    "implied_alpha",
    "p_default_no_clawback",
    "p_joint_survival",
    "p_clawback",
    "mc_std_error",
    "theta",
    "kendall_tau",
    "c",
    "t",
    "delta",
    "r_a",
    "r_b",
    "lambda_a",
    "lambda_b",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSelection {
    Standard,
    Revocatory,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub id: String,
    pub model_tag: ModelTag,
    pub price: Option<f64>,
    pub implied_alpha: Option<f64>,
    pub p_default_no_clawback: Option<f64>,
    pub p_joint_survival: Option<f64>,
    pub p_clawback: Option<f64>,
    pub mc_std_error: Option<f64>,
    pub theta: f64,
    pub kendall_tau: f64,
    pub c: f64,
    pub t: f64,
    pub delta: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub error: Option<String>,
}

impl ResultRow {
    fn for_deal(deal: &Deal, model_tag: ModelTag) -> Self {
        Self {
            id: deal.id.clone(),
            model_tag,
            price: None,
            implied_alpha: None,
            p_default_no_clawback: None,
            p_joint_survival: None,
            p_clawback: None,
            mc_std_error: None,
            theta: deal.dependence.theta(),
            kendall_tau: deal.dependence.kendall_tau(),
            c: deal.terms.face_value_c,
            t: deal.terms.maturity_t,
            delta: deal.terms.suspect_period_delta,
            r_a: deal.terms.recovery_a,
            r_b: deal.terms.recovery_b,
            lambda_a: deal.lambda_a.lambda(),
            lambda_b: deal.lambda_b.lambda(),
            error: None,
        }
    }

    fn with_result(mut self, result: &PriceResult) -> Self {
        self.price = Some(result.price);
        self.implied_alpha = Some(result.implied_discount_alpha);
        self.p_default_no_clawback = Some(result.triple.p_debtor_default_no_clawback);
        self.p_joint_survival = Some(result.triple.p_joint_survival);
        self.p_clawback = Some(result.triple.p_clawback);
        self
    }

    fn with_outcome(self, outcome: Result<PriceResult, FactoringError>) -> Self {
        match outcome {
            Ok(r) => self.with_result(&r),
            Err(e) => self.with_error(e),
        }
    }

    fn with_mc(self, outcome: Result<McPrice, FactoringError>) -> Self {
        match outcome {
            Ok(mc) => {
                let mut row = self.with_result(&mc.result);
                row.mc_std_error = Some(mc.estimate.std_error);
                row
            }
            Err(e) => self.with_error(e),
        }
    }

    fn with_error(mut self, e: FactoringError) -> Self {
        self.error = Some(match e {
            FactoringError::DegenerateDeal { denominator } => {
                format!("degenerate_deal: clawback denominator {denominator} is not positive")
            }
            other => other.to_string(),
        });
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.error.as_deref().is_some_and(|e| e.starts_with("degenerate_deal"))
    }

    fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
        vec![
            self.id.clone(),
            self.model_tag.as_str().to_string(),
            opt(self.price),
            opt(self.implied_alpha),
            opt(self.p_default_no_clawback),
            opt(self.p_joint_survival),
            opt(self.p_clawback),
            opt(self.mc_std_error),
            self.theta.to_string(),
            format_sig9(self.kendall_tau),
            self.c.to_string(),
            self.t.to_string(),
            self.delta.to_string(),
            self.r_a.to_string(),
            self.r_b.to_string(),
            self.lambda_a.to_string(),
            self.lambda_b.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }

    pub fn to_json(&self) -> Value {
        let sig = |v: Option<f64>| v.map_or(Value::Null, |x| Value::from(round_sig9(x)));
        let mut m = Map::new();
        m.insert("id".into(), Value::from(self.id.clone()));
        m.insert("model".into(), Value::from(self.model_tag.as_str()));
        m.insert("price".into(), sig(self.price));
        m.insert("implied_alpha".into(), sig(self.implied_alpha));
        m.insert("p_default_no_clawback".into(), sig(self.p_default_no_clawback));
        m.insert("p_joint_survival".into(), sig(self.p_joint_survival));
        m.insert("p_clawback".into(), sig(self.p_clawback));
        m.insert("mc_std_error".into(), sig(self.mc_std_error));
        m.insert("theta".into(), Value::from(self.theta));
        m.insert("kendall_tau".into(), Value::from(round_sig9(self.kendall_tau)));
        for (k, v) in [
            ("c", self.c),
            ("t", self.t),
            ("delta", self.delta),
            ("r_a", self.r_a),
            ("r_b", self.r_b),
            ("lambda_a", self.lambda_a),
            ("lambda_b", self.lambda_b),
        ] {
            m.insert(k.into(), Value::from(v));
        }
        m.insert("error".into(), self.error.clone().map_or(Value::Null, Value::from));
        Value::Object(m)
    }
}

/// Rounds to 9 significant digits.
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap()
}

/// 9 significant digits, plain decimal notation, `.` separator.
pub fn format_sig9(x: f64) -> String {
    round_sig9(x).to_string()
}

/// Prices one deal under the selected models, closed form first, then
/// Monte Carlo rows when `mc` is given.
pub fn price_deal(deal: &Deal, models: ModelSelection, mc: Option<&McConfig>) -> Vec<ResultRow> {
    let standard = matches!(models, ModelSelection::Standard | ModelSelection::Both);
    let revocatory = matches!(models, ModelSelection::Revocatory | ModelSelection::Both);
    let mut rows = Vec::new();
    if standard {
        let r = standard_price_exponential(&deal.lambda_b, &deal.terms);
        rows.push(ResultRow::for_deal(deal, ModelTag::Standard).with_outcome(r));
    }
    if revocatory {
        let r = revocatory_price_closed(&deal.lambda_a, &deal.lambda_b, &deal.dependence, &deal.terms);
        rows.push(ResultRow::for_deal(deal, ModelTag::RevocatoryClosed).with_outcome(r));
    }
    if let Some(cfg) = mc {
        if standard {
            let r = mc_standard_price(&deal.lambda_b, &deal.terms, cfg);
            rows.push(ResultRow::for_deal(deal, ModelTag::StandardMc).with_mc(r));
        }
        if revocatory {
            let r = mc_price(&deal.lambda_a, &deal.lambda_b, &deal.dependence, &deal.terms, cfg);
            rows.push(ResultRow::for_deal(deal, ModelTag::RevocatoryMc).with_mc(r));
        }
    }
    rows
}

pub fn price_scenario(scenario: &Scenario, models: ModelSelection, mc: Option<&McConfig>) -> Vec<ResultRow> {
    scenario.deals.iter().flat_map(|d| price_deal(d, models, mc)).collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json_lines<W: Write>(mut out: W, rows: &[ResultRow]) -> std::io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, &row.to_json())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow], format: OutputFormat) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(out, rows).map_err(std::io::Error::other),
        OutputFormat::JsonLines => write_json_lines(out, rows),
    }
}

/// Rebuilds a scenario from JSON-lines result rows (one deal per distinct
/// id, first row wins). Inputs are echoed at full precision, so pricing the
/// result reproduces the original prices.
pub fn scenario_from_json_rows(text: &str) -> Result<Scenario, ScenarioErrors> {
    let mut deals = Vec::new();
    let mut issues = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut obj: Map<String, Value> = match serde_json::from_str(line) {
            Ok(o) => o,
            Err(e) => {
                issues.push(Issue {
                    line: i + 1,
                    column: e.column(),
                    path: "$".into(),
                    message: e.to_string(),
                });
                continue;
            }
        };
        let id = obj.get("id").and_then(Value::as_str).unwrap_or_default().to_string();
        if !seen.insert(id) {
            continue;
        }
        let keep = ["id", "c", "t", "delta", "r_a", "r_b", "lambda_a", "lambda_b", "theta"];
        obj.retain(|k, _| keep.contains(&k.as_str()));
        deals.push(Value::Object(obj));
    }
    if !issues.is_empty() {
        return Err(ScenarioErrors(issues));
    }
    let doc = serde_json::json!({ "schema_version": SCHEMA_VERSION, "deals": deals });
    crate::scenario::parse_scenario(&doc.to_string())
}

/// Scenario document reproducing the given deals, with optional MC overrides.
pub fn scenario_to_json(scenario: &Scenario) -> Value {
    let deals: Vec<Value> = scenario
        .deals
        .iter()
        .map(|d| {
            let mut m = Map::new();
            m.insert("id".into(), Value::from(d.id.clone()));
            m.insert("c".into(), Value::from(d.terms.face_value_c));
            m.insert("t".into(), Value::from(d.terms.maturity_t));
            m.insert("delta".into(), Value::from(d.terms.suspect_period_delta));
            m.insert("r_a".into(), Value::from(d.terms.recovery_a));
            m.insert("r_b".into(), Value::from(d.terms.recovery_b));
            m.insert("lambda_a".into(), Value::from(d.lambda_a.lambda()));
            m.insert("lambda_b".into(), Value::from(d.lambda_b.lambda()));
            match d.dependence_input {
                DependenceInput::Theta(t) => m.insert("theta".into(), Value::from(t)),
                DependenceInput::KendallTau(k) => m.insert("kendall_tau".into(), Value::from(k)),
            };
            Value::Object(m)
        })
        .collect();
    let McOverrides {
        n_paths,
        seed,
        worker_count,
        confidence_sigmas,
    } = scenario.mc;
    let mut mc = Map::new();
    if let Some(v) = n_paths {
        mc.insert("n_paths".into(), Value::from(v));
    }
    if let Some(v) = seed {
        mc.insert("seed".into(), Value::from(v));
    }
    if let Some(v) = worker_count {
        mc.insert("worker_count".into(), Value::from(v));
    }
    if let Some(v) = confidence_sigmas {
        mc.insert("confidence_sigmas".into(), Value::from(v));
    }
    let mut doc = Map::new();
    doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    doc.insert("deals".into(), Value::Array(deals));
    if !mc.is_empty() {
        doc.insert("mc".into(), Value::Object(mc));
    }
    Value::Object(doc)
}
