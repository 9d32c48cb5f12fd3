//! Machine-readable report documents behind the command-line tool.
//!
//! Every command emits one JSON document with a fixed schema version so the
//! outputs can be golden-file tested. Probabilities that are dyadic rationals
//! are printed both as exact fractions and as decimals.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::fock::{all_basis_inputs, certify_coincidence_equivalence, FockError};
use crate::optics::{
    build_fredkin_interferometer, build_pswap_interferometer, enumerate_outcomes, gate_fidelity,
    load_netlist, netlist_document, resource_calculator, table_one, GateName, InterferometerSpec,
    OpticsError, PhotonState,
};
use crate::synthesis::{verify_synthesis, SynthesisError};

pub const REPORT_SCHEMA_VERSION: &str = "1.0";
pub const DEFAULT_SEED: u64 = 7;
pub const CERTIFY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

/// Envelope for every command output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
}

impl ReportDocument {
    fn new(command: &str) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            results: Value::Null,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Renders a probability as an exact fraction p/2^k when it is one to within
/// 1e-12, falling back to a plain decimal.
pub fn dyadic_string(v: f64) -> String {
    if v.abs() < 1e-14 {
        return "0".to_string();
    }
    let sign = if v < 0.0 { "-" } else { "" };
    let a = v.abs();
    for k in 0..=44u32 {
        let scaled = a * (1u64 << k) as f64;
        let num = scaled.round();
        // dyadic only if the scaled value sits on an integer, not merely
        // within the absolute tolerance of one
        if num >= 1.0
            && (scaled - num).abs() <= 1e-9
            && (a - num / (1u64 << k) as f64).abs() <= 1e-12
        {
            let mut num = num as u64;
            let mut k = k;
            while k > 0 && num & 1 == 0 {
                num /= 2;
                k -= 1;
            }
            return if k == 0 {
                format!("{sign}{num}")
            } else {
                format!("{sign}{num}/{}", 1u128 << k)
            };
        }
    }
    format!("{v:.12}")
}

/// Fraction plus decimal, e.g. `1/8 (0.125)`.
pub fn probability_string(v: f64) -> String {
    let frac = dyadic_string(v);
    if frac.contains('/') {
        format!("{frac} ({v})")
    } else {
        frac
    }
}

/// Inclusive n range written as `a..b` or a single value.
pub fn parse_n_range(s: &str) -> Result<(usize, usize), ReportError> {
    let parse_one = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| ReportError::InvalidArgument(format!("bad n value {t:?}")))
    };
    if let Some((a, b)) = s.split_once("..") {
        let lo = parse_one(a)?;
        let hi = parse_one(b.trim_start_matches('='))?;
        if lo > hi {
            return Err(ReportError::InvalidArgument(format!(
                "empty range {lo}..{hi}"
            )));
        }
        Ok((lo, hi))
    } else {
        let n = parse_one(s)?;
        Ok((n, n))
    }
}

/// Logical input request: a definite ket or a number of seeded random states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSpec {
    Ket(Vec<usize>),
    Random(usize),
}

/// Parses `--input` values: a digit string (most significant slot first, so
/// `101` reads control 1, first target 0, second target 1) or `random:N`.
pub fn parse_input(s: &str) -> Result<InputSpec, ReportError> {
    if let Some(n) = s.strip_prefix("random:") {
        let trials = n
            .parse::<usize>()
            .map_err(|_| ReportError::InvalidArgument(format!("bad trial count {n:?}")))?;
        if trials == 0 {
            return Err(ReportError::InvalidArgument("zero trials".into()));
        }
        return Ok(InputSpec::Random(trials));
    }
    let digits = s
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as usize)
                .ok_or_else(|| ReportError::InvalidArgument(format!("malformed ket {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if digits.is_empty() {
        return Err(ReportError::InvalidArgument("empty ket".into()));
    }
    Ok(InputSpec::Ket(digits))
}

fn build_gate(gate: GateName) -> Result<InterferometerSpec, ReportError> {
    Ok(match gate {
        GateName::Pswap => build_pswap_interferometer()?,
        GateName::Fredkin3 => build_fredkin_interferometer()?,
    })
}

/// Per-n synthesis verification. The boolean is true when every report
/// verified.
pub fn run_verify(n_min: usize, n_max: usize) -> Result<(ReportDocument, bool), ReportError> {
    if n_min < 1 || n_min > n_max || n_max > 8 {
        return Err(ReportError::InvalidArgument(format!(
            "n range must satisfy 1 <= min <= max <= 8, got {n_min}..{n_max}"
        )));
    }
    let mut doc = ReportDocument::new("verify");
    doc.parameters.insert("n_min".into(), json!(n_min));
    doc.parameters.insert("n_max".into(), json!(n_max));
    doc.tolerances.insert("max_deviation".into(), 1e-10);
    doc.tolerances.insert("leakage".into(), 1e-10);
    let mut reports = Vec::new();
    let mut all_ok = true;
    for n in n_min..=n_max {
        let r = verify_synthesis(n)?;
        all_ok &= r.verified;
        reports.push(serde_json::to_value(&r)?);
    }
    doc.results = Value::Array(reports);
    Ok((doc, all_ok))
}

fn outcome_fidelity(
    outcome_block: &[Complex64],
    expected: &[Complex64],
) -> f64 {
    let norm = outcome_block
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    let overlap: Complex64 = expected
        .iter()
        .zip(outcome_block.iter())
        .map(|(e, b)| e.conj() * b / norm)
        .sum();
    overlap.norm_sqr()
}

/// Coincidence simulation of one gate for a definite ket or seeded random
/// inputs.
pub fn run_optics(
    gate_name: &str,
    input: &InputSpec,
    feedforward: bool,
    seed: u64,
) -> Result<(ReportDocument, bool), ReportError> {
    let gate = GateName::parse(gate_name)
        .map_err(|_| ReportError::InvalidArgument(format!("unknown gate {gate_name:?}")))?;
    let spec = build_gate(gate)?;
    let mut doc = ReportDocument::new("optics");
    doc.parameters.insert("gate".into(), json!(gate.as_str()));
    doc.parameters
        .insert("feedforward".into(), json!(feedforward));
    doc.parameters.insert("seed".into(), json!(seed));
    doc.tolerances.insert("fidelity_gap".into(), 1e-12);

    match input {
        InputSpec::Ket(digits) => {
            let dims = spec.logical_dims();
            if digits.len() != dims.len() {
                return Err(ReportError::InvalidArgument(format!(
                    "ket needs {} digits for {}, got {}",
                    dims.len(),
                    gate.as_str(),
                    digits.len()
                )));
            }
            for (slot, (&d, &dim)) in digits.iter().zip(dims.iter()).enumerate() {
                if d >= dim {
                    return Err(ReportError::InvalidArgument(format!(
                        "digit {d} out of range for slot {slot}"
                    )));
                }
            }
            doc.parameters.insert(
                "input".into(),
                json!(digits.iter().map(|d| d.to_string()).collect::<String>()),
            );
            let state = PhotonState::from_levels(&spec, digits)?;
            let outcomes = enumerate_outcomes(&state, &spec, feedforward)?;
            let ideal = crate::optics::ideal_logical_matrix(gate);
            let mut index = 0usize;
            for (slot, &d) in digits.iter().enumerate() {
                index = index * dims[slot] + d;
            }
            let expected: Vec<Complex64> = (0..spec.logical_dim())
                .map(|i| ideal.entries()[[i, index]])
                .collect();
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    let fid = outcome_fidelity(&o.block_vector(), &expected);
                    json!({
                        "pattern": o.pattern,
                        "branch": o.branch,
                        "probability": o.probability,
                        "probability_fraction": dyadic_string(o.probability),
                        "correction": o.correction.iter().map(|e| e.label().to_string()).collect::<Vec<_>>(),
                        "corrected_fidelity": fid,
                    })
                })
                .collect();
            doc.results = json!({
                "outcomes": rows,
                "outcome_count": outcomes.len(),
                "total_success_probability": total,
                "total_success_fraction": dyadic_string(total),
            });
            Ok((doc, true))
        }
        InputSpec::Random(trials) => {
            doc.parameters
                .insert("input".into(), json!(format!("random:{trials}")));
            let report = gate_fidelity(&spec, *trials, seed, feedforward)?;
            let ok = report.min_fidelity >= 1.0 - 1e-12;
            doc.results = json!({
                "fidelity": report,
                "success_fraction": dyadic_string(report.success_mean),
            });
            Ok((doc, ok))
        }
    }
}

/// The coincidence expectation table plus its CSV rendering.
pub fn run_table() -> Result<(ReportDocument, String), ReportError> {
    let spec = build_pswap_interferometer()?;
    let table = table_one(&spec)?;
    let mut doc = ReportDocument::new("table1");
    doc.tolerances.insert("cell".into(), 1e-12);
    doc.results = serde_json::to_value(&table)?;

    let mut csv = String::new();
    csv.push_str("input");
    for col in &table.columns {
        csv.push(',');
        csv.push_str(col);
    }
    csv.push('\n');
    for row in &table.rows {
        csv.push_str(&row.input);
        for cell in &row.cells {
            csv.push(',');
            csv.push_str(&dyadic_string(cell.probabilities[0]));
        }
        csv.push('\n');
    }
    Ok((doc, csv))
}

/// Closed-form resource table.
pub fn run_resources(n_min: usize, n_max: usize) -> Result<ReportDocument, ReportError> {
    if n_min < 1 || n_min > n_max {
        return Err(ReportError::InvalidArgument(format!(
            "n range must satisfy 1 <= min <= max, got {n_min}..{n_max}"
        )));
    }
    let mut doc = ReportDocument::new("resources");
    doc.parameters.insert("n_min".into(), json!(n_min));
    doc.parameters.insert("n_max".into(), json!(n_max));
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let r = resource_calculator(n)?;
        rows.push(json!({
            "n": r.n,
            "success_probability": r.success_probability.to_string(),
            "success_probability_decimal": r.success_probability_decimal,
            "pbs_count": r.pbs_count,
            "cnot_count": r.cnot_count,
            "pswap_count": r.pswap_count,
        }));
    }
    doc.results = Value::Array(rows);
    Ok(doc)
}

pub fn resources_csv(doc: &ReportDocument) -> String {
    let mut csv = String::from("n,success_probability,pbs_count,cnot_count,pswap_count\n");
    if let Value::Array(rows) = &doc.results {
        for row in rows {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                row["n"],
                row["success_probability"].as_str().unwrap_or("?"),
                row["pbs_count"],
                row["cnot_count"],
                row["pswap_count"],
            ));
        }
    }
    csv
}

/// Bosonic-oracle certification of both built-in interferometers.
pub fn run_certify() -> Result<(ReportDocument, bool), ReportError> {
    let mut doc = ReportDocument::new("certify");
    doc.tolerances
        .insert("max_deviation".into(), CERTIFY_TOLERANCE);
    let mut reports = Vec::new();
    let mut ok = true;
    for gate in [GateName::Pswap, GateName::Fredkin3] {
        let spec = build_gate(gate)?;
        let report = certify_coincidence_equivalence(&spec, &all_basis_inputs(&spec))?;
        ok &= report.max_deviation <= CERTIFY_TOLERANCE;
        reports.push(serde_json::to_value(&report)?);
    }
    doc.results = Value::Array(reports);
    Ok((doc, ok))
}

/// Serialized netlist of a built-in interferometer.
pub fn run_emit_netlist(gate_name: &str) -> Result<String, ReportError> {
    let gate = GateName::parse(gate_name)
        .map_err(|_| ReportError::InvalidArgument(format!("unknown gate {gate_name:?}")))?;
    let spec = build_gate(gate)?;
    let doc = netlist_document(&spec);
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Loads a netlist back and reports the recompilation deviation; used by the
/// round-trip tests.
pub fn reload_netlist_deviation(json: &str) -> Result<f64, ReportError> {
    let doc: crate::optics::NetlistDoc = serde_json::from_str(json)?;
    let reloaded = load_netlist(&doc)?;
    let original = build_gate(reloaded.gate)?;
    let dev = original
        .compiled
        .iter()
        .zip(reloaded.compiled.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(dev)
}

/// Deterministic seeded random logical inputs, shared by tests and the CLI.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rendering() {
        assert_eq!(dyadic_string(0.125), "1/8");
        assert_eq!(dyadic_string(0.5), "1/2");
        assert_eq!(dyadic_string(0.0), "0");
        assert_eq!(dyadic_string(1.0), "1");
        assert_eq!(dyadic_string(0.03125), "1/32");
        assert_eq!(dyadic_string(1.0 / 512.0), "1/512");
        assert_eq!(dyadic_string(-0.25), "-1/4");
        assert_eq!(dyadic_string(0.3), "0.300000000000");
    }

    #[test]
    fn n_range_parsing() {
        assert_eq!(parse_n_range("1..3").unwrap(), (1, 3));
        assert_eq!(parse_n_range("1..=3").unwrap(), (1, 3));
        assert_eq!(parse_n_range("4").unwrap(), (4, 4));
        assert!(parse_n_range("3..1").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn input_parsing() {
        assert_eq!(parse_input("01").unwrap(), InputSpec::Ket(vec![0, 1]));
        assert_eq!(parse_input("101").unwrap(), InputSpec::Ket(vec![1, 0, 1]));
        assert_eq!(parse_input("random:20").unwrap(), InputSpec::Random(20));
        assert!(parse_input("1x").is_err());
        assert!(parse_input("random:0").is_err());
        assert!(parse_input("").is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let (doc, ok) = run_verify(1, 2).unwrap();
        assert!(ok);
        let text = doc.to_json().unwrap();
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn verify_range_is_validated() {
        assert!(run_verify(0, 2).is_err());
        assert!(run_verify(2, 1).is_err());
        assert!(run_verify(1, 9).is_err());
    }
}
