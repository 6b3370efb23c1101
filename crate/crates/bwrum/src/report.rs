//! Pieces of the JSON analysis report.

use bwrum_core::measure::VerificationReport;
use bwrum_core::poly::{Certificate, RepresentabilityReport, Verdict};
use bwrum_core::rational::to_fraction_string;
use bwrum_core::system::ValidationReport;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::files::distribution_entries;
use crate::labels::Labels;

pub const SCHEMA: &str = "bwrum-report/1";

/// Starts a report object with the schema tag and command name.
pub fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

pub fn digest(bytes: &[u8]) -> Value {
    json!({ "sha256": hex::encode(Sha256::digest(bytes)) })
}

pub fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Representable => "Representable",
        Verdict::NotRepresentable => "NotRepresentable",
    }
}

pub fn validation(report: &ValidationReport, labels: &Labels) -> Value {
    let normalization: Vec<Value> = report
        .normalization
        .iter()
        .map(|d| json!({ "subset": labels.subset(d.subset), "deviation": to_fraction_string(&d.deviation) }))
        .collect();
    let out_of_range: Vec<Value> = report
        .out_of_range
        .iter()
        .map(|c| {
            json!({
                "subset": labels.subset(c.subset),
                "best": labels.alt(c.best),
                "worst": labels.alt(c.worst),
                "p": to_fraction_string(&c.value),
            })
        })
        .collect();
    json!({ "valid": report.is_valid(), "normalization": normalization, "out_of_range": out_of_range })
}

pub fn certificate(c: &Certificate, labels: &Labels) -> Value {
    json!({
        "best": labels.alt(c.best),
        "worst": labels.alt(c.worst),
        "context": labels.subset(c.context),
        "K": to_fraction_string(&c.value),
    })
}

/// Verdict, certificates and witness fields of a check.
pub fn representability(report: &RepresentabilityReport, labels: &Labels, out: &mut Map<String, Value>) {
    out.insert("verdict".into(), json!(verdict_text(report.verdict)));
    out.insert(
        "certificates".into(),
        Value::Array(report.negatives.iter().map(|c| certificate(c, labels)).collect()),
    );
    out.insert("approximate".into(), json!(report.approximate));
    if let Some(w) = &report.witness {
        out.insert("witness".into(), Value::Array(distribution_entries(w, labels)));
    }
}

pub fn verification(report: &VerificationReport, labels: &Labels) -> Value {
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|m| {
            json!({
                "subset": labels.subset(m.subset),
                "best": labels.alt(m.best),
                "worst": labels.alt(m.worst),
                "expected": to_fraction_string(&m.expected),
                "actual": to_fraction_string(&m.actual),
            })
        })
        .collect();
    json!({ "exact": report.is_exact(), "dimension_mismatch": report.dimension_mismatch, "mismatches": mismatches })
}
