//! JSON file formats.
//!
//! Alternatives may be written as integer ids or, when the file carries a
//! `labels` list, as label strings. Probabilities are `"num/den"` strings;
//! decimal strings and plain JSON numbers are also read, exactly as written.

use bwrum_core::measure::RankingDistribution;
use bwrum_core::rankings::Ranking;
use bwrum_core::rational::{parse_rational, to_fraction_string, Rational};
use bwrum_core::system::{ChoiceCountDataset, CountRecord, Limits};
use bwrum_core::{Alt, BwSystem, Subset};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::labels::Labels;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum AltRef {
    Id(usize),
    Name(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProbText {
    Text(String),
    Number(serde_json::Number),
}

impl ProbText {
    fn value(&self) -> Result<Rational, FormatError> {
        let text = match self {
            ProbText::Text(s) => s.clone(),
            ProbText::Number(n) => n.to_string(),
        };
        parse_rational(&text).map_err(|e| invalid(e.to_string()))
    }
}

fn resolve(labels: &Labels, a: &AltRef, n: usize) -> Result<Alt, FormatError> {
    let id = match a {
        AltRef::Id(i) => *i,
        AltRef::Name(name) => labels.id_of(name).ok_or_else(|| invalid(format!("unknown label {name:?}")))?,
    };
    if id >= n {
        return Err(invalid(format!("alternative {id} is outside 0..{n}")));
    }
    Ok(id)
}

fn resolve_subset(labels: &Labels, items: &[AltRef], n: usize) -> Result<Subset, FormatError> {
    let mut s = Subset::EMPTY;
    for a in items {
        let id = resolve(labels, a, n)?;
        if s.contains(id) {
            return Err(invalid(format!("alternative {id} listed twice in a subset")));
        }
        s = s.with(id);
    }
    Ok(s)
}

fn file_labels(n: usize, labels: Option<Vec<String>>) -> Result<Labels, FormatError> {
    match labels {
        None => Ok(Labels::none()),
        Some(l) => Labels::new(l, n).map_err(invalid),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    subsets: Vec<SubsetEntry<ProbEntry>>,
    // written by `ingest`; informational only
    #[serde(default)]
    #[allow(dead_code)]
    unobserved: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubsetEntry<T> {
    members: Vec<AltRef>,
    #[serde(alias = "counts")]
    probs: Vec<T>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbEntry {
    best: AltRef,
    worst: AltRef,
    p: ProbText,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountEntry {
    best: AltRef,
    worst: AltRef,
    count: u64,
}

/// A system as read from disk, before normalization is checked.
pub struct LoadedSystem {
    pub system: BwSystem,
    pub labels: Labels,
}

pub fn read_system(text: &str, limits: Limits) -> Result<LoadedSystem, FormatError> {
    let file: SystemFile = serde_json::from_str(text)?;
    let labels = file_labels(file.n, file.labels)?;
    let mut entries = Vec::new();
    for group in &file.subsets {
        let subset = resolve_subset(&labels, &group.members, file.n)?;
        for c in &group.probs {
            entries.push((
                subset,
                resolve(&labels, &c.best, file.n)?,
                resolve(&labels, &c.worst, file.n)?,
                c.p.value()?,
            ));
        }
    }
    let system = BwSystem::assemble_with_limits(file.n, entries, limits).map_err(|e| invalid(e.to_string()))?;
    Ok(LoadedSystem { system, labels })
}

fn with_labels(mut out: Value, labels: &Labels) -> Value {
    if let Some(l) = labels.names() {
        out["labels"] = json!(l);
    }
    out
}

pub fn system_json(system: &BwSystem, labels: &Labels) -> Value {
    let mut groups: Vec<(Subset, Vec<Value>)> = Vec::new();
    for (s, a, b, p) in system.cells() {
        if groups.last().map(|g| g.0) != Some(s) {
            groups.push((s, Vec::new()));
        }
        let probs = &mut groups.last_mut().expect("just pushed").1;
        probs.push(json!({ "best": labels.alt(a), "worst": labels.alt(b), "p": to_fraction_string(p) }));
    }
    let subsets: Vec<Value> = groups
        .into_iter()
        .map(|(s, probs)| json!({ "members": labels.subset(s), "probs": probs }))
        .collect();
    with_labels(json!({ "n": system.n(), "subsets": subsets }), labels)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsFile {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    subsets: Vec<SubsetEntry<CountEntry>>,
    // written by `simulate`; informational only
    #[serde(default)]
    #[allow(dead_code)]
    generator: Option<Value>,
}

pub struct LoadedCounts {
    pub data: ChoiceCountDataset,
    pub labels: Labels,
}

/// Only labels and ranges are resolved here; ingestion reports records that
/// do not fit their subset.
pub fn read_counts(text: &str) -> Result<LoadedCounts, FormatError> {
    let file: CountsFile = serde_json::from_str(text)?;
    let labels = file_labels(file.n, file.labels)?;
    let mut records = Vec::new();
    for group in &file.subsets {
        let subset = resolve_subset(&labels, &group.members, file.n)?;
        for r in &group.probs {
            records.push(CountRecord {
                subset,
                best: resolve(&labels, &r.best, file.n)?,
                worst: resolve(&labels, &r.worst, file.n)?,
                count: r.count,
            });
        }
    }
    Ok(LoadedCounts {
        data: ChoiceCountDataset { n: file.n, records },
        labels,
    })
}

/// Records are grouped by subset in first-appearance order.
pub fn counts_json(data: &ChoiceCountDataset, labels: &Labels) -> Value {
    let mut groups: Vec<(Subset, Vec<Value>)> = Vec::new();
    for r in &data.records {
        let entry = json!({ "best": labels.alt(r.best), "worst": labels.alt(r.worst), "count": r.count });
        match groups.iter_mut().find(|g| g.0 == r.subset) {
            Some(g) => g.1.push(entry),
            None => groups.push((r.subset, vec![entry])),
        }
    }
    let subsets: Vec<Value> = groups
        .into_iter()
        .map(|(s, counts)| json!({ "members": labels.subset(s), "counts": counts }))
        .collect();
    with_labels(json!({ "n": data.n, "subsets": subsets }), labels)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    distribution: Vec<MassEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassEntry {
    ranking: Vec<AltRef>,
    mass: ProbText,
}

pub struct LoadedDistribution {
    pub dist: RankingDistribution,
    pub labels: Labels,
}

pub fn read_distribution(text: &str) -> Result<LoadedDistribution, FormatError> {
    let file: DistributionFile = serde_json::from_str(text)?;
    let labels = file_labels(file.n, file.labels)?;
    let mut entries = Vec::with_capacity(file.distribution.len());
    for m in &file.distribution {
        let order = m
            .ranking
            .iter()
            .map(|a| resolve(&labels, a, file.n))
            .collect::<Result<Vec<_>, _>>()?;
        let ranking = Ranking::new(order).map_err(|e| invalid(e.to_string()))?;
        entries.push((ranking, m.mass.value()?));
    }
    let dist = RankingDistribution::new(file.n, entries).map_err(|e| invalid(e.to_string()))?;
    Ok(LoadedDistribution { dist, labels })
}

/// Masses in lexicographic ranking order; zero masses are omitted.
pub fn distribution_entries(dist: &RankingDistribution, labels: &Labels) -> Vec<Value> {
    dist.support()
        .map(|(r, p)| json!({ "ranking": labels.ranking(r), "mass": to_fraction_string(p) }))
        .collect()
}

pub fn distribution_json(dist: &RankingDistribution, labels: &Labels) -> Value {
    with_labels(json!({ "n": dist.n(), "distribution": distribution_entries(dist, labels) }), labels)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DesignFile {
    Wrapped {
        #[serde(default)]
        labels: Option<Vec<String>>,
        design: Vec<DesignEntry>,
    },
    Bare(Vec<DesignEntry>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignEntry {
    subset: Vec<AltRef>,
    trials: u64,
}

/// Reads `{"design": [{"subset": [..], "trials": t}]}` or the bare list.
/// Labels come from the design file if present, else from `fallback`.
pub fn read_design(text: &str, n: usize, fallback: &Labels) -> Result<Vec<(Subset, u64)>, FormatError> {
    let (labels, entries) = match serde_json::from_str::<DesignFile>(text)? {
        DesignFile::Wrapped { labels, design } => (labels, design),
        DesignFile::Bare(design) => (None, design),
    };
    let labels = match labels {
        Some(l) => Labels::new(l, n).map_err(invalid)?,
        None => fallback.clone(),
    };
    entries
        .iter()
        .map(|e| Ok((resolve_subset(&labels, &e.subset, n)?, e.trials)))
        .collect()
}

/// Polynomial table as `[{best, worst, context, K}]`.
pub fn polynomials_json(table: &bwrum_core::PolynomialTable, labels: &Labels) -> Value {
    Value::Array(
        table
            .iter()
            .map(|(a, b, c, k)| {
                json!({
                    "best": labels.alt(a),
                    "worst": labels.alt(b),
                    "context": labels.subset(c),
                    "K": to_fraction_string(k),
                })
            })
            .collect(),
    )
}

/// Same table as CSV with a header; contexts are `;`-separated.
pub fn polynomials_csv(table: &bwrum_core::PolynomialTable, labels: &Labels) -> String {
    let mut out = String::from("best,worst,context,K\n");
    for (a, b, c, k) in table.iter() {
        let ctx: Vec<String> = c.iter().map(|x| labels.text(x)).collect();
        out.push_str(&format!(
            "{},{},{},{}\n",
            labels.text(a),
            labels.text(b),
            ctx.join(";"),
            to_fraction_string(k)
        ));
    }
    out
}
