//! Optional display names for alternatives.

use bwrum_core::rankings::Ranking;
use bwrum_core::{Alt, Subset};
use serde_json::{json, Value};

/// Without names, alternatives print as their integer ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels(Option<Vec<String>>);

impl Labels {
    pub fn none() -> Self {
        Labels(None)
    }

    pub fn new(names: Vec<String>, n: usize) -> Result<Self, String> {
        if names.len() != n {
            return Err(format!("{} labels for {n} alternatives", names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(format!("label {i} is empty"));
            }
            if names[..i].contains(name) {
                return Err(format!("label {name:?} is used twice"));
            }
        }
        Ok(Labels(Some(names)))
    }

    pub fn names(&self) -> Option<&[String]> {
        self.0.as_deref()
    }

    pub fn id_of(&self, name: &str) -> Option<Alt> {
        self.0.as_ref()?.iter().position(|l| l == name)
    }

    pub fn alt(&self, a: Alt) -> Value {
        match &self.0 {
            Some(names) => json!(names[a]),
            None => json!(a),
        }
    }

    pub fn text(&self, a: Alt) -> String {
        match &self.0 {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn subset(&self, s: Subset) -> Value {
        Value::Array(s.iter().map(|a| self.alt(a)).collect())
    }

    pub fn ranking(&self, r: &Ranking) -> Value {
        Value::Array(r.order().iter().map(|&a| self.alt(a)).collect())
    }

    /// Resolves a command-line token: a label if names are set and it
    /// matches one, otherwise an integer id.
    pub fn parse(&self, token: &str) -> Option<Alt> {
        self.id_of(token).or_else(|| token.parse().ok())
    }
}
