use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::{ConstrualLabel, Hierarchy};
use crate::lexicon::Lexicon;
use crate::translit::normalize_key;

pub const BUILTIN_DIAGNOSTICS: &str = include_str!("../../data/diagnostics.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Any,
}

impl Answer {
    fn accepts(self, given: Answer) -> bool {
        self == Answer::Any || self == given
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistOutcome {
    pub when: Vec<Answer>,
    /// Absent when the outcome applies to every lemma subject.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    pub construal: ConstrualLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticChecklist {
    pub id: String,
    /// Lemmas and labels the checklist helps decide.
    pub subjects: Vec<String>,
    pub title: String,
    pub anchor: String,
    pub prompts: Vec<String>,
    #[serde(rename = "outcome")]
    pub outcomes: Vec<ChecklistOutcome>,
}

impl DiagnosticChecklist {
    /// First outcome whose pattern matches the answers, one per prompt.
    pub fn resolve(&self, answers: &[Answer]) -> Option<&ChecklistOutcome> {
        if answers.len() != self.prompts.len() {
            return None;
        }
        self.outcomes
            .iter()
            .find(|o| o.when.iter().zip(answers).all(|(w, a)| w.accepts(*a)))
    }
}

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("diagnostics file: {0}")]
    Toml(String),
    #[error("checklist {id}: {message}")]
    Invalid { id: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Deserialize)]
struct File {
    #[serde(default)]
    checklist: Vec<DiagnosticChecklist>,
}

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    checklists: Vec<DiagnosticChecklist>,
}

impl Diagnostics {
    pub fn builtin(hierarchy: &Hierarchy, lexicon: &Lexicon) -> Result<Self, DiagnosticsError> {
        Self::parse(BUILTIN_DIAGNOSTICS, hierarchy, lexicon)
    }

    pub fn load(path: impl AsRef<Path>, hierarchy: &Hierarchy, lexicon: &Lexicon) -> Result<Self, DiagnosticsError> {
        Self::parse(&std::fs::read_to_string(path)?, hierarchy, lexicon)
    }

    /// The bundled checklists that fit a custom lexicon; the rest are
    /// dropped.
    pub fn builtin_compatible(hierarchy: &Hierarchy, lexicon: &Lexicon) -> Self {
        let file: File = toml::from_str(BUILTIN_DIAGNOSTICS).expect("bundled diagnostics parse");
        Diagnostics {
            checklists: file
                .checklist
                .into_iter()
                .filter(|c| check(c, hierarchy, lexicon).is_ok())
                .collect(),
        }
    }

    /// Parses and checks that every outcome is licensed for its lemma.
    pub fn parse(text: &str, hierarchy: &Hierarchy, lexicon: &Lexicon) -> Result<Self, DiagnosticsError> {
        let file: File = toml::from_str(text).map_err(|e| DiagnosticsError::Toml(e.to_string()))?;
        let mut ids = BTreeSet::new();
        for c in &file.checklist {
            if !ids.insert(c.id.clone()) {
                return Err(DiagnosticsError::Invalid {
                    id: c.id.clone(),
                    message: "duplicate id".into(),
                });
            }
            check(c, hierarchy, lexicon)?;
        }
        Ok(Diagnostics {
            checklists: file.checklist,
        })
    }

    pub fn all(&self) -> &[DiagnosticChecklist] {
        &self.checklists
    }

    /// Checklists registered for a lemma or label; empty when none are.
    pub fn diagnostics_for(&self, key: &str) -> Vec<&DiagnosticChecklist> {
        let key = normalize_key(key);
        self.checklists
            .iter()
            .filter(|c| c.subjects.iter().any(|s| normalize_key(s) == key))
            .collect()
    }
}

fn check(c: &DiagnosticChecklist, hierarchy: &Hierarchy, lexicon: &Lexicon) -> Result<(), DiagnosticsError> {
    let bad = |message: String| DiagnosticsError::Invalid {
        id: c.id.clone(),
        message,
    };
    if c.subjects.is_empty() || c.prompts.is_empty() || c.outcomes.is_empty() {
        return Err(bad("needs subjects, prompts and outcomes".into()));
    }
    let mut lemma_subjects = Vec::new();
    for s in &c.subjects {
        if let Some(e) = lexicon.lookup(s) {
            lemma_subjects.push(e.lemma.clone());
        } else if !hierarchy.contains(s) {
            return Err(bad(format!("subject {s:?} is neither a lemma nor a label")));
        }
    }
    for o in &c.outcomes {
        if o.when.len() != c.prompts.len() {
            return Err(bad(format!(
                "outcome {} answers {} prompts, expected {}",
                o.construal,
                o.when.len(),
                c.prompts.len()
            )));
        }
        let lemmas = match &o.lemma {
            Some(l) => vec![l.clone()],
            None if lemma_subjects.is_empty() => return Err(bad(format!("outcome {} needs a lemma", o.construal))),
            None => lemma_subjects.clone(),
        };
        for l in lemmas {
            let licensed = lexicon
                .lookup(&l)
                .is_some_and(|e| e.license_for(&o.construal).is_some());
            if !licensed {
                return Err(bad(format!("{l} does not license outcome {}", o.construal)));
            }
        }
    }
    Ok(())
}
