//! Annotation checks against the hierarchy and the licensing lexicon,
//! ranked construal suggestions, and the diagnostic checklists.

mod diagnostics;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hierarchy::{ConstrualLabel, Hierarchy};
use crate::lexicon::{LexEntry, Lexicon};
use crate::matcher::{target_surface, AdpositionTarget, Sentence};

pub use diagnostics::{Answer, ChecklistOutcome, DiagnosticChecklist, Diagnostics, DiagnosticsError, BUILTIN_DIAGNOSTICS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Draft,
    Confirmed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Draft => "draft",
            Status::Confirmed => "confirmed",
        }
    }
}

impl std::str::FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "draft" => Ok(Status::Draft),
            "confirmed" => Ok(Status::Confirmed),
            _ => Err(format!("status must be draft or confirmed, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub sentence_id: String,
    pub target: AdpositionTarget,
    pub construal: ConstrualLabel,
    pub annotator: String,
    pub status: Status,
}

impl AnnotationRecord {
    /// `sentence@indices`, used to address issues.
    pub fn location(&self) -> String {
        format!("{}@{}", self.sentence_id, self.target.indices_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

/// Closed registry of issue codes. The string forms are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    MalformedTarget,
    UnknownLabel,
    UnknownLemma,
    LemmaMismatch,
    UnlicensedConstrual,
    NovelScene,
    Overlap,
    Duplicate,
    UnknownSentence,
    ParseError,
}

impl IssueCode {
    pub const ALL: [IssueCode; 10] = [
        IssueCode::MalformedTarget,
        IssueCode::UnknownLabel,
        IssueCode::UnknownLemma,
        IssueCode::LemmaMismatch,
        IssueCode::UnlicensedConstrual,
        IssueCode::NovelScene,
        IssueCode::Overlap,
        IssueCode::Duplicate,
        IssueCode::UnknownSentence,
        IssueCode::ParseError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::MalformedTarget => "MALFORMED_TARGET",
            IssueCode::UnknownLabel => "UNKNOWN_LABEL",
            IssueCode::UnknownLemma => "UNKNOWN_LEMMA",
            IssueCode::LemmaMismatch => "LEMMA_MISMATCH",
            IssueCode::UnlicensedConstrual => "UNLICENSED_CONSTRUAL",
            IssueCode::NovelScene => "NOVEL_SCENE",
            IssueCode::Overlap => "OVERLAP",
            IssueCode::Duplicate => "DUPLICATE",
            IssueCode::UnknownSentence => "UNKNOWN_SENTENCE",
            IssueCode::ParseError => "PARSE_ERROR",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub code: IssueCode,
    pub location: String,
    pub message: String,
    /// Guideline section the issue relates to, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
}

impl ValidationIssue {
    pub(crate) fn error(code: IssueCode, location: &str, message: impl Into<String>) -> Self {
        ValidationIssue {
            severity: Severity::Error,
            code,
            location: location.to_string(),
            message: message.into(),
            anchor: None,
        }
    }

    fn warning(code: IssueCode, location: &str, message: impl Into<String>) -> Self {
        ValidationIssue {
            severity: Severity::Warning,
            ..Self::error(code, location, message)
        }
    }

    fn at(mut self, anchor: &str) -> Self {
        self.anchor = Some(anchor.to_string());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `severity<TAB>code<TAB>location<TAB>message`
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.severity.as_str(),
            self.code,
            self.location,
            self.message.replace(['\t', '\n'], " ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub construal: ConstrualLabel,
    pub rank: u32,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    pub open_scene: bool,
    pub provisional: bool,
    pub unresolved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    pub candidates: Vec<Suggestion>,
    pub issues: Vec<ValidationIssue>,
}

#[derive(Debug, Clone, Copy)]
pub struct Validator<'a> {
    hierarchy: &'a Hierarchy,
    lexicon: &'a Lexicon,
}

impl<'a> Validator<'a> {
    pub fn new(hierarchy: &'a Hierarchy, lexicon: &'a Lexicon) -> Self {
        Validator { hierarchy, lexicon }
    }

    /// Checks one record against the sentence it annotates.
    pub fn validate(&self, record: &AnnotationRecord, sentence: &Sentence) -> Vec<ValidationIssue> {
        let loc = record.location();
        let mut issues = Vec::new();
        let idx = &record.target.token_indices;

        if let Some(msg) = target_shape_error(idx, sentence.tokens.len()) {
            issues.push(ValidationIssue::error(IssueCode::MalformedTarget, &loc, msg));
            return issues;
        }
        let mut labels_known = true;
        for label in [&record.construal.scene, &record.construal.function] {
            if !self.hierarchy.contains(label) {
                labels_known = false;
                issues.push(ValidationIssue::error(
                    IssueCode::UnknownLabel,
                    &loc,
                    format!("unknown supersense {label:?}"),
                ));
            }
            if record.construal.is_congruent() {
                break;
            }
        }

        let Some(entry) = self.lexicon.lookup(&record.target.lemma) else {
            issues.push(ValidationIssue::error(
                IssueCode::UnknownLemma,
                &loc,
                format!("lemma {:?} is not in the lexicon", record.target.lemma),
            ));
            return issues;
        };

        let surface = target_surface(&sentence.tokens, idx, &entry.lemma);
        if !record.target.surface.is_empty() && record.target.surface != surface {
            issues.push(ValidationIssue::error(
                IssueCode::MalformedTarget,
                &loc,
                format!(
                    "surface {:?} does not match the sentence tokens {:?}",
                    record.target.surface, surface
                ),
            ));
        }
        if !surface_fits(entry, idx, &surface) {
            issues.push(ValidationIssue::error(
                IssueCode::LemmaMismatch,
                &loc,
                format!("{} is not a surface form of {}", surface.join(" "), entry.lemma),
            ));
        }

        if labels_known {
            issues.extend(self.check_license(entry, &record.construal, &loc));
        }
        issues
    }

    fn check_license(&self, entry: &LexEntry, construal: &ConstrualLabel, loc: &str) -> Option<ValidationIssue> {
        if entry.license_for(construal).is_some() {
            return None;
        }
        let same_function = entry
            .licenses
            .iter()
            .filter(|l| l.construal.function == construal.function);
        if let Some(open) = same_function.clone().find(|l| l.open_scene) {
            return Some(
                ValidationIssue::warning(
                    IssueCode::NovelScene,
                    loc,
                    format!(
                        "{} licenses {} with a predicate-supplied scene; {} is not listed",
                        entry.lemma, construal.function, construal.scene
                    ),
                )
                .at(&open.source_section),
            );
        }
        let mut issue = ValidationIssue::error(
            IssueCode::UnlicensedConstrual,
            loc,
            format!("{} does not license {}", entry.lemma, construal),
        );
        if let Some(first) = same_function.clone().next().or(entry.licenses.first()) {
            issue = issue.at(&first.source_section);
        }
        Some(issue)
    }

    /// Per-record checks plus overlap and duplicate detection.
    pub fn validate_document(&self, sentences: &[Sentence], records: &[AnnotationRecord]) -> Vec<ValidationIssue> {
        let by_id: HashMap<&str, &Sentence> = sentences.iter().map(|s| (s.id.as_str(), s)).collect();
        let mut issues = Vec::new();
        for r in records {
            match by_id.get(r.sentence_id.as_str()) {
                Some(s) => issues.extend(self.validate(r, s)),
                None => issues.push(ValidationIssue::error(
                    IssueCode::UnknownSentence,
                    &r.location(),
                    format!("no sentence with id {:?}", r.sentence_id),
                )),
            }
        }
        for (i, a) in records.iter().enumerate() {
            for b in &records[i + 1..] {
                if a.sentence_id != b.sentence_id {
                    continue;
                }
                let ta = &a.target.token_indices;
                let tb = &b.target.token_indices;
                if ta == tb {
                    if a.annotator == b.annotator {
                        issues.push(ValidationIssue::error(
                            IssueCode::Duplicate,
                            &b.location(),
                            format!("{} annotated this target twice", b.annotator),
                        ));
                    }
                } else if a.target.overlaps(&b.target) {
                    issues.push(ValidationIssue::error(
                        IssueCode::Overlap,
                        &b.location(),
                        format!("target overlaps {}", a.location()),
                    ));
                }
            }
        }
        issues
    }

    /// Every licensed construal for the target's lemma, ordered by rank
    /// then label text. With no lemma set, the surface decides it.
    pub fn suggest(&self, target: &AdpositionTarget) -> Suggestions {
        let lemma = if target.lemma.is_empty() {
            self.lexicon.normalize_surface(&target.surface).map(String::from)
        } else {
            self.lexicon.lookup(&target.lemma).map(|e| e.lemma.clone())
        };
        let Some(entry) = lemma.as_deref().and_then(|l| self.lexicon.lookup(l)) else {
            let shown = if target.lemma.is_empty() {
                target.surface.join(" ")
            } else {
                target.lemma.clone()
            };
            return Suggestions {
                lemma: None,
                candidates: Vec::new(),
                issues: vec![ValidationIssue::warning(
                    IssueCode::UnknownLemma,
                    &target.indices_text(),
                    format!("{shown:?} is not in the lexicon"),
                )],
            };
        };
        let candidates = entry
            .licenses
            .iter()
            .map(|l| Suggestion {
                construal: l.construal.clone(),
                rank: l.rank,
                anchor: l.source_section.clone(),
                condition: l.condition.clone(),
                open_scene: l.open_scene,
                provisional: l.provisional,
                unresolved: l.unresolved,
            })
            .collect();
        Suggestions {
            lemma: Some(entry.lemma.clone()),
            candidates,
            issues: Vec::new(),
        }
    }
}

fn target_shape_error(idx: &[usize], len: usize) -> Option<String> {
    if idx.is_empty() {
        return Some("target has no tokens".into());
    }
    if !idx.windows(2).all(|w| w[0] < w[1]) {
        return Some("token indices must be strictly increasing".into());
    }
    let last = *idx.last().unwrap();
    if last >= len {
        return Some(format!("token index {last} is past the sentence end ({len} tokens)"));
    }
    None
}

/// Whether the covered tokens are a variant of the entry, with any gap in
/// the same place as the variant's.
fn surface_fits(entry: &LexEntry, idx: &[usize], surface: &[String]) -> bool {
    let breaks: Vec<usize> = (1..idx.len()).filter(|&k| idx[k] != idx[k - 1] + 1).collect();
    entry.variants.iter().any(|v| {
        let words = v.words();
        if words.len() != surface.len() || words.iter().zip(surface).any(|(w, s)| w != s) {
            return false;
        }
        match (v.gap_after(), breaks.as_slice()) {
            (None, []) => true,
            (Some(g), [b]) => g == *b,
            _ => false,
        }
    })
}
