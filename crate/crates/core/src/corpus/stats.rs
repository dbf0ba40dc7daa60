use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Document;
use crate::matcher::Matcher;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StatsReport {
    pub documents: usize,
    pub sentences: usize,
    pub records: usize,
    /// lemma → construal text → count
    pub per_lemma: BTreeMap<String, BTreeMap<String, usize>>,
    /// Counts by function label.
    pub per_function: BTreeMap<String, usize>,
    /// Counts by scene role.
    pub per_scene: BTreeMap<String, usize>,
    pub congruent: usize,
    pub construed: usize,
    /// congruent / records, 0 for an empty corpus.
    pub congruent_ratio: f64,
    /// Matcher targets with no record on the same index set. Only counted
    /// when a matcher is supplied.
    pub unannotated_targets: usize,
}

impl StatsReport {
    pub fn lemma_total(&self, lemma: &str) -> usize {
        self.per_lemma.get(lemma).map(|m| m.values().sum()).unwrap_or(0)
    }

    /// Highest record count; ties go to the alphabetically first lemma.
    pub fn most_frequent_lemma(&self) -> Option<(&str, usize)> {
        self.per_lemma
            .iter()
            .map(|(l, m)| (l.as_str(), m.values().sum::<usize>()))
            .fold(None, |best, (l, n)| match best {
                Some((_, b)) if b >= n => best,
                _ => Some((l, n)),
            })
    }
}

pub fn stats(docs: &[Document], matcher: Option<&Matcher>) -> StatsReport {
    let mut r = StatsReport {
        documents: docs.len(),
        ..Default::default()
    };
    for doc in docs {
        r.sentences += doc.sentences.len();
        for rec in &doc.records {
            r.records += 1;
            *r.per_lemma
                .entry(rec.target.lemma.clone())
                .or_default()
                .entry(rec.construal.to_string())
                .or_default() += 1;
            *r.per_function.entry(rec.construal.function.clone()).or_default() += 1;
            *r.per_scene.entry(rec.construal.scene.clone()).or_default() += 1;
            if rec.construal.is_congruent() {
                r.congruent += 1;
            } else {
                r.construed += 1;
            }
        }
        if let Some(m) = matcher {
            for s in &doc.sentences {
                for t in m.find_targets(s) {
                    let annotated = doc
                        .records
                        .iter()
                        .any(|rec| rec.sentence_id == s.id && rec.target.token_indices == t.token_indices);
                    if !annotated {
                        r.unannotated_targets += 1;
                    }
                }
            }
        }
    }
    if r.records > 0 {
        r.congruent_ratio = r.congruent as f64 / r.records as f64;
    }
    r
}
