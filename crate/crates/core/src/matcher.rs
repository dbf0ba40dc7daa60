//! Finds adposition targets in whitespace-tokenized romanized sentences.
//!
//! Patterns are indexed on their first word. A circumpositional pattern
//! matches its words before the gap contiguously, then looks for the rest
//! after one to `max_gap` intervening tokens, nearest first. Overlapping
//! candidates are resolved longest-first.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::lexicon::{Category, Lexicon};
use crate::translit::normalize_key;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

impl Sentence {
    pub fn new(id: impl Into<String>, tokens: Vec<String>) -> Self {
        Sentence {
            id: id.into(),
            tokens,
            attributes: BTreeMap::new(),
        }
    }

    /// Splits on whitespace.
    pub fn from_text(id: impl Into<String>, text: &str) -> Self {
        Self::new(id, text.split_whitespace().map(String::from).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdpositionTarget {
    pub token_indices: Vec<usize>,
    pub lemma: String,
    #[serde(default)]
    pub surface: Vec<String>,
    #[serde(default)]
    pub discontinuous: bool,
}

impl AdpositionTarget {
    pub fn new(token_indices: Vec<usize>, lemma: impl Into<String>, surface: Vec<String>) -> Self {
        let discontinuous = !is_contiguous(&token_indices);
        AdpositionTarget {
            token_indices,
            lemma: lemma.into(),
            surface,
            discontinuous,
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.token_indices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.token_indices.last().copied()
    }

    pub fn overlaps(&self, other: &AdpositionTarget) -> bool {
        self.token_indices
            .iter()
            .any(|i| other.token_indices.contains(i))
    }

    /// Indices written as `1,3`.
    pub fn indices_text(&self) -> String {
        let parts: Vec<String> = self.token_indices.iter().map(usize::to_string).collect();
        parts.join(",")
    }
}

pub fn is_contiguous(indices: &[usize]) -> bool {
    indices.windows(2).all(|w| w[1] == w[0] + 1)
}

/// The surface a target covers: normalized tokens at `indices`. A single
/// hyphenated token annotated with a hyphen-free lemma contributes its
/// last segment, so `choṭā-vālā` yields `vālā`.
pub fn target_surface<S: AsRef<str>>(tokens: &[S], indices: &[usize], lemma: &str) -> Vec<String> {
    indices
        .iter()
        .filter_map(|&i| tokens.get(i))
        .map(|t| {
            let key = normalize_key(t.as_ref());
            match key.rsplit_once('-') {
                Some((_, seg)) if indices.len() == 1 && !lemma.contains('-') && !seg.is_empty() => {
                    seg.to_string()
                }
                _ => key,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatcherConfig {
    /// Most tokens allowed between the two halves of a circumposition.
    pub max_gap: usize,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig { max_gap: 4 }
    }
}

#[derive(Debug, Clone)]
struct Pattern {
    lemma: String,
    category: Category,
    head: Vec<String>,
    tail: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Matcher {
    index: HashMap<String, Vec<Pattern>>,
    categories: HashMap<String, Category>,
    config: MatcherConfig,
}

impl Matcher {
    pub fn new(lexicon: &Lexicon) -> Self {
        Self::with_config(lexicon, MatcherConfig::default())
    }

    pub fn with_config(lexicon: &Lexicon, config: MatcherConfig) -> Self {
        let mut index: HashMap<String, Vec<Pattern>> = HashMap::new();
        let mut categories = HashMap::new();
        for entry in lexicon.entries() {
            categories.insert(entry.lemma.clone(), entry.category);
            for v in &entry.variants {
                let words: Vec<String> = v.words().into_iter().map(String::from).collect();
                let split = v.gap_after().unwrap_or(words.len());
                let (head, tail) = words.split_at(split);
                index.entry(head[0].clone()).or_default().push(Pattern {
                    lemma: entry.lemma.clone(),
                    category: entry.category,
                    head: head.to_vec(),
                    tail: tail.to_vec(),
                });
            }
        }
        Matcher {
            index,
            categories,
            config,
        }
    }

    pub fn config(&self) -> MatcherConfig {
        self.config
    }

    /// All candidate matches, before overlap resolution.
    pub fn candidates(&self, sentence: &Sentence) -> Vec<AdpositionTarget> {
        let tokens: Vec<String> = sentence.tokens.iter().map(|t| normalize_key(t)).collect();
        let mut out = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if let Some(patterns) = self.index.get(tok) {
                for p in patterns {
                    if let Some(indices) = self.match_at(&tokens, i, p) {
                        let surface = indices.iter().map(|&k| tokens[k].clone()).collect();
                        out.push(AdpositionTarget::new(indices, p.lemma.clone(), surface));
                    }
                }
            }
            if let Some((_, seg)) = tok.rsplit_once('-') {
                for p in self.index.get(seg).into_iter().flatten() {
                    if p.category == Category::Suffix && p.head.len() == 1 && p.tail.is_empty() {
                        out.push(AdpositionTarget::new(
                            vec![i],
                            p.lemma.clone(),
                            vec![seg.to_string()],
                        ));
                    }
                }
            }
        }
        out
    }

    fn match_at(&self, tokens: &[String], start: usize, p: &Pattern) -> Option<Vec<usize>> {
        let head_end = start + p.head.len();
        if head_end > tokens.len() || tokens[start..head_end] != p.head[..] {
            return None;
        }
        let mut indices: Vec<usize> = (start..head_end).collect();
        if p.tail.is_empty() {
            return Some(indices);
        }
        for gap in 1..=self.config.max_gap {
            let t0 = head_end + gap;
            let t1 = t0 + p.tail.len();
            if t1 > tokens.len() {
                break;
            }
            if tokens[t0..t1] == p.tail[..] {
                indices.extend(t0..t1);
                return Some(indices);
            }
        }
        None
    }

    /// Keeps a set of non-overlapping targets: more matched tokens first,
    /// then leftmost, then tighter extent, then category priority and
    /// lemma. Output is sorted by first index.
    pub fn resolve_overlaps(&self, mut candidates: Vec<AdpositionTarget>) -> Vec<AdpositionTarget> {
        let priority = |t: &AdpositionTarget| {
            self.categories
                .get(&t.lemma)
                .map(|c| c.priority())
                .unwrap_or(u8::MAX)
        };
        candidates.sort_by(|a, b| {
            let key = |t: &AdpositionTarget| {
                (
                    Reverse(t.token_indices.len()),
                    t.first(),
                    t.last().unwrap_or(0) - t.first().unwrap_or(0),
                    priority(t),
                    t.lemma.clone(),
                    t.token_indices.clone(),
                )
            };
            key(a).cmp(&key(b))
        });
        let mut kept: Vec<AdpositionTarget> = Vec::new();
        for c in candidates {
            if c.token_indices.is_empty() || kept.iter().any(|k| k.overlaps(&c)) {
                continue;
            }
            kept.push(c);
        }
        kept.sort_by(|a, b| a.token_indices.cmp(&b.token_indices));
        kept
    }

    pub fn find_targets(&self, sentence: &Sentence) -> Vec<AdpositionTarget> {
        self.resolve_overlaps(self.candidates(sentence))
    }
}
