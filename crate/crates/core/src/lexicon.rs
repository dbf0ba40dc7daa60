//! The construal-licensing lexicon: markers, their surface variants and
//! the scene↝function pairs each one licenses.
//!
//! Loaded from a TSV file (see `data/lexicon.tsv` for the column layout).
//! Genitive-initial multiword markers (`ke_liye`, `kī_taraf`, ...) also
//! match with the genitive replaced by a fused pronoun form of the same
//! agreement vowel, so `tumhāre liye` resolves to `ke_liye`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::hierarchy::{ConstrualLabel, Hierarchy};
use crate::translit::normalize_key;

pub const BUILTIN_LEXICON: &str = include_str!("../data/lexicon.tsv");

/// Key of the genitive case marker whose fused forms feed the expansion.
pub const GENITIVE_LEMMA: &str = "kā";

/// Pattern token that stands for intervening material.
pub const GAP: &str = "…";

/// The nine functions of the spatio-temporal table, in table order.
pub const TABLE1_FUNCTIONS: [&str; 9] = [
    "Circumstance",
    "Locus",
    "Source",
    "Goal",
    "Extent",
    "Time",
    "StartTime",
    "EndTime",
    "Duration",
];

/// Lemma keys of the seven table columns, in table order.
pub const TABLE1_COLUMNS: [&str; 7] = ["obl", "meṁ", "par", "se", "tak", "ko", "ke_liye"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    CaseMarker,
    SimplePostposition,
    ComplexPostposition,
    Circumposition,
    Suffix,
    Particle,
    AdverbPostposition,
    ObliquePseudoMarker,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::CaseMarker,
        Category::SimplePostposition,
        Category::ComplexPostposition,
        Category::Circumposition,
        Category::Suffix,
        Category::Particle,
        Category::AdverbPostposition,
        Category::ObliquePseudoMarker,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::CaseMarker => "case-marker",
            Category::SimplePostposition => "simple-postposition",
            Category::ComplexPostposition => "complex-postposition",
            Category::Circumposition => "circumposition",
            Category::Suffix => "suffix",
            Category::Particle => "particle",
            Category::AdverbPostposition => "adverb-postposition",
            Category::ObliquePseudoMarker => "oblique-pseudo-marker",
        }
    }

    /// Tie-break order when one token sequence belongs to several lemmas.
    /// Lower wins.
    pub fn priority(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantKind {
    /// The lemma's own token sequence.
    Canonical,
    Inflection,
    FusedPronoun,
    Contraction,
    CircumpositionSplit,
}

impl VariantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VariantKind::Canonical => "canonical",
            VariantKind::Inflection => "inflection",
            VariantKind::FusedPronoun => "fused-pronoun",
            VariantKind::Contraction => "contraction",
            VariantKind::CircumpositionSplit => "circumposition-split",
        }
    }
}

impl FromStr for VariantKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            VariantKind::Inflection,
            VariantKind::FusedPronoun,
            VariantKind::Contraction,
            VariantKind::CircumpositionSplit,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| format!("unknown variant kind {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PatternToken {
    Word(String),
    Gap,
}

impl From<PatternToken> for String {
    fn from(t: PatternToken) -> String {
        match t {
            PatternToken::Word(w) => w,
            PatternToken::Gap => GAP.to_string(),
        }
    }
}

impl TryFrom<String> for PatternToken {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        if s == GAP || s == "..." {
            return Ok(PatternToken::Gap);
        }
        let key = normalize_key(&s);
        if key.is_empty() || key != s {
            return Err(format!("pattern token {s:?} is not a normalized key"));
        }
        Ok(PatternToken::Word(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceVariant {
    pub surface_tokens: Vec<PatternToken>,
    pub kind: VariantKind,
}

impl SurfaceVariant {
    pub fn parse(pattern: &str, kind: VariantKind) -> Result<Self, String> {
        let mut surface_tokens = Vec::new();
        for raw in pattern.split('+') {
            let raw = raw.trim();
            if raw == GAP || raw == "..." {
                surface_tokens.push(PatternToken::Gap);
            } else {
                let key = normalize_key(raw);
                if key.is_empty() {
                    return Err(format!("empty token in pattern {pattern:?}"));
                }
                surface_tokens.push(PatternToken::Word(key));
            }
        }
        let gaps = surface_tokens
            .iter()
            .filter(|t| **t == PatternToken::Gap)
            .count();
        if gaps > 1 {
            return Err(format!("pattern {pattern:?} has more than one gap"));
        }
        if surface_tokens.first() == Some(&PatternToken::Gap)
            || surface_tokens.last() == Some(&PatternToken::Gap)
        {
            return Err(format!("pattern {pattern:?} starts or ends with a gap"));
        }
        if (kind == VariantKind::CircumpositionSplit) != (gaps == 1) {
            return Err(format!(
                "pattern {pattern:?}: a gap appears exactly in circumposition-split variants"
            ));
        }
        Ok(SurfaceVariant {
            surface_tokens,
            kind,
        })
    }

    /// The word tokens with the gap removed.
    pub fn words(&self) -> Vec<&str> {
        self.surface_tokens
            .iter()
            .filter_map(|t| match t {
                PatternToken::Word(w) => Some(w.as_str()),
                PatternToken::Gap => None,
            })
            .collect()
    }

    pub fn is_discontinuous(&self) -> bool {
        self.surface_tokens.contains(&PatternToken::Gap)
    }

    /// Number of words before the gap, if any.
    pub fn gap_after(&self) -> Option<usize> {
        self.surface_tokens
            .iter()
            .position(|t| *t == PatternToken::Gap)
    }
}

impl fmt::Display for SurfaceVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .surface_tokens
            .iter()
            .cloned()
            .map(String::from)
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct License {
    pub construal: ConstrualLabel,
    pub source_section: String,
    pub condition: Option<String>,
    pub rank: u32,
    /// Scene role is predicate-licensed; other scenes with this function
    /// are warnings, not errors.
    pub open_scene: bool,
    /// Force-dynamic analyses the guidelines leave open.
    pub provisional: bool,
    /// Speaker-variable uses the guidelines mark as unresolved.
    pub unresolved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEntry {
    pub lemma: String,
    pub category: Category,
    pub script_forms: Vec<String>,
    pub variants: Vec<SurfaceVariant>,
    /// Ordered by rank, then label text.
    pub licenses: Vec<License>,
    /// Guideline anchors cited by this entry's licenses.
    pub notes: Vec<String>,
    pub register_pair: Option<String>,
}

impl LexEntry {
    pub fn license_for(&self, construal: &ConstrualLabel) -> Option<&License> {
        self.licenses.iter().find(|l| &l.construal == construal)
    }

    pub fn licenses_function(&self, function: &str) -> bool {
        self.licenses.iter().any(|l| l.construal.function == function)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: {lemma} licenses {construal} twice")]
    DuplicateLicense {
        line: usize,
        lemma: String,
        construal: String,
    },
    #[error("line {line}: {lemma} was declared {first} and now {second}")]
    CategoryConflict {
        line: usize,
        lemma: String,
        first: Category,
        second: Category,
    },
    #[error("{lemma}: {message}")]
    Entry { lemma: String, message: String },
    #[error("pattern {pattern} belongs to both {first} and {second}")]
    SharedVariant {
        pattern: String,
        first: String,
        second: String,
    },
    #[error("unknown lemma {0:?}")]
    UnknownLemma(String),
    #[error("{0:?} is not a column of the spatio-temporal table")]
    NotTableColumn(String),
    #[error("reading lexicon: {0}")]
    Io(String),
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
    /// Gap-free word sequence to owning lemmas, best first.
    by_words: HashMap<Vec<String>, Vec<String>>,
}

#[derive(Default)]
struct Draft {
    category: Option<Category>,
    script_forms: Vec<String>,
    variants: Vec<SurfaceVariant>,
    licenses: Vec<License>,
    register_pair: Option<String>,
    first_line: usize,
}

impl Lexicon {
    pub fn builtin(hierarchy: &Hierarchy) -> Result<Self, LexiconError> {
        Self::parse(BUILTIN_LEXICON, hierarchy)
    }

    pub fn load(path: impl AsRef<Path>, hierarchy: &Hierarchy) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| LexiconError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, hierarchy)
    }

    pub fn parse(text: &str, hierarchy: &Hierarchy) -> Result<Self, LexiconError> {
        let mut drafts: BTreeMap<String, Draft> = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let syntax = |message: String| LexiconError::Syntax { line, message };
            let cols: Vec<String> = raw.split('\t').map(|c| c.trim().nfc().collect()).collect();
            if cols.len() != 9 {
                return Err(syntax(format!("expected 9 columns, found {}", cols.len())));
            }
            let dash = |s: &str| s.is_empty() || s == "-";

            let lemma = cols[0].clone();
            if lemma.is_empty() || normalize_key(&lemma) != lemma {
                return Err(syntax(format!("lemma {lemma:?} is not a normalized key")));
            }
            let category: Category = cols[1].parse().map_err(syntax)?;

            let draft = drafts.entry(lemma.clone()).or_default();
            if draft.first_line == 0 {
                draft.first_line = line;
            }
            match draft.category {
                Some(first) if first != category => {
                    return Err(LexiconError::CategoryConflict {
                        line,
                        lemma,
                        first,
                        second: category,
                    })
                }
                _ => draft.category = Some(category),
            }

            let mut kind = None;
            let mut open_scene = false;
            let mut provisional = false;
            let mut unresolved = false;
            if !dash(&cols[8]) {
                for flag in cols[8].split(';').map(str::trim).filter(|f| !f.is_empty()) {
                    match flag.split_once('=') {
                        None => match flag {
                            "open-scene" => open_scene = true,
                            "provisional" => provisional = true,
                            "unresolved" => unresolved = true,
                            other => return Err(syntax(format!("unknown flag {other:?}"))),
                        },
                        Some(("kind", v)) => kind = Some(v.parse::<VariantKind>().map_err(syntax)?),
                        Some(("dev", v)) => {
                            let form: String = v.nfc().collect();
                            if !draft.script_forms.contains(&form) {
                                draft.script_forms.push(form);
                            }
                        }
                        Some(("register_pair", v)) => {
                            let v = normalize_key(v);
                            if let Some(prev) = &draft.register_pair {
                                if *prev != v {
                                    return Err(syntax(format!(
                                        "conflicting register_pair {prev} and {v}"
                                    )));
                                }
                            }
                            draft.register_pair = Some(v);
                        }
                        Some((k, _)) => return Err(syntax(format!("unknown flag {k:?}"))),
                    }
                }
            }

            let (scene, function) = (&cols[3], &cols[4]);
            match (dash(scene), dash(function)) {
                (true, true) => {
                    if dash(&cols[2]) {
                        if kind.is_some() {
                            return Err(syntax("kind= without a variant pattern".into()));
                        }
                        continue;
                    }
                    let kind = kind.ok_or_else(|| syntax("variant row needs kind=".into()))?;
                    if !dash(&cols[7]) {
                        return Err(syntax("variant rows carry no rank".into()));
                    }
                    for pattern in cols[2].split(';').map(str::trim).filter(|p| !p.is_empty()) {
                        let variant = SurfaceVariant::parse(pattern, kind).map_err(syntax)?;
                        if !draft.variants.contains(&variant) {
                            draft.variants.push(variant);
                        }
                    }
                }
                (false, false) => {
                    if kind.is_some() || !dash(&cols[2]) {
                        return Err(syntax("license rows take no variant pattern".into()));
                    }
                    for label in [scene, function] {
                        if !hierarchy.contains(label) {
                            return Err(LexiconError::UnknownLabel {
                                line,
                                label: label.clone(),
                            });
                        }
                    }
                    let construal = ConstrualLabel::new(scene.clone(), function.clone());
                    if draft.licenses.iter().any(|l| l.construal == construal) {
                        return Err(LexiconError::DuplicateLicense {
                            line,
                            lemma,
                            construal: construal.to_string(),
                        });
                    }
                    if dash(&cols[5]) {
                        return Err(syntax("license rows need a section anchor".into()));
                    }
                    let rank = cols[7]
                        .parse::<u32>()
                        .map_err(|_| syntax(format!("bad rank {:?}", cols[7])))?;
                    draft.licenses.push(License {
                        construal,
                        source_section: cols[5].clone(),
                        condition: (!dash(&cols[6])).then(|| cols[6].clone()),
                        rank,
                        open_scene,
                        provisional,
                        unresolved,
                    });
                }
                _ => return Err(syntax("scene and function must both be given or both be \"-\"".into())),
            }
        }

        let mut entries = BTreeMap::new();
        for (lemma, draft) in drafts {
            let category = draft.category.expect("set on first row");
            let mut variants = Vec::new();
            if category != Category::ObliquePseudoMarker {
                let canonical = SurfaceVariant {
                    surface_tokens: lemma
                        .split('_')
                        .map(|w| PatternToken::Word(w.to_string()))
                        .collect(),
                    kind: VariantKind::Canonical,
                };
                variants.push(canonical);
            } else if !draft.variants.is_empty() {
                return Err(LexiconError::Entry {
                    lemma,
                    message: "the oblique pseudo-marker has no surface variants".into(),
                });
            }
            for v in draft.variants {
                if !variants.contains(&v) {
                    variants.push(v);
                }
            }
            if draft.licenses.is_empty() {
                return Err(LexiconError::Entry {
                    lemma,
                    message: "no licenses".into(),
                });
            }
            let has_gap = variants.iter().any(SurfaceVariant::is_discontinuous);
            if has_gap != (category == Category::Circumposition) {
                return Err(LexiconError::Entry {
                    lemma,
                    message: "category circumposition iff some variant is discontinuous".into(),
                });
            }
            let mut licenses = draft.licenses;
            licenses.sort_by(|a, b| {
                (a.rank, a.construal.to_string()).cmp(&(b.rank, b.construal.to_string()))
            });
            let mut notes: Vec<String> = Vec::new();
            for l in &licenses {
                if !notes.contains(&l.source_section) {
                    notes.push(l.source_section.clone());
                }
            }
            entries.insert(
                lemma.clone(),
                LexEntry {
                    lemma,
                    category,
                    script_forms: draft.script_forms,
                    variants,
                    licenses,
                    notes,
                    register_pair: draft.register_pair,
                },
            );
        }

        for entry in entries.values() {
            if let Some(pair) = &entry.register_pair {
                let back = entries.get(pair).and_then(|e| e.register_pair.as_deref());
                if back != Some(entry.lemma.as_str()) {
                    return Err(LexiconError::Entry {
                        lemma: entry.lemma.clone(),
                        message: format!("register_pair {pair} is not reciprocal"),
                    });
                }
            }
        }

        expand_fused_genitives(&mut entries);

        let mut owners: HashMap<Vec<PatternToken>, String> = HashMap::new();
        let mut by_words: HashMap<Vec<String>, Vec<String>> = HashMap::new();
        for entry in entries.values() {
            for v in &entry.variants {
                if let Some(first) = owners.get(&v.surface_tokens) {
                    if *first != entry.lemma {
                        return Err(LexiconError::SharedVariant {
                            pattern: v.to_string(),
                            first: first.clone(),
                            second: entry.lemma.clone(),
                        });
                    }
                }
                owners.insert(v.surface_tokens.clone(), entry.lemma.clone());
                let words: Vec<String> = v.words().into_iter().map(String::from).collect();
                let slot = by_words.entry(words).or_default();
                if !slot.contains(&entry.lemma) {
                    slot.push(entry.lemma.clone());
                }
            }
        }
        for lemmas in by_words.values_mut() {
            lemmas.sort_by_key(|l| (entries[l].category.priority(), l.clone()));
        }

        Ok(Lexicon { entries, by_words })
    }

    pub fn lookup(&self, key: &str) -> Option<&LexEntry> {
        self.entries.get(&normalize_key(key))
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The lemma owning a variant whose words equal `tokens` (gaps are
    /// ignored). When several lemmas share the sequence, category
    /// priority and then lemma order decide.
    pub fn normalize_surface<S: AsRef<str>>(&self, tokens: &[S]) -> Option<&str> {
        self.surface_candidates(tokens).first().copied()
    }

    /// Every lemma owning the token sequence, best first.
    pub fn surface_candidates<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<&str> {
        let key: Vec<String> = tokens.iter().map(|t| normalize_key(t.as_ref())).collect();
        self.by_words
            .get(&key)
            .map(|v| v.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    pub fn licensed_construals(&self, lemma: &str) -> Result<Vec<ConstrualLabel>, LexiconError> {
        let entry = self
            .lookup(lemma)
            .ok_or_else(|| LexiconError::UnknownLemma(lemma.to_string()))?;
        Ok(entry.licenses.iter().map(|l| l.construal.clone()).collect())
    }

    /// One row of the spatio-temporal table: for each of
    /// [`TABLE1_FUNCTIONS`], whether the column licenses some construal
    /// with that function. Accepts a column lemma or any surface form of
    /// one (`pe`, `ke_lie`).
    pub fn allowed_functions(&self, column: &str) -> Result<Vec<(&'static str, bool)>, LexiconError> {
        let key = normalize_key(column);
        let lemma = if self.entries.contains_key(&key) {
            key.clone()
        } else {
            let words: Vec<&str> = key.split('_').collect();
            self.normalize_surface(&words)
                .map(String::from)
                .ok_or_else(|| LexiconError::NotTableColumn(column.to_string()))?
        };
        if !TABLE1_COLUMNS.contains(&lemma.as_str()) {
            return Err(LexiconError::NotTableColumn(column.to_string()));
        }
        let entry = &self.entries[&lemma];
        Ok(TABLE1_FUNCTIONS
            .iter()
            .map(|f| (*f, entry.licenses_function(f)))
            .collect())
    }

    /// All distinct functions any lemma licenses.
    pub fn functions(&self) -> BTreeSet<&str> {
        self.entries
            .values()
            .flat_map(|e| e.licenses.iter().map(|l| l.construal.function.as_str()))
            .collect()
    }
}

fn expand_fused_genitives(entries: &mut BTreeMap<String, LexEntry>) {
    let Some(genitive) = entries.get(GENITIVE_LEMMA) else {
        return;
    };
    let single = |kinds: &[VariantKind]| -> Vec<String> {
        genitive
            .variants
            .iter()
            .filter(|v| kinds.contains(&v.kind) && v.surface_tokens.len() == 1)
            .flat_map(|v| v.words().into_iter().map(String::from))
            .collect()
    };
    let plain = single(&[VariantKind::Canonical, VariantKind::Inflection]);
    let fused = single(&[VariantKind::FusedPronoun]);

    for entry in entries.values_mut() {
        if entry.lemma == GENITIVE_LEMMA {
            continue;
        }
        let mut extra = Vec::new();
        for v in &entry.variants {
            if v.is_discontinuous() || v.surface_tokens.len() < 2 {
                continue;
            }
            let PatternToken::Word(head) = &v.surface_tokens[0] else {
                continue;
            };
            if !plain.contains(head) {
                continue;
            }
            let vowel = head.chars().last();
            for form in fused.iter().filter(|f| f.chars().last() == vowel) {
                let mut tokens = v.surface_tokens.clone();
                tokens[0] = PatternToken::Word(form.clone());
                let variant = SurfaceVariant {
                    surface_tokens: tokens,
                    kind: VariantKind::FusedPronoun,
                };
                if !entry.variants.contains(&variant) && !extra.contains(&variant) {
                    extra.push(variant);
                }
            }
        }
        entry.variants.extend(extra);
    }
}
