//! Annotation interchange format, document store, and corpus statistics.
//!
//! ```text
//! #snacs-hi-corpus v1
//! #doc gold
//! #meta title<TAB>Guideline examples
//!
//! # sent_id = s1
//! # anchor = Topic
//! 0<TAB>tumhāre
//! 1<TAB>bāre
//! 2<TAB>meṁ
//! 3<TAB>bāt
//! @ 0,1,2<TAB>ke_bāre_meṁ<TAB>Topic<TAB>gold<TAB>confirmed
//! ```
//!
//! Lines starting with `##` are comments. Parsing is strict: nothing is
//! repaired, and every error carries a line and column.

mod stats;
mod store;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::ConstrualLabel;
use crate::matcher::{target_surface, AdpositionTarget, Sentence};
use crate::translit::normalize_key;
use crate::validator::{AnnotationRecord, IssueCode, Status, ValidationIssue};

pub use stats::{stats, StatsReport};
pub use store::{DocumentStore, StoreError, VERSION_KEY};

pub const HEADER: &str = "#snacs-hi-corpus v1";
pub const BUILTIN_GOLD: &str = include_str!("../../data/gold.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    #[serde(default)]
    pub sentences: Vec<Sentence>,
    #[serde(default)]
    pub records: Vec<AnnotationRecord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A well-formed file whose content breaks a document invariant.
    /// `line` is 0 when the document did not come from a file.
    #[error("line {line}: {code}: {message}")]
    Load {
        line: usize,
        code: IssueCode,
        message: String,
    },
}

impl CorpusError {
    pub fn code(&self) -> IssueCode {
        match self {
            CorpusError::Parse { .. } => IssueCode::ParseError,
            CorpusError::Load { code, .. } => *code,
        }
    }

    /// The error as a validation issue located in `source`.
    pub fn to_issue(&self, source: &str) -> ValidationIssue {
        let (location, message) = match self {
            CorpusError::Parse { line, column, message } => (format!("{source}:{line}:{column}"), message),
            CorpusError::Load { line: 0, message, .. } => (source.to_string(), message),
            CorpusError::Load { line, message, .. } => (format!("{source}:{line}"), message),
        };
        ValidationIssue::error(self.code(), &location, message.clone())
    }
}

fn load_err(line: usize, code: IssueCode, message: impl Into<String>) -> CorpusError {
    CorpusError::Load {
        line,
        code,
        message: message.into(),
    }
}

/// Document and sentence ids: ASCII letters, digits, `-`, `_`, `.`, not
/// starting with a dot.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

fn is_word(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl Document {
    pub fn new(id: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            ..Default::default()
        }
    }

    pub fn sentence(&self, id: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.id == id)
    }

    pub fn version(&self) -> u64 {
        self.metadata
            .get(VERSION_KEY)
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    }

    /// Normalizes lemma keys, recomputes target surfaces and gap flags
    /// from the sentence tokens, and sorts records into file order.
    pub fn canonicalize(&mut self) {
        let pos: HashMap<&str, (usize, &Sentence)> = self
            .sentences
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), (i, s)))
            .collect();
        for r in &mut self.records {
            r.target.lemma = normalize_key(&r.target.lemma);
            if let Some((_, s)) = pos.get(r.sentence_id.as_str()) {
                r.target.surface = target_surface(&s.tokens, &r.target.token_indices, &r.target.lemma);
            }
            r.target.discontinuous = !crate::matcher::is_contiguous(&r.target.token_indices);
        }
        self.records.sort_by(|a, b| {
            let pa = pos.get(a.sentence_id.as_str()).map(|p| p.0);
            let pb = pos.get(b.sentence_id.as_str()).map(|p| p.0);
            (pa, record_key(a)).cmp(&(pb, record_key(b)))
        });
    }

    /// Checks the invariants the file format relies on.
    pub fn check(&self) -> Result<(), CorpusError> {
        if !valid_id(&self.id) {
            return Err(load_err(0, IssueCode::ParseError, format!("invalid document id {:?}", self.id)));
        }
        for (k, v) in &self.metadata {
            if !is_word(k) || v.contains(['\t', '\n', '\r']) {
                return Err(load_err(0, IssueCode::ParseError, format!("invalid metadata entry {k:?}")));
            }
        }
        let mut seen = HashSet::new();
        for s in &self.sentences {
            check_sentence(s, 0)?;
            if !seen.insert(s.id.as_str()) {
                return Err(load_err(0, IssueCode::Duplicate, format!("sentence {} appears twice", s.id)));
            }
        }
        for r in &self.records {
            let Some(s) = self.sentence(&r.sentence_id) else {
                return Err(load_err(
                    0,
                    IssueCode::UnknownSentence,
                    format!("record {} names no sentence of this document", r.location()),
                ));
            };
            check_indices(&r.target.token_indices, s.tokens.len()).map_err(|m| {
                load_err(0, IssueCode::MalformedTarget, format!("{}: {m}", r.location()))
            })?;
            if !is_word(&r.target.lemma) || !is_word(&r.annotator) {
                return Err(load_err(
                    0,
                    IssueCode::ParseError,
                    format!("{}: lemma and annotator must be single words", r.location()),
                ));
            }
            let label = r.construal.to_string();
            if label.parse::<ConstrualLabel>().ok().as_ref() != Some(&r.construal) {
                return Err(load_err(0, IssueCode::UnknownLabel, format!("{}: bad label {label:?}", r.location())));
            }
        }
        Ok(())
    }
}

fn record_key(r: &AnnotationRecord) -> (Vec<usize>, String, String, String, Status) {
    (
        r.target.token_indices.clone(),
        r.target.lemma.clone(),
        r.annotator.clone(),
        r.construal.to_string(),
        r.status,
    )
}

fn check_sentence(s: &Sentence, line: usize) -> Result<(), CorpusError> {
    if !valid_id(&s.id) {
        return Err(load_err(line, IssueCode::ParseError, format!("invalid sentence id {:?}", s.id)));
    }
    if s.tokens.is_empty() {
        return Err(load_err(line, IssueCode::ParseError, format!("sentence {} has no tokens", s.id)));
    }
    if let Some(t) = s.tokens.iter().find(|t| !is_word(t)) {
        return Err(load_err(line, IssueCode::ParseError, format!("sentence {}: bad token {t:?}", s.id)));
    }
    for (k, v) in &s.attributes {
        let key_ok = is_word(k) && !k.contains('=') && k != "sent_id";
        if !key_ok || v.is_empty() || v.trim() != v || v.contains(['\n', '\r']) {
            return Err(load_err(line, IssueCode::ParseError, format!("sentence {}: bad attribute {k:?}", s.id)));
        }
    }
    Ok(())
}

fn check_indices(idx: &[usize], len: usize) -> Result<(), String> {
    if idx.is_empty() {
        return Err("target has no tokens".into());
    }
    if !idx.windows(2).all(|w| w[0] < w[1]) {
        return Err("token indices must be strictly increasing".into());
    }
    let last = idx[idx.len() - 1];
    if last >= len {
        return Err(format!("token index {last} is past the sentence end ({len} tokens)"));
    }
    Ok(())
}

struct Block {
    sentence: Sentence,
    line: usize,
    records: Vec<(usize, AnnotationRecord)>,
}

struct Parser {
    docs: Vec<Document>,
    doc_lines: Vec<usize>,
    block: Option<Block>,
}

impl Parser {
    fn flush(&mut self) -> Result<(), CorpusError> {
        let Some(b) = self.block.take() else {
            return Ok(());
        };
        check_sentence(&b.sentence, b.line)?;
        let doc = self.docs.last_mut().expect("block implies a document");
        if doc.sentence(&b.sentence.id).is_some() {
            return Err(load_err(
                b.line,
                IssueCode::Duplicate,
                format!("sentence {} appears twice in document {}", b.sentence.id, doc.id),
            ));
        }
        for (line, mut r) in b.records {
            check_indices(&r.target.token_indices, b.sentence.tokens.len())
                .map_err(|m| load_err(line, IssueCode::MalformedTarget, m))?;
            r.target.surface = target_surface(&b.sentence.tokens, &r.target.token_indices, &r.target.lemma);
            doc.records.push(r);
        }
        doc.sentences.push(b.sentence);
        Ok(())
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on tabs, pairing each field with its 1-based character column.
fn fields(line: &str, start_col: usize) -> Vec<(usize, &str)> {
    let mut col = start_col;
    line.split('\t')
        .map(|f| {
            let here = col;
            col += f.chars().count() + 1;
            (here, f)
        })
        .collect()
}

/// Parses a corpus file. Documents come back canonicalized.
pub fn parse_file(text: &str) -> Result<Vec<Document>, CorpusError> {
    let mut p = Parser {
        docs: Vec::new(),
        doc_lines: Vec::new(),
        block: None,
    };
    for (n, line) in text.split('\n').enumerate() {
        let ln = n + 1;
        if let Some(pos) = line.find('\r') {
            return Err(perr(ln, line[..pos].chars().count() + 1, "carriage return; files use LF line endings"));
        }
        if line.starts_with("##") {
            continue;
        }
        if line.is_empty() {
            p.flush()?;
            continue;
        }
        if line.starts_with("#snacs-hi-corpus") {
            if ln != 1 || line != HEADER {
                return Err(perr(ln, 1, format!("expected {HEADER:?} as the first line only")));
            }
            continue;
        }
        if let Some(id) = line.strip_prefix("#doc ") {
            p.flush()?;
            if !valid_id(id) {
                return Err(perr(ln, 6, format!("invalid document id {id:?}")));
            }
            if p.docs.iter().any(|d| d.id == id) {
                return Err(load_err(ln, IssueCode::Duplicate, format!("document {id} appears twice")));
            }
            p.docs.push(Document::new(id));
            p.doc_lines.push(ln);
            continue;
        }
        if let Some(rest) = line.strip_prefix("#meta ") {
            let Some(doc) = p.docs.last_mut() else {
                return Err(perr(ln, 1, "#meta before any #doc"));
            };
            if p.block.is_some() || !doc.sentences.is_empty() {
                return Err(perr(ln, 1, "#meta must precede the document's sentences"));
            }
            let f = fields(rest, 7);
            if f.len() != 2 || !is_word(f[0].1) {
                return Err(perr(ln, 7, "expected #meta <key><TAB><value>"));
            }
            if doc.metadata.insert(f[0].1.to_string(), f[1].1.to_string()).is_some() {
                return Err(perr(ln, 7, format!("metadata key {:?} repeated", f[0].1)));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let Some((key, value)) = rest.split_once(" = ") else {
                return Err(perr(ln, 3, "expected # <key> = <value>"));
            };
            if key == "sent_id" {
                p.flush()?;
                if p.docs.is_empty() {
                    return Err(perr(ln, 1, "sentence outside a document"));
                }
                if !valid_id(value) {
                    return Err(perr(ln, 13, format!("invalid sentence id {value:?}")));
                }
                p.block = Some(Block {
                    sentence: Sentence::new(value, Vec::new()),
                    line: ln,
                    records: Vec::new(),
                });
                continue;
            }
            let Some(b) = p.block.as_mut() else {
                return Err(perr(ln, 1, "attribute outside a sentence block"));
            };
            if !b.sentence.tokens.is_empty() {
                return Err(perr(ln, 1, "attributes must precede the tokens"));
            }
            if !is_word(key) || value.is_empty() || value.trim() != value {
                return Err(perr(ln, 3, "malformed attribute"));
            }
            if b.sentence.attributes.insert(key.into(), value.into()).is_some() {
                return Err(perr(ln, 3, format!("attribute {key:?} repeated")));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("@ ") {
            let Some(b) = p.block.as_mut() else {
                return Err(perr(ln, 1, "record outside a sentence block"));
            };
            let record = parse_record(rest, ln, &b.sentence.id)?;
            b.records.push((ln, record));
            continue;
        }
        if line.starts_with('#') || line.starts_with('@') {
            return Err(perr(ln, 1, "unrecognized directive"));
        }
        let Some(b) = p.block.as_mut() else {
            return Err(perr(ln, 1, "token line outside a sentence block"));
        };
        if !b.records.is_empty() {
            return Err(perr(ln, 1, "token lines must precede the records"));
        }
        let f = fields(line, 1);
        if f.len() != 2 {
            return Err(perr(ln, 1, "expected <index><TAB><form>"));
        }
        let expected = b.sentence.tokens.len();
        if f[0].1.parse::<usize>().ok() != Some(expected) || f[0].1 != expected.to_string() {
            return Err(perr(ln, 1, format!("expected token index {expected}")));
        }
        if !is_word(f[1].1) {
            return Err(perr(ln, f[1].0, "token form must be non-empty with no spaces"));
        }
        b.sentence.tokens.push(f[1].1.to_string());
    }
    p.flush()?;
    let mut docs = p.docs;
    for d in &mut docs {
        d.canonicalize();
    }
    Ok(docs)
}

fn parse_record(rest: &str, ln: usize, sentence_id: &str) -> Result<AnnotationRecord, CorpusError> {
    let f = fields(rest, 3);
    if f.len() != 5 {
        return Err(perr(ln, 3, format!("expected 5 tab-separated fields, found {}", f.len())));
    }
    let mut indices = Vec::new();
    let mut col = f[0].0;
    for part in f[0].1.split(',') {
        let ok = !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit());
        match part.parse::<usize>() {
            Ok(i) if ok => indices.push(i),
            _ => return Err(perr(ln, col, format!("bad token index {part:?}"))),
        }
        col += part.chars().count() + 1;
    }
    let (lcol, lemma) = f[1];
    if !is_word(lemma) || normalize_key(lemma) != lemma {
        return Err(perr(ln, lcol, format!("lemma {lemma:?} is not a normalized key")));
    }
    let construal: ConstrualLabel = f[2]
        .1
        .parse()
        .map_err(|e| perr(ln, f[2].0, format!("{e}")))?;
    let (acol, annotator) = f[3];
    if !is_word(annotator) {
        return Err(perr(ln, acol, "annotator must be non-empty with no spaces"));
    }
    let status: Status = f[4].1.parse().map_err(|e: String| perr(ln, f[4].0, e))?;
    Ok(AnnotationRecord {
        sentence_id: sentence_id.to_string(),
        target: AdpositionTarget::new(indices, lemma, Vec::new()),
        construal,
        annotator: annotator.to_string(),
        status,
    })
}

/// Canonical text: records sorted within their sentence, keys normalized.
pub fn serialize(docs: &[Document]) -> Result<String, CorpusError> {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for doc in docs {
        doc.check()?;
        let mut doc = doc.clone();
        doc.canonicalize();
        out.push_str("#doc ");
        out.push_str(&doc.id);
        out.push('\n');
        for (k, v) in &doc.metadata {
            out.push_str(&format!("#meta {k}\t{v}\n"));
        }
        for s in &doc.sentences {
            out.push_str(&format!("\n# sent_id = {}\n", s.id));
            for (k, v) in &s.attributes {
                out.push_str(&format!("# {k} = {v}\n"));
            }
            for (i, t) in s.tokens.iter().enumerate() {
                out.push_str(&format!("{i}\t{t}\n"));
            }
            for r in doc.records.iter().filter(|r| r.sentence_id == s.id) {
                out.push_str(&format!(
                    "@ {}\t{}\t{}\t{}\t{}\n",
                    r.target.indices_text(),
                    r.target.lemma,
                    r.construal,
                    r.annotator,
                    r.status.as_str()
                ));
            }
        }
    }
    Ok(out)
}

/// The bundled gold corpus of guideline examples.
pub fn gold() -> Vec<Document> {
    parse_file(BUILTIN_GOLD).expect("bundled gold corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "#snacs-hi-corpus v1\n#doc d1\n#meta title\tsmall\n\n# sent_id = s1\n# anchor = Topic\n0\ttumhāre\n1\tbāre\n2\tmeṁ\n3\tbāt\n@ 0,1,2\tke_bāre_meṁ\tTopic\tgold\tconfirmed\n\n# sent_id = s2\n0\tmerā\n1\tnām\n@ 0\tkā\tGestalt\ta\tdraft\n";

    #[test]
    fn parse_small() {
        let docs = parse_file(SMALL).unwrap();
        assert_eq!(docs.len(), 1);
        let d = &docs[0];
        assert_eq!(d.metadata["title"], "small");
        assert_eq!(d.sentences.len(), 2);
        assert_eq!(d.sentences[0].attributes["anchor"], "Topic");
        assert_eq!(d.records[0].target.surface, vec!["tumhāre", "bāre", "meṁ"]);
        assert_eq!(d.records[1].status, Status::Draft);
        assert_eq!(serialize(&docs).unwrap(), SMALL);
    }

    #[test]
    fn errors_as_issues() {
        let err = parse_file("#snacs-hi-corpus v1\n#doc d\n\n# sent_id = s\n0\tx\n@ 3\tko\tGoal\ta\tdraft\n").unwrap_err();
        let issue = err.to_issue("f.tsv");
        assert_eq!(issue.code, IssueCode::MalformedTarget);
        assert_eq!(issue.location, "f.tsv:6");
        let err = parse_file("#doc d\n\n# sent_id = s\nx\n").unwrap_err();
        assert_eq!(err.to_issue("f.tsv").location, format!("f.tsv:4:1"));
    }

    #[test]
    fn empty_inputs() {
        assert!(parse_file("").unwrap().is_empty());
        assert!(parse_file("#snacs-hi-corpus v1\n").unwrap().is_empty());
        assert_eq!(serialize(&[]).unwrap(), "#snacs-hi-corpus v1\n");
        let empty = serialize(&[Document::new("x")]).unwrap();
        assert_eq!(empty, "#snacs-hi-corpus v1\n#doc x\n");
        assert_eq!(parse_file(&empty).unwrap(), vec![Document::new("x")]);
    }

    #[test]
    fn congruent_label_prints_bare() {
        let text = SMALL.replace("kā\tGestalt", "kā\tGestalt↝Gestalt");
        let docs = parse_file(&text).unwrap();
        assert_eq!(serialize(&docs).unwrap(), SMALL);
    }

    #[test]
    fn records_are_sorted() {
        let text = "#doc d\n\n# sent_id = s\n0\ta\n1\tb\n@ 1\tko\tGoal\tx\tdraft\n@ 0\tko\tTheme\tx\tdraft\n";
        let docs = parse_file(text).unwrap();
        assert_eq!(docs[0].records[0].target.token_indices, vec![0]);
        let again = serialize(&docs).unwrap();
        assert_eq!(serialize(&parse_file(&again).unwrap()).unwrap(), again);
    }

    #[test]
    fn errors_carry_positions() {
        let past_end = SMALL.replace("@ 0\tkā", "@ 7\tkā");
        match parse_file(&past_end).unwrap_err() {
            CorpusError::Load { line, code, .. } => {
                assert_eq!(code, IssueCode::MalformedTarget);
                assert_eq!(line, 16);
            }
            e => panic!("unexpected {e}"),
        }
        let bad_status = SMALL.replace("a\tdraft", "a\tdone");
        assert!(matches!(
            parse_file(&bad_status).unwrap_err(),
            CorpusError::Parse { line: 16, column: 18, .. }
        ));
        let bad_lemma = SMALL.replace("\tkā\t", "\tKā\t");
        assert!(matches!(parse_file(&bad_lemma).unwrap_err(), CorpusError::Parse { column: 5, .. }));
        let skipped = SMALL.replace("1\tnām", "2\tnām");
        assert!(matches!(parse_file(&skipped).unwrap_err(), CorpusError::Parse { line: 15, .. }));
        assert!(parse_file("# sent_id = s\n0\ta\n").is_err());
        assert!(parse_file(&SMALL.replace('\n', "\r\n")).is_err());
        let dup = format!("{SMALL}\n# sent_id = s1\n0\tx\n");
        assert_eq!(parse_file(&dup).unwrap_err().code(), IssueCode::Duplicate);
    }

    #[test]
    fn comments_are_skipped() {
        let text = SMALL.replace("#doc d1\n", "#doc d1\n## a note\n");
        assert_eq!(parse_file(&text).unwrap(), parse_file(SMALL).unwrap());
    }
}
