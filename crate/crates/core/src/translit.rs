//! Devanagari to IAST-style romanization, and key normalization for
//! romanized lookups.
//!
//! Romanization is rule-based. Each word is split into consonant and
//! vowel segments, the inherent vowel is inserted after every bare
//! consonant, and then schwa deletion runs:
//!
//! 1. a word-final inherent vowel is dropped (unless it is the only vowel
//!    of the word);
//! 2. scanning right to left, an inherent vowel in the context
//!    `V C _ C V` is dropped. A deletion turns its left neighbour into a
//!    cluster, so two adjacent syllables never both lose their vowel.
//!
//! Anusvara and candrabindu both come out as `ṁ`. Whole-word overrides
//! can be supplied through an exceptions table.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

pub const BUILTIN_EXCEPTIONS: &str = include_str!("../data/translit_exceptions.tsv");

const VIRAMA: char = '\u{094D}';
const NUQTA: char = '\u{093C}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    NativeScript,
    AlreadyRomanized,
}

/// Romanized text in NFC.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RomanizedText {
    pub text: String,
    pub provenance: Provenance,
}

impl fmt::Display for RomanizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A Devanagari code point the transliterator has no rule for. It is
/// dropped from the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslitWarning {
    /// Character offset in the NFC-normalized input.
    pub offset: usize,
    pub code_point: char,
}

impl fmt::Display for TranslitWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unmapped code point U+{:04X} at offset {}",
            self.code_point as u32, self.offset
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transliteration {
    pub romanized: RomanizedText,
    pub warnings: Vec<TranslitWarning>,
}

#[derive(Debug, Error)]
pub enum TranslitError {
    #[error("exceptions line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("reading exceptions file: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Default)]
pub struct Transliterator {
    exceptions: HashMap<String, String>,
}

impl Transliterator {
    /// Rules only, no exceptions.
    pub fn new() -> Self {
        Self::default()
    }

    /// Rules plus the exceptions table shipped with the crate.
    pub fn builtin() -> Self {
        Self::with_exceptions(BUILTIN_EXCEPTIONS).expect("builtin exceptions are valid")
    }

    pub fn load_exceptions(path: impl AsRef<Path>) -> Result<Self, TranslitError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| TranslitError::Io(format!("{}: {e}", path.display())))?;
        Self::with_exceptions(&text)
    }

    /// Parses `devanagari-form <TAB> romanization` lines.
    pub fn with_exceptions(text: &str) -> Result<Self, TranslitError> {
        let mut exceptions = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (native, roman) = line.split_once('\t').ok_or(TranslitError::Syntax {
                line: line_no,
                message: "expected two tab-separated columns".into(),
            })?;
            let native: String = native.trim().nfc().collect();
            let roman: String = roman.trim().nfc().collect();
            if native.is_empty() || roman.is_empty() || roman.contains('\t') {
                return Err(TranslitError::Syntax {
                    line: line_no,
                    message: "empty or extra column".into(),
                });
            }
            if roman.chars().any(is_devanagari) {
                return Err(TranslitError::Syntax {
                    line: line_no,
                    message: "romanization contains Devanagari".into(),
                });
            }
            exceptions.insert(native, roman);
        }
        Ok(Transliterator { exceptions })
    }

    pub fn exceptions(&self) -> impl Iterator<Item = (&str, &str)> {
        self.exceptions.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn dev_to_iast(&self, text: &str) -> Transliteration {
        let input: Vec<char> = text.nfc().collect();
        let native = input.iter().copied().any(is_devanagari);
        let mut out = String::with_capacity(text.len());
        let mut warnings = Vec::new();

        let mut i = 0;
        while i < input.len() {
            if is_word_char(input[i]) {
                let start = i;
                while i < input.len() && is_word_char(input[i]) {
                    i += 1;
                }
                let word: String = input[start..i].iter().collect();
                match self.exceptions.get(&word) {
                    Some(roman) => out.push_str(roman),
                    None => romanize_word(&input[start..i], start, &mut out, &mut warnings),
                }
            } else {
                let c = input[i];
                if is_devanagari(c) {
                    match punctuation(c) {
                        Some(p) => out.push_str(p),
                        None => warnings.push(TranslitWarning {
                            offset: i,
                            code_point: c,
                        }),
                    }
                } else {
                    out.push(c);
                }
                i += 1;
            }
        }

        Transliteration {
            romanized: RomanizedText {
                text: out.nfc().collect(),
                provenance: if native {
                    Provenance::NativeScript
                } else {
                    Provenance::AlreadyRomanized
                },
            },
            warnings,
        }
    }
}

/// Romanizes with the builtin rules and exceptions.
pub fn dev_to_iast(text: &str) -> Transliteration {
    thread_local! {
        static BUILTIN: Transliterator = Transliterator::builtin();
    }
    BUILTIN.with(|t| t.dev_to_iast(text))
}

/// Lookup key for romanized text: NFC, lowercase, `ṃ` folded to `ṁ`,
/// and runs of whitespace or underscores collapsed into one `_`.
pub fn normalize_key(text: &str) -> String {
    let lowered: String = text.nfc().flat_map(char::to_lowercase).collect();
    let mut out = String::with_capacity(lowered.len());
    let mut pending_sep = false;
    for c in lowered.nfc() {
        if c.is_whitespace() || c == '_' {
            pending_sep = true;
            continue;
        }
        if pending_sep && !out.is_empty() {
            out.push('_');
        }
        pending_sep = false;
        out.push(if c == 'ṃ' { 'ṁ' } else { c });
    }
    out
}

pub fn is_devanagari(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c)
}

fn is_word_char(c: char) -> bool {
    is_devanagari(c) && punctuation(c).is_none()
}

fn punctuation(c: char) -> Option<&'static str> {
    Some(match c {
        '\u{0964}' | '\u{0965}' => ".",
        '\u{0970}' => ".",
        '०' => "0",
        '१' => "1",
        '२' => "2",
        '३' => "3",
        '४' => "4",
        '५' => "5",
        '६' => "6",
        '७' => "7",
        '८' => "8",
        '९' => "9",
        _ => return None,
    })
}

fn consonant(c: char) -> Option<&'static str> {
    Some(match c {
        'क' => "k",
        'ख' => "kh",
        'ग' => "g",
        'घ' => "gh",
        'ङ' => "ṅ",
        'च' => "c",
        'छ' => "ch",
        'ज' => "j",
        'झ' => "jh",
        'ञ' => "ñ",
        'ट' => "ṭ",
        'ठ' => "ṭh",
        'ड' => "ḍ",
        'ढ' => "ḍh",
        'ण' => "ṇ",
        'त' => "t",
        'थ' => "th",
        'द' => "d",
        'ध' => "dh",
        'न' | 'ऩ' => "n",
        'प' => "p",
        'फ' => "ph",
        'ब' => "b",
        'भ' => "bh",
        'म' => "m",
        'य' => "y",
        'र' | 'ऱ' => "r",
        'ल' => "l",
        'ळ' | 'ऴ' => "ḷ",
        'व' => "v",
        'श' => "ś",
        'ष' => "ṣ",
        'स' => "s",
        'ह' => "h",
        // precomposed nuqta letters; NFC decomposes these, so they only
        // show up when a caller bypasses normalization
        '\u{0958}' => "q",
        '\u{0959}' => "x",
        '\u{095A}' => "ġ",
        '\u{095B}' => "z",
        '\u{095C}' => "ṛ",
        '\u{095D}' => "ṛh",
        '\u{095E}' => "f",
        '\u{095F}' => "ẏ",
        _ => return None,
    })
}

fn with_nuqta(c: char) -> Option<&'static str> {
    Some(match c {
        'क' => "q",
        'ख' => "x",
        'ग' => "ġ",
        'ज' => "z",
        'ड' => "ṛ",
        'ढ' => "ṛh",
        'फ' => "f",
        'य' => "ẏ",
        _ => return None,
    })
}

fn independent_vowel(c: char) -> Option<&'static str> {
    Some(match c {
        'अ' => "a",
        'आ' => "ā",
        'इ' => "i",
        'ई' => "ī",
        'उ' => "u",
        'ऊ' => "ū",
        'ऋ' => "ŕ",
        'ॠ' => "ṝ",
        'ऌ' => "ḷ",
        'ए' | 'ऎ' => "e",
        'ऐ' => "ai",
        'ओ' | 'ऒ' => "o",
        'औ' => "au",
        'ऑ' => "ŏ",
        'ऍ' | 'ॲ' => "ĕ",
        _ => return None,
    })
}

fn vowel_sign(c: char) -> Option<&'static str> {
    Some(match c {
        'ा' => "ā",
        'ि' => "i",
        'ी' => "ī",
        'ु' => "u",
        'ू' => "ū",
        'ृ' => "ŕ",
        'ॄ' => "ṝ",
        'ॢ' => "ḷ",
        'े' | 'ॆ' => "e",
        'ै' => "ai",
        'ो' | 'ॊ' => "o",
        'ौ' => "au",
        'ॉ' => "ŏ",
        'ॅ' => "ĕ",
        _ => return None,
    })
}

fn coda_mark(c: char) -> Option<&'static str> {
    Some(match c {
        '\u{0900}' | '\u{0901}' | '\u{0902}' => "ṁ",
        '\u{0903}' => "ḥ",
        '\u{093D}' => "'",
        'ॐ' => "om",
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Seg {
    Consonant(&'static str),
    Vowel { roman: &'static str, inherent: bool },
    Mark(&'static str),
}

fn is_vowel(seg: Option<&Seg>) -> bool {
    matches!(seg, Some(Seg::Vowel { .. }))
}

fn is_consonant(seg: Option<&Seg>) -> bool {
    matches!(seg, Some(Seg::Consonant(_)))
}

fn romanize_word(
    chars: &[char],
    base_offset: usize,
    out: &mut String,
    warnings: &mut Vec<TranslitWarning>,
) {
    let mut segs: Vec<Seg> = Vec::with_capacity(chars.len() + 4);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if let Some(mut roman) = consonant(c) {
            i += 1;
            if chars.get(i) == Some(&NUQTA) {
                roman = with_nuqta(c).unwrap_or(roman);
                i += 1;
            }
            segs.push(Seg::Consonant(roman));
            match chars.get(i) {
                Some(&VIRAMA) => i += 1,
                Some(&m) if vowel_sign(m).is_some() => {
                    segs.push(Seg::Vowel {
                        roman: vowel_sign(m).unwrap(),
                        inherent: false,
                    });
                    i += 1;
                }
                _ => segs.push(Seg::Vowel {
                    roman: "a",
                    inherent: true,
                }),
            }
        } else if let Some(roman) = independent_vowel(c) {
            segs.push(Seg::Vowel {
                roman,
                inherent: false,
            });
            i += 1;
        } else if let Some(roman) = coda_mark(c) {
            segs.push(Seg::Mark(roman));
            i += 1;
        } else {
            // stray matra, virama or nuqta, or an unassigned code point
            warnings.push(TranslitWarning {
                offset: base_offset + i,
                code_point: c,
            });
            i += 1;
        }
    }

    delete_schwas(&mut segs);

    for seg in &segs {
        match seg {
            Seg::Consonant(r) | Seg::Mark(r) => out.push_str(r),
            Seg::Vowel { roman, .. } => out.push_str(roman),
        }
    }
}

fn delete_schwas(segs: &mut Vec<Seg>) {
    let vowel_count = segs.iter().filter(|s| is_vowel(Some(s))).count();
    if vowel_count > 1 {
        if let Some(Seg::Vowel { inherent: true, .. }) = segs.last() {
            if is_consonant(segs.len().checked_sub(2).and_then(|i| segs.get(i))) {
                segs.pop();
            }
        }
    }

    let mut i = segs.len();
    while i > 0 {
        i -= 1;
        let inherent = matches!(segs[i], Seg::Vowel { inherent: true, .. });
        if !inherent || i < 2 {
            continue;
        }
        let deletable = is_consonant(segs.get(i - 1))
            && is_vowel(segs.get(i - 2))
            && is_consonant(segs.get(i + 1))
            && is_vowel(segs.get(i + 2));
        if deletable {
            segs.remove(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(s: &str) -> String {
        Transliterator::new().dev_to_iast(s).romanized.text
    }

    #[test]
    fn locative_marker() {
        assert_eq!(rules("में"), "meṁ");
    }

    #[test]
    fn empty_input() {
        let t = dev_to_iast("");
        assert_eq!(t.romanized.text, "");
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn topic_postposition_phrase() {
        assert_eq!(rules("के बारे में"), "ke bāre meṁ");
    }

    #[test]
    fn final_and_medial_schwa() {
        assert_eq!(rules("समझना"), "samajhnā");
        assert_eq!(rules("कमरा"), "kamrā");
        assert_eq!(rules("जानवर"), "jānvar");
        assert_eq!(rules("लगभग"), "lagbhag");
        assert_eq!(rules("ख़तरनाक"), "xatarnāk");
        assert_eq!(rules("सड़क"), "saṛak");
        // a lone syllable keeps its vowel
        assert_eq!(rules("न"), "na");
    }

    #[test]
    fn nuqta_both_encodings() {
        // U+0916 U+093C and the precomposed U+0959 must agree
        assert_eq!(rules("\u{0916}\u{093C}िलाफ़"), "xilāf");
        assert_eq!(rules("\u{0959}िलाफ़"), "xilāf");
        assert_eq!(rules("ग़ुस्सा"), "ġussā");
    }

    #[test]
    fn nasalization_marks() {
        assert_eq!(rules("हूँ"), "hūṁ");
        assert_eq!(rules("नहीं"), "nahīṁ");
        assert_eq!(rules("दुःख"), "duḥkh");
    }

    #[test]
    fn latin_passes_through() {
        let t = dev_to_iast("Rām ने 2012 में");
        assert_eq!(t.romanized.text, "Rām ne 2012 meṁ");
        assert_eq!(t.romanized.provenance, Provenance::NativeScript);
        let t = dev_to_iast("already roman");
        assert_eq!(t.romanized.provenance, Provenance::AlreadyRomanized);
    }

    #[test]
    fn unknown_devanagari_is_flagged_and_dropped() {
        // U+0951 is a Vedic stress mark with no rule
        let t = Transliterator::new().dev_to_iast("क\u{0951}");
        assert_eq!(t.warnings.len(), 1);
        assert_eq!(t.warnings[0].code_point, '\u{0951}');
        assert!(!t.romanized.text.chars().any(is_devanagari));
    }

    #[test]
    fn danda_and_digits() {
        assert_eq!(rules("१२ घर।"), "12 ghar.");
    }

    #[test]
    fn exceptions_override_whole_words() {
        let t = Transliterator::with_exceptions("# c\nअर्धरात्रि\tardhrātri\n").unwrap();
        assert_eq!(t.dev_to_iast("अर्धरात्रि के").romanized.text, "ardhrātri ke");
        assert_eq!(rules("अर्धरात्रि"), "ardharātri");
        assert!(Transliterator::with_exceptions("no-tab-here\n").is_err());
        assert!(Transliterator::with_exceptions("क\tक\n").is_err());
    }

    #[test]
    fn key_normalization() {
        assert_eq!(normalize_key("Ke  bāre meṁ"), "ke_bāre_meṁ");
        assert_eq!(normalize_key("ke_bāre_meṁ"), "ke_bāre_meṁ");
        assert_eq!(normalize_key("a\u{0304}"), "ā");
        assert_eq!(normalize_key("  ke__liye "), "ke_liye");
        assert_eq!(normalize_key("meṃ"), "meṁ");
        assert_eq!(normalize_key(""), "");
    }
}
