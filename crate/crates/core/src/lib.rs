//! Executable form of the Hindi SNACS adposition and case supersense
//! guidelines: label hierarchy, licensing lexicon, target matcher,
//! validator, and corpus tooling.

pub mod hierarchy;
pub mod translit;
pub mod lexicon;
pub mod matcher;
pub mod validator;
pub mod corpus;

use std::path::Path;

use thiserror::Error;

use hierarchy::{Hierarchy, HierarchyError};
use lexicon::{LexEntry, Lexicon, LexiconError};
use matcher::Matcher;
use validator::{Diagnostics, DiagnosticsError, Validator};

#[derive(Debug, Error)]
pub enum ToolkitError {
    #[error("hierarchy: {0}")]
    Hierarchy(#[from] HierarchyError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("diagnostics: {0}")]
    Diagnostics(#[from] DiagnosticsError),
}

/// Everything the validator and matcher need, loaded once.
#[derive(Debug, Clone)]
pub struct Toolkit {
    pub hierarchy: Hierarchy,
    pub lexicon: Lexicon,
    pub diagnostics: Diagnostics,
    pub matcher: Matcher,
}

impl Toolkit {
    pub fn builtin() -> Result<Self, ToolkitError> {
        Self::load(None, None)
    }

    /// Loads from files where given, falling back to the bundled data.
    /// With a custom lexicon, bundled checklists it cannot support are
    /// left out.
    pub fn load(hierarchy: Option<&Path>, lexicon: Option<&Path>) -> Result<Self, ToolkitError> {
        let hierarchy = match hierarchy {
            Some(p) => Hierarchy::load(p)?,
            None => Hierarchy::builtin(),
        };
        let (lexicon, diagnostics) = match lexicon {
            Some(p) => {
                let lexicon = Lexicon::load(p, &hierarchy)?;
                let diagnostics = Diagnostics::builtin_compatible(&hierarchy, &lexicon);
                (lexicon, diagnostics)
            }
            None => {
                let lexicon = Lexicon::builtin(&hierarchy)?;
                let diagnostics = Diagnostics::builtin(&hierarchy, &lexicon)?;
                (lexicon, diagnostics)
            }
        };
        let matcher = Matcher::new(&lexicon);
        Ok(Toolkit {
            hierarchy,
            lexicon,
            diagnostics,
            matcher,
        })
    }

    pub fn validator(&self) -> Validator<'_> {
        Validator::new(&self.hierarchy, &self.lexicon)
    }

    /// Finds an entry by lemma, romanized surface, or Devanagari form.
    pub fn lookup(&self, key: &str) -> Option<&LexEntry> {
        let key = key.trim();
        let roman = if key.chars().any(translit::is_devanagari) {
            let nfc = translit::normalize_key(key);
            if let Some(e) = self
                .lexicon
                .entries()
                .find(|e| e.script_forms.iter().any(|f| translit::normalize_key(f) == nfc))
            {
                return Some(e);
            }
            translit::dev_to_iast(key).romanized.text
        } else {
            key.to_string()
        };
        self.lexicon.lookup(&roman).or_else(|| {
            let words: Vec<&str> = roman.split_whitespace().collect();
            self.lexicon
                .normalize_surface(&words)
                .and_then(|l| self.lexicon.lookup(l))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_any_form() {
        let t = Toolkit::builtin().unwrap();
        assert_eq!(t.lookup("ke bāre meṁ").unwrap().lemma, "ke_bāre_meṁ");
        assert_eq!(t.lookup("के बारे में").unwrap().lemma, "ke_bāre_meṁ");
        assert_eq!(t.lookup("mujhe").unwrap().lemma, "ko");
        assert_eq!(t.lookup("की").unwrap().lemma, "kā");
        assert!(t.lookup("zzz").is_none());
    }
}
