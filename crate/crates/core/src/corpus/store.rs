use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use thiserror::Error;

use super::{parse_file, serialize, valid_id, CorpusError, Document};

/// Metadata key holding a stored document's version.
pub const VERSION_KEY: &str = "version";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("invalid document id {0:?}")]
    InvalidId(String),
    #[error("document {0} not found")]
    NotFound(String),
    #[error("document {id} is at version {current}, not {expected}")]
    Conflict { id: String, expected: u64, current: u64 },
    #[error("document id {found:?} does not match {expected:?}")]
    IdMismatch { expected: String, found: String },
    #[error("{path}: {source}")]
    Corpus { path: String, source: CorpusError },
    #[error(transparent)]
    Invalid(#[from] CorpusError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One `<id>.tsv` file per document. Writes replace whole files by
/// rename, so readers see either the old or the new version.
#[derive(Debug)]
pub struct DocumentStore {
    dir: PathBuf,
    lock: RwLock<()>,
}

impl DocumentStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DocumentStore {
            dir,
            lock: RwLock::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> Result<PathBuf, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::InvalidId(id.to_string()));
        }
        Ok(self.dir.join(format!("{id}.tsv")))
    }

    /// Sorted ids of stored documents.
    pub fn list(&self) -> Result<Vec<String>, StoreError> {
        let _guard = self.lock.read().unwrap_or_else(|e| e.into_inner());
        let mut ids = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let name = entry?.file_name();
            let Some(name) = name.to_str() else { continue };
            if let Some(id) = name.strip_suffix(".tsv") {
                if valid_id(id) {
                    ids.push(id.to_string());
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn get(&self, id: &str) -> Result<Document, StoreError> {
        let path = self.path(id)?;
        let _guard = self.lock.read().unwrap_or_else(|e| e.into_inner());
        self.read(id, &path)
    }

    fn read(&self, id: &str, path: &Path) -> Result<Document, StoreError> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(StoreError::NotFound(id.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        let corpus_err = |source| StoreError::Corpus {
            path: path.display().to_string(),
            source,
        };
        let mut docs = parse_file(&text).map_err(corpus_err)?;
        match docs.len() {
            1 if docs[0].id == id => Ok(docs.remove(0)),
            _ => Err(StoreError::IdMismatch {
                expected: id.to_string(),
                found: docs.iter().map(|d| d.id.as_str()).collect::<Vec<_>>().join(","),
            }),
        }
    }

    pub fn all(&self) -> Result<Vec<Document>, StoreError> {
        self.list()?.iter().map(|id| self.get(id)).collect()
    }

    /// Replaces a document if `expected_version` matches the stored one
    /// (0 for a new document). Returns the stored document, whose version
    /// is one higher.
    pub fn put(&self, mut doc: Document, expected_version: u64) -> Result<Document, StoreError> {
        let path = self.path(&doc.id)?;
        let _guard = self.lock.write().unwrap_or_else(|e| e.into_inner());
        let current = match self.read(&doc.id, &path) {
            Ok(existing) => existing.version(),
            Err(StoreError::NotFound(_)) => 0,
            Err(e) => return Err(e),
        };
        if current != expected_version {
            return Err(StoreError::Conflict {
                id: doc.id.clone(),
                expected: expected_version,
                current,
            });
        }
        doc.metadata.insert(VERSION_KEY.into(), (current + 1).to_string());
        doc.canonicalize();
        let text = serialize(std::slice::from_ref(&doc))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::Sentence;

    fn doc(id: &str) -> Document {
        let mut d = Document::new(id);
        d.sentences.push(Sentence::from_text("s1", "mez ko sāf karo"));
        d
    }

    #[test]
    fn versioned_writes() {
        let dir = tempfile::tempdir().unwrap();
        let store = DocumentStore::open(dir.path()).unwrap();
        assert!(store.list().unwrap().is_empty());
        assert!(matches!(store.get("a"), Err(StoreError::NotFound(_))));

        let v1 = store.put(doc("a"), 0).unwrap();
        assert_eq!(v1.version(), 1);
        assert_eq!(store.get("a").unwrap(), v1);
        assert!(matches!(
            store.put(doc("a"), 0),
            Err(StoreError::Conflict { current: 1, .. })
        ));
        assert_eq!(store.put(doc("a"), 1).unwrap().version(), 2);
        assert_eq!(store.list().unwrap(), vec!["a"]);
    }

    #[test]
    fn rejects_bad_ids_and_documents() {
        let dir = tempfile::tempdir().unwrap();
        let store = DocumentStore::open(dir.path()).unwrap();
        assert!(matches!(store.get("../x"), Err(StoreError::InvalidId(_))));
        let mut d = doc("b");
        d.sentences[0].tokens.clear();
        assert!(matches!(store.put(d, 0), Err(StoreError::Invalid(_))));
        assert!(store.list().unwrap().is_empty());
    }
}
