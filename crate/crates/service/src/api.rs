//! JSON over HTTP. Every error body is an [`ApiError`].

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{FromRequest, Path, Request, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use snacs_hi::corpus::{self, CorpusError, Document, DocumentStore, StatsReport, StoreError};
use snacs_hi::hierarchy::Supersense;
use snacs_hi::lexicon::{Category, LexEntry};
use snacs_hi::matcher::{AdpositionTarget, Sentence};
use snacs_hi::validator::{DiagnosticChecklist, IssueCode, Suggestion, ValidationIssue};
use snacs_hi::Toolkit;

pub struct AppState {
    pub toolkit: Toolkit,
    pub store: DocumentStore,
}

pub type SharedState = Arc<AppState>;

/// Error codes outside the validator's registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApiCode {
    NotFound,
    UnknownDocument,
    MalformedPayload,
    VersionConflict,
    Internal,
    Issue(IssueCode),
}

impl ApiCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ApiCode::NotFound => "NOT_FOUND",
            ApiCode::UnknownDocument => "UNKNOWN_DOCUMENT",
            ApiCode::MalformedPayload => "MALFORMED_PAYLOAD",
            ApiCode::VersionConflict => "VERSION_CONFLICT",
            ApiCode::Internal => "INTERNAL",
            ApiCode::Issue(c) => c.as_str(),
        }
    }
}

impl Serialize for ApiCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub http_status: u16,
    pub code: ApiCode,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<ValidationIssue>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: ApiCode, message: impl Into<String>) -> Self {
        ApiError {
            http_status: status.as_u16(),
            code,
            message: message.into(),
            fields: Vec::new(),
            issues: Vec::new(),
        }
    }

    fn malformed(field: impl Into<String>, message: impl Into<String>) -> Self {
        let message = message.into();
        let mut e = Self::new(StatusCode::UNPROCESSABLE_ENTITY, ApiCode::MalformedPayload, message.clone());
        e.fields.push(FieldError {
            field: field.into(),
            message,
        });
        e
    }

    fn unknown_lemma(key: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            ApiCode::Issue(IssueCode::UnknownLemma),
            format!("no lexicon entry for {key:?}"),
        )
    }

    fn internal(message: impl ToString) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, ApiCode::Internal, message.to_string())
    }

    /// 422 carrying the issues; the code is the first error's.
    fn rejected(issues: Vec<ValidationIssue>) -> Self {
        let first = issues.iter().find(|i| i.is_error()).unwrap_or(&issues[0]);
        let errors = issues.iter().filter(|i| i.is_error()).count();
        let mut e = Self::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            ApiCode::Issue(first.code),
            format!("document has {errors} validation error(s); first: {}", first.message),
        );
        e.issues = issues;
        e
    }

    fn from_corpus(err: &CorpusError, source: &str) -> Self {
        Self::rejected(vec![err.to_issue(source)])
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.http_status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(id) | StoreError::InvalidId(id) => ApiError::new(
                StatusCode::NOT_FOUND,
                ApiCode::UnknownDocument,
                format!("document {id:?} not found"),
            ),
            StoreError::Conflict { .. } => ApiError::new(StatusCode::CONFLICT, ApiCode::VersionConflict, e.to_string()),
            StoreError::Invalid(c) => ApiError::from_corpus(&c, "document"),
            other => ApiError::internal(other),
        }
    }
}

/// JSON body whose deserialization errors name the offending field.
pub struct Payload<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Payload<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        let bytes = Bytes::from_request(req, state)
            .await
            .map_err(|e| ApiError::malformed(".", e.body_text()))?;
        let de = &mut serde_json::Deserializer::from_slice(&bytes);
        serde_path_to_error::deserialize(de).map(Payload).map_err(|e| {
            let field = e.path().to_string();
            ApiError::malformed(field, e.into_inner().to_string())
        })
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: SharedState) -> Router {
    Router::new()
        .route("/hierarchy", get(hierarchy))
        .route("/lexicon", get(lexicon_index))
        .route("/lexicon/{lemma}", get(lexicon_entry))
        .route("/match", post(match_targets))
        .route("/validate", post(validate))
        .route("/suggest", post(suggest))
        .route("/diagnostics/{key}", get(diagnostics))
        .route("/documents", get(list_documents))
        .route("/documents/{id}", get(get_document).put(put_document))
        .route("/stats", get(stats))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, ApiCode::NotFound, "no such endpoint") })
        .with_state(state)
}

/// Runs store I/O off the async workers.
async fn blocking<T: Send + 'static>(
    state: &SharedState,
    f: impl FnOnce(&AppState) -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    let state = Arc::clone(state);
    tokio::task::spawn_blocking(move || f(&state))
        .await
        .map_err(ApiError::internal)?
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HierarchyResponse {
    pub labels: Vec<Supersense>,
}

async fn hierarchy(State(s): State<SharedState>) -> Json<HierarchyResponse> {
    Json(HierarchyResponse {
        labels: s.toolkit.hierarchy.iter().cloned().collect(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LexiconIndexItem {
    pub lemma: String,
    pub category: Category,
}

async fn lexicon_index(State(s): State<SharedState>) -> Json<Vec<LexiconIndexItem>> {
    Json(
        s.toolkit
            .lexicon
            .entries()
            .map(|e| LexiconIndexItem {
                lemma: e.lemma.clone(),
                category: e.category,
            })
            .collect(),
    )
}

async fn lexicon_entry(State(s): State<SharedState>, Path(lemma): Path<String>) -> ApiResult<LexEntry> {
    s.toolkit
        .lookup(&lemma)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::unknown_lemma(&lemma))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatchRequest {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub tokens: Option<Vec<String>>,
    /// Whitespace-tokenized alternative to `tokens`.
    #[serde(default)]
    pub text: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatchResponse {
    pub sentence_id: String,
    pub tokens: Vec<String>,
    pub targets: Vec<AdpositionTarget>,
}

async fn match_targets(State(s): State<SharedState>, Payload(req): Payload<MatchRequest>) -> ApiResult<MatchResponse> {
    let id = req.id.unwrap_or_else(|| "s".into());
    let sentence = match (req.tokens, req.text) {
        (Some(tokens), None) => Sentence::new(id, tokens),
        (None, Some(text)) => Sentence::from_text(id, &text),
        _ => return Err(ApiError::malformed("tokens", "give exactly one of `tokens` or `text`")),
    };
    if let Some(i) = sentence.tokens.iter().position(|t| t.is_empty() || t.chars().any(char::is_whitespace)) {
        return Err(ApiError::malformed(format!("tokens[{i}]"), "tokens must be non-empty and contain no whitespace"));
    }
    let targets = s.toolkit.matcher.find_targets(&sentence);
    Ok(Json(MatchResponse {
        sentence_id: sentence.id,
        tokens: sentence.tokens,
        targets,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ValidateResponse {
    pub errors: usize,
    pub warnings: usize,
    pub issues: Vec<ValidationIssue>,
}

fn document_issues(toolkit: &Toolkit, doc: &Document) -> Vec<ValidationIssue> {
    let mut issues = toolkit.validator().validate_document(&doc.sentences, &doc.records);
    if let Err(e) = doc.check() {
        if !issues.iter().any(|i| i.code == e.code()) {
            issues.insert(0, e.to_issue(&doc.id));
        }
    }
    issues
}

async fn validate(State(s): State<SharedState>, Payload(doc): Payload<Document>) -> ApiResult<ValidateResponse> {
    let issues = document_issues(&s.toolkit, &doc);
    let errors = issues.iter().filter(|i| i.is_error()).count();
    Ok(Json(ValidateResponse {
        errors,
        warnings: issues.len() - errors,
        issues,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SuggestRequest {
    #[serde(default)]
    pub lemma: Option<String>,
    /// Surface tokens, romanized or Devanagari.
    #[serde(default)]
    pub surface: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SuggestResponse {
    pub lemma: String,
    pub candidates: Vec<Suggestion>,
    pub diagnostics: Vec<DiagnosticChecklist>,
}

async fn suggest(State(s): State<SharedState>, Payload(req): Payload<SuggestRequest>) -> ApiResult<SuggestResponse> {
    let key = match (req.lemma, req.surface) {
        (Some(l), _) if !l.trim().is_empty() => l,
        (_, Some(words)) if !words.is_empty() => words.join(" "),
        _ => return Err(ApiError::malformed("lemma", "give a `lemma` or a non-empty `surface`")),
    };
    let entry = s.toolkit.lookup(&key).ok_or_else(|| ApiError::unknown_lemma(&key))?;
    let suggestions = s
        .toolkit
        .validator()
        .suggest(&AdpositionTarget::new(Vec::new(), entry.lemma.clone(), Vec::new()));
    Ok(Json(SuggestResponse {
        lemma: entry.lemma.clone(),
        candidates: suggestions.candidates,
        diagnostics: s.toolkit.diagnostics.diagnostics_for(&entry.lemma).into_iter().cloned().collect(),
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiagnosticsResponse {
    pub key: String,
    pub checklists: Vec<DiagnosticChecklist>,
}

async fn diagnostics(State(s): State<SharedState>, Path(key): Path<String>) -> ApiResult<DiagnosticsResponse> {
    let resolved = match s.toolkit.lookup(&key) {
        Some(e) => e.lemma.clone(),
        None if s.toolkit.hierarchy.contains(&key) => key,
        None => return Err(ApiError::unknown_lemma(&key)),
    };
    let checklists = s.toolkit.diagnostics.diagnostics_for(&resolved).into_iter().cloned().collect();
    Ok(Json(DiagnosticsResponse {
        key: resolved,
        checklists,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DocumentSummary {
    pub id: String,
    pub version: u64,
    pub sentences: usize,
    pub records: usize,
}

async fn list_documents(State(s): State<SharedState>) -> ApiResult<Vec<DocumentSummary>> {
    let docs = blocking(&s, |st| Ok(st.store.all()?)).await?;
    Ok(Json(
        docs.iter()
            .map(|d| DocumentSummary {
                id: d.id.clone(),
                version: d.version(),
                sentences: d.sentences.len(),
                records: d.records.len(),
            })
            .collect(),
    ))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VersionedDocument {
    pub version: u64,
    pub document: Document,
}

async fn get_document(State(s): State<SharedState>, Path(id): Path<String>) -> ApiResult<VersionedDocument> {
    let document = blocking(&s, move |st| Ok(st.store.get(&id)?)).await?;
    Ok(Json(VersionedDocument {
        version: document.version(),
        document,
    }))
}

/// Writes a document if `version` is the stored one (0 for a new id).
/// Documents with validation errors are refused; warnings are allowed.
async fn put_document(
    State(s): State<SharedState>,
    Path(id): Path<String>,
    Payload(req): Payload<VersionedDocument>,
) -> ApiResult<VersionedDocument> {
    let mut doc = req.document;
    if doc.id.is_empty() {
        doc.id = id.clone();
    }
    if doc.id != id {
        return Err(ApiError::malformed(
            "document.id",
            format!("document id {:?} does not match the path id {id:?}", doc.id),
        ));
    }
    if !corpus::valid_id(&id) {
        return Err(ApiError::malformed("document.id", format!("invalid document id {id:?}")));
    }
    let issues = document_issues(&s.toolkit, &doc);
    if issues.iter().any(ValidationIssue::is_error) {
        return Err(ApiError::rejected(issues));
    }
    let expected = req.version;
    let document = blocking(&s, move |st| Ok(st.store.put(doc, expected)?)).await?;
    Ok(Json(VersionedDocument {
        version: document.version(),
        document,
    }))
}

async fn stats(State(s): State<SharedState>) -> ApiResult<StatsReport> {
    blocking(&s, |st| {
        let docs = st.store.all()?;
        Ok(corpus::stats(&docs, Some(&st.toolkit.matcher)))
    })
    .await
    .map(Json)
}
