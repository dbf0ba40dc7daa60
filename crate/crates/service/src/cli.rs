//! Command-line dispatch. Exit codes: 0 clean, 1 validation errors found,
//! 2 operational failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use snacs_hi::corpus::{self, parse_file, serialize, Document, DocumentStore};
use snacs_hi::matcher::Sentence;
use snacs_hi::translit::{dev_to_iast, is_devanagari};
use snacs_hi::validator::{AnnotationRecord, Status};
use snacs_hi::Toolkit;

use crate::api::{self, AppState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Annotator name on records proposed by `match`.
pub const MATCHER_ANNOTATOR: &str = "matcher";

#[derive(Debug, Parser)]
#[command(name = "snacs-hi", version, about = "Hindi adposition and case supersense toolkit")]
struct Cli {
    /// Hierarchy TSV replacing the bundled inventory.
    #[arg(long, global = true, env = "SNACS_HI_HIERARCHY")]
    hierarchy: Option<PathBuf>,
    /// Lexicon TSV replacing the bundled lexicon.
    #[arg(long, global = true, env = "SNACS_HI_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Document store directory.
    #[arg(long, global = true, env = "SNACS_HI_CORPUS")]
    corpus: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus file; issues go to stderr.
    Validate { file: PathBuf },
    /// Print a corpus file whose records are the matched targets, each
    /// with its top-ranked construal as a draft. Plain text (one sentence
    /// per line) is accepted too.
    Match { file: PathBuf },
    /// Corpus statistics as JSON, for a file or the --corpus store.
    Stats { file: Option<PathBuf> },
    /// Show a lexicon entry.
    Lookup {
        lemma: String,
        #[arg(long)]
        json: bool,
    },
    /// Devanagari to IAST.
    Translit {
        #[arg(required = true)]
        text: Vec<String>,
    },
    /// Run the HTTP API over the --corpus store.
    Serve {
        #[arg(long, env = "SNACS_HI_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "SNACS_HI_HOST", default_value = "127.0.0.1")]
        host: String,
        /// Store the bundled gold document if the store lacks it.
        #[arg(long)]
        seed_gold: bool,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, message: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {message}");
        EXIT_FAILURE
    }
}

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_FAILURE
                }
            };
        }
    };
    let mut io = Io {
        out: stdout,
        err: stderr,
    };
    if let Command::Translit { text } = &cli.command {
        return translit(&text.join(" "), &mut io);
    }
    let toolkit = match Toolkit::load(cli.hierarchy.as_deref(), cli.lexicon.as_deref()) {
        Ok(t) => t,
        Err(e) => return io.fail(e),
    };
    match cli.command {
        Command::Validate { file } => validate(&toolkit, &file, &mut io),
        Command::Match { file } => match_file(&toolkit, &file, &mut io),
        Command::Stats { file } => stats(&toolkit, file.as_deref(), cli.corpus.as_deref(), &mut io),
        Command::Lookup { lemma, json } => lookup(&toolkit, &lemma, json, &mut io),
        Command::Serve { port, host, seed_gold } => match cli.corpus {
            Some(dir) => serve(toolkit, &dir, &host, port, seed_gold, &mut io),
            None => io.fail("serve needs --corpus <dir> or SNACS_HI_CORPUS"),
        },
        Command::Translit { .. } => unreachable!(),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn validate(toolkit: &Toolkit, path: &Path, io: &mut Io) -> i32 {
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => return io.fail(e),
    };
    let source = path.display().to_string();
    let docs = match parse_file(&text) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(io.err, "{}", e.to_issue(&source).to_line());
            return EXIT_INVALID;
        }
    };
    let v = toolkit.validator();
    let (mut errors, mut warnings, mut records) = (0, 0, 0);
    for d in &docs {
        records += d.records.len();
        for issue in v.validate_document(&d.sentences, &d.records) {
            if issue.is_error() {
                errors += 1;
            } else {
                warnings += 1;
            }
            let _ = writeln!(io.err, "{}", issue.to_line());
        }
    }
    let _ = writeln!(
        io.out,
        "{source}: {} documents, {records} records, {errors} errors, {warnings} warnings",
        docs.len()
    );
    if errors > 0 {
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

/// Corpus file if it has the corpus header, else one sentence per line.
fn read_documents(path: &Path) -> Result<Vec<Document>, String> {
    let text = read(path)?;
    if text.starts_with(corpus::HEADER) || text.starts_with("#doc") {
        return parse_file(&text).map_err(|e| e.to_issue(&path.display().to_string()).to_line());
    }
    let stem: String = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("text")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    let mut doc = Document::new(if corpus::valid_id(&stem) { stem } else { "text".into() });
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let roman = if line.chars().any(is_devanagari) {
            dev_to_iast(line).romanized.text
        } else {
            line.to_string()
        };
        let id = format!("s{}", doc.sentences.len() + 1);
        doc.sentences.push(Sentence::from_text(id, &roman));
    }
    Ok(vec![doc])
}

fn match_file(toolkit: &Toolkit, path: &Path, io: &mut Io) -> i32 {
    let mut docs = match read_documents(path) {
        Ok(d) => d,
        Err(e) => return io.fail(e),
    };
    let v = toolkit.validator();
    for d in &mut docs {
        d.records.clear();
        for s in &d.sentences {
            for target in toolkit.matcher.find_targets(s) {
                let Some(top) = v.suggest(&target).candidates.into_iter().next() else {
                    continue;
                };
                d.records.push(AnnotationRecord {
                    sentence_id: s.id.clone(),
                    target,
                    construal: top.construal,
                    annotator: MATCHER_ANNOTATOR.into(),
                    status: Status::Draft,
                });
            }
        }
        d.canonicalize();
    }
    match serialize(&docs) {
        Ok(text) => {
            let _ = write!(io.out, "{text}");
            EXIT_OK
        }
        Err(e) => io.fail(e),
    }
}

fn stats(toolkit: &Toolkit, file: Option<&Path>, store: Option<&Path>, io: &mut Io) -> i32 {
    let docs = match (file, store) {
        (Some(f), _) => read_documents(f),
        (None, Some(dir)) => DocumentStore::open(dir)
            .and_then(|s| s.all())
            .map_err(|e| format!("{}: {e}", dir.display())),
        (None, None) => Err("stats needs a file or --corpus <dir>".into()),
    };
    match docs {
        Ok(docs) => {
            let report = corpus::stats(&docs, Some(&toolkit.matcher));
            let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            EXIT_OK
        }
        Err(e) => io.fail(e),
    }
}

fn lookup(toolkit: &Toolkit, key: &str, json: bool, io: &mut Io) -> i32 {
    let Some(e) = toolkit.lookup(key) else {
        return io.fail(format!("unknown lemma {key:?}"));
    };
    if json {
        let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(e).expect("entry serializes"));
        return EXIT_OK;
    }
    let out = &mut io.out;
    let _ = writeln!(out, "{}\t{}", e.lemma, e.category);
    if !e.script_forms.is_empty() {
        let _ = writeln!(out, "script\t{}", e.script_forms.join(", "));
    }
    let variants: Vec<String> = e.variants.iter().map(|v| format!("{v} ({})", v.kind.as_str())).collect();
    let _ = writeln!(out, "surfaces\t{}", variants.join(", "));
    if let Some(pair) = &e.register_pair {
        let _ = writeln!(out, "register pair\t{pair}");
    }
    for l in &e.licenses {
        let mut flags = Vec::new();
        if l.open_scene {
            flags.push("open-scene");
        }
        if l.provisional {
            flags.push("provisional");
        }
        if l.unresolved {
            flags.push("unresolved");
        }
        let _ = write!(out, "{}\t{}\t§{}", l.rank, l.construal, l.source_section);
        if !flags.is_empty() {
            let _ = write!(out, "\t[{}]", flags.join(","));
        }
        if let Some(c) = &l.condition {
            let _ = write!(out, "\t{c}");
        }
        let _ = writeln!(out);
    }
    for c in toolkit.diagnostics.diagnostics_for(&e.lemma) {
        let _ = writeln!(out, "diagnostic\t{}\t{}", c.id, c.title);
    }
    EXIT_OK
}

fn translit(text: &str, io: &mut Io) -> i32 {
    let t = dev_to_iast(text);
    for w in &t.warnings {
        let _ = writeln!(io.err, "warning: {w}");
    }
    let _ = writeln!(io.out, "{}", t.romanized);
    EXIT_OK
}

fn serve(toolkit: Toolkit, dir: &Path, host: &str, port: u16, seed_gold: bool, io: &mut Io) -> i32 {
    let store = match DocumentStore::open(dir) {
        Ok(s) => s,
        Err(e) => return io.fail(format!("{}: {e}", dir.display())),
    };
    if seed_gold {
        for doc in corpus::gold() {
            match store.get(&doc.id) {
                Ok(_) => {}
                Err(corpus::StoreError::NotFound(_)) => {
                    if let Err(e) = store.put(doc, 0) {
                        return io.fail(e);
                    }
                }
                Err(e) => return io.fail(e),
            }
        }
    }
    let app = api::router(Arc::new(AppState { toolkit, store }));
    let runtime = match tokio::runtime::Builder::new_multi_thread().enable_all().build() {
        Ok(r) => r,
        Err(e) => return io.fail(e),
    };
    let result = runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port)).await?;
        let _ = writeln!(io.out, "listening on http://{}", listener.local_addr()?);
        let _ = io.out.flush();
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => io.fail(e),
    }
}
