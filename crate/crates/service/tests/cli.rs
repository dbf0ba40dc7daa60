use std::fs;
use std::path::Path;

use snacs_hi::corpus::{self, parse_file, serialize};
use snacs_hi::hierarchy::ConstrualLabel;
use snacs_hi_service::cli::{run, EXIT_FAILURE, EXIT_INVALID, EXIT_OK};

const GOLD: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/gold.tsv");

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn snacs(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("snacs-hi").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_gold_is_clean() {
    let o = snacs(&["validate", GOLD]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert!(o.err.is_empty());
    assert!(o.out.contains("155 records, 0 errors"), "{}", o.out);
}

#[test]
fn validate_missing_file_is_operational_failure() {
    let o = snacs(&["validate", "/nonexistent"]);
    assert_eq!(o.code, EXIT_FAILURE);
    assert!(o.err.contains("/nonexistent"), "{}", o.err);
}

#[test]
fn validate_reports_issue_lines() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = corpus::gold();
    let i = docs[0].records.iter().position(|r| r.target.lemma == "ne").unwrap();
    docs[0].records[i].construal = ConstrualLabel::congruent("Goal");
    let path = write(dir.path(), "bad.tsv", &serialize(&docs).unwrap());
    let o = snacs(&["validate", &path]);
    assert_eq!(o.code, EXIT_INVALID);
    let lines: Vec<&str> = o.err.lines().collect();
    assert_eq!(lines.len(), 1, "{}", o.err);
    let cols: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(cols.len(), 4);
    assert_eq!(cols[0], "error");
    assert_eq!(cols[1], "UNLICENSED_CONSTRUAL");
    assert_eq!(cols[2], docs[0].records[i].location());
}

#[test]
fn validate_parse_error_is_an_issue() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.tsv", "#snacs-hi-corpus v1\n#doc d\n\n# sent_id = s\n0\tx\n@ 0\tko\n");
    let o = snacs(&["validate", &path]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.err.starts_with("error\tPARSE_ERROR\t"), "{}", o.err);
    assert!(o.err.contains("broken.tsv:6:"), "{}", o.err);
}

#[test]
fn usage_errors_exit_2() {
    let o = snacs(&["frobnicate"]);
    assert_eq!(o.code, EXIT_FAILURE);
    assert!(o.err.contains("Usage"), "{}", o.err);
    assert_eq!(snacs(&[]).code, EXIT_FAILURE);
    assert_eq!(snacs(&["validate"]).code, EXIT_FAILURE);
    let help = snacs(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("validate"));
}

#[test]
fn lookup_prints_licenses_with_anchors() {
    let o = snacs(&["lookup", "ke_bāre_meṁ"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.lines().any(|l| l.starts_with("0\tTopic\t§Topic")), "{}", o.out);

    let o = snacs(&["lookup", "ke bāre meṁ", "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["lemma"], "ke_bāre_meṁ");

    let o = snacs(&["lookup", "zzz"]);
    assert_eq!(o.code, EXIT_FAILURE);
    assert!(o.err.contains("zzz"));
}

#[test]
fn translit_romanizes() {
    let o = snacs(&["translit", "मेरे", "बारे", "में"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.out, "mere bāre meṁ\n");
}

#[test]
fn match_output_is_a_valid_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "plain.txt",
        "mere bāre meṁ mat bolo\nāp binā vīzā ke nahīṁ jā sakte\nवह घर के अंदर गया\n",
    );
    let o = snacs(&["match", &path]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let docs = parse_file(&o.out).unwrap();
    assert_eq!(docs[0].id, "plain");
    let lemmas: Vec<&str> = docs[0].records.iter().map(|r| r.target.lemma.as_str()).collect();
    assert_eq!(lemmas, ["ke_bāre_meṁ", "ke_binā", "ke_andar"]);
    assert!(docs[0].records[1].target.discontinuous);

    let out = write(dir.path(), "matched.tsv", &o.out);
    assert_eq!(snacs(&["validate", &out]).code, EXIT_OK);
}

#[test]
fn match_replaces_records_in_corpus_files() {
    let o = snacs(&["match", GOLD]);
    assert_eq!(o.code, EXIT_OK);
    let docs = parse_file(&o.out).unwrap();
    assert!(docs[0].records.iter().all(|r| r.annotator == "matcher"));
    assert!(docs[0].records.len() >= 155);
}

#[test]
fn stats_for_file_and_store() {
    let o = snacs(&["stats", GOLD]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["records"], 155);

    let dir = tempfile::tempdir().unwrap();
    let o = snacs(&["stats", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["documents"], 0);

    assert_eq!(snacs(&["stats"]).code, EXIT_FAILURE);
}

#[test]
fn custom_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = snacs(&["lookup", "ko", "--lexicon", "/nonexistent.tsv"]);
    assert_eq!(o.code, EXIT_FAILURE);
    assert!(o.err.contains("lexicon"), "{}", o.err);

    let lex = write(
        dir.path(),
        "lex.tsv",
        "ko\tcase-marker\t-\tRecipient\tRecipient\tko.dative\t-\t0\t-\nko\tcase-marker\t-\tTheme\tTheme\tko.accusative\t-\t1\t-\n",
    );
    let o = snacs(&["lookup", "ko", "--lexicon", &lex]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert_eq!(o.out.lines().filter(|l| l.contains('§')).count(), 2);

    // The gold corpus uses lemmas this lexicon lacks.
    let o = snacs(&["validate", GOLD, "--lexicon", &lex]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.err.contains("UNKNOWN_LEMMA"));
}

#[test]
fn serve_needs_a_corpus() {
    let o = snacs(&["serve", "--port", "0"]);
    assert_eq!(o.code, EXIT_FAILURE);
    assert!(o.err.contains("--corpus"));
}
