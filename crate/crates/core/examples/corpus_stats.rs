use snacs_hi::corpus::{self, parse_file, serialize, DocumentStore};
use snacs_hi::Toolkit;

fn main() {
    let t = Toolkit::builtin().unwrap();
    let docs = match std::env::args().nth(1) {
        Some(path) => parse_file(&std::fs::read_to_string(path).unwrap()).unwrap(),
        None => corpus::gold(),
    };

    let report = corpus::stats(&docs, Some(&t.matcher));
    println!(
        "{} documents, {} sentences, {} records, {:.0}% congruent, {} unannotated targets",
        report.documents,
        report.sentences,
        report.records,
        report.congruent_ratio * 100.0,
        report.unannotated_targets
    );
    let mut lemmas: Vec<(&String, usize)> = report.per_lemma.keys().map(|l| (l, report.lemma_total(l))).collect();
    lemmas.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    for (lemma, n) in lemmas.iter().take(8) {
        println!("  {lemma:<14} {n:>3}  {:?}", report.per_lemma[*lemma]);
    }

    // Versioned store round trip.
    let dir = tempfile::tempdir().unwrap();
    let store = DocumentStore::open(dir.path()).unwrap();
    let saved = store.put(docs[0].clone(), 0).unwrap();
    println!("stored {} at version {}", saved.id, saved.version());
    match store.put(docs[0].clone(), 0) {
        Err(e) => println!("stale write refused: {e}"),
        Ok(_) => unreachable!(),
    }
    let text = serialize(&[store.get(&saved.id).unwrap()]).unwrap();
    println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n"));
}
