use snacs_hi::hierarchy::ConstrualLabel;
use snacs_hi::matcher::{AdpositionTarget, Sentence};
use snacs_hi::validator::{Answer, AnnotationRecord, Status};
use snacs_hi::Toolkit;

fn record(indices: Vec<usize>, lemma: &str, label: &str) -> AnnotationRecord {
    AnnotationRecord {
        sentence_id: "s1".into(),
        target: AdpositionTarget::new(indices, lemma, Vec::new()),
        construal: label.parse::<ConstrualLabel>().unwrap(),
        annotator: "demo".into(),
        status: Status::Draft,
    }
}

fn main() {
    let t = Toolkit::builtin().unwrap();
    let v = t.validator();
    let s = Sentence::from_text("s1", "rām ne cāqū se seb ko kāṭā");

    let records = [
        record(vec![1], "ne", "Agent"),
        record(vec![3], "se", "Instrument"),
        record(vec![5], "ko", "Theme"),
        record(vec![5], "ko", "Instrument"),
        record(vec![3], "se", "Stimulus↝Instrument"),
        record(vec![3], "ko", "Theme"),
        record(vec![9], "ko", "Theme"),
    ];
    for r in &records {
        let issues = v.validate(r, &s);
        if issues.is_empty() {
            println!("ok      {} {} {}", r.location(), r.target.lemma, r.construal);
        }
        for i in issues {
            println!("{}", i.to_line());
        }
    }

    println!("\ncandidates for ko:");
    let suggestions = v.suggest(&AdpositionTarget::new(vec![5], "ko", Vec::new()));
    for c in suggestions.candidates.iter().take(5) {
        println!("  {} {} §{}", c.rank, c.construal, c.anchor);
    }

    for checklist in t.diagnostics.diagnostics_for("ko") {
        println!("\n{}: {}", checklist.id, checklist.title);
        for p in &checklist.prompts {
            println!("  ? {p}");
        }
        for answer in [Answer::Yes, Answer::No] {
            let outcome = checklist.resolve(&[answer]).unwrap();
            println!("  {answer:?} -> {}", outcome.construal);
        }
    }
}
