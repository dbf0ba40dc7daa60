use snacs_hi::translit::{dev_to_iast, normalize_key, Transliterator};

fn main() {
    let words = std::env::args().skip(1).collect::<Vec<_>>();
    let input = if words.is_empty() {
        vec![
            "मेरे बारे में".to_string(),
            "किताब".into(),
            "अर्धरात्रि".into(),
            "रास्ते से होकर".into(),
            "already roman".into(),
        ]
    } else {
        vec![words.join(" ")]
    };

    let rules_only = Transliterator::new();
    for text in &input {
        let t = dev_to_iast(text);
        println!(
            "{text}\t{}\t({:?}; rules only: {}; key: {})",
            t.romanized,
            t.romanized.provenance,
            rules_only.dev_to_iast(text).romanized,
            normalize_key(&t.romanized.text)
        );
        for w in t.warnings {
            println!("  {w}");
        }
    }
}
