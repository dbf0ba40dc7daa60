use snacs_hi::matcher::{Matcher, MatcherConfig, Sentence};
use snacs_hi::Toolkit;

fn main() {
    let t = Toolkit::builtin().unwrap();
    let sentences = [
        "rām ne mujhe kitāb dī",
        "āp binā vīzā ke nahīṁ jā sakte",
        "tumhāre bāre meṁ sab jānte haiṁ",
        "vah ghar ke andar se nikal kar sīdhā dukān tak gayā",
    ];
    for (i, text) in sentences.iter().enumerate() {
        let s = Sentence::from_text(format!("s{i}"), text);
        println!("{text}");
        for target in t.matcher.find_targets(&s) {
            println!(
                "  {:<8} {:<14} {}{}",
                target.indices_text(),
                target.lemma,
                target.surface.join(" "),
                if target.discontinuous { "  (discontinuous)" } else { "" }
            );
        }
    }

    // A tighter gap limit loses the split circumposition.
    let strict = Matcher::with_config(&t.lexicon, MatcherConfig { max_gap: 0 });
    let s = Sentence::from_text("x", sentences[1]);
    let lemmas: Vec<_> = strict.find_targets(&s).into_iter().map(|t| t.lemma).collect();
    println!("max_gap 0: {lemmas:?}");
}
