use snacs_hi::Toolkit;

fn main() {
    let t = Toolkit::builtin().unwrap();
    let keys: Vec<String> = std::env::args().skip(1).collect();
    let keys = if keys.is_empty() {
        vec!["se".to_string(), "mujhe".into(), "के बारे में".into(), "vālā".into()]
    } else {
        keys
    };
    for key in keys {
        let Some(e) = t.lookup(&key) else {
            println!("{key}: not in the lexicon\n");
            continue;
        };
        println!("{key} -> {} ({})", e.lemma, e.category);
        for l in &e.licenses {
            let mut flags = Vec::new();
            if l.open_scene {
                flags.push("open scene");
            }
            if l.provisional {
                flags.push("provisional");
            }
            if l.unresolved {
                flags.push("unresolved");
            }
            println!("  {:>2} {:<28} §{} {}", l.rank, l.construal.to_string(), l.source_section, flags.join(", "));
        }
        println!();
    }

    // The spatio-temporal table, recomputed from the licenses.
    let rows = ["Circumstance", "Locus", "Source", "Goal", "Extent", "Time", "StartTime", "EndTime", "Duration"];
    let cols = ["obl", "meṁ", "par", "se", "tak", "ko", "ke_liye"];
    print!("{:<13}", "");
    for c in cols {
        print!("{c:>8}");
    }
    println!();
    for r in rows {
        print!("{r:<13}");
        for c in cols {
            let allowed = t.lexicon.allowed_functions(c).unwrap();
            let yes = allowed.iter().any(|(f, ok)| *f == r && *ok);
            print!("{:>8}", if yes { "+" } else { "-" });
        }
        println!();
    }
}
