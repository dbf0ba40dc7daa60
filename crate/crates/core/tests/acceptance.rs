//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use snacs_hi::corpus::{self, parse_file, serialize};
use snacs_hi::hierarchy::{ConstrualLabel, Group, Hierarchy};
use snacs_hi::lexicon::{Lexicon, VariantKind};
use snacs_hi::matcher::Matcher;
use snacs_hi::translit::Transliterator;
use snacs_hi::validator::{Severity, Validator};

const TABLE1_BUDGET: Duration = Duration::from_secs(1);
const GOLD_BUDGET: Duration = Duration::from_secs(5);
const MIN_GOLD_RECORDS: usize = 60;
const MIN_GOLD_LEMMAS: usize = 25;
const MIN_FUSED_SURFACES: usize = 3;
const MIN_NON_SPECIAL_LABELS: usize = 50;
const MIN_TRANSLIT_AGREEMENT: f64 = 0.96;
const ORACLE: &str = include_str!("fixtures/translit_oracle.tsv");

/// The spatio-temporal table, transcribed by hand: column, then the
/// functions it licenses.
const TABLE1: [(&str, &[&str]); 7] = [
    ("obl", &["Goal", "Extent", "Time", "Duration"]),
    ("meṁ", &["Circumstance", "Locus", "Time", "Duration"]),
    ("par", &["Circumstance", "Locus", "Time"]),
    ("se", &["Source", "StartTime"]),
    ("tak", &["Goal", "Extent", "EndTime"]),
    ("ko", &["Goal", "Time"]),
    ("ke_liye", &["Circumstance", "Extent", "Duration"]),
];
const TABLE1_ROWS: [&str; 9] = [
    "Circumstance",
    "Locus",
    "Source",
    "Goal",
    "Extent",
    "Time",
    "StartTime",
    "EndTime",
    "Duration",
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn table1() -> Outcome {
    let start = Instant::now();
    let h = Hierarchy::builtin();
    let lex = Lexicon::builtin(&h).map_err(|e| e.to_string())?;
    let (mut pos, mut neg, mut deviations) = (0, 0, Vec::new());
    for (col, expected) in TABLE1 {
        let row: BTreeMap<&str, bool> = lex
            .allowed_functions(col)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        for f in TABLE1_ROWS {
            let want = expected.contains(&f);
            let got = row.get(f).copied().unwrap_or(false);
            if want {
                pos += 1;
            } else {
                neg += 1;
            }
            if want != got {
                deviations.push(format!("{col}/{f}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{pos} positive, {neg} negative cells, {} deviations, {elapsed:.1?}",
        deviations.len()
    );
    if pos == 21 && neg == 42 && deviations.is_empty() && elapsed < TABLE1_BUDGET {
        Ok(detail)
    } else {
        Err(format!("{detail} {deviations:?}"))
    }
}

fn gold_soundness() -> Outcome {
    let start = Instant::now();
    let h = Hierarchy::builtin();
    let lex = Lexicon::builtin(&h).map_err(|e| e.to_string())?;
    let docs = parse_file(corpus::BUILTIN_GOLD).map_err(|e| e.to_string())?;
    let v = Validator::new(&h, &lex);
    let issues: Vec<_> = docs
        .iter()
        .flat_map(|d| v.validate_document(&d.sentences, &d.records))
        .collect();
    let elapsed = start.elapsed();

    let records: Vec<_> = docs.iter().flat_map(|d| &d.records).collect();
    let lemmas: BTreeSet<&str> = records.iter().map(|r| r.target.lemma.as_str()).collect();
    let groups: BTreeSet<Group> = records
        .iter()
        .flat_map(|r| [&r.construal.scene, &r.construal.function])
        .filter_map(|l| h.get(l).map(|s| s.group))
        .collect();
    let all_groups = [
        Group::Circumstance,
        Group::Participant,
        Group::Configuration,
        Group::Context,
        Group::Special,
    ];
    let discontinuous = records.iter().filter(|r| r.target.discontinuous).count();
    let fused: BTreeSet<String> = records
        .iter()
        .filter(|r| {
            lex.lookup(&r.target.lemma).is_some_and(|e| {
                e.variants.iter().any(|v| {
                    v.kind == VariantKind::FusedPronoun
                        && v.words().iter().copied().eq(r.target.surface.iter().map(String::as_str))
                })
            })
        })
        .map(|r| r.target.surface.join(" "))
        .collect();

    let detail = format!(
        "{} records, {} lemmas, {}/5 groups, {discontinuous} discontinuous, {} fused surfaces, {} issues, {elapsed:.1?}",
        records.len(),
        lemmas.len(),
        groups.len(),
        fused.len(),
        issues.len()
    );
    let ok = records.len() >= MIN_GOLD_RECORDS
        && lemmas.len() >= MIN_GOLD_LEMMAS
        && all_groups.iter().all(|g| groups.contains(g))
        && discontinuous >= 1
        && fused.len() >= MIN_FUSED_SURFACES
        && issues.is_empty()
        && elapsed < GOLD_BUDGET;
    if ok {
        Ok(detail)
    } else {
        let shown: Vec<String> = issues.iter().take(5).map(|i| i.to_line()).collect();
        Err(format!("{detail} {shown:?}"))
    }
}

fn mutation_sensitivity() -> Outcome {
    let h = Hierarchy::builtin();
    let lex = Lexicon::builtin(&h).map_err(|e| e.to_string())?;
    let v = Validator::new(&h, &lex);
    let docs = corpus::gold();
    let (mut generated, mut rejected) = (0usize, 0usize);
    let mut escaped = Vec::new();
    for d in &docs {
        for r in &d.records {
            let entry = lex.lookup(&r.target.lemma).ok_or("gold lemma missing")?;
            let sentence = d.sentence(&r.sentence_id).ok_or("gold sentence missing")?;
            for label in h.iter() {
                if entry.licenses_function(&label.name) {
                    continue;
                }
                let mut m = r.clone();
                m.construal = ConstrualLabel::new(r.construal.scene.clone(), label.name.clone());
                generated += 1;
                let errors = v
                    .validate(&m, sentence)
                    .iter()
                    .filter(|i| i.severity == Severity::Error)
                    .count();
                if errors > 0 {
                    rejected += 1;
                } else if escaped.len() < 5 {
                    escaped.push(format!("{} {}", m.location(), m.construal));
                }
            }
        }
    }
    let detail = format!("{rejected}/{generated} mutations rejected");
    if generated > 0 && rejected == generated {
        Ok(detail)
    } else {
        Err(format!("{detail} {escaped:?}"))
    }
}

fn matcher_recall() -> Outcome {
    let h = Hierarchy::builtin();
    let lex = Lexicon::builtin(&h).map_err(|e| e.to_string())?;
    let m = Matcher::new(&lex);
    let docs = corpus::gold();
    let (mut total, mut found, mut overlaps) = (0, 0, 0);
    let mut missed = Vec::new();
    let mut special = BTreeSet::new();
    for d in &docs {
        for s in &d.sentences {
            let targets = m.find_targets(s);
            for (i, a) in targets.iter().enumerate() {
                overlaps += targets[i + 1..].iter().filter(|b| a.overlaps(b)).count();
            }
            for r in d.records.iter().filter(|r| r.sentence_id == s.id) {
                total += 1;
                let hit = targets
                    .iter()
                    .any(|t| t.token_indices == r.target.token_indices && t.lemma == r.target.lemma);
                if hit {
                    found += 1;
                    if r.target.lemma == "ke_binā" && r.target.token_indices == [1, 3] {
                        special.insert("ke_binā{1,3}");
                    }
                    if r.target.lemma == "ke_bāre_meṁ" && r.target.token_indices.len() == 3 {
                        special.insert("ke_bāre_meṁ{0,1,2}");
                    }
                } else {
                    missed.push(r.location());
                }
            }
        }
    }
    let detail = format!(
        "{found}/{total} gold targets, {overlaps} overlaps, special cases {:?}",
        special
    );
    if found == total && total > 0 && overlaps == 0 && special.len() == 2 {
        Ok(detail)
    } else {
        Err(format!("{detail} missed {missed:?}"))
    }
}

fn hierarchy_integrity() -> Outcome {
    let h = Hierarchy::builtin();
    let mut problems = Vec::new();
    for s in h.iter() {
        match &s.parent {
            None => {
                if s.depth != 0 {
                    problems.push(format!("root {} at depth {}", s.name, s.depth));
                }
            }
            Some(p) => match h.get(p) {
                None => problems.push(format!("{} has missing parent {p}", s.name)),
                Some(parent) => {
                    if parent.group != s.group {
                        problems.push(format!("{} crosses groups", s.name));
                    }
                    if parent.depth + 1 != s.depth {
                        problems.push(format!("{} depth mismatch", s.name));
                    }
                }
            },
        }
        match h.ancestors(&s.name) {
            Ok(chain) if chain.len() == s.depth + 1 => {}
            _ => problems.push(format!("{} ancestor chain broken", s.name)),
        }
    }
    let mut roots_per_group: BTreeMap<Group, usize> = BTreeMap::new();
    for r in h.roots() {
        *roots_per_group.entry(r.group).or_default() += 1;
    }
    if roots_per_group.values().any(|&n| n != 1) {
        problems.push(format!("roots per group {roots_per_group:?}"));
    }
    let core = h
        .iter()
        .filter(|s| matches!(s.group, Group::Circumstance | Group::Participant | Group::Configuration))
        .count();
    if core < MIN_NON_SPECIAL_LABELS {
        problems.push(format!("only {core} core labels"));
    }
    for name in ["Focus", "`d"] {
        if !h.contains(name) {
            problems.push(format!("{name} missing"));
        }
    }
    let lca = |a, b| h.lca(a, b).map(|s| s.name.clone()).unwrap_or_default();
    let (sg, se) = (lca("Source", "Goal"), lca("StartTime", "EndTime"));
    if sg != "Locus" || se != "Time" {
        problems.push(format!("lca(Source,Goal)={sg} lca(StartTime,EndTime)={se}"));
    }
    let detail = format!("{} labels, {core} core, lca(Source,Goal)={sg}, lca(StartTime,EndTime)={se}", h.len());
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail} {problems:?}"))
    }
}

fn round_trip() -> Outcome {
    let docs = parse_file(corpus::BUILTIN_GOLD).map_err(|e| e.to_string())?;
    let once = serialize(&docs).map_err(|e| e.to_string())?;
    let reparsed = parse_file(&once).map_err(|e| e.to_string())?;
    let twice = serialize(&reparsed).map_err(|e| e.to_string())?;
    let identity = reparsed == docs;
    let idempotent = once == twice;
    let detail = format!("structural identity {identity}, byte-identical reserialization {idempotent}");
    if identity && idempotent {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn translit_oracle() -> Outcome {
    let rules = Transliterator::new();
    let full = Transliterator::builtin();
    let exceptions: BTreeSet<&str> = full.exceptions().map(|(k, _)| k).collect();
    let (mut n, mut agree, mut agree_rules) = (0, 0, 0);
    let mut uncovered = Vec::new();
    for line in ORACLE.lines().filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let (dev, want, note) = (cols[0], cols[1], cols.get(2));
        n += 1;
        if rules.dev_to_iast(dev).romanized.text == want {
            agree_rules += 1;
        }
        if full.dev_to_iast(dev).romanized.text == want {
            agree += 1;
        }
        // Every rule miss is either fixed by an exception or annotated.
        let rule_miss = rules.dev_to_iast(dev).romanized.text != want;
        let covered = dev.split_whitespace().any(|w| exceptions.contains(w));
        if rule_miss && !covered && note.is_none() {
            uncovered.push(dev.to_string());
        }
    }
    let rate = agree as f64 / n as f64;
    let detail = format!(
        "{agree}/{n} = {:.1}% with exceptions, {agree_rules}/{n} rules only",
        rate * 100.0
    );
    if n == 50 && rate >= MIN_TRANSLIT_AGREEMENT && uncovered.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail} undocumented {uncovered:?}"))
    }
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("table1-matrix", table1),
        ("gold-soundness", gold_soundness),
        ("mutation-sensitivity", mutation_sensitivity),
        ("matcher-recall", matcher_recall),
        ("hierarchy-integrity", hierarchy_integrity),
        ("round-trip", round_trip),
        ("translit-oracle", translit_oracle),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
