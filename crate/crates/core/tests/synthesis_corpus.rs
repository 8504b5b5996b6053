use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use lpsynth::se::se_oracle_ground_with;
use lpsynth::synthesis::respects_vocabulary;
use lpsynth::{
    parse_program, synthesize, Program, SeOutcome, SynthesisOptions, SynthesisResult,
    VocabularySpec,
};

fn corpus(case: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(case)
}

fn read(case: &str, file: &str) -> Program {
    let p = corpus(case).join(file);
    parse_program(&std::fs::read_to_string(&p).unwrap_or_default()).unwrap()
}

fn names(s: &str) -> BTreeSet<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn vocab(case: &str) -> VocabularySpec {
    let text = std::fs::read_to_string(corpus(case).join("vocab.cfg")).unwrap();
    let get = |k: &str| {
        text.lines()
            .filter_map(|l| l.split_once('='))
            .find(|(key, _)| key.trim() == k)
            .map(|(_, v)| names(v))
    };
    match get("vocab") {
        Some(v) => VocabularySpec::Plain(v),
        None => VocabularySpec::Positional {
            plus: get("plus").unwrap_or_default(),
            plus1: get("plus1").unwrap_or_default(),
            minus: get("minus").unwrap_or_default(),
        },
    }
}

fn se(a: &Program, b: &Program) -> bool {
    se_oracle_ground_with(a, b, 1 << 16).unwrap() == SeOutcome::Equivalent
}

fn run(case: &str, compare_printed: bool) {
    let (p, q, v) = (read(case, "P.lp"), read(case, "Q.lp"), vocab(case));
    let start = Instant::now();
    let rep = synthesize(&p, &q, &v, &SynthesisOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let r = match rep.result {
        SynthesisResult::Found(r) => r,
        other => panic!("{case}: {other:?}"),
    };
    eprintln!("{case}: {:?}\n{r}", elapsed);
    assert!(
        respects_vocabulary(&r, &v),
        "{case}: vocabulary violated\n{r}"
    );
    assert!(r.functions().is_subset(&p.union(&q).functions()));
    assert!(se(&p.union(&r), &p.union(&q)), "{case}: not SE\n{r}");
    if compare_printed {
        assert!(
            se(&r, &read(case, "R.lp")),
            "{case}: differs from printed R\n{r}"
        );
    }
    assert!(elapsed.as_secs() < 5, "{case}: {elapsed:?}");
}

#[test]
fn redundant_atoms() {
    run("redundant_atoms", true)
}
#[test]
fn relative_redundancy() {
    run("relative_redundancy", true)
}
#[test]
fn redundant_negation() {
    run("redundant_negation", true)
}
#[test]
fn unfold_mapping() {
    run("unfold_mapping", false)
}
#[test]
fn fold_mapping() {
    run("fold_mapping", false)
}
#[test]
fn recursive_naturals() {
    run("recursive_naturals", false)
}
#[test]
fn transitive_chain() {
    run("transitive_chain", false)
}
#[test]
fn positive_heads() {
    run("positive_heads", false)
}
#[test]
fn positive_bodies() {
    run("positive_bodies", false)
}
#[test]
fn negative_bodies() {
    run("negative_bodies", false)
}

#[test]
fn no_solution_case_has_countermodel() {
    let rep = synthesize(
        &read("no_solution", "P.lp"),
        &read("no_solution", "Q.lp"),
        &vocab("no_solution"),
        &SynthesisOptions::default(),
    )
    .unwrap();
    assert!(matches!(rep.result, SynthesisResult::NotFound(Some(_))));
}
