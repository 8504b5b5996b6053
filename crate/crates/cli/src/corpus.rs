//! Runner for directories of synthesis cases.
//!
//! Each case is a directory holding `P.lp` (optional, empty when missing),
//! `Q.lp`, `vocab.cfg` and `expect.cfg`. `vocab.cfg` has either `vocab`,
//! `hide` or the three keys `plus`, `plus1`, `minus`. `expect.cfg` has
//! `expected = found | not-found`, optionally `se_check = oracle | prover`
//! and `compare_printed = true` to also compare against `R.lp`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use lpsynth::se::se_oracle_ground_with;
use lpsynth::synthesis::respects_vocabulary;
use lpsynth::{
    parse_program, strongly_equivalent, synthesize, Program, SeOutcome, SynthesisOptions,
    SynthesisResult, Verdict, VocabularySpec,
};

use crate::config::{name_list, parse_kv};

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub p: Program,
    pub q: Program,
    pub vocab: VocabularySpec,
    pub expect_found: bool,
    pub prover_check: bool,
    pub printed: Option<Program>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    /// The synthesized program, when one was found.
    pub program: Option<Program>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub cases: Vec<CaseOutcome>,
}

impl CorpusSummary {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {} ({:.1?}) {}", c.name, c.elapsed, c.detail)?;
        }
        write!(f, "{}/{} cases passed", self.passed(), self.cases.len())
    }
}

fn read_program(path: &Path, required: bool) -> Result<Program, String> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_program(&text).map_err(|e| format!("{}: {e}", path.display())),
        Err(_) if !required => Ok(Program::default()),
        Err(e) => Err(format!("{}: {e}", path.display())),
    }
}

fn read_kv(path: &Path) -> Result<std::collections::BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_kv(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_case(dir: &Path) -> Result<Case, String> {
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let p = read_program(&dir.join("P.lp"), false)?;
    let q = read_program(&dir.join("Q.lp"), true)?;
    let v = read_kv(&dir.join("vocab.cfg"))?;
    let vocab = if let Some(names) = v.get("vocab") {
        VocabularySpec::Plain(name_list(names))
    } else if let Some(hidden) = v.get("hide") {
        VocabularySpec::complement(&p, &q, &name_list(hidden))
    } else {
        let get = |k: &str| v.get(k).map(|s| name_list(s)).unwrap_or_default();
        VocabularySpec::Positional {
            plus: get("plus"),
            plus1: get("plus1"),
            minus: get("minus"),
        }
    };
    let e = read_kv(&dir.join("expect.cfg"))?;
    let expect_found = match e.get("expected").map(String::as_str) {
        Some("found") | None => true,
        Some("not-found") => false,
        Some(other) => return Err(format!("{name}: unknown expectation `{other}`")),
    };
    let prover_check = e.get("se_check").is_some_and(|m| m == "prover");
    let printed = if e.get("compare_printed").is_some_and(|b| b == "true") {
        Some(read_program(&dir.join("R.lp"), true)?)
    } else {
        None
    };
    Ok(Case {
        name,
        p,
        q,
        vocab,
        expect_found,
        prover_check,
        printed,
    })
}

fn se_holds(
    a: &Program,
    b: &Program,
    prover: bool,
    opts: &SynthesisOptions,
) -> Result<bool, String> {
    if prover {
        return Ok(strongly_equivalent(a, b, &opts.limits) == Verdict::True);
    }
    se_oracle_ground_with(a, b, opts.max_atoms)
        .map(|o| o == SeOutcome::Equivalent)
        .map_err(|e| e.to_string())
}

pub fn run_case(case: &Case, opts: &SynthesisOptions) -> CaseOutcome {
    let start = Instant::now();
    let mut out = CaseOutcome {
        name: case.name.clone(),
        passed: false,
        detail: String::new(),
        elapsed: Duration::ZERO,
        program: None,
    };
    let result = synthesize(&case.p, &case.q, &case.vocab, opts);
    out.elapsed = start.elapsed();
    let check = |r: &Program| -> Result<(), String> {
        if !respects_vocabulary(r, &case.vocab) {
            return Err("solution leaves the vocabulary".into());
        }
        if !r.functions().is_subset(&case.p.union(&case.q).functions()) {
            return Err("solution introduces function symbols".into());
        }
        if !se_holds(
            &case.p.union(r),
            &case.p.union(&case.q),
            case.prover_check,
            opts,
        )? {
            return Err("P ∪ R is not strongly equivalent to P ∪ Q".into());
        }
        if let Some(printed) = &case.printed {
            if !se_holds(r, printed, case.prover_check, opts)? {
                return Err("solution differs from R.lp".into());
            }
        }
        Ok(())
    };
    match (result, case.expect_found) {
        (Ok(rep), true) => match rep.result {
            SynthesisResult::Found(r) => {
                match check(&r) {
                    Ok(()) => out.passed = true,
                    Err(e) => out.detail = e,
                }
                out.program = Some(r);
            }
            other => out.detail = format!("expected a solution, got {other:?}"),
        },
        (Ok(rep), false) => match rep.result {
            SynthesisResult::NotFound(_) => out.passed = true,
            SynthesisResult::Found(r) => out.detail = format!("expected no solution, got\n{r}"),
            SynthesisResult::Unknown(why) => {
                out.detail = format!("expected no solution, got unknown: {why}")
            }
        },
        (Err(e), _) => out.detail = e.to_string(),
    }
    out
}

/// Runs every case directory below `dir`, concurrently, in name order.
pub fn run_corpus(dir: &Path, opts: &SynthesisOptions) -> Result<CorpusSummary, String> {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    let cases = std::thread::scope(|s| {
        let handles: Vec<_> = dirs
            .iter()
            .map(|d| {
                s.spawn(move || match load_case(d) {
                    Ok(case) => run_case(&case, opts),
                    Err(e) => CaseOutcome {
                        name: d
                            .file_name()
                            .map(|n| n.to_string_lossy().into_owned())
                            .unwrap_or_default(),
                        passed: false,
                        detail: e,
                        elapsed: Duration::ZERO,
                        program: None,
                    },
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    });
    Ok(CorpusSummary { cases })
}
