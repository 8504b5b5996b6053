use std::collections::BTreeSet;

use proptest::prelude::*;

use lpsynth::entail::{entails, Decider};
use lpsynth::ground::ground_entails;
use lpsynth::interpolation::craig_lyndon_interpolant;
use lpsynth::prover::prove_entailment;
use lpsynth::se::se_oracle_ground;
use lpsynth::{
    decode, encodes_program_check, gamma, is_universal, parse_program, pred_signed, rename_0_to_1,
    Atom, Formula, InterpolationTask, Program, Rule, SeOutcome, SearchLimits, Verdict,
};

const PREDS: [&str; 4] = ["p", "q", "r", "s"];

fn atoms(n: usize) -> impl Strategy<Value = Vec<Atom>> {
    proptest::sample::subsequence(PREDS[..n].to_vec(), 0..=n.min(2))
        .prop_map(|v| v.into_iter().map(Atom::prop).collect())
}

fn rule(n: usize) -> impl Strategy<Value = Rule> {
    (atoms(n), atoms(n), atoms(n), atoms(n)).prop_map(|(a, b, c, d)| Rule::new(a, b, c, d))
}

fn program() -> impl Strategy<Value = Program> {
    (1usize..=4).prop_flat_map(|n| proptest::collection::vec(rule(n), 0..=4).prop_map(Program::new))
}

/// HT satisfaction of a propositional rule by `(here, there)`.
fn ht_sat(r: &Rule, here: &BTreeSet<String>, there: &BTreeSet<String>) -> bool {
    let all = |xs: &[Atom], s: &BTreeSet<String>| xs.iter().all(|a| s.contains(&a.predicate));
    let any = |xs: &[Atom], s: &BTreeSet<String>| xs.iter().any(|a| s.contains(&a.predicate));
    let classical = !(all(&r.pos_body, there) && !any(&r.neg_body, there))
        || any(&r.pos_head, there)
        || !all(&r.neg_head, there);
    let at_here = !(all(&r.pos_body, here) && !any(&r.neg_body, there))
        || any(&r.pos_head, here)
        || !all(&r.neg_head, there);
    classical && at_here
}

fn ht_models(p: &Program) -> BTreeSet<(BTreeSet<String>, BTreeSet<String>)> {
    let n = PREDS.len();
    let set = |m: usize| {
        (0..n)
            .filter(|i| m >> i & 1 == 1)
            .map(|i| PREDS[i].to_string())
            .collect::<BTreeSet<_>>()
    };
    let mut out = BTreeSet::new();
    for t in 0..1usize << n {
        for h in 0..1usize << n {
            if h & !t == 0 {
                let (hs, ts) = (set(h), set(t));
                if p.rules.iter().all(|r| ht_sat(r, &hs, &ts)) {
                    out.insert((hs, ts));
                }
            }
        }
    }
    out
}

fn brute_se(a: &Program, b: &Program) -> bool {
    ht_models(a) == ht_models(b)
}

fn ground_decider() -> Decider {
    Decider::Ground { max_atoms: 4096 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(p in program()) {
        let text = p.to_string();
        prop_assert_eq!(parse_program(&text).unwrap(), p);
    }

    #[test]
    fn se_oracle_matches_ht_models(a in program(), b in program()) {
        let exact = se_oracle_ground(&a, &b).unwrap() == SeOutcome::Equivalent;
        prop_assert_eq!(exact, brute_se(&a, &b));
    }

    #[test]
    fn gamma_encodes_a_program(p in program()) {
        prop_assert_eq!(encodes_program_check(&gamma(&p), &ground_decider()), Verdict::True);
    }

    #[test]
    fn decode_gamma_round_trip(p in program()) {
        let back = decode(&gamma(&p)).unwrap();
        prop_assert!(brute_se(&back, &p), "{}\n-->\n{}", p, back);
        prop_assert!(back.predicates().is_subset(&p.predicates()));
    }

    #[test]
    fn rename_is_idempotent_and_single_superscript(p in program()) {
        let g = rename_0_to_1(&gamma(&p));
        prop_assert_eq!(rename_0_to_1(&g), g.clone());
        prop_assert!(g.predicates().iter().all(|sp| sp.sup == lpsynth::Superscript::One));
    }

    #[test]
    fn prover_is_sound(a in program(), b in program()) {
        let (ga, gb) = (gamma(&a), gamma(&b));
        if prove_entailment(&ga, &gb, &SearchLimits::default()).is_ok() {
            prop_assert!(ground_entails(&ga, &gb).unwrap());
        }
    }

    #[test]
    fn prover_agrees_with_oracle(a in program(), b in program()) {
        let (ga, gb) = (gamma(&a), gamma(&b));
        let truth = ground_entails(&ga, &gb).unwrap();
        let limits = SearchLimits { wall_time: std::time::Duration::from_secs(2), ..Default::default() };
        match entails(&ga, &gb, &Decider::Prover(limits)) {
            Verdict::True => prop_assert!(truth),
            Verdict::False => prop_assert!(!truth),
            Verdict::Unknown => {}
        }
    }

    #[test]
    fn interpolant_contract(a in program(), b in program()) {
        let left = Formula::conj([gamma(&a), gamma(&b)]);
        let right = gamma(&a);
        let h = craig_lyndon_interpolant(&InterpolationTask::new(left.clone(), right.clone()), &SearchLimits::default()).unwrap();
        prop_assert!(is_universal(&h));
        prop_assert!(ground_entails(&left, &h).unwrap());
        prop_assert!(ground_entails(&h, &right).unwrap());
        let (sl, sr, sh) = (pred_signed(&left), pred_signed(&right), pred_signed(&h));
        prop_assert!(sh.is_subset(&sl) && sh.is_subset(&sr));
    }
}

#[test]
fn example_programs_have_expected_ht_behaviour() {
    let p = parse_program("p.").unwrap();
    let q = parse_program("p :- not q.").unwrap();
    assert!(!brute_se(&p, &q));
    assert!(matches!(
        se_oracle_ground(&p, &q).unwrap(),
        SeOutcome::NotEquivalent(_)
    ));
}
