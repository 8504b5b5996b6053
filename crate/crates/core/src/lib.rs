//! Strong-equivalence checking and vocabulary-restricted synthesis for
//! disjunctive answer set programs with negation in the head.

pub mod clausify;
pub mod decode;
pub mod encoding;
pub mod entail;
pub mod formula;
pub mod ground;
pub mod interpolation;
pub mod parser;
pub mod program;
pub mod prover;
pub mod se;
pub mod synthesis;
pub mod term;
pub mod tptp;

pub use clausify::{clausify, Clausifier, ClausifyError, ClausifyMode};
pub use decode::{decode, decode_checked, decode_with, DecodeError, DecodeOptions};
pub use encoding::{encodes_program_check, gamma, s_formula, EncodedProgram};
pub use entail::{entails, Decider, Verdict};
pub use formula::{
    clauses_to_formula, formula_functions, is_universal, pred_lp, pred_signed, rename_0_to_1,
    ClausalForm, Clause, FAtom, Formula, Literal, Polarity, SignedPredicate, SuperPredicate,
    Superscript,
};
pub use interpolation::{
    craig_lyndon_interpolant, lp_interpolant, InterpolationError, InterpolationTask, LpInterpolant,
};
pub use parser::{parse_program, ParseError};
pub use program::{print_program, program_functions, program_predicates, Atom, Program, Rule};
pub use prover::{prove, SearchLimits, Unknown};
pub use se::{se_oracle_ground, strongly_equivalent, HtCountermodel, SeOutcome};
pub use synthesis::{
    synthesize, SynthesisError, SynthesisOptions, SynthesisReport, SynthesisResult, VocabularySpec,
};
pub use term::{unify, Signature, Substitution, Term};
