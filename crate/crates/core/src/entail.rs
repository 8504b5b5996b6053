//! Pluggable entailment deciders.

use std::fmt;

use crate::formula::Formula;
use crate::ground::{ground_entails_with, GroundError, GroundOutcome, DEFAULT_MAX_ATOMS};
use crate::prover::{prove_entailment, SearchLimits};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decider {
    /// Exact, for function-free problems within the atom budget.
    Ground { max_atoms: usize },
    /// Semi-decision: a proof gives `True`, anything else `Unknown`.
    Prover(SearchLimits),
    /// Ground when applicable, prover otherwise.
    Auto {
        max_atoms: usize,
        limits: SearchLimits,
    },
}

impl Default for Decider {
    fn default() -> Self {
        Decider::Auto {
            max_atoms: DEFAULT_MAX_ATOMS,
            limits: SearchLimits::default(),
        }
    }
}

pub fn entails(f: &Formula, g: &Formula, decider: &Decider) -> Verdict {
    match decider {
        Decider::Ground { max_atoms } => match ground_entails_with(f, g, *max_atoms) {
            Ok(GroundOutcome::Entailed) => Verdict::True,
            Ok(GroundOutcome::Refuted(_)) => Verdict::False,
            Err(_) => Verdict::Unknown,
        },
        Decider::Prover(limits) => match prove_entailment(f, g, limits) {
            Ok(_) => Verdict::True,
            Err(_) => Verdict::Unknown,
        },
        Decider::Auto { max_atoms, limits } => match ground_entails_with(f, g, *max_atoms) {
            Ok(GroundOutcome::Entailed) => Verdict::True,
            Ok(GroundOutcome::Refuted(_)) => Verdict::False,
            Err(GroundError::NotFunctionFree(_) | GroundError::SizeGuard { .. }) => {
                entails(f, g, &Decider::Prover(*limits))
            }
        },
    }
}
