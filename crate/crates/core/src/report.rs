//! Verdicts shared by the counter-automata comparisons and the correctness checks.

use std::fmt;

use crate::automaton::{Lasso, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InconclusiveReason {
    /// A determinization could not be turned back into a weak automaton.
    NotInherentlyWeak,
    /// Extended languages differ; counter languages may still agree.
    ExtendedLanguageGap,
    /// The synchronization bound may have discarded runs.
    SynchronizationLoss,
}

/// Counterexample to an inclusion: a finite word or an ultimately periodic word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    Word(Word),
    Lasso(Lasso),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CriterionHolds,
    CriterionFails(Counterexample),
    Inconclusive(InconclusiveReason),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::CriterionHolds)
    }
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InconclusiveReason::NotInherentlyWeak => "not-inherently-weak",
            InconclusiveReason::ExtendedLanguageGap => "extended-language-gap",
            InconclusiveReason::SynchronizationLoss => "synchronization-loss",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CriterionHolds => f.write_str("holds"),
            Verdict::CriterionFails(Counterexample::Word(w)) => write!(f, "fails word={w:?}"),
            Verdict::CriterionFails(Counterexample::Lasso(l)) => {
                write!(f, "fails stem={:?} cycle={:?}", l.stem, l.cycle)
            }
            Verdict::Inconclusive(r) => write!(f, "inconclusive {r}"),
        }
    }
}
