//! Safety and preciseness criteria for extrapolated closures and reachable sets.
//!
//! Safety reduces to a language inclusion and may fail with a witness.
//! Preciseness goes through counter automata synchronized with bound `M`;
//! it is sufficient only, so it reports `Holds` or `Inconclusive`.

use std::fmt;
use std::time::{Duration, Instant};

use crate::automaton::{Automaton, Kind};
use crate::counter::{
    counter_zero, extended_equal, synchronized_composition, synchronized_image, union_extended, CounterAutomaton,
};
use crate::error::AutomataError;
use crate::extrapolate::Extrapolation;
use crate::ops::{complement, intersection_nfa, normal_form, shortest_lasso, shortest_word};
use crate::report::{Counterexample, InconclusiveReason, Verdict};
use crate::transducer::{compose_raw, image_raw, Transducer};
use crate::weak::complement_weak;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Named sizes of the intermediate automata.
    pub sizes: Vec<(&'static str, usize)>,
    /// Synchronization bound, for preciseness checks.
    pub bound: Option<i64>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict {}", self.verdict)?;
        for (name, n) in &self.sizes {
            writeln!(f, "size {name} {n}")?;
        }
        if let Some(m) = self.bound {
            writeln!(f, "bound {m}")?;
        }
        writeln!(f, "elapsed_ms {}", self.elapsed.as_millis())
    }
}

fn report(verdict: Verdict, sizes: Vec<(&'static str, usize)>, bound: Option<i64>, start: Instant) -> CheckReport {
    CheckReport {
        verdict,
        sizes,
        bound,
        elapsed: start.elapsed(),
    }
}

/// `L(a) ⊆ L(b)` for `a` possibly nondeterministic and `b` deterministic.
fn inclusion(a: &Automaton, b: &Automaton) -> Result<Verdict, AutomataError> {
    Ok(match a.kind() {
        Kind::FiniteWord => match shortest_word(&intersection_nfa(a, &complement(b))?) {
            None => Verdict::CriterionHolds,
            Some(w) => Verdict::CriterionFails(Counterexample::Word(w)),
        },
        Kind::WeakBuchi => match shortest_lasso(&intersection_nfa(a, &complement_weak(b)?)?) {
            None => Verdict::CriterionHolds,
            Some(l) => Verdict::CriterionFails(Counterexample::Lasso(l)),
        },
    })
}

/// Deterministic minimal form, or the inconclusive verdict when a weak
/// automaton cannot be determinized into a weak one.
fn deterministic(a: &Automaton) -> Result<Result<Automaton, Verdict>, AutomataError> {
    match normal_form(a) {
        Ok(d) => Ok(Ok(d)),
        Err(AutomataError::NotInherentlyWeak) => Ok(Err(Verdict::Inconclusive(InconclusiveReason::NotInherentlyWeak))),
        Err(e) => Err(e),
    }
}

/// Holds when `L(T* ∘ T*) ⊆ L(T*)`. A failing witness is a pair in the
/// composition outside `T*`.
pub fn check_safety_closure(t_star: &Transducer) -> Result<CheckReport, AutomataError> {
    let start = Instant::now();
    let det = match deterministic(t_star.automaton())? {
        Ok(d) => d,
        Err(v) => return Ok(report(v, vec![("extrapolation", t_star.num_states())], None, start)),
    };
    let det_t = Transducer::new(det.clone())?;
    let (comp, _) = compose_raw(&det_t, &det_t)?;
    let sizes = vec![("extrapolation", det.num_states()), ("composition", comp.num_states())];
    Ok(report(inclusion(&comp, &det)?, sizes, None, start))
}

/// Holds when `L(T(A*)) ⊆ L(A*)`.
pub fn check_safety_reach(t: &Transducer, a_star: &Automaton) -> Result<CheckReport, AutomataError> {
    let start = Instant::now();
    let det = match deterministic(a_star)? {
        Ok(d) => d,
        Err(v) => return Ok(report(v, vec![("extrapolation", a_star.num_states())], None, start)),
    };
    let (img, _) = image_raw(t, &det)?;
    let sizes = vec![("extrapolation", det.num_states()), ("image", img.num_states())];
    Ok(report(inclusion(&img, &det)?, sizes, None, start))
}

/// Default synchronization bound: twice the maximal increment, at least 1.
pub fn default_bound(ext: &Extrapolation, multiplier: i64) -> i64 {
    (multiplier * ext.counted.max_increment() as i64).max(1)
}

/// Minimal equivalent of a counter automaton, or an early inconclusive
/// report when a weak one cannot be determinized.
macro_rules! norm {
    ($c:expr, $sizes:expr, $start:expr, $m:expr) => {
        match $c.normalize() {
            Ok(n) => n,
            Err(AutomataError::NotInherentlyWeak) => {
                let v = Verdict::Inconclusive(InconclusiveReason::NotInherentlyWeak);
                return Ok(report(v, $sizes, Some($m), $start));
            }
            Err(e) => return Err(e),
        }
    };
}

/// Compares the synchronized projection, extended with the zero layer,
/// against the counted extrapolation.
fn close_comparison(
    synchronized: CounterAutomaton,
    ext: &Extrapolation,
    m: i64,
    mut sizes: Vec<(&'static str, usize)>,
    start: Instant,
) -> Result<CheckReport, AutomataError> {
    sizes.push(("synchronized", synchronized.num_states()));
    let r = norm!(synchronized, sizes, start, m);
    let zero = counter_zero(&ext.origin);
    let lhs = union_extended(&r, &zero)?;
    let verdict = match extended_equal(&lhs, &ext.counted)? {
        Verdict::CriterionFails(_) => Verdict::Inconclusive(InconclusiveReason::ExtendedLanguageGap),
        v => v,
    };
    Ok(report(verdict, sizes, Some(m), start))
}

/// Every pair of `T^{e_i}` (`i > 0`) is in `T^{e_j} ∘ T^{e_j'}` for some
/// `j, j' < i`, checked on the counted extrapolation with bound `m`.
pub fn check_preciseness_closure(ext: &Extrapolation, m: i64) -> Result<CheckReport, AutomataError> {
    check_preciseness_closure_within(ext, m, usize::MAX)
}

/// Like [`check_preciseness_closure`], failing with `StateLimit` when the
/// synchronized product exceeds `limit` states.
pub fn check_preciseness_closure_within(ext: &Extrapolation, m: i64, limit: usize) -> Result<CheckReport, AutomataError> {
    let start = Instant::now();
    let tc = &ext.counted;
    if tc.dimension() != 1 {
        return Err(AutomataError::DimensionMismatch(tc.dimension(), 1));
    }
    let sizes = vec![("counted", tc.num_states())];
    let tc = norm!(tc, sizes, start, m);
    let synchronized = synchronized_composition(&tc, m, limit)?;
    close_comparison(synchronized, ext, m, sizes, start)
}

/// Every word of `A^{e_i}` (`i > 0`) is in `T^k(A^{e_j})` for some `j < i`;
/// `t_k` is the relation applied between consecutive samples.
pub fn check_preciseness_reach(t_k: &Transducer, ext: &Extrapolation, m: i64) -> Result<CheckReport, AutomataError> {
    check_preciseness_reach_within(t_k, ext, m, usize::MAX)
}

/// Like [`check_preciseness_reach`], under a state limit.
pub fn check_preciseness_reach_within(
    t_k: &Transducer,
    ext: &Extrapolation,
    m: i64,
    limit: usize,
) -> Result<CheckReport, AutomataError> {
    let start = Instant::now();
    let ac = &ext.counted;
    if ac.dimension() != 1 {
        return Err(AutomataError::DimensionMismatch(ac.dimension(), 1));
    }
    let sizes = vec![("counted", ac.num_states())];
    let ac = norm!(ac, sizes, start, m);
    let synchronized = synchronized_image(t_k, &ac, m, limit)?;
    close_comparison(synchronized, ext, m, sizes, start)
}
