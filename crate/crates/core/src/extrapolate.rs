//! Extrapolation of the last automaton of an incrementally growing sequence.
//!
//! Every construction builds a one-counter automaton: original transitions
//! carry 0 and each added transition carries the number of increments it
//! skips. The plain extrapolation is its counterless view.

use crate::automaton::{Automaton, Kind, StateId};
use crate::counter::CounterAutomaton;
use crate::error::AutomataError;
use crate::increments::{GrowDecomposition, Part};
use crate::ops::canonical;
use crate::weak::{canonical_weak, determinize_weak};
use crate::alphabet::Symbol;

/// Target of an added transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    /// Coordinate `m` of increment `l`.
    Increment(usize, usize),
    /// Coordinate `m` of the nonaccepting copy of the head increment.
    Copy(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AddedTransition {
    pub source: StateId,
    pub symbol: Symbol,
    pub target: Target,
    pub to: StateId,
    /// Number of simulated increments.
    pub simulated: u32,
}

#[derive(Debug, Clone)]
pub struct Extrapolation {
    /// The automaton that was extrapolated.
    pub origin: Automaton,
    /// Counter-augmented extrapolation; its counterless view is `plain`.
    pub counted: CounterAutomaton,
    /// Generally nondeterministic.
    pub plain: Automaton,
    /// Added transitions, sorted by source, symbol and target.
    pub added: Vec<AddedTransition>,
    /// For each state of the copy, the head-increment state it duplicates.
    pub copy_of: Vec<(StateId, StateId)>,
}

impl Extrapolation {
    /// Deterministic minimal form of the plain extrapolation. Weak
    /// extrapolations may fail with `NotInherentlyWeak`.
    pub fn minimized(&self) -> Result<Automaton, AutomataError> {
        match self.plain.kind() {
            Kind::FiniteWord => Ok(canonical(&self.plain)),
            Kind::WeakBuchi => canonical_weak(&determinize_weak(&self.plain)?),
        }
    }
}

/// Dispatches on the kind of `a`.
pub fn extrapolate(a: &Automaton, g: &GrowDecomposition) -> Result<Extrapolation, AutomataError> {
    build(a, g, a.kind() == Kind::WeakBuchi)
}

/// Adds transitions from the head and the head increment into lower increments.
pub fn extrapolate_finite(a: &Automaton, g: &GrowDecomposition) -> Result<Automaton, AutomataError> {
    expect_kind(a, Kind::FiniteWord)?;
    Ok(build(a, g, false)?.plain)
}

/// Like [`extrapolate_finite`], with a nonaccepting copy of the head
/// increment absorbing every jump back into it.
pub fn extrapolate_weak(a: &Automaton, g: &GrowDecomposition) -> Result<Automaton, AutomataError> {
    expect_kind(a, Kind::WeakBuchi)?;
    Ok(build(a, g, true)?.plain)
}

pub fn extrapolate_finite_counter(a: &Automaton, g: &GrowDecomposition) -> Result<CounterAutomaton, AutomataError> {
    expect_kind(a, Kind::FiniteWord)?;
    Ok(build(a, g, false)?.counted)
}

pub fn extrapolate_weak_counter(a: &Automaton, g: &GrowDecomposition) -> Result<CounterAutomaton, AutomataError> {
    expect_kind(a, Kind::WeakBuchi)?;
    Ok(build(a, g, true)?.counted)
}

fn expect_kind(a: &Automaton, kind: Kind) -> Result<(), AutomataError> {
    if a.kind() == kind {
        Ok(())
    } else {
        Err(AutomataError::KindMismatch)
    }
}

fn check(a: &Automaton, g: &GrowDecomposition) -> Result<(), AutomataError> {
    if g.num_increments() < 2 {
        return Err(AutomataError::TooFewIncrements(g.num_increments()));
    }
    if g.parts.len() != a.num_states() || !a.is_deterministic() {
        return Err(AutomataError::NotCanonical);
    }
    Ok(())
}

fn build(a: &Automaton, g: &GrowDecomposition, weak: bool) -> Result<Extrapolation, AutomataError> {
    check(a, g)?;
    let mut c = CounterAutomaton::new(a.alphabet().clone(), a.kind(), 1);
    for q in 0..a.num_states() {
        c.add_state(a.is_accepting(q));
    }
    for &q in a.initial() {
        c.add_initial(q);
    }
    for (q, s, r) in a.edges() {
        c.add_transition(q, s, &[0], r);
    }
    let head_inc = &g.increments[0];
    let mut copy: Vec<StateId> = Vec::new();
    let mut copy_of = Vec::new();
    if weak {
        for &q in head_inc {
            let id = c.add_state(false);
            copy.push(id);
            copy_of.push((id, q));
        }
        for (m, &q) in head_inc.iter().enumerate() {
            for &(s, r) in a.transitions(q) {
                match g.parts[r] {
                    Part::Increment(0, m2) => c.add_transition(copy[m], s, &[0], copy[m2]),
                    Part::Increment(..) | Part::TailEnd => c.add_transition(copy[m], s, &[0], r),
                    Part::Head => {}
                }
            }
        }
    }
    let mut added = Vec::new();
    for q in 0..a.num_states() {
        let from_copy = match g.parts[q] {
            Part::Head => None,
            Part::Increment(0, m) => copy.get(m).copied(),
            _ => continue,
        };
        for &(s, r) in a.transitions(q) {
            let Part::Increment(j, m) = g.parts[r] else { continue };
            if j == 0 {
                continue;
            }
            let lowest = usize::from(weak);
            let sources = std::iter::once(q).chain(from_copy);
            for src in sources {
                for l in lowest..j {
                    let to = g.increments[l][m];
                    added.push(AddedTransition {
                        source: src,
                        symbol: s,
                        target: Target::Increment(l, m),
                        to,
                        simulated: (j - l) as u32,
                    });
                }
                if weak {
                    added.push(AddedTransition {
                        source: src,
                        symbol: s,
                        target: Target::Copy(m),
                        to: copy[m],
                        simulated: j as u32,
                    });
                }
            }
        }
    }
    added.sort();
    added.dedup();
    for t in &added {
        c.add_transition(t.source, t.symbol, &[t.simulated], t.to);
    }
    Ok(Extrapolation {
        origin: a.clone(),
        plain: c.counterless(),
        counted: c,
        added,
        copy_of,
    })
}

/// The `i`-th element of the extrapolated sequence of origin `a`, built
/// explicitly: `i` fresh increments are inserted between the head and the
/// head increment. Head transitions keep their increment index, fresh
/// increments wire like the head increment, and the original increments are
/// shifted by `i`.
pub fn insert_increments(a: &Automaton, g: &GrowDecomposition, i: usize) -> Automaton {
    let k = g.num_increments();
    let width = g.increment_size();
    let mut out = Automaton::new(a.alphabet().clone(), a.kind());
    // head and tail-end states first, then the increments block by block
    let mut fixed = vec![None; a.num_states()];
    for q in 0..a.num_states() {
        if matches!(g.parts[q], Part::Head | Part::TailEnd) {
            fixed[q] = Some(out.add_state(a.is_accepting(q)));
        }
    }
    let base = out.num_states();
    let total = i + k;
    let head_inc = &g.increments[0];
    for l in 0..total {
        for m in 0..width {
            let proto = if l < i { head_inc[m] } else { g.increments[l - i][m] };
            out.add_state(a.is_accepting(proto));
        }
    }
    let inc = |l: usize, m: usize| base + l * width + m;
    for &q in a.initial() {
        let id = match g.parts[q] {
            Part::Increment(l, m) => inc(l, m),
            _ => fixed[q].expect("fixed"),
        };
        out.add_initial(id);
    }
    // target of a transition leaving a state in increment `shift` of the
    // result, given its target in the origin
    let target = |r: StateId, shift: usize| match g.parts[r] {
        Part::Increment(l, m) => inc(l + shift, m),
        _ => fixed[r].expect("fixed"),
    };
    for q in 0..a.num_states() {
        match g.parts[q] {
            Part::Head => {
                for &(s, r) in a.transitions(q) {
                    out.add_transition(fixed[q].expect("fixed"), s, target(r, 0));
                }
            }
            Part::TailEnd => {
                for &(s, r) in a.transitions(q) {
                    out.add_transition(fixed[q].expect("fixed"), s, target(r, i));
                }
            }
            Part::Increment(l, m) => {
                let shifts: Vec<usize> = if l == 0 { (0..=i).collect() } else { vec![l + i] };
                for shift in shifts {
                    for &(s, r) in a.transitions(q) {
                        let to = match g.parts[r] {
                            Part::Increment(l2, m2) => inc(l2 + shift - l, m2),
                            _ => fixed[r].expect("fixed"),
                        };
                        out.add_transition(inc(shift, m), s, to);
                    }
                }
            }
        }
    }
    out
}
