//! Weak Büchi automata.
//!
//! A weak automaton accepts an infinite word when its run eventually stays
//! inside an accepting component, which is the same as eventually visiting
//! accepting states only. That reading makes a weak automaton a co-Büchi
//! automaton, and the breakpoint construction determinizes it.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, Kind, Lasso, StateId};
use crate::error::AutomataError;
use crate::ops::{canonical_numbering, intersection_nfa, quotient, refine, shortest_lasso};
use crate::scc::Sccs;

/// Per-state component data of an automaton.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    pub sccs: Sccs,
    /// `Some(flag)` when every state of the component has acceptance `flag`,
    /// `None` for mixed components.
    pub uniform: Vec<Option<bool>>,
}

pub fn scc_decomposition(a: &Automaton) -> SccDecomposition {
    let sccs = a.sccs();
    let mut uniform: Vec<Option<Option<bool>>> = vec![None; sccs.count];
    for q in 0..a.num_states() {
        let c = sccs.component[q];
        let f = a.is_accepting(q);
        uniform[c] = match uniform[c] {
            None => Some(Some(f)),
            Some(Some(g)) if g == f => Some(Some(f)),
            _ => Some(None),
        };
    }
    SccDecomposition {
        sccs,
        uniform: uniform.into_iter().map(|u| u.flatten()).collect(),
    }
}

/// Every component is uniformly accepting or uniformly nonaccepting.
pub fn is_weak(a: &Automaton) -> bool {
    scc_decomposition(a).uniform.iter().all(Option::is_some)
}

/// True when some cycle inside component `c` avoids every state flagged by `avoid`.
fn cycle_avoiding(a: &Automaton, sccs: &Sccs, c: usize, avoid: impl Fn(StateId) -> bool) -> bool {
    let members: Vec<StateId> = (0..a.num_states())
        .filter(|&q| sccs.component[q] == c && !avoid(q))
        .collect();
    if members.is_empty() {
        return false;
    }
    let mut local = HashMap::new();
    for (i, &q) in members.iter().enumerate() {
        local.insert(q, i);
    }
    let inner = crate::scc::tarjan(members.len(), |i| {
        a.transitions(members[i])
            .iter()
            .filter_map(|(_, r)| local.get(r).copied())
            .collect::<Vec<_>>()
    });
    inner.nontrivial.iter().any(|&b| b)
}

/// No reachable component holds both an accepting and a nonaccepting cycle.
/// Accepting states of a component are removed and the rest is searched for
/// a cycle.
pub fn is_inherently_weak(a: &Automaton) -> bool {
    let reach = a.reachable();
    let sccs = a.sccs();
    let mut checked = vec![false; sccs.count];
    for q in 0..a.num_states() {
        let c = sccs.component[q];
        if !reach[q] || checked[c] || !sccs.nontrivial[c] {
            continue;
        }
        checked[c] = true;
        let has_accepting = (0..a.num_states()).any(|r| sccs.component[r] == c && a.is_accepting(r));
        if has_accepting && cycle_avoiding(a, &sccs, c, |r| a.is_accepting(r)) {
            return false;
        }
    }
    true
}

/// Deterministic co-Büchi automaton: a run is accepting when it eventually
/// stays in states flagged accepting ("good"). Nongood states are breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoBuchi {
    pub automaton: Automaton,
}

impl CoBuchi {
    /// Membership of an ultimately periodic word.
    pub fn accepts_lasso(&self, lasso: &Lasso) -> bool {
        let a = &self.automaton;
        let Some(&q0) = a.initial().first() else {
            return false;
        };
        let mut q = q0;
        for &s in &lasso.stem {
            match a.successor(q, s) {
                Some(r) => q = r,
                None => return false,
            }
        }
        // iterate the cycle until the state at the cycle start repeats
        let mut starts: Vec<StateId> = Vec::new();
        loop {
            if let Some(pos) = starts.iter().position(|&p| p == q) {
                // replay the loop part and check that it never visits a breakpoint
                let mut r = starts[pos];
                for _ in pos..starts.len() {
                    for &s in &lasso.cycle {
                        r = a.successor(r, s).expect("replay follows a known run");
                        if !a.is_accepting(r) {
                            return false;
                        }
                    }
                }
                return true;
            }
            starts.push(q);
            for &s in &lasso.cycle {
                match a.successor(q, s) {
                    Some(r) => q = r,
                    None => return false,
                }
            }
        }
    }

    /// No reachable component contains both a breakpoint and a cycle avoiding breakpoints.
    pub fn is_inherently_weak(&self) -> bool {
        let a = &self.automaton;
        let reach = a.reachable();
        let sccs = a.sccs();
        let mut checked = vec![false; sccs.count];
        for q in 0..a.num_states() {
            let c = sccs.component[q];
            if !reach[q] || checked[c] || !sccs.nontrivial[c] {
                continue;
            }
            checked[c] = true;
            let has_bad = (0..a.num_states()).any(|r| sccs.component[r] == c && !a.is_accepting(r));
            if has_bad && cycle_avoiding(a, &sccs, c, |r| !a.is_accepting(r)) {
                return false;
            }
        }
        true
    }

    /// Weak Büchi automaton with the same language: a component is accepting
    /// iff it has a cycle avoiding breakpoints. Requires inherent weakness.
    pub fn weaken(&self) -> Result<Automaton, AutomataError> {
        if !self.is_inherently_weak() {
            return Err(AutomataError::NotInherentlyWeak);
        }
        let a = &self.automaton;
        let sccs = a.sccs();
        let mut good = vec![false; sccs.count];
        for c in 0..sccs.count {
            good[c] = sccs.nontrivial[c] && cycle_avoiding(a, &sccs, c, |r| !a.is_accepting(r));
        }
        let mut out = a.clone().with_kind(Kind::WeakBuchi);
        for q in 0..out.num_states() {
            out.set_accepting(q, good[sccs.component[q]]);
        }
        Ok(out)
    }
}

/// Breakpoint construction: states are pairs (S, O) with O the runs that
/// have stayed in accepting states since the last breakpoint.
pub fn breakpoint(a: &Automaton) -> Result<CoBuchi, AutomataError> {
    if a.kind() != Kind::WeakBuchi {
        return Err(AutomataError::NotOmega);
    }
    if !is_weak(a) {
        return Err(AutomataError::NotWeak);
    }
    let mut out = Automaton::new(a.alphabet().clone(), Kind::WeakBuchi);
    if a.initial().is_empty() {
        return Ok(CoBuchi { automaton: out });
    }
    type Key = (Vec<StateId>, Vec<StateId>);
    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut queue: VecDeque<Key> = VecDeque::new();
    let s0 = a.initial().to_vec();
    let o0: Vec<StateId> = s0.iter().copied().filter(|&q| a.is_accepting(q)).collect();
    let start = (s0, o0);
    let q0 = out.add_state(!start.1.is_empty());
    out.add_initial(q0);
    index.insert(start.clone(), q0);
    queue.push_back(start);
    let symbols: Vec<_> = a.alphabet().symbols().collect();
    let post = |set: &[StateId], s| {
        let mut v: Vec<StateId> = set.iter().flat_map(|&q| a.successors(q, s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    while let Some((set, obl)) = queue.pop_front() {
        let from = index[&(set.clone(), obl.clone())];
        for &s in &symbols {
            let s2 = post(&set, s);
            if s2.is_empty() {
                continue;
            }
            let base = if obl.is_empty() { s2.clone() } else { post(&obl, s) };
            let o2: Vec<StateId> = base.into_iter().filter(|&q| a.is_accepting(q)).collect();
            let key = (s2, o2);
            let to = match index.get(&key) {
                Some(&t) => t,
                None => {
                    let t = out.add_state(!key.1.is_empty());
                    index.insert(key.clone(), t);
                    queue.push_back(key);
                    t
                }
            };
            out.add_transition(from, s, to);
        }
    }
    Ok(CoBuchi { automaton: out })
}

/// Deterministic weak automaton equivalent to a weak one, or
/// `NotInherentlyWeak` when the breakpoint automaton cannot be weakened.
pub fn determinize_weak(a: &Automaton) -> Result<Automaton, AutomataError> {
    if a.is_deterministic() && is_weak(a) {
        return Ok(a.clone());
    }
    breakpoint(a)?.weaken()
}

/// Colors of a trimmed deterministic weak automaton: nonincreasing along
/// transitions, even exactly on accepting components, and as small as
/// possible. A missing transition counts as a move to a rejecting sink of color 1.
pub(crate) fn coloring(a: &Automaton) -> Vec<usize> {
    let sccs = a.sccs();
    let members = sccs.members();
    let size = a.alphabet().size();
    let mut color = vec![0usize; a.num_states()];
    let mut comp_color = vec![0usize; sccs.count];
    // components are numbered so that successors come first
    for c in 0..sccs.count {
        let mut m = 0usize;
        for &q in &members[c] {
            let t = a.transitions(q);
            if t.len() < size {
                m = m.max(1);
            }
            for &(_, r) in t {
                if sccs.component[r] != c {
                    m = m.max(comp_color[sccs.component[r]]);
                }
            }
        }
        comp_color[c] = if sccs.nontrivial[c] {
            let accepting = a.is_accepting(members[c][0]);
            if m.is_multiple_of(2) == accepting {
                m
            } else {
                m + 1
            }
        } else {
            m
        };
        for &q in &members[c] {
            color[q] = comp_color[c];
        }
    }
    color
}

/// Canonical minimal weak deterministic automaton.
pub fn minimize_weak(a: &Automaton) -> Result<Automaton, AutomataError> {
    if a.kind() != Kind::WeakBuchi {
        return Err(AutomataError::NotOmega);
    }
    if !a.is_deterministic() && !a.initial().is_empty() {
        return Err(AutomataError::NotDeterministic);
    }
    if !is_weak(a) {
        return Err(AutomataError::NotWeak);
    }
    let t = a.trim();
    if t.num_states() == 0 {
        return Ok(Automaton::empty(a.alphabet().clone(), Kind::WeakBuchi));
    }
    let color = coloring(&t);
    let block = refine(&t, &color);
    let q = quotient(&t, &block, |r| color[r].is_multiple_of(2));
    Ok(canonical_numbering(&q))
}

/// Canonical form of any weak automaton (determinizing first if needed).
pub fn canonical_weak(a: &Automaton) -> Result<Automaton, AutomataError> {
    let d = determinize_weak(a)?;
    minimize_weak(&d)
}

/// Complement of a weak deterministic automaton.
pub fn complement_weak(a: &Automaton) -> Result<Automaton, AutomataError> {
    if a.kind() != Kind::WeakBuchi {
        return Err(AutomataError::NotOmega);
    }
    if !a.is_deterministic() && !a.initial().is_empty() {
        return Err(AutomataError::NotDeterministic);
    }
    if !is_weak(a) {
        return Err(AutomataError::NotWeak);
    }
    let mut c = a.complete();
    for q in 0..c.num_states() {
        let f = c.is_accepting(q);
        c.set_accepting(q, !f);
    }
    minimize_weak(&c)
}

/// `L(a) ⊆ L(b)` for weak deterministic automata, with a shortest lasso in
/// `L(a) \ L(b)` when inclusion fails.
pub fn omega_language_subset(a: &Automaton, b: &Automaton) -> Result<(bool, Option<Lasso>), AutomataError> {
    a.check_same_alphabet(b)?;
    let nb = complement_weak(b)?;
    let inter = intersection_nfa(a, &nb)?;
    let w = shortest_lasso(&inter);
    Ok((w.is_none(), w))
}

/// Union of two weak automata, kept nondeterministic.
pub fn union_weak(a: &Automaton, b: &Automaton) -> Result<Automaton, AutomataError> {
    a.disjoint_union(b)
}
