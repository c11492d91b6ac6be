//! Increment detection between successive minimal automata.
//!
//! All inputs are canonical minimal deterministic automata of one kind over
//! one alphabet. Equivalences are partial one-to-one maps from the states of
//! `A^i` to the states of `A^{i+1}`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, Kind, StateId};
use crate::error::AutomataError;
use crate::ops::{refine, StateMap};
use crate::weak::coloring;

fn check_inputs(a: &Automaton, b: &Automaton) -> Result<(), AutomataError> {
    a.check_same_alphabet(b)?;
    for x in [a, b] {
        if x.num_states() > 0 && !x.is_deterministic() {
            return Err(AutomataError::NotCanonical);
        }
    }
    Ok(())
}

/// Pairs of states accepting the same language, found by refining the
/// disjoint union of both automata.
pub fn forward_equivalence(a: &Automaton, b: &Automaton) -> Result<StateMap, AutomataError> {
    check_inputs(a, b)?;
    let joint = a.disjoint_union(b)?;
    let keys: Vec<usize> = match a.kind() {
        Kind::FiniteWord => (0..joint.num_states()).map(|q| joint.is_accepting(q) as usize).collect(),
        Kind::WeakBuchi => coloring(&joint),
    };
    let block = refine(&joint, &keys);
    let shift = a.num_states();
    let mut in_b: HashMap<usize, StateId> = HashMap::new();
    for q in 0..b.num_states() {
        if in_b.insert(block[shift + q], q).is_some() {
            return Err(AutomataError::NotCanonical);
        }
    }
    let mut map = vec![None; a.num_states()];
    let mut seen = HashSet::new();
    for (q, slot) in map.iter_mut().enumerate() {
        if !seen.insert(block[q]) {
            return Err(AutomataError::NotCanonical);
        }
        *slot = in_b.get(&block[q]).copied();
    }
    Ok(map)
}

/// Pairs of states reached by common words, found by a synchronized
/// breadth-first traversal from the pair of initial states. A pair is
/// explored only when both states have the same acceptance and neither is
/// already paired with another state; mismatching transitions are ignored.
pub fn backward_equivalence(a: &Automaton, b: &Automaton) -> Result<StateMap, AutomataError> {
    check_inputs(a, b)?;
    let mut map: StateMap = vec![None; a.num_states()];
    let mut back: StateMap = vec![None; b.num_states()];
    let (Some(&p0), Some(&q0)) = (a.initial().first(), b.initial().first()) else {
        return Ok(map);
    };
    if a.is_accepting(p0) != b.is_accepting(q0) {
        return Ok(map);
    }
    map[p0] = Some(q0);
    back[q0] = Some(p0);
    let mut queue = VecDeque::from([(p0, q0)]);
    while let Some((p, q)) = queue.pop_front() {
        for &(s, r) in a.transitions(p) {
            let Some(r2) = b.successor(q, s) else { continue };
            if map[r].is_none() && back[r2].is_none() && a.is_accepting(r) == b.is_accepting(r2) {
                map[r] = Some(r2);
                back[r2] = Some(r);
                queue.push_back((r, r2));
            }
        }
    }
    Ok(map)
}

/// Partition of `A^{i+1}` obtained when it is incrementally larger than `A^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub forward: StateMap,
    pub backward: StateMap,
    /// States of `A^i` covered by the forward equivalence.
    pub covered_forward: Vec<bool>,
    pub head: Vec<StateId>,
    pub increment: Vec<StateId>,
    pub tail: Vec<StateId>,
}

/// `Some(step)` when the equivalences cover every state of `a`.
pub fn is_incrementally_larger(a: &Automaton, b: &Automaton) -> Result<Option<Step>, AutomataError> {
    let forward = forward_equivalence(a, b)?;
    let backward = backward_equivalence(a, b)?;
    if (0..a.num_states()).any(|q| forward[q].is_none() && backward[q].is_none()) {
        return Ok(None);
    }
    let covered_forward: Vec<bool> = forward.iter().map(Option::is_some).collect();
    let mut role = vec![0u8; b.num_states()]; // 0 increment, 1 head, 2 tail
    for q in 0..a.num_states() {
        if !covered_forward[q] {
            role[backward[q].expect("covered")] = 1;
        }
    }
    for q in 0..a.num_states() {
        if let Some(r) = forward[q] {
            if role[r] != 1 {
                role[r] = 2;
            }
        }
    }
    let pick = |k: u8| (0..b.num_states()).filter(|&q| role[q] == k).collect::<Vec<_>>();
    Ok(Some(Step {
        head: pick(1),
        increment: pick(0),
        tail: pick(2),
        forward,
        backward,
        covered_forward,
    }))
}

/// Part of a state in a growth decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Head,
    /// Increment index and coordinate inside the increment.
    Increment(usize, usize),
    TailEnd,
}

/// Head, ordered increments and tail-end of the last automaton of an
/// incrementally growing sequence. `increments[l][m]` is the state with
/// coordinate `m` in increment `l`; equal coordinates are related by the
/// increment isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowDecomposition {
    pub parts: Vec<Part>,
    pub head: Vec<StateId>,
    pub increments: Vec<Vec<StateId>>,
    pub tail_end: Vec<StateId>,
    pub diameter: usize,
    /// Head states of the previous automaton mapped to this head.
    pub head_iso: Option<StateMap>,
    /// Tail-end states of the previous automaton mapped to this tail-end.
    pub tail_iso: Option<StateMap>,
    /// Decomposition of the previous automaton, when it has one.
    pub previous: Option<Box<GrowDecomposition>>,
}

impl GrowDecomposition {
    /// Decomposition given explicitly; states outside the head and the
    /// increments form the tail-end. Fails when the parts overlap, when
    /// increments differ in shape, or when an SCC straddles two parts.
    pub fn from_parts(a: &Automaton, head: Vec<StateId>, increments: Vec<Vec<StateId>>) -> Option<Self> {
        let mut parts = vec![None; a.num_states()];
        for &q in &head {
            if parts.get_mut(q)?.replace(Part::Head).is_some() {
                return None;
            }
        }
        for (l, inc) in increments.iter().enumerate() {
            for (m, &q) in inc.iter().enumerate() {
                if parts.get_mut(q)?.replace(Part::Increment(l, m)).is_some() {
                    return None;
                }
            }
        }
        let parts: Vec<Part> = parts.into_iter().map(|p| p.unwrap_or(Part::TailEnd)).collect();
        if !increments_isomorphic(a, &increments, &parts) || !sccs_respect_parts(a, &parts) {
            return None;
        }
        let tail_end = (0..a.num_states()).filter(|&q| parts[q] == Part::TailEnd).collect();
        let mut head = head;
        head.sort_unstable();
        Some(Self {
            diameter: communication_diameter(a, &parts),
            parts,
            head,
            increments,
            tail_end,
            head_iso: None,
            tail_iso: None,
            previous: None,
        })
    }

    pub fn num_increments(&self) -> usize {
        self.increments.len()
    }

    pub fn increment_size(&self) -> usize {
        self.increments.first().map_or(0, Vec::len)
    }

    /// Stable textual dump: one `state part` line per state.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (q, p) in self.parts.iter().enumerate() {
            let s = match p {
                Part::Head => "head".to_string(),
                Part::Increment(l, m) => format!("inc {l} {m}"),
                Part::TailEnd => "tail".to_string(),
            };
            out.push_str(&format!("{q} {s}\n"));
        }
        out.push_str(&format!("diameter {}\n", self.diameter));
        out
    }
}

impl fmt::Display for GrowDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "head {:?} increments {:?} tail-end {:?} diameter {}",
            self.head, self.increments, self.tail_end, self.diameter
        )
    }
}

fn apply(map: &StateMap, states: &[StateId]) -> Option<Vec<StateId>> {
    states.iter().map(|&q| map[q]).collect()
}

/// Decomposition of every element after the first of a growing sequence.
fn growth_chain(seq: &[Automaton]) -> Result<Vec<GrowDecomposition>, AutomataError> {
    let mut steps: Vec<Step> = Vec::new();
    for (j, pair) in seq.windows(2).enumerate() {
        match is_incrementally_larger(&pair[0], &pair[1])? {
            Some(s) => steps.push(s),
            None => return Err(AutomataError::NotGrowing(j)),
        }
    }
    // coordinates: ord[j] lists the head increment of seq[j + 1]
    let mut ord: Vec<Vec<StateId>> = vec![steps[0].increment.clone()];
    for j in 1..steps.len() {
        let image = apply(&steps[j].backward, &ord[j - 1]).ok_or(AutomataError::NotGrowing(j))?;
        let mut sorted = image.clone();
        sorted.sort_unstable();
        if sorted != steps[j].increment {
            return Err(AutomataError::NotGrowing(j));
        }
        ord.push(image);
    }
    let mut out: Vec<GrowDecomposition> = Vec::new();
    for j in 1..seq.len() {
        let a = &seq[j];
        let step = &steps[j - 1];
        let fail = AutomataError::NotGrowing(j - 1);
        let mut increments = vec![ord[j - 1].clone()];
        if !ord[j - 1].is_empty() {
            for l in 1..j {
                // head increment of seq[j - l] pushed forward l times
                let mut cur = ord[j - 1 - l].clone();
                for step in &steps[j - l..j] {
                    cur = apply(&step.forward, &cur).ok_or(fail.clone())?;
                }
                increments.push(cur);
            }
        } else {
            increments.clear();
        }
        let mut parts = vec![Part::TailEnd; a.num_states()];
        for &q in &step.head {
            parts[q] = Part::Head;
        }
        let tail: HashSet<StateId> = step.tail.iter().copied().collect();
        for (l, inc) in increments.iter().enumerate() {
            for (m, &q) in inc.iter().enumerate() {
                if l > 0 && (!tail.contains(&q) || parts[q] != Part::TailEnd) {
                    return Err(fail);
                }
                parts[q] = Part::Increment(l, m);
            }
        }
        let tail_end: Vec<StateId> = step
            .tail
            .iter()
            .copied()
            .filter(|&q| parts[q] == Part::TailEnd)
            .collect();
        if !increments_isomorphic(a, &increments, &parts) || !sccs_respect_parts(a, &parts) {
            return Err(fail);
        }
        let diameter = communication_diameter(a, &parts);
        let (head_iso, tail_iso, previous) = match out.last() {
            Some(prev) => {
                let head_iso = restricted_bijection(&step.backward, &prev.head, &step.head, a.num_states());
                let tail_iso = restricted_bijection(&step.forward, &prev.tail_end, &tail_end, a.num_states());
                (head_iso, tail_iso, Some(Box::new(GrowDecomposition { previous: None, ..prev.clone() })))
            }
            None => (None, None, None),
        };
        out.push(GrowDecomposition {
            parts,
            head: step.head.clone(),
            increments,
            tail_end,
            diameter,
            head_iso,
            tail_iso,
            previous,
        });
    }
    Ok(out)
}

/// `map` restricted to `from`, when it is a bijection onto `to`.
fn restricted_bijection(map: &StateMap, from: &[StateId], to: &[StateId], target_states: usize) -> Option<StateMap> {
    let mut out: StateMap = vec![None; map.len()];
    let mut hit = vec![false; target_states];
    for &q in from {
        let r = map[q]?;
        if hit[r] {
            return None;
        }
        hit[r] = true;
        out[q] = Some(r);
    }
    let target: HashSet<StateId> = to.iter().copied().collect();
    if from.len() != to.len() || !from.iter().all(|&q| target.contains(&out[q].expect("mapped"))) {
        return None;
    }
    Some(out)
}

/// Internal transitions and acceptance agree across all increments.
fn increments_isomorphic(a: &Automaton, increments: &[Vec<StateId>], parts: &[Part]) -> bool {
    let Some(first) = increments.first() else {
        return true;
    };
    let internal = |l: usize, q: StateId| -> Vec<(u32, usize)> {
        a.transitions(q)
            .iter()
            .filter_map(|&(s, r)| match parts[r] {
                Part::Increment(l2, m) if l2 == l => Some((s, m)),
                _ => None,
            })
            .collect()
    };
    for (l, inc) in increments.iter().enumerate().skip(1) {
        if inc.len() != first.len() {
            return false;
        }
        for (m, &q) in inc.iter().enumerate() {
            let p = first[m];
            if a.is_accepting(p) != a.is_accepting(q) || internal(0, p) != internal(l, q) {
                return false;
            }
        }
    }
    true
}

fn part_id(p: Part) -> (u8, usize) {
    match p {
        Part::Head => (0, 0),
        Part::Increment(l, _) => (1, l),
        Part::TailEnd => (2, 0),
    }
}

fn sccs_respect_parts(a: &Automaton, parts: &[Part]) -> bool {
    let sccs = a.sccs();
    let mut owner: Vec<Option<(u8, usize)>> = vec![None; sccs.count];
    for q in 0..a.num_states() {
        let c = sccs.component[q];
        let id = part_id(parts[q]);
        match owner[c] {
            None => owner[c] = Some(id),
            Some(o) if o == id => {}
            Some(_) => return false,
        }
    }
    true
}

/// Largest `d` such that a transition leads from the head or the head
/// increment into increment `d`.
fn communication_diameter(a: &Automaton, parts: &[Part]) -> usize {
    let mut d = 0;
    for (q, _, r) in a.edges() {
        let from_low = matches!(parts[q], Part::Head | Part::Increment(0, _));
        if let (true, Part::Increment(l, _)) = (from_low, parts[r]) {
            d = d.max(l);
        }
    }
    d
}

/// Decomposition of the last automaton of a sequence of at least three
/// automata that grows incrementally.
pub fn decompose(seq: &[Automaton]) -> Result<GrowDecomposition, AutomataError> {
    if seq.len() < 3 {
        return Err(AutomataError::NotGrowing(seq.len().saturating_sub(1)));
    }
    Ok(growth_chain(seq)?.pop().expect("nonempty chain"))
}

/// Whether increment `alpha` is communication equivalent to increment `beta`.
pub fn communication_equivalent(a: &Automaton, g: &GrowDecomposition, alpha: usize, beta: usize) -> bool {
    equivalent(a, g, alpha, beta, false)
}

/// Like [`communication_equivalent`] with `alpha < beta`, except that a jump
/// from `alpha` whose counterpart would land beyond the last increment may
/// land anywhere in the tail-end.
pub fn communication_equivalent_truncated(a: &Automaton, g: &GrowDecomposition, alpha: usize, beta: usize) -> bool {
    equivalent(a, g, alpha, beta, true)
}

fn equivalent(a: &Automaton, g: &GrowDecomposition, alpha: usize, beta: usize, truncate: bool) -> bool {
    let (Some(ia), Some(ib)) = (g.increments.get(alpha), g.increments.get(beta)) else {
        return false;
    };
    let k = g.num_increments();
    for (&q, &q2) in ia.iter().zip(ib) {
        for s in a.alphabet().symbols() {
            let ok = match (a.successor(q, s), a.successor(q2, s)) {
                (None, None) => true,
                (Some(r), Some(r2)) => match (g.parts[r], g.parts[r2]) {
                    (Part::TailEnd, Part::TailEnd) => r == r2,
                    (Part::Increment(x, m1), Part::Increment(y, m2)) => {
                        m1 == m2 && x as isize - alpha as isize == y as isize - beta as isize
                    }
                    (Part::Increment(x, _), Part::TailEnd) => truncate && x >= alpha && x + beta - alpha >= k,
                    _ => false,
                },
                _ => false,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Whether the head of the previous automaton and the head of the last one
/// have matching outgoing transitions.
pub fn communication_stable(prev: &Automaton, last: &Automaton, g: &GrowDecomposition) -> bool {
    let (Some(p), Some(head_iso), Some(tail_iso)) = (&g.previous, &g.head_iso, &g.tail_iso) else {
        return false;
    };
    for &q in &p.head {
        let q2 = head_iso[q].expect("bijection on the head");
        for s in prev.alphabet().symbols() {
            let ok = match (prev.successor(q, s), last.successor(q2, s)) {
                (None, None) => true,
                (Some(r), Some(r2)) => match (p.parts[r], g.parts[r2]) {
                    (Part::Head, Part::Head) => head_iso[r] == Some(r2),
                    (Part::TailEnd, Part::TailEnd) => tail_iso[r] == Some(r2),
                    (Part::Increment(x, m1), Part::Increment(y, m2)) => x == y && m1 == m2,
                    _ => false,
                },
                _ => false,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    /// `a^n b` as a minimal DFA: a chain of n+2 states.
    fn chain(n: usize) -> Automaton {
        let mut a = Automaton::new(Alphabet::new(["a", "b"]).unwrap(), Kind::FiniteWord);
        let states: Vec<_> = (0..=n).map(|_| a.add_state(false)).collect();
        let fin = a.add_state(true);
        a.add_initial(states[0]);
        for i in 0..n {
            a.add_transition(states[i], 0, states[i + 1]);
        }
        a.add_transition(states[n], 1, fin);
        crate::ops::canonical(&a)
    }

    #[test]
    fn chain_grows_one_state_per_step() {
        let seq: Vec<_> = (2..6).map(chain).collect();
        let g = decompose(&seq).unwrap();
        assert_eq!(g.num_increments(), 3);
        assert_eq!(g.increment_size(), 1);
        assert!(communication_equivalent(&seq[3], &g, 0, 1));
        assert!(communication_stable(&seq[2], &seq[3], &g));
    }

    #[test]
    fn constant_sequence_has_no_increment() {
        let seq = vec![chain(3), chain(3), chain(3)];
        let g = decompose(&seq).unwrap();
        assert_eq!(g.num_increments(), 0);
        assert_eq!(g.diameter, 0);
    }

    #[test]
    fn self_equivalences_are_identity() {
        let a = chain(3);
        let f = forward_equivalence(&a, &a).unwrap();
        let b = backward_equivalence(&a, &a).unwrap();
        for q in 0..a.num_states() {
            assert_eq!(f[q], Some(q));
            assert_eq!(b[q], Some(q));
        }
    }
}
