//! Brute-force oracles and random generators shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use rmc_core::alphabet::{Alphabet, Symbol};
use rmc_core::automaton::{Automaton, Kind, Lasso, StateId, Word};
use rmc_core::counter::CounterAutomaton;

pub mod families;
pub mod ground;
pub mod weak_examples;

pub const LABELS: [&str; 3] = ["a", "b", "c"];

pub fn alphabet(k: usize) -> Alphabet {
    Alphabet::new(LABELS[..k].iter().copied()).unwrap()
}

/// Two-track alphabet over `k` labels.
pub fn pair_alphabet(k: usize) -> Alphabet {
    Alphabet::power(&alphabet(k), 2)
}

/// All words of length at most `max` over `k` symbols.
pub fn words(k: usize, max: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..k as Symbol {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Words of exactly length `n`.
pub fn words_of_len(k: usize, n: usize) -> Vec<Word> {
    words(k, n).into_iter().filter(|w| w.len() == n).collect()
}

/// Subset simulation, reading transitions only.
pub fn accepts(a: &Automaton, w: &[Symbol]) -> bool {
    let mut cur: BTreeSet<StateId> = a.initial().iter().copied().collect();
    for &s in w {
        cur = cur
            .iter()
            .flat_map(|&q| a.transitions(q).iter().filter(move |(x, _)| *x == s).map(|(_, r)| *r))
            .collect();
    }
    cur.iter().any(|&q| a.is_accepting(q))
}

/// Accepted words of length at most `max`, by depth-first search over state sets.
pub fn bounded(a: &Automaton, max: usize) -> BTreeSet<Word> {
    let k = a.alphabet().size();
    let mut out = BTreeSet::new();
    let start: BTreeSet<StateId> = a.initial().iter().copied().collect();
    let mut stack = vec![(Vec::new(), start)];
    while let Some((w, set)) = stack.pop() {
        if set.iter().any(|&q| a.is_accepting(q)) {
            out.insert(w.clone());
        }
        if w.len() == max || set.is_empty() {
            continue;
        }
        for s in 0..k as Symbol {
            let next: BTreeSet<StateId> = set
                .iter()
                .flat_map(|&q| a.transitions(q).iter().filter(move |(x, _)| *x == s).map(|(_, r)| *r))
                .collect();
            let mut v = w.clone();
            v.push(s);
            stack.push((v, next));
        }
    }
    out
}

/// Büchi acceptance of `stem · cycle^ω`: some reachable accepting node of
/// the product with the lasso positions lies on a cycle.
pub fn accepts_lasso(a: &Automaton, l: &Lasso) -> bool {
    let len = l.stem.len() + l.cycle.len();
    let next_pos = |p: usize| if p + 1 < len { p + 1 } else { l.stem.len() };
    let succ = |(q, p): (StateId, usize)| -> Vec<(StateId, usize)> {
        let s = l.letter(p);
        a.transitions(q)
            .iter()
            .filter(|(x, _)| *x == s)
            .map(|(_, r)| (*r, next_pos(p)))
            .collect()
    };
    let mut seen = HashSet::new();
    let mut stack: Vec<(StateId, usize)> = a.initial().iter().map(|&q| (q, 0)).collect();
    while let Some(n) = stack.pop() {
        if seen.insert(n) {
            stack.extend(succ(n));
        }
    }
    seen.iter().any(|&n| {
        if !a.is_accepting(n.0) || n.1 < l.stem.len() {
            return false;
        }
        let mut inner = HashSet::new();
        let mut st = succ(n);
        while let Some(m) = st.pop() {
            if m == n {
                return true;
            }
            if inner.insert(m) {
                st.extend(succ(m));
            }
        }
        false
    })
}

/// Lassos with `|stem| + |cycle| <= max`.
pub fn lassos(k: usize, max: usize) -> Vec<Lasso> {
    let mut out = Vec::new();
    for c in 1..=max {
        for s in 0..=max - c {
            for stem in words_of_len(k, s) {
                for cycle in words_of_len(k, c) {
                    out.push(Lasso::new(stem.clone(), cycle));
                }
            }
        }
    }
    out
}

pub fn bounded_lassos(a: &Automaton, all: &[Lasso]) -> BTreeSet<Lasso> {
    all.iter().filter(|l| accepts_lasso(a, l)).cloned().collect()
}

/// Valuations of the accepting runs of `c` on `w`, by explicit run enumeration.
pub fn run_valuations(c: &CounterAutomaton, w: &[Symbol]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(StateId, usize, Vec<u32>)> =
        c.initial().iter().map(|&q| (q, 0, vec![0; c.dimension()])).collect();
    while let Some((q, i, v)) = stack.pop() {
        if i == w.len() {
            if c.is_accepting(q) {
                out.insert(v);
            }
            continue;
        }
        for (s, inc, r) in c.transitions(q) {
            if *s == w[i] {
                let nv: Vec<u32> = v.iter().zip(inc.iter()).map(|(x, y)| x + y).collect();
                stack.push((*r, i + 1, nv));
            }
        }
    }
    out
}

/// Increment sequences of the accepting runs of `c` on `w`.
pub fn run_traces(c: &CounterAutomaton, w: &[Symbol]) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut stack: Vec<(StateId, Vec<Vec<u32>>)> = c.initial().iter().map(|&q| (q, Vec::new())).collect();
    while let Some((q, tr)) = stack.pop() {
        let i = tr.len();
        if i == w.len() {
            if c.is_accepting(q) {
                out.push(tr);
            }
            continue;
        }
        for (s, inc, r) in c.transitions(q) {
            if *s == w[i] {
                let mut t = tr.clone();
                t.push(inc.to_vec());
                stack.push((*r, t));
            }
        }
    }
    out
}

/// Counter-language sample over all words of length at most `max`.
pub fn counter_sample(c: &CounterAutomaton, max: usize) -> BTreeSet<(Word, Vec<u32>)> {
    words(c.base().size(), max)
        .into_iter()
        .flat_map(|w| run_valuations(c, &w).into_iter().map(move |v| (w.clone(), v)))
        .collect()
}

pub fn build(
    alpha: Alphabet,
    kind: Kind,
    accepting: &[bool],
    initial: &[StateId],
    edges: &[(StateId, Symbol, StateId)],
) -> Automaton {
    let mut a = Automaton::new(alpha, kind);
    for &f in accepting {
        a.add_state(f);
    }
    for &q in initial {
        a.add_initial(q);
    }
    for &(q, s, r) in edges {
        a.add_transition(q, s, r);
    }
    a
}

/// Random automaton with at most `max_n` states over an alphabet of `sizes` symbols.
pub fn arb_nfa_over(alpha: Alphabet, max_n: usize, kind: Kind) -> impl Strategy<Value = Automaton> {
    let k = alpha.size();
    (1..=max_n).prop_flat_map(move |n| {
        let alpha = alpha.clone();
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::btree_set(0..n, 1..=n.min(2)),
            prop::collection::vec((0..n, 0..k as Symbol, 0..n), 0..=2 * n * k),
        )
            .prop_map(move |(acc, init, edges)| {
                let init: Vec<StateId> = init.into_iter().collect();
                build(alpha.clone(), kind, &acc, &init, &edges)
            })
    })
}

pub fn arb_nfa(max_n: usize, max_k: usize) -> impl Strategy<Value = Automaton> {
    (1..=max_k).prop_flat_map(move |k| arb_nfa_over(alphabet(k), max_n, Kind::FiniteWord))
}

/// Random partial DFA with initial state 0.
pub fn arb_dfa_over(alpha: Alphabet, max_n: usize, kind: Kind) -> impl Strategy<Value = Automaton> {
    let k = alpha.size();
    (1..=max_n).prop_flat_map(move |n| {
        let alpha = alpha.clone();
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(prop::option::weighted(0.8, 0..n), n * k),
        )
            .prop_map(move |(acc, succ)| {
                let mut edges = Vec::new();
                for (i, t) in succ.iter().enumerate() {
                    if let Some(r) = t {
                        edges.push((i / k, (i % k) as Symbol, *r));
                    }
                }
                build(alpha.clone(), kind, &acc, &[0], &edges)
            })
    })
}

pub fn arb_dfa(max_n: usize, max_k: usize) -> impl Strategy<Value = Automaton> {
    (1..=max_k).prop_flat_map(move |k| arb_dfa_over(alphabet(k), max_n, Kind::FiniteWord))
}

/// Random weak automaton: states carry levels, transitions never decrease
/// the level and acceptance is constant on each level, so every component
/// is uniform. Deterministic when `det` holds.
pub fn arb_weak(max_n: usize, k: usize, det: bool) -> impl Strategy<Value = Automaton> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..3usize, n),
            prop::collection::vec(any::<bool>(), 3),
            prop::collection::vec(prop::collection::vec(0..n, 0..=if det { 1 } else { 2 }), n * k),
        )
            .prop_map(move |(mut level, acc_level, succ)| {
                level.sort_unstable();
                let acc: Vec<bool> = level.iter().map(|&l| acc_level[l]).collect();
                let mut edges = Vec::new();
                for (i, targets) in succ.iter().enumerate() {
                    let q = i / k;
                    for &r in targets {
                        if level[r] >= level[q] {
                            edges.push((q, (i % k) as Symbol, r));
                        }
                    }
                }
                build(alphabet(k), Kind::WeakBuchi, &acc, &[0], &edges)
            })
    })
}

/// Random counter automaton with increments at most `d`.
pub fn arb_counter_over(alpha: Alphabet, max_n: usize, dim: usize, d: u32) -> impl Strategy<Value = CounterAutomaton> {
    let k = alpha.size();
    (1..=max_n).prop_flat_map(move |n| {
        let alpha = alpha.clone();
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec((0..n, 0..k as Symbol, prop::collection::vec(0..=d, dim), 0..n), 0..=2 * n * k),
        )
            .prop_map(move |(acc, edges)| {
                let mut c = CounterAutomaton::new(alpha.clone(), Kind::FiniteWord, dim);
                for &f in &acc {
                    c.add_state(f);
                }
                c.add_initial(0);
                for (q, s, v, r) in &edges {
                    c.add_transition(*q, *s, v, *r);
                }
                c
            })
    })
}
