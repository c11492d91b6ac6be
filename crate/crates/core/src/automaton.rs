//! The automaton representation shared by every other module.
//!
//! States are dense indices `0..n`. Transitions are kept per origin state as
//! a sorted, duplicate-free list of `(symbol, destination)` pairs, so a
//! deterministic automaton has at most one entry per symbol and lookups are
//! binary searches. Transition functions are partial: a missing entry means
//! the run dies.

use std::collections::VecDeque;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::AutomataError;
use crate::scc::{tarjan, Sccs};

pub type StateId = usize;
pub type Word = Vec<Symbol>;

/// Acceptance condition of an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Finite words, accepted when the run ends in an accepting state.
    FiniteWord,
    /// Infinite words, accepted when the run visits accepting states
    /// infinitely often. Used for weak automata.
    WeakBuchi,
}

/// Ultimately periodic infinite word `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    pub stem: Word,
    pub cycle: Word,
}

impl Lasso {
    pub fn new(stem: Word, cycle: Word) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Self { stem, cycle }
    }

    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter(&self, i: usize) -> Symbol {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    kind: Kind,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Symbol, StateId)>>,
}

impl Automaton {
    pub fn new(alphabet: Alphabet, kind: Kind) -> Self {
        Self {
            alphabet,
            kind,
            initial: Vec::new(),
            accepting: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Automaton accepting every word (one accepting initial state with all self-loops).
    pub fn universal(alphabet: Alphabet, kind: Kind) -> Self {
        let mut a = Self::new(alphabet, kind);
        let q = a.add_state(true);
        a.add_initial(q);
        for s in a.alphabet.symbols().collect::<Vec<_>>() {
            a.add_transition(q, s, q);
        }
        a
    }

    /// Automaton with no states (empty language).
    pub fn empty(alphabet: Alphabet, kind: Kind) -> Self {
        Self::new(alphabet, kind)
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn add_states(&mut self, n: usize) -> std::ops::Range<StateId> {
        let start = self.num_states();
        for _ in 0..n {
            self.add_state(false);
        }
        start..start + n
    }

    pub fn add_initial(&mut self, q: StateId) {
        assert!(q < self.num_states());
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_accepting(&mut self, q: StateId, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn add_transition(&mut self, from: StateId, symbol: Symbol, to: StateId) {
        assert!(from < self.num_states() && to < self.num_states());
        assert!((symbol as usize) < self.alphabet.size());
        let list = &mut self.edges[from];
        if let Err(pos) = list.binary_search(&(symbol, to)) {
            list.insert(pos, (symbol, to));
        }
    }

    pub fn remove_transition(&mut self, from: StateId, symbol: Symbol, to: StateId) -> bool {
        let list = &mut self.edges[from];
        match list.binary_search(&(symbol, to)) {
            Ok(pos) => {
                list.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(move |&q| self.accepting[q])
    }

    pub fn transitions(&self, q: StateId) -> &[(Symbol, StateId)] {
        &self.edges[q]
    }

    /// All transitions as `(origin, symbol, destination)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(q, list)| list.iter().map(move |&(s, r)| (q, s, r)))
    }

    pub fn successors(&self, q: StateId, symbol: Symbol) -> impl Iterator<Item = StateId> + '_ {
        let list = &self.edges[q];
        let start = list.partition_point(|&(s, _)| s < symbol);
        list[start..]
            .iter()
            .take_while(move |&&(s, _)| s == symbol)
            .map(|&(_, r)| r)
    }

    /// The unique (or first) successor on `symbol`.
    pub fn successor(&self, q: StateId, symbol: Symbol) -> Option<StateId> {
        self.successors(q, symbol).next()
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self
                .edges
                .iter()
                .all(|list| list.windows(2).all(|w| w[0].0 != w[1].0))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.alphabet.size();
        self.edges.iter().all(|list| {
            let mut seen = 0usize;
            let mut last = None;
            for &(s, _) in list {
                if last != Some(s) {
                    seen += 1;
                    last = Some(s);
                }
            }
            seen == n
        })
    }

    pub fn check_same_alphabet(&self, other: &Automaton) -> Result<(), AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        if self.kind != other.kind {
            return Err(AutomataError::KindMismatch);
        }
        Ok(())
    }

    /// Finite-word acceptance (nondeterministic runs allowed).
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut current = vec![false; self.num_states()];
        for &q in &self.initial {
            current[q] = true;
        }
        for &sym in word {
            let mut next = vec![false; self.num_states()];
            let mut any = false;
            for (q, on) in current.iter().enumerate() {
                if *on {
                    for r in self.successors(q, sym) {
                        next[r] = true;
                        any = true;
                    }
                }
            }
            if !any {
                return false;
            }
            current = next;
        }
        current
            .iter()
            .enumerate()
            .any(|(q, &on)| on && self.accepting[q])
    }

    /// Büchi acceptance of an ultimately periodic word (nondeterministic runs allowed).
    pub fn accepts_lasso(&self, lasso: &Lasso) -> bool {
        let period = lasso.len();
        let stem = lasso.stem.len();
        let node = |q: StateId, p: usize| q * period + p;
        let n = self.num_states() * period;
        let next_pos = |p: usize| if p + 1 < period { p + 1 } else { stem };
        let mut seen = vec![false; n];
        let mut queue: VecDeque<(StateId, usize)> = VecDeque::new();
        for &q in &self.initial {
            if !seen[node(q, 0)] {
                seen[node(q, 0)] = true;
                queue.push_back((q, 0));
            }
        }
        while let Some((q, p)) = queue.pop_front() {
            let sym = lasso.letter(p);
            let np = next_pos(p);
            for r in self.successors(q, sym) {
                if !seen[node(r, np)] {
                    seen[node(r, np)] = true;
                    queue.push_back((r, np));
                }
            }
        }
        let sccs = tarjan(n, |v| {
            let (q, p) = (v / period, v % period);
            if !seen[v] {
                return Vec::new();
            }
            let sym = lasso.letter(p);
            let np = next_pos(p);
            self.successors(q, sym).map(|r| node(r, np)).collect::<Vec<_>>()
        });
        (0..n).any(|v| {
            seen[v] && self.accepting[v / period] && sccs.nontrivial[sccs.component[v]]
        })
    }

    /// States reachable from an initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = Vec::new();
        for &q in &self.initial {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &(_, r) in &self.edges[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    fn predecessors(&self) -> Vec<Vec<StateId>> {
        let mut preds = vec![Vec::new(); self.num_states()];
        for (q, _, r) in self.edges() {
            preds[r].push(q);
        }
        preds
    }

    /// States from which some word is accepted: an accepting state for
    /// finite words, an accepting cycle for Büchi acceptance.
    pub fn productive(&self) -> Vec<bool> {
        let targets: Vec<StateId> = match self.kind {
            Kind::FiniteWord => self.accepting_states().collect(),
            Kind::WeakBuchi => {
                let sccs = self.sccs();
                self.accepting_states()
                    .filter(|&q| sccs.nontrivial[sccs.component[q]])
                    .collect()
            }
        };
        let preds = self.predecessors();
        let mut seen = vec![false; self.num_states()];
        let mut stack = Vec::new();
        for q in targets {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    pub fn sccs(&self) -> Sccs {
        tarjan(self.num_states(), |q| {
            let mut v: Vec<StateId> = self.edges[q].iter().map(|&(_, r)| r).collect();
            v.dedup();
            v
        })
    }

    /// Keeps the states flagged in `keep`, renumbered in increasing order.
    /// Returns the restricted automaton and the old-to-new map.
    pub fn restrict(&self, keep: &[bool]) -> (Automaton, Vec<Option<StateId>>) {
        let mut map = vec![None; self.num_states()];
        let mut out = Automaton::new(self.alphabet.clone(), self.kind);
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = Some(out.add_state(self.accepting[q]));
            }
        }
        for &q in &self.initial {
            if let Some(nq) = map[q] {
                out.initial.push(nq);
            }
        }
        for q in 0..self.num_states() {
            if let Some(nq) = map[q] {
                out.edges[nq] = self.edges[q]
                    .iter()
                    .filter_map(|&(s, r)| map[r].map(|nr| (s, nr)))
                    .collect();
            }
        }
        (out, map)
    }

    /// Removes unreachable states and states with an empty language.
    pub fn trim(&self) -> Automaton {
        self.trim_with_map().0
    }

    pub fn trim_with_map(&self) -> (Automaton, Vec<Option<StateId>>) {
        let reach = self.reachable();
        let prod = self.productive();
        let keep: Vec<bool> = reach.iter().zip(&prod).map(|(a, b)| *a && *b).collect();
        self.restrict(&keep)
    }

    /// Mirror image for finite words: transitions reversed, initial and
    /// accepting sets swapped.
    pub fn reverse(&self) -> Automaton {
        let mut out = Automaton::new(self.alphabet.clone(), self.kind);
        for q in 0..self.num_states() {
            out.add_state(self.initial.binary_search(&q).is_ok());
        }
        for q in self.accepting_states() {
            out.initial.push(q);
        }
        for (q, s, r) in self.edges() {
            out.edges[r].push((s, q));
        }
        for list in &mut out.edges {
            list.sort_unstable();
            list.dedup();
        }
        out
    }

    /// Disjoint union (states of `other` are shifted by `self.num_states()`).
    pub fn disjoint_union(&self, other: &Automaton) -> Result<Automaton, AutomataError> {
        self.check_same_alphabet(other)?;
        let mut out = self.clone();
        let shift = self.num_states();
        out.accepting.extend_from_slice(&other.accepting);
        out.edges.extend(
            other
                .edges
                .iter()
                .map(|list| list.iter().map(|&(s, r)| (s, r + shift)).collect()),
        );
        out.initial.extend(other.initial.iter().map(|q| q + shift));
        out.initial.sort_unstable();
        Ok(out)
    }

    /// Rewrites every symbol through `f` into `alphabet`.
    pub fn relabel<F>(&self, alphabet: Alphabet, mut f: F) -> Automaton
    where
        F: FnMut(Symbol) -> Symbol,
    {
        let mut out = Automaton::new(alphabet, self.kind);
        out.accepting = self.accepting.clone();
        out.initial = self.initial.clone();
        out.edges = self
            .edges
            .iter()
            .map(|list| {
                let mut l: Vec<(Symbol, StateId)> = list.iter().map(|&(s, r)| (f(s), r)).collect();
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        out
    }

    /// Adds a nonaccepting sink so that every state has a successor on every symbol.
    pub fn complete(&self) -> Automaton {
        if self.is_complete() && !self.initial.is_empty() {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.add_state(false);
        if out.initial.is_empty() {
            out.initial.push(sink);
        }
        let symbols: Vec<Symbol> = self.alphabet.symbols().collect();
        for q in 0..out.num_states() {
            let mut missing = Vec::new();
            for &s in &symbols {
                if out.successor(q, s).is_none() {
                    missing.push(s);
                }
            }
            for s in missing {
                out.add_transition(q, s, sink);
            }
        }
        out
    }

    /// Replaces the initial state set.
    pub fn set_initial(&mut self, initial: &[StateId]) {
        let mut v = initial.to_vec();
        v.sort_unstable();
        v.dedup();
        assert!(v.iter().all(|&q| q < self.num_states()));
        self.initial = v;
    }

    /// Renumbers states with `order[new] = old`; states absent from `order` are dropped.
    pub fn renumber(&self, order: &[StateId]) -> Automaton {
        let mut map = vec![None; self.num_states()];
        for (new, &old) in order.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut out = Automaton::new(self.alphabet.clone(), self.kind);
        for &old in order {
            out.add_state(self.accepting[old]);
        }
        out.initial = self.initial.iter().filter_map(|&q| map[q]).collect();
        out.initial.sort_unstable();
        for (new, &old) in order.iter().enumerate() {
            let mut l: Vec<(Symbol, StateId)> = self.edges[old]
                .iter()
                .filter_map(|&(s, r)| map[r].map(|nr| (s, nr)))
                .collect();
            l.sort_unstable();
            out.edges[new] = l;
        }
        out
    }
}

impl std::fmt::Debug for Automaton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Automaton({:?}, {} states, initial {:?})",
            self.kind,
            self.num_states(),
            self.initial
        )?;
        for q in 0..self.num_states() {
            write!(f, "  {}{}:", q, if self.accepting[q] { "*" } else { "" })?;
            for &(s, r) in &self.edges[q] {
                write!(f, " {}->{}", self.alphabet.label(s), r)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
