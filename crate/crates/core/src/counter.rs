//! Counter-word automata: transitions carry vectors of natural increments.
//!
//! Counters never guard transitions; an accepting run on `w` whose increments
//! sum to `v` puts `(w, v)` in the counter language. Counter indices are
//! 0-based throughout this module.

use std::collections::{BTreeSet, HashMap, VecDeque};

use smallvec::SmallVec;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{Automaton, Kind, StateId};
use crate::error::AutomataError;
use crate::ops::normal_form;
use crate::report::{InconclusiveReason, Verdict};
use crate::transducer::Transducer;

pub type Vector = SmallVec<[u32; 4]>;

#[derive(Clone, PartialEq, Eq)]
pub struct CounterAutomaton {
    base: Alphabet,
    kind: Kind,
    dimension: usize,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Symbol, Vector, StateId)>>,
}

impl CounterAutomaton {
    pub fn new(base: Alphabet, kind: Kind, dimension: usize) -> Self {
        assert!(dimension >= 1, "counter automata have at least one counter");
        Self {
            base,
            kind,
            dimension,
            initial: Vec::new(),
            accepting: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn add_initial(&mut self, q: StateId) {
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn add_transition(&mut self, from: StateId, symbol: Symbol, increments: &[u32], to: StateId) {
        assert_eq!(increments.len(), self.dimension);
        assert!(from < self.num_states() && to < self.num_states());
        let e = (symbol, Vector::from_slice(increments), to);
        let list = &mut self.edges[from];
        if let Err(pos) = list.binary_search(&e) {
            list.insert(pos, e);
        }
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
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

    pub fn transitions(&self, q: StateId) -> &[(Symbol, Vector, StateId)] {
        &self.edges[q]
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, Symbol, &Vector, StateId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(q, l)| l.iter().map(move |(s, v, r)| (q, *s, v, *r)))
    }

    /// The underlying automaton with increments dropped.
    pub fn counterless(&self) -> Automaton {
        let mut a = Automaton::new(self.base.clone(), self.kind);
        for q in 0..self.num_states() {
            a.add_state(self.accepting[q]);
        }
        for &q in &self.initial {
            a.add_initial(q);
        }
        for (q, s, _, r) in self.edges() {
            a.add_transition(q, s, r);
        }
        a
    }

    /// Smallest `d` bounding every increment.
    pub fn max_increment(&self) -> u32 {
        self.edges()
            .flat_map(|(_, _, v, _)| v.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Removes unreachable states and states with an empty language.
    pub fn trim(&self) -> CounterAutomaton {
        let plain = self.counterless();
        let reach = plain.reachable();
        let prod = plain.productive();
        let mut map = vec![None; self.num_states()];
        let mut out = CounterAutomaton::new(self.base.clone(), self.kind, self.dimension);
        for q in 0..self.num_states() {
            if reach[q] && prod[q] {
                map[q] = Some(out.add_state(self.accepting[q]));
            }
        }
        for &q in &self.initial {
            if let Some(n) = map[q] {
                out.add_initial(n);
            }
        }
        for (q, s, v, r) in self.edges() {
            if let (Some(a), Some(b)) = (map[q], map[r]) {
                out.edges[a].push((s, v.clone(), b));
            }
        }
        for l in &mut out.edges {
            l.sort();
            l.dedup();
        }
        out
    }

    /// Weak automata only: every transition inside an accepting component
    /// carries the zero vector. Always true for finite words.
    pub fn is_run_bounded(&self) -> bool {
        if self.kind == Kind::FiniteWord {
            return true;
        }
        let sccs = self.counterless().sccs();
        self.edges().all(|(q, _, v, r)| {
            !(self.accepting[q] && sccs.component[q] == sccs.component[r]) || v.iter().all(|&c| c == 0)
        })
    }

    /// Extended automaton over `Σ × [0, d]^n`, `d` at least the maximal increment.
    pub fn extended(&self, d: u32) -> Automaton {
        assert!(d >= self.max_increment());
        let alpha = extended_alphabet(&self.base, self.dimension, d);
        let stride = (d as usize + 1).pow(self.dimension as u32) as Symbol;
        let mut a = Automaton::new(alpha, self.kind);
        for q in 0..self.num_states() {
            a.add_state(self.accepting[q]);
        }
        for &q in &self.initial {
            a.add_initial(q);
        }
        for (q, s, v, r) in self.edges() {
            let mut code = 0 as Symbol;
            for &c in v {
                code = code * (d + 1) + c;
            }
            a.add_transition(q, s * stride + code, r);
        }
        a
    }

    /// Inverse of [`CounterAutomaton::extended`]: the last `n` tracks are read as increments.
    pub fn from_extended(a: &Automaton, n: usize) -> Result<CounterAutomaton, AutomataError> {
        let alpha = a.alphabet();
        if n == 0 || alpha.arity() <= n {
            return Err(AutomataError::BadTrackIndex {
                track: n,
                arity: alpha.arity(),
            });
        }
        let k = alpha.arity() - n;
        let base = alpha.prefix_tracks(k);
        let mut values: Vec<Vec<u32>> = Vec::new();
        for t in k..alpha.arity() {
            let parsed = alpha
                .track(t)
                .iter()
                .map(|l| l.parse::<u32>().map_err(|_| AutomataError::MalformedExtendedSymbol(l.clone())))
                .collect::<Result<Vec<u32>, _>>()?;
            values.push(parsed);
        }
        let mut out = CounterAutomaton::new(base.clone(), a.kind(), n);
        for q in 0..a.num_states() {
            out.add_state(a.is_accepting(q));
        }
        for &q in a.initial() {
            out.add_initial(q);
        }
        for (q, s, r) in a.edges() {
            let comps = alpha.components(s);
            let sym = base.compose(&comps[..k]);
            let v: Vec<u32> = (0..n).map(|i| values[i][comps[k + i] as usize]).collect();
            out.add_transition(q, sym, &v, r);
        }
        Ok(out)
    }

    /// Final valuations of the accepting runs on a finite word.
    pub fn valuations(&self, word: &[Symbol]) -> BTreeSet<Vector> {
        let mut current: BTreeSet<(StateId, Vector)> = self
            .initial
            .iter()
            .map(|&q| (q, Vector::from_elem(0, self.dimension)))
            .collect();
        for &s in word {
            let mut next = BTreeSet::new();
            for (q, v) in &current {
                for (t, inc, r) in &self.edges[*q] {
                    if *t == s {
                        let nv: Vector = v.iter().zip(inc).map(|(a, b)| a + b).collect();
                        next.insert((*r, nv));
                    }
                }
            }
            current = next;
        }
        current
            .into_iter()
            .filter(|(q, _)| self.accepting[*q])
            .map(|(_, v)| v)
            .collect()
    }

    /// Equivalent counter automaton read back from the minimal extended
    /// automaton. Both have the same extended, hence counter, language.
    pub fn normalize(&self) -> Result<CounterAutomaton, AutomataError> {
        let d = self.max_increment();
        let min = normal_form(&self.extended(d))?;
        if min.num_states() == 0 {
            return Ok(CounterAutomaton::new(self.base.clone(), self.kind, self.dimension));
        }
        CounterAutomaton::from_extended(&min, self.dimension)
    }

    /// Automaton accepting the words `w` such that `(w, target)` is in the
    /// counter language. States pair a state with a valuation bounded by `target`.
    pub fn with_valuation(&self, target: &[u32]) -> Automaton {
        assert_eq!(target.len(), self.dimension);
        let mut a = Automaton::new(self.base.clone(), self.kind);
        let mut ids: HashMap<(StateId, Vector), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let zero = Vector::from_elem(0, self.dimension);
        for &q in &self.initial {
            let key = (q, zero.clone());
            let id = a.add_state(self.accepting[q] && zero.as_slice() == target);
            a.add_initial(id);
            ids.insert(key.clone(), id);
            queue.push_back(key);
        }
        while let Some((q, v)) = queue.pop_front() {
            let from = ids[&(q, v.clone())];
            for (s, inc, r) in &self.edges[q] {
                let nv: Vector = v.iter().zip(inc).map(|(a, b)| a + b).collect();
                if nv.iter().zip(target).any(|(x, t)| x > t) {
                    continue;
                }
                let key = (*r, nv);
                let to = match ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = a.add_state(self.accepting[*r] && key.1.as_slice() == target);
                        ids.insert(key.clone(), id);
                        queue.push_back(key);
                        id
                    }
                };
                a.add_transition(from, *s, to);
            }
        }
        a
    }
}

impl std::fmt::Debug for CounterAutomaton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "CounterAutomaton({:?}, dim {}, {} states, initial {:?})",
            self.kind,
            self.dimension,
            self.num_states(),
            self.initial
        )?;
        for q in 0..self.num_states() {
            write!(f, "  {}{}:", q, if self.accepting[q] { "*" } else { "" })?;
            for (s, v, r) in &self.edges[q] {
                write!(f, " {}{:?}->{}", self.base.label(*s), v.as_slice(), r)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `base × [0, d]^n` with counter tracks labeled by numbers.
pub fn extended_alphabet(base: &Alphabet, n: usize, d: u32) -> Alphabet {
    let labels: Vec<String> = (0..=d).map(|i| i.to_string()).collect();
    let counters = Alphabet::with_tracks(vec![labels; n]).expect("numeric labels");
    base.concat(&counters)
}

/// Every transition of `a` with the one-counter increment 0.
pub fn counter_zero(a: &Automaton) -> CounterAutomaton {
    let mut out = CounterAutomaton::new(a.alphabet().clone(), a.kind(), 1);
    for q in 0..a.num_states() {
        out.add_state(a.is_accepting(q));
    }
    for &q in a.initial() {
        out.add_initial(q);
    }
    for (q, s, r) in a.edges() {
        out.add_transition(q, s, &[0], r);
    }
    out
}

/// Synchronized product over reachable state pairs. `f` maps a pair of
/// symbols to the output symbol (or drops the pair); increments are concatenated
/// when `concat` holds and taken from the right factor otherwise.
fn product<F>(
    a: &CounterAutomaton,
    b: &CounterAutomaton,
    base: Alphabet,
    dimension: usize,
    concat: bool,
    mut f: F,
) -> CounterAutomaton
where
    F: FnMut(Symbol, Symbol) -> Option<Symbol>,
{
    let mut out = CounterAutomaton::new(base, a.kind, dimension);
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in &a.initial {
        for &q in &b.initial {
            let id = out.add_state(a.accepting[p] && b.accepting[q]);
            out.add_initial(id);
            index.insert((p, q), id);
            queue.push_back((p, q));
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        for (sa, va, p2) in &a.edges[p] {
            for (sb, vb, q2) in &b.edges[q] {
                let Some(s) = f(*sa, *sb) else { continue };
                let v: Vector = if concat {
                    va.iter().chain(vb.iter()).copied().collect()
                } else {
                    vb.clone()
                };
                let key = (*p2, *q2);
                let to = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = out.add_state(a.accepting[*p2] && b.accepting[*q2]);
                        index.insert(key, t);
                        queue.push_back(key);
                        t
                    }
                };
                out.add_transition(from, s, &v, to);
            }
        }
    }
    out.trim()
}

/// Counter-intersection: words accepted by both, valuations concatenated.
pub fn counter_intersection(a1: &CounterAutomaton, a2: &CounterAutomaton) -> Result<CounterAutomaton, AutomataError> {
    if a1.base != a2.base {
        return Err(AutomataError::AlphabetMismatch);
    }
    if a1.kind != a2.kind {
        return Err(AutomataError::KindMismatch);
    }
    Ok(product(a1, a2, a1.base.clone(), a1.dimension + a2.dimension, true, |x, y| {
        (x == y).then_some(x)
    }))
}

/// Counter-composition of `t1` by `t2`: pairs `(u, w)` through a middle word
/// `v` with `(u, v)` in `t1` and `(v, w)` in `t2`, valuations `v1 × v2`.
pub fn counter_composition(t1: &CounterAutomaton, t2: &CounterAutomaton) -> Result<CounterAutomaton, AutomataError> {
    if t1.base != t2.base || t1.base.arity() != 2 || !t1.base.is_uniform() {
        return Err(AutomataError::AlphabetMismatch);
    }
    if t1.kind != t2.kind {
        return Err(AutomataError::KindMismatch);
    }
    let n = t1.base.track(0).len() as Symbol;
    Ok(product(t1, t2, t1.base.clone(), t1.dimension + t2.dimension, true, |s1, s2| {
        let (x, y) = (s1 / n, s1 % n);
        let (y2, z) = (s2 / n, s2 % n);
        (y == y2).then_some(x * n + z)
    }))
}

/// Counter-image of `ac` by a plain transducer: valuations are kept.
pub fn counter_image(t: &Transducer, ac: &CounterAutomaton) -> Result<CounterAutomaton, AutomataError> {
    let base = t.base_alphabet();
    if ac.base != base {
        return Err(AutomataError::AlphabetMismatch);
    }
    if ac.kind != t.kind() {
        return Err(AutomataError::KindMismatch);
    }
    // view the transducer as a counter automaton with no increments of its own
    let tz = counter_zero(t.automaton());
    let n = base.size() as Symbol;
    let out = product(&tz, ac, base, ac.dimension, false, |s, x| (s / n == x).then_some(s % n));
    Ok(out)
}

/// Drops counter `i` (existential projection of the counter language).
pub fn counter_project(ac: &CounterAutomaton, i: usize) -> Result<CounterAutomaton, AutomataError> {
    if i >= ac.dimension || ac.dimension < 2 {
        return Err(AutomataError::BadCounterIndex {
            index: i,
            dimension: ac.dimension,
        });
    }
    let mut out = CounterAutomaton::new(ac.base.clone(), ac.kind, ac.dimension - 1);
    out.initial = ac.initial.clone();
    out.accepting = ac.accepting.clone();
    out.edges = ac
        .edges
        .iter()
        .map(|l| {
            let mut nl: Vec<(Symbol, Vector, StateId)> = l
                .iter()
                .map(|(s, v, r)| {
                    let mut nv = v.clone();
                    nv.remove(i);
                    (*s, nv, *r)
                })
                .collect();
            nl.sort();
            nl.dedup();
            nl
        })
        .collect();
    Ok(out)
}

/// Union of the extended languages (disjoint union, kept nondeterministic).
pub fn union_extended(a1: &CounterAutomaton, a2: &CounterAutomaton) -> Result<CounterAutomaton, AutomataError> {
    if a1.dimension != a2.dimension {
        return Err(AutomataError::DimensionMismatch(a1.dimension, a2.dimension));
    }
    if a1.base != a2.base {
        return Err(AutomataError::AlphabetMismatch);
    }
    if a1.kind != a2.kind {
        return Err(AutomataError::KindMismatch);
    }
    let mut out = a1.clone();
    let shift = a1.num_states();
    out.accepting.extend_from_slice(&a2.accepting);
    out.edges.extend(
        a2.edges
            .iter()
            .map(|l| l.iter().map(|(s, v, r)| (*s, v.clone(), r + shift)).collect()),
    );
    out.initial.extend(a2.initial.iter().map(|q| q + shift));
    out.initial.sort_unstable();
    Ok(out)
}

/// Sufficient test for equal counter languages: equal extended languages.
/// A difference is only ever inconclusive.
pub fn extended_equal(a1: &CounterAutomaton, a2: &CounterAutomaton) -> Result<Verdict, AutomataError> {
    if a1.dimension != a2.dimension {
        return Err(AutomataError::DimensionMismatch(a1.dimension, a2.dimension));
    }
    if a1.base != a2.base {
        return Err(AutomataError::AlphabetMismatch);
    }
    let d = a1.max_increment().max(a2.max_increment());
    let e1 = normal_form(&a1.extended(d));
    let e2 = normal_form(&a2.extended(d));
    Ok(match (e1, e2) {
        (Ok(x), Ok(y)) if x == y => Verdict::CriterionHolds,
        (Ok(_), Ok(_)) => Verdict::Inconclusive(InconclusiveReason::ExtendedLanguageGap),
        (Err(AutomataError::NotInherentlyWeak), _) | (_, Err(AutomataError::NotInherentlyWeak)) => {
            Verdict::Inconclusive(InconclusiveReason::NotInherentlyWeak)
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    })
}

/// State of the counter machine on `(c_i, c_j, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MachineState {
    Initial,
    /// `v(c_i) = v(c_j) + l`, `l ∈ [-M+1, 2M-1]`.
    Diff(i64),
}

impl MachineState {
    pub fn is_accepting(self, m: i64) -> bool {
        match self {
            MachineState::Initial => true,
            MachineState::Diff(l) => (1..2 * m).contains(&l),
        }
    }

    /// Next state after increments `ci` on `c_i` and `cj` on `c_j`.
    pub fn step(self, ci: u32, cj: u32, m: i64) -> Option<MachineState> {
        let diff = ci as i64 - cj as i64;
        let from_low = |l: i64| {
            let n = l + diff;
            if n > m - 1 {
                Some(MachineState::Diff(m))
            } else if n > -m {
                Some(MachineState::Diff(n))
            } else {
                None
            }
        };
        match self {
            // only all-zero increments keep the machine initial; equal
            // nonzero increments move to the nonaccepting difference 0
            MachineState::Initial if ci == 0 && cj == 0 => Some(MachineState::Initial),
            MachineState::Initial => from_low(0),
            MachineState::Diff(l) if l < m => from_low(l),
            MachineState::Diff(l) => {
                let n = l - diff;
                if n <= m {
                    Some(MachineState::Diff(m))
                } else if n < 2 * m {
                    Some(MachineState::Diff(n))
                } else {
                    None
                }
            }
        }
    }

    /// All `3M` states, initial first.
    pub fn all(m: i64) -> Vec<MachineState> {
        let mut v = vec![MachineState::Initial];
        v.extend((-m + 1..2 * m).map(MachineState::Diff));
        v
    }
}

/// The counter machine on `(c_i, c_j, M)` as an explicit counter automaton
/// over `base` with `n` counters bounded by `d`: it accepts every word, with
/// every valuation whose runs keep `c_i` and `c_j` synchronized and end with
/// `c_i > c_j` (or all increments on both counters zero).
pub fn universal_synchronized(
    base: &Alphabet,
    kind: Kind,
    n: usize,
    d: u32,
    i: usize,
    j: usize,
    m: i64,
) -> CounterAutomaton {
    assert!(m >= 1 && i != j && i < n && j < n);
    let states = MachineState::all(m);
    let index: HashMap<MachineState, StateId> = states.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let mut out = CounterAutomaton::new(base.clone(), kind, n);
    for s in &states {
        out.add_state(s.is_accepting(m));
    }
    out.add_initial(0);
    let vectors = all_vectors(n, d);
    for s in &states {
        for sym in base.symbols() {
            for v in &vectors {
                if let Some(t) = s.step(v[i], v[j], m) {
                    out.add_transition(index[s], sym, v, index[&t]);
                }
            }
        }
    }
    out
}

fn all_vectors(n: usize, d: u32) -> Vec<Vector> {
    let mut out: Vec<Vector> = vec![Vector::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=d).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Keeps the runs of `ac` on which counter `i` ends above every counter in
/// `others`, under the synchronization bound `m`. This is the extended
/// intersection with one counter machine per compared counter, built on the fly.
pub fn restrict_greater(ac: &CounterAutomaton, i: usize, others: &[usize], m: i64) -> Result<CounterAutomaton, AutomataError> {
    for &j in others.iter().chain(std::iter::once(&i)) {
        if j >= ac.dimension {
            return Err(AutomataError::BadCounterIndex {
                index: j,
                dimension: ac.dimension,
            });
        }
    }
    assert!(m >= 1);
    type Key = (StateId, SmallVec<[MachineState; 2]>);
    let accepting = |k: &Key| ac.accepting[k.0] && k.1.iter().all(|s| s.is_accepting(m));
    let mut out = CounterAutomaton::new(ac.base.clone(), ac.kind, ac.dimension);
    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in &ac.initial {
        let key: Key = (p, others.iter().map(|_| MachineState::Initial).collect());
        let id = out.add_state(accepting(&key));
        out.add_initial(id);
        index.insert(key.clone(), id);
        queue.push_back(key);
    }
    while let Some(key) = queue.pop_front() {
        let from = index[&key];
        'edges: for (s, v, r) in &ac.edges[key.0] {
            let mut next: SmallVec<[MachineState; 2]> = SmallVec::new();
            for (k, &j) in others.iter().enumerate() {
                match key.1[k].step(v[i], v[j], m) {
                    Some(t) => next.push(t),
                    None => continue 'edges,
                }
            }
            let nk: Key = (*r, next);
            let to = match index.get(&nk) {
                Some(&t) => t,
                None => {
                    let t = out.add_state(accepting(&nk));
                    index.insert(nk.clone(), t);
                    queue.push_back(nk);
                    t
                }
            };
            out.add_transition(from, *s, v, to);
        }
    }
    Ok(out.trim())
}

/// `π_1(restrict(tc ∩ (tc ∘ tc), c1 > c2, c3))` for a one-counter transducer,
/// built on the fly so that runs losing synchronization are never expanded.
/// Equal in extended language to the composition of the separate steps.
/// Fails with `StateLimit` once more than `limit` states are built.
pub fn synchronized_composition(tc: &CounterAutomaton, m: i64, limit: usize) -> Result<CounterAutomaton, AutomataError> {
    if tc.base.arity() != 2 || !tc.base.is_uniform() {
        return Err(AutomataError::AlphabetMismatch);
    }
    if tc.dimension != 1 {
        return Err(AutomataError::DimensionMismatch(tc.dimension, 1));
    }
    assert!(m >= 1);
    let n = tc.base.track(0).len() as Symbol;
    // (a,c) edges of every state, indexed by symbol
    let by_symbol: Vec<HashMap<Symbol, Vec<(u32, StateId)>>> = tc
        .edges
        .iter()
        .map(|l| {
            let mut h: HashMap<Symbol, Vec<(u32, StateId)>> = HashMap::new();
            for (s, v, r) in l {
                h.entry(*s).or_default().push((v[0], *r));
            }
            h
        })
        .collect();
    type Key = (StateId, StateId, StateId, MachineState, MachineState);
    let accepting = |k: &Key| {
        tc.accepting[k.0] && tc.accepting[k.1] && tc.accepting[k.2] && k.3.is_accepting(m) && k.4.is_accepting(m)
    };
    let mut out = CounterAutomaton::new(tc.base.clone(), tc.kind, 1);
    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in &tc.initial {
        for &q in &tc.initial {
            for &r in &tc.initial {
                let key = (p, q, r, MachineState::Initial, MachineState::Initial);
                if index.contains_key(&key) {
                    continue;
                }
                let id = out.add_state(accepting(&key));
                out.add_initial(id);
                index.insert(key, id);
                queue.push_back(key);
            }
        }
    }
    while let Some(key) = queue.pop_front() {
        let from = index[&key];
        let (q1, q2, q3, s12, s13) = key;
        for (sy, vy, r2) in &tc.edges[q2] {
            let (a, b) = (sy / n, sy % n);
            for (sz, vz, r3) in &tc.edges[q3] {
                if sz / n != b {
                    continue;
                }
                let ac = a * n + sz % n;
                let Some(firsts) = by_symbol[q1].get(&ac) else { continue };
                for &(x, r1) in firsts {
                    let (Some(t12), Some(t13)) = (s12.step(x, vy[0], m), s13.step(x, vz[0], m)) else {
                        continue;
                    };
                    let nk = (r1, *r2, *r3, t12, t13);
                    let to = match index.get(&nk) {
                        Some(&t) => t,
                        None if index.len() >= limit => return Err(AutomataError::StateLimit(limit)),
                        None => {
                            let t = out.add_state(accepting(&nk));
                            index.insert(nk, t);
                            queue.push_back(nk);
                            t
                        }
                    };
                    out.add_transition(from, ac, &[x], to);
                }
            }
        }
    }
    Ok(out.trim())
}

/// `π_1(restrict(ac ∩ t(ac), c1 > c2))`, built on the fly, under the same limit.
pub fn synchronized_image(
    t: &Transducer,
    ac: &CounterAutomaton,
    m: i64,
    limit: usize,
) -> Result<CounterAutomaton, AutomataError> {
    let base = t.base_alphabet();
    if ac.base != base {
        return Err(AutomataError::AlphabetMismatch);
    }
    if ac.kind != t.kind() {
        return Err(AutomataError::KindMismatch);
    }
    if ac.dimension != 1 {
        return Err(AutomataError::DimensionMismatch(ac.dimension, 1));
    }
    assert!(m >= 1);
    let n = base.size() as Symbol;
    let ta = t.automaton();
    let by_symbol: Vec<HashMap<Symbol, Vec<(u32, StateId)>>> = ac
        .edges
        .iter()
        .map(|l| {
            let mut h: HashMap<Symbol, Vec<(u32, StateId)>> = HashMap::new();
            for (s, v, r) in l {
                h.entry(*s).or_default().push((v[0], *r));
            }
            h
        })
        .collect();
    // (state of ac read on the output, state of t, state of ac read on the input)
    type Key = (StateId, StateId, StateId, MachineState);
    let accepting =
        |k: &Key| ac.accepting[k.0] && ta.is_accepting(k.1) && ac.accepting[k.2] && k.3.is_accepting(m);
    let mut out = CounterAutomaton::new(base, ac.kind, 1);
    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in &ac.initial {
        for &q in ta.initial() {
            for &r in &ac.initial {
                let key = (p, q, r, MachineState::Initial);
                if index.contains_key(&key) {
                    continue;
                }
                let id = out.add_state(accepting(&key));
                out.add_initial(id);
                index.insert(key, id);
                queue.push_back(key);
            }
        }
    }
    while let Some(key) = queue.pop_front() {
        let from = index[&key];
        let (q1, qt, q2, s12) = key;
        for &(st, rt) in ta.transitions(qt) {
            let (u, w) = (st / n, st % n);
            let Some(firsts) = by_symbol[q1].get(&w) else { continue };
            for (su, vu, r2) in &ac.edges[q2] {
                if *su != u {
                    continue;
                }
                for &(x, r1) in firsts {
                    let Some(t12) = s12.step(x, vu[0], m) else { continue };
                    let nk = (r1, rt, *r2, t12);
                    let to = match index.get(&nk) {
                        Some(&t) => t,
                        None if index.len() >= limit => return Err(AutomataError::StateLimit(limit)),
                        None => {
                            let t = out.add_state(accepting(&nk));
                            index.insert(nk, t);
                            queue.push_back(nk);
                            t
                        }
                    };
                    out.add_transition(from, w, &[x], to);
                }
            }
        }
    }
    Ok(out.trim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn extended_round_trip() {
        let mut c = CounterAutomaton::new(ab(), Kind::FiniteWord, 2);
        let q0 = c.add_state(false);
        let q1 = c.add_state(true);
        c.add_initial(q0);
        c.add_transition(q0, 0, &[1, 0], q1);
        c.add_transition(q1, 1, &[0, 2], q1);
        let e = c.extended(2);
        assert_eq!(e.alphabet().size(), 2 * 9);
        let back = CounterAutomaton::from_extended(&e, 2).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.valuations(&[0, 1, 1]), [Vector::from_slice(&[1, 4])].into_iter().collect());
    }

    #[test]
    fn machine_rules() {
        let m = 2;
        let s = MachineState::Initial;
        assert_eq!(s.step(0, 0, m), Some(MachineState::Initial));
        assert_eq!(s.step(1, 1, m), Some(MachineState::Diff(0)));
        assert_eq!(s.step(2, 0, m), Some(MachineState::Diff(2)));
        assert_eq!(s.step(0, 2, m), None);
        assert_eq!(MachineState::Diff(2).step(0, 1, m), Some(MachineState::Diff(3)));
        assert_eq!(MachineState::Diff(3).step(0, 1, m), None);
        assert_eq!(MachineState::Diff(3).step(2, 0, m), Some(MachineState::Diff(2)));
        assert_eq!(MachineState::all(m).len(), 3 * m as usize);
    }
}
