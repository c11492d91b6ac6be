//! Finite-word algorithms: subset construction, canonical minimization,
//! boolean operations, emptiness, products, projection and isomorphism.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{Automaton, Kind, Lasso, StateId, Word};
use crate::error::AutomataError;

/// Partial map from the states of one automaton to the states of another.
pub type StateMap = Vec<Option<StateId>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

/// Subset construction. Only reachable, nonempty subsets are built, so the
/// result is partial. Acceptance is read as finite-word acceptance.
pub fn determinize(a: &Automaton) -> Automaton {
    determinize_with(a, |_| {})
}

/// Subset construction with a hook that may shrink each generated subset
/// (used by the dominance heuristic). The hook must keep the language of the
/// subset unchanged.
pub fn determinize_with<F>(a: &Automaton, mut reduce: F) -> Automaton
where
    F: FnMut(&mut Vec<StateId>),
{
    let mut out = Automaton::new(a.alphabet().clone(), a.kind());
    if a.initial().is_empty() {
        return out;
    }
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut queue: VecDeque<Vec<StateId>> = VecDeque::new();
    let mut start = a.initial().to_vec();
    reduce(&mut start);
    let q0 = out.add_state(start.iter().any(|&q| a.is_accepting(q)));
    out.add_initial(q0);
    index.insert(start.clone(), q0);
    queue.push_back(start);
    let mut buckets: Vec<Vec<StateId>> = vec![Vec::new(); a.alphabet().size()];
    while let Some(set) = queue.pop_front() {
        let from = index[&set];
        for b in &mut buckets {
            b.clear();
        }
        for &q in &set {
            for &(s, r) in a.transitions(q) {
                buckets[s as usize].push(r);
            }
        }
        for (s, bucket) in buckets.iter_mut().enumerate() {
            if bucket.is_empty() {
                continue;
            }
            bucket.sort_unstable();
            bucket.dedup();
            let mut target = bucket.clone();
            reduce(&mut target);
            let to = match index.get(&target) {
                Some(&t) => t,
                None => {
                    let t = out.add_state(target.iter().any(|&q| a.is_accepting(q)));
                    index.insert(target.clone(), t);
                    queue.push_back(target);
                    t
                }
            };
            out.add_transition(from, s as Symbol, to);
        }
    }
    out
}

/// Refinable partition of `0..n` (Valmari and Lehtinen).
struct Partition {
    count: usize,
    elems: Vec<usize>,
    loc: Vec<usize>,
    set: Vec<usize>,
    first: Vec<usize>,
    past: Vec<usize>,
    marked: Vec<usize>,
    touched: Vec<usize>,
}

impl Partition {
    /// Partition whose blocks are the classes of `key`, ordered by first key value.
    fn from_keys(keys: &[usize]) -> Self {
        let n = keys.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&e| (keys[e], e));
        let mut p = Partition {
            count: 0,
            elems: order,
            loc: vec![0; n],
            set: vec![0; n],
            first: vec![0; n + 1],
            past: vec![0; n + 1],
            marked: vec![0; n + 1],
            touched: Vec::new(),
        };
        for i in 0..n {
            let e = p.elems[i];
            p.loc[e] = i;
            if i == 0 || keys[p.elems[i - 1]] != keys[e] {
                if i > 0 {
                    p.past[p.count - 1] = i;
                }
                p.first[p.count] = i;
                p.count += 1;
            }
            p.set[e] = p.count - 1;
        }
        if n > 0 {
            p.past[p.count - 1] = n;
        }
        p
    }

    fn mark(&mut self, e: usize) {
        let s = self.set[e];
        let i = self.loc[e];
        let j = self.first[s] + self.marked[s];
        if i < j {
            return;
        }
        self.elems.swap(i, j);
        self.loc[self.elems[i]] = i;
        self.loc[self.elems[j]] = j;
        if self.marked[s] == 0 {
            self.touched.push(s);
        }
        self.marked[s] += 1;
    }

    fn split(&mut self) {
        while let Some(s) = self.touched.pop() {
            let j = self.first[s] + self.marked[s];
            if j == self.past[s] {
                self.marked[s] = 0;
                continue;
            }
            let z = self.count;
            if self.marked[s] <= self.past[s] - j {
                self.first[z] = self.first[s];
                self.past[z] = j;
                self.first[s] = j;
            } else {
                self.past[z] = self.past[s];
                self.first[z] = j;
                self.past[s] = j;
            }
            for i in self.first[z]..self.past[z] {
                self.set[self.elems[i]] = z;
            }
            self.marked[s] = 0;
            self.marked[z] = 0;
            self.count += 1;
        }
    }
}

/// Coarsest partition of the states of a trimmed deterministic automaton
/// that refines `keys` and is compatible with the (partial) transitions.
/// Returns a block index per state.
pub(crate) fn refine(a: &Automaton, keys: &[usize]) -> Vec<usize> {
    let n = a.num_states();
    if n == 0 {
        return Vec::new();
    }
    let tails: Vec<StateId> = a.edges().map(|(q, _, _)| q).collect();
    let labels: Vec<Symbol> = a.edges().map(|(_, s, _)| s).collect();
    let heads: Vec<StateId> = a.edges().map(|(_, _, r)| r).collect();
    let m = tails.len();
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in 0..m {
        incoming[heads[t]].push(t);
    }
    let mut blocks = Partition::from_keys(keys);
    let label_keys: Vec<usize> = labels.iter().map(|&s| s as usize).collect();
    let mut cords = Partition::from_keys(&label_keys);
    let mut b = 0;
    let mut c = 0;
    while c < cords.count {
        for i in cords.first[c]..cords.past[c] {
            blocks.mark(tails[cords.elems[i]]);
        }
        blocks.split();
        c += 1;
        while b < blocks.count {
            for i in blocks.first[b]..blocks.past[b] {
                for &t in &incoming[blocks.elems[i]] {
                    cords.mark(t);
                }
            }
            cords.split();
            b += 1;
        }
    }
    blocks.set
}

/// Quotient of a deterministic automaton by a transition-compatible partition.
pub(crate) fn quotient(a: &Automaton, block: &[usize], accepting: impl Fn(StateId) -> bool) -> Automaton {
    let count = block.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = Automaton::new(a.alphabet().clone(), a.kind());
    let mut rep = vec![usize::MAX; count];
    for q in 0..a.num_states() {
        if rep[block[q]] == usize::MAX {
            rep[block[q]] = q;
        }
    }
    for b in 0..count {
        out.add_state(accepting(rep[b]));
    }
    for &q in a.initial() {
        out.add_initial(block[q]);
    }
    for (q, s, r) in a.edges() {
        out.add_transition(block[q], s, block[r]);
    }
    out
}

/// Renumbers the reachable part of a deterministic automaton by breadth-first
/// search from the initial state, visiting symbols in alphabet order.
pub fn canonical_numbering(a: &Automaton) -> Automaton {
    let mut order = Vec::with_capacity(a.num_states());
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::new();
    for &q in a.initial() {
        seen[q] = true;
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for &(_, r) in a.transitions(q) {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    a.renumber(&order)
}

/// Canonical minimal partial DFA of a deterministic finite-word automaton.
pub fn minimize(a: &Automaton) -> Result<Automaton, AutomataError> {
    if a.kind() != Kind::FiniteWord {
        return Err(AutomataError::NotFiniteWord);
    }
    if !a.is_deterministic() && !a.initial().is_empty() {
        return Err(AutomataError::NotDeterministic);
    }
    let t = a.trim();
    if t.num_states() == 0 {
        return Ok(Automaton::empty(a.alphabet().clone(), a.kind()));
    }
    let keys: Vec<usize> = (0..t.num_states()).map(|q| t.is_accepting(q) as usize).collect();
    let block = refine(&t, &keys);
    let q = quotient(&t, &block, |r| t.is_accepting(r));
    Ok(canonical_numbering(&q))
}

/// Canonical minimal DFA of any finite-word automaton.
pub fn canonical(a: &Automaton) -> Automaton {
    assert_eq!(a.kind(), Kind::FiniteWord, "canonical() expects finite-word acceptance");
    let d = if a.is_deterministic() { a.clone() } else { determinize(a) };
    minimize(&d).expect("determinized automaton is deterministic")
}

/// Product of two deterministic automata over `Option` states (a missing
/// state is an implicit rejecting sink). Pairs of two sinks are never built.
fn dfa_product(a: &Automaton, b: &Automaton, accept: impl Fn(bool, bool) -> bool, need_left: bool) -> Automaton {
    let mut out = Automaton::new(a.alphabet().clone(), a.kind());
    let start = (a.initial().first().copied(), b.initial().first().copied());
    if start.0.is_none() && (need_left || start.1.is_none()) {
        return out;
    }
    let acc = |p: (Option<StateId>, Option<StateId>)| {
        accept(p.0.is_some_and(|q| a.is_accepting(q)), p.1.is_some_and(|q| b.is_accepting(q)))
    };
    let mut index = HashMap::new();
    let mut queue = VecDeque::new();
    let q0 = out.add_state(acc(start));
    out.add_initial(q0);
    index.insert(start, q0);
    queue.push_back(start);
    let symbols: Vec<Symbol> = a.alphabet().symbols().collect();
    while let Some(pair) = queue.pop_front() {
        let from = index[&pair];
        for &s in &symbols {
            let next = (
                pair.0.and_then(|q| a.successor(q, s)),
                pair.1.and_then(|q| b.successor(q, s)),
            );
            if next.0.is_none() && (need_left || next.1.is_none()) {
                continue;
            }
            let to = *index.entry(next).or_insert_with(|| {
                queue.push_back(next);
                out.add_state(acc(next))
            });
            out.add_transition(from, s, to);
        }
    }
    out
}

/// Union, intersection or difference of two finite-word automata.
pub fn boolean(op: BoolOp, a: &Automaton, b: &Automaton) -> Result<Automaton, AutomataError> {
    a.check_same_alphabet(b)?;
    if a.kind() != Kind::FiniteWord {
        return Err(AutomataError::NotFiniteWord);
    }
    let da = canonical(a);
    let db = canonical(b);
    let p = match op {
        BoolOp::Union => dfa_product(&da, &db, |x, y| x || y, false),
        BoolOp::Intersection => dfa_product(&da, &db, |x, y| x && y, true),
        BoolOp::Difference => dfa_product(&da, &db, |x, y| x && !y, true),
    };
    minimize(&p)
}

/// Complement with respect to Σ*.
pub fn complement(a: &Automaton) -> Automaton {
    let d = canonical(a);
    let mut c = d.complete();
    for q in 0..c.num_states() {
        let f = c.is_accepting(q);
        c.set_accepting(q, !f);
    }
    minimize(&c).expect("complete DFA stays deterministic")
}

/// Product of two automata with synchronized symbols (no determinization).
/// A state pair accepts when both components accept; for weak automata this
/// is exactly intersection.
pub fn intersection_nfa(a: &Automaton, b: &Automaton) -> Result<Automaton, AutomataError> {
    a.check_same_alphabet(b)?;
    Ok(pair_product(a, b, a.alphabet().clone(), |s| Some((s, s))))
}

/// Generic synchronized product over reachable state pairs. `split` maps an
/// output symbol candidate to the pair of symbols read by each side; output
/// symbols are enumerated from `alphabet`.
fn pair_product<S>(a: &Automaton, b: &Automaton, alphabet: Alphabet, split: S) -> Automaton
where
    S: Fn(Symbol) -> Option<(Symbol, Symbol)>,
{
    let mut out = Automaton::new(alphabet.clone(), a.kind());
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in a.initial() {
        for &q in b.initial() {
            let id = out.add_state(a.is_accepting(p) && b.is_accepting(q));
            out.add_initial(id);
            index.insert((p, q), id);
            queue.push_back((p, q));
        }
    }
    let symbols: Vec<(Symbol, Symbol, Symbol)> = alphabet
        .symbols()
        .filter_map(|s| split(s).map(|(x, y)| (s, x, y)))
        .collect();
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        for &(s, x, y) in &symbols {
            for p2 in a.successors(p, x) {
                for q2 in b.successors(q, y) {
                    let to = *index.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        out.add_state(a.is_accepting(p2) && b.is_accepting(q2))
                    });
                    out.add_transition(from, s, to);
                }
            }
        }
    }
    out.trim()
}

/// Product of two automata over reachable state pairs, where `f` decides the
/// output symbol of each pair of transitions (or drops the pair). Returns the
/// untrimmed product and the state pair behind every product state.
pub fn product_map<F>(
    a: &Automaton,
    b: &Automaton,
    alphabet: Alphabet,
    kind: Kind,
    mut f: F,
) -> (Automaton, Vec<(StateId, StateId)>)
where
    F: FnMut(Symbol, Symbol) -> Option<Symbol>,
{
    let mut out = Automaton::new(alphabet, kind);
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in a.initial() {
        for &q in b.initial() {
            let id = out.add_state(a.is_accepting(p) && b.is_accepting(q));
            out.add_initial(id);
            index.insert((p, q), id);
            pairs.push((p, q));
            queue.push_back((p, q));
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        for &(sa, p2) in a.transitions(p) {
            for &(sb, q2) in b.transitions(q) {
                let Some(s) = f(sa, sb) else { continue };
                let to = *index.entry((p2, q2)).or_insert_with(|| {
                    queue.push_back((p2, q2));
                    pairs.push((p2, q2));
                    out.add_state(a.is_accepting(p2) && b.is_accepting(q2))
                });
                out.add_transition(from, s, to);
            }
        }
    }
    (out, pairs)
}

/// Canonical form for either acceptance kind.
pub fn normal_form(a: &Automaton) -> Result<Automaton, AutomataError> {
    match a.kind() {
        Kind::FiniteWord => Ok(canonical(a)),
        Kind::WeakBuchi => crate::weak::canonical_weak(a),
    }
}

/// Synchronous product over `Σ_a × Σ_b`: pairs of equal-length words.
pub fn synchronous_product(a: &Automaton, b: &Automaton) -> Result<Automaton, AutomataError> {
    if a.kind() != b.kind() {
        return Err(AutomataError::KindMismatch);
    }
    let alphabet = a.alphabet().concat(b.alphabet());
    let nb = b.alphabet().size() as Symbol;
    Ok(pair_product(a, b, alphabet, |s| Some((s / nb, s % nb))))
}

/// Drops track `track` from every symbol. The result is in general nondeterministic.
pub fn project(a: &Automaton, track: usize) -> Result<Automaton, AutomataError> {
    let from = a.alphabet();
    let to = from.drop_track(track)?;
    Ok(a.relabel(to.clone(), |s| {
        let mut c = from.components(s);
        c.remove(track);
        to.compose(&c)
    }))
}

/// Shortest accepted word, or `None` when the finite-word language is empty.
pub fn shortest_word(a: &Automaton) -> Option<Word> {
    let n = a.num_states();
    let mut parent: Vec<Option<(StateId, Symbol)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &q in a.initial() {
        seen[q] = true;
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        if a.is_accepting(q) {
            let mut word = Vec::new();
            let mut cur = q;
            while let Some((p, s)) = parent[cur] {
                word.push(s);
                cur = p;
            }
            word.reverse();
            return Some(word);
        }
        for &(s, r) in a.transitions(q) {
            if !seen[r] {
                seen[r] = true;
                parent[r] = Some((q, s));
                queue.push_back(r);
            }
        }
    }
    None
}

/// BFS path from any of `sources` to the first state satisfying `goal`.
/// With `nonempty`, the empty path does not count.
fn bfs_path(
    a: &Automaton,
    sources: &[StateId],
    goal: impl Fn(StateId) -> bool,
    nonempty: bool,
) -> Option<(Word, StateId)> {
    let n = a.num_states();
    let mut parent: Vec<Option<(StateId, Symbol)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &q in sources {
        if !nonempty && goal(q) {
            return Some((Vec::new(), q));
        }
        seen[q] = true;
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        for &(s, r) in a.transitions(q) {
            if goal(r) {
                let mut word = vec![s];
                let mut cur = q;
                while let Some((p, t)) = parent[cur] {
                    word.push(t);
                    cur = p;
                }
                word.reverse();
                return Some((word, r));
            }
            if !seen[r] {
                seen[r] = true;
                parent[r] = Some((q, s));
                queue.push_back(r);
            }
        }
    }
    None
}

/// Shortest accepted lasso under Büchi acceptance: shortest stem to an
/// accepting state on a cycle, then the shortest cycle through it.
pub fn shortest_lasso(a: &Automaton) -> Option<Lasso> {
    let sccs = a.sccs();
    let good = |q: StateId| a.is_accepting(q) && sccs.nontrivial[sccs.component[q]];
    let (stem, q) = bfs_path(a, a.initial(), good, false)?;
    let (cycle, _) = bfs_path(a, &[q], |r| r == q, true)?;
    Some(Lasso::new(stem, cycle))
}

/// Emptiness with a witness: a word for finite-word automata, a lasso for Büchi ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Word(Word),
    Lasso(Lasso),
}

pub fn is_empty(a: &Automaton) -> (bool, Option<Witness>) {
    let w = match a.kind() {
        Kind::FiniteWord => shortest_word(a).map(Witness::Word),
        Kind::WeakBuchi => shortest_lasso(a).map(Witness::Lasso),
    };
    (w.is_none(), w)
}

/// Finite-word inclusion `L(a) ⊆ L(b)`, with a shortest counterexample.
pub fn finite_subset(a: &Automaton, b: &Automaton) -> Result<Option<Word>, AutomataError> {
    let d = boolean(BoolOp::Difference, a, b)?;
    Ok(shortest_word(&d))
}

/// Language equality through canonical minimal forms.
pub fn language_equal(a: &Automaton, b: &Automaton) -> Result<bool, AutomataError> {
    a.check_same_alphabet(b)?;
    match a.kind() {
        Kind::FiniteWord => Ok(canonical(a) == canonical(b)),
        Kind::WeakBuchi => {
            let ca = crate::weak::canonical_weak(a)?;
            let cb = crate::weak::canonical_weak(b)?;
            Ok(ca == cb)
        }
    }
}

/// The unique bijection between two deterministic automata whose reachable
/// graphs coincide up to renaming, found by synchronized traversal.
pub fn find_isomorphism(a: &Automaton, b: &Automaton) -> Option<StateMap> {
    if a.alphabet() != b.alphabet() || a.num_states() != b.num_states() {
        return None;
    }
    if a.initial().len() != b.initial().len() {
        return None;
    }
    let mut map: StateMap = vec![None; a.num_states()];
    let mut back: StateMap = vec![None; b.num_states()];
    let mut queue = VecDeque::new();
    if let (Some(&p), Some(&q)) = (a.initial().first(), b.initial().first()) {
        if a.initial().len() != 1 {
            return None;
        }
        map[p] = Some(q);
        back[q] = Some(p);
        queue.push_back((p, q));
    }
    while let Some((p, q)) = queue.pop_front() {
        if a.is_accepting(p) != b.is_accepting(q) {
            return None;
        }
        let ta = a.transitions(p);
        let tb = b.transitions(q);
        if ta.len() != tb.len() {
            return None;
        }
        for (&(sa, ra), &(sb, rb)) in ta.iter().zip(tb) {
            if sa != sb {
                return None;
            }
            match (map[ra], back[rb]) {
                (None, None) => {
                    map[ra] = Some(rb);
                    back[rb] = Some(ra);
                    queue.push_back((ra, rb));
                }
                (Some(x), Some(y)) if x == rb && y == ra => {}
                _ => return None,
            }
        }
    }
    if map.iter().all(Option::is_some) {
        Some(map)
    } else {
        None
    }
}
