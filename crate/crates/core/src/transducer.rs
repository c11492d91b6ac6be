//! Length-preserving relations as automata over pairs of letters.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{Automaton, Kind, StateId};
use crate::error::AutomataError;
use crate::ops::{determinize_with, minimize, normal_form, product_map};

/// Automaton over `Σ × Σ`. The symbol `(x, y)` is written `x/y`.
#[derive(Clone, PartialEq, Eq)]
pub struct Transducer {
    inner: Automaton,
}

impl Transducer {
    pub fn new(inner: Automaton) -> Result<Self, AutomataError> {
        let alpha = inner.alphabet();
        if alpha.arity() != 2 {
            return Err(AutomataError::BadTrackIndex {
                track: 1,
                arity: alpha.arity(),
            });
        }
        if !alpha.is_uniform() {
            return Err(AutomataError::AlphabetMismatch);
        }
        Ok(Self { inner })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.inner
    }

    pub fn into_automaton(self) -> Automaton {
        self.inner
    }

    pub fn base_alphabet(&self) -> Alphabet {
        self.inner.alphabet().track_alphabet(0)
    }

    pub fn kind(&self) -> Kind {
        self.inner.kind()
    }

    pub fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    /// Symbol `(x, y)` of the pair alphabet.
    pub fn pair(&self, x: Symbol, y: Symbol) -> Symbol {
        x * self.base_alphabet().size() as Symbol + y
    }

    /// Splits a pair symbol into its input and output letters.
    pub fn unpair(&self, s: Symbol) -> (Symbol, Symbol) {
        let n = self.base_alphabet().size() as Symbol;
        (s / n, s % n)
    }

    /// Whether `(u, v)` is in the finite-word relation.
    pub fn accepts_pair(&self, u: &[Symbol], v: &[Symbol]) -> bool {
        if u.len() != v.len() {
            return false;
        }
        let w: Vec<Symbol> = u.iter().zip(v).map(|(&x, &y)| self.pair(x, y)).collect();
        self.inner.accepts(&w)
    }
}

impl std::fmt::Debug for Transducer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Transducer {:?}", self.inner)
    }
}

/// The identity relation on `base`, as a one-state transducer.
pub fn identity(base: &Alphabet, kind: Kind) -> Transducer {
    let alpha = Alphabet::power(base, 2);
    let mut a = Automaton::new(alpha, kind);
    let q = a.add_state(true);
    a.add_initial(q);
    let n = base.size() as Symbol;
    for x in 0..n {
        a.add_transition(q, x * n + x, q);
    }
    Transducer { inner: a }
}

/// Heuristics applied while composing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComposeOptions {
    /// Drop dominated product states inside the subset construction
    /// (finite-word only).
    pub dominance: bool,
}

/// Nondeterministic product computing `t2 ∘ t1` (first `t1`, then `t2`),
/// before determinization.
pub fn compose_raw(t2: &Transducer, t1: &Transducer) -> Result<(Automaton, Vec<(StateId, StateId)>), AutomataError> {
    if t1.inner.alphabet() != t2.inner.alphabet() {
        return Err(AutomataError::AlphabetMismatch);
    }
    if t1.kind() != t2.kind() {
        return Err(AutomataError::KindMismatch);
    }
    let n = t1.base_alphabet().size() as Symbol;
    Ok(product_map(
        &t1.inner,
        &t2.inner,
        t1.inner.alphabet().clone(),
        t1.kind(),
        |s1, s2| {
            let (x, y) = (s1 / n, s1 % n);
            let (y2, z) = (s2 / n, s2 % n);
            (y == y2).then_some(x * n + z)
        },
    ))
}

/// Determinizes a product built from two factors, optionally pruning dominated states.
fn finish_product(
    raw: Automaton,
    pairs: Vec<(StateId, StateId)>,
    left: &Automaton,
    right: &Automaton,
    opts: ComposeOptions,
) -> Result<Automaton, AutomataError> {
    if raw.kind() == Kind::WeakBuchi {
        return normal_form(&raw);
    }
    if !opts.dominance {
        return normal_form(&raw);
    }
    let sl = simulation(left);
    let sr = simulation(right);
    let dominates = |p: StateId, q: StateId| {
        let (p1, p2) = pairs[p];
        let (q1, q2) = pairs[q];
        sl[p1][q1] && sr[p2][q2]
    };
    let d = determinize_with(&raw, |set| dominance_reduce(set, &dominates));
    minimize(&d)
}

/// Relation `t2 ∘ t1`: pairs `(u, w)` with `(u, v) ∈ t1` and `(v, w) ∈ t2`.
pub fn compose(t2: &Transducer, t1: &Transducer) -> Result<Transducer, AutomataError> {
    compose_with(t2, t1, ComposeOptions::default())
}

pub fn compose_with(t2: &Transducer, t1: &Transducer, opts: ComposeOptions) -> Result<Transducer, AutomataError> {
    let (raw, pairs) = compose_raw(t2, t1)?;
    let a = finish_product(raw, pairs, &t1.inner, &t2.inner, opts)?;
    Ok(Transducer { inner: a })
}

/// Image `T(A)`: words `v` with `(u, v) ∈ T` for some `u ∈ L(A)`.
pub fn image(t: &Transducer, a: &Automaton) -> Result<Automaton, AutomataError> {
    image_with(t, a, ComposeOptions::default())
}

pub fn image_with(t: &Transducer, a: &Automaton, opts: ComposeOptions) -> Result<Automaton, AutomataError> {
    let (raw, pairs) = image_raw(t, a)?;
    finish_product(raw, pairs, a, &t.inner, opts)
}

/// Nondeterministic product for the image, before determinization.
pub fn image_raw(t: &Transducer, a: &Automaton) -> Result<(Automaton, Vec<(StateId, StateId)>), AutomataError> {
    let base = t.base_alphabet();
    if a.alphabet() != &base {
        return Err(AutomataError::AlphabetMismatch);
    }
    if a.kind() != t.kind() {
        return Err(AutomataError::KindMismatch);
    }
    let n = base.size() as Symbol;
    Ok(product_map(a, &t.inner, base, a.kind(), |x, s| {
        (s / n == x).then_some(s % n)
    }))
}

/// Reflexive transducer `T ∪ T_id`, canonical.
pub fn reflexive(t: &Transducer) -> Result<Transducer, AutomataError> {
    let id = identity(&t.base_alphabet(), t.kind());
    let u = t.inner.disjoint_union(&id.inner)?;
    Ok(Transducer { inner: normal_form(&u)? })
}

/// Canonical form of a transducer.
pub fn normalize(t: &Transducer) -> Result<Transducer, AutomataError> {
    Ok(Transducer {
        inner: normal_form(&t.inner)?,
    })
}

/// Union of two relations, canonical.
pub fn union(t1: &Transducer, t2: &Transducer) -> Result<Transducer, AutomataError> {
    let u = t1.inner.disjoint_union(&t2.inner)?;
    Ok(Transducer { inner: normal_form(&u)? })
}

/// Greatest direct simulation of a finite-word automaton:
/// `sim[p][q]` holds when `p` simulates `q`, which implies `L(q) ⊆ L(p)`.
pub fn simulation(a: &Automaton) -> Vec<Vec<bool>> {
    let n = a.num_states();
    let mut sim = vec![vec![false; n]; n];
    for p in 0..n {
        for q in 0..n {
            sim[p][q] = a.is_accepting(p) || !a.is_accepting(q);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..n {
            for q in 0..n {
                if !sim[p][q] || p == q {
                    continue;
                }
                let ok = a.transitions(q).iter().all(|&(s, q2)| a.successors(p, s).any(|p2| sim[p2][q2]));
                if !ok {
                    sim[p][q] = false;
                    changed = true;
                }
            }
        }
    }
    sim
}

/// Removes from a subset every state dominated by another member. Among
/// mutually dominating states the smallest index is kept.
pub fn dominance_reduce<D>(set: &mut Vec<StateId>, dominates: &D)
where
    D: Fn(StateId, StateId) -> bool,
{
    let snapshot = set.clone();
    set.retain(|&q| {
        !snapshot
            .iter()
            .any(|&p| p != q && dominates(p, q) && (!dominates(q, p) || p < q))
    });
}

/// Strictly increasing sample indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SamplingStrategy {
    /// `s_k = a·k`, k ≥ 1.
    Linear(u64),
    /// `s_k = a^k`, k ≥ 1.
    Exponential(u64),
    /// A user-given increasing list.
    Explicit(Vec<u64>),
}

impl SamplingStrategy {
    /// The k-th sample (k counted from 0), or `None` past the end of an explicit list.
    pub fn nth(&self, k: usize) -> Option<u64> {
        match self {
            SamplingStrategy::Linear(a) => a.checked_mul(k as u64 + 1),
            SamplingStrategy::Exponential(a) => a.checked_pow(k as u32 + 1),
            SamplingStrategy::Explicit(v) => v.get(k).copied(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            SamplingStrategy::Linear(0) => Err("linear step must be positive".into()),
            SamplingStrategy::Exponential(a) if *a < 2 => Err("exponential base must be at least 2".into()),
            SamplingStrategy::Explicit(v) => {
                if v.is_empty() || v[0] == 0 || v.windows(2).any(|w| w[0] >= w[1]) {
                    Err("explicit samples must be strictly increasing positive integers".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for SamplingStrategy {
    type Err = String;

    /// Parses `linear:A`, `exp:A` or `list:1,2,4`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| format!("bad sampling `{s}`"))?;
        let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("bad sampling `{s}`: {e}"));
        let out = match kind {
            "linear" => SamplingStrategy::Linear(num(arg)?),
            "exp" => SamplingStrategy::Exponential(num(arg)?),
            "list" => SamplingStrategy::Explicit(arg.split(',').map(num).collect::<Result<_, _>>()?),
            _ => return Err(format!("unknown sampling kind `{kind}`")),
        };
        out.validate()?;
        Ok(out)
    }
}

/// Memoized powers of a reflexive transducer `T_0 = T ∪ T_id`.
///
/// With the nonreflexive option, doublings use
/// `T_0^{2s} = (T_0^s ∘ T^s) ∪ T_0^s` and keep `T^s` alongside.
#[derive(Debug, Clone)]
pub struct Powers {
    t: Transducer,
    t0: Transducer,
    reflexive: HashMap<u64, Transducer>,
    plain: HashMap<u64, Transducer>,
    nonreflexive: bool,
    opts: ComposeOptions,
    peak: usize,
}

impl Powers {
    pub fn new(t: &Transducer, nonreflexive: bool, opts: ComposeOptions) -> Result<Self, AutomataError> {
        let t = normalize(t)?;
        let t0 = reflexive(&t)?;
        let mut reflexive_map = HashMap::new();
        reflexive_map.insert(1, t0.clone());
        let mut plain = HashMap::new();
        plain.insert(1, t.clone());
        let peak = t0.num_states();
        Ok(Self {
            t,
            t0,
            reflexive: reflexive_map,
            plain,
            nonreflexive,
            opts,
            peak,
        })
    }

    pub fn base(&self) -> &Transducer {
        &self.t
    }

    pub fn reflexive_base(&self) -> &Transducer {
        &self.t0
    }

    /// Largest state count of any power `T_0^n` computed so far.
    pub fn peak(&self) -> usize {
        self.peak
    }

    fn record(&mut self, t: &Transducer) {
        self.peak = self.peak.max(t.num_states());
    }

    /// `T^n` (nonreflexive power).
    pub fn plain(&mut self, n: u64) -> Result<Transducer, AutomataError> {
        assert!(n >= 1);
        if let Some(t) = self.plain.get(&n) {
            return Ok(t.clone());
        }
        let r = if n.is_multiple_of(2) {
            let h = self.plain(n / 2)?;
            compose_with(&h, &h, self.opts)?
        } else {
            let h = self.plain(n - 1)?;
            compose_with(&self.t, &h, self.opts)?
        };
        self.plain.insert(n, r.clone());
        Ok(r)
    }

    /// `T_0^n`.
    pub fn power(&mut self, n: u64) -> Result<Transducer, AutomataError> {
        assert!(n >= 1);
        if let Some(t) = self.reflexive.get(&n) {
            return Ok(t.clone());
        }
        let r = if n.is_multiple_of(2) {
            let h = self.power(n / 2)?;
            if self.nonreflexive {
                let p = self.plain(n / 2)?;
                let c = compose_with(&h, &p, self.opts)?;
                union(&c, &h)?
            } else {
                compose_with(&h, &h, self.opts)?
            }
        } else {
            // prefer extending the largest known power below n
            let below = self
                .reflexive
                .keys()
                .copied()
                .filter(|&k| k < n)
                .max()
                .expect("power 1 is always known");
            let h = self.reflexive[&below].clone();
            let rest = self.power(n - below)?;
            compose_with(&rest, &h, self.opts)?
        };
        self.record(&r);
        self.reflexive.insert(n, r.clone());
        Ok(r)
    }
}
