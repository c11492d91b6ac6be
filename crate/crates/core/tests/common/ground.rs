//! Brute-force ground truth for the built-in models and mutated extrapolations.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rmc_core::alphabet::Symbol;
use rmc_core::automaton::{Automaton, Kind, Word};
use rmc_core::builders::{encode, initial_token_ring, token_ring, BitOrder};
use rmc_core::correctness::{
    check_preciseness_closure, check_preciseness_reach, check_safety_closure, check_safety_reach, default_bound,
};
use rmc_core::counter::CounterAutomaton;
use rmc_core::engine::{run_with, EngineResult, Mode, RunConfig};
use rmc_core::extrapolate::Extrapolation;
use rmc_core::ops::language_equal;
use rmc_core::transducer::Transducer;

/// Walks a deterministic automaton.
pub fn dfa_accepts(a: &Automaton, w: &[Symbol]) -> bool {
    let Some(&start) = a.initial().first() else { return false };
    let mut q = start;
    for &s in w {
        match a.transitions(q).iter().find(|(x, _)| *x == s) {
            Some(&(_, r)) => q = r,
            None => return false,
        }
    }
    a.is_accepting(q)
}

/// Configurations of `n` processes reachable from the initial ones by
/// repeated token passing, by explicit search.
pub fn ring_reachable(n: usize) -> BTreeSet<Word> {
    let t = token_ring();
    let init = initial_token_ring();
    let configs: Vec<Word> = super::words_of_len(2, n);
    let mut seen: BTreeSet<Word> = configs.iter().filter(|w| super::accepts(&init, w)).cloned().collect();
    let mut queue: VecDeque<Word> = seen.iter().cloned().collect();
    while let Some(u) = queue.pop_front() {
        for v in &configs {
            if t.accepts_pair(&u, v) && seen.insert(v.clone()) {
                queue.push_back(v.clone());
            }
        }
    }
    seen
}

/// Words of length `1..=max` on which `a` disagrees with the ring ground truth.
pub fn ring_errors(a: &Automaton, max: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for n in 1..=max {
        let truth = ring_reachable(n);
        for w in super::words_of_len(2, n) {
            if dfa_accepts(a, &w) != truth.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

/// Pairs `(x, y)` from `values` on which `closure` disagrees with
/// `y = x + k·c` for some `k >= 0`, both written on `bits` bits sign first.
pub fn affine_errors(closure: &Automaton, c: i64, bits: usize, values: &[i64]) -> Vec<(i64, i64)> {
    let enc: Vec<Word> = values
        .iter()
        .map(|&x| encode(x, bits, BitOrder::MsbFirst).expect("value fits"))
        .collect();
    let mut out = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        for (j, &y) in values.iter().enumerate() {
            let d = y - x;
            let truth = d % c == 0 && d / c >= 0;
            let w: Word = enc[i].iter().zip(&enc[j]).map(|(a, b)| a * 2 + b).collect();
            if dfa_accepts(closure, &w) != truth {
                out.push((x, y));
            }
        }
    }
    out
}

/// Whether the engine would accept `e` as exact: safety holds and
/// preciseness holds for the default bound or its double.
pub fn engine_accepts(mode: Mode, t0: &Transducer, e: &Extrapolation) -> bool {
    let safety = match mode {
        Mode::Closure => match Transducer::new(e.plain.clone()) {
            Ok(t) => check_safety_closure(&t),
            Err(_) => return false,
        },
        Mode::Reach => check_safety_reach(t0, &e.plain),
    };
    if !safety.map(|r| r.holds()).unwrap_or(false) {
        return false;
    }
    let m = default_bound(e, 2);
    [m, 2 * m].iter().any(|&m| {
        let r = match mode {
            Mode::Closure => check_preciseness_closure(e, m),
            Mode::Reach => check_preciseness_reach(t0, e, m),
        };
        r.map(|r| r.holds()).unwrap_or(false)
    })
}

fn rebuild(e: &Extrapolation, skip: Option<usize>, extra: Option<(usize, Symbol, u32, usize)>) -> Extrapolation {
    let c = &e.counted;
    let mut out = CounterAutomaton::new(c.base().clone(), c.kind(), 1);
    for q in 0..c.num_states() {
        out.add_state(c.is_accepting(q));
    }
    for &q in c.initial() {
        out.add_initial(q);
    }
    for (i, (q, s, v, r)) in c.edges().enumerate() {
        if Some(i) != skip {
            out.add_transition(q, s, v, r);
        }
    }
    if let Some((q, s, v, r)) = extra {
        out.add_transition(q, s, &[v], r);
    }
    Extrapolation {
        origin: e.origin.clone(),
        plain: out.counterless(),
        counted: out,
        added: e.added.clone(),
        copy_of: e.copy_of.clone(),
    }
}

/// Every single-transition deletion and `additions` seeded random
/// additions carrying a positive increment, keeping only mutants whose
/// language differs from the original.
pub fn mutants(e: &Extrapolation, additions: usize, seed: u64) -> Vec<(String, Extrapolation)> {
    assert_eq!(e.plain.kind(), Kind::FiniteWord);
    let mut out = Vec::new();
    for i in 0..e.counted.num_transitions() {
        out.push((format!("delete #{i}"), rebuild(e, Some(i), None)));
    }
    let n = e.counted.num_states();
    let k = e.counted.base().size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..additions {
        let t = (rng.gen_range(0..n), rng.gen_range(0..k) as Symbol, rng.gen_range(1..=2), rng.gen_range(0..n));
        out.push((format!("add {t:?}"), rebuild(e, None, Some(t))));
    }
    out.retain(|(_, m)| !language_equal(&m.plain, &e.plain).unwrap());
    out
}

/// Runs the engine and keeps the extrapolation of the last sample.
pub fn run_keeping(t: &Transducer, initial: Option<&Automaton>, cfg: &RunConfig) -> (EngineResult, Option<Extrapolation>) {
    let mut last = None;
    let mut hook = |it: &rmc_core::engine::Iteration| {
        if let Some(e) = &it.extrapolation {
            last = Some(e.clone());
        }
    };
    let r = run_with(t, initial, cfg, &mut hook).expect("engine run");
    (r, last)
}
