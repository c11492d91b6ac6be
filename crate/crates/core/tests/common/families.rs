//! Incrementally growing families and the explicit-insertion oracle.

use std::collections::BTreeSet;

use rmc_core::alphabet::Alphabet;
use rmc_core::automaton::{Automaton, Kind, Lasso, StateId, Word};
use rmc_core::builders::{affine_relation, initial_token_ring, token_ring};
use rmc_core::engine::{run_with, Mode, RunConfig};
use rmc_core::extrapolate::{extrapolate, insert_increments};
use rmc_core::increments::GrowDecomposition;
use rmc_core::transducer::{SamplingStrategy, Transducer};

use super::{accepts, accepts_lasso, lassos, words};

/// Largest number of inserted increments compared against.
pub const INSERTIONS: usize = 4;
const MAX_WORD: usize = 6;
const MAX_PAIR_WORD: usize = 4;
const MAX_LASSO: usize = 5;

pub struct Family {
    pub name: String,
    pub origin: Automaton,
    pub grow: GrowDecomposition,
}

#[derive(Debug, Clone, Copy)]
pub enum Acceptance {
    /// Only the last tail state.
    End,
    All,
    /// First state of every increment and the last tail state.
    Entry,
}

#[derive(Debug, Clone, Copy)]
pub struct Chain {
    pub head: usize,
    pub width: usize,
    /// Increment states of width 2 loop back with `b`.
    pub cyclic: bool,
    pub increments: usize,
    /// Increment entries jump two increments ahead with `b`, the head one ahead.
    pub jump: bool,
    pub acceptance: Acceptance,
    pub kind: Kind,
}

/// Head `c`-chain, increments read `a` in sequence, tail `c`-chain whose
/// last state loops on `c` for weak families.
pub fn chain(p: Chain) -> Family {
    let mut a = Automaton::new(Alphabet::new(["a", "b", "c"]).unwrap(), p.kind);
    let weak = p.kind == Kind::WeakBuchi;
    let head: Vec<StateId> = (0..p.head).map(|_| a.add_state(matches!(p.acceptance, Acceptance::All))).collect();
    let incs: Vec<Vec<StateId>> = (0..p.increments)
        .map(|_| {
            (0..p.width)
                .map(|m| {
                    a.add_state(match p.acceptance {
                        Acceptance::End => false,
                        Acceptance::All => true,
                        Acceptance::Entry => m == 0 || weak,
                    })
                })
                .collect()
        })
        .collect();
    let tail: Vec<StateId> = (0..2).map(|i| a.add_state(i == 1 || matches!(p.acceptance, Acceptance::All))).collect();
    a.add_initial(head.first().copied().unwrap_or(incs[0][0]));
    let (a_, b_, c_) = (0, 1, 2);
    for i in 0..p.head {
        let next = if i + 1 < p.head { head[i + 1] } else { incs[0][0] };
        a.add_transition(head[i], c_, next);
    }
    if p.jump && p.head > 0 {
        a.add_transition(head[p.head - 1], b_, incs[1][0]);
    }
    let entry = |l: usize| if l < p.increments { incs[l][0] } else { tail[0] };
    for l in 0..p.increments {
        for m in 0..p.width - 1 {
            a.add_transition(incs[l][m], a_, incs[l][m + 1]);
        }
        if p.cyclic && p.width == 2 {
            a.add_transition(incs[l][1], b_, incs[l][0]);
        }
        a.add_transition(incs[l][p.width - 1], a_, entry(l + 1));
        if p.jump {
            a.add_transition(incs[l][0], b_, entry(l + 2));
        }
    }
    a.add_transition(tail[0], c_, tail[1]);
    if weak {
        a.add_transition(tail[1], c_, tail[1]);
    }
    let grow = GrowDecomposition::from_parts(&a, head, incs).expect("chain decomposition");
    Family {
        name: format!("{p:?}"),
        origin: a,
        grow,
    }
}

pub fn chains() -> Vec<Family> {
    let mut out = Vec::new();
    for kind in [Kind::FiniteWord, Kind::WeakBuchi] {
        for head in 0..3 {
            for (width, cyclic) in [(1, false), (2, false), (2, true)] {
                for increments in [2, 3] {
                    for jump in [false, true] {
                        for acceptance in [Acceptance::End, Acceptance::All, Acceptance::Entry] {
                            // weak families skip the acceptance variants that only
                            // matter on finite words
                            if kind == Kind::WeakBuchi && !matches!(acceptance, Acceptance::End) && head != 1 {
                                continue;
                            }
                            out.push(chain(Chain {
                                head,
                                width,
                                cyclic,
                                increments,
                                jump,
                                acceptance,
                                kind,
                            }));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every growth decomposition the engine extrapolates from.
pub fn engine_families(name: &str, t: &Transducer, initial: Option<&Automaton>, cfg: &RunConfig) -> Vec<Family> {
    let mut out = Vec::new();
    let mut hook = |it: &rmc_core::engine::Iteration| {
        if let (Some(last), Some(g)) = (&it.last, &it.grow) {
            out.push(Family {
                name: format!("{name} sample {}", it.sample),
                origin: last.clone(),
                grow: g.clone(),
            });
        }
    };
    run_with(t, initial, cfg, &mut hook).expect("engine run");
    out
}

pub fn sampled() -> Vec<Family> {
    let ring = token_ring();
    let init = initial_token_ring();
    let reach = RunConfig {
        mode: Mode::Reach,
        ..RunConfig::default()
    };
    let exp2 = RunConfig {
        sampling: SamplingStrategy::Exponential(2),
        ..RunConfig::default()
    };
    let reach2 = RunConfig {
        sampling: SamplingStrategy::Linear(2),
        ..reach.clone()
    };
    let mut out = engine_families("token ring reach", &ring, Some(&init), &reach);
    out.extend(engine_families("token ring reach linear:2", &ring, Some(&init), &reach2));
    for c in [1, 2, -1] {
        out.extend(engine_families(&format!("x{c:+} closure"), &affine_relation(c), None, &exp2));
    }
    out
}

pub fn all_families() -> Vec<Family> {
    let mut out = chains();
    out.extend(sampled());
    out
}

/// Compares a family's extrapolation against the explicit insertions
/// `A^{e_0}, ..., A^{e_4}`. Returns the number of words or lassos compared.
pub fn check_family(f: &Family) -> Result<usize, String> {
    let e = extrapolate(&f.origin, &f.grow).map_err(|e| format!("{}: {e}", f.name))?;
    let inserted: Vec<Automaton> = (0..=INSERTIONS).map(|i| insert_increments(&f.origin, &f.grow, i)).collect();
    let by_value: Vec<Automaton> = (0..=INSERTIONS as u32).map(|j| e.counted.with_valuation(&[j])).collect();
    let k = f.origin.alphabet().size();
    let fail = |what: &str, x: &dyn std::fmt::Debug| Err(format!("{}: {what} {x:?}", f.name));
    match f.origin.kind() {
        Kind::FiniteWord => {
            let max = if k > 3 { MAX_PAIR_WORD } else { MAX_WORD };
            let all: Vec<Word> = words(k, max);
            for w in &all {
                let values: BTreeSet<u32> = e.counted.valuations(w).into_iter().map(|v| v[0]).collect();
                let member: Vec<bool> = inserted.iter().map(|a| accepts(a, w)).collect();
                // (1) a pair (w, j) certifies w in A^{e_j}
                for &j in &values {
                    if (j as usize) <= INSERTIONS && !member[j as usize] {
                        return fail("uncertified value", &(w, j));
                    }
                }
                // (2) w in A^{e_i} has a pair with j <= i
                for (i, &m) in member.iter().enumerate() {
                    if m && !values.iter().any(|&j| j as usize <= i) {
                        return fail("missing value", &(w, i));
                    }
                }
                // (3) words new to the sequence pass an added increment
                if member.iter().any(|&m| m) && !member[0] && values.contains(&0) {
                    return fail("zero value on a new word", w);
                }
                // bounded languages agree wherever the runs stay within the insertions
                let plain = accepts(&e.plain, w);
                let union = member.iter().any(|&m| m);
                let low = values.iter().any(|&j| j as usize <= INSERTIONS);
                if union != (plain && low) {
                    return fail("bounded language mismatch", w);
                }
            }
            Ok(all.len())
        }
        Kind::WeakBuchi => {
            let all: Vec<Lasso> = lassos(k, MAX_LASSO);
            for l in &all {
                let member: Vec<bool> = inserted.iter().map(|a| accepts_lasso(a, l)).collect();
                let value: Vec<bool> = by_value.iter().map(|a| accepts_lasso(a, l)).collect();
                for j in 0..=INSERTIONS {
                    if value[j] && !member[j] {
                        return fail("uncertified value", &(l, j));
                    }
                    if member[j] && !value[..=j].iter().any(|&v| v) {
                        return fail("missing value", &(l, j));
                    }
                }
                if member.iter().any(|&m| m) && !member[0] && value[0] {
                    return fail("zero value on a new lasso", l);
                }
                let plain = accepts_lasso(&e.plain, l);
                let union = member.iter().any(|&m| m);
                let low = value.iter().any(|&v| v);
                if union != (plain && low) {
                    return fail("bounded language mismatch", l);
                }
            }
            Ok(all.len())
        }
    }
}
