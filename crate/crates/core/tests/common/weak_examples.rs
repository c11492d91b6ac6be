//! Weak Büchi examples: a limit that is not weak-deterministic and the
//! guard against accepting cycles through the head increment.

use rmc_core::alphabet::{Alphabet, Symbol};
use rmc_core::automaton::{Automaton, Kind, Lasso};
use rmc_core::increments::GrowDecomposition;

const A: Symbol = 0;
const B: Symbol = 1;

/// `b (a|b) b a^ω` with head {0} and increments {1}, {2}; its limit
/// `b (a|b)+ b a^ω` needs finitely many b's, so no deterministic weak
/// automaton accepts it.
pub fn not_weak_origin() -> (Automaton, GrowDecomposition) {
    let mut a = Automaton::new(Alphabet::new(["a", "b"]).unwrap(), Kind::WeakBuchi);
    let s: Vec<_> = (0..4).map(|_| a.add_state(true)).collect();
    a.add_initial(s[0]);
    a.add_transition(s[0], B, s[1]);
    a.add_transition(s[1], A, s[2]);
    a.add_transition(s[1], B, s[2]);
    a.add_transition(s[2], B, s[3]);
    a.add_transition(s[3], A, s[3]);
    let g = GrowDecomposition::from_parts(&a, vec![0], vec![vec![1], vec![2]]).unwrap();
    (a, g)
}

/// Membership in `b (a|b)+ b a^ω`.
pub fn in_limit(l: &Lasso) -> bool {
    if l.cycle.iter().any(|&s| s != A) {
        return false;
    }
    let mut u: Vec<Symbol> = l.stem.iter().chain(&l.cycle).copied().collect();
    while u.last() == Some(&A) {
        u.pop();
    }
    u.len() >= 3 && u[0] == B && u[u.len() - 1] == B
}

/// `x a a a b^ω` with head {0}, increments {1}, {2}, {3} and tail {4, 5}.
pub fn guard_origin() -> (Automaton, GrowDecomposition) {
    let mut a = Automaton::new(Alphabet::new(["x", "a", "b"]).unwrap(), Kind::WeakBuchi);
    let s: Vec<_> = (0..6).map(|q| a.add_state(q != 0 && q != 4)).collect();
    a.add_initial(s[0]);
    a.add_transition(s[0], 0, s[1]);
    a.add_transition(s[1], 1, s[2]);
    a.add_transition(s[2], 1, s[3]);
    a.add_transition(s[3], 1, s[4]);
    a.add_transition(s[4], 2, s[5]);
    a.add_transition(s[5], 2, s[5]);
    let g = GrowDecomposition::from_parts(&a, vec![0], vec![vec![1], vec![2], vec![3]]).unwrap();
    (a, g)
}
