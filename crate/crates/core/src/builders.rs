//! Ready-made models: the token ring and binary affine relations.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{Automaton, Kind};
use crate::ops::canonical;
use crate::transducer::Transducer;

pub const N: Symbol = 0;
pub const T: Symbol = 1;

/// Alphabet `{N, T}` of the token ring (no token / token).
pub fn token_alphabet() -> Alphabet {
    Alphabet::new(["N", "T"]).expect("static labels")
}

/// Token passing in a ring of any size: the token moves one process to the
/// right, `(N,N)*(T,N)(N,T)(N,N)*`, or wraps around from the last process to
/// the first, `(N,T)(N,N)*(T,N)`.
pub fn token_ring() -> Transducer {
    let base = token_alphabet();
    let pairs = Alphabet::power(&base, 2);
    let p = |x: Symbol, y: Symbol| x * 2 + y;
    let mut a = Automaton::new(pairs, Kind::FiniteWord);
    // shift: s0 -(N,N)-> s0 -(T,N)-> s1 -(N,T)-> s2 -(N,N)-> s2
    let s0 = a.add_state(false);
    let s1 = a.add_state(false);
    let s2 = a.add_state(true);
    a.add_initial(s0);
    a.add_transition(s0, p(N, N), s0);
    a.add_transition(s0, p(T, N), s1);
    a.add_transition(s1, p(N, T), s2);
    a.add_transition(s2, p(N, N), s2);
    // wrap: w0 -(N,T)-> w1 -(N,N)-> w1 -(T,N)-> w2
    let w0 = a.add_state(false);
    let w1 = a.add_state(false);
    let w2 = a.add_state(true);
    a.add_initial(w0);
    a.add_transition(w0, p(N, T), w1);
    a.add_transition(w1, p(N, N), w1);
    a.add_transition(w1, p(T, N), w2);
    Transducer::new(canonical(&a)).expect("pair alphabet")
}

/// Initial configurations `T N*`: the first process holds the token.
pub fn initial_token_ring() -> Automaton {
    let mut a = Automaton::new(token_alphabet(), Kind::FiniteWord);
    let q0 = a.add_state(false);
    let q1 = a.add_state(true);
    a.add_initial(q0);
    a.add_transition(q0, T, q1);
    a.add_transition(q1, N, q1);
    canonical(&a)
}

/// Order in which the bits of a number are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitOrder {
    /// Least significant bit first; the last letter is the sign bit.
    LsbFirst,
    /// Sign bit first.
    MsbFirst,
}

/// Alphabet `{0, 1}`.
pub fn bit_alphabet() -> Alphabet {
    Alphabet::new(["0", "1"]).expect("static labels")
}

/// The relation `{(x, x + c)}` over two's-complement integers, where both
/// numbers are written with the same number of bits (any number of
/// sign-extension bits allowed), sign bit first.
pub fn affine_relation(c: i64) -> Transducer {
    affine_relation_with(c, BitOrder::MsbFirst)
}

pub fn affine_relation_with(c: i64, order: BitOrder) -> Transducer {
    let pairs = Alphabet::power(&bit_alphabet(), 2);
    let mut a = Automaton::new(pairs, Kind::FiniteWord);
    // states track the carry r of `x + c = y + r·2^i` after i low bits
    let mut ids: HashMap<i64, usize> = HashMap::new();
    let fin = a.add_state(true);
    let mut stack = vec![c];
    let start = a.add_state(false);
    ids.insert(c, start);
    a.add_initial(start);
    while let Some(r) = stack.pop() {
        let from = ids[&r];
        for x in 0..2i64 {
            // sign bit: y = x - r
            let y = x - r;
            if y == 0 || y == 1 {
                a.add_transition(from, (x * 2 + y) as Symbol, fin);
            }
            for y in 0..2i64 {
                let sum = x + r - y;
                if sum.rem_euclid(2) != 0 {
                    continue;
                }
                let r2 = sum.div_euclid(2);
                let to = *ids.entry(r2).or_insert_with(|| {
                    stack.push(r2);
                    a.add_state(false)
                });
                a.add_transition(from, (x * 2 + y) as Symbol, to);
            }
        }
    }
    let lsb = canonical(&a);
    let out = match order {
        BitOrder::LsbFirst => lsb,
        BitOrder::MsbFirst => canonical(&lsb.reverse()),
    };
    Transducer::new(out).expect("pair alphabet")
}

/// Two's-complement encoding of `x` on `bits` bits, or `None` if it does not fit.
pub fn encode(x: i64, bits: usize, order: BitOrder) -> Option<Vec<Symbol>> {
    if bits == 0 || bits > 62 {
        return None;
    }
    let lo = -(1i64 << (bits - 1));
    let hi = (1i64 << (bits - 1)) - 1;
    if x < lo || x > hi {
        return None;
    }
    let mut w: Vec<Symbol> = (0..bits).map(|i| ((x >> i) & 1) as Symbol).collect();
    if order == BitOrder::MsbFirst {
        w.reverse();
    }
    Some(w)
}

/// Value of a two's-complement word.
pub fn decode(word: &[Symbol], order: BitOrder) -> i64 {
    let mut bits: Vec<Symbol> = word.to_vec();
    if order == BitOrder::MsbFirst {
        bits.reverse();
    }
    let k = bits.len();
    let mut v = 0i64;
    for (i, &b) in bits.iter().enumerate() {
        if b == 1 {
            if i + 1 == k {
                v -= 1i64 << i;
            } else {
                v += 1i64 << i;
            }
        }
    }
    v
}
