//! Exact results against brute-force ground truth, and mutated extrapolations.

mod common;

use common::ground::{affine_errors, engine_accepts, mutants, ring_errors, run_keeping};
use rmc_core::builders::{affine_relation, initial_token_ring, token_ring};
use rmc_core::engine::{Mode, Outcome, RunConfig};
use rmc_core::transducer::{reflexive, SamplingStrategy};

fn reach(sampling: SamplingStrategy) -> RunConfig {
    RunConfig {
        mode: Mode::Reach,
        sampling,
        ..RunConfig::default()
    }
}

fn exp2() -> RunConfig {
    RunConfig {
        sampling: SamplingStrategy::Exponential(2),
        ..RunConfig::default()
    }
}

#[test]
fn token_ring_reach_is_exactly_the_reachable_set() {
    for s in [SamplingStrategy::Linear(1), SamplingStrategy::Linear(2)] {
        let (r, _) = run_keeping(&token_ring(), Some(&initial_token_ring()), &reach(s.clone()));
        let Outcome::ExactClosure(a) = &r.outcome else { panic!("{s:?}: {}", r.trace_text()) };
        assert!(ring_errors(a, 6).is_empty(), "{s:?}");
    }
}

#[test]
fn affine_closures_match_the_integers() {
    let signed: Vec<i64> = (-512..512).collect();
    for c in [1, 2, -1] {
        let (r, _) = run_keeping(&affine_relation(c), None, &exp2());
        let Outcome::ExactClosure(a) = &r.outcome else { panic!("x{c:+}: {}", r.trace_text()) };
        assert_eq!(affine_errors(a, c, 10, &signed), vec![], "x{c:+}");
    }
    let (r, _) = run_keeping(&affine_relation(1), None, &exp2());
    let unsigned: Vec<i64> = (0..1024).collect();
    assert_eq!(affine_errors(r.outcome.automaton().unwrap(), 1, 11, &unsigned), vec![]);
}

#[test]
fn mutated_token_ring_extrapolations_are_rejected() {
    let (r, e) = run_keeping(&token_ring(), Some(&initial_token_ring()), &reach(SamplingStrategy::Linear(1)));
    assert!(matches!(r.outcome, Outcome::ExactClosure(_)));
    let e = e.unwrap();
    let t0 = reflexive(&token_ring()).unwrap();
    assert!(engine_accepts(Mode::Reach, &t0, &e));
    let all = mutants(&e, 60, 1);
    assert!(all.len() >= 20, "{} mutants", all.len());
    for (name, m) in &all {
        assert!(!engine_accepts(Mode::Reach, &t0, m), "{name}");
    }
}

#[test]
fn mutated_affine_extrapolations_are_rejected() {
    let (r, e) = run_keeping(&affine_relation(1), None, &exp2());
    assert!(matches!(r.outcome, Outcome::ExactClosure(_)));
    let e = e.unwrap();
    let t0 = reflexive(&affine_relation(1)).unwrap();
    assert!(engine_accepts(Mode::Closure, &t0, &e));
    let all = mutants(&e, 60, 2);
    assert!(all.len() >= 20, "{} mutants", all.len());
    for (name, m) in &all {
        assert!(!engine_accepts(Mode::Closure, &t0, m), "{name}");
    }
}
