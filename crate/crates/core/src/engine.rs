//! The sampling, detection, extrapolation and checking loop.

use std::fmt;
use std::time::{Duration, Instant};

use log::{debug, info};

use crate::automaton::Automaton;
use crate::correctness::{
    check_preciseness_closure_within, check_preciseness_reach_within, check_safety_closure, check_safety_reach, default_bound,
    CheckReport,
};
use crate::error::AutomataError;
use crate::extrapolate::{extrapolate, Extrapolation};
use crate::increments::{communication_equivalent_truncated, communication_stable, decompose, GrowDecomposition};
use crate::ops::normal_form;
use crate::transducer::{image_with, ComposeOptions, Powers, SamplingStrategy, Transducer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Extrapolate the powers `T_0^s`.
    Closure,
    /// Extrapolate the images `T_0^s(A)`.
    Reach,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Heuristics {
    /// Prune dominated subsets while determinizing products.
    pub dominance: bool,
    /// Double powers through `T_0^s ∘ T^s ∪ T_0^s`.
    pub nonreflexive: bool,
}

impl Default for Heuristics {
    fn default() -> Self {
        Self {
            dominance: true,
            nonreflexive: false,
        }
    }
}

impl Heuristics {
    pub fn none() -> Self {
        Self {
            dominance: false,
            nonreflexive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub sampling: SamplingStrategy,
    pub max_samples: usize,
    pub max_states: usize,
    pub max_duration: Duration,
    /// The synchronization bound is this multiple of the maximal increment.
    pub sync_multiplier: i64,
    pub heuristics: Heuristics,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Closure,
            sampling: SamplingStrategy::Linear(1),
            max_samples: 12,
            max_states: 50_000,
            max_duration: Duration::from_secs(300),
            sync_multiplier: 2,
            heuristics: Heuristics::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), AutomataError> {
        let bad = |s: &str| Err(AutomataError::BadConfig(s.to_string()));
        if self.max_samples == 0 || self.max_states == 0 || self.max_duration.is_zero() {
            return bad("resource caps must be positive");
        }
        if self.sync_multiplier < 1 {
            return bad("synchronization multiplier must be at least 1");
        }
        self.sampling.validate().map_err(AutomataError::BadConfig)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Safety and preciseness both hold.
    ExactClosure(Automaton),
    /// Safety holds; preciseness could not be established.
    SafeOverApproximation(Automaton),
    GaveUp(String),
}

impl Outcome {
    pub fn automaton(&self) -> Option<&Automaton> {
        match self {
            Outcome::ExactClosure(a) | Outcome::SafeOverApproximation(a) => Some(a),
            Outcome::GaveUp(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::ExactClosure(_) => "exact",
            Outcome::SafeOverApproximation(_) => "safe-over-approximation",
            Outcome::GaveUp(_) => "gave-up",
        }
    }
}

/// What happened after one new sample.
#[derive(Debug, Clone)]
pub struct Iteration {
    pub sample: u64,
    pub size: usize,
    /// Sample indices of the window that grew incrementally, if any.
    pub window: Option<Vec<u64>>,
    pub last: Option<Automaton>,
    pub grow: Option<GrowDecomposition>,
    pub extrapolation: Option<Extrapolation>,
    pub safety: Option<CheckReport>,
    pub preciseness: Vec<CheckReport>,
    /// A preciseness check stopped at the state limit.
    pub preciseness_capped: bool,
}

impl fmt::Display for Iteration {
    /// One line per fact, without timings, so traces of equal runs are equal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sample {} size {}", self.sample, self.size)?;
        if let Some(w) = &self.window {
            writeln!(f, "  window {w:?}")?;
        }
        if let Some(g) = &self.grow {
            writeln!(f, "  {g}")?;
        }
        if let Some(e) = &self.extrapolation {
            writeln!(f, "  extrapolation states {} added {}", e.plain.num_states(), e.added.len())?;
        }
        if let Some(r) = &self.safety {
            writeln!(f, "  safety {}", r.verdict)?;
        }
        for r in &self.preciseness {
            writeln!(f, "  preciseness bound {} {}", r.bound.unwrap_or(0), r.verdict)?;
        }
        if self.preciseness_capped {
            writeln!(f, "  preciseness state limit")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EngineResult {
    pub outcome: Outcome,
    pub trace: Vec<Iteration>,
    /// Largest sample or power computed.
    pub peak: usize,
    pub elapsed: Duration,
}

impl EngineResult {
    /// The trace as text, stable across identical runs.
    pub fn trace_text(&self) -> String {
        let mut s: String = self.trace.iter().map(|i| i.to_string()).collect();
        s.push_str(&format!("outcome {}\npeak {}\n", self.outcome.name(), self.peak));
        if let Outcome::GaveUp(r) = &self.outcome {
            s.push_str(&format!("reason {r}\n"));
        }
        if let Some(a) = self.outcome.automaton() {
            s.push_str(&format!("states {}\n", a.num_states()));
        }
        s
    }
}

pub fn run(t: &Transducer, a: Option<&Automaton>, cfg: &RunConfig) -> Result<EngineResult, AutomataError> {
    run_with(t, a, cfg, &mut |_| {})
}

/// Like [`run`], calling `hook` after every sample.
pub fn run_with(
    t: &Transducer,
    a: Option<&Automaton>,
    cfg: &RunConfig,
    hook: &mut dyn FnMut(&Iteration),
) -> Result<EngineResult, AutomataError> {
    cfg.validate()?;
    match (cfg.mode, a) {
        (Mode::Closure, Some(_)) => return Err(AutomataError::BadConfig("closure mode takes no initial set".into())),
        (Mode::Reach, None) => return Err(AutomataError::BadConfig("reach mode needs an initial set".into())),
        _ => {}
    }
    let start = Instant::now();
    let opts = ComposeOptions {
        dominance: cfg.heuristics.dominance,
    };
    let mut powers = Powers::new(t, cfg.heuristics.nonreflexive, opts)?;
    let t0 = powers.reflexive_base().clone();
    // relation between consecutive samples, for reach preciseness
    let step = match cfg.sampling {
        SamplingStrategy::Linear(k) => powers.power(k)?,
        _ => t0.clone(),
    };
    let mut current = match a {
        Some(a) => Some((0u64, normal_form(a)?)),
        None => None,
    };
    let mut samples: Vec<Automaton> = Vec::new();
    let mut indices: Vec<u64> = Vec::new();
    let mut trace = Vec::new();
    let mut peak = 0;
    let mut fallback: Option<Automaton> = None;
    let finish = |outcome: Outcome, trace: Vec<Iteration>, peak: usize| EngineResult {
        outcome,
        trace,
        peak,
        elapsed: start.elapsed(),
    };
    for k in 0..cfg.max_samples {
        if start.elapsed() > cfg.max_duration {
            return Ok(finish(give_up(fallback, "time limit reached"), trace, peak));
        }
        let Some(s) = cfg.sampling.nth(k) else {
            return Ok(finish(give_up(fallback, "sampling list exhausted"), trace, peak));
        };
        let sample = match &mut current {
            None => {
                let p = powers.power(s)?.into_automaton();
                peak = peak.max(powers.peak());
                p
            }
            Some((at, cur)) => {
                let rel = powers.power(s - *at)?;
                let next = image_with(&rel, cur, opts)?;
                *at = s;
                *cur = next.clone();
                peak = peak.max(next.num_states());
                next
            }
        };
        info!("sample {s}: {} states", sample.num_states());
        if sample.num_states() > cfg.max_states {
            return Ok(finish(give_up(fallback, "state limit reached"), trace, peak));
        }
        samples.push(sample);
        indices.push(s);
        let mut it = Iteration {
            sample: s,
            size: samples.last().map_or(0, Automaton::num_states),
            window: None,
            last: None,
            grow: None,
            extrapolation: None,
            safety: None,
            preciseness: Vec::new(),
            preciseness_capped: false,
        };
        let Some((w, g)) = growing_window(&samples) else {
            hook(&it);
            trace.push(it);
            continue;
        };
        let last = samples.last().expect("nonempty").clone();
        it.window = Some(indices[w..].to_vec());
        debug!("window {:?}: {g}", &indices[w..]);
        let e = extrapolate(&last, &g)?;
        let safety = match cfg.mode {
            Mode::Closure => check_safety_closure(&Transducer::new(e.plain.clone())?)?,
            Mode::Reach => check_safety_reach(&t0, &e.plain)?,
        };
        info!("sample {s}: safety {}", safety.verdict);
        let safe = safety.holds();
        it.last = Some(last);
        it.grow = Some(g);
        it.safety = Some(safety);
        let mut exact = None;
        let mut capped = false;
        if safe {
            let mut m = default_bound(&e, cfg.sync_multiplier);
            for _ in 0..2 {
                let r = match cfg.mode {
                    Mode::Closure => check_preciseness_closure_within(&e, m, cfg.max_states),
                    Mode::Reach => check_preciseness_reach_within(&step, &e, m, cfg.max_states),
                };
                let r = match r {
                    Ok(r) => r,
                    Err(AutomataError::StateLimit(_)) => {
                        info!("sample {s}: preciseness with bound {m} exceeds the state limit");
                        capped = true;
                        it.preciseness_capped = true;
                        break;
                    }
                    Err(err) => return Err(err),
                };
                info!("sample {s}: preciseness with bound {m}: {}", r.verdict);
                let holds = r.holds();
                it.preciseness.push(r);
                if holds {
                    exact = Some(true);
                    break;
                }
                m *= 2;
            }
            exact.get_or_insert(false);
        }
        let minimized = if safe { Some(e.minimized()?) } else { None };
        it.extrapolation = Some(e);
        hook(&it);
        trace.push(it);
        match (exact, minimized) {
            (Some(true), Some(min)) => return Ok(finish(Outcome::ExactClosure(min), trace, peak)),
            (Some(false), Some(min)) if cfg.mode == Mode::Reach => {
                return Ok(finish(Outcome::SafeOverApproximation(min), trace, peak))
            }
            (Some(false), Some(min)) => {
                fallback.get_or_insert(min);
            }
            _ => {}
        }
        if capped {
            return Ok(finish(give_up(fallback, "state limit reached in preciseness check"), trace, peak));
        }
    }
    Ok(finish(give_up(fallback, "sample limit reached"), trace, peak))
}

fn give_up(fallback: Option<Automaton>, reason: &str) -> Outcome {
    match fallback {
        Some(a) => Outcome::SafeOverApproximation(a),
        None => Outcome::GaveUp(reason.to_string()),
    }
}

/// Longest suffix of at least three samples that grows incrementally, whose
/// last two heads are communication stable and whose first two increments
/// are communication equivalent.
fn growing_window(samples: &[Automaton]) -> Option<(usize, GrowDecomposition)> {
    if samples.len() < 3 {
        return None;
    }
    let n = samples.len();
    let last = &samples[n - 1];
    (0..=n - 3).find_map(|w| {
        let g = decompose(&samples[w..]).ok()?;
        let ok = g.num_increments() >= 2
            && communication_stable(&samples[n - 2], last, &g)
            && communication_equivalent_truncated(last, &g, 0, 1);
        ok.then_some((w, g))
    })
}
