//! Line-oriented text format and DOT export.
//!
//! ```text
//! # comment
//! kind dfa|nfa|weak-buchi|counter
//! arity 2
//! alphabet 0/0 0/1 1/0 1/1
//! states 3
//! initial 0
//! accepting 0 2
//! trans 0 0/1 1
//! ```
//!
//! The alphabet lists every tuple in symbol order. Counter automata add
//! `dimension n`, an optional `acceptance finite|weak-buchi` (finite by
//! default) and a `+c1,...,cn` field on every transition. A token starting
//! with `#` starts a comment, so labels must not start with `#`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{Automaton, Kind, StateId};
use crate::counter::CounterAutomaton;
use crate::extrapolate::{Extrapolation, Target};
use crate::increments::{GrowDecomposition, Part};
use crate::transducer::Transducer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Automaton(Automaton),
    Counter(CounterAutomaton),
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Default)]
struct Header {
    kind: Option<(usize, String)>,
    arity: Option<usize>,
    alphabet: Option<Alphabet>,
    states: Option<usize>,
    dimension: Option<usize>,
    acceptance: Option<Kind>,
    initial: Vec<StateId>,
    accepting: Vec<StateId>,
    trans: Vec<(usize, StateId, Symbol, StateId, Vec<u32>)>,
    seen: BTreeMap<String, usize>,
}

fn number(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .or_else(|_| err(line, format!("expected {what}, found `{tok}`")))
}

fn state(line: usize, tok: &str, h: &Header) -> Result<StateId, ParseError> {
    let Some(n) = h.states else {
        return err(line, "`states` must come first");
    };
    let q = number(line, tok, "a state")?;
    if q >= n {
        return err(line, format!("state {q} out of range (states {n})"));
    }
    Ok(q)
}

/// Per-track labels in order of first appearance, checked against the full
/// product in symbol order.
fn alphabet(line: usize, arity: usize, toks: &[&str]) -> Result<Alphabet, ParseError> {
    let mut tracks: Vec<Vec<String>> = vec![Vec::new(); arity];
    for tok in toks {
        let parts: Vec<&str> = tok.split('/').collect();
        if parts.len() != arity {
            return err(line, format!("symbol `{tok}` has {} components, arity is {arity}", parts.len()));
        }
        for (t, p) in tracks.iter_mut().zip(parts) {
            if !t.iter().any(|l| l == p) {
                t.push(p.to_string());
            }
        }
    }
    let alpha = Alphabet::with_tracks(tracks).or_else(|e| err(line, e.to_string()))?;
    let listed: Vec<Symbol> = toks.iter().filter_map(|t| alpha.lookup(t)).collect();
    if listed.len() != alpha.size() || listed.iter().zip(alpha.symbols()).any(|(a, b)| *a != b) {
        return err(line, "alphabet must list every tuple once, in lexicographic order");
    }
    Ok(alpha)
}

fn header(text: &str) -> Result<Header, ParseError> {
    let mut h = Header::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().take_while(|t| !t.starts_with('#')).collect();
        let Some((&dir, args)) = toks.split_first() else { continue };
        if dir != "trans" {
            if let Some(prev) = h.seen.insert(dir.to_string(), line) {
                return err(line, format!("duplicate `{dir}` (first on line {prev})"));
            }
        }
        if dir != "kind" && h.kind.is_none() {
            return err(line, "`kind` must come first");
        }
        let one = || match args {
            [x] => Ok(*x),
            _ => err(line, format!("`{dir}` takes one argument")),
        };
        match dir {
            "kind" => {
                let k = match args {
                    [k @ ("dfa" | "nfa" | "weak-buchi" | "counter")] => k.to_string(),
                    _ => return err(line, "kind must be dfa, nfa, weak-buchi or counter"),
                };
                h.kind = Some((line, k));
            }
            "arity" => {
                if h.alphabet.is_some() {
                    return err(line, "`arity` must precede `alphabet`");
                }
                let n = number(line, one()?, "an arity")?;
                if n == 0 {
                    return err(line, "arity must be positive");
                }
                h.arity = Some(n);
            }
            "alphabet" => {
                if args.is_empty() {
                    return err(line, "alphabet must contain at least one symbol");
                }
                h.alphabet = Some(alphabet(line, h.arity.unwrap_or(1), args)?);
            }
            "states" => h.states = Some(number(line, one()?, "a state count")?),
            "dimension" => {
                if h.kind.as_ref().is_some_and(|k| k.1 != "counter") {
                    return err(line, "`dimension` is only allowed for kind counter");
                }
                let n = number(line, one()?, "a dimension")?;
                if n == 0 {
                    return err(line, "dimension must be positive");
                }
                h.dimension = Some(n);
            }
            "acceptance" => {
                if h.kind.as_ref().is_some_and(|k| k.1 != "counter") {
                    return err(line, "`acceptance` is only allowed for kind counter");
                }
                h.acceptance = Some(match one()? {
                    "finite" => Kind::FiniteWord,
                    "weak-buchi" => Kind::WeakBuchi,
                    x => return err(line, format!("unknown acceptance `{x}`")),
                });
            }
            "initial" => {
                for t in args {
                    h.initial.push(state(line, t, &h)?);
                }
            }
            "accepting" => {
                for t in args {
                    h.accepting.push(state(line, t, &h)?);
                }
            }
            "trans" => {
                let counter = h.kind.as_ref().is_some_and(|k| k.1 == "counter");
                let expected = if counter { 4 } else { 3 };
                if args.len() != expected {
                    return err(line, format!("`trans` takes {expected} fields"));
                }
                let Some(alpha) = &h.alphabet else {
                    return err(line, "`alphabet` must precede transitions");
                };
                let from = state(line, args[0], &h)?;
                let Some(sym) = alpha.lookup(args[1]) else {
                    return err(line, format!("unknown symbol `{}`", args[1]));
                };
                let to = state(line, args[2], &h)?;
                let mut v = Vec::new();
                if counter {
                    let Some(dim) = h.dimension else {
                        return err(line, "`dimension` must precede transitions");
                    };
                    let Some(body) = args[3].strip_prefix('+') else {
                        return err(line, "increments must be written +c1,...,cn");
                    };
                    for c in body.split(',') {
                        v.push(
                            c.parse::<u32>()
                                .or_else(|_| err(line, format!("bad increment `{c}`")))?,
                        );
                    }
                    if v.len() != dim {
                        return err(line, format!("{} increments for dimension {dim}", v.len()));
                    }
                }
                h.trans.push((line, from, sym, to, v));
            }
            _ => return err(line, format!("unknown directive `{dir}`")),
        }
    }
    let last = text.lines().count().max(1);
    if h.kind.is_none() {
        return err(last, "missing `kind`");
    }
    if h.alphabet.is_none() {
        return err(last, "missing `alphabet`");
    }
    if h.states.is_none() {
        return err(last, "missing `states`");
    }
    Ok(h)
}

pub fn parse(text: &str) -> Result<Model, ParseError> {
    let h = header(text)?;
    let (kind_line, kind) = h.kind.clone().expect("checked");
    let alpha = h.alphabet.clone().expect("checked");
    let n = h.states.expect("checked");
    if kind == "counter" {
        let Some(dim) = h.dimension else {
            return err(kind_line, "kind counter needs `dimension`");
        };
        let mut c = CounterAutomaton::new(alpha, h.acceptance.unwrap_or(Kind::FiniteWord), dim);
        let acc = accepting_mask(n, &h.accepting);
        for q in 0..n {
            c.add_state(acc[q]);
        }
        for &q in &h.initial {
            c.add_initial(q);
        }
        for (_, from, sym, to, v) in &h.trans {
            c.add_transition(*from, *sym, v, *to);
        }
        return Ok(Model::Counter(c));
    }
    let k = if kind == "weak-buchi" { Kind::WeakBuchi } else { Kind::FiniteWord };
    let mut a = Automaton::new(alpha, k);
    let acc = accepting_mask(n, &h.accepting);
    for q in 0..n {
        a.add_state(acc[q]);
    }
    for &q in &h.initial {
        a.add_initial(q);
    }
    for (line, from, sym, to, _) in &h.trans {
        if kind == "dfa" && a.successor(*from, *sym).is_some_and(|r| r != *to) {
            return err(*line, "second transition on the same symbol in a dfa");
        }
        a.add_transition(*from, *sym, *to);
    }
    if kind == "dfa" && a.initial().len() > 1 {
        return err(kind_line, "a dfa has at most one initial state");
    }
    Ok(Model::Automaton(a))
}

fn accepting_mask(n: usize, accepting: &[StateId]) -> Vec<bool> {
    let mut acc = vec![false; n];
    for &q in accepting {
        acc[q] = true;
    }
    acc
}

pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    match parse(text)? {
        Model::Automaton(a) => Ok(a),
        Model::Counter(_) => err(1, "expected an automaton, found a counter automaton"),
    }
}

pub fn parse_transducer(text: &str) -> Result<Transducer, ParseError> {
    let a = parse_automaton(text)?;
    let line = text
        .lines()
        .position(|l| l.split_whitespace().next() == Some("alphabet"))
        .map_or(1, |i| i + 1);
    Transducer::new(a).or_else(|_| err(line, "a transducer needs arity 2 with equal tracks"))
}

pub fn parse_counter(text: &str) -> Result<CounterAutomaton, ParseError> {
    match parse(text)? {
        Model::Counter(c) => Ok(c),
        Model::Automaton(_) => err(1, "expected a counter automaton"),
    }
}

fn write_header(out: &mut String, kind: &str, alpha: &Alphabet, n: usize) {
    let _ = writeln!(out, "kind {kind}");
    let _ = writeln!(out, "arity {}", alpha.arity());
    let labels: Vec<String> = alpha.symbols().map(|s| alpha.label(s)).collect();
    let _ = writeln!(out, "alphabet {}", labels.join(" "));
    let _ = writeln!(out, "states {n}");
}

fn write_list(out: &mut String, dir: &str, items: impl Iterator<Item = StateId>) {
    out.push_str(dir);
    for q in items {
        let _ = write!(out, " {q}");
    }
    out.push('\n');
}

/// Text form; `parse_automaton(&emit(a)) == a`.
pub fn emit(a: &Automaton) -> String {
    let kind = match a.kind() {
        Kind::WeakBuchi => "weak-buchi",
        Kind::FiniteWord if a.is_deterministic() => "dfa",
        Kind::FiniteWord => "nfa",
    };
    let alpha = a.alphabet();
    let mut out = String::new();
    write_header(&mut out, kind, alpha, a.num_states());
    write_list(&mut out, "initial", a.initial().iter().copied());
    write_list(&mut out, "accepting", a.accepting_states());
    for (q, s, r) in a.edges() {
        let _ = writeln!(out, "trans {q} {} {r}", alpha.label(s));
    }
    out
}

pub fn emit_counter(c: &CounterAutomaton) -> String {
    let alpha = c.base();
    let mut out = String::new();
    write_header(&mut out, "counter", alpha, c.num_states());
    let _ = writeln!(out, "dimension {}", c.dimension());
    if c.kind() == Kind::WeakBuchi {
        out.push_str("acceptance weak-buchi\n");
    }
    write_list(&mut out, "initial", c.initial().iter().copied());
    write_list(&mut out, "accepting", (0..c.num_states()).filter(|&q| c.is_accepting(q)));
    for (q, s, v, r) in c.edges() {
        let inc: Vec<String> = v.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "trans {q} {} {r} +{}", alpha.label(s), inc.join(","));
    }
    out
}

/// One line per state with its part, then the diameter.
pub fn emit_decomposition(g: &GrowDecomposition) -> String {
    let mut out = String::new();
    for (q, p) in g.parts.iter().enumerate() {
        let _ = match p {
            Part::Head => writeln!(out, "state {q} head"),
            Part::Increment(l, m) => writeln!(out, "state {q} increment {l} {m}"),
            Part::TailEnd => writeln!(out, "state {q} tail-end"),
        };
    }
    let _ = writeln!(out, "diameter {}", g.diameter);
    out
}

/// Added transitions as `added source symbol target +simulated part`.
pub fn emit_provenance(e: &Extrapolation) -> String {
    let alpha = e.counted.base();
    let mut out = String::new();
    for t in &e.added {
        let part = match t.target {
            Target::Increment(l, m) => format!("increment {l} {m}"),
            Target::Copy(m) => format!("copy {m}"),
        };
        let _ = writeln!(out, "added {} {} {} +{} {part}", t.source, alpha.label(t.symbol), t.to, t.simulated);
    }
    for (c, q) in &e.copy_of {
        let _ = writeln!(out, "copy {c} of {q}");
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Edge labels grouped per state pair.
fn dot_body<'a>(
    out: &mut String,
    n: usize,
    initial: &[StateId],
    accepting: impl Fn(StateId) -> bool,
    node_attrs: impl Fn(StateId) -> String,
    edges: impl Iterator<Item = (StateId, String, StateId)> + 'a,
) {
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, q) in initial.iter().enumerate() {
        let _ = writeln!(out, "  init{i} [shape=point];\n  init{i} -> {q};");
    }
    for q in 0..n {
        let shape = if accepting(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {q} [shape={shape}{}];", node_attrs(q));
    }
    let mut grouped: BTreeMap<(StateId, StateId), Vec<String>> = BTreeMap::new();
    for (q, l, r) in edges {
        grouped.entry((q, r)).or_default().push(l);
    }
    for ((q, r), ls) in grouped {
        let _ = writeln!(out, "  {q} -> {r} [label={}];", quote(&ls.join(", ")));
    }
}

/// DOT graph. Weak automata get one dashed cluster per accepting cycle.
pub fn dot(a: &Automaton, name: &str) -> String {
    let alpha = a.alphabet();
    let mut out = format!("digraph {} {{\n", quote(name));
    dot_body(
        &mut out,
        a.num_states(),
        a.initial(),
        |q| a.is_accepting(q),
        |_| String::new(),
        a.edges().map(|(q, s, r)| (q, alpha.label(s), r)),
    );
    if a.kind() == Kind::WeakBuchi {
        let sccs = a.sccs();
        for (c, members) in sccs.members().iter().enumerate() {
            if sccs.nontrivial[c] && members.iter().any(|&q| a.is_accepting(q)) {
                let ids: Vec<String> = members.iter().map(|q| q.to_string()).collect();
                let _ = writeln!(
                    out,
                    "  subgraph cluster_{c} {{ label=\"accepting\"; style=dashed; {}; }}",
                    ids.join("; ")
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn dot_counter(c: &CounterAutomaton, name: &str) -> String {
    let alpha = c.base();
    let mut out = format!("digraph {} {{\n", quote(name));
    dot_body(
        &mut out,
        c.num_states(),
        c.initial(),
        |q| c.is_accepting(q),
        |_| String::new(),
        c.edges().map(|(q, s, v, r)| {
            let inc: Vec<String> = v.iter().map(u32::to_string).collect();
            (q, format!("{} +{}", alpha.label(s), inc.join(",")), r)
        }),
    );
    out.push_str("}\n");
    out
}

const PALETTE: [&str; 6] = ["lightgoldenrod", "palegreen", "lightpink", "lightcyan", "plum", "wheat"];

/// States filled by part: head light blue, tail-end grey, increments from a palette.
pub fn dot_decomposition(a: &Automaton, g: &GrowDecomposition, name: &str) -> String {
    let alpha = a.alphabet();
    let mut out = format!("digraph {} {{\n", quote(name));
    dot_body(
        &mut out,
        a.num_states(),
        a.initial(),
        |q| a.is_accepting(q),
        |q| {
            let (color, tip) = match g.parts.get(q) {
                Some(Part::Head) => ("lightblue", "head".to_string()),
                Some(Part::Increment(l, m)) => (PALETTE[l % PALETTE.len()], format!("increment {l} {m}")),
                _ => ("lightgrey", "tail-end".to_string()),
            };
            format!(", style=filled, fillcolor={color}, tooltip={}", quote(&tip))
        },
        a.edges().map(|(q, s, r)| (q, alpha.label(s), r)),
    );
    out.push_str("}\n");
    out
}
