use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("invalid symbol label `{0}`")]
    BadLabel(String),
    #[error("duplicate symbol label `{0}`")]
    DuplicateLabel(String),
    #[error("operands are defined over different alphabets")]
    AlphabetMismatch,
    #[error("operands have different acceptance kinds")]
    KindMismatch,
    #[error("track {track} does not exist in an arity-{arity} alphabet")]
    BadTrackIndex { track: usize, arity: usize },
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not weak")]
    NotWeak,
    #[error("determinized automaton is not inherently weak")]
    NotInherentlyWeak,
    #[error("operation requires a finite-word automaton")]
    NotFiniteWord,
    #[error("operation requires a weak Büchi automaton")]
    NotOmega,
    #[error("symbol `{0}` is not a well-formed extended symbol")]
    MalformedExtendedSymbol(String),
    #[error("counter dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("counter {index} does not exist in dimension {dimension}")]
    BadCounterIndex { index: usize, dimension: usize },
    #[error("extrapolation needs at least two increments, found {0}")]
    TooFewIncrements(usize),
    #[error("sequence stops growing incrementally at step {0}")]
    NotGrowing(usize),
    #[error("automaton is not in canonical minimal form")]
    NotCanonical,
    #[error("construction exceeded the limit of {0} states")]
    StateLimit(usize),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}
