use thiserror::Error;

/// Byte range into the source text.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, serde::Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: found {found}, expected one of {expected:?}")]
    Syntax { offset: usize, found: String, expected: Vec<String> },
    #[error("power exponent at offset {offset} is not an integer")]
    NonIntegerExponent { offset: usize },
    #[error("argument of exp at offset {offset} is not a polynomial in z: {reason}")]
    ExpArgument { offset: usize, reason: String },
    #[error("exp argument at offset {offset} has nonzero constant term {constant}; e^c is not representable")]
    NonzeroConstantFrequency { offset: usize, constant: String },
    #[error("empty expression")]
    Empty,
    #[error("division at offset {offset} by an expression that is not a unit")]
    NonUnitDivisor { offset: usize },
    #[error("expression is not monic in Y: {0}")]
    NotMonic(String),
    #[error("unexpected variable {name} at offset {offset} in this context")]
    UnexpectedVariable { name: String, offset: usize },
    #[error("expected a constant, found {0}")]
    NotConstant(String),
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::NonIntegerExponent { offset }
            | ParseError::ExpArgument { offset, .. }
            | ParseError::NonzeroConstantFrequency { offset, .. }
            | ParseError::NonUnitDivisor { offset }
            | ParseError::UnexpectedVariable { offset, .. } => Some(*offset),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SymError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("invalid frequency {0}: must be nonzero with zero constant term")]
    InvalidFrequency(String),
    #[error("basis frequencies must be sorted by descending degree")]
    UnsortedBasis,
    #[error("not divisible; remainder witness {remainder}")]
    NotDivisible { remainder: String },
    #[error("input is a monomial; its radical is a unit")]
    MonomialInput,
    #[error("zero polynomial not allowed here")]
    ZeroInput,
    #[error("basis is multiplicatively dependent: {0:?}")]
    DependentBasis(Vec<String>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("separation search exhausted for variable {var} (bound {bound}); rejected t = {rejected:?}")]
    SearchExhausted { var: usize, bound: i64, rejected: Vec<String> },
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("no peelable variable: discriminant {0} is not monomial in any single variable with a valid separation")]
    NoPeelableVariable(String),
    #[error("internal recomposition mismatch: {0}")]
    RecompositionMismatch(String),
    #[error("input is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("malformed serialized form: {0}")]
    Malformed(String),
}
