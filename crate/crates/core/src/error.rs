use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or checking a lattice.
///
/// Variants split into two families: input/domain errors, which the caller
/// caused, and [`Error::TheoremViolation`] / [`Error::Internal`], which mean
/// the implementation disagrees with itself and should never be seen.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} is too large for table-based arithmetic")]
    ModulusTooLarge(u64),
    #[error("field elements over different moduli ({0} and {1})")]
    ModulusMismatch(u32, u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),

    #[error("cubic has leading coefficient 0 (degree below three)")]
    DegreeTooLow,
    #[error("cubic is not square-free")]
    NotSquareFree,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("invalid curve spec `{0}`: {1}")]
    BadCurveSpec(String, String),

    #[error("place index {0} out of range (n = {1})")]
    PlaceIndex(usize, usize),
    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(i64),
    #[error("vector has length {0}, expected {1}")]
    LengthMismatch(usize, usize),
    #[error("divisor is not principal")]
    NotPrincipal,
    #[error("torsion word needs k = order of the point ({order}), got {k}")]
    TorsionOrder { k: i64, order: usize },

    #[error("lattice needs at least {need} places, curve has {n}")]
    TooFewPlaces { n: usize, need: usize },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("vector is already minimal")]
    AlreadyMinimal,
    #[error("vector is not a generator of the form P+Q-R-Q_inf")]
    NotAGenerator,
    #[error("no eligible auxiliary place (needs n >= 5)")]
    NoEligiblePlace,
    #[error("formula needs epsilon | n (n = {n}, epsilon = {epsilon})")]
    EpsilonDivisibility { n: usize, epsilon: usize },
    #[error("input is not in the span of A_(n-1): coordinate sum {0}")]
    NotInSpan(f64),
    #[error("bad prime range {0}..={1} (need 3 <= p_min <= p_max)")]
    BadRange(u64, u64),
    #[error("malformed matrix text: {0}")]
    BadMatrix(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("theorem violation ({theorem}): {detail}")]
    TheoremViolation { theorem: &'static str, detail: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for the failures that indicate a bug rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation { .. } | Error::Internal(_))
    }

    pub(crate) fn violation(theorem: &'static str, detail: impl Into<String>) -> Self {
        Error::TheoremViolation {
            theorem,
            detail: detail.into(),
        }
    }
}
