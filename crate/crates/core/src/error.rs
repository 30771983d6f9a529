use thiserror::Error;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: bad syntax, wrong shapes, unreadable files.
    Input,
    /// The input is well formed but a mathematical check failed.
    Verification,
    /// Two independent computations disagreed on valid input.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt of non-positive rational {0}")]
    SqrtNonPositive(String),
    #[error("overflow while evaluating scalar expression")]
    Overflow,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ill-conditioned lattice basis: {0}")]
    IllConditioned(String),
    #[error("power iteration did not converge for basis element {index} after {iterations} iterations")]
    NonConvergence { index: usize, iterations: usize },
    #[error("input is not a valid {what}: {detail}")]
    InvalidStructure { what: &'static str, detail: String },
    #[error("algebra is not commutative: witness {0:?}")]
    NonCommutative((usize, usize, usize)),
    #[error("random combination has repeated eigenvalues after {attempts} attempts")]
    DegenerateCombination { attempts: usize },
    #[error("character homomorphism check failed: {0}")]
    HomomorphismCheckFailed(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("rank {rank} exceeds the guard of {limit}")]
    RankGuard { rank: usize, limit: usize },
    #[error("quotient depends on the chosen representative: {0}")]
    RepresentativeMismatch(String),
    #[error("structure-constant formulas disagree at {witness:?}: {a} vs {b}")]
    FormulaMismatch {
        witness: (usize, usize, usize),
        a: String,
        b: String,
    },
    #[error("modular data does not reproduce the fusion rules: {0}")]
    VerlindeMismatch(String),
    #[error("isomorphism check failed: {0}")]
    IsomorphismFailure(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("character degree is not integral: {0}")]
    DegreeNotIntegral(String),
    #[error("center pair check failed: {0}")]
    CenterPair(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Syntax { .. }
            | Error::DivisionByZero
            | Error::SqrtNonPositive(_)
            | Error::Overflow
            | Error::Malformed(_)
            | Error::Io { .. }
            | Error::Json(_)
            | Error::RankGuard { .. } => ErrorClass::Input,
            Error::FormulaMismatch { .. }
            | Error::HomomorphismCheckFailed(_)
            | Error::Consistency(_)
            | Error::DegenerateCombination { .. }
            | Error::NonConvergence { .. } => ErrorClass::Internal,
            _ => ErrorClass::Verification,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
