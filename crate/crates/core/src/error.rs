use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the analyses. Block positions are reported 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("block ({i},{j}) is {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    BlockShape {
        i: usize,
        j: usize,
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },

    #[error("index count mismatch: {0} vs {1}")]
    IndexCountMismatch(usize, usize),

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not normal (residual {0:.3e})")]
    NotNormal(f64),

    #[error("subspace family does not reduce the family: {0}")]
    NotReducing(String),

    #[error("no invariant complement available: {0}")]
    NoComplement(String),

    #[error("invariant-subspace lattice of diagonal block {index} is not a known chain")]
    UnknownLattice { index: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("not a solution of the coupled system (residual {0:.3e})")]
    NotASolution(f64),

    #[error("hypotheses unmet: {0}")]
    Hypotheses(String),

    #[error("invalid fixture parameters: {0}")]
    InvalidFixture(String),

    #[error("parse error: {0}")]
    Parse(String),
}
