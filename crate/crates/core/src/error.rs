use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("function is not finite at eigenvalue {lambda}")]
    PoleAtEigenvalue { lambda: f64 },

    #[error("symbol is not finite at ({x}, {y})")]
    SymbolNotFinite { x: f64, y: f64 },

    #[error("function has a pole on the real line at {at}")]
    RealPole { at: f64 },

    #[error("no limit at infinity is registered for this function")]
    NoLimitAtInfinity,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(String::from(msg))
}
