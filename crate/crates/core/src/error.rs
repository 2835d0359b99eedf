use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("division system inconsistent: {0}")]
    SingularDivision(String),
    #[error("monomial basis is degenerate for this Hamiltonian")]
    DegenerateBasis,
    #[error("line lies inside the degeneracy locus: {0}")]
    LineInLocus(String),
    #[error("degenerate Hamiltonian: {0}")]
    DegenerateHamiltonian(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("path passes within {distance:.3e} of a singular point near ({re:.6}, {im:.6})")]
    PathTooClose { re: f64, im: f64, distance: f64 },
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("solution vanishes on the path near ({re:.6}, {im:.6})")]
    ZeroOnPath { re: f64, im: f64 },
    #[error("combination vanishes on the boundary near ({re:.6}, {im:.6})")]
    ZeroOnBoundary { re: f64, im: f64 },
    #[error("winding number {0} is not close to an integer")]
    NonIntegerWinding(f64),
    #[error("monodromy is not quasiunipotent; eigenvalues {0:?}")]
    NotQuasiunipotent(Vec<(f64, f64)>),
    #[error("oval trace did not close: {0}")]
    NotClosed(String),
    #[error("seed point is not on the level curve")]
    SeedOffCurve,
    #[error("level {0} is within tolerance of a critical value")]
    CriticalLevel(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Process exit status used by the command line tool, one per category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::UnknownVariable(_) | Error::InvalidInput(_) => 2,
            Error::NoSolution | Error::SingularDivision(_) | Error::DegenerateBasis => 3,
            Error::LineInLocus(_) | Error::DegenerateHamiltonian(_) => 4,
            Error::PathTooClose { .. }
            | Error::ToleranceNotMet(_)
            | Error::ZeroOnPath { .. }
            | Error::ZeroOnBoundary { .. }
            | Error::NonIntegerWinding(_) => 5,
            Error::NotQuasiunipotent(_) => 6,
            Error::NotClosed(_) | Error::SeedOffCurve | Error::CriticalLevel(_) => 7,
            Error::Unsupported(_) => 8,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
