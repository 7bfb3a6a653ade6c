use thiserror::Error;

/// Errors raised by the solver, the wave curves and the Godunov scheme.
///
/// Values are carried as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sound speed squared must lie in (0, 1), got {0}")]
    InvalidSoundSpeed(f64),

    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("superluminal velocity: vx^2 + vt^2 = {0}")]
    Superluminal(f64),

    #[error("unphysical conserved state: {0}")]
    UnphysicalState(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("rarefaction reaches vacuum at vx = {vx}")]
    VacuumLimit { vx: f64 },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("degenerate discontinuity: shock speed equals post-shock velocity {0}")]
    DegenerateContact(f64),

    #[error("wave curves do not intersect: {0}")]
    NoIntersection(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("cell {cell} left the physical state space: {reason}")]
    Positivity { cell: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
