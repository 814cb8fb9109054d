use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root finder did not converge (best residual {best_residual:e})")]
    NonConvergence { best_residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: denominator {denominator:e} below guard")]
    Pole { denominator: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("bracketing failed after {steps} steps: {reason}")]
    Bracket { steps: usize, reason: String },

    #[error("no equivariance witness for sigma={sigma:?}, xi={xi:?}")]
    NoEquivarianceWitness { sigma: Vec<usize>, xi: Vec<String> },

    #[error("search budget exceeded: {required} > {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("degenerate target (colliding roots within {tol:e}); retry with another point")]
    DegenerateTarget { tol: f64 },

    #[error("claimed preimage failed forward check (residual {residual:e})")]
    InconsistentPreimage { residual: f64 },

    #[error("patch precondition violated: {0}")]
    Patch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
