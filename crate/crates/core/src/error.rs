use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("not in the strong competition regime (alpha = {alpha}, beta = {beta}); need alpha > 1 and beta > 1")]
    NotStrongCompetition { alpha: f64, beta: f64 },

    #[error("boundary regime: `{name}` is exactly 1, the saddle collides with an axis equilibrium")]
    BoundaryRegime { name: &'static str },

    #[error("{branch} branch left its confining rectangle at ({x}, {y})")]
    ManifoldEscape { branch: &'static str, x: f64, y: f64 },

    #[error("{branch} branch integration stopped before covering the domain ({reason})")]
    BranchIncomplete { branch: &'static str, reason: String },

    #[error("x = {x} outside the curve domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("horizontal velocity vanishes at ({x}, {y}); slope undefined on the x-nullcline")]
    FCloseToZero { x: f64, y: f64 },

    #[error("adaptive quadrature on [{a}, {b}] exceeded its refinement limit")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("bisection oracle at x = {x} could not classify its bracket")]
    OracleStall { x: f64 },

    #[error("variational coefficient singular at x = {x} (1 - x - alpha s(x) = {denominator})")]
    SingularCoefficient { x: f64, denominator: f64 },

    #[error("integration step underflow at t = {t}")]
    StepUnderflow { t: f64 },
}

impl Error {
    /// True for errors caused by parameters outside the bistable regime.
    pub fn is_regime_violation(&self) -> bool {
        matches!(
            self,
            Error::NotStrongCompetition { .. } | Error::BoundaryRegime { .. }
        )
    }

    /// True for errors caused by malformed user input.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::InvalidConfig(_) | Error::OutOfDomain { .. }
        )
    }
}
