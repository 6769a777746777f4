use thiserror::Error;

pub type Result<T> = core::result::Result<T, CbsError>;

/// Failure modes shared by every physics and numerics routine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CbsError {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("invalid input: {0}")]
    InputDomain(&'static str),

    /// The saturation parameter is too large for second-order perturbation theory.
    #[error("saturation s = {s} exceeds the perturbative limit {max_s}")]
    PerturbationBroken { s: f64, max_s: f64 },

    /// A denominator of the enhancement factor is not positive.
    #[error("enhancement factor undefined: denominator {denominator} <= 0")]
    NonPositiveDenominator { denominator: f64 },

    /// A frequency grid does not cover the bulk of the inelastic spectrum.
    #[error(
        "grid half-width {half_width} below required {required}; captures {captured_fraction:.6} of the spectral mass"
    )]
    GridTooNarrow {
        half_width: f64,
        required: f64,
        captured_fraction: f64,
    },

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {evaluations} evaluations: partial {partial_re} + {partial_im}i, error estimate {error_estimate:e}"
    )]
    QuadratureNotConverged {
        partial_re: f64,
        partial_im: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// Too few Monte Carlo samples for the requested statistic.
    #[error("{samples} samples requested, at least {min} required")]
    TooFewSamples { samples: usize, min: usize },

    /// A numerical oracle disagrees with the corresponding closed form.
    #[error("{what}: closed form {closed} vs numerical {numerical}")]
    OracleMismatch {
        what: &'static str,
        closed: f64,
        numerical: f64,
    },
}
