use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },

    #[error("expression is not polynomial in {var}: {detail}")]
    NotPolynomial { var: char, detail: String },

    #[error("singular metric at {point:?}")]
    SingularMetric { point: [f64; 4] },

    #[error("metric signature at {point:?} is not (+,+,-,-): {positive} positive, {negative} negative eigenvalues")]
    Signature { point: [f64; 4], positive: usize, negative: usize },

    #[error("operation needs a {expected} metric")]
    Kind { expected: &'static str },

    #[error("projective parameter vanishes at {point:?}")]
    DegenerateParam { point: [f64; 4] },

    #[error("distribution `{label}` is rank deficient at {point:?}")]
    RankDeficient { label: String, point: [f64; 4] },

    #[error("orientation or convention calibration failed: {0}")]
    Calibration(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("coefficient `{name}` depends on u or v")]
    CoefficientDependsOnUV { name: String },

    #[error("obstruction c_uv does not vanish: {0}")]
    ObstructionPresent(String),

    #[error("c_vv does not vanish, so the beta spinor is not a multiple principal spinor: {0}")]
    NotMultipleWps(String),

    #[error("root multiplicity is unstable at {point:?}: {detail}")]
    DegenerateRoot { point: [f64; 4], detail: String },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
