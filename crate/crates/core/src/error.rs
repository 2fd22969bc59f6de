use thiserror::Error;

pub type Result<T> = std::result::Result<T, WalkError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("coin is not unitary: {relation} violated by {residual:e}")]
    NonUnitary {
        relation: &'static str,
        residual: f64,
    },
    #[error("qubit is not normalized: |alpha|^2 + |beta|^2 = {norm}")]
    NotNormalized { norm: f64 },
    #[error("coin is degenerate (|abcd| = {product:e}); closed forms need abcd != 0")]
    DegenerateCoin { product: f64 },
    #[error("enumeration of {size} words exceeds the cap of {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("x = {x} lies outside the open support (-{bound}, {bound})")]
    OutOfSupport { x: f64, bound: f64 },
    #[error("invalid Jacobi parameters nu = {nu}, mu = {mu}; both must exceed -1")]
    BadParams { nu: f64, mu: f64 },
    #[error("negative probability {value:e} at k = {k}")]
    NegativeProbability { k: i64, value: f64 },
    #[error("closed form left an imaginary residue of {residue:e}")]
    ImaginaryResidue { residue: f64 },
    #[error("quadrature did not converge: estimated error {error:e} after {intervals} intervals")]
    QuadratureFailed { error: f64, intervals: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
