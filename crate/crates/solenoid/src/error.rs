use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix shape invalid: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("generators do not span a full-rank lattice")]
    SingularLattice,
    #[error("polynomial is reducible where an irreducible one is required")]
    Reducible,
    #[error("input invalid: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal precision check failed: {0}")]
    Precision(String),
}
