use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the physical or model validity domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data is malformed (non-monotone grid, bad file, ...).
    #[error("data error: {0}")]
    Data(String),

    /// The ring denominator `1 - r·τ·e^{ikL}` vanished.
    #[error("transfer function singular: |1 - r·τ·e^(ikL)| = {0:e}")]
    Singular(f64),

    /// A least-squares fit failed.
    #[error("fit error: {0}")]
    Fit(String),

    /// A numerical result could not be certified to the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
