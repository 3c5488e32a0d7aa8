use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input does not match the file schema. `pointer` is a JSON pointer.
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },

    /// Well-formed input whose references do not resolve.
    #[error("{0}")]
    Structural(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("no pairing defined for degree `{0}`")]
    MissingPairing(String),

    #[error("{0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Structural and schema errors, as opposed to violated axioms or domain errors.
    pub fn is_structural(&self) -> bool {
        matches!(self, Error::Schema { .. } | Error::Structural(_) | Error::Io(_))
    }
}
