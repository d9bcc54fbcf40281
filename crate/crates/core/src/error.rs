use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GwError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A computation re-requested its own key. The recursions are
    /// well-founded, so this always indicates a bug.
    #[error("memo cycle while computing {0}")]
    Cycle(String),
    #[error("conflicting values for {key}: stored {stored}, new {new}")]
    Conflict {
        key: String,
        stored: String,
        new: String,
    },
}
