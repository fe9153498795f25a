use thiserror::Error;

use crate::ordering::Color;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("color {0} appears more than once in the interlace sequence")]
    DuplicateColor(Color),

    #[error("interlace needs at least one color")]
    EmptyInterlace,

    #[error("color {0} does not occur in the ordering or state")]
    ColorAbsent(Color),

    #[error("color {0} is not sortable in the current state")]
    NotSortable(Color),

    #[error("stack contains the sandwich {0}")]
    SandwichInStack(String),

    #[error("oracle supports at most {max} distinct colors, got {got}")]
    TooManyColors { max: usize, got: usize },

    #[error("basis family must be in 1..=5, got {0}")]
    InvalidFamily(u32),

    #[error("cache file: {0}")]
    Cache(String),

    /// An internal guarantee of the sorting algorithm failed. This is a bug.
    #[error("internal contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
