//! Text formats: vocabularies (`.fovoc`), structures (`.fostr`), formulas
//! (`.fof`) and first-order projections (`.fop`).

mod fop;
mod formula;
pub mod lexer;
mod structure;
mod vocab;

use fopkit_core::Error;
use thiserror::Error as ThisError;

pub use fop::{parse_fop, parse_fop_query, print_fop, print_query};
pub use formula::{parse_formula, print_formula};
pub use lexer::SourceSpan;
pub use structure::{parse_structure, print_structure};
pub use vocab::{parse_vocabularies, print_vocabulary, Registry};

pub type Result<T, E = ParseError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { message: String, span: SourceSpan },
    #[error("{span}: `{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        span: SourceSpan,
    },
    #[error("{span}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, span: SourceSpan },
    #[error("{span}: element {element} lies outside the universe [{size}]")]
    OutOfUniverse { element: u64, size: u32, span: SourceSpan },
    #[error("{span}: constant `{name}` is not given")]
    MissingConstant { name: String, span: SourceSpan },
    #[error("{span}: unknown vocabulary `{name}`")]
    UnknownVocabulary { name: String, span: SourceSpan },
    #[error("{span}: {error}")]
    Invalid { error: Error, span: SourceSpan },
}

impl ParseError {
    pub fn syntax(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError::Syntax {
            message: message.into(),
            span,
        }
    }

    pub fn invalid(error: Error, span: SourceSpan) -> Self {
        ParseError::Invalid { error, span }
    }

    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::ArityMismatch { span, .. }
            | ParseError::UnknownSymbol { span, .. }
            | ParseError::OutOfUniverse { span, .. }
            | ParseError::MissingConstant { span, .. }
            | ParseError::UnknownVocabulary { span, .. }
            | ParseError::Invalid { span, .. } => *span,
        }
    }
}

/// A non-negative numeral.
fn numeral(word: &str, span: SourceSpan) -> Result<u32> {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::syntax(format!("expected a number, found `{word}`"), span));
    }
    word.parse()
        .map_err(|_| ParseError::syntax(format!("number `{word}` is too large"), span))
}
