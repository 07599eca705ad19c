//! Source documents, completion events and the dataset roles built from them.

mod dataset;
mod events;
pub mod lexer;
mod source;
pub mod synth;

pub use dataset::{
    build_dataset, read_jsonl, split_holdout, tag_language, write_jsonl, Dataset, DatasetItem,
    DatasetRole, Split, TokenSequence,
};
pub use events::{
    context_tokens, derive_candidates, is_eligible_site, synthesize_events, synthesize_events_indexed, CompletionEvent, EventPolicy, FrequencyTable,
};
pub use lexer::{classify, detokenize, lex, Language, Token, TokenKind, TokenStream};
pub use source::{load_documents, write_documents, Origin, SourceDocument};

/// Default root for data files when no explicit path is given.
pub const DATA_DIR_ENV: &str = "XFER_DATA_DIR";
