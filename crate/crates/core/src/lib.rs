//! Code autocompletion with transfer learning.
//!
//! The crate covers the whole offline pipeline: corpus roles and synthetic
//! completion logs ([`corpus`]), bigram + copy-placeholder tokenization
//! ([`tokenizer`]), a small decoder-only transformer ([`model`]), two-phase
//! pretrain/fine-tune orchestration ([`trainer`]), height-2 candidate
//! ranking ([`ranker`]) and offline/online-style evaluation ([`eval`]).

pub mod corpus;
pub mod eval;
pub mod model;
pub mod ranker;
mod error;
pub mod seed;
pub mod tokenizer;
pub mod trainer;

pub use error::{Error, Result};
