//! Bigram encoding with a copy mechanism: every identifier becomes exactly
//! two subtokens, and out-of-vocabulary subtokens are replaced by indexed
//! per-example placeholders.

mod encode;
mod split;
mod vocab;

pub use encode::{
    decode, decode_pair, encode_identifier, encode_sequence, encode_with, subtoken_id, CopyMap,
    EncodedSequence,
};
pub use split::{bigram_encode, partial_spans, split_identifier, Bigram, END_OF_TOKEN};
pub use vocab::{
    build_vocab, placeholder, Vocabulary, DEFAULT_CUTOFF, MAX_PLACEHOLDERS, PAD, UNK,
};
