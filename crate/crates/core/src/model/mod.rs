//! Decoder-only transformer, optimizer and checkpoint format.

mod adam;
mod checkpoint;
mod gpt;
mod loss;
mod params;
mod tensor;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{tensor_names, ModelCheckpoint, Phase, ProvenanceEntry, FORMAT_VERSION};
pub use gpt::{log_softmax, ContextState, Gpt, Mode};
pub use loss::{cross_entropy, shifted_targets};
pub use params::{BlockParams, ModelConfig, Params};
pub use tensor::{matmul, Scalar, Tensor};
