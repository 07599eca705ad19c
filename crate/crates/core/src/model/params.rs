use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::tensor::{Scalar, Tensor};
use crate::error::{Error, Result};
use crate::seed::rng_for;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub vocab_size: usize,
    /// Maximum number of subtoken positions.
    pub context_len: usize,
    pub d_model: usize,
    pub n_heads: usize,
    pub n_layers: usize,
    pub d_ff: usize,
    pub dropout: f64,
    pub seed: u64,
}

impl ModelConfig {
    /// Desk-scale defaults: trains on a CPU while exercising every mechanism.
    pub fn desk(vocab_size: usize) -> Self {
        ModelConfig {
            vocab_size,
            context_len: 256,
            d_model: 128,
            n_heads: 4,
            n_layers: 4,
            d_ff: 512,
            dropout: 0.1,
            seed: 0,
        }
    }

    /// Small configuration for gradient checks and unit tests.
    pub fn tiny(vocab_size: usize) -> Self {
        ModelConfig {
            vocab_size,
            context_len: 16,
            d_model: 16,
            n_heads: 2,
            n_layers: 2,
            d_ff: 32,
            dropout: 0.0,
            seed: 0,
        }
    }

    pub fn head_dim(&self) -> usize {
        self.d_model / self.n_heads
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(format!("model config: {m}")));
        if self.n_heads == 0 || self.d_model % self.n_heads != 0 {
            return bad(format!("d_model {} not divisible by n_heads {}", self.d_model, self.n_heads));
        }
        if self.context_len < 2 {
            return bad("context_len must be at least 2".into());
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout {} outside [0, 1)", self.dropout));
        }
        if self.vocab_size == 0 || self.d_ff == 0 || self.n_layers == 0 {
            return bad("vocab_size, d_ff and n_layers must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockParams<T> {
    pub ln1_g: Tensor<T>,
    pub ln1_b: Tensor<T>,
    pub w_qkv: Tensor<T>,
    pub b_qkv: Tensor<T>,
    pub w_o: Tensor<T>,
    pub b_o: Tensor<T>,
    pub ln2_g: Tensor<T>,
    pub ln2_b: Tensor<T>,
    pub w_fc: Tensor<T>,
    pub b_fc: Tensor<T>,
    pub w_proj: Tensor<T>,
    pub b_proj: Tensor<T>,
}

/// All trainable tensors. The output projection is tied to `wte`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<T> {
    pub wte: Tensor<T>,
    pub wpe: Tensor<T>,
    pub blocks: Vec<BlockParams<T>>,
    pub lnf_g: Tensor<T>,
    pub lnf_b: Tensor<T>,
}

impl<T: Scalar> Params<T> {
    pub fn zeros(cfg: &ModelConfig) -> Self {
        let d = cfg.d_model;
        let z = |s: &[usize]| Tensor::zeros(s);
        Params {
            wte: z(&[cfg.vocab_size, d]),
            wpe: z(&[cfg.context_len, d]),
            blocks: (0..cfg.n_layers)
                .map(|_| BlockParams {
                    ln1_g: z(&[d]),
                    ln1_b: z(&[d]),
                    w_qkv: z(&[d, 3 * d]),
                    b_qkv: z(&[3 * d]),
                    w_o: z(&[d, d]),
                    b_o: z(&[d]),
                    ln2_g: z(&[d]),
                    ln2_b: z(&[d]),
                    w_fc: z(&[d, cfg.d_ff]),
                    b_fc: z(&[cfg.d_ff]),
                    w_proj: z(&[cfg.d_ff, d]),
                    b_proj: z(&[d]),
                })
                .collect(),
            lnf_g: z(&[d]),
            lnf_b: z(&[d]),
        }
    }

    /// GPT-2 style initialization: N(0, 0.02) weights, residual projections
    /// scaled by `1/sqrt(2·n_layers)`, unit layer-norm gains.
    pub fn init(cfg: &ModelConfig) -> Self {
        let mut p = Self::zeros(cfg);
        let mut rng = rng_for(cfg.seed, "init");
        let std = 0.02;
        let resid_std = std / (2.0 * cfg.n_layers as f64).sqrt();
        let normal = |t: &mut Tensor<T>, s: f64, rng: &mut rand_chacha::ChaCha8Rng| {
            let dist = Normal::new(0.0, s).expect("valid std");
            for v in &mut t.data {
                *v = T::from_f64_lossy(dist.sample(rng));
            }
        };
        normal(&mut p.wte, std, &mut rng);
        normal(&mut p.wpe, std * 0.5, &mut rng);
        for b in &mut p.blocks {
            b.ln1_g.data.fill(T::one());
            b.ln2_g.data.fill(T::one());
            normal(&mut b.w_qkv, std, &mut rng);
            normal(&mut b.w_o, resid_std, &mut rng);
            normal(&mut b.w_fc, std, &mut rng);
            normal(&mut b.w_proj, resid_std, &mut rng);
        }
        p.lnf_g.data.fill(T::one());
        p
    }

    /// Named tensors in canonical order.
    pub fn named(&self) -> Vec<(String, &Tensor<T>)> {
        let mut out = vec![("wte".to_string(), &self.wte), ("wpe".to_string(), &self.wpe)];
        for (i, b) in self.blocks.iter().enumerate() {
            for (name, t) in [
                ("ln1.g", &b.ln1_g),
                ("ln1.b", &b.ln1_b),
                ("attn.w_qkv", &b.w_qkv),
                ("attn.b_qkv", &b.b_qkv),
                ("attn.w_o", &b.w_o),
                ("attn.b_o", &b.b_o),
                ("ln2.g", &b.ln2_g),
                ("ln2.b", &b.ln2_b),
                ("mlp.w_fc", &b.w_fc),
                ("mlp.b_fc", &b.b_fc),
                ("mlp.w_proj", &b.w_proj),
                ("mlp.b_proj", &b.b_proj),
            ] {
                out.push((format!("h.{i}.{name}"), t));
            }
        }
        out.push(("ln_f.g".to_string(), &self.lnf_g));
        out.push(("ln_f.b".to_string(), &self.lnf_b));
        out
    }

    /// Mutable tensors in the same order as [`Params::named`].
    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor<T>> {
        let mut out = vec![&mut self.wte, &mut self.wpe];
        for b in &mut self.blocks {
            out.extend([
                &mut b.ln1_g,
                &mut b.ln1_b,
                &mut b.w_qkv,
                &mut b.b_qkv,
                &mut b.w_o,
                &mut b.b_o,
                &mut b.ln2_g,
                &mut b.ln2_b,
                &mut b.w_fc,
                &mut b.b_fc,
                &mut b.w_proj,
                &mut b.b_proj,
            ]);
        }
        out.push(&mut self.lnf_g);
        out.push(&mut self.lnf_b);
        out
    }

    pub fn n_params(&self) -> usize {
        self.named().iter().map(|(_, t)| t.len()).sum()
    }

    pub fn fill_zero(&mut self) {
        for t in self.tensors_mut() {
            t.fill_zero();
        }
    }

    /// `self += other * scale`.
    pub fn add_scaled(&mut self, other: &Params<T>, scale: T) {
        let src: Vec<&Tensor<T>> = other.named().into_iter().map(|(_, t)| t).collect();
        for (dst, src) in self.tensors_mut().into_iter().zip(src) {
            for (d, s) in dst.data.iter_mut().zip(&src.data) {
                *d += *s * scale;
            }
        }
    }

    pub fn cast<U: Scalar>(&self) -> Params<U> {
        Params {
            wte: self.wte.cast(),
            wpe: self.wpe.cast(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockParams {
                    ln1_g: b.ln1_g.cast(),
                    ln1_b: b.ln1_b.cast(),
                    w_qkv: b.w_qkv.cast(),
                    b_qkv: b.b_qkv.cast(),
                    w_o: b.w_o.cast(),
                    b_o: b.b_o.cast(),
                    ln2_g: b.ln2_g.cast(),
                    ln2_b: b.ln2_b.cast(),
                    w_fc: b.w_fc.cast(),
                    b_fc: b.b_fc.cast(),
                    w_proj: b.w_proj.cast(),
                    b_proj: b.b_proj.cast(),
                })
                .collect(),
            lnf_g: self.lnf_g.cast(),
            lnf_b: self.lnf_b.cast(),
        }
    }

    /// Checks every tensor against the shape implied by `cfg`.
    pub fn check_shapes(&self, cfg: &ModelConfig) -> Result<()> {
        let want = Params::<T>::zeros(cfg);
        let have = self.named();
        let want = want.named();
        if have.len() != want.len() {
            return Err(Error::Checkpoint(format!(
                "expected {} tensors, found {}",
                want.len(),
                have.len()
            )));
        }
        for ((name, t), (_, w)) in have.iter().zip(&want) {
            if t.shape != w.shape || t.data.len() != w.data.len() {
                return Err(Error::Checkpoint(format!(
                    "tensor {name} has shape {:?}, expected {:?}",
                    t.shape, w.shape
                )));
            }
        }
        Ok(())
    }
}

/// Draws a dropout keep-mask scaled by `1/(1-p)`.
pub(crate) fn dropout_mask<T: Scalar, R: Rng>(len: usize, p: f64, rng: &mut R) -> Vec<T> {
    let keep = T::from_f64_lossy(1.0 / (1.0 - p));
    (0..len)
        .map(|_| if rng.random::<f64>() < p { T::zero() } else { keep })
        .collect()
}
