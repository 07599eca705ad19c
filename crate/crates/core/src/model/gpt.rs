//! Pre-norm decoder-only transformer with hand-derived backward pass.
//!
//! Layout per block: `x += Attn(LN1(x))`, `x += MLP(LN2(x))`, causal
//! multi-head attention, tanh-GELU MLP, dropout on both residual branches
//! in train mode. Final layer norm, output projection tied to `wte`.

use rand_chacha::ChaCha8Rng;

use super::params::{dropout_mask, BlockParams, ModelConfig, Params};
use super::tensor::{matmul, Scalar, Tensor};
use crate::error::{Error, Result};

const LN_EPS: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Train,
    Infer,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gpt<T> {
    pub config: ModelConfig,
    pub params: Params<T>,
}

struct LnCache<T> {
    xhat: Vec<T>,
    rstd: Vec<T>,
}

struct BlockCache<T> {
    ln1: LnCache<T>,
    h1: Vec<T>,
    qkv: Vec<T>,
    probs: Vec<T>,
    att: Vec<T>,
    mask_attn: Option<Vec<T>>,
    ln2: LnCache<T>,
    h2: Vec<T>,
    f_pre: Vec<T>,
    g: Vec<T>,
    mask_mlp: Option<Vec<T>>,
}

struct Trunk<T> {
    len: usize,
    blocks: Vec<BlockCache<T>>,
    lnf: LnCache<T>,
    /// Final layer-norm output, `len × d`.
    xf: Vec<T>,
}

/// Cached keys and values for a context prefix, reused across candidates.
#[derive(Clone, Debug)]
pub struct ContextState<T> {
    pub len: usize,
    /// Per layer: keys and values, each `len × d`.
    kv: Vec<(Vec<T>, Vec<T>)>,
    /// Logits at the last context position.
    pub last_logits: Vec<T>,
}

fn gelu<T: Scalar>(x: T) -> T {
    let c = T::from_f64_lossy((2.0 / std::f64::consts::PI).sqrt());
    let a = T::from_f64_lossy(0.044715);
    let half = T::from_f64_lossy(0.5);
    half * x * (T::one() + (c * (x + a * x * x * x)).tanh())
}

fn gelu_grad<T: Scalar>(x: T) -> T {
    let c = T::from_f64_lossy((2.0 / std::f64::consts::PI).sqrt());
    let a = T::from_f64_lossy(0.044715);
    let half = T::from_f64_lossy(0.5);
    let three = T::from_f64_lossy(3.0);
    let t = (c * (x + a * x * x * x)).tanh();
    half * (T::one() + t) + half * x * (T::one() - t * t) * c * (T::one() + three * a * x * x)
}

fn layer_norm<T: Scalar>(x: &[T], d: usize, g: &[T], b: &[T]) -> (Vec<T>, LnCache<T>) {
    let rows = x.len() / d;
    let mut y = vec![T::zero(); x.len()];
    let mut xhat = vec![T::zero(); x.len()];
    let mut rstd = vec![T::zero(); rows];
    let n = T::from_usize(d).expect("dim");
    let eps = T::from_f64_lossy(LN_EPS);
    for r in 0..rows {
        let row = &x[r * d..(r + 1) * d];
        let mean = row.iter().copied().sum::<T>() / n;
        let var = row.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
        let rs = T::one() / (var + eps).sqrt();
        rstd[r] = rs;
        for c in 0..d {
            let xh = (row[c] - mean) * rs;
            xhat[r * d + c] = xh;
            y[r * d + c] = xh * g[c] + b[c];
        }
    }
    (y, LnCache { xhat, rstd })
}

/// Returns dx and accumulates dg, db.
fn layer_norm_backward<T: Scalar>(
    dy: &[T],
    cache: &LnCache<T>,
    d: usize,
    g: &[T],
    dg: &mut [T],
    db: &mut [T],
) -> Vec<T> {
    let rows = dy.len() / d;
    let mut dx = vec![T::zero(); dy.len()];
    let n = T::from_usize(d).expect("dim");
    let mut dxhat = vec![T::zero(); d];
    for r in 0..rows {
        let dyr = &dy[r * d..(r + 1) * d];
        let xh = &cache.xhat[r * d..(r + 1) * d];
        let mut mean_dxhat = T::zero();
        let mut mean_dxhat_xhat = T::zero();
        for c in 0..d {
            dg[c] += dyr[c] * xh[c];
            db[c] += dyr[c];
            dxhat[c] = dyr[c] * g[c];
            mean_dxhat += dxhat[c];
            mean_dxhat_xhat += dxhat[c] * xh[c];
        }
        mean_dxhat /= n;
        mean_dxhat_xhat /= n;
        let rs = cache.rstd[r];
        for c in 0..d {
            dx[r * d + c] = rs * (dxhat[c] - mean_dxhat - xh[c] * mean_dxhat_xhat);
        }
    }
    dx
}

fn add_bias<T: Scalar>(x: &mut [T], b: &[T]) {
    for row in x.chunks_mut(b.len()) {
        for (v, bb) in row.iter_mut().zip(b) {
            *v += *bb;
        }
    }
}

fn add_colsum<T: Scalar>(dx: &[T], db: &mut [T]) {
    for row in dx.chunks(db.len()) {
        for (acc, v) in db.iter_mut().zip(row) {
            *acc += *v;
        }
    }
}

/// Copies columns `[off, off+w)` of a `rows × stride` matrix.
fn gather_cols<T: Scalar>(src: &[T], rows: usize, stride: usize, off: usize, w: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(rows * w);
    for r in 0..rows {
        out.extend_from_slice(&src[r * stride + off..r * stride + off + w]);
    }
    out
}

fn scatter_cols<T: Scalar>(dst: &mut [T], src: &[T], rows: usize, stride: usize, off: usize, w: usize) {
    for r in 0..rows {
        dst[r * stride + off..r * stride + off + w].copy_from_slice(&src[r * w..(r + 1) * w]);
    }
}

/// In-place softmax of a row restricted to its first `upto` entries; the
/// rest are zeroed.
fn masked_softmax_row<T: Scalar>(row: &mut [T], upto: usize, scale: T) {
    let mut max = T::neg_infinity();
    for v in &row[..upto] {
        max = max.max(*v * scale);
    }
    let mut sum = T::zero();
    for v in &mut row[..upto] {
        *v = (*v * scale - max).exp();
        sum += *v;
    }
    for v in &mut row[..upto] {
        *v /= sum;
    }
    for v in &mut row[upto..] {
        *v = T::zero();
    }
}

/// Numerically stable log-softmax.
pub fn log_softmax<T: Scalar>(logits: &[T]) -> Vec<T> {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let lse = logits.iter().map(|&v| (v - max).exp()).sum::<T>().ln() + max;
    logits.iter().map(|&v| v - lse).collect()
}

impl<T: Scalar> Gpt<T> {
    pub fn new(config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let params = Params::init(&config);
        Ok(Gpt { config, params })
    }

    pub fn from_params(config: ModelConfig, params: Params<T>) -> Result<Self> {
        config.validate()?;
        params.check_shapes(&config)?;
        Ok(Gpt { config, params })
    }

    fn check_ids(&self, ids: &[u32]) -> Result<()> {
        if ids.len() > self.config.context_len {
            return Err(Error::SequenceTooLong {
                len: ids.len(),
                max: self.config.context_len,
            });
        }
        if let Some(&id) = ids.iter().find(|&&id| id as usize >= self.config.vocab_size) {
            return Err(Error::TokenOutOfRange {
                id,
                size: self.config.vocab_size,
            });
        }
        Ok(())
    }

    fn embed(&self, ids: &[u32], offset: usize) -> Vec<T> {
        let d = self.config.d_model;
        let mut x = Vec::with_capacity(ids.len() * d);
        for (p, &id) in ids.iter().enumerate() {
            let tok = self.params.wte.row(id as usize);
            let pos = self.params.wpe.row(p + offset);
            x.extend(tok.iter().zip(pos).map(|(a, b)| *a + *b));
        }
        x
    }

    fn attention(&self, qkv: &[T], len: usize) -> (Vec<T>, Vec<T>) {
        let d = self.config.d_model;
        let nh = self.config.n_heads;
        let dh = self.config.head_dim();
        let scale = T::one() / T::from_usize(dh).expect("dim").sqrt();
        let mut probs = vec![T::zero(); nh * len * len];
        let mut att = vec![T::zero(); len * d];
        let mut out_h = vec![T::zero(); len * dh];
        for h in 0..nh {
            let q = gather_cols(qkv, len, 3 * d, h * dh, dh);
            let k = gather_cols(qkv, len, 3 * d, d + h * dh, dh);
            let v = gather_cols(qkv, len, 3 * d, 2 * d + h * dh, dh);
            let p = &mut probs[h * len * len..(h + 1) * len * len];
            matmul(len, dh, len, &q, false, &k, true, p, T::zero());
            for i in 0..len {
                masked_softmax_row(&mut p[i * len..(i + 1) * len], i + 1, scale);
            }
            matmul(len, len, dh, p, false, &v, false, &mut out_h, T::zero());
            scatter_cols(&mut att, &out_h, len, d, h * dh, dh);
        }
        (probs, att)
    }

    fn block_forward(
        &self,
        b: &BlockParams<T>,
        x: &mut [T],
        len: usize,
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> BlockCache<T> {
        let d = self.config.d_model;
        let dff = self.config.d_ff;
        let p = self.config.dropout;

        let (h1, ln1) = layer_norm(x, d, &b.ln1_g.data, &b.ln1_b.data);
        let mut qkv = vec![T::zero(); len * 3 * d];
        matmul(len, d, 3 * d, &h1, false, &b.w_qkv.data, false, &mut qkv, T::zero());
        add_bias(&mut qkv, &b.b_qkv.data);
        let (probs, att) = self.attention(&qkv, len);
        let mut o = vec![T::zero(); len * d];
        matmul(len, d, d, &att, false, &b.w_o.data, false, &mut o, T::zero());
        add_bias(&mut o, &b.b_o.data);
        let mask_attn = match rng.as_deref_mut() {
            Some(r) if p > 0.0 => Some(dropout_mask::<T, _>(len * d, p, r)),
            _ => None,
        };
        for (i, v) in x.iter_mut().enumerate() {
            let m = mask_attn.as_ref().map_or(T::one(), |m| m[i]);
            *v += o[i] * m;
        }

        let (h2, ln2) = layer_norm(x, d, &b.ln2_g.data, &b.ln2_b.data);
        let mut f_pre = vec![T::zero(); len * dff];
        matmul(len, d, dff, &h2, false, &b.w_fc.data, false, &mut f_pre, T::zero());
        add_bias(&mut f_pre, &b.b_fc.data);
        let g: Vec<T> = f_pre.iter().map(|&v| gelu(v)).collect();
        let mut m = vec![T::zero(); len * d];
        matmul(len, dff, d, &g, false, &b.w_proj.data, false, &mut m, T::zero());
        add_bias(&mut m, &b.b_proj.data);
        let mask_mlp = match rng {
            Some(r) if p > 0.0 => Some(dropout_mask::<T, _>(len * d, p, r)),
            _ => None,
        };
        for (i, v) in x.iter_mut().enumerate() {
            let mk = mask_mlp.as_ref().map_or(T::one(), |mm| mm[i]);
            *v += m[i] * mk;
        }

        BlockCache {
            ln1,
            h1,
            qkv,
            probs,
            att,
            mask_attn,
            ln2,
            h2,
            f_pre,
            g,
            mask_mlp,
        }
    }

    fn trunk(&self, ids: &[u32], mut rng: Option<&mut ChaCha8Rng>) -> Trunk<T> {
        let len = ids.len();
        let d = self.config.d_model;
        let mut x = self.embed(ids, 0);
        let mut blocks = Vec::with_capacity(self.params.blocks.len());
        for b in &self.params.blocks {
            blocks.push(self.block_forward(b, &mut x, len, rng.as_deref_mut()));
        }
        let (xf, lnf) = layer_norm(&x, d, &self.params.lnf_g.data, &self.params.lnf_b.data);
        Trunk { len, blocks, lnf, xf }
    }

    fn project(&self, xf: &[T], rows: usize) -> Vec<T> {
        let v = self.config.vocab_size;
        let d = self.config.d_model;
        let mut logits = vec![T::zero(); rows * v];
        matmul(rows, d, v, xf, false, &self.params.wte.data, true, &mut logits, T::zero());
        logits
    }

    /// Logits for every position, `len × vocab_size`. Train mode applies
    /// dropout drawn from `rng`; infer mode is deterministic.
    pub fn forward(&self, ids: &[u32], mode: Mode, rng: Option<&mut ChaCha8Rng>) -> Result<Tensor<T>> {
        self.check_ids(ids)?;
        let rng = match mode {
            Mode::Train => rng,
            Mode::Infer => None,
        };
        let trunk = self.trunk(ids, rng);
        Ok(Tensor {
            shape: vec![ids.len(), self.config.vocab_size],
            data: self.project(&trunk.xf, trunk.len),
        })
    }

    /// Runs the context once and keeps keys/values for [`Gpt::extend`].
    pub fn prefill(&self, ids: &[u32]) -> Result<ContextState<T>> {
        if ids.is_empty() {
            return Err(Error::Invalid("empty context".into()));
        }
        self.check_ids(ids)?;
        let d = self.config.d_model;
        let trunk = self.trunk(ids, None);
        let last = &trunk.xf[(trunk.len - 1) * d..];
        let kv = trunk
            .blocks
            .iter()
            .map(|bc| {
                (
                    gather_cols(&bc.qkv, trunk.len, 3 * d, d, d),
                    gather_cols(&bc.qkv, trunk.len, 3 * d, 2 * d, d),
                )
            })
            .collect();
        Ok(ContextState {
            len: trunk.len,
            kv,
            last_logits: self.project(last, 1),
        })
    }

    /// Logits for the position after `state` when it is followed by `id`.
    /// `state` is left unchanged.
    pub fn extend(&self, state: &ContextState<T>, id: u32) -> Result<Vec<T>> {
        self.extend_batch(state, &[id])
    }

    /// [`Gpt::extend`] for several alternative next ids at once; returns
    /// `ids.len() × vocab_size` logits. Each row sees the context and its
    /// own id only.
    pub fn extend_batch(&self, state: &ContextState<T>, ids: &[u32]) -> Result<Vec<T>> {
        let pos = state.len;
        if pos + 1 > self.config.context_len {
            return Err(Error::SequenceTooLong {
                len: pos + 1,
                max: self.config.context_len,
            });
        }
        if let Some(&id) = ids.iter().find(|&&id| id as usize >= self.config.vocab_size) {
            return Err(Error::TokenOutOfRange {
                id,
                size: self.config.vocab_size,
            });
        }
        let r = ids.len();
        let d = self.config.d_model;
        let dff = self.config.d_ff;
        let nh = self.config.n_heads;
        let dh = self.config.head_dim();
        let scale = T::one() / T::from_usize(dh).expect("dim").sqrt();
        let mut x = Vec::with_capacity(r * d);
        for &id in ids {
            x.extend(self.embed(&[id], pos));
        }
        let mut scores = vec![T::zero(); pos + 1];
        for (b, (keys, values)) in self.params.blocks.iter().zip(&state.kv) {
            let (h1, _) = layer_norm(&x, d, &b.ln1_g.data, &b.ln1_b.data);
            let mut qkv = vec![T::zero(); r * 3 * d];
            matmul(r, d, 3 * d, &h1, false, &b.w_qkv.data, false, &mut qkv, T::zero());
            add_bias(&mut qkv, &b.b_qkv.data);
            let mut att = vec![T::zero(); r * d];
            for (row, out_row) in qkv.chunks_exact(3 * d).zip(att.chunks_exact_mut(d)) {
                for h in 0..nh {
                    let hs = h * dh..(h + 1) * dh;
                    let q = &row[hs.clone()];
                    for (j, s) in scores.iter_mut().enumerate() {
                        let k = if j < pos {
                            &keys[j * d + h * dh..j * d + (h + 1) * dh]
                        } else {
                            &row[d + h * dh..d + (h + 1) * dh]
                        };
                        *s = q.iter().zip(k).map(|(a, b)| *a * *b).sum();
                    }
                    masked_softmax_row(&mut scores, pos + 1, scale);
                    let out = &mut out_row[hs];
                    for (j, &pj) in scores.iter().enumerate() {
                        let v = if j < pos {
                            &values[j * d + h * dh..j * d + (h + 1) * dh]
                        } else {
                            &row[2 * d + h * dh..2 * d + (h + 1) * dh]
                        };
                        for (o, vv) in out.iter_mut().zip(v) {
                            *o += pj * *vv;
                        }
                    }
                }
            }
            let mut o = vec![T::zero(); r * d];
            matmul(r, d, d, &att, false, &b.w_o.data, false, &mut o, T::zero());
            add_bias(&mut o, &b.b_o.data);
            x.iter_mut().zip(&o).for_each(|(a, b)| *a += *b);
            let (h2, _) = layer_norm(&x, d, &b.ln2_g.data, &b.ln2_b.data);
            let mut f = vec![T::zero(); r * dff];
            matmul(r, d, dff, &h2, false, &b.w_fc.data, false, &mut f, T::zero());
            add_bias(&mut f, &b.b_fc.data);
            f.iter_mut().for_each(|v| *v = gelu(*v));
            let mut m = vec![T::zero(); r * d];
            matmul(r, dff, d, &f, false, &b.w_proj.data, false, &mut m, T::zero());
            add_bias(&mut m, &b.b_proj.data);
            x.iter_mut().zip(&m).for_each(|(a, b)| *a += *b);
        }
        let (xf, _) = layer_norm(&x, d, &self.params.lnf_g.data, &self.params.lnf_b.data);
        Ok(self.project(&xf, r))
    }

    /// Log-probabilities of the token following `context`, which is cut to
    /// its most recent `context_len` ids.
    pub fn next_token_logprobs(&self, context: &[u32]) -> Result<Vec<T>> {
        let start = context.len().saturating_sub(self.config.context_len);
        let state = self.prefill(&context[start..])?;
        Ok(log_softmax(&state.last_logits))
    }

    /// Sums cross-entropy over positions with a target and accumulates
    /// `scale ×` its gradient into `grads`. Returns (summed loss, count).
    pub fn accumulate_gradients(
        &self,
        ids: &[u32],
        targets: &[Option<u32>],
        rng: Option<&mut ChaCha8Rng>,
        grads: &mut Params<T>,
        scale: T,
    ) -> Result<(f64, usize)> {
        self.check_ids(ids)?;
        if targets.len() != ids.len() {
            return Err(Error::Invalid("targets and ids differ in length".into()));
        }
        let rows: Vec<(usize, u32)> = targets
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|t| (i, t)))
            .collect();
        if rows.is_empty() {
            return Ok((0.0, 0));
        }
        if let Some(&(_, t)) = rows.iter().find(|(_, t)| *t as usize >= self.config.vocab_size) {
            return Err(Error::TokenOutOfRange {
                id: t,
                size: self.config.vocab_size,
            });
        }
        let d = self.config.d_model;
        let vsz = self.config.vocab_size;
        let trunk = self.trunk(ids, rng);

        // logits only for rows that carry a target
        let n = rows.len();
        let mut xr = Vec::with_capacity(n * d);
        for &(i, _) in &rows {
            xr.extend_from_slice(&trunk.xf[i * d..(i + 1) * d]);
        }
        let mut dlogits = self.project(&xr, n);
        let mut loss = 0.0;
        for (r, &(_, t)) in rows.iter().enumerate() {
            let row = &mut dlogits[r * vsz..(r + 1) * vsz];
            let ls = log_softmax(row);
            loss -= ls[t as usize].to_f64().expect("finite");
            for (v, l) in row.iter_mut().zip(&ls) {
                *v = l.exp() * scale;
            }
            row[t as usize] -= scale;
        }
        // tied output projection
        matmul(vsz, n, d, &dlogits, true, &xr, false, &mut grads.wte.data, T::one());
        let mut dxr = vec![T::zero(); n * d];
        matmul(n, vsz, d, &dlogits, false, &self.params.wte.data, false, &mut dxr, T::zero());
        let mut dxf = vec![T::zero(); trunk.len * d];
        for (r, &(i, _)) in rows.iter().enumerate() {
            dxf[i * d..(i + 1) * d].copy_from_slice(&dxr[r * d..(r + 1) * d]);
        }
        self.backward_trunk(ids, &trunk, dxf, grads);
        Ok((loss, n))
    }

    fn backward_trunk(&self, ids: &[u32], trunk: &Trunk<T>, dxf: Vec<T>, grads: &mut Params<T>) {
        let d = self.config.d_model;
        let len = trunk.len;
        let mut dx = layer_norm_backward(
            &dxf,
            &trunk.lnf,
            d,
            &self.params.lnf_g.data,
            &mut grads.lnf_g.data,
            &mut grads.lnf_b.data,
        );
        for (l, cache) in trunk.blocks.iter().enumerate().rev() {
            dx = self.block_backward(&self.params.blocks[l], &mut grads.blocks[l], cache, dx, len);
        }
        for (p, &id) in ids.iter().enumerate() {
            let g = &dx[p * d..(p + 1) * d];
            grads.wte.row_mut(id as usize).iter_mut().zip(g).for_each(|(a, b)| *a += *b);
            grads.wpe.row_mut(p).iter_mut().zip(g).for_each(|(a, b)| *a += *b);
        }
    }

    fn block_backward(
        &self,
        b: &BlockParams<T>,
        gb: &mut BlockParams<T>,
        c: &BlockCache<T>,
        dx: Vec<T>,
        len: usize,
    ) -> Vec<T> {
        let d = self.config.d_model;
        let dff = self.config.d_ff;
        let nh = self.config.n_heads;
        let dh = self.config.head_dim();
        let scale = T::one() / T::from_usize(dh).expect("dim").sqrt();

        // MLP branch
        let dm: Vec<T> = match &c.mask_mlp {
            Some(mask) => dx.iter().zip(mask).map(|(a, m)| *a * *m).collect(),
            None => dx.clone(),
        };
        matmul(dff, len, d, &c.g, true, &dm, false, &mut gb.w_proj.data, T::one());
        add_colsum(&dm, &mut gb.b_proj.data);
        let mut dg = vec![T::zero(); len * dff];
        matmul(len, d, dff, &dm, false, &b.w_proj.data, true, &mut dg, T::zero());
        for (g, &f) in dg.iter_mut().zip(&c.f_pre) {
            *g *= gelu_grad(f);
        }
        matmul(d, len, dff, &c.h2, true, &dg, false, &mut gb.w_fc.data, T::one());
        add_colsum(&dg, &mut gb.b_fc.data);
        let mut dh2 = vec![T::zero(); len * d];
        matmul(len, dff, d, &dg, false, &b.w_fc.data, true, &mut dh2, T::zero());
        let dln2 = layer_norm_backward(&dh2, &c.ln2, d, &b.ln2_g.data, &mut gb.ln2_g.data, &mut gb.ln2_b.data);
        let dx_mid: Vec<T> = dx.iter().zip(&dln2).map(|(a, b)| *a + *b).collect();

        // attention branch
        let dout: Vec<T> = match &c.mask_attn {
            Some(mask) => dx_mid.iter().zip(mask).map(|(a, m)| *a * *m).collect(),
            None => dx_mid.clone(),
        };
        matmul(d, len, d, &c.att, true, &dout, false, &mut gb.w_o.data, T::one());
        add_colsum(&dout, &mut gb.b_o.data);
        let mut datt = vec![T::zero(); len * d];
        matmul(len, d, d, &dout, false, &b.w_o.data, true, &mut datt, T::zero());

        let mut dqkv = vec![T::zero(); len * 3 * d];
        let mut dp = vec![T::zero(); len * len];
        let mut dv = vec![T::zero(); len * dh];
        let mut dq = vec![T::zero(); len * dh];
        let mut dk = vec![T::zero(); len * dh];
        for h in 0..nh {
            let q = gather_cols(&c.qkv, len, 3 * d, h * dh, dh);
            let k = gather_cols(&c.qkv, len, 3 * d, d + h * dh, dh);
            let v = gather_cols(&c.qkv, len, 3 * d, 2 * d + h * dh, dh);
            let da = gather_cols(&datt, len, d, h * dh, dh);
            let p = &c.probs[h * len * len..(h + 1) * len * len];
            matmul(len, dh, len, &da, false, &v, true, &mut dp, T::zero());
            matmul(len, len, dh, p, true, &da, false, &mut dv, T::zero());
            for i in 0..len {
                let prow = &p[i * len..(i + 1) * len];
                let drow = &mut dp[i * len..(i + 1) * len];
                let dot: T = prow[..=i].iter().zip(&drow[..=i]).map(|(a, b)| *a * *b).sum();
                for j in 0..len {
                    drow[j] = if j <= i { prow[j] * (drow[j] - dot) * scale } else { T::zero() };
                }
            }
            matmul(len, len, dh, &dp, false, &k, false, &mut dq, T::zero());
            matmul(len, len, dh, &dp, true, &q, false, &mut dk, T::zero());
            scatter_cols(&mut dqkv, &dq, len, 3 * d, h * dh, dh);
            scatter_cols(&mut dqkv, &dk, len, 3 * d, d + h * dh, dh);
            scatter_cols(&mut dqkv, &dv, len, 3 * d, 2 * d + h * dh, dh);
        }
        matmul(d, len, 3 * d, &c.h1, true, &dqkv, false, &mut gb.w_qkv.data, T::one());
        add_colsum(&dqkv, &mut gb.b_qkv.data);
        let mut dh1 = vec![T::zero(); len * d];
        matmul(len, 3 * d, d, &dqkv, false, &b.w_qkv.data, true, &mut dh1, T::zero());
        let dln1 = layer_norm_backward(&dh1, &c.ln1, d, &b.ln1_g.data, &mut gb.ln1_g.data, &mut gb.ln1_b.data);
        dx_mid.iter().zip(&dln1).map(|(a, b)| *a + *b).collect()
    }
}
