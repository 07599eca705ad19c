use serde::{Deserialize, Serialize};

use super::params::{ModelConfig, Params};
use super::tensor::{Scalar, Tensor};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First/second moment estimates, one pair per parameter tensor.
#[derive(Clone, Debug)]
pub struct AdamState<T> {
    pub m: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
    pub t: u64,
    pub config: AdamConfig,
}

impl<T: Scalar> AdamState<T> {
    pub fn for_sizes(sizes: &[usize], config: AdamConfig) -> Self {
        AdamState {
            m: sizes.iter().map(|&n| vec![T::zero(); n]).collect(),
            v: sizes.iter().map(|&n| vec![T::zero(); n]).collect(),
            t: 0,
            config,
        }
    }

    pub fn for_model(cfg: &ModelConfig, config: AdamConfig) -> Self {
        let sizes: Vec<usize> = Params::<T>::zeros(cfg).named().iter().map(|(_, t)| t.len()).collect();
        Self::for_sizes(&sizes, config)
    }

    /// One Adam update. Fails without touching anything if a gradient is
    /// NaN or infinite.
    pub fn step_tensors(&mut self, params: Vec<&mut Tensor<T>>, grads: &[(String, &Tensor<T>)], lr: f64) -> Result<()> {
        if params.len() != grads.len() || params.len() != self.m.len() {
            return Err(Error::Invalid("optimizer state does not match parameters".into()));
        }
        for (name, g) in grads {
            if let Some(index) = g.data.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteGradient {
                    tensor: name.clone(),
                    index,
                });
            }
        }
        self.t += 1;
        let AdamConfig { beta1, beta2, eps } = self.config;
        let bc1 = 1.0 - beta1.powi(self.t as i32);
        let bc2 = 1.0 - beta2.powi(self.t as i32);
        let b1 = T::from_f64_lossy(beta1);
        let b2 = T::from_f64_lossy(beta2);
        let one = T::one();
        let step = T::from_f64_lossy(lr / bc1);
        let inv_bc2 = T::from_f64_lossy(1.0 / bc2);
        let eps = T::from_f64_lossy(eps);
        for (k, (p, (_, g))) in params.into_iter().zip(grads).enumerate() {
            let m = &mut self.m[k];
            let v = &mut self.v[k];
            for i in 0..p.data.len() {
                let gi = g.data[i];
                m[i] = b1 * m[i] + (one - b1) * gi;
                v[i] = b2 * v[i] + (one - b2) * gi * gi;
                p.data[i] -= step * m[i] / ((v[i] * inv_bc2).sqrt() + eps);
            }
        }
        Ok(())
    }

    pub fn step(&mut self, params: &mut Params<T>, grads: &Params<T>, lr: f64) -> Result<()> {
        let g = grads.named();
        self.step_tensors(params.tensors_mut(), &g, lr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_step_is_identity() {
        let cfg = ModelConfig::tiny(8);
        let mut p = Params::<f64>::init(&cfg);
        let before = p.clone();
        let g = Params::<f64>::zeros(&cfg);
        let mut st = AdamState::for_model(&cfg, AdamConfig::default());
        st.step(&mut p, &g, 1e-3).unwrap();
        assert_eq!(p, before);
    }

    #[test]
    fn first_step_matches_closed_form() {
        // m1 = (1-b1) g, v1 = (1-b2) g^2; bias-corrected: m̂ = g, v̂ = g^2,
        // so θ1 = θ0 - lr * g / (|g| + eps).
        let (theta0, g, lr) = (0.75f64, -0.3f64, 5e-4);
        let cfg = AdamConfig::default();
        let mut st = AdamState::<f64>::for_sizes(&[1], cfg);
        let mut p = Tensor { shape: vec![1], data: vec![theta0] };
        let gt = Tensor { shape: vec![1], data: vec![g] };
        st.step_tensors(vec![&mut p], &[("w".into(), &gt)], lr).unwrap();
        let m1 = (1.0 - cfg.beta1) * g;
        let v1 = (1.0 - cfg.beta2) * g * g;
        let mhat = m1 / (1.0 - cfg.beta1);
        let vhat = v1 / (1.0 - cfg.beta2);
        let want = theta0 - lr * mhat / (vhat.sqrt() + cfg.eps);
        assert!((p.data[0] - want).abs() < 1e-12, "{} vs {want}", p.data[0]);
    }

    #[test]
    fn non_finite_gradient_aborts() {
        let mut st = AdamState::<f64>::for_sizes(&[2], AdamConfig::default());
        let mut p = Tensor { shape: vec![2], data: vec![1.0, 2.0] };
        let g = Tensor { shape: vec![2], data: vec![0.1, f64::NAN] };
        let err = st.step_tensors(vec![&mut p], &[("w".into(), &g)], 1e-3).unwrap_err();
        assert!(matches!(err, Error::NonFiniteGradient { index: 1, .. }));
        assert_eq!(p.data, vec![1.0, 2.0]);
        assert_eq!(st.t, 0);
    }
}
