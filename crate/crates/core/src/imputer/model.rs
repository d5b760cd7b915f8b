//! Feed-forward regressor: four ReLU dense layers and a ReLU output unit.

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ImputerError, TrainSample, TrainerConfig, HIDDEN_LAYERS, HIDDEN_WIDTH, INPUT_DIM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs × inputs`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Self { inputs, outputs, weights: vec![0.0; inputs * outputs], bias: vec![0.0; outputs] }
    }

    fn affine(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.weights.chunks_exact(self.inputs).zip(&self.bias).map(|(row, b)| {
            row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b
        }));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub layers: Vec<Dense>,
}

/// Layer widths from input to output.
pub fn layer_widths() -> Vec<usize> {
    let mut w = vec![INPUT_DIM];
    w.extend(std::iter::repeat_n(HIDDEN_WIDTH, HIDDEN_LAYERS));
    w.push(1);
    w
}

/// He-uniform weights `U(-√(6/fan_in), √(6/fan_in))`, zero biases. The output
/// layer draws from the non-negative half of its range so the output ReLU is
/// live at initialization.
pub fn init_model(cfg: &TrainerConfig) -> ModelParams {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let widths = layer_widths();
    let last = widths.len() - 2;
    let layers = widths
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let bound = he_bound(fan_in);
            let low = if i == last { 0.0 } else { -bound };
            let dist = Uniform::new_inclusive(low, bound).expect("finite bounds");
            let mut layer = Dense::zeros(fan_in, fan_out);
            layer.weights.iter_mut().for_each(|w| *w = dist.sample(&mut rng));
            layer
        })
        .collect();
    ModelParams { layers }
}

pub fn he_bound(fan_in: usize) -> f64 {
    (6.0 / fan_in as f64).sqrt()
}

fn relu(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

/// ReLU derivative, taken as 0 at exactly 0.
fn relu_grad(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else {
        0.0
    }
}

impl ModelParams {
    pub fn zeros_like(&self) -> Self {
        Self { layers: self.layers.iter().map(|l| Dense::zeros(l.inputs, l.outputs)).collect() }
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// Weight and bias buffers in a fixed order.
    pub fn slices(&self) -> Vec<&[f64]> {
        self.layers.iter().flat_map(|l| [l.weights.as_slice(), l.bias.as_slice()]).collect()
    }

    pub fn slices_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers.iter_mut().flat_map(|l| [l.weights.as_mut_slice(), l.bias.as_mut_slice()]).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }

    fn check_input(&self, x: &[f64]) -> Result<(), ImputerError> {
        let expected = self.layers.first().map_or(0, |l| l.inputs);
        if x.len() != expected {
            return Err(ImputerError::DimensionMismatch { expected, found: x.len() });
        }
        Ok(())
    }

    /// Prediction in normalized target space; always ≥ 0.
    pub fn forward(&self, x: &[f64]) -> Result<f64, ImputerError> {
        self.check_input(x)?;
        let mut cur = x.to_vec();
        let mut next = Vec::with_capacity(HIDDEN_WIDTH);
        for layer in &self.layers {
            layer.affine(&cur, &mut next);
            next.iter_mut().for_each(|v| *v = relu(*v));
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur[0])
    }

    /// Mean squared error over the batch and its gradient with respect to every parameter.
    pub fn loss_and_grad(&self, batch: &[TrainSample]) -> Result<(f64, ModelParams), ImputerError> {
        if batch.is_empty() {
            return Err(ImputerError::EmptyBatch);
        }
        let mut grad = self.zeros_like();
        let mut loss = 0.0;
        let scale = 1.0 / batch.len() as f64;
        // Pre-activations per layer; activations[0] is the input.
        let mut pre: Vec<Vec<f64>> = vec![Vec::new(); self.layers.len()];
        let mut act: Vec<Vec<f64>> = vec![Vec::new(); self.layers.len() + 1];
        for sample in batch {
            self.check_input(&sample.x)?;
            act[0].clear();
            act[0].extend_from_slice(&sample.x);
            for (l, layer) in self.layers.iter().enumerate() {
                layer.affine(&act[l], &mut pre[l]);
                let a = &mut act[l + 1];
                a.clear();
                a.extend(pre[l].iter().map(|&z| relu(z)));
            }
            let out = act[self.layers.len()][0];
            let residual = out - sample.y;
            loss += residual * residual * scale;

            let mut delta: Vec<f64> = vec![2.0 * residual * scale * relu_grad(pre[self.layers.len() - 1][0])];
            for l in (0..self.layers.len()).rev() {
                let layer = &self.layers[l];
                let g = &mut grad.layers[l];
                let input = &act[l];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    g.bias[o] += d;
                    let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    row.iter_mut().zip(input).for_each(|(gw, &a)| *gw += d * a);
                }
                if l == 0 {
                    break;
                }
                let mut prev = vec![0.0; layer.inputs];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    prev.iter_mut().zip(row).for_each(|(p, &w)| *p += w * d);
                }
                prev.iter_mut().zip(&pre[l - 1]).for_each(|(p, &z)| *p *= relu_grad(z));
                delta = prev;
            }
        }
        Ok((loss, grad))
    }

    /// Mean squared error without gradients.
    pub fn mse(&self, data: &[TrainSample]) -> Result<f64, ImputerError> {
        if data.is_empty() {
            return Err(ImputerError::EmptyBatch);
        }
        let mut total = 0.0;
        for s in data {
            let r = self.forward(&s.x)? - s.y;
            total += r * r;
        }
        Ok(total / data.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RelationType;

    fn cfg(seed: u64) -> TrainerConfig {
        TrainerConfig { seed, ..TrainerConfig::default() }
    }

    #[test]
    fn architecture_shapes() {
        let m = init_model(&cfg(1));
        assert_eq!(layer_widths(), [141, 64, 64, 64, 64, 1]);
        assert_eq!(m.layers.len(), 5);
        assert_eq!(m.param_count(), 141 * 64 + 64 + 3 * (64 * 64 + 64) + 64 + 1);
    }

    #[test]
    fn init_is_deterministic_with_zero_biases() {
        let a = init_model(&cfg(9));
        assert_eq!(a, init_model(&cfg(9)));
        assert_ne!(a, init_model(&cfg(10)));
        assert!(a.layers.iter().all(|l| l.bias.iter().all(|&b| b == 0.0)));
    }

    #[test]
    fn first_layer_within_he_bound() {
        let m = init_model(&cfg(3));
        let bound = (6.0f64 / 141.0).sqrt();
        assert!((he_bound(141) - bound).abs() < 1e-15);
        assert!(m.layers[0].weights.iter().all(|w| w.abs() <= bound));
        assert!(m.layers[4].weights.iter().all(|&w| (0.0..=he_bound(64)).contains(&w)));
    }

    #[test]
    fn zero_input_gives_zero() {
        let m = init_model(&cfg(5));
        assert_eq!(m.forward(&[0.0; INPUT_DIM]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_checked() {
        let m = init_model(&cfg(5));
        assert_eq!(m.forward(&[1.0; 3]), Err(ImputerError::DimensionMismatch { expected: 141, found: 3 }));
    }

    #[test]
    fn forward_matches_hand_arithmetic() {
        // Tiny 141 -> 2 -> 1 chain with hand-picked weights.
        let mut first = Dense::zeros(INPUT_DIM, 2);
        first.weights[0] = 0.5; // unit 0 reads x0
        first.weights[1] = -1.0; // unit 0 reads x1
        first.weights[INPUT_DIM] = 2.0; // unit 1 reads x0
        first.bias = vec![0.25, -3.0];
        let mut out = Dense::zeros(2, 1);
        out.weights = vec![1.5, 4.0];
        out.bias = vec![0.1];
        let m = ModelParams { layers: vec![first, out] };
        let mut x = vec![0.0; INPUT_DIM];
        x[0] = 2.0;
        x[1] = 0.5;
        // unit 0: relu(0.5*2 - 0.5 + 0.25) = 0.75; unit 1: relu(4 - 3) = 1
        // output: relu(1.5*0.75 + 4*1 + 0.1) = 5.225
        assert!((m.forward(&x).unwrap() - 5.225).abs() < 1e-12);
    }

    #[test]
    fn exact_fit_has_zero_loss() {
        let m = init_model(&cfg(2));
        let x = TrainSample::encode(&crate::align::embed_text("soy cream"), RelationType::HasFat);
        let y = m.forward(&x).unwrap();
        let (loss, grad) = m.loss_and_grad(&[TrainSample { x, y }]).unwrap();
        assert_eq!(loss, 0.0);
        assert!(grad.slices().iter().all(|s| s.iter().all(|&g| g == 0.0)));
    }

    #[test]
    fn doubling_residual_quadruples_loss() {
        let m = init_model(&cfg(2));
        let x = TrainSample::encode(&crate::align::embed_text("oat cream"), RelationType::HasFat);
        let y = m.forward(&x).unwrap();
        let (l1, _) = m.loss_and_grad(&[TrainSample { x: x.clone(), y: y - 0.3 }]).unwrap();
        let (l2, _) = m.loss_and_grad(&[TrainSample { x, y: y - 0.6 }]).unwrap();
        assert!((l2 - 4.0 * l1).abs() < 1e-12);
    }

    #[test]
    fn empty_batch_rejected() {
        assert_eq!(init_model(&cfg(1)).loss_and_grad(&[]).unwrap_err(), ImputerError::EmptyBatch);
    }
}
