use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::{init_model, ModelParams};
use super::{ImputerError, TrainSample, TrainerConfig};

/// Adam state: first and second moment estimates plus the step counter.
#[derive(Debug, Clone)]
pub struct Adam {
    m: ModelParams,
    v: ModelParams,
    step: i32,
}

impl Adam {
    pub fn new(params: &ModelParams) -> Self {
        Self { m: params.zeros_like(), v: params.zeros_like(), step: 0 }
    }

    /// One bias-corrected Adam update of `params` along `grad`.
    pub fn update(&mut self, params: &mut ModelParams, grad: &ModelParams, cfg: &TrainerConfig) {
        self.step += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.step);
        let c2 = 1.0 - cfg.beta2.powi(self.step);
        let bufs = params.slices_mut().into_iter().zip(grad.slices()).zip(self.m.slices_mut()).zip(self.v.slices_mut());
        for (((p, g), m), v) in bufs {
            for i in 0..p.len() {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                let m_hat = m[i] / c1;
                let v_hat = v[i] / c2;
                p[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
            }
        }
    }
}

/// Trains from a fresh [`init_model`] with minibatch Adam on MSE.
///
/// The returned curve has `max_epochs + 1` entries: the full-data MSE before
/// training, then after each epoch.
pub fn train(data: &[TrainSample], cfg: &TrainerConfig) -> Result<(ModelParams, Vec<f64>), ImputerError> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(ImputerError::EmptyBatch);
    }
    let mut params = init_model(cfg);
    let mut adam = Adam::new(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut batch = Vec::with_capacity(cfg.batch_size);

    let mut curve = Vec::with_capacity(cfg.max_epochs + 1);
    curve.push(params.mse(data)?);
    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data[i].clone()));
            let (loss, grad) = params.loss_and_grad(&batch)?;
            if !loss.is_finite() {
                return Err(ImputerError::NonFiniteLoss { epoch });
            }
            adam.update(&mut params, &grad, cfg);
            if !params.all_finite() {
                return Err(ImputerError::NonFiniteLoss { epoch });
            }
        }
        let mse = params.mse(data)?;
        if !mse.is_finite() {
            return Err(ImputerError::NonFiniteLoss { epoch });
        }
        curve.push(mse);
    }
    Ok((params, curve))
}

/// `epoch,mse` CSV of a loss curve.
pub fn loss_curve_csv(curve: &[f64]) -> String {
    let mut out = String::from("epoch,mse\n");
    for (epoch, mse) in curve.iter().enumerate() {
        out.push_str(&format!("{epoch},{mse}\n"));
    }
    out
}
