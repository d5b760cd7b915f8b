//! Missing-value imputation for water footprints and nutrients.
//!
//! A small MLP maps an ingredient embedding concatenated with a relation
//! one-hot to a normalized target value. It is trained with Adam on MSE.

mod impute;
mod model;
mod normalizer;
mod train;

pub use impute::{impute_missing, ingredient_text, measured_values, training_samples, ImputerModel, MODEL_FORMAT, MODEL_VERSION};
pub use model::{he_bound, init_model, layer_widths, Dense, ModelParams};
pub use normalizer::{RelationScale, TargetNormalizer, TARGET_SHIFT};
pub use train::{loss_curve_csv, train, Adam};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::{EmbeddingVector, EMBED_DIM};
use crate::graph::{GraphError, RelationType};

pub const RELATION_COUNT: usize = RelationType::ALL.len();
pub const INPUT_DIM: usize = EMBED_DIM + RELATION_COUNT;
pub const HIDDEN_WIDTH: usize = 64;
pub const HIDDEN_LAYERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImputerError {
    #[error("input has {found} features, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty training batch")]
    EmptyBatch,
    #[error("loss became non-finite in epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("invalid trainer config: {0}")]
    InvalidConfig(String),
    #[error("model has no target scale for {0}")]
    UnscaledRelation(RelationType),
    #[error("model file: {0}")]
    ModelFile(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-3, beta1: 0.9, beta2: 0.999, epsilon: 1e-8, batch_size: 32, max_epochs: 300, seed: 42 }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<(), ImputerError> {
        let positive = [
            ("learning_rate", self.learning_rate),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("epsilon", self.epsilon),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ImputerError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.beta1 >= 1.0 || self.beta2 >= 1.0 {
            return Err(ImputerError::InvalidConfig("beta1 and beta2 must be below 1".into()));
        }
        if self.batch_size == 0 || self.max_epochs == 0 {
            return Err(ImputerError::InvalidConfig("batch_size and max_epochs must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSample {
    /// Embedding followed by the relation one-hot.
    pub x: Vec<f64>,
    /// Target in normalized space.
    pub y: f64,
}

impl TrainSample {
    pub fn encode(embedding: &EmbeddingVector, relation: RelationType) -> Vec<f64> {
        let mut x = Vec::with_capacity(INPUT_DIM);
        x.extend_from_slice(embedding.as_slice());
        x.extend((0..RELATION_COUNT).map(|i| if i == relation.index() { 1.0 } else { 0.0 }));
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::embed_text;

    #[test]
    fn encoding_has_one_hot_tail() {
        let x = TrainSample::encode(&embed_text("sugar"), RelationType::HasFat);
        assert_eq!(x.len(), 141);
        let tail = &x[EMBED_DIM..];
        assert_eq!(tail.iter().filter(|&&v| v == 1.0).count(), 1);
        assert_eq!(tail.iter().filter(|&&v| v == 0.0).count(), 12);
        assert_eq!(tail[RelationType::HasFat.index()], 1.0);
    }

    #[test]
    fn default_config_is_valid() {
        TrainerConfig::default().validate().unwrap();
        assert!(TrainerConfig { beta2: 1.0, ..TrainerConfig::default() }.validate().is_err());
        assert!(TrainerConfig { batch_size: 0, ..TrainerConfig::default() }.validate().is_err());
    }
}
