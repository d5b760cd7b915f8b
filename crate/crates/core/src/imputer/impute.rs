use serde::{Deserialize, Serialize};

use super::model::ModelParams;
use super::normalizer::TargetNormalizer;
use super::train::train;
use super::{ImputerError, TrainSample, TrainerConfig};
use crate::align::{embed_text, verbalize_edge};
use crate::graph::{Edge, EdgeObject, Graph, NodeKind, Provenance, RelationType, IMPUTED_ID_PREFIX};

pub const MODEL_FORMAT: &str = "aquasub-model";
pub const MODEL_VERSION: u32 = 1;

/// Text an ingredient is embedded from: its `subclass_of` sentence, or its
/// display name at a root. Numeric facts are left out so that a value is
/// never part of its own predictor.
pub fn ingredient_text(g: &Graph, id: &str) -> String {
    match g.out_edges(id, RelationType::SubclassOf).next() {
        Some(e) => verbalize_edge(e, g),
        None => g.display_name(id),
    }
}

/// Measured numeric facts on ingredient nodes, in (id, relation) order.
pub fn measured_values(g: &Graph) -> Vec<(String, RelationType, f64)> {
    let mut out = Vec::new();
    for id in g.nodes_of_kind(NodeKind::Ingredient) {
        for r in RelationType::NUMERIC {
            if let Some(m) = g.measure(id, r).filter(|m| m.provenance == Provenance::Measured) {
                out.push((id.to_string(), r, m.value));
            }
        }
    }
    out
}

pub fn training_samples(g: &Graph, norm: &TargetNormalizer) -> Vec<TrainSample> {
    measured_values(g)
        .into_iter()
        .filter_map(|(id, r, v)| {
            let y = norm.normalize(r, v)?;
            Some(TrainSample { x: TrainSample::encode(&embed_text(&ingredient_text(g, &id)), r), y })
        })
        .collect()
}

/// Everything needed to reproduce predictions: config, target scaling and weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputerModel {
    pub format: String,
    pub version: u32,
    pub config: TrainerConfig,
    pub normalizer: TargetNormalizer,
    pub params: ModelParams,
}

impl ImputerModel {
    pub fn new(config: TrainerConfig, normalizer: TargetNormalizer, params: ModelParams) -> Self {
        Self { format: MODEL_FORMAT.to_string(), version: MODEL_VERSION, config, normalizer, params }
    }

    /// Fits the normalizer on the graph's measured values and trains on them.
    pub fn fit(g: &Graph, config: &TrainerConfig) -> Result<(Self, Vec<f64>), ImputerError> {
        let normalizer = TargetNormalizer::fit(measured_values(g).into_iter().map(|(_, r, v)| (r, v)));
        let data = training_samples(g, &normalizer);
        let (params, curve) = train(&data, config)?;
        Ok((Self::new(config.clone(), normalizer, params), curve))
    }

    /// Predicted value of `relation` for an ingredient, in original units.
    pub fn predict(&self, g: &Graph, id: &str, relation: RelationType) -> Result<f64, ImputerError> {
        let x = TrainSample::encode(&embed_text(&ingredient_text(g, id)), relation);
        let normalized = self.params.forward(&x)?;
        self.normalizer.denormalize(relation, normalized).ok_or(ImputerError::UnscaledRelation(relation))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ImputerError> {
        let m: ImputerModel = serde_json::from_str(text).map_err(|e| ImputerError::ModelFile(e.to_string()))?;
        if m.format != MODEL_FORMAT || m.version != MODEL_VERSION {
            return Err(ImputerError::ModelFile(format!("unsupported model format {} v{}", m.format, m.version)));
        }
        Ok(m)
    }
}

/// A new graph version where every ingredient lacking a relation the model
/// was scaled for gains an imputed edge. Measured edges are untouched.
pub fn impute_missing(g: &Graph, model: &ImputerModel) -> Result<Graph, ImputerError> {
    let mut extra = Vec::new();
    for id in g.nodes_of_kind(NodeKind::Ingredient) {
        for r in model.normalizer.relations() {
            if g.measure(id, r).is_some() {
                continue;
            }
            let value = model.predict(g, id, r)?;
            extra.push(Edge {
                id: format!("{IMPUTED_ID_PREFIX}{id}-{}", r.label()),
                subject: id.to_string(),
                relation: r,
                object: EdgeObject::Number { value, unit: None },
                provenance: Provenance::Imputed,
            });
        }
    }
    if extra.is_empty() {
        return Ok(g.clone());
    }
    Ok(g.with_added_edges(extra)?)
}
