use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::RelationType;

/// Normalized targets are shifted by this many standard deviations so that
/// they sit in the range of a ReLU output.
pub const TARGET_SHIFT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationScale {
    pub mean: f64,
    pub std: f64,
}

/// Per-relation `log1p` + z-score + shift transform of regression targets.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TargetNormalizer {
    pub scales: BTreeMap<RelationType, RelationScale>,
}

impl TargetNormalizer {
    /// Fits mean and population std of `log1p(value)` per relation. A relation
    /// whose transformed values are all equal gets std 1.
    pub fn fit(values: impl IntoIterator<Item = (RelationType, f64)>) -> Self {
        let mut grouped: BTreeMap<RelationType, Vec<f64>> = BTreeMap::new();
        for (r, v) in values {
            grouped.entry(r).or_default().push(v.ln_1p());
        }
        let scales = grouped
            .into_iter()
            .map(|(r, logs)| {
                let n = logs.len() as f64;
                let mean = logs.iter().sum::<f64>() / n;
                let var = logs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
                let std = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
                (r, RelationScale { mean, std })
            })
            .collect();
        Self { scales }
    }

    pub fn relations(&self) -> impl Iterator<Item = RelationType> + '_ {
        self.scales.keys().copied()
    }

    pub fn covers(&self, r: RelationType) -> bool {
        self.scales.contains_key(&r)
    }

    pub fn normalize(&self, r: RelationType, value: f64) -> Option<f64> {
        let s = self.scales.get(&r)?;
        Some((value.ln_1p() - s.mean) / s.std + TARGET_SHIFT)
    }

    /// Inverse of [`normalize`](Self::normalize), clamped at 0.
    pub fn denormalize(&self, r: RelationType, normalized: f64) -> Option<f64> {
        let s = self.scales.get(&r)?;
        Some(((normalized - TARGET_SHIFT) * s.std + s.mean).exp_m1().max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use RelationType::*;

    #[test]
    fn scales_per_relation() {
        let n = TargetNormalizer::fit([(HasWaterFootprint, 900.0), (HasWaterFootprint, 4000.0), (HasFat, 3.0)]);
        assert_eq!(n.relations().collect::<Vec<_>>(), [HasWaterFootprint, HasFat]);
        // Single value: std falls back to 1 and the value maps to the shift.
        assert_eq!(n.scales[&HasFat].std, 1.0);
        assert!((n.normalize(HasFat, 3.0).unwrap() - TARGET_SHIFT).abs() < 1e-12);
        assert!(n.scales[&HasWaterFootprint].std > 0.0);
        assert_eq!(n.normalize(HasSugar, 1.0), None);
    }

    #[test]
    fn denormalize_never_negative() {
        let n = TargetNormalizer::fit([(HasFat, 0.0), (HasFat, 50.0)]);
        assert!(n.denormalize(HasFat, 0.0).unwrap() >= 0.0);
        assert!(n.denormalize(HasFat, -100.0).unwrap() >= 0.0);
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::vec(0.0f64..50_000.0, 1..20), probe in 0.0f64..50_000.0) {
            let n = TargetNormalizer::fit(values.iter().map(|&v| (HasWaterFootprint, v)));
            let back = n.denormalize(HasWaterFootprint, n.normalize(HasWaterFootprint, probe).unwrap()).unwrap();
            prop_assert!((back - probe).abs() <= 1e-9 * (1.0 + probe.abs()), "{} vs {}", back, probe);
        }
    }
}
