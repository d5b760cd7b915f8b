use std::collections::BTreeSet;

use super::{NutrientDelta, RecommendError, Substitution};
use crate::graph::{Graph, GraphError, IngredientProfile, Measure, NodeKind, RelationType};

fn footprint(g: &Graph, id: &str) -> Option<Measure> {
    g.measure(id, RelationType::HasWaterFootprint)
}

pub(super) fn require_ingredient(g: &Graph, id: &str) -> Result<(), RecommendError> {
    match g.kind(id) {
        None => Err(GraphError::UnknownNode(id.to_string()).into()),
        Some(NodeKind::Ingredient) => Ok(()),
        Some(_) => Err(GraphError::NotAnIngredient(id.to_string()).into()),
    }
}

/// Same-tier ingredients with a strictly smaller water footprint than `id`.
///
/// The tier is the set of ingredient siblings under `id`'s parent. When no
/// sibling passes the footprint filter, the tier widens to every ingredient
/// below the grandparent. Candidates without a footprint are never proposed.
pub fn candidate_substitutes<'g>(g: &'g Graph, id: &str) -> Result<BTreeSet<&'g str>, RecommendError> {
    require_ingredient(g, id)?;
    let wf = footprint(g, id).ok_or_else(|| RecommendError::NoFootprint(id.to_string()))?.value;
    let lower = |c: &&str| footprint(g, c).is_some_and(|m| m.value < wf);

    let Some(parent) = g.parent_of(id)? else {
        return Ok(BTreeSet::new());
    };
    let siblings: BTreeSet<&str> = g.siblings(id)?.into_iter().filter(lower).collect();
    if !siblings.is_empty() {
        return Ok(siblings);
    }
    let Some(grandparent) = g.parent_of(parent)? else {
        return Ok(siblings);
    };
    Ok(g.descendants(grandparent)?
        .into_iter()
        .filter(|&c| c != id && g.kind(c) == Some(NodeKind::Ingredient))
        .filter(lower)
        .collect())
}

/// Per-100 g deltas for the nutrients both profiles carry.
pub fn nutrient_deltas(original: &IngredientProfile, candidate: &IngredientProfile) -> Vec<NutrientDelta> {
    original
        .nutrients
        .iter()
        .filter_map(|(&nutrient, before)| {
            let after = candidate.nutrients.get(&nutrient)?;
            Some(NutrientDelta {
                nutrient,
                before: before.value,
                after: after.value,
                delta: after.value - before.value,
                imputed: before.imputed() || after.imputed(),
            })
        })
        .collect()
}

/// L1 distance over shared nutrients; the ranking tie-break. Folds from +0 so
/// that no shared nutrients gives 0.0, not the -0.0 an empty float `sum` yields,
/// which `total_cmp` would rank ahead of other zero distances.
pub fn nutrient_distance(deltas: &[NutrientDelta]) -> f64 {
    deltas.iter().fold(0.0, |acc, d| acc + d.delta.abs())
}

/// Orders candidates by footprint, then nutrient distance to the original,
/// then id, and numbers them from 1.
pub fn rank_candidates<'a>(
    g: &Graph,
    id: &str,
    candidates: impl IntoIterator<Item = &'a str>,
) -> Result<Vec<Substitution>, RecommendError> {
    let original = g.get_profile(id)?;
    let wf_original = original.wf.ok_or_else(|| RecommendError::NoFootprint(id.to_string()))?;
    let mut out = Vec::new();
    for c in candidates {
        let profile = g.get_profile(c)?;
        let wf_candidate = profile.wf.ok_or_else(|| RecommendError::NoFootprint(c.to_string()))?;
        let nutrient_deltas = nutrient_deltas(&original, &profile);
        out.push(Substitution {
            original: id.to_string(),
            candidate: c.to_string(),
            wf_original: wf_original.value,
            wf_candidate: wf_candidate.value,
            wf_delta: wf_candidate.value - wf_original.value,
            wf_original_imputed: wf_original.imputed(),
            wf_candidate_imputed: wf_candidate.imputed(),
            nutrient_distance: nutrient_distance(&nutrient_deltas),
            nutrient_deltas,
            rank: 0,
        });
    }
    out.sort_by(|a, b| {
        a.wf_candidate
            .total_cmp(&b.wf_candidate)
            .then(a.nutrient_distance.total_cmp(&b.nutrient_distance))
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    out.dedup_by(|a, b| a.candidate == b.candidate);
    for (i, s) in out.iter_mut().enumerate() {
        s.rank = i + 1;
    }
    Ok(out)
}

/// [`candidate_substitutes`] followed by [`rank_candidates`].
pub fn recommend(g: &Graph, id: &str) -> Result<Vec<Substitution>, RecommendError> {
    let candidates = candidate_substitutes(g, id)?;
    rank_candidates(g, id, candidates)
}
