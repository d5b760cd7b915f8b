//! JSON bodies. Every real number is written with exactly three decimals so
//! that identical inputs give byte-identical output.

use std::collections::BTreeMap;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::recipe::{RecipeAnalysis, RecipeItem};
use super::{NutrientDelta, Substitution};
use crate::graph::Nutrient;

fn format3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

pub fn fixed3<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return s.serialize_none();
    }
    RawValue::from_string(format3(*v)).map_err(S::Error::custom)?.serialize(s)
}

pub fn fixed3_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => fixed3(v, s),
        None => s.serialize_none(),
    }
}

/// Footprint and nutrient change of one swap. For a single ingredient the
/// footprints are the two ingredients' values; for a recipe they are the
/// recipe totals before and after.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub original: String,
    pub candidate: String,
    #[serde(serialize_with = "fixed3")]
    pub wf_before: f64,
    #[serde(serialize_with = "fixed3")]
    pub wf_after: f64,
    #[serde(serialize_with = "fixed3")]
    pub wf_delta: f64,
    pub wf_imputed: bool,
    pub nutrients: Vec<NutrientDelta>,
}

impl DeltaReport {
    pub fn for_ingredient(s: &Substitution) -> Self {
        Self {
            rank: Some(s.rank),
            original: s.original.clone(),
            candidate: s.candidate.clone(),
            wf_before: s.wf_original,
            wf_after: s.wf_candidate,
            wf_delta: s.wf_delta,
            wf_imputed: s.imputed(),
            nutrients: s.nutrient_deltas.clone(),
        }
    }

    pub fn for_recipe(s: &Substitution, total_before: f64, total_after: f64) -> Self {
        Self {
            rank: None,
            wf_before: total_before,
            wf_after: total_after,
            wf_delta: total_after - total_before,
            ..Self::for_ingredient(s)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngredientReport {
    pub name: String,
    pub id: String,
    pub display_name: String,
    #[serde(serialize_with = "fixed3_opt")]
    pub wf: Option<f64>,
    pub wf_imputed: bool,
    pub parent_class: Option<String>,
    pub nutrients: BTreeMap<Nutrient, NutrientValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NutrientValue {
    #[serde(serialize_with = "fixed3")]
    pub value: f64,
    pub imputed: bool,
}

impl From<&RecipeItem> for IngredientReport {
    fn from(item: &RecipeItem) -> Self {
        let p = &item.profile;
        Self {
            name: item.name.clone(),
            id: item.id.clone(),
            display_name: p.display_name.clone(),
            wf: p.wf.map(|m| m.value),
            wf_imputed: p.wf.is_some_and(|m| m.imputed()),
            parent_class: p.parent_class.clone(),
            nutrients: p
                .nutrients
                .iter()
                .map(|(&n, m)| (n, NutrientValue { value: m.value, imputed: m.imputed() }))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub ingredients: Vec<IngredientReport>,
    #[serde(serialize_with = "fixed3")]
    pub total_wf: f64,
    pub options: BTreeMap<String, Vec<DeltaReport>>,
    pub unresolved: Vec<String>,
    pub no_footprint: Vec<String>,
}

impl From<&RecipeAnalysis> for AnalysisReport {
    fn from(a: &RecipeAnalysis) -> Self {
        Self {
            ingredients: a.items.iter().map(IngredientReport::from).collect(),
            total_wf: a.total_wf,
            options: a
                .options
                .iter()
                .map(|(id, subs)| (id.clone(), subs.iter().map(DeltaReport::for_ingredient).collect()))
                .collect(),
            unresolved: a.unresolved.clone(),
            no_footprint: a.no_footprint.clone(),
        }
    }
}
