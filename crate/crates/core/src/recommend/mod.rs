//! Same-tier substitution with a strict water-footprint filter, plus
//! recipe-level footprint accounting.

mod recipe;
mod report;
mod tier;

pub use recipe::{analyze_recipe, apply_substitution, RecipeAnalysis, RecipeItem, Resolver};
pub use report::{fixed3, fixed3_opt, AnalysisReport, DeltaReport, IngredientReport};
pub use tier::{candidate_substitutes, nutrient_deltas, nutrient_distance, rank_candidates, recommend};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, Nutrient};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecommendError {
    #[error("{0} has no water footprint")]
    NoFootprint(String),
    #[error("{candidate} is not a recommended substitute for {original} in this recipe")]
    NotARecommendedCandidate { original: String, candidate: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NutrientDelta {
    #[serde(rename = "name")]
    pub nutrient: Nutrient,
    #[serde(serialize_with = "fixed3")]
    pub before: f64,
    #[serde(serialize_with = "fixed3")]
    pub after: f64,
    #[serde(serialize_with = "fixed3")]
    pub delta: f64,
    /// Either side of the comparison was imputed.
    pub imputed: bool,
}

/// One ranked swap of `original` for `candidate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    pub original: String,
    pub candidate: String,
    pub wf_original: f64,
    pub wf_candidate: f64,
    /// `wf_candidate - wf_original`, always negative.
    pub wf_delta: f64,
    pub wf_original_imputed: bool,
    pub wf_candidate_imputed: bool,
    pub nutrient_deltas: Vec<NutrientDelta>,
    pub nutrient_distance: f64,
    pub rank: usize,
}

impl Substitution {
    pub fn imputed(&self) -> bool {
        self.wf_original_imputed || self.wf_candidate_imputed
    }

    pub fn nutrient_delta(&self, n: Nutrient) -> Option<&NutrientDelta> {
        self.nutrient_deltas.iter().find(|d| d.nutrient == n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::LinkTable;
    use crate::graph::{build_graph, Edge, Graph, Provenance, RelationType::*};

    fn cream_graph() -> Graph {
        let mut edges = Vec::new();
        let mut id = 0;
        let mut next = || {
            id += 1;
            format!("e{id}")
        };
        for (c, p) in [
            ("fat_and_cream", "food"),
            ("cream_product", "fat_and_cream"),
            ("plant_cream", "cream_product"),
            ("dairy_cream", "cream_product"),
            ("whipping_cream", "cream_product"),
            ("soy_cream", "plant_cream"),
            ("oat_cream", "plant_cream"),
            ("coconut_cream", "plant_cream"),
            ("sugar", "sweetener"),
            ("sweetener", "food"),
        ] {
            edges.push(Edge::node(next(), c, SubclassOf, p));
        }
        for (n, wf, fat) in [
            ("dairy_cream", 4000.0, 36.0),
            ("whipping_cream", 4300.0, 30.9),
            ("soy_cream", 1200.0, 3.0),
            ("oat_cream", 900.0, 12.8),
            ("coconut_cream", 4650.0, 34.7),
            ("sugar", 180.0, 0.0),
        ] {
            edges.push(Edge::number(next(), n, HasWaterFootprint, wf));
            edges.push(Edge::number(next(), n, HasFat, fat));
        }
        build_graph(edges).unwrap()
    }

    #[test]
    fn falls_back_to_grandparent_tier() {
        let g = cream_graph();
        assert_eq!(g.siblings("dairy_cream").unwrap().into_iter().collect::<Vec<_>>(), ["whipping_cream"]);
        let c = candidate_substitutes(&g, "dairy_cream").unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), ["oat_cream", "soy_cream"]);
    }

    #[test]
    fn sibling_tier_when_it_has_lower_footprints() {
        let g = cream_graph();
        let c = candidate_substitutes(&g, "coconut_cream").unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), ["oat_cream", "soy_cream"]);
        // whipping_cream: sibling dairy_cream is lower, so no widening to plant creams.
        let c = candidate_substitutes(&g, "whipping_cream").unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), ["dairy_cream"]);
    }

    #[test]
    fn ranking_and_deltas() {
        let g = cream_graph();
        let ranked = recommend(&g, "dairy_cream").unwrap();
        let order: Vec<_> = ranked.iter().map(|s| (s.candidate.as_str(), s.rank)).collect();
        assert_eq!(order, [("oat_cream", 1), ("soy_cream", 2)]);
        assert_eq!(ranked[0].wf_delta, -3100.0);
        let fat = ranked[0].nutrient_delta(Nutrient::Fat).unwrap();
        assert!((fat.delta - (12.8 - 36.0)).abs() < 1e-12);
        assert!(!ranked[0].imputed());
    }

    #[test]
    fn equal_footprint_and_ties() {
        let g = build_graph(vec![
            Edge::node("1", "a", SubclassOf, "k"),
            Edge::node("2", "b", SubclassOf, "k"),
            Edge::node("3", "c", SubclassOf, "k"),
            Edge::node("4", "d", SubclassOf, "k"),
            Edge::number("5", "a", HasWaterFootprint, 10.0),
            Edge::number("6", "b", HasWaterFootprint, 10.0),
            Edge::number("7", "c", HasWaterFootprint, 5.0),
            Edge::number("8", "d", HasWaterFootprint, 5.0),
        ])
        .unwrap();
        // b has the same footprint as a, so it is not a candidate.
        let ranked = recommend(&g, "a").unwrap();
        let ids: Vec<_> = ranked.iter().map(|s| s.candidate.as_str()).collect();
        assert_eq!(ids, ["c", "d"]);
    }

    #[test]
    fn zero_distance_without_shared_nutrients_ties_on_id() {
        // c shares fat with a at zero delta; b shares nothing. Both are at
        // distance zero, so the id decides.
        let g = build_graph(vec![
            Edge::node("1", "a", SubclassOf, "k"),
            Edge::node("2", "b", SubclassOf, "k"),
            Edge::node("3", "c", SubclassOf, "k"),
            Edge::number("4", "a", HasWaterFootprint, 10.0),
            Edge::number("5", "b", HasWaterFootprint, 5.0),
            Edge::number("6", "c", HasWaterFootprint, 5.0),
            Edge::number("7", "a", HasFat, 2.0),
            Edge::number("8", "c", HasFat, 2.0),
        ])
        .unwrap();
        let ranked = recommend(&g, "a").unwrap();
        let ids: Vec<_> = ranked.iter().map(|s| s.candidate.as_str()).collect();
        assert_eq!(ids, ["b", "c"]);
        assert!(ranked.iter().all(|s| s.nutrient_distance.is_sign_positive()));
    }

    #[test]
    fn root_and_missing_footprint() {
        let g = cream_graph();
        assert!(matches!(candidate_substitutes(&g, "cream_product"), Err(RecommendError::Graph(_))));
        let g = build_graph(vec![Edge::node("1", "a", SubclassOf, "k"), Edge::number("2", "a", HasFat, 1.0)]).unwrap();
        assert_eq!(candidate_substitutes(&g, "a"), Err(RecommendError::NoFootprint("a".into())));
        let g = build_graph(vec![Edge::number("1", "solo", HasWaterFootprint, 3.0)]).unwrap();
        assert!(candidate_substitutes(&g, "solo").unwrap().is_empty());
    }

    #[test]
    fn imputed_values_are_flagged() {
        let g = cream_graph();
        let mut edges = g.edges().to_vec();
        let soy = edges.iter_mut().find(|e| e.subject == "soy_cream" && e.relation == HasWaterFootprint).unwrap();
        soy.provenance = Provenance::Imputed;
        let g = build_graph(edges).unwrap();
        let ranked = recommend(&g, "dairy_cream").unwrap();
        assert!(!ranked[0].imputed());
        assert!(ranked[1].imputed());
    }

    #[test]
    fn recipe_total_and_swap() {
        let g = cream_graph();
        let resolver = Resolver::new(&g, LinkTable::default());
        let a = analyze_recipe(&g, &["dairy_cream", "sugar", "qqqq-unknown"], &resolver).unwrap();
        assert_eq!(a.total_wf, 4180.0);
        assert_eq!(a.unresolved, ["qqqq-unknown"]);
        assert_eq!(a.best_swap().unwrap().candidate, "oat_cream");

        let (b, report) = apply_substitution(&g, &a, "dairy_cream", "oat_cream").unwrap();
        assert_eq!(b.total_wf, 1080.0);
        assert_eq!((report.wf_before, report.wf_after, report.wf_delta), (4180.0, 1080.0, -3100.0));
        assert!(report.nutrients.iter().any(|n| n.nutrient == Nutrient::Fat));

        // The reverse swap is never on offer.
        let back = apply_substitution(&g, &b, "oat_cream", "dairy_cream");
        assert!(matches!(back, Err(RecommendError::NotARecommendedCandidate { .. })));
    }

    #[test]
    fn names_resolve_through_cascade() {
        let g = cream_graph();
        let resolver = Resolver::new(&g, LinkTable::default());
        assert_eq!(resolver.resolve(&g, "Fresh Oat Cream").as_deref(), Some("oat_cream"));
        // Classes are never recipe members; the name falls through to the nearest ingredient.
        assert_ne!(resolver.resolve(&g, "plant_cream").as_deref(), Some("plant_cream"));
        assert_eq!(resolver.resolve(&g, "qqqq"), None);
        let a = analyze_recipe::<&str>(&g, &[], &resolver).unwrap();
        assert_eq!(a.total_wf, 0.0);
        assert!(a.options.is_empty());
    }

    #[test]
    fn json_is_byte_stable() {
        let g = cream_graph();
        let resolver = Resolver::new(&g, LinkTable::default());
        let a = analyze_recipe(&g, &["dairy_cream", "sugar"], &resolver).unwrap();
        let (_, report) = apply_substitution(&g, &a, "dairy_cream", "oat_cream").unwrap();
        assert_eq!(
            report.to_json(),
            r#"{"original":"dairy_cream","candidate":"oat_cream","wf_before":4180.000,"wf_after":1080.000,"wf_delta":-3100.000,"wf_imputed":false,"nutrients":[{"name":"fat","before":36.000,"after":12.800,"delta":-23.200,"imputed":false}]}"#
        );
        let j1 = serde_json::to_string(&AnalysisReport::from(&a)).unwrap();
        let j2 = serde_json::to_string(&AnalysisReport::from(&analyze_recipe(&g, &["dairy_cream", "sugar"], &resolver).unwrap())).unwrap();
        assert_eq!(j1, j2);
        assert!(j1.contains(r#""total_wf":4180.000"#));
    }
}
