//! Seeded synthetic food graph at a chosen node count, for scale and latency
//! runs. Every one of the 13 relation types occurs.
//!
//! Layout: one root class, `groups` top classes, `subgroups` classes under
//! each, ingredients spread over the bottom classes, recipes over the
//! ingredients, and one node per nutrient carrying its unit.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Graph, GraphError, Nutrient, RelationType};

/// Node count of the full-size scale graph.
pub const SCALE_NODE_COUNT: usize = 20_778;

const PREFIXES: [&str; 20] = [
    "oat", "soy", "almond", "coconut", "rice", "wheat", "corn", "dairy", "goat", "sheep", "cane", "beet", "maple",
    "black", "white", "red", "green", "wild", "sweet", "smoked",
];
const BASES: [&str; 20] = [
    "cream", "milk", "flour", "oil", "butter", "cheese", "sugar", "syrup", "rice", "bean", "lentil", "nut", "seed",
    "berry", "apple", "tomato", "pepper", "onion", "garlic", "herb",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub nodes: usize,
    pub seed: u64,
    pub groups: usize,
    pub subgroups: usize,
    /// Share of non-class, non-nutrient nodes that are recipes.
    pub recipe_share: f64,
    /// Share of ingredients left without a water footprint.
    pub missing_wf_share: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { nodes: SCALE_NODE_COUNT, seed: 20_778, groups: 12, subgroups: 10, recipe_share: 0.22, missing_wf_share: 0.02 }
    }
}

impl SynthConfig {
    fn class_count(&self) -> usize {
        1 + self.groups + self.groups * self.subgroups
    }

    /// (ingredients, recipes) for the configured node count.
    pub fn split(&self) -> (usize, usize) {
        let rest = self.nodes.saturating_sub(self.class_count() + Nutrient::ALL.len());
        let recipes = (rest as f64 * self.recipe_share).round() as usize;
        (rest - recipes, recipes)
    }
}

fn unit_of(n: Nutrient) -> &'static str {
    match n {
        Nutrient::Calories => "kcal",
        Nutrient::Sodium => "mg",
        _ => "g",
    }
}

fn nutrient_range(n: Nutrient) -> std::ops::Range<f64> {
    match n {
        Nutrient::Calories => 10.0..900.0,
        Nutrient::Sodium => 0.0..2000.0,
        _ => 0.0..60.0,
    }
}

fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

/// Synthetic edges; the graph they build has exactly `cfg.nodes` nodes as
/// long as that leaves room for at least one ingredient and one recipe.
pub fn synthetic_edges(cfg: &SynthConfig) -> Vec<Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();
    let mut next_id = 0usize;
    let mut push = |edges: &mut Vec<Edge>, mut e: Edge| {
        next_id += 1;
        e.id = format!("s{next_id}");
        edges.push(e);
    };

    let mut leaves = Vec::with_capacity(cfg.groups * cfg.subgroups);
    for g in 0..cfg.groups {
        let group = format!("class_{g:02}");
        push(&mut edges, Edge::node("", &group, RelationType::SubclassOf, "food"));
        for s in 0..cfg.subgroups {
            let leaf = format!("class_{g:02}_{s:02}");
            push(&mut edges, Edge::node("", &leaf, RelationType::SubclassOf, &group));
            leaves.push(leaf);
        }
    }

    for n in Nutrient::ALL {
        push(&mut edges, Edge::text("", format!("nutrient_{}", n.name()), RelationType::HasUnit, unit_of(n)));
    }

    let (ingredients, recipes) = cfg.split();
    let mut ids = Vec::with_capacity(ingredients);
    for i in 0..ingredients {
        let prefix = PREFIXES[rng.random_range(0..PREFIXES.len())];
        let base = BASES[rng.random_range(0..BASES.len())];
        let id = format!("{prefix}_{base}_{i}");
        // Every leaf class gets at least one ingredient so it stays a class.
        let leaf = if i < leaves.len() { &leaves[i] } else { leaves.choose(&mut rng).expect("leaf classes") };
        push(&mut edges, Edge::node("", &id, RelationType::SubclassOf, leaf));
        if !rng.random_bool(cfg.missing_wf_share) {
            push(&mut edges, Edge::number("", &id, RelationType::HasWaterFootprint, round1(rng.random_range(50.0..20_000.0))));
        }
        for n in Nutrient::ALL {
            if i < Nutrient::ALL.len() || rng.random_bool(0.6) {
                push(&mut edges, Edge::number("", &id, n.relation(), round1(rng.random_range(nutrient_range(n)))));
            }
        }
        if rng.random_bool(0.25) {
            push(&mut edges, Edge::text("", &id, RelationType::HasLabel, format!("{prefix} {base} {i}")));
        }
        if i > 0 && rng.random_bool(0.05) {
            let other: &String = ids.choose(&mut rng).expect("earlier ingredient");
            push(&mut edges, Edge::node("", &id, RelationType::SameAs, other));
        }
        ids.push(id);
    }

    for r in 0..recipes {
        let recipe = format!("recipe_{r}");
        let k = rng.random_range(2..=6).min(ids.len());
        for ing in ids.choose_multiple(&mut rng, k) {
            push(&mut edges, Edge::node("", &recipe, RelationType::HasIngredient, ing));
        }
    }
    edges
}

pub fn synthetic_graph(cfg: &SynthConfig) -> Result<Graph, GraphError> {
    Graph::build(synthetic_edges(cfg))
}
