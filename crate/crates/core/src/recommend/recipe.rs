use std::collections::BTreeMap;

use super::report::DeltaReport;
use super::tier::recommend;
use super::{RecommendError, Substitution};
use crate::align::{LinkConfig, LinkTable, Matcher};
use crate::graph::{Graph, IngredientProfile, NodeKind};

/// Maps user-typed names onto ingredient ids: the link table first, then the
/// exact/normalized/embedding cascade against the graph's own ingredients.
/// Nothing is minted; a name that fails every stage stays unresolved.
#[derive(Debug, Clone)]
pub struct Resolver {
    links: LinkTable,
    matcher: Matcher,
}

impl Resolver {
    pub fn new(g: &Graph, links: LinkTable) -> Self {
        Self::with_config(g, links, LinkConfig::default())
    }

    pub fn with_config(g: &Graph, links: LinkTable, config: LinkConfig) -> Self {
        let ingredients = g.nodes_of_kind(NodeKind::Ingredient);
        let names: Vec<String> = ingredients.iter().map(|id| g.display_name(id)).collect();
        let matcher = Matcher::new(ingredients.iter().copied().zip(names.iter().map(String::as_str)), config);
        Self { links, matcher }
    }

    pub fn links(&self) -> &LinkTable {
        &self.links
    }

    pub fn resolve(&self, g: &Graph, name: &str) -> Option<String> {
        let name = name.trim();
        if name.is_empty() {
            return None;
        }
        if let Some(id) = self.links.canonical_id(name) {
            if g.kind(id) == Some(NodeKind::Ingredient) {
                return Some(id.to_string());
            }
        }
        match self.matcher.resolve(name) {
            Ok(Some(m)) => Some(m.id),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecipeItem {
    /// The name as given, or the candidate id after a swap.
    pub name: String,
    pub id: String,
    pub profile: IngredientProfile,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecipeAnalysis {
    pub items: Vec<RecipeItem>,
    /// Sum of member footprints in m³/ton; members without one contribute nothing.
    pub total_wf: f64,
    /// Ranked substitutes per distinct member id.
    pub options: BTreeMap<String, Vec<Substitution>>,
    pub unresolved: Vec<String>,
    /// Members lacking a footprint, by id.
    pub no_footprint: Vec<String>,
}

impl RecipeAnalysis {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.id.as_str())
    }

    pub fn best_swap(&self) -> Option<&Substitution> {
        self.options.values().filter_map(|v| v.first()).min_by(|a, b| {
            a.wf_delta.total_cmp(&b.wf_delta).then_with(|| (&a.original, &a.candidate).cmp(&(&b.original, &b.candidate)))
        })
    }
}

fn assemble(g: &Graph, items: Vec<RecipeItem>, unresolved: Vec<String>) -> Result<RecipeAnalysis, RecommendError> {
    let mut a = RecipeAnalysis { unresolved, ..RecipeAnalysis::default() };
    for item in &items {
        match item.profile.wf {
            Some(wf) => a.total_wf += wf.value,
            None => {
                if !a.no_footprint.contains(&item.id) {
                    a.no_footprint.push(item.id.clone());
                }
                continue;
            }
        }
        if !a.options.contains_key(&item.id) {
            a.options.insert(item.id.clone(), recommend(g, &item.id)?);
        }
    }
    a.items = items;
    Ok(a)
}

/// Resolves `names`, totals the footprint and ranks substitutes for each member.
pub fn analyze_recipe<S: AsRef<str>>(g: &Graph, names: &[S], resolver: &Resolver) -> Result<RecipeAnalysis, RecommendError> {
    let mut items = Vec::new();
    let mut unresolved = Vec::new();
    for name in names {
        let name = name.as_ref();
        match resolver.resolve(g, name) {
            Some(id) => items.push(RecipeItem { name: name.to_string(), profile: g.get_profile(&id)?, id }),
            None => unresolved.push(name.to_string()),
        }
    }
    assemble(g, items, unresolved)
}

/// Swaps the first occurrence of `original` for `candidate` and re-analyzes.
/// `candidate` must be among the ranked options for `original`.
pub fn apply_substitution(
    g: &Graph,
    a: &RecipeAnalysis,
    original: &str,
    candidate: &str,
) -> Result<(RecipeAnalysis, DeltaReport), RecommendError> {
    let rejected = || RecommendError::NotARecommendedCandidate {
        original: original.to_string(),
        candidate: candidate.to_string(),
    };
    let sub = a
        .options
        .get(original)
        .and_then(|opts| opts.iter().find(|s| s.candidate == candidate))
        .ok_or_else(rejected)?;
    let pos = a.items.iter().position(|i| i.id == original).ok_or_else(rejected)?;
    let mut items = a.items.clone();
    items[pos] = RecipeItem { name: candidate.to_string(), id: candidate.to_string(), profile: g.get_profile(candidate)? };
    let updated = assemble(g, items, a.unresolved.clone())?;
    let report = DeltaReport::for_recipe(sub, a.total_wf, updated.total_wf);
    Ok((updated, report))
}
