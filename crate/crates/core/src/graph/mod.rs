//! Immutable typed property graph over food data.
//!
//! A [`Graph`] is built once from a list of [`Edge`]s and never mutated;
//! imputation produces a new version via [`Graph::with_added_edges`].
//! Lookups by `(node, relation)` are hash-indexed in both directions, and the
//! `subclass_of` subgraph is checked for cycles at build time.

mod relation;
mod snapshot;

pub use relation::{Nutrient, ObjectKind, RelationType};
pub use snapshot::{edge_from_row, edge_to_row, load_snapshot, save_snapshot, SNAPSHOT_MAGIC};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::ingest::IngestError;

/// Edge ids with this prefix carry imputed values.
pub const IMPUTED_ID_PREFIX: &str = "imp-";

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GraphError {
    #[error("edge {edge}: unknown relation label {label:?}")]
    UnknownRelationLabel { label: String, edge: String },
    #[error("subclass_of cycle: {}", path.join(" -> "))]
    CycleDetected { path: Vec<String> },
    #[error("edge {edge}: {reason}")]
    InvalidEdge { edge: String, reason: String },
    #[error("duplicate edge id {0:?}")]
    DuplicateEdgeId(String),
    #[error("{subject} has more than one {relation} value")]
    DuplicateValue { subject: String, relation: RelationType },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("{node} has multiple parents: {}", parents.join(", "))]
    MultipleParents { node: String, parents: Vec<String> },
    #[error("{0} has no parent")]
    NoParent(String),
    #[error("{0} is not an ingredient")]
    NotAnIngredient(String),
    #[error("snapshot header says {expected:?} but content has {actual:?}")]
    SnapshotMismatch { expected: GraphStats, actual: GraphStats },
    #[error("malformed snapshot: {0}")]
    MalformedSnapshot(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Recipe,
    Ingredient,
    OntologyClass,
    Nutrient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Measured,
    Imputed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeObject {
    Node(String),
    Number { value: f64, unit: Option<String> },
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub subject: String,
    pub relation: RelationType,
    pub object: EdgeObject,
    pub provenance: Provenance,
}

impl Edge {
    pub fn node(id: impl Into<String>, subject: impl Into<String>, relation: RelationType, object: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            subject: subject.into(),
            relation,
            object: EdgeObject::Node(object.into()),
            provenance: Provenance::Measured,
        }
    }

    pub fn number(id: impl Into<String>, subject: impl Into<String>, relation: RelationType, value: f64) -> Self {
        Self {
            id: id.into(),
            subject: subject.into(),
            relation,
            object: EdgeObject::Number { value, unit: None },
            provenance: Provenance::Measured,
        }
    }

    pub fn text(id: impl Into<String>, subject: impl Into<String>, relation: RelationType, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            subject: subject.into(),
            relation,
            object: EdgeObject::Text(text.into()),
            provenance: Provenance::Measured,
        }
    }

    pub fn object_node(&self) -> Option<&str> {
        match &self.object {
            EdgeObject::Node(n) => Some(n),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match &self.object {
            EdgeObject::Number { value, .. } => Some(*value),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), GraphError> {
        let invalid = |reason: String| GraphError::InvalidEdge { edge: self.id.clone(), reason };
        if self.subject.is_empty() {
            return Err(invalid("empty subject".into()));
        }
        match (&self.object, self.relation.object_kind()) {
            (EdgeObject::Node(n), ObjectKind::Node) if !n.is_empty() => Ok(()),
            (EdgeObject::Number { value, .. }, ObjectKind::Number) if value.is_finite() && *value >= 0.0 => Ok(()),
            (EdgeObject::Number { value, .. }, ObjectKind::Number) => {
                Err(invalid(format!("{} must be a finite non-negative number, got {value}", self.relation)))
            }
            (EdgeObject::Text(_), ObjectKind::Text) => Ok(()),
            (_, kind) => Err(invalid(format!("{} requires a {kind:?} object", self.relation))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub relation_type_count: usize,
    pub edge_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measure {
    pub value: f64,
    pub provenance: Provenance,
}

impl Measure {
    pub fn imputed(&self) -> bool {
        self.provenance == Provenance::Imputed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngredientProfile {
    pub id: String,
    pub display_name: String,
    /// Water footprint in m³/ton.
    pub wf: Option<Measure>,
    /// Grams (calories: kcal) per 100 g.
    pub nutrients: BTreeMap<Nutrient, Measure>,
    pub parent_class: Option<String>,
}

type NodeIx = u32;

#[derive(Debug, Clone, Default)]
pub struct Graph {
    ids: Vec<String>,
    index: HashMap<String, NodeIx>,
    kinds: Vec<NodeKind>,
    edges: Vec<Edge>,
    out: HashMap<(NodeIx, RelationType), Vec<u32>>,
    inc: HashMap<(NodeIx, RelationType), Vec<u32>>,
    relations: BTreeSet<RelationType>,
}

pub fn build_graph(edges: Vec<Edge>) -> Result<Graph, GraphError> {
    Graph::build(edges)
}

impl Graph {
    pub fn build(edges: Vec<Edge>) -> Result<Graph, GraphError> {
        let mut g = Graph { edges, ..Graph::default() };
        let mut edge_ids = HashSet::with_capacity(g.edges.len());
        let mut numeric_seen = HashSet::new();

        for (ei, e) in g.edges.iter().enumerate() {
            e.validate()?;
            if !edge_ids.insert(e.id.as_str()) {
                return Err(GraphError::DuplicateEdgeId(e.id.clone()));
            }
            let s = intern(&mut g.ids, &mut g.index, &e.subject);
            if e.relation.is_numeric() && !numeric_seen.insert((s, e.relation)) {
                return Err(GraphError::DuplicateValue { subject: e.subject.clone(), relation: e.relation });
            }
            g.out.entry((s, e.relation)).or_default().push(ei as u32);
            if let EdgeObject::Node(o) = &e.object {
                let o = intern(&mut g.ids, &mut g.index, o);
                g.inc.entry((o, e.relation)).or_default().push(ei as u32);
            }
            g.relations.insert(e.relation);
        }

        g.kinds = (0..g.ids.len() as NodeIx).map(|n| g.infer_kind(n)).collect();
        g.check_acyclic()?;
        Ok(g)
    }

    /// Kind precedence: recipe, nutrient, ingredient (has data or is used in a
    /// recipe), ontology class (has subclasses), then ingredient.
    fn infer_kind(&self, n: NodeIx) -> NodeKind {
        let has_out = |r| self.out.contains_key(&(n, r));
        if has_out(RelationType::HasIngredient) {
            NodeKind::Recipe
        } else if has_out(RelationType::HasUnit) {
            NodeKind::Nutrient
        } else if RelationType::NUMERIC.into_iter().any(has_out)
            || self.inc.contains_key(&(n, RelationType::HasIngredient))
        {
            NodeKind::Ingredient
        } else if self.inc.contains_key(&(n, RelationType::SubclassOf)) {
            NodeKind::OntologyClass
        } else {
            NodeKind::Ingredient
        }
    }

    fn check_acyclic(&self) -> Result<(), GraphError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let mut mark = vec![Mark::New; self.ids.len()];
        for start in 0..self.ids.len() as NodeIx {
            if mark[start as usize] != Mark::New {
                continue;
            }
            // Stack of (node, next parent position).
            let mut stack: Vec<(NodeIx, usize)> = vec![(start, 0)];
            mark[start as usize] = Mark::Open;
            while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
                let parents = self.parent_ixs(node);
                if *pos < parents.len() {
                    let p = parents[*pos];
                    *pos += 1;
                    match mark[p as usize] {
                        Mark::New => {
                            mark[p as usize] = Mark::Open;
                            stack.push((p, 0));
                        }
                        Mark::Open => {
                            let from = stack.iter().position(|&(n, _)| n == p).unwrap_or(0);
                            let mut path: Vec<String> = stack[from..].iter().map(|&(n, _)| self.ids[n as usize].clone()).collect();
                            path.push(self.ids[p as usize].clone());
                            return Err(GraphError::CycleDetected { path });
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[node as usize] = Mark::Done;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    fn ix(&self, id: &str) -> Result<NodeIx, GraphError> {
        self.index.get(id).copied().ok_or_else(|| GraphError::UnknownNode(id.to_string()))
    }

    fn out_edges_ix(&self, n: NodeIx, r: RelationType) -> impl Iterator<Item = &Edge> {
        self.out.get(&(n, r)).into_iter().flatten().map(|&e| &self.edges[e as usize])
    }

    fn parent_ixs(&self, n: NodeIx) -> Vec<NodeIx> {
        self.out_edges_ix(n, RelationType::SubclassOf)
            .filter_map(|e| e.object_node())
            .map(|p| self.index[p])
            .collect()
    }

    fn child_ixs(&self, n: NodeIx) -> impl Iterator<Item = NodeIx> + '_ {
        self.inc
            .get(&(n, RelationType::SubclassOf))
            .into_iter()
            .flatten()
            .map(|&e| self.index[&self.edges[e as usize].subject])
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn kind(&self, id: &str) -> Option<NodeKind> {
        self.index.get(id).map(|&n| self.kinds[n as usize])
    }

    /// All node ids in ascending order.
    pub fn node_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.ids.iter().map(String::as_str).collect();
        ids.sort_unstable();
        ids
    }

    /// Ids of a given kind in ascending order.
    pub fn nodes_of_kind(&self, kind: NodeKind) -> Vec<&str> {
        let mut ids: Vec<&str> = self
            .ids
            .iter()
            .zip(&self.kinds)
            .filter(|(_, &k)| k == kind)
            .map(|(id, _)| id.as_str())
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn out_edges(&self, id: &str, r: RelationType) -> impl Iterator<Item = &Edge> {
        let n = self.index.get(id).copied();
        n.into_iter().flat_map(move |n| self.out_edges_ix(n, r))
    }

    /// Edges whose node object is `id`.
    pub fn in_edges(&self, id: &str, r: RelationType) -> impl Iterator<Item = &Edge> {
        let n = self.index.get(id).copied();
        n.into_iter()
            .flat_map(move |n| self.inc.get(&(n, r)).into_iter().flatten())
            .map(|&e| &self.edges[e as usize])
    }

    /// The unique `subclass_of` target of `id`, or `None` at a root.
    pub fn parent_of(&self, id: &str) -> Result<Option<&str>, GraphError> {
        let n = self.ix(id)?;
        let parents = self.parent_ixs(n);
        match parents[..] {
            [] => Ok(None),
            [p] => Ok(Some(&self.ids[p as usize])),
            _ => {
                let mut parents: Vec<String> = parents.iter().map(|&p| self.ids[p as usize].clone()).collect();
                parents.sort();
                parents.dedup();
                if parents.len() == 1 {
                    // Repeated assertion of the same parent.
                    return Ok(Some(&self.ids[self.index[&parents[0]] as usize]));
                }
                Err(GraphError::MultipleParents { node: id.to_string(), parents })
            }
        }
    }

    /// Direct subclasses of `id`, sorted, without duplicates.
    pub fn children(&self, id: &str) -> Result<Vec<&str>, GraphError> {
        let n = self.ix(id)?;
        let mut out: Vec<&str> = self.child_ixs(n).map(|c| self.ids[c as usize].as_str()).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Ingredient-kind nodes sharing `id`'s direct parent, excluding `id`.
    pub fn siblings(&self, id: &str) -> Result<BTreeSet<&str>, GraphError> {
        let parent = self.parent_of(id)?.ok_or_else(|| GraphError::NoParent(id.to_string()))?;
        Ok(self
            .children(parent)?
            .into_iter()
            .filter(|&c| c != id && self.kind(c) == Some(NodeKind::Ingredient))
            .collect())
    }

    /// Parent chain from `id` (exclusive) up to its root.
    pub fn ancestors(&self, id: &str) -> Result<Vec<&str>, GraphError> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(p) = self.parent_of(cur)? {
            out.push(p);
            cur = p;
        }
        Ok(out)
    }

    /// Every transitive subclass of `id` (excluding `id`), sorted.
    pub fn descendants(&self, id: &str) -> Result<Vec<&str>, GraphError> {
        let start = self.ix(id)?;
        let mut seen = HashSet::from([start]);
        let mut queue = vec![start];
        let mut out = Vec::new();
        while let Some(n) = queue.pop() {
            for c in self.child_ixs(n) {
                if seen.insert(c) {
                    out.push(self.ids[c as usize].as_str());
                    queue.push(c);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `has_label` text if present, else the id with underscores as spaces.
    pub fn display_name(&self, id: &str) -> String {
        self.label(id).map(str::to_string).unwrap_or_else(|| id.replace('_', " "))
    }

    pub fn label(&self, id: &str) -> Option<&str> {
        self.out_edges(id, RelationType::HasLabel).find_map(|e| match &e.object {
            EdgeObject::Text(t) => Some(t.as_str()),
            _ => None,
        })
    }

    pub fn measure(&self, id: &str, r: RelationType) -> Option<Measure> {
        self.out_edges(id, r)
            .find_map(|e| e.value().map(|value| Measure { value, provenance: e.provenance }))
    }

    pub fn get_profile(&self, id: &str) -> Result<IngredientProfile, GraphError> {
        match self.kind(id) {
            None => return Err(GraphError::UnknownNode(id.to_string())),
            Some(NodeKind::Ingredient) => {}
            Some(_) => return Err(GraphError::NotAnIngredient(id.to_string())),
        }
        let nutrients = Nutrient::ALL
            .into_iter()
            .filter_map(|n| self.measure(id, n.relation()).map(|m| (n, m)))
            .collect();
        Ok(IngredientProfile {
            id: id.to_string(),
            display_name: self.display_name(id),
            wf: self.measure(id, RelationType::HasWaterFootprint),
            nutrients,
            parent_class: self.parent_of(id)?.map(str::to_string),
        })
    }

    /// Ingredients of a recipe in edge order.
    pub fn recipe_ingredients(&self, recipe: &str) -> Vec<&str> {
        self.out_edges(recipe, RelationType::HasIngredient).filter_map(Edge::object_node).collect()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats { node_count: self.ids.len(), relation_type_count: self.relations.len(), edge_count: self.edges.len() }
    }

    pub fn relation_types(&self) -> &BTreeSet<RelationType> {
        &self.relations
    }

    /// A new graph version with `extra` appended to this graph's edges.
    pub fn with_added_edges(&self, extra: Vec<Edge>) -> Result<Graph, GraphError> {
        let mut edges = self.edges.clone();
        edges.extend(extra);
        Graph::build(edges)
    }
}

fn intern(ids: &mut Vec<String>, index: &mut HashMap<String, NodeIx>, id: &str) -> NodeIx {
    if let Some(&n) = index.get(id) {
        return n;
    }
    let n = ids.len() as NodeIx;
    ids.push(id.to_string());
    index.insert(id.to_string(), n);
    n
}
