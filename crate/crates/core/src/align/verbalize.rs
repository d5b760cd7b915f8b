use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::graph::{Edge, EdgeObject, Graph, RelationType};

const DEFAULT_TEMPLATES: &str = include_str!("../../data/templates.tsv");

/// Resolves node ids to human-readable names for sentences.
pub trait NodeNames {
    fn name_of(&self, id: &str) -> Option<String>;
}

impl NodeNames for Graph {
    fn name_of(&self, id: &str) -> Option<String> {
        self.contains(id).then(|| self.display_name(id))
    }
}

impl NodeNames for HashMap<String, String> {
    fn name_of(&self, id: &str) -> Option<String> {
        self.get(id).cloned()
    }
}

impl NodeNames for BTreeMap<String, String> {
    fn name_of(&self, id: &str) -> Option<String> {
        self.get(id).cloned()
    }
}

#[derive(Debug, Clone)]
pub struct Templates {
    by_relation: HashMap<RelationType, String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemplateError {
    #[error("template line {line}: expected relation<TAB>template")]
    Malformed { line: usize },
    #[error("template line {line}: unknown relation {label:?}")]
    UnknownRelation { line: usize, label: String },
    #[error("no template for {0}")]
    Missing(RelationType),
}

impl Templates {
    /// `relation<TAB>template` lines; `#` lines are comments. Every relation
    /// must have a template.
    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        let mut by_relation = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (label, template) = line.split_once('\t').ok_or(TemplateError::Malformed { line: i + 1 })?;
            let relation = RelationType::from_label(label)
                .ok_or_else(|| TemplateError::UnknownRelation { line: i + 1, label: label.to_string() })?;
            by_relation.insert(relation, template.to_string());
        }
        if let Some(missing) = RelationType::ALL.into_iter().find(|r| !by_relation.contains_key(r)) {
            return Err(TemplateError::Missing(missing));
        }
        Ok(Self { by_relation })
    }

    pub fn builtin() -> &'static Templates {
        static BUILTIN: OnceLock<Templates> = OnceLock::new();
        BUILTIN.get_or_init(|| Templates::parse(DEFAULT_TEMPLATES).expect("built-in templates are complete"))
    }

    pub fn render(&self, e: &Edge, names: &impl NodeNames) -> String {
        let name = |id: &str| names.name_of(id).unwrap_or_else(|| id.to_string());
        let (object, value) = match &e.object {
            EdgeObject::Node(n) => (name(n), String::new()),
            EdgeObject::Number { value, .. } => (String::new(), value.to_string()),
            EdgeObject::Text(t) => (String::new(), t.clone()),
        };
        self.by_relation[&e.relation]
            .replace("{subject}", &name(&e.subject))
            .replace("{object}", &object)
            .replace("{value}", &value)
    }
}

/// Renders an edge as an English sentence with the built-in templates.
pub fn verbalize_edge(e: &Edge, names: &impl NodeNames) -> String {
    Templates::builtin().render(e, names)
}
