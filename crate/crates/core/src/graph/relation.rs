use std::fmt;

use serde::{Deserialize, Serialize};

/// The closed set of edge labels a graph may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationType {
    HasIngredient,
    SubclassOf,
    HasWaterFootprint,
    HasCalories,
    HasFat,
    HasProtein,
    HasCarbohydrate,
    HasSugar,
    HasSodium,
    HasFiber,
    HasLabel,
    SameAs,
    HasUnit,
}

/// How the object slot of a relation is typed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Node,
    Number,
    Text,
}

impl RelationType {
    pub const ALL: [RelationType; 13] = [
        RelationType::HasIngredient,
        RelationType::SubclassOf,
        RelationType::HasWaterFootprint,
        RelationType::HasCalories,
        RelationType::HasFat,
        RelationType::HasProtein,
        RelationType::HasCarbohydrate,
        RelationType::HasSugar,
        RelationType::HasSodium,
        RelationType::HasFiber,
        RelationType::HasLabel,
        RelationType::SameAs,
        RelationType::HasUnit,
    ];

    /// Relations whose object is a non-negative quantity.
    pub const NUMERIC: [RelationType; 8] = [
        RelationType::HasWaterFootprint,
        RelationType::HasCalories,
        RelationType::HasFat,
        RelationType::HasProtein,
        RelationType::HasCarbohydrate,
        RelationType::HasSugar,
        RelationType::HasSodium,
        RelationType::HasFiber,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RelationType::HasIngredient => "has_ingredient",
            RelationType::SubclassOf => "subclass_of",
            RelationType::HasWaterFootprint => "has_water_footprint",
            RelationType::HasCalories => "has_calories",
            RelationType::HasFat => "has_fat",
            RelationType::HasProtein => "has_protein",
            RelationType::HasCarbohydrate => "has_carbohydrate",
            RelationType::HasSugar => "has_sugar",
            RelationType::HasSodium => "has_sodium",
            RelationType::HasFiber => "has_fiber",
            RelationType::HasLabel => "has_label",
            RelationType::SameAs => "same_as",
            RelationType::HasUnit => "has_unit",
        }
    }

    pub fn from_label(label: &str) -> Option<RelationType> {
        Self::ALL.into_iter().find(|r| r.label() == label)
    }

    /// Position in [`RelationType::ALL`]; used for one-hot encodings.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn object_kind(self) -> ObjectKind {
        match self {
            RelationType::HasIngredient | RelationType::SubclassOf | RelationType::SameAs => ObjectKind::Node,
            RelationType::HasLabel | RelationType::HasUnit => ObjectKind::Text,
            _ => ObjectKind::Number,
        }
    }

    pub fn is_numeric(self) -> bool {
        self.object_kind() == ObjectKind::Number
    }

    /// The nutrient a numeric relation measures; `None` for water footprint
    /// and non-numeric relations.
    pub fn nutrient(self) -> Option<Nutrient> {
        Nutrient::ALL.into_iter().find(|n| n.relation() == self)
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Nutrients tracked per 100 g of ingredient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nutrient {
    Calories,
    Fat,
    Protein,
    Carbohydrate,
    Sugar,
    Sodium,
    Fiber,
}

impl Nutrient {
    pub const ALL: [Nutrient; 7] = [
        Nutrient::Calories,
        Nutrient::Fat,
        Nutrient::Protein,
        Nutrient::Carbohydrate,
        Nutrient::Sugar,
        Nutrient::Sodium,
        Nutrient::Fiber,
    ];

    pub fn relation(self) -> RelationType {
        match self {
            Nutrient::Calories => RelationType::HasCalories,
            Nutrient::Fat => RelationType::HasFat,
            Nutrient::Protein => RelationType::HasProtein,
            Nutrient::Carbohydrate => RelationType::HasCarbohydrate,
            Nutrient::Sugar => RelationType::HasSugar,
            Nutrient::Sodium => RelationType::HasSodium,
            Nutrient::Fiber => RelationType::HasFiber,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Nutrient::Calories => "calories",
            Nutrient::Fat => "fat",
            Nutrient::Protein => "protein",
            Nutrient::Carbohydrate => "carbohydrate",
            Nutrient::Sugar => "sugar",
            Nutrient::Sodium => "sodium",
            Nutrient::Fiber => "fiber",
        }
    }
}

impl fmt::Display for Nutrient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn thirteen_distinct_labels() {
        let labels: HashSet<_> = RelationType::ALL.iter().map(|r| r.label()).collect();
        assert_eq!(labels.len(), 13);
        for (i, r) in RelationType::ALL.into_iter().enumerate() {
            assert_eq!(r.index(), i);
            assert_eq!(RelationType::from_label(r.label()), Some(r));
        }
        assert_eq!(RelationType::from_label("rdf_type"), None);
    }

    #[test]
    fn numeric_relations_cover_footprint_and_nutrients() {
        assert_eq!(RelationType::ALL.iter().filter(|r| r.is_numeric()).count(), 8);
        assert!(RelationType::NUMERIC.iter().all(|r| r.is_numeric()));
        assert_eq!(RelationType::HasWaterFootprint.nutrient(), None);
        for n in Nutrient::ALL {
            assert_eq!(n.relation().nutrient(), Some(n));
        }
    }
}
