//! Linking raw source names onto canonical node ids.
//!
//! Each name goes through a cascade and stops at the first stage that
//! matches: exact id or label, equal normalized names, then the most similar
//! embedding above a threshold. Names that match nothing mint a new id.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::embed::{embed_text, EmbeddingVector};
use super::normalize::normalize_name;

/// Minimum cosine for an embedding-stage match.
pub const LINK_THRESHOLD: f64 = 0.55;
/// Cosines closer than this are treated as a tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    pub threshold: f64,
    pub tie_tolerance: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self { threshold: LINK_THRESHOLD, tie_tolerance: TIE_TOLERANCE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMethod {
    Exact,
    Normalized,
    Embedding,
    /// No stage matched; the name became a new canonical id.
    New,
}

impl LinkMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkMethod::Exact => "exact",
            LinkMethod::Normalized => "normalized",
            LinkMethod::Embedding => "embedding",
            LinkMethod::New => "new",
        }
    }
}

impl fmt::Display for LinkMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LinkMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(LinkMethod::Exact),
            "normalized" => Ok(LinkMethod::Normalized),
            "embedding" => Ok(LinkMethod::Embedding),
            "new" => Ok(LinkMethod::New),
            other => Err(format!("unknown link method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkEntry {
    pub raw_name: String,
    pub canonical_id: String,
    pub method: LinkMethod,
    /// Cosine score, present for embedding matches only.
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguousLink {
    pub name: String,
    pub stage: LinkMethod,
    pub candidates: Vec<String>,
}

impl fmt::Display for AmbiguousLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} is ambiguous at the {} stage: {}", self.name, self.stage, self.candidates.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("{} ambiguous name(s): {}", .0.len(), .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Ambiguous(Vec<AmbiguousLink>),
    #[error("no canonical ids to link against")]
    EmptyCanonicalSet,
    #[error("link table line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
}

/// A canonical node that raw names can link to.
#[derive(Debug, Clone)]
struct Candidate {
    id: String,
    embedding: EmbeddingVector,
}

/// Resolves names against a fixed set of canonical `(id, display name)` pairs.
#[derive(Debug, Clone)]
pub struct Matcher {
    config: LinkConfig,
    candidates: Vec<Candidate>,
    ids: HashSet<String>,
    exact: HashMap<String, BTreeSet<usize>>,
    normalized: HashMap<String, BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Match {
    pub id: String,
    pub method: LinkMethod,
    pub score: Option<f64>,
}

impl Matcher {
    pub fn new<'a>(canonical: impl IntoIterator<Item = (&'a str, &'a str)>, config: LinkConfig) -> Self {
        let mut m = Matcher {
            config,
            candidates: Vec::new(),
            ids: HashSet::new(),
            exact: HashMap::new(),
            normalized: HashMap::new(),
        };
        for (id, name) in canonical {
            m.add(id, name);
        }
        m
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    pub fn add(&mut self, id: &str, name: &str) {
        let ix = self.candidates.len();
        let norm = normalize_name(name);
        self.exact.entry(id.to_string()).or_default().insert(ix);
        self.exact.entry(name.to_string()).or_default().insert(ix);
        self.normalized.entry(norm.as_str().to_string()).or_default().insert(ix);
        self.candidates.push(Candidate { id: id.to_string(), embedding: embed_text(norm.as_str()) });
        self.ids.insert(id.to_string());
    }

    fn distinct_ids(&self, ixs: &BTreeSet<usize>) -> Vec<String> {
        let ids: BTreeSet<&str> = ixs.iter().map(|&i| self.candidates[i].id.as_str()).collect();
        ids.into_iter().map(str::to_string).collect()
    }

    /// Runs the cascade. `Ok(None)` means no stage matched.
    pub fn resolve(&self, raw: &str) -> Result<Option<Match>, AmbiguousLink> {
        let single = |ixs: Option<&BTreeSet<usize>>, stage| -> Result<Option<Match>, AmbiguousLink> {
            let Some(ixs) = ixs else { return Ok(None) };
            let ids = self.distinct_ids(ixs);
            match ids.len() {
                0 => Ok(None),
                1 => Ok(Some(Match { id: ids[0].clone(), method: stage, score: None })),
                _ => Err(AmbiguousLink { name: raw.to_string(), stage, candidates: ids }),
            }
        };
        if let Some(m) = single(self.exact.get(raw), LinkMethod::Exact)? {
            return Ok(Some(m));
        }
        let norm = normalize_name(raw);
        if let Some(m) = single(self.normalized.get(norm.as_str()), LinkMethod::Normalized)? {
            return Ok(Some(m));
        }
        self.resolve_by_embedding(raw, &embed_text(norm.as_str()))
    }

    fn resolve_by_embedding(&self, raw: &str, query: &EmbeddingVector) -> Result<Option<Match>, AmbiguousLink> {
        // Best cosine per distinct id.
        let mut best_per_id: BTreeMap<&str, f64> = BTreeMap::new();
        for c in &self.candidates {
            let s = query.cosine(&c.embedding);
            let slot = best_per_id.entry(c.id.as_str()).or_insert(f64::NEG_INFINITY);
            if s > *slot {
                *slot = s;
            }
        }
        let Some((&best_id, &best)) = best_per_id.iter().max_by(|a, b| a.1.total_cmp(b.1).then_with(|| b.0.cmp(a.0)))
        else {
            return Ok(None);
        };
        if best < self.config.threshold {
            return Ok(None);
        }
        let tied: Vec<String> = best_per_id
            .iter()
            .filter(|(_, &s)| (best - s).abs() <= self.config.tie_tolerance)
            .map(|(id, _)| id.to_string())
            .collect();
        if tied.len() > 1 {
            return Err(AmbiguousLink { name: raw.to_string(), stage: LinkMethod::Embedding, candidates: tied });
        }
        Ok(Some(Match { id: best_id.to_string(), method: LinkMethod::Embedding, score: Some(best.clamp(0.0, 1.0)) }))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LinkTable {
    entries: BTreeMap<String, LinkEntry>,
}

pub const LINK_TABLE_HEADER: [&str; 4] = ["raw_name", "canonical_id", "method", "score"];

impl LinkTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, raw: &str) -> Option<&LinkEntry> {
        self.entries.get(raw)
    }

    pub fn canonical_id(&self, raw: &str) -> Option<&str> {
        self.entries.get(raw).map(|e| e.canonical_id.as_str())
    }

    /// Entries in raw-name order.
    pub fn iter(&self) -> impl Iterator<Item = &LinkEntry> {
        self.entries.values()
    }

    pub fn insert(&mut self, entry: LinkEntry) {
        self.entries.insert(entry.raw_name.clone(), entry);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(LINK_TABLE_HEADER).expect("in-memory write");
        for e in self.iter() {
            let score = e.score.map(|s| s.to_string()).unwrap_or_default();
            w.write_record([e.raw_name.as_str(), &e.canonical_id, e.method.as_str(), &score]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, AlignError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r
            .headers()
            .map_err(|e| AlignError::MalformedTable { line: 1, reason: e.to_string() })?
            .clone();
        if header.iter().collect::<Vec<_>>() != LINK_TABLE_HEADER {
            return Err(AlignError::MalformedTable { line: 1, reason: format!("expected header {}", LINK_TABLE_HEADER.join(",")) });
        }
        let mut table = LinkTable::default();
        for rec in r.records() {
            let rec = rec.map_err(|e| AlignError::MalformedTable {
                line: e.position().map_or(0, |p| p.line() as usize),
                reason: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let bad = |reason: String| AlignError::MalformedTable { line, reason };
            let method: LinkMethod = rec[2].parse().map_err(bad)?;
            let score = match &rec[3] {
                "" => None,
                s => Some(s.parse::<f64>().map_err(|_| bad(format!("bad score {s:?}")))?),
            };
            table.insert(LinkEntry { raw_name: rec[0].to_string(), canonical_id: rec[1].to_string(), method, score });
        }
        Ok(table)
    }
}

/// Links every distinct raw name from every source onto a canonical id.
///
/// Names are processed in sorted order; ids minted for unmatched names join
/// the canonical set, so later names can link to them. Ambiguities are
/// collected and reported together.
pub fn link_entities<'a, S, N>(sources: S, canonical: &[(&str, &str)], config: LinkConfig) -> Result<LinkTable, AlignError>
where
    S: IntoIterator<Item = N>,
    N: IntoIterator<Item = &'a str>,
{
    let names: BTreeSet<&str> = sources.into_iter().flatten().collect();
    if names.is_empty() {
        return Ok(LinkTable::default());
    }
    if canonical.is_empty() {
        return Err(AlignError::EmptyCanonicalSet);
    }
    let mut matcher = Matcher::new(canonical.iter().copied(), config);
    let mut table = LinkTable::default();
    let mut ambiguous = Vec::new();
    for raw in names {
        match matcher.resolve(raw) {
            Ok(Some(m)) => table.insert(LinkEntry { raw_name: raw.to_string(), canonical_id: m.id, method: m.method, score: m.score }),
            Ok(None) => {
                let id = mint_id(raw, &matcher);
                matcher.add(&id, raw);
                table.insert(LinkEntry { raw_name: raw.to_string(), canonical_id: id, method: LinkMethod::New, score: None });
            }
            Err(a) => ambiguous.push(a),
        }
    }
    if ambiguous.is_empty() {
        Ok(table)
    } else {
        Err(AlignError::Ambiguous(ambiguous))
    }
}

/// Snake-case id from the normalized name, suffixed to avoid collisions.
fn mint_id(raw: &str, matcher: &Matcher) -> String {
    let norm = normalize_name(raw);
    let base = if norm.as_str().is_empty() { "unnamed".to_string() } else { norm.as_str().replace(' ', "_") };
    if !matcher.contains_id(&base) {
        return base;
    }
    (2..).map(|k| format!("{base}_{k}")).find(|id| !matcher.contains_id(id)).expect("unbounded suffixes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(names: &[&str], canonical: &[(&str, &str)]) -> Result<LinkTable, AlignError> {
        link_entities([names.iter().copied()], canonical, LinkConfig::default())
    }

    #[test]
    fn exact_match() {
        let t = link(&["butter"], &[("butter", "butter")]).unwrap();
        assert_eq!(t.get("butter").unwrap().method, LinkMethod::Exact);
        assert_eq!(t.canonical_id("butter"), Some("butter"));
    }

    #[test]
    fn normalized_match() {
        let t = link(&["vanilla-flavored soy yogurt"], &[("soy_yogurt", "soy yogurt")]).unwrap();
        let e = t.get("vanilla-flavored soy yogurt").unwrap();
        assert_eq!((e.canonical_id.as_str(), e.method), ("soy_yogurt", LinkMethod::Normalized));
    }

    #[test]
    fn embedding_match() {
        let t = link(&["soy yoghurt"], &[("soy_yogurt", "soy yogurt"), ("beef_steak", "beef steak")]).unwrap();
        let e = t.get("soy yoghurt").unwrap();
        assert_eq!((e.canonical_id.as_str(), e.method), ("soy_yogurt", LinkMethod::Embedding));
        let score = e.score.unwrap();
        assert!((LINK_THRESHOLD..=1.0).contains(&score), "{score}");
    }

    #[test]
    fn unmatched_names_mint_ids() {
        let t = link(&["Dragon Fruit", "dragon fruit (fresh)", "qqqq"], &[("butter", "butter")]).unwrap();
        assert_eq!(t.get("Dragon Fruit").unwrap().method, LinkMethod::New);
        assert_eq!(t.canonical_id("Dragon Fruit"), Some("dragon_fruit"));
        // Sorted after "Dragon Fruit", so it finds the minted id.
        assert_eq!(t.canonical_id("dragon fruit (fresh)"), Some("dragon_fruit"));
        assert_eq!(t.get("dragon fruit (fresh)").unwrap().method, LinkMethod::Normalized);
        assert_eq!(t.canonical_id("qqqq"), Some("qqqq"));
    }

    #[test]
    fn minted_ids_avoid_collisions() {
        // "apple" is an id whose label differs, so "Apple (raw)" matches nothing
        // and its minted id must step around the existing one.
        let t = link(&["Apple (raw)"], &[("apple", "malus fruit"), ("banana", "banana")]).unwrap();
        let e = t.get("Apple (raw)").unwrap();
        assert_eq!((e.canonical_id.as_str(), e.method), ("apple_2", LinkMethod::New));
    }

    #[test]
    fn ties_are_surfaced() {
        let err = link(&["cream"], &[("a", "cream"), ("b", "cream")]).unwrap_err();
        let AlignError::Ambiguous(list) = err else { panic!() };
        assert_eq!(list[0].candidates, ["a", "b"]);
        assert_eq!(list[0].stage, LinkMethod::Exact);

        let err = link(&["soy yoghurt"], &[("a", "soy yogurt"), ("b", "soy yogurt ")]).unwrap_err();
        let AlignError::Ambiguous(list) = err else { panic!() };
        assert_eq!(list[0].stage, LinkMethod::Embedding);
    }

    #[test]
    fn duplicates_collapse_and_table_is_total() {
        let t = link_entities(
            [vec!["butter", "sugar"], vec!["butter", "Sugar "]],
            &[("butter", "butter"), ("sugar", "sugar")],
            LinkConfig::default(),
        )
        .unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn empty_inputs() {
        assert!(link(&[], &[]).unwrap().is_empty());
        assert_eq!(link(&["x"], &[]), Err(AlignError::EmptyCanonicalSet));
    }

    #[test]
    fn csv_round_trip() {
        let t = link(&["soy yoghurt", "butter", "a, \"quoted\" name"], &[("soy_yogurt", "soy yogurt"), ("butter", "butter")]).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("raw_name,canonical_id,method,score\n"));
        assert_eq!(LinkTable::from_csv(&csv).unwrap(), t);
        assert!(matches!(LinkTable::from_csv("a,b\n"), Err(AlignError::MalformedTable { line: 1, .. })));
        assert!(matches!(
            LinkTable::from_csv("raw_name,canonical_id,method,score\nx,y,guess,\n"),
            Err(AlignError::MalformedTable { line: 2, .. })
        ));
    }
}
