use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

const DEFAULT_STOPLIST: &str = include_str!("../../data/stoplist.txt");

/// Token suffixes that mark a flavour or style modifier ("vanilla-flavored").
const MODIFIER_SUFFIXES: [&str; 3] = ["-flavored", "-style", "-based"];

/// Lowercase, single-space separated, punctuation-free ingredient name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalName(String);

impl CanonicalName {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl PartialEq<str> for CanonicalName {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for CanonicalName {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Debug, Clone)]
pub struct Stoplist {
    tokens: HashSet<String>,
}

impl Stoplist {
    /// One token per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        let tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        Self { tokens }
    }

    pub fn builtin() -> &'static Stoplist {
        static BUILTIN: OnceLock<Stoplist> = OnceLock::new();
        BUILTIN.get_or_init(|| Stoplist::parse(DEFAULT_STOPLIST))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(token)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Reduces a raw ingredient name to its main descriptor using the built-in stoplist.
pub fn normalize_name(raw: &str) -> CanonicalName {
    normalize_with(raw, Stoplist::builtin())
}

/// Applies the descriptor-extraction step until it reaches a fixed point, which
/// makes the result idempotent by construction.
pub fn normalize_with(raw: &str, stoplist: &Stoplist) -> CanonicalName {
    let mut current = step(raw, stoplist);
    loop {
        let next = step(&current, stoplist);
        if next == current {
            return CanonicalName(current);
        }
        current = next;
    }
}

fn step(raw: &str, stoplist: &Stoplist) -> String {
    let lower = raw.to_lowercase();
    let without_parens = strip_parenthesized(&lower);
    let kept: Vec<&str> = without_parens
        .split_whitespace()
        .filter(|tok| {
            let bare = tok.trim_matches(|c: char| !c.is_alphanumeric());
            !(MODIFIER_SUFFIXES.iter().any(|s| bare.ends_with(s)) || stoplist.contains(bare))
        })
        .collect();
    let cleaned = clean(&kept.join(" "));
    if cleaned.is_empty() {
        clean(&lower)
    } else {
        cleaned
    }
}

/// Drops `(...)` segments; an unclosed `(` drops the rest of the string.
fn strip_parenthesized(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                out.push(' ');
            }
            ')' if depth > 0 => depth -= 1,
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

/// Removes apostrophes, turns other punctuation into spaces and collapses whitespace.
fn clean(s: &str) -> String {
    let replaced: String = s
        .chars()
        .filter(|&c| c != '\'' && c != '\u{2019}')
        .map(|c| if c.is_alphanumeric() || c.is_whitespace() { c } else { ' ' })
        .collect();
    replaced.split_whitespace().collect::<Vec<_>>().join(" ")
}
