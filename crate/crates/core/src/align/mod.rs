//! Name normalization, edge verbalization, text embedding and entity linking.

mod embed;
mod link;
mod normalize;
mod verbalize;

pub use embed::{embed_text, EmbeddingVector, EMBED_DIM, EMBED_SEED};
pub use link::{
    link_entities, AlignError, AmbiguousLink, LinkConfig, LinkEntry, LinkMethod, LinkTable, Match, Matcher,
    LINK_TABLE_HEADER, LINK_THRESHOLD, TIE_TOLERANCE,
};
pub use normalize::{normalize_name, normalize_with, CanonicalName, Stoplist};
pub use verbalize::{verbalize_edge, NodeNames, TemplateError, Templates};
