//! Deterministic text embeddings by signed feature hashing of character trigrams.

/// Embedding dimension.
pub const EMBED_DIM: usize = 128;

/// Seed mixed into every trigram hash.
pub const EMBED_SEED: u64 = 0x5EED_F00D;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector([f64; EMBED_DIM]);

impl EmbeddingVector {
    pub fn zeros() -> Self {
        Self([0.0; EMBED_DIM])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// Cosine similarity; 0 when either vector is zero.
    pub fn cosine(&self, other: &EmbeddingVector) -> f64 {
        let (na, nb) = (self.norm(), other.norm());
        if na == 0.0 || nb == 0.0 {
            return 0.0;
        }
        let dot: f64 = self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum();
        dot / (na * nb)
    }
}

/// Hashes each trigram of the space-padded lowercase text into one of
/// [`EMBED_DIM`] buckets with a hash-derived ±1 sign, then L2-normalizes.
/// Empty text maps to the zero vector.
pub fn embed_text(text: &str) -> EmbeddingVector {
    let mut v = EmbeddingVector::zeros();
    if text.is_empty() {
        return v;
    }
    let padded: Vec<char> = std::iter::once(' ')
        .chain(text.to_lowercase().chars())
        .chain(std::iter::once(' '))
        .collect();
    let mut buf = [0u8; 12];
    for w in padded.windows(3) {
        let mut len = 0;
        for c in w {
            len += c.encode_utf8(&mut buf[len..]).len();
        }
        let h = seeded_hash(&buf[..len], EMBED_SEED);
        let bucket = (h % EMBED_DIM as u64) as usize;
        let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
        v.0[bucket] += sign;
    }
    let n = v.norm();
    if n > 0.0 {
        v.0.iter_mut().for_each(|x| *x /= n);
    }
    v
}

/// FNV-1a over the bytes with the seed folded into the offset basis, followed
/// by a splitmix64 finalizer so that low and high bits are both well mixed.
fn seeded_hash(bytes: &[u8], seed: u64) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET ^ seed;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_is_zero() {
        assert!(embed_text("").is_zero());
    }

    #[test]
    fn spelling_variants_are_closer_than_unrelated_names() {
        let base = embed_text("soy yogurt");
        let variant = base.cosine(&embed_text("soy yoghurt"));
        let unrelated = base.cosine(&embed_text("beef steak"));
        assert!(variant > unrelated, "{variant} vs {unrelated}");
    }

    #[test]
    fn case_insensitive() {
        assert_eq!(embed_text("Soy Cream"), embed_text("soy cream"));
    }

    #[test]
    fn hash_is_seed_dependent() {
        assert_ne!(seeded_hash(b"abc", 1), seeded_hash(b"abc", 2));
        assert_eq!(seeded_hash(b"abc", EMBED_SEED), seeded_hash(b"abc", EMBED_SEED));
    }

    proptest! {
        #[test]
        fn deterministic_and_unit_norm(s in "\\PC{0,60}") {
            let a = embed_text(&s);
            let b = embed_text(&s);
            prop_assert!(a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| x.to_bits() == y.to_bits()));
            if !a.is_zero() {
                prop_assert!((a.norm() - 1.0).abs() <= 1e-6);
            }
        }
    }
}
