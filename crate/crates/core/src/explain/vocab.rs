//! Word-level vocabulary shared by instructions and explanation targets.
//!
//! Ids are assigned in a fixed order: the four reserved tokens, then every
//! catalog name (colors, shapes, textures, position types), then the
//! template words and shape plurals sorted alphabetically.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::catalog::canonical_catalog;

pub const PAD: u32 = 0;
pub const BOS: u32 = 1;
pub const EOS: u32 = 2;
pub const UNK: u32 = 3;
pub const CAPACITY: usize = 1000;

const RESERVED: [&str; 4] = ["<pad>", "<bos>", "<eos>", "<unk>"];

/// Every non-catalog word a template can produce.
const TEMPLATE_WORDS: [&str; 24] = [
    "this",
    "is",
    "a",
    "correct",
    "because",
    "it",
    "uniquely",
    "incorrect",
    "other",
    "objects",
    "are",
    "or",
    "the",
    "dimension",
    "and",
    "color",
    "shape",
    "texture",
    "find",
    "make",
    "an",
    "odd",
    "one",
    "out",
];

#[derive(Clone, Debug)]
pub struct Vocabulary {
    tokens: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    fn build() -> Self {
        let catalog = canonical_catalog();
        let mut tokens: Vec<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        tokens.extend(catalog.colors.iter().map(|e| e.name.to_string()));
        tokens.extend(catalog.shapes.iter().map(|e| e.name.to_string()));
        tokens.extend(catalog.textures.iter().map(|e| e.name.to_string()));
        tokens.extend(catalog.position_types.iter().map(|e| e.name.to_string()));
        let mut words: Vec<String> = TEMPLATE_WORDS.iter().map(|s| s.to_string()).collect();
        words.extend(catalog.shapes.iter().map(|s| s.plural()));
        words.sort();
        words.dedup();
        for w in words {
            if !tokens.contains(&w) {
                tokens.push(w);
            }
        }
        assert!(
            tokens.len() <= CAPACITY,
            "vocabulary overflow: {}",
            tokens.len()
        );
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Self { tokens, ids }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    /// Whitespace split framed by BOS/EOS; unknown words become UNK.
    pub fn tokenize(&self, text: &str) -> Vec<u32> {
        let mut out = Vec::with_capacity(12);
        out.push(BOS);
        out.extend(text.split_whitespace().map(|w| self.id(w).unwrap_or(UNK)));
        out.push(EOS);
        out
    }

    /// Inverse of [`tokenize`](Self::tokenize) for template text; framing and
    /// padding tokens are dropped.
    pub fn detokenize(&self, ids: &[u32]) -> String {
        ids.iter()
            .filter(|&&id| !matches!(id, PAD | BOS | EOS))
            .map(|&id| self.token(id).unwrap_or("<unk>"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `id<TAB>token` per line.
    pub fn dump(&self) -> String {
        self.tokens
            .iter()
            .enumerate()
            .map(|(i, t)| format!("{i}\t{t}\n"))
            .collect()
    }
}

pub fn vocabulary() -> &'static Vocabulary {
    static VOCAB: OnceLock<Vocabulary> = OnceLock::new();
    VOCAB.get_or_init(Vocabulary::build)
}

pub fn tokenize(text: &str) -> Vec<u32> {
    vocabulary().tokenize(text)
}

pub fn detokenize(ids: &[u32]) -> String {
    vocabulary().detokenize(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_ids() {
        let v = vocabulary();
        assert_eq!(v.id("<pad>"), Some(PAD));
        assert_eq!(v.id("<bos>"), Some(BOS));
        assert_eq!(v.id("<eos>"), Some(EOS));
        assert_eq!(v.id("<unk>"), Some(UNK));
        assert_eq!(v.id("red"), Some(4));
        assert!(v.len() <= CAPACITY);
    }

    #[test]
    fn hyphenated_names_are_single_tokens() {
        let ids = tokenize("this is a red horizontal-striped triangle in-the-corner");
        assert_eq!(ids.len(), 7 + 2);
        assert_eq!(ids[0], BOS);
        assert_eq!(*ids.last().unwrap(), EOS);
        assert!(!ids.contains(&UNK));
    }

    #[test]
    fn round_trip_and_unknowns() {
        let text =
            "incorrect because other objects are red horizontal-striped triangles or in-the-corner";
        assert_eq!(detokenize(&tokenize(text)), text);
        assert_eq!(tokenize("blorp")[1], UNK);
        assert_eq!(detokenize(&tokenize("")), "");
    }

    #[test]
    fn ids_are_stable() {
        let a = Vocabulary::build();
        assert_eq!(a.dump(), vocabulary().dump());
        let words: Vec<_> = a.tokens[4 + 19 + 11 + 6 + 4..].to_vec();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
    }
}
