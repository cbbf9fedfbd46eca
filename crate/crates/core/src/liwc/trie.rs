//! Byte-level prefix trie for wildcard stem lookup.

use std::collections::BTreeSet;
use std::collections::HashMap;

/// Maps stems (wildcard entries with the `*` stripped) to category sets
/// and answers longest-prefix queries over tokens.
#[derive(Debug, Default, Clone)]
pub struct StemTrie {
    root: Node,
    len: usize,
}

#[derive(Debug, Default, Clone)]
struct Node {
    children: HashMap<u8, Node>,
    categories: Option<BTreeSet<u32>>,
}

impl StemTrie {
    pub fn new() -> Self {
        StemTrie::default()
    }

    /// Inserts a stem; categories of repeated stems are unioned.
    pub fn insert(&mut self, stem: &str, categories: &BTreeSet<u32>) {
        let mut node = &mut self.root;
        for byte in stem.bytes() {
            node = node.children.entry(byte).or_default();
        }
        match &mut node.categories {
            Some(existing) => existing.extend(categories.iter().copied()),
            slot => {
                *slot = Some(categories.clone());
                self.len += 1;
            }
        }
    }

    /// Categories of the longest stem that prefixes `token`. A stem equal
    /// to the whole token counts as a prefix.
    pub fn longest_match(&self, token: &str) -> Option<&BTreeSet<u32>> {
        let mut node = &self.root;
        let mut best = self.root.categories.as_ref();
        for byte in token.bytes() {
            match node.children.get(&byte) {
                Some(child) => {
                    node = child;
                    if child.categories.is_some() {
                        best = child.categories.as_ref();
                    }
                }
                None => break,
            }
        }
        best
    }

    /// Number of distinct stems stored.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}
