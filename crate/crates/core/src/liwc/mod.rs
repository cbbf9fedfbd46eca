//! LIWC-style lexicon analysis: 2007-format dictionary parsing and
//! per-document category count/rate vectors.
//!
//! Matching semantics: a literal entry takes priority over stems; among
//! stems the longest prefix wins. A matched token adds one count to every
//! category of its entry, so rate columns are not a partition (their sum
//! can exceed 1).

mod parse;
pub mod token;
mod trie;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::persona::Group;

pub use parse::parse_dic;
pub use token::{tokenize, Token};
pub use trie::StemTrie;

#[derive(Debug, Error, PartialEq)]
pub enum LiwcError {
    #[error("malformed dictionary header: {message}")]
    MalformedHeader { message: String },
    #[error("line {line} references undeclared category {id}")]
    UnknownCategoryRef { line: usize, id: u32 },
    #[error("bad entry at line {line}: {message}")]
    BadEntryLine { line: usize, message: String },
    #[error("document for agent `{agent_id}` has no tokens; rates undefined")]
    EmptyDocument { agent_id: String },
}

/// A parsed category lexicon.
#[derive(Debug, Clone)]
pub struct LiwcDictionary {
    /// Category id to name, in ascending id order.
    pub categories: BTreeMap<u32, String>,
    /// Exact-word entries.
    pub literals: HashMap<String, BTreeSet<u32>>,
    /// Wildcard entries with the `*` stripped.
    pub stem_list: BTreeMap<String, BTreeSet<u32>>,
    pub(crate) stems: StemTrie,
}

impl LiwcDictionary {
    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    /// Category ids in ascending order; the column order of every matrix.
    pub fn category_ids(&self) -> Vec<u32> {
        self.categories.keys().copied().collect()
    }

    pub fn category_names(&self) -> Vec<String> {
        self.categories.values().cloned().collect()
    }

    /// Categories a single token credits: its literal entry if present,
    /// otherwise the longest matching stem.
    pub fn categories_for_token(&self, token: &str) -> Option<&BTreeSet<u32>> {
        self.literals
            .get(token)
            .or_else(|| self.stems.longest_match(token))
    }
}

/// Per-document category counts and rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiwcVector {
    /// Count per category id; every dictionary category is present.
    pub counts: BTreeMap<u32, u32>,
    pub total_tokens: u32,
    /// counts / total_tokens per category; all zeros when the document is
    /// empty (flagged by `total_tokens == 0`).
    pub rates: BTreeMap<u32, f64>,
}

impl LiwcVector {
    pub fn is_empty_document(&self) -> bool {
        self.total_tokens == 0
    }
}

/// Counts category hits over the tokenized text. Pure in (text, dict).
pub fn analyze(text: &str, dict: &LiwcDictionary) -> LiwcVector {
    let mut counts: BTreeMap<u32, u32> = dict.categories.keys().map(|id| (*id, 0)).collect();
    let tokens = tokenize(text);
    for token in &tokens {
        if let Some(ids) = dict.categories_for_token(&token.surface) {
            for id in ids {
                *counts.get_mut(id).expect("entries reference declared ids") += 1;
            }
        }
    }
    let total_tokens = tokens.len() as u32;
    let rates = counts
        .iter()
        .map(|(id, count)| {
            let rate = if total_tokens == 0 {
                0.0
            } else {
                f64::from(*count) / f64::from(total_tokens)
            };
            (*id, rate)
        })
        .collect();
    LiwcVector {
        counts,
        total_tokens,
        rates,
    }
}

/// One row of a vectorized corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRow {
    pub agent_id: String,
    pub group: Group,
    pub vector: LiwcVector,
}

/// Rate matrix over a story corpus: one row per document, one column per
/// category in ascending id order, with parallel agent ids and group
/// labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMatrix {
    pub category_ids: Vec<u32>,
    pub category_names: Vec<String>,
    pub agent_ids: Vec<String>,
    pub labels: Vec<u8>,
    pub rates: Vec<Vec<f64>>,
    pub counts: Vec<Vec<u32>>,
}

impl CorpusMatrix {
    pub fn n_rows(&self) -> usize {
        self.rates.len()
    }

    pub fn n_cols(&self) -> usize {
        self.category_ids.len()
    }

    /// One rate column in row order.
    pub fn rate_column(&self, col: usize) -> Vec<f64> {
        self.rates.iter().map(|row| row[col]).collect()
    }
}

/// Vectorizes `(agent_id, group, text)` documents. Empty documents are an
/// error, reported per offending row.
pub fn vectorize_corpus(
    documents: &[(String, Group, String)],
    dict: &LiwcDictionary,
) -> Result<CorpusMatrix, LiwcError> {
    let category_ids = dict.category_ids();
    let mut rates = Vec::with_capacity(documents.len());
    let mut counts = Vec::with_capacity(documents.len());
    let mut agent_ids = Vec::with_capacity(documents.len());
    let mut labels = Vec::with_capacity(documents.len());
    for (agent_id, group, text) in documents {
        let vector = analyze(text, dict);
        if vector.is_empty_document() {
            return Err(LiwcError::EmptyDocument {
                agent_id: agent_id.clone(),
            });
        }
        rates.push(category_ids.iter().map(|id| vector.rates[id]).collect());
        counts.push(category_ids.iter().map(|id| vector.counts[id]).collect());
        agent_ids.push(agent_id.clone());
        labels.push(group.label());
    }
    Ok(CorpusMatrix {
        category_ids,
        category_names: dict.category_names(),
        agent_ids,
        labels,
        rates,
        counts,
    })
}
