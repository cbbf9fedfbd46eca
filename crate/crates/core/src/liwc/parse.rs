//! Parser for the LIWC 2007 plain-text dictionary format:
//!
//! ```text
//! %
//! 1<TAB>posemo
//! 2<TAB>negemo
//! %
//! happy<TAB>1
//! admir*<TAB>1
//! hate<TAB>2
//! ```
//!
//! A `%` line opens and closes the category header; entry lines map a
//! word (or a `*`-suffixed prefix stem) to one or more category ids.
//! Blank lines are ignored everywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{LiwcDictionary, LiwcError};
use crate::liwc::trie::StemTrie;

pub fn parse_dic(text: &str) -> Result<LiwcDictionary, LiwcError> {
    let mut categories: BTreeMap<u32, String> = BTreeMap::new();
    let mut literals: HashMap<String, BTreeSet<u32>> = HashMap::new();
    let mut stems = StemTrie::new();
    let mut stem_list: BTreeMap<String, BTreeSet<u32>> = BTreeMap::new();

    #[derive(PartialEq)]
    enum Section {
        BeforeHeader,
        Categories,
        Entries,
    }
    let mut section = Section::BeforeHeader;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches(['\r', ' ', '\t']);
        if line.trim().is_empty() {
            continue;
        }
        if line.trim() == "%" {
            section = match section {
                Section::BeforeHeader => Section::Categories,
                Section::Categories => Section::Entries,
                Section::Entries => {
                    return Err(LiwcError::MalformedHeader {
                        message: format!("unexpected third '%' at line {line_no}"),
                    })
                }
            };
            continue;
        }
        match section {
            Section::BeforeHeader => {
                return Err(LiwcError::MalformedHeader {
                    message: format!("expected '%' before line {line_no}"),
                });
            }
            Section::Categories => {
                let mut parts = line.split('\t').filter(|p| !p.is_empty());
                let id = parts
                    .next()
                    .and_then(|p| p.trim().parse::<u32>().ok())
                    .ok_or_else(|| LiwcError::BadEntryLine {
                        line: line_no,
                        message: "category line must start with a numeric id".to_string(),
                    })?;
                let name = parts.next().map(str::trim).unwrap_or("");
                if name.is_empty() {
                    return Err(LiwcError::BadEntryLine {
                        line: line_no,
                        message: "category line is missing a name".to_string(),
                    });
                }
                categories.insert(id, name.to_string());
            }
            Section::Entries => {
                let mut parts = line.split('\t').filter(|p| !p.trim().is_empty());
                let word = parts.next().map(str::trim).unwrap_or("");
                if word.is_empty() {
                    return Err(LiwcError::BadEntryLine {
                        line: line_no,
                        message: "entry line is missing a word".to_string(),
                    });
                }
                let mut ids = BTreeSet::new();
                for part in parts {
                    let id: u32 = part.trim().parse().map_err(|_| LiwcError::BadEntryLine {
                        line: line_no,
                        message: format!("`{part}` is not a category id"),
                    })?;
                    if !categories.contains_key(&id) {
                        return Err(LiwcError::UnknownCategoryRef { line: line_no, id });
                    }
                    ids.insert(id);
                }
                if ids.is_empty() {
                    return Err(LiwcError::BadEntryLine {
                        line: line_no,
                        message: "entry has no category ids".to_string(),
                    });
                }
                let lowered = word.to_lowercase();
                if let Some(stem) = lowered.strip_suffix('*') {
                    if stem.is_empty() {
                        return Err(LiwcError::BadEntryLine {
                            line: line_no,
                            message: "wildcard stem is empty".to_string(),
                        });
                    }
                    stems.insert(stem, &ids);
                    stem_list.entry(stem.to_string()).or_default().extend(ids);
                } else {
                    literals.entry(lowered).or_default().extend(ids);
                }
            }
        }
    }
    if section != Section::Entries {
        return Err(LiwcError::MalformedHeader {
            message: "missing '%' category delimiters".to_string(),
        });
    }
    Ok(LiwcDictionary {
        categories,
        literals,
        stems,
        stem_list,
    })
}
