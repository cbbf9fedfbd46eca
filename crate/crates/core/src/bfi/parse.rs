//! Answer-sheet extraction from raw model output.
//!
//! Models mostly follow the `(a) 1` instruction but wrap answers in
//! prose, vary whitespace, or insert `:` / `.` after the letter. The
//! parser scans the whole text for `(letter)` markers followed by a
//! number and keeps everything that references a real item letter.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;

use super::items::item_by_letter;
use super::{BfiAnswerSheet, BfiError};

fn answer_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"\(([a-z]{1,2})\)\s*[:.]?\s*(\d+)").expect("answer pattern compiles")
    })
}

/// Extracts `(letter) digit` answers, tolerating surrounding prose,
/// flexible whitespace, and `:` or `.` separators.
///
/// Unknown letters (not one of the 44 item letters) are ignored as prose.
/// A digit outside 1..=5 is an error; so is the same letter answered
/// twice with different values. The returned sheet may be incomplete;
/// completeness is checked by the scorer.
pub fn parse_answer_sheet(text: &str) -> Result<BfiAnswerSheet, BfiError> {
    let mut answers: BTreeMap<String, u8> = BTreeMap::new();
    for captures in answer_pattern().captures_iter(text) {
        let letter = captures.get(1).expect("group 1 exists").as_str();
        if item_by_letter(letter).is_none() {
            continue;
        }
        let digits = captures.get(2).expect("group 2 exists").as_str();
        let value: u32 = digits.parse().map_err(|_| BfiError::OutOfRangeAnswer {
            letter: letter.to_string(),
            value: i64::MAX,
        })?;
        if !(1..=5).contains(&value) {
            return Err(BfiError::OutOfRangeAnswer {
                letter: letter.to_string(),
                value: value as i64,
            });
        }
        let value = value as u8;
        if let Some(&existing) = answers.get(letter) {
            if existing != value {
                return Err(BfiError::DuplicateLetter {
                    letter: letter.to_string(),
                    first: existing,
                    second: value,
                });
            }
            continue;
        }
        answers.insert(letter.to_string(), value);
    }
    Ok(BfiAnswerSheet {
        answers,
        source_text: text.to_string(),
    })
}
