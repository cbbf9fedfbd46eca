//! Big Five Inventory administration: prompt construction, answer-sheet
//! parsing, and reverse-keyed trait scoring.

mod items;
mod parse;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{BackendError, ChatMessage, RequestFactory, TextBackend};
use crate::persona::TraitName;

pub use items::{build_bfi_prompt, item_by_letter, items, items_per_trait, BfiItem};
pub use parse::parse_answer_sheet;

/// When in an experiment a questionnaire was administered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    BeforeWriting,
    AfterNonInteractiveWriting,
    AfterInteractiveWriting,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::BeforeWriting => "BeforeWriting",
            Phase::AfterNonInteractiveWriting => "AfterNonInteractiveWriting",
            Phase::AfterInteractiveWriting => "AfterInteractiveWriting",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum BfiError {
    #[error("incomplete sheet: missing {} letters ({})", missing.len(), missing.join(", "))]
    IncompleteSheet { missing: Vec<String> },
    #[error("answer for ({letter}) is {value}, outside 1..=5")]
    OutOfRangeAnswer { letter: String, value: i64 },
    #[error("conflicting repeated answer for ({letter}): {first} then {second}")]
    DuplicateLetter {
        letter: String,
        first: u8,
        second: u8,
    },
    #[error("no well-formed answer sheet after {attempts} attempts")]
    PersistentlyMalformed {
        attempts: u32,
        raw_texts: Vec<String>,
    },
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// Parsed Likert answers keyed by statement letter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfiAnswerSheet {
    pub answers: BTreeMap<String, u8>,
    pub source_text: String,
}

impl BfiAnswerSheet {
    pub fn is_complete(&self) -> bool {
        self.answers.len() == items().len()
    }

    /// Letters with no parsed answer, in questionnaire order.
    pub fn missing_letters(&self) -> Vec<String> {
        items()
            .iter()
            .filter(|item| !self.answers.contains_key(item.letter))
            .map(|item| item.letter.to_string())
            .collect()
    }
}

/// The five summed trait scores from one administration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraitScores {
    pub sums: BTreeMap<TraitName, u32>,
    pub phase: Phase,
}

impl TraitScores {
    pub fn get(&self, trait_name: TraitName) -> u32 {
        self.sums[&trait_name]
    }
}

/// Sums each trait's items, reverse-keyed items contributing `6 - answer`.
///
/// Trait sums therefore lie in `[n_items, 5 * n_items]` per trait.
pub fn score(sheet: &BfiAnswerSheet, phase: Phase) -> Result<TraitScores, BfiError> {
    if !sheet.is_complete() {
        return Err(BfiError::IncompleteSheet {
            missing: sheet.missing_letters(),
        });
    }
    let mut sums: BTreeMap<TraitName, u32> = TraitName::ALL.iter().map(|t| (*t, 0)).collect();
    for item in items() {
        let answer = u32::from(sheet.answers[item.letter]);
        let contribution = if item.reversed { 6 - answer } else { answer };
        *sums.get_mut(&item.trait_name).expect("all traits present") += contribution;
    }
    Ok(TraitScores { sums, phase })
}

/// Everything produced by one questionnaire administration.
#[derive(Debug, Clone)]
pub struct BfiAdministration {
    pub scores: TraitScores,
    /// The questionnaire exchange: the prompt plus the accepted answer.
    pub exchange: [ChatMessage; 2],
    /// Raw completions for every attempt, the last one being the accepted
    /// sheet.
    pub attempts: Vec<String>,
}

/// Sends the questionnaire in the given context, parses and scores the
/// reply, re-sampling on malformed output up to `max_attempts` total
/// generations.
///
/// Each retry is a fresh sample (the factory bumps the sequence counter),
/// not a re-prompt with error feedback. On exhaustion the raw texts are
/// preserved in the error for audit.
pub fn administer_bfi(
    factory: &mut RequestFactory,
    context: &[ChatMessage],
    phase: Phase,
    backend: &dyn TextBackend,
    max_attempts: u32,
) -> Result<BfiAdministration, BfiError> {
    assert!(max_attempts >= 1, "at least one attempt is required");
    let prompt = ChatMessage::user(build_bfi_prompt());
    let mut messages: Vec<ChatMessage> = context.to_vec();
    messages.push(prompt.clone());

    let mut attempts = Vec::new();
    for _ in 0..max_attempts {
        let request = factory.next_request(messages.clone());
        let result = backend.generate(&request)?;
        attempts.push(result.text.clone());
        let scores = match parse_answer_sheet(&result.text) {
            Ok(sheet) => match score(&sheet, phase) {
                Ok(scores) => scores,
                Err(BfiError::IncompleteSheet { .. }) => continue,
                Err(other) => return Err(other),
            },
            Err(BfiError::OutOfRangeAnswer { .. }) | Err(BfiError::DuplicateLetter { .. }) => {
                continue
            }
            Err(other) => return Err(other),
        };
        let answer = ChatMessage::assistant(result.text);
        return Ok(BfiAdministration {
            scores,
            exchange: [prompt, answer],
            attempts,
        });
    }
    Err(BfiError::PersistentlyMalformed {
        attempts: max_attempts,
        raw_texts: attempts,
    })
}
