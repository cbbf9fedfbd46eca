//! Deterministic mock backends.
//!
//! [`ScriptedMockBackend`] serves canned responses from matcher rules and
//! is the workhorse for tests that need precise control (malformed
//! sheets, retry sequences, short stories).
//!
//! [`SyntheticBackend`] is a self-contained generator that can drive the
//! entire pipeline offline: it answers BFI questionnaires in line with the
//! requesting persona and writes stories whose content words are drawn
//! from group-specific seed lists, so the downstream lexicon analysis has
//! real signal to find. All output is a pure function of the request
//! fingerprint.

use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BackendError, GenerationRequest, GenerationResult, Role, TextBackend};
use crate::bfi;

/// Matcher plus response playlist. Responses are served in order; once the
/// playlist is exhausted the last response repeats unless `repeat_last`
/// was disabled, in which case further matches are a script miss.
#[derive(Debug, Clone)]
pub struct MockRule {
    system_contains: Option<String>,
    user_contains: Option<String>,
    agent_id: Option<String>,
    responses: Vec<String>,
    repeat_last: bool,
}

impl MockRule {
    pub fn new() -> Self {
        MockRule {
            system_contains: None,
            user_contains: None,
            agent_id: None,
            responses: Vec::new(),
            repeat_last: true,
        }
    }

    pub fn when_system_contains(mut self, needle: impl Into<String>) -> Self {
        self.system_contains = Some(needle.into());
        self
    }

    pub fn when_user_contains(mut self, needle: impl Into<String>) -> Self {
        self.user_contains = Some(needle.into());
        self
    }

    pub fn for_agent(mut self, agent_id: impl Into<String>) -> Self {
        self.agent_id = Some(agent_id.into());
        self
    }

    pub fn respond(mut self, text: impl Into<String>) -> Self {
        self.responses.push(text.into());
        self
    }

    pub fn respond_all(mut self, texts: impl IntoIterator<Item = String>) -> Self {
        self.responses.extend(texts);
        self
    }

    /// Exhausted playlists miss instead of repeating the final response.
    pub fn once_only(mut self) -> Self {
        self.repeat_last = false;
        self
    }

    fn matches(&self, request: &GenerationRequest) -> bool {
        if let Some(agent) = &self.agent_id {
            if request.agent_id != *agent {
                return false;
            }
        }
        if let Some(needle) = &self.system_contains {
            let hit = request
                .messages
                .iter()
                .any(|m| m.role == Role::System && m.content.contains(needle.as_str()));
            if !hit {
                return false;
            }
        }
        if let Some(needle) = &self.user_contains {
            let hit = request
                .messages
                .iter()
                .rev()
                .find(|m| m.role == Role::User)
                .map(|m| m.content.contains(needle.as_str()))
                .unwrap_or(false);
            if !hit {
                return false;
            }
        }
        true
    }
}

impl Default for MockRule {
    fn default() -> Self {
        Self::new()
    }
}

/// Rule-based mock: first matching rule answers, in insertion order.
pub struct ScriptedMockBackend {
    rules: Mutex<Vec<(MockRule, usize)>>,
    backend_id: String,
}

impl ScriptedMockBackend {
    pub fn new() -> Self {
        ScriptedMockBackend {
            rules: Mutex::new(Vec::new()),
            backend_id: "mock".to_string(),
        }
    }

    pub fn with_rule(self, rule: MockRule) -> Self {
        self.rules
            .lock()
            .expect("mock rules poisoned")
            .push((rule, 0));
        self
    }

    pub fn add_rule(&self, rule: MockRule) {
        self.rules
            .lock()
            .expect("mock rules poisoned")
            .push((rule, 0));
    }
}

impl Default for ScriptedMockBackend {
    fn default() -> Self {
        Self::new()
    }
}

impl TextBackend for ScriptedMockBackend {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, BackendError> {
        let mut rules = self.rules.lock().expect("mock rules poisoned");
        for (rule, cursor) in rules.iter_mut() {
            if !rule.matches(request) {
                continue;
            }
            let text = if *cursor < rule.responses.len() {
                let text = rule.responses[*cursor].clone();
                *cursor += 1;
                text
            } else if rule.repeat_last && !rule.responses.is_empty() {
                rule.responses.last().expect("non-empty checked").clone()
            } else {
                return Err(BackendError::ScriptMiss {
                    fingerprint: request.fingerprint(),
                });
            };
            return Ok(GenerationResult {
                text: text.trim_end().to_string(),
                backend_id: self.backend_id.clone(),
                latency_ms: 0,
                raw_fingerprint: request.fingerprint(),
            });
        }
        Err(BackendError::ScriptMiss {
            fingerprint: request.fingerprint(),
        })
    }

    fn backend_id(&self) -> &str {
        &self.backend_id
    }
}

// Seed vocabularies for the synthetic generator. The demo dictionary below
// maps them to categories, so stories built from these lists produce
// separable lexicon profiles.

pub const POSEMO_WORDS: &[&str] = &[
    "happy",
    "joy",
    "joyful",
    "love",
    "loved",
    "wonderful",
    "delighted",
    "cheerful",
    "glad",
    "admire",
    "admired",
    "warm",
    "smiled",
    "laughed",
    "excited",
    "grateful",
    "beautiful",
];

pub const INCL_WORDS: &[&str] = &[
    "with",
    "and",
    "along",
    "around",
    "both",
    "added",
    "together",
    "include",
    "including",
];

pub const NEGEMO_WORDS: &[&str] = &[
    "hate",
    "hated",
    "worthless",
    "enemy",
    "nasty",
    "abandoned",
    "abuse",
    "aching",
    "adverse",
    "awful",
    "terrible",
    "grief",
    "sorrow",
    "sad",
    "cried",
];

pub const DISCREP_WORDS: &[&str] = &[
    "besides",
    "could",
    "should",
    "would",
    "couldn't",
    "wouldn't",
    "shouldn't",
    "hope",
    "hoped",
    "suppose",
    "supposed",
    "rather",
    "ought",
];

const INSIGHT_WORDS: &[&str] = &[
    "understand",
    "understood",
    "know",
    "knew",
    "aware",
    "attention",
    "realized",
];
const TENTAT_WORDS: &[&str] = &["maybe", "perhaps", "guess", "seemed", "somewhat", "almost"];
const ANGER_WORDS: &[&str] = &["angry", "anger", "furious", "rage", "annoyed"];
const RELIG_WORDS: &[&str] = &["church", "faith", "prayer", "blessed", "spirit"];
const PPRON_WORDS: &[&str] = &["i", "we", "you", "she", "they"];
const IMPERSONAL_PRONOUN_WORDS: &[&str] = &["it", "its", "those", "that"];

/// Glue words that deliberately match nothing in the demo dictionary.
const NEUTRAL_WORDS: &[&str] = &[
    "the", "a", "morning", "evening", "city", "village", "walked", "quiet", "small", "old",
    "house", "road", "light", "window", "garden", "went", "came", "saw", "took", "year", "day",
    "moment", "remember", "story", "summer", "winter", "river", "mountain", "letter", "table",
    "slowly", "finally", "again", "then", "once", "first", "last", "long", "still", "about",
];

/// A small LIWC-2007-format dictionary covering the synthetic
/// vocabularies. Written by `init` as `demo.dic` so offline mock runs can
/// be analyzed end to end.
pub fn demo_dictionary_text() -> String {
    let mut out = String::from("%\n");
    let categories = [
        (1, "posemo"),
        (2, "negemo"),
        (3, "discrep"),
        (4, "incl"),
        (5, "insight"),
        (6, "ppron"),
        (7, "sad"),
        (8, "pronoun"),
        (9, "tentat"),
        (10, "relig"),
        (11, "anger"),
    ];
    for (id, name) in categories {
        out.push_str(&format!("{id}\t{name}\n"));
    }
    out.push_str("%\n");

    let mut push = |word: &str, ids: &[u32]| {
        out.push_str(word);
        for id in ids {
            out.push_str(&format!("\t{id}"));
        }
        out.push('\n');
    };

    // Stems exercise the wildcard matcher on purpose.
    push("admir*", &[1]);
    push("joy*", &[1]);
    push("laugh*", &[1]);
    push("smile*", &[1]);
    push("smiled", &[1]);
    for word in [
        "happy",
        "love",
        "loved",
        "wonderful",
        "delighted",
        "cheerful",
        "glad",
        "warm",
        "excited",
        "grateful",
        "beautiful",
    ] {
        push(word, &[1]);
    }
    for word in [
        "hate",
        "hated",
        "worthless",
        "enemy",
        "nasty",
        "abandoned",
        "abuse",
        "aching",
        "adverse",
        "awful",
        "terrible",
    ] {
        push(word, &[2]);
    }
    // Sadness words also count as negative emotion, like the published
    // dictionary's hierarchy.
    for word in ["grief", "sorrow", "sad", "cried"] {
        push(word, &[2, 7]);
    }
    for word in DISCREP_WORDS {
        push(word, &[3]);
    }
    for word in INCL_WORDS {
        push(word, &[4]);
    }
    push("understand*", &[5]);
    for word in ["know", "knew", "aware", "attention", "realized"] {
        push(word, &[5]);
    }
    for word in PPRON_WORDS {
        push(word, &[6, 8]);
    }
    for word in IMPERSONAL_PRONOUN_WORDS {
        push(word, &[8]);
    }
    for word in TENTAT_WORDS {
        push(word, &[9]);
    }
    for word in RELIG_WORDS {
        push(word, &[10]);
    }
    for word in ANGER_WORDS {
        push(word, &[2, 11]);
    }
    out
}

/// Task the synthetic generator recognized in a request.
enum SyntheticTask {
    Bfi,
    Story,
}

/// Deterministic whole-pipeline generator.
///
/// * BFI prompts get a complete 44-line answer sheet biased toward the
///   persona in the system prompt, with per-item jitter for within-group
///   variance.
/// * Writing prompts get a story of 540-860 words. A content-word slot
///   draws from the group's own seed lists with probability
///   `own_list_fraction`, otherwise from the opposite group's lists.
///   0.7 gives cleanly separable groups; 0.5 erases the group signal.
pub struct SyntheticBackend {
    own_list_fraction: f64,
    backend_id: String,
}

impl SyntheticBackend {
    pub fn new(own_list_fraction: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&own_list_fraction),
            "own_list_fraction must be in [0, 1]"
        );
        SyntheticBackend {
            own_list_fraction,
            backend_id: "synthetic".to_string(),
        }
    }

    /// Separable groups: 70% of content words from the group's own lists.
    pub fn separable() -> Self {
        SyntheticBackend::new(0.7)
    }

    /// Indistinguishable groups: both draw 50/50 from either list pair.
    pub fn blended() -> Self {
        SyntheticBackend::new(0.5)
    }

    fn classify(request: &GenerationRequest) -> Option<SyntheticTask> {
        let last_user = request
            .messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)?;
        if last_user
            .content
            .starts_with("Here are a number of characteristics")
        {
            Some(SyntheticTask::Bfi)
        } else if last_user
            .content
            .starts_with("Please share a personal story")
        {
            Some(SyntheticTask::Story)
        } else {
            None
        }
    }

    fn is_creative(request: &GenerationRequest) -> bool {
        request
            .messages
            .iter()
            .any(|m| m.role == Role::System && m.content.contains("extroverted"))
    }

    fn rng_for(request: &GenerationRequest) -> ChaCha8Rng {
        let fingerprint = request.fingerprint();
        let mut seed = [0u8; 8];
        for (i, byte) in seed.iter_mut().enumerate() {
            *byte =
                u8::from_str_radix(&fingerprint[i * 2..i * 2 + 2], 16).expect("fingerprint is hex");
        }
        ChaCha8Rng::seed_from_u64(u64::from_le_bytes(seed))
    }

    fn answer_sheet(creative: bool, rng: &mut ChaCha8Rng) -> String {
        let mut lines = Vec::with_capacity(44);
        for item in bfi::items() {
            // Persona targets the high pole on every trait for creative,
            // the low pole for analytical; reversed items flip the digit.
            let want_high = creative != item.reversed;
            let answer = if rng.gen_bool(0.08) {
                3
            } else if want_high {
                if rng.gen_bool(0.5) {
                    5
                } else {
                    4
                }
            } else if rng.gen_bool(0.5) {
                1
            } else {
                2
            };
            lines.push(format!("({}) {answer}", item.letter));
        }
        lines.join("\n")
    }

    fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
        words[rng.gen_range(0..words.len())]
    }

    fn story(&self, creative: bool, rng: &mut ChaCha8Rng) -> String {
        let target_words = rng.gen_range(540..=860);
        let (own_a, own_b, other_a, other_b) = if creative {
            (POSEMO_WORDS, INCL_WORDS, NEGEMO_WORDS, DISCREP_WORDS)
        } else {
            (NEGEMO_WORDS, DISCREP_WORDS, POSEMO_WORDS, INCL_WORDS)
        };

        let mut words: Vec<String> = Vec::with_capacity(target_words);
        while words.len() < target_words {
            let sentence_len = rng.gen_range(8..=14).min(target_words - words.len()).max(1);
            for position in 0..sentence_len {
                let word = if position == 0 {
                    Self::pick(rng, PPRON_WORDS)
                } else {
                    let roll: f64 = rng.gen();
                    if roll < 0.40 {
                        Self::pick(rng, NEUTRAL_WORDS)
                    } else if roll < 0.48 {
                        // Equal-rate sprinkle keeps the minor categories
                        // populated without adding group signal.
                        match rng.gen_range(0..5) {
                            0 => Self::pick(rng, INSIGHT_WORDS),
                            1 => Self::pick(rng, TENTAT_WORDS),
                            2 => Self::pick(rng, ANGER_WORDS),
                            3 => Self::pick(rng, RELIG_WORDS),
                            _ => Self::pick(rng, IMPERSONAL_PRONOUN_WORDS),
                        }
                    } else {
                        let own = rng.gen_bool(self.own_list_fraction);
                        let (list_a, list_b) = if own {
                            (own_a, own_b)
                        } else {
                            (other_a, other_b)
                        };
                        if rng.gen_bool(0.6) {
                            Self::pick(rng, list_a)
                        } else {
                            Self::pick(rng, list_b)
                        }
                    }
                };
                let mut word = word.to_string();
                if position == 0 {
                    let mut chars = word.chars();
                    if let Some(first) = chars.next() {
                        word = first.to_uppercase().collect::<String>() + chars.as_str();
                    }
                }
                if position == sentence_len - 1 {
                    word.push('.');
                }
                words.push(word);
            }
        }
        words.join(" ")
    }
}

impl TextBackend for SyntheticBackend {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, BackendError> {
        let task = Self::classify(request).ok_or_else(|| BackendError::ScriptMiss {
            fingerprint: request.fingerprint(),
        })?;
        let creative = Self::is_creative(request);
        let mut rng = Self::rng_for(request);
        let text = match task {
            SyntheticTask::Bfi => Self::answer_sheet(creative, &mut rng),
            SyntheticTask::Story => self.story(creative, &mut rng),
        };
        Ok(GenerationResult {
            text,
            backend_id: self.backend_id.clone(),
            latency_ms: 0,
            raw_fingerprint: request.fingerprint(),
        })
    }

    fn backend_id(&self) -> &str {
        &self.backend_id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ChatMessage;

    fn request(system: &str, user: &str, agent: &str, seq: u64) -> GenerationRequest {
        GenerationRequest {
            messages: vec![ChatMessage::system(system), ChatMessage::user(user)],
            temperature: 0.7,
            model_id: "test-model".to_string(),
            max_tokens: None,
            agent_id: agent.to_string(),
            sequence: seq,
        }
    }

    #[test]
    fn scripted_mock_serves_matching_rule() {
        let backend = ScriptedMockBackend::new().with_rule(
            MockRule::new()
                .when_user_contains("characteristics")
                .respond("(a) 1"),
        );
        let hit = backend
            .generate(&request(
                "p",
                "Here are a number of characteristics...",
                "x",
                0,
            ))
            .unwrap();
        assert_eq!(hit.text, "(a) 1");
        let miss = backend
            .generate(&request("p", "something else", "x", 1))
            .unwrap_err();
        assert!(matches!(miss, BackendError::ScriptMiss { .. }));
    }

    #[test]
    fn scripted_mock_playlist_order() {
        let backend = ScriptedMockBackend::new().with_rule(
            MockRule::new()
                .when_user_contains("task")
                .respond("first")
                .respond("second"),
        );
        let req = request("p", "task", "x", 0);
        assert_eq!(backend.generate(&req).unwrap().text, "first");
        assert_eq!(backend.generate(&req).unwrap().text, "second");
        // Last response repeats by default.
        assert_eq!(backend.generate(&req).unwrap().text, "second");
    }

    #[test]
    fn scripted_mock_once_only_exhausts() {
        let backend = ScriptedMockBackend::new().with_rule(
            MockRule::new()
                .when_user_contains("task")
                .respond("only")
                .once_only(),
        );
        let req = request("p", "task", "x", 0);
        assert_eq!(backend.generate(&req).unwrap().text, "only");
        assert!(matches!(
            backend.generate(&req).unwrap_err(),
            BackendError::ScriptMiss { .. }
        ));
    }

    #[test]
    fn scripted_mock_agent_filter() {
        let backend = ScriptedMockBackend::new()
            .with_rule(MockRule::new().for_agent("a-1").respond("for a-1"))
            .with_rule(MockRule::new().respond("fallback"));
        assert_eq!(
            backend.generate(&request("p", "u", "a-1", 0)).unwrap().text,
            "for a-1"
        );
        assert_eq!(
            backend.generate(&request("p", "u", "a-2", 0)).unwrap().text,
            "fallback"
        );
    }

    #[test]
    fn synthetic_is_deterministic_per_fingerprint() {
        let backend = SyntheticBackend::separable();
        let req = request(
            "You are a character who is extroverted, agreeable...",
            "Please share a personal story below in 800 words.",
            "agent-1",
            3,
        );
        let a = backend.generate(&req).unwrap().text;
        let b = backend.generate(&req).unwrap().text;
        assert_eq!(a, b);

        let other = request(
            "You are a character who is extroverted, agreeable...",
            "Please share a personal story below in 800 words.",
            "agent-2",
            3,
        );
        assert_ne!(a, backend.generate(&other).unwrap().text);
    }

    #[test]
    fn synthetic_story_word_count_in_bounds() {
        let backend = SyntheticBackend::separable();
        for seq in 0..20 {
            let req = request(
                "You are a character who is introverted, antagonistic...",
                "Please share a personal story below in 800 words.",
                "agent-9",
                seq,
            );
            let story = backend.generate(&req).unwrap().text;
            let count = story.split_whitespace().count();
            assert!(
                (500..=900).contains(&count),
                "word count {count} out of range"
            );
        }
    }

    #[test]
    fn synthetic_bfi_sheet_has_44_lines() {
        let backend = SyntheticBackend::separable();
        let req = request(
            "You are a character who is extroverted...",
            "Here are a number of characteristics that may or may not apply to you.",
            "agent-1",
            0,
        );
        let sheet = backend.generate(&req).unwrap().text;
        assert_eq!(sheet.lines().count(), 44);
        assert!(sheet.starts_with("(a) "));
    }

    #[test]
    fn synthetic_misses_unknown_tasks() {
        let backend = SyntheticBackend::separable();
        let err = backend
            .generate(&request("p", "write a poem", "x", 0))
            .unwrap_err();
        assert!(matches!(err, BackendError::ScriptMiss { .. }));
    }

    #[test]
    fn demo_dictionary_parses_category_header() {
        let text = demo_dictionary_text();
        assert!(text.starts_with("%\n1\tposemo\n"));
        assert!(text.contains("\nadmir*\t1\n"));
        assert!(text.contains("\nsad\t2\t7\n"));
    }
}
