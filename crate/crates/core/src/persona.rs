//! Personality profiles, their conditioning prompts, and agent identities.
//!
//! A [`PersonaProfile`] is pure data: a system prompt plus the Big Five
//! polarity the prompt is meant to induce. The two built-in profiles
//! (`creative` and `analytical`) cover the standard two-group setup;
//! additional profiles can be loaded from a key/value config file without
//! code changes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five Big Five personality dimensions.
///
/// Ordering is fixed (E, A, C, N, O) and used for report columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TraitName {
    Extraversion,
    Agreeableness,
    Conscientiousness,
    Neuroticism,
    Openness,
}

impl TraitName {
    /// All five traits in report-column order.
    pub const ALL: [TraitName; 5] = [
        TraitName::Extraversion,
        TraitName::Agreeableness,
        TraitName::Conscientiousness,
        TraitName::Neuroticism,
        TraitName::Openness,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TraitName::Extraversion => "Extraversion",
            TraitName::Agreeableness => "Agreeableness",
            TraitName::Conscientiousness => "Conscientiousness",
            TraitName::Neuroticism => "Neuroticism",
            TraitName::Openness => "Openness",
        }
    }

    /// Single-letter column code (E, A, C, N, O).
    pub fn code(&self) -> char {
        match self {
            TraitName::Extraversion => 'E',
            TraitName::Agreeableness => 'A',
            TraitName::Conscientiousness => 'C',
            TraitName::Neuroticism => 'N',
            TraitName::Openness => 'O',
        }
    }
}

impl fmt::Display for TraitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether a profile is designed to score high or low on a trait.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    High,
    Low,
}

impl Polarity {
    pub fn opposite(self) -> Polarity {
        match self {
            Polarity::High => Polarity::Low,
            Polarity::Low => Polarity::High,
        }
    }
}

/// Binary group coding: creative = 1, analytical = 0.
///
/// Positive point-biserial coefficients therefore indicate correlation
/// with the creative group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    Analytical,
    Creative,
}

impl Group {
    pub fn label(&self) -> u8 {
        match self {
            Group::Analytical => 0,
            Group::Creative => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Group::Analytical => "analytical",
            Group::Creative => "creative",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PersonaError {
    #[error("system prompt must not be empty")]
    EmptySystemPrompt,
    #[error("expected polarity missing for trait {0}")]
    MissingPolarity(TraitName),
    #[error("profile config line {line}: {message}")]
    BadConfigLine { line: usize, message: String },
    #[error("profile config missing key `{0}`")]
    MissingConfigKey(&'static str),
}

/// A named persona: a system prompt plus the Big Five polarity it encodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonaProfile {
    pub id: String,
    pub display_name: String,
    pub system_prompt: String,
    pub expected_polarity: BTreeMap<TraitName, Polarity>,
}

impl PersonaProfile {
    pub fn new(
        id: impl Into<String>,
        display_name: impl Into<String>,
        system_prompt: impl Into<String>,
        expected_polarity: BTreeMap<TraitName, Polarity>,
    ) -> Result<Self, PersonaError> {
        let system_prompt = system_prompt.into();
        if system_prompt.is_empty() {
            return Err(PersonaError::EmptySystemPrompt);
        }
        for trait_name in TraitName::ALL {
            if !expected_polarity.contains_key(&trait_name) {
                return Err(PersonaError::MissingPolarity(trait_name));
            }
        }
        Ok(PersonaProfile {
            id: id.into(),
            display_name: display_name.into(),
            system_prompt,
            expected_polarity,
        })
    }

    /// Expected polarity for one trait. Defined for all five traits by
    /// construction.
    pub fn expected_polarity(&self, trait_name: TraitName) -> Polarity {
        self.expected_polarity[&trait_name]
    }
}

const CREATIVE_PROMPT: &str = "You are a character who is extroverted, agreeable, conscientious, \
                               neurotic and open to experience.";
const ANALYTICAL_PROMPT: &str = "You are a character who is introverted, antagonistic, \
                                 unconscientious, emotionally stable and closed to experience.";

/// The two built-in profiles: `creative` (all traits High) and
/// `analytical` (all traits Low).
///
/// Pure: repeated calls return identical values.
pub fn builtin_profiles() -> Vec<PersonaProfile> {
    let all = |polarity: Polarity| {
        TraitName::ALL
            .iter()
            .map(|t| (*t, polarity))
            .collect::<BTreeMap<_, _>>()
    };
    vec![
        PersonaProfile::new("creative", "Creative", CREATIVE_PROMPT, all(Polarity::High))
            .expect("builtin creative profile is valid"),
        PersonaProfile::new(
            "analytical",
            "Analytical",
            ANALYTICAL_PROMPT,
            all(Polarity::Low),
        )
        .expect("builtin analytical profile is valid"),
    ]
}

/// Group a built-in profile id belongs to. Custom profiles default to the
/// analytical (0) coding unless their id matches `creative`.
pub fn group_for_profile(profile_id: &str) -> Group {
    if profile_id == "creative" {
        Group::Creative
    } else {
        Group::Analytical
    }
}

/// One agent in a run: identity, profile, group coding, and sampling
/// temperature. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub agent_id: String,
    pub profile_id: String,
    pub group: Group,
    pub sampling_temperature: f64,
}

/// Parses one profile from a key/value config file.
///
/// Format: one `key = value` pair per line, `#` comments and blank lines
/// ignored. Required keys: `id`, `display_name`, `system_prompt`, and the
/// five trait keys (`extraversion`, `agreeableness`, `conscientiousness`,
/// `neuroticism`, `openness`) each set to `high` or `low`. Values may be
/// double-quoted.
pub fn parse_profile_config(text: &str) -> Result<PersonaProfile, PersonaError> {
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(PersonaError::BadConfigLine {
            line: idx + 1,
            message: "expected `key = value`".to_string(),
        })?;
        let key = key.trim().to_ascii_lowercase();
        let mut value = value.trim();
        if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
            value = &value[1..value.len() - 1];
        }
        fields.insert(key, value.to_string());
    }

    let take = |key: &'static str| -> Result<String, PersonaError> {
        fields
            .get(key)
            .cloned()
            .ok_or(PersonaError::MissingConfigKey(key))
    };
    let polarity_of = |key: &'static str| -> Result<Polarity, PersonaError> {
        match take(key)?.to_ascii_lowercase().as_str() {
            "high" => Ok(Polarity::High),
            "low" => Ok(Polarity::Low),
            other => Err(PersonaError::BadConfigLine {
                line: 0,
                message: format!("polarity for `{key}` must be high or low, got `{other}`"),
            }),
        }
    };

    let mut expected = BTreeMap::new();
    expected.insert(TraitName::Extraversion, polarity_of("extraversion")?);
    expected.insert(TraitName::Agreeableness, polarity_of("agreeableness")?);
    expected.insert(
        TraitName::Conscientiousness,
        polarity_of("conscientiousness")?,
    );
    expected.insert(TraitName::Neuroticism, polarity_of("neuroticism")?);
    expected.insert(TraitName::Openness, polarity_of("openness")?);

    PersonaProfile::new(
        take("id")?,
        take("display_name")?,
        take("system_prompt")?,
        expected,
    )
}
