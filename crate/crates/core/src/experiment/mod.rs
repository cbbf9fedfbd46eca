//! Experiment orchestration: population bootstrapping, the
//! non-interactive and interactive writing conditions, questionnaire
//! phases, pairing, word-count filtering, and run persistence.

mod artifact;
pub mod prompts;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{sha256_hex, BackendError, ChatMessage, RequestFactory, TextBackend};
use crate::bfi::{self, BfiError, Phase, TraitScores};
use crate::persona::{builtin_profiles, AgentSpec, Group, PersonaProfile};

pub use artifact::{load_run, save_run, RunArtifact, SCHEMA_VERSION};
pub use prompts::{interactive_writing_prompt, INDIVIDUAL_WRITING_PROMPT};

/// How the generation backend is provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendMode {
    Live,
    Record,
    Replay,
    ScriptedMock,
}

/// Pairing policy for the interactive condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Each analytical agent is paired with a distinct creative agent and
    /// both speaking orders are produced.
    CrossGroupBothOrders,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub population_per_group: u32,
    pub temperature: f64,
    pub model_id: String,
    pub word_min: usize,
    pub word_max: usize,
    pub bfi_retries: u32,
    pub story_retries: u32,
    pub pairing: Pairing,
    pub rng_seed: u64,
    pub backend_mode: BackendMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            population_per_group: 100,
            temperature: 0.7,
            model_id: "gpt-3.5-turbo-0613".to_string(),
            word_min: 500,
            word_max: 900,
            bfi_retries: 3,
            story_retries: 3,
            pairing: Pairing::CrossGroupBothOrders,
            rng_seed: 42,
            backend_mode: BackendMode::ScriptedMock,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.population_per_group < 1 {
            return Err(ExperimentError::Config(
                "population_per_group must be at least 1".to_string(),
            ));
        }
        if self.word_min >= self.word_max {
            return Err(ExperimentError::Config(format!(
                "word_min ({}) must be below word_max ({})",
                self.word_min, self.word_max
            )));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(ExperimentError::Config(format!(
                "temperature {} outside [0, 2]",
                self.temperature
            )));
        }
        if self.bfi_retries < 1 || self.story_retries < 1 {
            return Err(ExperimentError::Config(
                "bfi_retries and story_retries must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    NonInteractive,
    Interactive,
}

impl ExperimentKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            ExperimentKind::NonInteractive => "exp1",
            ExperimentKind::Interactive => "exp2",
        }
    }
}

/// Which writing task produced a story.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StoryPhase {
    Individual,
    InteractiveSecond,
}

/// One generated story.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryRecord {
    pub agent_id: String,
    pub phase: StoryPhase,
    /// Present exactly when `phase` is `InteractiveSecond`.
    pub partner_agent_id: Option<String>,
    pub text: String,
    pub word_count: usize,
    /// True iff word_min <= word_count <= word_max.
    pub accepted: bool,
    /// 1-based attempt that produced this text.
    pub attempt: u32,
}

/// One questionnaire outcome in the artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub agent_id: String,
    pub scores: TraitScores,
}

/// A recorded per-agent problem; raw texts are preserved for audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub agent_id: String,
    pub stage: String,
    pub detail: String,
    pub attempts: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("data quality failure: {0}")]
    DataQuality(String),
    #[error("run schema version {found}, this tool reads {expected}")]
    SchemaMismatch { found: u32, expected: u32 },
    #[error("corrupt run: {0}")]
    CorruptRun(String),
    #[error("io: {0}")]
    Io(String),
}

/// Agents plus the profiles they reference.
#[derive(Debug, Clone)]
pub struct Population {
    pub agents: Vec<AgentSpec>,
    pub profiles: BTreeMap<String, PersonaProfile>,
}

impl Population {
    pub fn system_prompt(&self, agent: &AgentSpec) -> &str {
        &self.profiles[&agent.profile_id].system_prompt
    }

    fn agents_in_group(&self, group: Group) -> Vec<&AgentSpec> {
        self.agents.iter().filter(|a| a.group == group).collect()
    }
}

const CONTEXT_POLICY: &str = "fresh context per task: every prompt context holds only the \
agent's persona system prompt plus that task's messages; the post-writing questionnaire \
additionally includes the agent's own writing exchange";

/// Creates `population_per_group` agents per built-in profile. Agent ids
/// are deterministic functions of the rng seed, so identical configs
/// yield identical populations.
pub fn bootstrap_population(config: &ExperimentConfig) -> Result<Population, ExperimentError> {
    config.validate()?;
    let profiles = builtin_profiles();
    let mut agents = Vec::with_capacity(profiles.len() * config.population_per_group as usize);
    for profile in &profiles {
        let group = crate::persona::group_for_profile(&profile.id);
        for index in 0..config.population_per_group {
            let suffix_input = format!("{}/{}/{}", config.rng_seed, profile.id, index);
            let suffix = &sha256_hex(suffix_input.as_bytes())[..6];
            agents.push(AgentSpec {
                agent_id: format!("{}-{:03}-{suffix}", profile.id, index),
                profile_id: profile.id.clone(),
                group,
                sampling_temperature: config.temperature,
            });
        }
    }
    agents.sort_by(|a, b| a.agent_id.cmp(&b.agent_id));
    let profiles = profiles.into_iter().map(|p| (p.id.clone(), p)).collect();
    Ok(Population { agents, profiles })
}

struct StoryDraft {
    text: String,
    word_count: usize,
    accepted: bool,
    attempt: u32,
}

/// Samples a story, re-generating until the word count lands in bounds or
/// the attempt budget is spent; the final draft is kept either way.
fn generate_story(
    factory: &mut RequestFactory,
    context: &[ChatMessage],
    backend: &dyn TextBackend,
    config: &ExperimentConfig,
) -> Result<StoryDraft, BackendError> {
    let mut last: Option<StoryDraft> = None;
    for attempt in 1..=config.story_retries {
        let request = factory.next_request(context.to_vec());
        let result = backend.generate(&request)?;
        let word_count = result.text.split_whitespace().count();
        let accepted = (config.word_min..=config.word_max).contains(&word_count);
        let draft = StoryDraft {
            text: result.text,
            word_count,
            accepted,
            attempt,
        };
        if accepted {
            return Ok(draft);
        }
        last = Some(draft);
    }
    Ok(last.expect("story_retries >= 1 guarantees at least one draft"))
}

struct RunCollector {
    scores: Vec<ScoreRecord>,
    stories: Vec<StoryRecord>,
    failures: Vec<FailureRecord>,
}

impl RunCollector {
    fn new() -> Self {
        RunCollector {
            scores: Vec::new(),
            stories: Vec::new(),
            failures: Vec::new(),
        }
    }

    /// Runs one questionnaire; records either the scores or the failure.
    /// Returns whether it succeeded.
    fn administer(
        &mut self,
        factory: &mut RequestFactory,
        context: &[ChatMessage],
        phase: Phase,
        backend: &dyn TextBackend,
        config: &ExperimentConfig,
    ) -> Result<bool, ExperimentError> {
        match bfi::administer_bfi(factory, context, phase, backend, config.bfi_retries) {
            Ok(outcome) => {
                self.scores.push(ScoreRecord {
                    agent_id: factory.agent_id().to_string(),
                    scores: outcome.scores,
                });
                Ok(true)
            }
            Err(BfiError::PersistentlyMalformed {
                attempts,
                raw_texts,
            }) => {
                self.failures.push(FailureRecord {
                    agent_id: factory.agent_id().to_string(),
                    stage: format!("bfi:{phase}"),
                    detail: format!("no well-formed sheet in {attempts} attempts"),
                    attempts: raw_texts,
                });
                Ok(false)
            }
            Err(BfiError::Backend(e)) => Err(e.into()),
            Err(other) => Err(ExperimentError::DataQuality(other.to_string())),
        }
    }

    /// Canonical ordering: concurrency or pairing order must never change
    /// the persisted artifact.
    fn into_artifact(
        mut self,
        kind: ExperimentKind,
        config: &ExperimentConfig,
        population: &Population,
    ) -> RunArtifact {
        self.scores
            .sort_by(|a, b| (&a.agent_id, a.scores.phase).cmp(&(&b.agent_id, b.scores.phase)));
        self.stories.sort_by(|a, b| {
            (&a.agent_id, a.phase, &a.partner_agent_id).cmp(&(
                &b.agent_id,
                b.phase,
                &b.partner_agent_id,
            ))
        });
        self.failures
            .sort_by(|a, b| (&a.agent_id, &a.stage).cmp(&(&b.agent_id, &b.stage)));
        RunArtifact {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            run_id: run_id(kind, config),
            kind,
            config: config.clone(),
            context_policy: CONTEXT_POLICY.to_string(),
            agents: population.agents.clone(),
            scores: self.scores,
            stories: self.stories,
            failures: self.failures,
        }
    }

    /// The run survives individual agents failing, but not a majority of
    /// either group.
    fn check_group_failures(&self, population: &Population) -> Result<(), ExperimentError> {
        for group in [Group::Analytical, Group::Creative] {
            let members = population.agents_in_group(group);
            let failed = members
                .iter()
                .filter(|agent| {
                    self.failures
                        .iter()
                        .any(|f| f.agent_id == agent.agent_id && f.stage.starts_with("bfi:"))
                })
                .count();
            if failed * 2 > members.len() {
                return Err(ExperimentError::DataQuality(format!(
                    "{failed} of {} {group} agents failed the questionnaire",
                    members.len()
                )));
            }
        }
        Ok(())
    }
}

fn run_id(kind: ExperimentKind, config: &ExperimentConfig) -> String {
    let config_json = serde_json::to_string(config).expect("config serialization cannot fail");
    let digest = sha256_hex(format!("{}/{config_json}", kind.short_name()).as_bytes());
    format!("{}-{}", kind.short_name(), &digest[..10])
}

fn factory_for(agent: &AgentSpec, config: &ExperimentConfig) -> RequestFactory {
    RequestFactory::new(&agent.agent_id, &config.model_id, config.temperature, None)
}

/// Experiment 1: per agent, questionnaire, individual writing task with
/// word-count filtering, questionnaire again (with the writing exchange
/// in context).
pub fn run_noninteractive(
    population: &Population,
    config: &ExperimentConfig,
    backend: &dyn TextBackend,
) -> Result<RunArtifact, ExperimentError> {
    config.validate()?;
    let mut collector = RunCollector::new();

    for agent in &population.agents {
        let mut factory = factory_for(agent, config);
        let persona = ChatMessage::system(population.system_prompt(agent));

        let before_ok = collector.administer(
            &mut factory,
            std::slice::from_ref(&persona),
            Phase::BeforeWriting,
            backend,
            config,
        )?;
        if !before_ok {
            continue;
        }

        let writing_prompt = ChatMessage::user(INDIVIDUAL_WRITING_PROMPT);
        let writing_context = vec![persona.clone(), writing_prompt.clone()];
        let draft = generate_story(&mut factory, &writing_context, backend, config)?;
        let story_text = draft.text.clone();
        collector.stories.push(StoryRecord {
            agent_id: agent.agent_id.clone(),
            phase: StoryPhase::Individual,
            partner_agent_id: None,
            text: draft.text,
            word_count: draft.word_count,
            accepted: draft.accepted,
            attempt: draft.attempt,
        });

        // Post-writing questionnaire sees the agent's own writing
        // exchange so the task can influence the test.
        let after_context = vec![persona, writing_prompt, ChatMessage::assistant(story_text)];
        collector.administer(
            &mut factory,
            &after_context,
            Phase::AfterNonInteractiveWriting,
            backend,
            config,
        )?;
    }

    collector.check_group_failures(population)?;
    Ok(collector.into_artifact(ExperimentKind::NonInteractive, config, population))
}

/// Cross-group pairs from a seeded shuffle: a bijection between the two
/// groups, executed in canonical order.
fn build_pairs<'a>(
    population: &'a Population,
    config: &ExperimentConfig,
) -> Vec<(&'a AgentSpec, &'a AgentSpec)> {
    let Pairing::CrossGroupBothOrders = config.pairing;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut analytical = population.agents_in_group(Group::Analytical);
    let mut creative = population.agents_in_group(Group::Creative);
    analytical.shuffle(&mut rng);
    creative.shuffle(&mut rng);
    let mut pairs: Vec<(&AgentSpec, &AgentSpec)> = analytical.into_iter().zip(creative).collect();
    pairs.sort_by(|(a1, _), (a2, _)| a1.agent_id.cmp(&a2.agent_id));
    pairs
}

/// Experiment 2: questionnaires before writing, then for every pair and
/// both speaking orders, the first agent writes individually and the
/// second writes conditioned on that story and is tested afterwards.
pub fn run_interactive(
    population: &Population,
    config: &ExperimentConfig,
    backend: &dyn TextBackend,
) -> Result<RunArtifact, ExperimentError> {
    config.validate()?;
    let mut collector = RunCollector::new();
    let mut factories: BTreeMap<String, RequestFactory> = population
        .agents
        .iter()
        .map(|a| (a.agent_id.clone(), factory_for(a, config)))
        .collect();

    for agent in &population.agents {
        let persona = ChatMessage::system(population.system_prompt(agent));
        let factory = factories.get_mut(&agent.agent_id).expect("factory exists");
        collector.administer(
            factory,
            std::slice::from_ref(&persona),
            Phase::BeforeWriting,
            backend,
            config,
        )?;
    }

    for (analytical, creative) in build_pairs(population, config) {
        for (first, second) in [(analytical, creative), (creative, analytical)] {
            let first_persona = ChatMessage::system(population.system_prompt(first));
            let writing_prompt = ChatMessage::user(INDIVIDUAL_WRITING_PROMPT);
            let first_context = vec![first_persona, writing_prompt];
            let first_factory = factories.get_mut(&first.agent_id).expect("factory exists");
            let first_draft = generate_story(first_factory, &first_context, backend, config)?;
            let first_text = first_draft.text.clone();
            let first_accepted = first_draft.accepted;
            collector.stories.push(StoryRecord {
                agent_id: first.agent_id.clone(),
                phase: StoryPhase::Individual,
                partner_agent_id: None,
                text: first_draft.text,
                word_count: first_draft.word_count,
                accepted: first_draft.accepted,
                attempt: first_draft.attempt,
            });

            if !first_accepted {
                // The dependent second story would be conditioned on a
                // rejected input, so the whole direction is invalidated.
                collector.failures.push(FailureRecord {
                    agent_id: second.agent_id.clone(),
                    stage: "interactive-second:skipped".to_string(),
                    detail: format!("partner {} produced no accepted story", first.agent_id),
                    attempts: Vec::new(),
                });
                continue;
            }

            let second_persona = ChatMessage::system(population.system_prompt(second));
            let interactive_prompt = ChatMessage::user(interactive_writing_prompt(&first_text));
            let second_context = vec![second_persona.clone(), interactive_prompt.clone()];
            let second_factory = factories.get_mut(&second.agent_id).expect("factory exists");
            let second_draft = generate_story(second_factory, &second_context, backend, config)?;
            let second_text = second_draft.text.clone();
            collector.stories.push(StoryRecord {
                agent_id: second.agent_id.clone(),
                phase: StoryPhase::InteractiveSecond,
                partner_agent_id: Some(first.agent_id.clone()),
                text: second_draft.text,
                word_count: second_draft.word_count,
                accepted: second_draft.accepted,
                attempt: second_draft.attempt,
            });

            let after_context = vec![
                second_persona,
                interactive_prompt,
                ChatMessage::assistant(second_text),
            ];
            collector.administer(
                second_factory,
                &after_context,
                Phase::AfterInteractiveWriting,
                backend,
                config,
            )?;
        }
    }

    collector.check_group_failures(population)?;
    Ok(collector.into_artifact(ExperimentKind::Interactive, config, population))
}
