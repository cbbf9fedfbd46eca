//! Command implementations behind the `persona-lab` binary: config file
//! handling, backend construction, and the subcommand bodies. Kept in the
//! library so the logic is unit-testable; `main.rs` only parses arguments
//! and maps errors to exit codes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::backend::mock::demo_dictionary_text;
use crate::backend::{
    BackendError, HttpBackend, HttpSettings, RecordBackend, ReplayBackend, SyntheticBackend,
    TextBackend,
};
use crate::experiment::{
    bootstrap_population, load_run, run_interactive, run_noninteractive, save_run, BackendMode,
    ExperimentConfig, ExperimentError, ExperimentKind, RunArtifact,
};
use crate::liwc::{parse_dic, LiwcError};
use crate::report::{analyze, compare_runs, write_analysis, ReportError};

/// Stable exit codes: 2 config/usage, 3 backend, 4 data quality or
/// artifact integrity.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;
pub const EXIT_DATA: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        let code = match &e {
            ExperimentError::Config(_) | ExperimentError::Io(_) => EXIT_CONFIG,
            ExperimentError::Backend(_) => EXIT_BACKEND,
            ExperimentError::DataQuality(_)
            | ExperimentError::SchemaMismatch { .. }
            | ExperimentError::CorruptRun(_) => EXIT_DATA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<BackendError> for CliError {
    fn from(e: BackendError) -> Self {
        CliError {
            code: EXIT_BACKEND,
            message: e.to_string(),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        let code = match &e {
            ReportError::Io(_) => EXIT_CONFIG,
            ReportError::Liwc(LiwcError::EmptyDocument { .. }) => EXIT_DATA,
            ReportError::Liwc(_) => EXIT_CONFIG,
            _ => EXIT_DATA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// The user-facing config file: experiment parameters plus live-backend
/// connection settings. The experiment section is what gets snapshotted
/// into run artifacts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LabConfig {
    pub experiment: ExperimentConfig,
    pub backend: HttpSettings,
}

/// The commented config written by `init`. Values spell out the defaults;
/// a round-trip through the parser must reproduce `LabConfig::default()`.
pub fn default_config_toml() -> String {
    let defaults = LabConfig::default();
    let e = &defaults.experiment;
    let b = &defaults.backend;
    format!(
        r#"# persona-lab configuration

[experiment]
# Agents created per personality profile; two built-in profiles, so the
# population is twice this.
population_per_group = {population}
# Sampling temperature for every generation call, in [0, 2].
temperature = {temperature}
# Model identifier sent to the backend.
model_id = "{model_id}"
# Stories outside [word_min, word_max] words are re-sampled and, failing
# that, excluded from the language analyses.
word_min = {word_min}
word_max = {word_max}
# Total generation attempts per questionnaire / story before giving up.
bfi_retries = {bfi_retries}
story_retries = {story_retries}
# Interactive condition pairing; cross_group_both_orders pairs each
# analytical agent with a distinct creative agent and runs both orders.
pairing = "cross_group_both_orders"
# Seed for agent ids, pairing shuffles, and fold assignment.
rng_seed = {rng_seed}
# One of: live, record, replay, scripted_mock.
backend_mode = "scripted_mock"

[backend]
# OpenAI-compatible API root; the key is read from the PERSONA_LAB_API_KEY
# environment variable, never from this file.
base_url = "{base_url}"
requests_per_minute = {rpm}
timeout_secs = {timeout}
max_retries = {retries}
"#,
        population = e.population_per_group,
        temperature = e.temperature,
        model_id = e.model_id,
        word_min = e.word_min,
        word_max = e.word_max,
        bfi_retries = e.bfi_retries,
        story_retries = e.story_retries,
        rng_seed = e.rng_seed,
        base_url = b.base_url,
        rpm = b.requests_per_minute,
        timeout = b.timeout_secs,
        retries = b.max_retries,
    )
}

pub fn load_config(path: &Path) -> Result<LabConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    let config: LabConfig = toml::from_str(&text)
        .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))?;
    config.experiment.validate().map_err(CliError::from)?;
    Ok(config)
}

/// Writes `config.toml` and `demo.dic` into `dir`. The demo dictionary
/// pairs with the scripted-mock backend so a full offline run can be
/// analyzed end to end. Fails if `config.toml` exists, unless forced.
pub fn cmd_init(dir: &Path, force: bool) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
    let config_path = dir.join("config.toml");
    if config_path.exists() && !force {
        return Err(CliError::config(format!(
            "{} already exists; pass --force to overwrite",
            config_path.display()
        )));
    }
    fs::write(&config_path, default_config_toml())
        .map_err(|e| CliError::config(format!("cannot write config: {e}")))?;
    fs::write(dir.join("demo.dic"), demo_dictionary_text())
        .map_err(|e| CliError::config(format!("cannot write demo dictionary: {e}")))?;
    Ok(config_path)
}

fn replay_store_path(run_dir: &Path) -> PathBuf {
    run_dir.join("replay_store.jsonl")
}

/// Builds the generation backend for a run. Record mode wraps the live
/// client and persists into the run directory; replay mode reads the
/// store recorded there.
pub fn build_backend(
    mode: BackendMode,
    settings: &HttpSettings,
    run_dir: &Path,
) -> Result<Box<dyn TextBackend>, CliError> {
    match mode {
        BackendMode::Live => Ok(Box::new(HttpBackend::from_env(settings.clone())?)),
        BackendMode::Record => {
            let live = HttpBackend::from_env(settings.clone())?;
            Ok(Box::new(RecordBackend::create(
                &replay_store_path(run_dir),
                Box::new(live),
            )?))
        }
        BackendMode::Replay => Ok(Box::new(ReplayBackend::open(&replay_store_path(run_dir))?)),
        BackendMode::ScriptedMock => Ok(Box::new(SyntheticBackend::separable())),
    }
}

pub struct RunSummary {
    pub run_id: String,
    pub agents: usize,
    pub stories: usize,
    pub failures: usize,
}

pub fn cmd_run(
    kind: ExperimentKind,
    config_path: &Path,
    run_dir: &Path,
    backend_override: Option<BackendMode>,
    seed_override: Option<u64>,
) -> Result<RunSummary, CliError> {
    let mut config = load_config(config_path)?;
    if let Some(mode) = backend_override {
        config.experiment.backend_mode = mode;
    }
    if let Some(seed) = seed_override {
        config.experiment.rng_seed = seed;
    }
    let population = bootstrap_population(&config.experiment)?;
    let backend = build_backend(config.experiment.backend_mode, &config.backend, run_dir)?;
    let artifact = match kind {
        ExperimentKind::NonInteractive => {
            run_noninteractive(&population, &config.experiment, backend.as_ref())?
        }
        ExperimentKind::Interactive => {
            run_interactive(&population, &config.experiment, backend.as_ref())?
        }
    };
    save_run(&artifact, run_dir)?;
    Ok(RunSummary {
        run_id: artifact.run_id,
        agents: artifact.agents.len(),
        stories: artifact.stories.len(),
        failures: artifact.failures.len(),
    })
}

pub fn cmd_analyze(run_dir: &Path, dic_path: &Path) -> Result<String, CliError> {
    let artifact = load_run(run_dir)?;
    let dic_text = fs::read_to_string(dic_path).map_err(|e| {
        CliError::config(format!(
            "cannot read dictionary {}: {e}",
            dic_path.display()
        ))
    })?;
    let dictionary = parse_dic(&dic_text)
        .map_err(|e| CliError::config(format!("bad dictionary {}: {e}", dic_path.display())))?;
    let outputs = analyze(&artifact, &dictionary)?;
    write_analysis(run_dir, &outputs)?;
    Ok(artifact.run_id)
}

pub fn cmd_compare(run_a: &Path, run_b: &Path) -> Result<String, CliError> {
    let a = load_run(run_a)?;
    let b = load_run(run_b)?;
    Ok(compare_runs(&a, &b)?)
}

pub enum ReplayVerdict {
    Identical,
    Diverged { reason: String },
}

/// Re-executes a recorded run against its own replay store and checks the
/// regenerated artifact byte-for-byte against `run.json`.
pub fn cmd_replay_verify(run_dir: &Path) -> Result<(RunArtifact, ReplayVerdict), CliError> {
    let artifact = load_run(run_dir)?;
    let population = bootstrap_population(&artifact.config)?;
    let backend = ReplayBackend::open(&replay_store_path(run_dir))?;
    let replayed = match artifact.kind {
        ExperimentKind::NonInteractive => {
            run_noninteractive(&population, &artifact.config, &backend)
        }
        ExperimentKind::Interactive => run_interactive(&population, &artifact.config, &backend),
    };
    let replayed = match replayed {
        Ok(replayed) => replayed,
        Err(ExperimentError::Backend(BackendError::ScriptMiss { fingerprint })) => {
            return Ok((
                artifact,
                ReplayVerdict::Diverged {
                    reason: format!("replay store misses fingerprint {fingerprint}"),
                },
            ));
        }
        Err(other) => return Err(other.into()),
    };
    let original = fs::read_to_string(run_dir.join("run.json"))
        .map_err(|e| CliError::config(format!("cannot reread run.json: {e}")))?;
    let verdict = if replayed.to_canonical_json() == original {
        ReplayVerdict::Identical
    } else {
        ReplayVerdict::Diverged {
            reason: "replayed artifact differs from run.json".to_string(),
        }
    };
    Ok((artifact, verdict))
}
