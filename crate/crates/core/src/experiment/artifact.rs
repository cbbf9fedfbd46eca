//! On-disk run artifacts: serialization, derived CSV/JSONL views, and an
//! integrity manifest.
//!
//! `save_run` writes `run.json` (the authoritative serialization),
//! `config.json`, `agents.csv`, `bfi_scores.csv`, and `stories.jsonl`,
//! then a `manifest.json` carrying the schema version and the SHA-256 of
//! every written file. `load_run` verifies the manifest before parsing.
//! Analysis outputs (`liwc_rates.csv`, `stats/`, figures) are derived
//! views regenerated by `analyze`; they are not hashed.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    ExperimentConfig, ExperimentError, ExperimentKind, FailureRecord, ScoreRecord, StoryRecord,
};
use crate::backend::sha256_hex;
use crate::persona::{AgentSpec, TraitName};

pub const SCHEMA_VERSION: u32 = 1;

/// The persisted record of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub schema_version: u32,
    pub tool_version: String,
    pub run_id: String,
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    /// How conversational context was managed, recorded per run because
    /// the choice shapes the before/after comparisons.
    pub context_policy: String,
    pub agents: Vec<AgentSpec>,
    pub scores: Vec<ScoreRecord>,
    pub stories: Vec<StoryRecord>,
    pub failures: Vec<FailureRecord>,
}

impl RunArtifact {
    pub fn agent(&self, agent_id: &str) -> Option<&AgentSpec> {
        self.agents.iter().find(|a| a.agent_id == agent_id)
    }

    /// Serialized form written to `run.json`; also the byte string
    /// compared in determinism checks.
    pub fn to_canonical_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("artifact serialization cannot fail");
        text.push('\n');
        text
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    tool_version: String,
    files: BTreeMap<String, String>,
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn agents_csv(artifact: &RunArtifact) -> String {
    let mut out = String::from("agent_id,profile_id,group_label,sampling_temperature\n");
    for agent in &artifact.agents {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(&agent.agent_id),
            csv_field(&agent.profile_id),
            agent.group.label(),
            agent.sampling_temperature
        ));
    }
    out
}

fn scores_csv(artifact: &RunArtifact) -> String {
    let mut out = String::from("run_id,agent_id,group,phase,E,A,C,N,O\n");
    for record in &artifact.scores {
        let group = artifact
            .agent(&record.agent_id)
            .map(|a| a.group.label())
            .unwrap_or_default();
        let sums: Vec<String> = TraitName::ALL
            .iter()
            .map(|t| record.scores.get(*t).to_string())
            .collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&artifact.run_id),
            csv_field(&record.agent_id),
            group,
            record.scores.phase,
            sums.join(",")
        ));
    }
    out
}

fn stories_jsonl(artifact: &RunArtifact) -> String {
    let mut out = String::new();
    for story in &artifact.stories {
        out.push_str(&serde_json::to_string(story).expect("story serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// Writes the artifact and its derived views into `dir`, then the
/// integrity manifest. Existing analysis outputs and replay stores in the
/// directory are left untouched.
pub fn save_run(artifact: &RunArtifact, dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir)
        .map_err(|e| ExperimentError::Io(format!("create {}: {e}", dir.display())))?;

    let mut config_json =
        serde_json::to_string_pretty(&artifact.config).expect("config serialization cannot fail");
    config_json.push('\n');

    let files: Vec<(&str, String)> = vec![
        ("run.json", artifact.to_canonical_json()),
        ("config.json", config_json),
        ("agents.csv", agents_csv(artifact)),
        ("bfi_scores.csv", scores_csv(artifact)),
        ("stories.jsonl", stories_jsonl(artifact)),
    ];

    let mut hashes = BTreeMap::new();
    for (name, contents) in &files {
        let path = dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| ExperimentError::Io(format!("write {}: {e}", path.display())))?;
        hashes.insert(name.to_string(), sha256_hex(contents.as_bytes()));
    }

    let manifest = Manifest {
        schema_version: artifact.schema_version,
        tool_version: artifact.tool_version.clone(),
        files: hashes,
    };
    let mut manifest_json =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    manifest_json.push('\n');
    fs::write(dir.join("manifest.json"), manifest_json)
        .map_err(|e| ExperimentError::Io(format!("write manifest: {e}")))?;
    Ok(())
}

/// Loads a run directory, verifying the schema version and every file
/// hash recorded in the manifest.
pub fn load_run(dir: &Path) -> Result<RunArtifact, ExperimentError> {
    let manifest_path = dir.join("manifest.json");
    let manifest_text = fs::read_to_string(&manifest_path).map_err(|e| {
        ExperimentError::CorruptRun(format!("missing manifest {}: {e}", manifest_path.display()))
    })?;
    let manifest: Manifest = serde_json::from_str(&manifest_text)
        .map_err(|e| ExperimentError::CorruptRun(format!("bad manifest: {e}")))?;
    if manifest.schema_version != SCHEMA_VERSION {
        return Err(ExperimentError::SchemaMismatch {
            found: manifest.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    for (name, expected_hash) in &manifest.files {
        let path = dir.join(name);
        let contents = fs::read(&path)
            .map_err(|e| ExperimentError::CorruptRun(format!("missing {}: {e}", path.display())))?;
        let actual = sha256_hex(&contents);
        if actual != *expected_hash {
            return Err(ExperimentError::CorruptRun(format!(
                "hash mismatch for {name}: manifest {expected_hash}, file {actual}"
            )));
        }
    }
    let run_json = fs::read_to_string(dir.join("run.json"))
        .map_err(|e| ExperimentError::CorruptRun(format!("missing run.json: {e}")))?;
    let artifact: RunArtifact = serde_json::from_str(&run_json)
        .map_err(|e| ExperimentError::CorruptRun(format!("bad run.json: {e}")))?;
    if artifact.schema_version != SCHEMA_VERSION {
        return Err(ExperimentError::SchemaMismatch {
            found: artifact.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(artifact)
}
