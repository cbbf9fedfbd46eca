//! Uniform text-generation interface with three interchangeable backends:
//! a live HTTP chat-completion client, deterministic scripted mocks, and
//! record/replay.
//!
//! Every request carries the issuing agent's id and a per-agent monotonic
//! sequence counter. Both feed the request fingerprint, so identical
//! prompts from different agents (or repeated sampling by one agent) map
//! to distinct recorded completions instead of collapsing the population
//! to a single agent.

pub mod http;
pub mod mock;
pub mod replay;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use http::{HttpBackend, HttpSettings, RateLimiter};
pub use mock::{ScriptedMockBackend, SyntheticBackend};
pub use replay::{RecordBackend, ReplayBackend, ReplayStore};

/// Name of the environment variable holding the API key for live runs.
pub const API_KEY_ENV: &str = "PERSONA_LAB_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

/// One turn of a chat conversation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        let content = content.into();
        debug_assert!(!content.is_empty(), "system messages must not be empty");
        ChatMessage {
            role: Role::System,
            content,
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        let content = content.into();
        debug_assert!(!content.is_empty(), "user messages must not be empty");
        ChatMessage {
            role: Role::User,
            content,
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// A fully-specified generation call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub model_id: String,
    /// None means unlimited (provider default).
    pub max_tokens: Option<u32>,
    /// Agent issuing the request; part of the fingerprint.
    pub agent_id: String,
    /// Per-agent monotonic call counter; part of the fingerprint.
    pub sequence: u64,
}

impl GenerationRequest {
    /// Content-addressed key for record/replay.
    ///
    /// Injective over (messages, temperature, model_id, max_tokens,
    /// agent_id, sequence) up to SHA-256 collisions: every variable-length
    /// field is length-prefixed so concatenations cannot alias.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        let mut put = |bytes: &[u8]| {
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(bytes);
        };
        put(b"persona-lab.request.v1");
        put(self.model_id.as_bytes());
        put(&self.temperature.to_bits().to_le_bytes());
        match self.max_tokens {
            Some(n) => put(&u64::from(n).to_le_bytes()),
            None => put(b"unlimited"),
        }
        put(self.agent_id.as_bytes());
        put(&self.sequence.to_le_bytes());
        put(&(self.messages.len() as u64).to_le_bytes());
        for message in &self.messages {
            put(message.role.as_str().as_bytes());
            put(message.content.as_bytes());
        }
        hex(&hasher.finalize())
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        use std::fmt::Write;
        write!(out, "{b:02x}").expect("writing to string cannot fail");
    }
    out
}

/// SHA-256 of arbitrary bytes as lowercase hex. Shared by the artifact
/// manifest and the replay store.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

/// A completion plus bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationResult {
    /// Verbatim completion, trailing whitespace trimmed.
    pub text: String,
    pub backend_id: String,
    pub latency_ms: u64,
    pub raw_fingerprint: String,
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("no scripted or recorded completion for fingerprint {fingerprint}")]
    ScriptMiss { fingerprint: String },
    #[error("replay store corrupt: {0}")]
    StoreCorrupt(String),
}

/// A text-generation backend. Implementations must be safe to call from
/// many concurrent tasks.
pub trait TextBackend: Send + Sync {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, BackendError>;

    /// Short stable identifier recorded in results.
    fn backend_id(&self) -> &str;
}

/// Builds sequenced requests on behalf of one agent.
///
/// The sequence counter increases on every request, including retries, so
/// each call gets a fresh fingerprint and may receive a distinct sample.
#[derive(Debug, Clone)]
pub struct RequestFactory {
    agent_id: String,
    model_id: String,
    temperature: f64,
    max_tokens: Option<u32>,
    sequence: u64,
}

impl RequestFactory {
    pub fn new(
        agent_id: impl Into<String>,
        model_id: impl Into<String>,
        temperature: f64,
        max_tokens: Option<u32>,
    ) -> Self {
        RequestFactory {
            agent_id: agent_id.into(),
            model_id: model_id.into(),
            temperature,
            max_tokens,
            sequence: 0,
        }
    }

    pub fn agent_id(&self) -> &str {
        &self.agent_id
    }

    pub fn next_request(&mut self, messages: Vec<ChatMessage>) -> GenerationRequest {
        let request = GenerationRequest {
            messages,
            temperature: self.temperature,
            model_id: self.model_id.clone(),
            max_tokens: self.max_tokens,
            agent_id: self.agent_id.clone(),
            sequence: self.sequence,
        };
        self.sequence += 1;
        request
    }
}
