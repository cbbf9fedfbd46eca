//! Live OpenAI-compatible chat-completion client with retry, exponential
//! backoff, and a token-bucket rate limiter.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{BackendError, GenerationRequest, GenerationResult, TextBackend, API_KEY_ENV};

/// Connection settings for the live backend. These are operational knobs,
/// not experiment parameters, so they live outside the experiment config
/// snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HttpSettings {
    /// Base URL of an OpenAI-compatible API, without the trailing
    /// `/chat/completions`.
    pub base_url: String,
    pub requests_per_minute: u32,
    pub timeout_secs: u64,
    pub max_retries: u32,
}

impl Default for HttpSettings {
    fn default() -> Self {
        HttpSettings {
            base_url: "https://api.openai.com/v1".to_string(),
            requests_per_minute: 20,
            timeout_secs: 60,
            max_retries: 5,
        }
    }
}

/// Token bucket: admits bursts up to `capacity`, refills continuously at
/// `per_minute / 60` tokens per second. `acquire` blocks until a token is
/// available, serializing admission across threads.
pub struct RateLimiter {
    state: Mutex<BucketState>,
    capacity: f64,
    per_second: f64,
}

struct BucketState {
    tokens: f64,
    last_refill: Instant,
}

impl RateLimiter {
    pub fn new(per_minute: u32) -> Self {
        let capacity = f64::from(per_minute.max(1));
        RateLimiter {
            state: Mutex::new(BucketState {
                tokens: capacity,
                last_refill: Instant::now(),
            }),
            capacity,
            per_second: capacity / 60.0,
        }
    }

    pub fn acquire(&self) {
        loop {
            let wait = {
                let mut state = self.state.lock().expect("rate limiter poisoned");
                let now = Instant::now();
                let elapsed = now.duration_since(state.last_refill).as_secs_f64();
                state.tokens = (state.tokens + elapsed * self.per_second).min(self.capacity);
                state.last_refill = now;
                if state.tokens >= 1.0 {
                    state.tokens -= 1.0;
                    return;
                }
                Duration::from_secs_f64((1.0 - state.tokens) / self.per_second)
            };
            std::thread::sleep(wait);
        }
    }

    #[cfg(test)]
    fn try_acquire(&self) -> bool {
        let mut state = self.state.lock().expect("rate limiter poisoned");
        let now = Instant::now();
        let elapsed = now.duration_since(state.last_refill).as_secs_f64();
        state.tokens = (state.tokens + elapsed * self.per_second).min(self.capacity);
        state.last_refill = now;
        if state.tokens >= 1.0 {
            state.tokens -= 1.0;
            true
        } else {
            false
        }
    }
}

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    messages: Vec<WireMessage<'a>>,
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_tokens: Option<u32>,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireResponseMessage,
}

#[derive(Deserialize)]
struct WireResponseMessage {
    content: String,
}

/// Chat-completions client for any OpenAI-compatible endpoint.
///
/// The API key is read from the `PERSONA_LAB_API_KEY` environment
/// variable, never from config files. Transient failures (HTTP 429, 5xx,
/// transport errors) are retried with exponential backoff up to the
/// configured cap; anything else fails immediately.
pub struct HttpBackend {
    agent: ureq::Agent,
    settings: HttpSettings,
    api_key: String,
    limiter: RateLimiter,
    backend_id: String,
}

impl HttpBackend {
    /// Builds a backend from settings and the environment.
    pub fn from_env(settings: HttpSettings) -> Result<Self, BackendError> {
        let api_key = std::env::var(API_KEY_ENV).map_err(|_| {
            BackendError::BackendUnavailable(format!(
                "missing API key: set the {API_KEY_ENV} environment variable"
            ))
        })?;
        Ok(Self::with_api_key(settings, api_key))
    }

    pub fn with_api_key(settings: HttpSettings, api_key: impl Into<String>) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(settings.timeout_secs))
            .build();
        let limiter = RateLimiter::new(settings.requests_per_minute);
        HttpBackend {
            agent,
            settings,
            api_key: api_key.into(),
            limiter,
            backend_id: "http".to_string(),
        }
    }

    fn endpoint(&self) -> String {
        format!(
            "{}/chat/completions",
            self.settings.base_url.trim_end_matches('/')
        )
    }

    fn call_once(&self, body: &str) -> Result<String, CallFailure> {
        self.limiter.acquire();
        let response = self
            .agent
            .post(&self.endpoint())
            .set("Authorization", &format!("Bearer {}", self.api_key))
            .set("Content-Type", "application/json")
            .send_string(body);
        match response {
            Ok(resp) => resp
                .into_string()
                .map_err(|e| CallFailure::Fatal(format!("failed reading response body: {e}"))),
            Err(ureq::Error::Status(code, resp)) => {
                let detail = resp.into_string().unwrap_or_default();
                let message = format!("HTTP {code}: {}", truncate(&detail, 200));
                if code == 429 || (500..600).contains(&code) {
                    Err(CallFailure::Transient(message))
                } else {
                    Err(CallFailure::Fatal(message))
                }
            }
            Err(ureq::Error::Transport(t)) => Err(CallFailure::Transient(t.to_string())),
        }
    }
}

enum CallFailure {
    Transient(String),
    Fatal(String),
}

fn truncate(s: &str, max: usize) -> &str {
    match s.char_indices().nth(max) {
        Some((idx, _)) => &s[..idx],
        None => s,
    }
}

impl TextBackend for HttpBackend {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, BackendError> {
        let wire = WireRequest {
            model: &request.model_id,
            messages: request
                .messages
                .iter()
                .map(|m| WireMessage {
                    role: m.role.as_str(),
                    content: &m.content,
                })
                .collect(),
            temperature: request.temperature,
            max_tokens: request.max_tokens,
        };
        let body = serde_json::to_string(&wire)
            .map_err(|e| BackendError::BackendUnavailable(format!("request encoding: {e}")))?;

        let started = Instant::now();
        let mut last_error = String::new();
        for attempt in 0..=self.settings.max_retries {
            if attempt > 0 {
                // 1s, 2s, 4s, ... capped at 30s.
                let backoff = Duration::from_millis(1000u64.saturating_mul(1 << (attempt - 1)))
                    .min(Duration::from_secs(30));
                std::thread::sleep(backoff);
            }
            match self.call_once(&body) {
                Ok(raw) => {
                    let parsed: WireResponse = serde_json::from_str(&raw).map_err(|e| {
                        BackendError::BackendUnavailable(format!(
                            "unparseable completion response: {e}"
                        ))
                    })?;
                    let choice = parsed.choices.into_iter().next().ok_or_else(|| {
                        BackendError::BackendUnavailable("response had no choices".to_string())
                    })?;
                    return Ok(GenerationResult {
                        text: choice.message.content.trim_end().to_string(),
                        backend_id: self.backend_id.clone(),
                        latency_ms: started.elapsed().as_millis() as u64,
                        raw_fingerprint: request.fingerprint(),
                    });
                }
                Err(CallFailure::Transient(message)) => last_error = message,
                Err(CallFailure::Fatal(message)) => {
                    return Err(BackendError::BackendUnavailable(message));
                }
            }
        }
        Err(BackendError::BackendUnavailable(format!(
            "gave up after {} retries; last error: {last_error}",
            self.settings.max_retries
        )))
    }

    fn backend_id(&self) -> &str {
        &self.backend_id
    }
}
