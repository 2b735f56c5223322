// SPDX-License-Identifier: Apache-2.0

//! External LLM judge: prompt assembly, a chat-completion client with
//! retries, and verdict mapping.

mod prompts;

pub use prompts::{build_judge_prompt, extraction_prompt, PromptError, JUDGE_TEMPLATE};

use latentbench_core::score::ExternalJudge;
use serde::{Deserialize, Serialize};
use std::sync::{Condvar, Mutex};
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct JudgeConfig {
    /// Full URL of a chat-completion endpoint.
    pub endpoint: String,
    pub model: String,
    /// Environment variable holding the bearer token. Empty disables auth.
    pub api_key_env: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
    pub concurrency: usize,
    /// First backoff delay; doubles on every retry.
    pub backoff_ms: u64,
}

impl Default for JudgeConfig {
    fn default() -> Self {
        JudgeConfig {
            endpoint: String::new(),
            model: "Qwen2.5-72B-Instruct".into(),
            api_key_env: "JUDGE_API_KEY".into(),
            timeout_secs: 60,
            max_retries: 3,
            concurrency: 8,
            backoff_ms: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("judge endpoint is not configured")]
    NoEndpoint,
    #[error("timeout_secs must be positive")]
    Timeout,
    #[error("concurrency must be at least 1")]
    Concurrency,
    #[error("environment variable {0} is not set")]
    MissingKey(String),
}

impl JudgeConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.endpoint.trim().is_empty() {
            return Err(ConfigError::NoEndpoint);
        }
        if self.timeout_secs == 0 {
            return Err(ConfigError::Timeout);
        }
        if self.concurrency == 0 {
            return Err(ConfigError::Concurrency);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JudgeError {
    /// The reply does not start with Correct or Incorrect.
    #[error("unmappable judge reply: {0:?}")]
    Protocol(String),
    #[error("judge request failed after {attempts} attempts: {last}")]
    Transport { attempts: u32, last: String },
    #[error("judge endpoint answered {status}: {body}")]
    Status { status: u16, body: String },
    #[error(transparent)]
    Prompt(#[from] PromptError),
}

/// Maps the first token of a reply. `Ok(true)` is Correct.
pub fn parse_verdict(reply: &str) -> Result<bool, JudgeError> {
    let first = reply
        .split_whitespace()
        .next()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()))
        .unwrap_or_default();
    match first.to_ascii_lowercase().as_str() {
        "correct" => Ok(true),
        "incorrect" => Ok(false),
        _ => Err(JudgeError::Protocol(reply.trim().to_string())),
    }
}

#[derive(Serialize)]
struct Message<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [Message<'a>; 1],
    temperature: f32,
}

/// Extracts `choices[0].message.content`.
fn reply_text(body: &str) -> Result<String, JudgeError> {
    let v: serde_json::Value =
        serde_json::from_str(body).map_err(|e| JudgeError::Protocol(format!("response is not JSON: {e}")))?;
    v.pointer("/choices/0/message/content")
        .and_then(|c| c.as_str())
        .map(str::to_string)
        .ok_or_else(|| JudgeError::Protocol(format!("no choices[0].message.content in {body}")))
}

/// Counting semaphore bounding in-flight requests.
struct Permits {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Permits);

impl Permits {
    fn new(n: usize) -> Self {
        Permits { free: Mutex::new(n), cv: Condvar::new() }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

pub struct HttpJudge {
    config: JudgeConfig,
    api_key: Option<String>,
    agent: ureq::Agent,
    permits: Permits,
}

impl HttpJudge {
    /// Validates the config and reads the API key from the environment.
    pub fn new(config: JudgeConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let api_key = if config.api_key_env.is_empty() {
            None
        } else {
            Some(std::env::var(&config.api_key_env).map_err(|_| ConfigError::MissingKey(config.api_key_env.clone()))?)
        };
        let agent = ureq::Agent::new_with_config(
            ureq::Agent::config_builder()
                .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
                .http_status_as_error(false)
                .build(),
        );
        let permits = Permits::new(config.concurrency);
        Ok(HttpJudge { config, api_key, agent, permits })
    }

    pub fn config(&self) -> &JudgeConfig {
        &self.config
    }

    fn post_once(&self, body: &str) -> Result<String, (bool, JudgeError)> {
        let mut req = self.agent.post(&self.config.endpoint).content_type("application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let mut resp = req.send(body).map_err(|e| (true, JudgeError::Transport { attempts: 1, last: e.to_string() }))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| (true, JudgeError::Transport { attempts: 1, last: e.to_string() }))?;
        match status {
            200..=299 => Ok(text),
            // rate limits and server errors are worth another try
            429 | 500..=599 => Err((true, JudgeError::Status { status, body: text })),
            _ => Err((false, JudgeError::Status { status, body: text })),
        }
    }

    /// Posts one prompt and maps the reply. Transport failures, 429 and 5xx
    /// are retried with exponential backoff.
    pub fn request_verdict(&self, prompt: &str) -> Result<bool, JudgeError> {
        let body = serde_json::to_string(&ChatRequest {
            model: &self.config.model,
            messages: [Message { role: "user", content: prompt }],
            temperature: 0.0,
        })
        .expect("request serializes");
        let _permit = self.permits.acquire();
        let attempts = self.config.max_retries + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                let delay = self.config.backoff_ms.saturating_mul(1 << (attempt - 1).min(16));
                log::debug!("judge retry {attempt} in {delay} ms");
                std::thread::sleep(Duration::from_millis(delay));
            }
            match self.post_once(&body) {
                Ok(text) => return parse_verdict(&reply_text(&text)?),
                Err((true, e)) => last = e.to_string(),
                Err((false, e)) => return Err(e),
            }
        }
        Err(JudgeError::Transport { attempts, last })
    }
}

impl ExternalJudge for HttpJudge {
    fn judge(&self, question: &str, ground_truth: &str, response: &str) -> Result<bool, String> {
        let prompt = build_judge_prompt(question, ground_truth, response).map_err(|e| e.to_string())?;
        self.request_verdict(&prompt).map_err(|e| e.to_string())
    }
}

/// Stand-in used when no usable judge is configured: every call fails, so
/// scoring falls back to deterministic verdicts and flags each item.
pub struct UnavailableJudge(pub String);

impl ExternalJudge for UnavailableJudge {
    fn judge(&self, _: &str, _: &str, _: &str) -> Result<bool, String> {
        Err(self.0.clone())
    }
}
