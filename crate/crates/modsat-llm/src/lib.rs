//! Uniform chat-completion interface with three backends: a live HTTP
//! client, a replay client that serves a recorded transcript, and a
//! scripted mock. Everything that talks to a language model goes through
//! [`LlmClient`], so every downstream pipeline can run deterministically
//! from a transcript.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub system: String,
    pub user: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub model: String,
}

impl ChatRequest {
    pub fn new(system: impl Into<String>, user: impl Into<String>) -> ChatRequest {
        ChatRequest {
            system: system.into(),
            user: user.into(),
            temperature: 0.8,
            max_tokens: 4096,
            model: String::new(),
        }
    }

    pub fn with_temperature(mut self, t: f64) -> ChatRequest {
        self.temperature = t;
        self
    }
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("transport failure after {attempts} attempts: {detail}")]
    Transport { attempts: u32, detail: String },
    #[error("transcript exhausted at entry {consumed}")]
    TranscriptExhausted { consumed: usize },
    #[error("digest mismatch at entry {index}: expected {expected}, request digests to {actual}")]
    DigestMismatch {
        index: usize,
        expected: String,
        actual: String,
    },
    #[error("missing environment variable {0}")]
    MissingEnv(&'static str),
    #[error("malformed response: {0}")]
    BadResponse(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// The one interface all LLM-touching code depends on.
pub trait LlmClient: Send + Sync {
    fn complete(&self, req: &ChatRequest) -> Result<String, LlmError>;
}

// ---------------------------------------------------------------------------
// Request digests and transcripts
// ---------------------------------------------------------------------------

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Stable digest of the request fields that determine a completion. The
/// temperature is hashed via its bit pattern so formatting can never drift.
pub fn request_digest(req: &ChatRequest) -> String {
    let mut bytes = Vec::new();
    for part in [
        req.system.as_bytes(),
        req.user.as_bytes(),
        req.model.as_bytes(),
    ] {
        bytes.extend_from_slice(&(part.len() as u64).to_le_bytes());
        bytes.extend_from_slice(part);
    }
    bytes.extend_from_slice(&req.temperature.to_bits().to_le_bytes());
    format!("{:016x}", fnv1a64(&bytes))
}

/// One `(request digest, response)` pair.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TranscriptEntry {
    pub digest: String,
    pub response: String,
}

/// An ordered list of request/response pairs, stored as JSON lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn load(path: &Path) -> Result<Transcript, LlmError> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Transcript, LlmError> {
        let mut entries = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            entries.push(serde_json::from_str(line)?);
        }
        Ok(Transcript { entries })
    }

    pub fn save(&self, path: &Path) -> Result<(), LlmError> {
        fs::write(path, self.render())?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entry serializes"));
            out.push('\n');
        }
        out
    }

    /// Appends one exchange.
    pub fn record(&mut self, req: &ChatRequest, response: &str) {
        self.entries.push(TranscriptEntry {
            digest: request_digest(req),
            response: response.to_string(),
        });
    }
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

/// Serves a transcript in order; each request must digest-match the next
/// entry. Concurrent callers are serialized.
pub struct ReplayClient {
    transcript: Transcript,
    cursor: Mutex<usize>,
}

impl ReplayClient {
    pub fn new(transcript: Transcript) -> ReplayClient {
        ReplayClient {
            transcript,
            cursor: Mutex::new(0),
        }
    }

    pub fn from_file(path: &Path) -> Result<ReplayClient, LlmError> {
        Ok(ReplayClient::new(Transcript::load(path)?))
    }

    pub fn consumed(&self) -> usize {
        *self.cursor.lock().unwrap()
    }
}

impl LlmClient for ReplayClient {
    fn complete(&self, req: &ChatRequest) -> Result<String, LlmError> {
        let mut cursor = self.cursor.lock().unwrap();
        let index = *cursor;
        let entry = self
            .transcript
            .entries
            .get(index)
            .ok_or(LlmError::TranscriptExhausted { consumed: index })?;
        let actual = request_digest(req);
        if entry.digest != actual {
            return Err(LlmError::DigestMismatch {
                index,
                expected: entry.digest.clone(),
                actual,
            });
        }
        *cursor += 1;
        Ok(entry.response.clone())
    }
}

/// Scripted backend: a function of the request plus the call index.
pub struct MockClient {
    #[allow(clippy::type_complexity)]
    script: Box<dyn Fn(usize, &ChatRequest) -> Result<String, LlmError> + Send + Sync>,
    calls: Mutex<usize>,
}

impl MockClient {
    pub fn new(
        script: impl Fn(usize, &ChatRequest) -> Result<String, LlmError> + Send + Sync + 'static,
    ) -> MockClient {
        MockClient {
            script: Box::new(script),
            calls: Mutex::new(0),
        }
    }

    /// Always returns the same text.
    pub fn fixed(text: impl Into<String>) -> MockClient {
        let text = text.into();
        MockClient::new(move |_, _| Ok(text.clone()))
    }

    pub fn calls(&self) -> usize {
        *self.calls.lock().unwrap()
    }
}

impl LlmClient for MockClient {
    fn complete(&self, req: &ChatRequest) -> Result<String, LlmError> {
        let mut calls = self.calls.lock().unwrap();
        let index = *calls;
        *calls += 1;
        (self.script)(index, req)
    }
}

/// Wraps any client and appends every exchange to a transcript file.
pub struct RecordingClient<C: LlmClient> {
    inner: C,
    path: PathBuf,
    lock: Mutex<()>,
}

impl<C: LlmClient> RecordingClient<C> {
    pub fn new(inner: C, path: PathBuf) -> RecordingClient<C> {
        RecordingClient {
            inner,
            path,
            lock: Mutex::new(()),
        }
    }
}

impl<C: LlmClient> LlmClient for RecordingClient<C> {
    fn complete(&self, req: &ChatRequest) -> Result<String, LlmError> {
        let response = self.inner.complete(req)?;
        let entry = TranscriptEntry {
            digest: request_digest(req),
            response: response.clone(),
        };
        let _guard = self.lock.lock().unwrap();
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(&entry)?)?;
        Ok(response)
    }
}

/// Live chat-completion client. Endpoint, model and key come from the
/// `MODSAT_LLM_ENDPOINT`, `MODSAT_LLM_MODEL` and `MODSAT_LLM_API_KEY`
/// environment variables; requests are retried up to three times with
/// exponential backoff.
pub struct HttpClient {
    endpoint: String,
    api_key: Option<String>,
    model: String,
    timeout: Duration,
    retries: u32,
}

impl HttpClient {
    pub const ENDPOINT_ENV: &'static str = "MODSAT_LLM_ENDPOINT";
    pub const MODEL_ENV: &'static str = "MODSAT_LLM_MODEL";
    pub const API_KEY_ENV: &'static str = "MODSAT_LLM_API_KEY";

    pub fn from_env() -> Result<HttpClient, LlmError> {
        let endpoint = std::env::var(Self::ENDPOINT_ENV)
            .map_err(|_| LlmError::MissingEnv(Self::ENDPOINT_ENV))?;
        let model =
            std::env::var(Self::MODEL_ENV).map_err(|_| LlmError::MissingEnv(Self::MODEL_ENV))?;
        let api_key = std::env::var(Self::API_KEY_ENV).ok();
        Ok(HttpClient {
            endpoint,
            api_key,
            model,
            timeout: Duration::from_secs(120),
            retries: 3,
        })
    }

    fn call_once(&self, req: &ChatRequest) -> Result<String, String> {
        let model = if req.model.is_empty() {
            &self.model
        } else {
            &req.model
        };
        let body = serde_json::json!({
            "model": model,
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
            "messages": [
                {"role": "system", "content": req.system},
                {"role": "user", "content": req.user},
            ],
        });
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let mut request = agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request.send_json(&body).map_err(|e| e.to_string())?;
        let value: serde_json::Value =
            response.body_mut().read_json().map_err(|e| e.to_string())?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| format!("no message content in: {value}"))
    }
}

impl LlmClient for HttpClient {
    fn complete(&self, req: &ChatRequest) -> Result<String, LlmError> {
        let mut last = String::new();
        for attempt in 0..self.retries {
            match self.call_once(req) {
                Ok(text) => return Ok(text),
                Err(detail) => {
                    last = detail;
                    std::thread::sleep(Duration::from_millis(100 << (2 * attempt)));
                }
            }
        }
        Err(LlmError::Transport {
            attempts: self.retries,
            detail: last,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(user: &str) -> ChatRequest {
        ChatRequest::new("sys", user)
    }

    #[test]
    fn replay_returns_recorded_text_in_order() {
        let mut transcript = Transcript::default();
        transcript.record(&req("one"), "first");
        transcript.record(&req("two"), "second");
        let client = ReplayClient::new(transcript);
        assert_eq!(client.complete(&req("one")).unwrap(), "first");
        assert_eq!(client.complete(&req("two")).unwrap(), "second");
        assert!(matches!(
            client.complete(&req("three")),
            Err(LlmError::TranscriptExhausted { consumed: 2 })
        ));
    }

    #[test]
    fn replay_rejects_digest_mismatch_naming_expected() {
        let mut transcript = Transcript::default();
        transcript.record(&req("recorded"), "text");
        let expected = transcript.entries[0].digest.clone();
        let client = ReplayClient::new(transcript);
        match client.complete(&req("different")) {
            Err(LlmError::DigestMismatch {
                expected: e, index, ..
            }) => {
                assert_eq!(e, expected);
                assert_eq!(index, 0);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn mock_echoes_scripted_program() {
        let program = "// start restart_condition\nreturn true;\n// end restart_condition";
        let client = MockClient::fixed(program);
        assert_eq!(client.complete(&req("x")).unwrap(), program);
        assert_eq!(client.calls(), 1);
    }

    #[test]
    fn record_then_replay_round_trips() {
        let mut transcript = Transcript::default();
        transcript.record(&req("q"), "a");
        let rendered = transcript.render();
        let parsed = Transcript::parse(&rendered).unwrap();
        assert_eq!(parsed, transcript);
        let client = ReplayClient::new(parsed);
        assert_eq!(client.complete(&req("q")).unwrap(), "a");
    }

    #[test]
    fn transcript_file_survives_restart_byte_identically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let mut transcript = Transcript::default();
        transcript.record(&req("alpha"), "one\ntwo");
        transcript.record(&req("beta"), "three");
        transcript.save(&path).unwrap();
        let bytes_a = fs::read(&path).unwrap();
        let loaded = Transcript::load(&path).unwrap();
        loaded.save(&path).unwrap();
        let bytes_b = fs::read(&path).unwrap();
        assert_eq!(bytes_a, bytes_b);
        assert_eq!(loaded, transcript);
    }

    #[test]
    fn recording_client_appends_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rec.jsonl");
        let client = RecordingClient::new(MockClient::fixed("out"), path.clone());
        client.complete(&req("a")).unwrap();
        client.complete(&req("b")).unwrap();
        let transcript = Transcript::load(&path).unwrap();
        assert_eq!(transcript.entries.len(), 2);
        assert_eq!(transcript.entries[0].digest, request_digest(&req("a")));
        assert_eq!(transcript.entries[1].digest, request_digest(&req("b")));
    }

    #[test]
    fn digest_distinguishes_fields() {
        let a = request_digest(&req("same"));
        let b = request_digest(&ChatRequest::new("sys2", "same"));
        let c = request_digest(&req("same").with_temperature(0.0));
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, request_digest(&req("same")));
    }
}
