//! Minimal client for an externally hosted chat-completion endpoint.

use serde_json::{json, Value};

use super::EvalError;

/// Endpoint, credentials and model name read from the environment:
/// `NUMPROBE_ENDPOINT`, `NUMPROBE_API_KEY` (optional) and `NUMPROBE_MODEL`.
pub struct ModelClient {
    endpoint: String,
    api_key: Option<String>,
    model: String,
    http: reqwest::blocking::Client,
}

impl ModelClient {
    pub fn new(endpoint: impl Into<String>, api_key: Option<String>, model: impl Into<String>) -> Self {
        ModelClient { endpoint: endpoint.into(), api_key, model: model.into(), http: reqwest::blocking::Client::new() }
    }

    pub fn from_env() -> Result<Self, EvalError> {
        let var = |k: &str| std::env::var(k).map_err(|_| EvalError::Client(format!("{k} is not set")));
        Ok(ModelClient::new(var("NUMPROBE_ENDPOINT")?, std::env::var("NUMPROBE_API_KEY").ok(), var("NUMPROBE_MODEL")?))
    }

    /// Sends one user message and returns the first choice's text.
    pub fn complete(&self, prompt: &str) -> Result<String, EvalError> {
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        });
        let mut req = self.http.post(&self.endpoint).json(&body);
        if let Some(k) = &self.api_key {
            req = req.bearer_auth(k);
        }
        let resp = req.send().map_err(|e| EvalError::Client(e.to_string()))?;
        let status = resp.status();
        let v: Value = resp.json().map_err(|e| EvalError::Client(e.to_string()))?;
        if !status.is_success() {
            return Err(EvalError::Client(format!("HTTP {status}: {v}")));
        }
        v["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| EvalError::Client(format!("unexpected response shape: {v}")))
    }
}
