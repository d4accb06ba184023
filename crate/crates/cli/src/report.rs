//! Report envelope and the digest of a command's inputs.

use relop::{Matrix, C64};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const REPORT_KEYS: [&str; 5] = ["command", "version", "seed", "inputs-digest", "results"];

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: u64,
    #[serde(rename = "inputs-digest")]
    pub inputs_digest: String,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, seed: u64, digest: InputDigest, results: Value) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            inputs_digest: digest.finish(),
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 over a tagged, length-prefixed encoding of everything a command
/// consumed, so equal digests mean equal inputs.
pub struct InputDigest(Sha256);

impl Default for InputDigest {
    fn default() -> Self {
        Self::new()
    }
}

impl InputDigest {
    pub fn new() -> Self {
        Self(Sha256::new())
    }

    fn tag(&mut self, tag: &str) {
        self.0.update((tag.len() as u64).to_le_bytes());
        self.0.update(tag.as_bytes());
    }

    pub fn text(&mut self, tag: &str, s: &str) -> &mut Self {
        self.tag(tag);
        self.0.update((s.len() as u64).to_le_bytes());
        self.0.update(s.as_bytes());
        self
    }

    pub fn number(&mut self, tag: &str, x: f64) -> &mut Self {
        self.tag(tag);
        self.0.update(canonical(x).to_le_bytes());
        self
    }

    pub fn count(&mut self, tag: &str, k: u64) -> &mut Self {
        self.tag(tag);
        self.0.update(k.to_le_bytes());
        self
    }

    pub fn matrix(&mut self, tag: &str, m: &Matrix) -> &mut Self {
        self.tag(tag);
        self.0.update((m.rows() as u64).to_le_bytes());
        self.0.update((m.cols() as u64).to_le_bytes());
        for z in m.as_slice() {
            self.0.update(canonical(z.re).to_le_bytes());
            self.0.update(canonical(z.im).to_le_bytes());
        }
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

/// Bit pattern with -0.0 folded onto 0.0.
fn canonical(x: f64) -> u64 {
    (x + 0.0).to_bits()
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|z| complex(*z)).collect()))
            .collect(),
    )
}

/// Non-finite values have no JSON representation; they are written as
/// strings so reports stay valid.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}
