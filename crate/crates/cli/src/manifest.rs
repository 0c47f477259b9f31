use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Record of one CLI invocation, written as `manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub config: Value,
    pub seeds: Vec<u64>,
    pub started_unix: f64,
    pub finished_unix: f64,
    /// File name → sha256 hex digest.
    pub outputs: BTreeMap<String, String>,
    /// Command-specific results (factors, KS distance, ...).
    pub results: Value,
}

pub struct OutputDir {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutputDir {
    pub fn create(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                command: std::env::args().collect(),
                config: Value::Null,
                seeds: vec![],
                started_unix: now(),
                finished_unix: 0.0,
                outputs: BTreeMap::new(),
                results: Value::Object(Default::default()),
            },
        })
    }

    pub fn set_config(&mut self, config: Value, seeds: Vec<u64>) {
        self.manifest.config = config;
        self.manifest.seeds = seeds;
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.manifest.results[key] = value;
    }

    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        let digest = Sha256::digest(contents.as_bytes());
        self.manifest.outputs.insert(name.to_string(), hex::encode(digest));
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        self.manifest.finished_unix = now();
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
