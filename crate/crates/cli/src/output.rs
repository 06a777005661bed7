//! Output envelopes: every document carries the schema tag, tool version,
//! command name, seed and a hash of the resolved configuration, so a run
//! can be reproduced from its output alone.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::PathBuf;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn config_hash<C: Serialize>(config: &C) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: String,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
    #[serde(flatten)]
    pub payload: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new<C: Serialize>(
        schema: &str,
        command: &str,
        seed: u64,
        config: &C,
        payload: T,
    ) -> Self {
        Envelope {
            schema: schema.to_string(),
            version: VERSION,
            command: command.to_string(),
            seed,
            config_hash: config_hash(config),
            payload,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

pub fn write_out(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}
