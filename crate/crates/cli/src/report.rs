//! Run reports with byte-stable serialization. Counters and witness
//! payloads live in ordered maps so reruns with the same inputs and
//! seed serialize identically; wall-clock timing goes to stderr only.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub outcome: String,
    pub exit_code: i32,
    pub counters: BTreeMap<String, u64>,
    pub witnesses: BTreeMap<String, String>,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs: Vec::new(),
            outcome: String::new(),
            exit_code: 0,
            counters: BTreeMap::new(),
            witnesses: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.inputs.push(InputRecord {
            name: name.to_string(),
            sha256: format!("{:x}", hasher.finalize()),
        });
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.counters.insert(key.to_string(), value);
    }

    pub fn witness(&mut self, key: &str, value: impl Into<String>) {
        self.witnesses.insert(key.to_string(), value.into());
    }

    pub fn finish(&mut self, outcome: impl Into<String>, exit_code: i32) -> i32 {
        self.outcome = outcome.into();
        self.exit_code = exit_code;
        exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
