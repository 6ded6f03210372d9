//! Audio manifests: one JSON record per line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{nfc, read_file, write_file, CorpusError};

/// One utterance: where its audio lives, what is said, and (optionally)
/// where a forced alignment for it lives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AudioManifestRecord {
    pub audio_path: String,
    pub transcript: String,
    /// Expected sample rate in Hz; 24 kHz in the reference datasets, not
    /// enforced beyond being positive.
    pub sample_rate: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment_path: Option<String>,
}

impl AudioManifestRecord {
    fn validate(&self, origin: &str, lineno: usize) -> Result<(), CorpusError> {
        if self.sample_rate == 0 {
            return Err(CorpusError::parse(origin, lineno, "sample_rate must be positive"));
        }
        if self.transcript.is_empty() {
            return Err(CorpusError::parse(origin, lineno, "empty transcript"));
        }
        Ok(())
    }
}

pub fn parse_manifest(text: &str, origin: &str) -> Result<Vec<AudioManifestRecord>, CorpusError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut record: AudioManifestRecord = serde_json::from_str(line)
            .map_err(|e| CorpusError::parse(origin, lineno, e.to_string()))?;
        record.transcript = nfc(&record.transcript);
        record.validate(origin, lineno)?;
        out.push(record);
    }
    Ok(out)
}

pub fn load_manifest(path: &Path) -> Result<Vec<AudioManifestRecord>, CorpusError> {
    let text = read_file(path)?;
    parse_manifest(&text, &path.display().to_string())
}

pub fn render_manifest(records: &[AudioManifestRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("manifest record serializes"));
        out.push('\n');
    }
    out
}

pub fn save_manifest(path: &Path, records: &[AudioManifestRecord]) -> Result<(), CorpusError> {
    write_file(path, &render_manifest(records))
}
