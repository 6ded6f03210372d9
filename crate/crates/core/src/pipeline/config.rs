//! Pipeline configuration: defaults, a flat key-value config file, and
//! `THAIFRONT_*` environment overrides. Command-line flags are applied on
//! top by the CLI.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::PipelineError;
use crate::audio::{MelConfig, PitchConfig, DEFAULT_STYLE_DIM};
use crate::corpus::DEFAULT_PAUSE_TAG;
use crate::segment::TieBreak;

pub const ENV_PREFIX: &str = "THAIFRONT_";

/// Everything the pipeline and the training/feature commands need. Paths
/// are optional here; which ones a command requires is its own contract.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub lexicon: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub pause_model: Option<PathBuf>,
    pub exceptions: Option<PathBuf>,
    pub rules_table: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    /// Fallback predictor name from the registry.
    pub fallback: String,
    pub pause_tag: String,
    /// Overrides the threshold stored in the pause model.
    pub pause_threshold: Option<f64>,
    pub tie_break: TieBreak,
    pub seed: u64,
    pub mel: MelConfig,
    pub pitch: PitchConfig,
    pub style_dim: usize,
    pub train_steps: usize,
    pub train_lr: f64,
    pub train_window: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lexicon: None,
            vocab: None,
            pause_model: None,
            exceptions: None,
            rules_table: None,
            annotations: None,
            fallback: "none".to_string(),
            pause_tag: DEFAULT_PAUSE_TAG.to_string(),
            pause_threshold: None,
            tie_break: TieBreak::LongestFirst,
            seed: 0,
            mel: MelConfig::default(),
            pitch: PitchConfig::default(),
            style_dim: DEFAULT_STYLE_DIM,
            train_steps: 1000,
            train_lr: 0.5,
            train_window: 2,
        }
    }
}

fn parse_kv(text: &str, origin: &str) -> Result<BTreeMap<String, String>, PipelineError> {
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| PipelineError::Config {
            field: format!("{origin}:{}", idx + 1),
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

impl PipelineConfig {
    /// Defaults, then the config file (if given), then `THAIFRONT_*`
    /// environment variables. Flags override on top of this.
    pub fn resolve(path: Option<&Path>) -> Result<PipelineConfig, PipelineError> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|source| PipelineError::Read { path: path.display().to_string(), source })?;
            let kv = parse_kv(&text, &path.display().to_string())?;
            for (key, value) in &kv {
                cfg.apply(key, value)?;
            }
        }
        for (key, value) in std::env::vars() {
            if let Some(stripped) = key.strip_prefix(ENV_PREFIX) {
                cfg.apply(&stripped.to_lowercase(), &value)?;
            }
        }
        Ok(cfg)
    }

    /// Applies one key-value pair; unknown keys are errors.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let bad = |message: String| PipelineError::Config { field: key.to_string(), message };
        let parse_f64 = |v: &str| {
            v.parse::<f64>().map_err(|_| bad(format!("`{v}` is not a number")))
        };
        let parse_usize = |v: &str| {
            v.parse::<usize>().map_err(|_| bad(format!("`{v}` is not an integer")))
        };
        match key {
            "lexicon" => self.lexicon = Some(PathBuf::from(value)),
            "vocab" => self.vocab = Some(PathBuf::from(value)),
            "pause_model" => self.pause_model = Some(PathBuf::from(value)),
            "exceptions" => self.exceptions = Some(PathBuf::from(value)),
            "rules_table" => self.rules_table = Some(PathBuf::from(value)),
            "annotations" => self.annotations = Some(PathBuf::from(value)),
            "fallback" => self.fallback = value.to_string(),
            "pause_tag" => {
                if value.is_empty() {
                    return Err(bad("pause tag must be non-empty".into()));
                }
                self.pause_tag = value.to_string();
            }
            "pause_threshold" => self.pause_threshold = Some(parse_f64(value)?),
            "tie_break" => {
                self.tie_break = TieBreak::from_name(value)
                    .ok_or_else(|| bad(format!("unknown tie-break `{value}`")))?;
            }
            "seed" => {
                self.seed =
                    value.parse().map_err(|_| bad(format!("`{value}` is not an integer")))?;
            }
            "fft_size" => self.mel.fft_size = parse_usize(value)?,
            "hop" => {
                self.mel.hop = parse_usize(value)?;
                self.pitch.hop = self.mel.hop;
            }
            "win" => {
                self.mel.win = parse_usize(value)?;
                self.pitch.win = self.mel.win;
            }
            "n_mels" => self.mel.n_mels = parse_usize(value)?,
            "fmin" => self.mel.fmin = parse_f64(value)?,
            "fmax" => self.mel.fmax = parse_f64(value)?,
            "pitch_fmin" => self.pitch.fmin = parse_f64(value)?,
            "pitch_fmax" => self.pitch.fmax = parse_f64(value)?,
            "voicing_threshold" => self.pitch.voicing_threshold = parse_f64(value)?,
            "style_dim" => self.style_dim = parse_usize(value)?,
            "train_steps" => self.train_steps = parse_usize(value)?,
            "train_lr" => self.train_lr = parse_f64(value)?,
            "train_window" => self.train_window = parse_usize(value)?,
            other => return Err(bad(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }
}
