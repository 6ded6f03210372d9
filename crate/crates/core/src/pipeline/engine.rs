//! Config validation and the per-line pipeline: pauses → segmentation →
//! G2P → phoneme-tone encoding.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::config::PipelineConfig;
use super::PipelineError;
use crate::corpus::{
    load_phoneme_tone_annotations, nfc, render_pause_annotation, Lexicon, PhonemeToneEntry,
};
use crate::encoding::{encode, PhonemeVocab};
use crate::pause::{predict_pauses, PauseModelRegistry, PauseScorer};
use crate::phonology::{
    contains_thai, fallback_registry, G2pEngine, PhonemeToneSequence, ToneRuleTable,
};
use crate::segment::{segment_with, Segmentation, TieBreak, TrieIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

/// Outcome of [`validate_config`]: the full issue list, warnings included.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }

    fn error(&mut self, field: &str, message: impl Into<String>) {
        self.issues.push(ValidationIssue {
            severity: Severity::Error,
            field: field.to_string(),
            message: message.into(),
        });
    }

    fn warning(&mut self, field: &str, message: impl Into<String>) {
        self.issues.push(ValidationIssue {
            severity: Severity::Warning,
            field: field.to_string(),
            message: message.into(),
        });
    }
}

/// Checks file existence, format versions, and cross-file compatibility
/// without mutating anything. Missing required inputs and unloadable files
/// are errors; a vocabulary that cannot represent the exception dictionary
/// is a warning.
pub fn validate_config(config: &PipelineConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    match &config.lexicon {
        None => report.error("lexicon", "path not set"),
        Some(path) => match Lexicon::load(path) {
            Ok(lex) if lex.is_empty() => report.error("lexicon", "lexicon is empty"),
            Ok(_) => {}
            Err(e) => report.error("lexicon", e.to_string()),
        },
    }
    let vocab = match &config.vocab {
        None => {
            report.error("vocab", "path not set");
            None
        }
        Some(path) => match PhonemeVocab::load(path) {
            Ok(v) => Some(v),
            Err(e) => {
                report.error("vocab", e.to_string());
                None
            }
        },
    };
    if let Some(path) = &config.pause_model {
        if let Err(e) = PauseModelRegistry::builtin().load(path) {
            report.error("pause_model", e.to_string());
        }
    }
    if let Some(path) = &config.rules_table {
        if let Err(e) = ToneRuleTable::load(path) {
            report.error("rules_table", e.to_string());
        }
    }
    let annotations: Option<Vec<PhonemeToneEntry>> = match &config.annotations {
        Some(path) => match load_phoneme_tone_annotations(path) {
            Ok(entries) => Some(entries),
            Err(e) => {
                report.error("annotations", e.to_string());
                None
            }
        },
        None => None,
    };
    if !fallback_registry().names().contains(&config.fallback.as_str()) {
        report.error("fallback", format!("unknown fallback `{}`", config.fallback));
    } else if config.fallback == "most-frequent" && config.annotations.is_none() {
        report.error("fallback", "fallback `most-frequent` needs `annotations`");
    }
    if let Some(path) = &config.exceptions {
        match load_phoneme_tone_annotations(path) {
            Err(e) => report.error("exceptions", e.to_string()),
            Ok(entries) => {
                if let Some(vocab) = &vocab {
                    let missing: BTreeSet<&str> = entries
                        .iter()
                        .flat_map(|e| e.pronunciation.syllables.iter())
                        .flat_map(|s| s.phonemes.iter())
                        .map(String::as_str)
                        .filter(|p| !vocab.contains_phoneme(p))
                        .collect();
                    if !missing.is_empty() {
                        report.warning(
                            "exceptions",
                            format!(
                                "vocabulary lacks {} phoneme(s) used by the exception file \
                                 (built from a different annotation set?): {}",
                                missing.len(),
                                missing.into_iter().collect::<Vec<_>>().join(" ")
                            ),
                        );
                    }
                }
            }
        }
    }
    if let Some(annotations) = &annotations {
        if let Some(vocab) = &vocab {
            let missing = annotations
                .iter()
                .flat_map(|e| e.pronunciation.syllables.iter())
                .flat_map(|s| s.phonemes.iter())
                .any(|p| !vocab.contains_phoneme(p));
            if missing {
                report.warning(
                    "annotations",
                    "annotation file uses phonemes outside the vocabulary",
                );
            }
        }
    }
    if let Some(t) = config.pause_threshold {
        if !t.is_finite() {
            report.error("pause_threshold", format!("threshold {t} is not finite"));
        }
    }
    report
}

/// Pipeline stages, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Pauses,
    Segmentation,
    G2p,
    Encoding,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Pauses => "pauses",
            Stage::Segmentation => "segmentation",
            Stage::G2p => "g2p",
            Stage::Encoding => "encoding",
        };
        f.write_str(name)
    }
}

/// A per-line failure, reported with the stage that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.message)
    }
}

/// Everything produced for one input line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOutput {
    /// The normalized line with pause tags inserted.
    pub tagged: String,
    /// All tokens across pause chunks, in order.
    pub tokens: Vec<String>,
    /// Pronunciation per token; `None` for tokens with no Thai content,
    /// which are passed through unphonemized.
    pub pronunciations: Vec<Option<PhonemeToneSequence>>,
    /// Final id stream: per-word encodings concatenated, with the pause id
    /// between chunks.
    pub ids: Vec<u32>,
    pub unknown_count: usize,
}

/// All models and tables loaded once; line processing is pure afterwards,
/// so batches can run line-parallel as long as outputs are reassembled in
/// input order.
pub struct PipelineEngine {
    trie: TrieIndex,
    vocab: PhonemeVocab,
    g2p: G2pEngine,
    pause: Option<Box<dyn PauseScorer>>,
    pause_tag: String,
    tie_break: TieBreak,
}

impl PipelineEngine {
    /// Loads every referenced file. Requires `lexicon` and `vocab`; the
    /// pause model, exceptions, rules table, and fallback are optional.
    pub fn load(config: &PipelineConfig) -> Result<PipelineEngine, PipelineError> {
        let require = |field: &str, path: &Option<std::path::PathBuf>| {
            path.clone().ok_or_else(|| PipelineError::Config {
                field: field.to_string(),
                message: "path not set".to_string(),
            })
        };
        let lexicon = Lexicon::load(&require("lexicon", &config.lexicon)?)?;
        let trie = TrieIndex::build(&lexicon)?;
        let vocab = PhonemeVocab::load(&require("vocab", &config.vocab)?)?;
        let rules = match &config.rules_table {
            Some(path) => ToneRuleTable::load(path)?,
            None => ToneRuleTable::builtin().clone(),
        };
        let exceptions = match &config.exceptions {
            Some(path) => {
                let entries = load_phoneme_tone_annotations(path)?;
                G2pEngine::exceptions_from_entries(&entries)
            }
            None => Default::default(),
        };
        let annotations = match &config.annotations {
            Some(path) => Some(load_phoneme_tone_annotations(path)?),
            None => None,
        };
        let fallback = fallback_registry().build(&config.fallback, annotations.as_deref())?;
        let g2p = G2pEngine::new(exceptions, rules, fallback);
        let pause: Option<Box<dyn PauseScorer>> = match &config.pause_model {
            Some(path) => {
                let inner = PauseModelRegistry::builtin().load(path)?;
                Some(match config.pause_threshold {
                    Some(threshold) => crate::pause::override_threshold(inner, threshold),
                    None => inner,
                })
            }
            None => None,
        };
        Ok(PipelineEngine {
            trie,
            vocab,
            g2p,
            pause,
            pause_tag: config.pause_tag.clone(),
            tie_break: config.tie_break,
        })
    }

    pub fn trie(&self) -> &TrieIndex {
        &self.trie
    }

    pub fn vocab(&self) -> &PhonemeVocab {
        &self.vocab
    }

    pub fn g2p(&self) -> &G2pEngine {
        &self.g2p
    }

    pub fn segment_line(&self, text: &str) -> Segmentation {
        segment_with(text, &self.trie, self.tie_break)
    }

    /// Runs the fixed stage order on one line. Stage failures carry the
    /// stage name; the caller decides whether they abort the batch.
    pub fn run_line(&self, line: &str) -> Result<LineOutput, StageError> {
        let text = nfc(line);
        if text.is_empty() {
            return Ok(LineOutput {
                tagged: String::new(),
                tokens: Vec::new(),
                pronunciations: Vec::new(),
                ids: Vec::new(),
                unknown_count: 0,
            });
        }
        let annotated = match &self.pause {
            Some(model) => predict_pauses(&text, model.as_ref(), &self.trie),
            None => crate::corpus::PauseAnnotatedSentence::unannotated(text.clone()),
        };
        let tagged = render_pause_annotation(&annotated, &self.pause_tag);

        // Pause offsets split the line into chunks segmented independently.
        let chars: Vec<char> = text.chars().collect();
        let mut chunk_bounds = vec![0usize];
        chunk_bounds.extend_from_slice(annotated.pause_offsets());
        chunk_bounds.push(chars.len());
        let mut tokens = Vec::new();
        let mut pronunciations = Vec::new();
        let mut ids = Vec::new();
        let mut unknown_count = 0usize;
        for (ci, pair) in chunk_bounds.windows(2).enumerate() {
            if ci > 0 {
                ids.push(PhonemeVocab::PAUSE_ID);
            }
            let chunk: String = chars[pair[0]..pair[1]].iter().collect();
            let seg = self.segment_line(&chunk);
            for token in seg.tokens {
                if !contains_thai(&token) {
                    tokens.push(token);
                    pronunciations.push(None);
                    continue;
                }
                let seq = self.g2p.convert(&token).map_err(|e| StageError {
                    stage: Stage::G2p,
                    message: format!("token `{token}`: {e}"),
                })?;
                let outcome = encode(&seq, &self.vocab);
                unknown_count += outcome.unknown_count;
                ids.extend(outcome.sequence.ids);
                tokens.push(token);
                pronunciations.push(Some(seq));
            }
        }
        Ok(LineOutput { tagged, tokens, pronunciations, ids, unknown_count })
    }

    /// Runs every line, preserving order. Line `i` of the output always
    /// corresponds to line `i` of the input.
    pub fn run<I>(&self, lines: I) -> Vec<Result<LineOutput, StageError>>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        lines.into_iter().map(|line| self.run_line(line.as_ref())).collect()
    }
}
