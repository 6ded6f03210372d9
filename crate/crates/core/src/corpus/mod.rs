//! File formats consumed and produced by the pipeline.
//!
//! Four text formats live here: the lexicon (`word[\tfreq]` per line), the
//! pause corpus (one tagged sentence per line), the phoneme-tone annotation
//! TSV, and the JSON-lines audio manifest. All are UTF-8 and NFC-normalized
//! on load; `save` emits the canonical form, and canonical files round-trip
//! byte-identically (modulo a trailing newline).

mod lexicon;
mod manifest;
mod pause_annotation;
mod phoneme_annotation;

pub use lexicon::Lexicon;
pub use manifest::{load_manifest, parse_manifest, render_manifest, save_manifest, AudioManifestRecord};
pub use pause_annotation::{
    load_pause_corpus, parse_pause_annotation, render_pause_annotation, save_pause_corpus,
    PauseAnnotatedSentence, DEFAULT_PAUSE_TAG,
};
pub use phoneme_annotation::{
    load_phoneme_tone_annotations, parse_phoneme_tone_annotations,
    render_phoneme_tone_annotations, save_phoneme_tone_annotations, PhonemeToneEntry,
};

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("invalid pause annotation: {0}")]
    PauseAnnotation(String),
    #[error("invalid value: {0}")]
    Invalid(String),
}

impl CorpusError {
    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> CorpusError {
        CorpusError::Parse { origin: origin.to_string(), line, message: message.into() }
    }
}

/// NFC normalization applied by every loader. Thai combining marks make this
/// mandatory for stable character indexing.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path)
        .map_err(|source| CorpusError::Read { path: path.display().to_string(), source })
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CorpusError> {
    std::fs::write(path, contents)
        .map_err(|source| CorpusError::Write { path: path.display().to_string(), source })
}
