//! Pause-annotated sentences: raw text plus the character offsets where
//! inline pause tags stood.

use std::path::Path;

use super::{nfc, read_file, write_file, CorpusError};

pub const DEFAULT_PAUSE_TAG: &str = "<SPACE>";

/// A sentence with prosodic pause positions. Offsets are character (scalar
/// value) indices into `raw_text`, strictly increasing and strictly interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauseAnnotatedSentence {
    raw_text: String,
    pause_offsets: Vec<usize>,
}

impl PauseAnnotatedSentence {
    pub fn new(raw_text: String, pause_offsets: Vec<usize>) -> Result<Self, CorpusError> {
        let char_len = raw_text.chars().count();
        let mut prev = 0usize;
        for (i, &off) in pause_offsets.iter().enumerate() {
            if off == 0 || off >= char_len {
                return Err(CorpusError::PauseAnnotation(format!(
                    "offset {off} outside the open interval (0, {char_len})"
                )));
            }
            if i > 0 && off <= prev {
                return Err(CorpusError::PauseAnnotation(format!(
                    "offsets not strictly increasing at {off}"
                )));
            }
            prev = off;
        }
        Ok(PauseAnnotatedSentence { raw_text, pause_offsets })
    }

    pub fn unannotated(raw_text: String) -> Self {
        PauseAnnotatedSentence { raw_text, pause_offsets: Vec::new() }
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    pub fn pause_offsets(&self) -> &[usize] {
        &self.pause_offsets
    }
}

/// Parses one tagged line. The tag literal is removed wherever it occurs and
/// its positions are recorded in raw-text character coordinates. A leading
/// tag, a trailing tag, or two adjacent tags are rejected.
pub fn parse_pause_annotation(
    tagged_line: &str,
    tag: &str,
) -> Result<PauseAnnotatedSentence, CorpusError> {
    if tag.is_empty() {
        return Err(CorpusError::PauseAnnotation("empty pause tag".into()));
    }
    let tagged = nfc(tagged_line);
    if tagged.starts_with(tag) {
        return Err(CorpusError::PauseAnnotation("leading pause tag".into()));
    }
    if tagged.ends_with(tag) {
        return Err(CorpusError::PauseAnnotation("trailing pause tag".into()));
    }
    let doubled = format!("{tag}{tag}");
    if tagged.contains(&doubled) {
        return Err(CorpusError::PauseAnnotation("adjacent pause tags".into()));
    }
    let mut raw = String::new();
    let mut offsets = Vec::new();
    let mut chars_so_far = 0usize;
    let parts: Vec<&str> = tagged.split(tag).collect();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            offsets.push(chars_so_far);
        }
        raw.push_str(part);
        chars_so_far += part.chars().count();
    }
    PauseAnnotatedSentence::new(raw, offsets)
}

/// Inverse of [`parse_pause_annotation`]: inserts the tag at every offset.
pub fn render_pause_annotation(sentence: &PauseAnnotatedSentence, tag: &str) -> String {
    let mut out = String::new();
    let mut next = sentence.pause_offsets.iter().peekable();
    for (idx, ch) in sentence.raw_text.chars().enumerate() {
        if next.peek() == Some(&&idx) {
            out.push_str(tag);
            next.next();
        }
        out.push(ch);
    }
    out
}

/// Loads a pause corpus: one tagged sentence per line, blank lines skipped.
pub fn load_pause_corpus(
    path: &Path,
    tag: &str,
) -> Result<Vec<PauseAnnotatedSentence>, CorpusError> {
    let text = read_file(path)?;
    let origin = path.display().to_string();
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let sentence = parse_pause_annotation(line, tag).map_err(|e| {
            CorpusError::parse(&origin, idx + 1, e.to_string())
        })?;
        out.push(sentence);
    }
    Ok(out)
}

pub fn save_pause_corpus(
    path: &Path,
    sentences: &[PauseAnnotatedSentence],
    tag: &str,
) -> Result<(), CorpusError> {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&render_pause_annotation(s, tag));
        out.push('\n');
    }
    write_file(path, &out)
}
