//! Phoneme-tone token encoding.
//!
//! The vocabulary carries every observed phoneme as a base token plus, for
//! each phoneme, five tone-merged variants. Encoding maps every phoneme of a
//! syllable to its base id except the last, which takes the merged
//! (phoneme, tone) id — tone rides on the final phoneme of each syllable and
//! the token sequence keeps exactly one id per phoneme.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

use crate::corpus::PhonemeToneEntry;
use crate::phonology::{PhonemeToneSequence, Tone, ToneSyllable};

pub const VOCAB_HEADER: &str = "thaifront-vocab v1";
pub const PAD_TOKEN: &str = "<pad>";
pub const UNK_TOKEN: &str = "<unk>";
pub const PAUSE_TOKEN: &str = "<pause>";

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("cannot build a vocabulary from an empty annotation set")]
    EmptyAnnotations,
    #[error("invalid vocabulary: {0}")]
    BadVocab(String),
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
    #[error("invalid encoded sequence: {0}")]
    Structure(String),
}

/// Token inventory: three specials, base phonemes, and five tone-merged
/// variants per base phoneme. Ids are contiguous from 0 and assigned in
/// sorted order, so the same annotation set always yields the same
/// vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeVocab {
    base: BTreeMap<String, u32>,
    merged: BTreeMap<(String, Tone), u32>,
}

impl PhonemeVocab {
    pub const PAD_ID: u32 = 0;
    pub const UNK_ID: u32 = 1;
    pub const PAUSE_ID: u32 = 2;

    /// Builds the vocabulary from the phonemes observed in the annotations.
    pub fn build(annotations: &[PhonemeToneEntry]) -> Result<PhonemeVocab, EncodingError> {
        if annotations.is_empty() {
            return Err(EncodingError::EmptyAnnotations);
        }
        let phonemes: BTreeSet<&str> = annotations
            .iter()
            .flat_map(|e| e.pronunciation.syllables.iter())
            .flat_map(|s| s.phonemes.iter())
            .map(String::as_str)
            .collect();
        Ok(PhonemeVocab::from_phonemes(phonemes.into_iter()))
    }

    /// Builds the vocabulary from an explicit phoneme inventory.
    pub fn from_phonemes<'a>(phonemes: impl Iterator<Item = &'a str>) -> PhonemeVocab {
        let sorted: BTreeSet<&str> = phonemes.collect();
        let mut base = BTreeMap::new();
        let mut next = 3u32;
        for p in &sorted {
            base.insert(p.to_string(), next);
            next += 1;
        }
        let mut merged = BTreeMap::new();
        for p in &sorted {
            for tone in Tone::ALL {
                merged.insert((p.to_string(), tone), next);
                next += 1;
            }
        }
        PhonemeVocab { base, merged }
    }

    /// Total id count: 3 specials + base + 5 x base.
    pub fn len(&self) -> usize {
        3 + self.base.len() + self.merged.len()
    }

    /// Never true: the three special tokens always exist.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    pub fn base_id(&self, phoneme: &str) -> Option<u32> {
        self.base.get(phoneme).copied()
    }

    pub fn merged_id(&self, phoneme: &str, tone: Tone) -> Option<u32> {
        self.merged.get(&(phoneme.to_string(), tone)).copied()
    }

    pub fn contains_phoneme(&self, phoneme: &str) -> bool {
        self.base.contains_key(phoneme)
    }

    fn kind_of(&self, id: u32) -> TokenKind {
        if id == Self::PAD_ID || id == Self::UNK_ID || id == Self::PAUSE_ID {
            return TokenKind::Special;
        }
        let base_end = 3 + self.base.len() as u32;
        if id < base_end {
            TokenKind::Base
        } else if id < self.len() as u32 {
            TokenKind::Merged
        } else {
            TokenKind::Unknown
        }
    }

    fn base_of(&self, id: u32) -> Option<&str> {
        self.base
            .iter()
            .find(|(_, &v)| v == id)
            .map(|(k, _)| k.as_str())
    }

    fn merged_of(&self, id: u32) -> Option<(&str, Tone)> {
        self.merged
            .iter()
            .find(|(_, &v)| v == id)
            .map(|((p, t), _)| (p.as_str(), *t))
    }

    /// Versioned TSV form: `token TAB id TAB kind`, merged tokens written as
    /// `phoneme#digit`.
    pub fn render(&self) -> String {
        let mut rows: Vec<(String, u32, &str)> = vec![
            (PAD_TOKEN.to_string(), Self::PAD_ID, "special"),
            (UNK_TOKEN.to_string(), Self::UNK_ID, "special"),
            (PAUSE_TOKEN.to_string(), Self::PAUSE_ID, "special"),
        ];
        for (p, &id) in &self.base {
            rows.push((p.clone(), id, "base"));
        }
        for ((p, tone), &id) in &self.merged {
            rows.push((format!("{p}#{}", tone.digit()), id, "merged"));
        }
        rows.sort_by_key(|(_, id, _)| *id);
        let mut out = String::from(VOCAB_HEADER);
        out.push('\n');
        for (token, id, kind) in rows {
            out.push_str(&format!("{token}\t{id}\t{kind}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<PhonemeVocab, EncodingError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == VOCAB_HEADER => {}
            other => {
                return Err(EncodingError::BadVocab(format!(
                    "expected header `{VOCAB_HEADER}`, found `{}`",
                    other.unwrap_or("")
                )))
            }
        }
        let mut base = BTreeMap::new();
        let mut merged = BTreeMap::new();
        let mut seen_ids = BTreeSet::new();
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [token, id, kind] = fields.as_slice() else {
                return Err(EncodingError::BadVocab(format!(
                    "line {lineno}: expected `token TAB id TAB kind`"
                )));
            };
            let id: u32 = id.parse().map_err(|_| {
                EncodingError::BadVocab(format!("line {lineno}: bad id `{id}`"))
            })?;
            if !seen_ids.insert(id) {
                return Err(EncodingError::BadVocab(format!("line {lineno}: duplicate id {id}")));
            }
            match *kind {
                "special" => {
                    let expected = match *token {
                        PAD_TOKEN => Self::PAD_ID,
                        UNK_TOKEN => Self::UNK_ID,
                        PAUSE_TOKEN => Self::PAUSE_ID,
                        other => {
                            return Err(EncodingError::BadVocab(format!(
                                "line {lineno}: unknown special `{other}`"
                            )))
                        }
                    };
                    if id != expected {
                        return Err(EncodingError::BadVocab(format!(
                            "line {lineno}: special `{token}` must have id {expected}"
                        )));
                    }
                }
                "base" => {
                    base.insert(token.to_string(), id);
                }
                "merged" => {
                    let (p, digit) = token.rsplit_once('#').ok_or_else(|| {
                        EncodingError::BadVocab(format!(
                            "line {lineno}: merged token `{token}` lacks `#digit`"
                        ))
                    })?;
                    let tone = digit
                        .parse::<u8>()
                        .ok()
                        .and_then(Tone::from_digit)
                        .ok_or_else(|| {
                            EncodingError::BadVocab(format!(
                                "line {lineno}: bad tone digit `{digit}`"
                            ))
                        })?;
                    merged.insert((p.to_string(), tone), id);
                }
                other => {
                    return Err(EncodingError::BadVocab(format!(
                        "line {lineno}: unknown kind `{other}`"
                    )))
                }
            }
        }
        let vocab = PhonemeVocab { base, merged };
        // Rebuild canonically and require identity; this enforces contiguous
        // ids, complete merged coverage, and sorted assignment.
        let canonical = PhonemeVocab::from_phonemes(vocab.base.keys().map(String::as_str));
        if vocab != canonical {
            return Err(EncodingError::BadVocab(
                "ids are not the canonical contiguous assignment".into(),
            ));
        }
        Ok(vocab)
    }

    pub fn load(path: &Path) -> Result<PhonemeVocab, EncodingError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| EncodingError::Read { path: path.display().to_string(), source })?;
        PhonemeVocab::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), EncodingError> {
        std::fs::write(path, self.render())
            .map_err(|source| EncodingError::Write { path: path.display().to_string(), source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokenKind {
    Special,
    Base,
    Merged,
    Unknown,
}

/// Token ids plus the syllable spans that partition them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedSequence {
    pub ids: Vec<u32>,
    /// Half-open (start, end) index pairs, one per syllable, covering
    /// [0, len) without gaps.
    pub syllable_spans: Vec<(usize, usize)>,
}

impl EncodedSequence {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Encoding result: the sequence plus how many phonemes fell back to the
/// unknown id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeOutcome {
    pub sequence: EncodedSequence,
    pub unknown_count: usize,
}

/// Encodes a pronunciation: within each syllable all phonemes map to base
/// ids except the last, which maps to the merged (phoneme, tone) id. Length
/// is preserved exactly: one id per phoneme. Unknown phonemes map to the
/// unknown id and are counted, never an error.
pub fn encode(seq: &PhonemeToneSequence, vocab: &PhonemeVocab) -> EncodeOutcome {
    let mut ids = Vec::with_capacity(seq.phoneme_count());
    let mut spans = Vec::with_capacity(seq.syllables.len());
    let mut unknown = 0usize;
    for syl in &seq.syllables {
        let start = ids.len();
        let last = syl.phonemes.len() - 1;
        for (i, phoneme) in syl.phonemes.iter().enumerate() {
            let id = if i == last {
                vocab.merged_id(phoneme, syl.tone)
            } else {
                vocab.base_id(phoneme)
            };
            match id {
                Some(id) => ids.push(id),
                None => {
                    unknown += 1;
                    ids.push(PhonemeVocab::UNK_ID);
                }
            }
        }
        spans.push((start, ids.len()));
    }
    EncodeOutcome { sequence: EncodedSequence { ids, syllable_spans: spans }, unknown_count: unknown }
}

/// Exact inverse of [`encode`] on sequences fully inside the vocabulary.
/// A base token in syllable-final position, a merged token elsewhere, a
/// special id anywhere, or a broken span table is a structure error.
pub fn decode(
    enc: &EncodedSequence,
    vocab: &PhonemeVocab,
) -> Result<PhonemeToneSequence, EncodingError> {
    let mut expected_start = 0usize;
    if enc.syllable_spans.is_empty() {
        return Err(EncodingError::Structure("no syllable spans".into()));
    }
    let mut syllables = Vec::with_capacity(enc.syllable_spans.len());
    for &(start, end) in &enc.syllable_spans {
        if start != expected_start || end <= start || end > enc.ids.len() {
            return Err(EncodingError::Structure(format!(
                "span ({start}, {end}) does not continue the partition at {expected_start}"
            )));
        }
        expected_start = end;
        let mut phonemes = Vec::with_capacity(end - start);
        let mut tone = None;
        for (pos, &id) in enc.ids[start..end].iter().enumerate() {
            let is_last = pos == end - start - 1;
            match vocab.kind_of(id) {
                TokenKind::Base if !is_last => {
                    phonemes.push(vocab.base_of(id).expect("kind checked").to_string());
                }
                TokenKind::Merged if is_last => {
                    let (p, t) = vocab.merged_of(id).expect("kind checked");
                    phonemes.push(p.to_string());
                    tone = Some(t);
                }
                TokenKind::Base => {
                    return Err(EncodingError::Structure(format!(
                        "base token {id} at syllable-final position"
                    )))
                }
                TokenKind::Merged => {
                    return Err(EncodingError::Structure(format!(
                        "merged token {id} before the syllable-final position"
                    )))
                }
                TokenKind::Special => {
                    return Err(EncodingError::Structure(format!(
                        "special token {id} inside a syllable"
                    )))
                }
                TokenKind::Unknown => {
                    return Err(EncodingError::Structure(format!("id {id} outside the vocabulary")))
                }
            }
        }
        syllables.push(ToneSyllable::new(phonemes, tone.expect("non-empty span sets tone")));
    }
    if expected_start != enc.ids.len() {
        return Err(EncodingError::Structure(format!(
            "spans cover [0, {expected_start}) but ids run to {}",
            enc.ids.len()
        )));
    }
    PhonemeToneSequence::new(syllables)
        .map_err(|e| EncodingError::Structure(e.to_string()))
}
