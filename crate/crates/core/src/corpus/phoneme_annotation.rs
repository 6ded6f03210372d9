//! Phoneme-tone annotation TSV: `word TAB syllable-groups`, syllables
//! separated by `.`, phonemes space-separated, tone as a trailing digit 0–4
//! (mid, low, falling, high, rising).

use std::path::Path;

use super::{nfc, read_file, write_file, CorpusError};
use crate::phonology::{PhonemeToneSequence, Tone, ToneSyllable};

/// One annotated word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeToneEntry {
    pub word: String,
    pub pronunciation: PhonemeToneSequence,
}

fn parse_line(line: &str, origin: &str, lineno: usize) -> Result<PhonemeToneEntry, CorpusError> {
    let (word_part, groups_part) = line.split_once('\t').ok_or_else(|| {
        CorpusError::parse(origin, lineno, "expected `word TAB syllables`")
    })?;
    let word = nfc(word_part);
    if word.is_empty() {
        return Err(CorpusError::parse(origin, lineno, "empty word"));
    }
    if word.chars().any(char::is_whitespace) {
        return Err(CorpusError::parse(origin, lineno, format!("word `{word}` contains whitespace")));
    }
    let mut syllables = Vec::new();
    for group in groups_part.split('.') {
        let items: Vec<&str> = group.split_whitespace().collect();
        if items.is_empty() {
            return Err(CorpusError::parse(origin, lineno, "empty syllable"));
        }
        if items.len() < 2 {
            return Err(CorpusError::parse(
                origin,
                lineno,
                format!("syllable `{}` needs at least one phoneme and a tone digit", group.trim()),
            ));
        }
        let tone_str = items[items.len() - 1];
        let tone = tone_str
            .parse::<u8>()
            .ok()
            .and_then(Tone::from_digit)
            .ok_or_else(|| {
                CorpusError::parse(
                    origin,
                    lineno,
                    format!("tone digit `{tone_str}` outside 0–4"),
                )
            })?;
        let phonemes: Vec<String> =
            items[..items.len() - 1].iter().map(|p| nfc(p)).collect();
        syllables.push(ToneSyllable::new(phonemes, tone));
    }
    let pronunciation = PhonemeToneSequence::new(syllables)
        .map_err(|e| CorpusError::parse(origin, lineno, e.to_string()))?;
    Ok(PhonemeToneEntry { word, pronunciation })
}

pub fn parse_phoneme_tone_annotations(
    text: &str,
    origin: &str,
) -> Result<Vec<PhonemeToneEntry>, CorpusError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(line, origin, idx + 1)?);
    }
    Ok(out)
}

pub fn load_phoneme_tone_annotations(path: &Path) -> Result<Vec<PhonemeToneEntry>, CorpusError> {
    let text = read_file(path)?;
    parse_phoneme_tone_annotations(&text, &path.display().to_string())
}

/// Canonical TSV form: syllable groups joined with ` . `.
pub fn render_phoneme_tone_annotations(entries: &[PhonemeToneEntry]) -> String {
    let mut out = String::new();
    for entry in entries {
        out.push_str(&entry.word);
        out.push('\t');
        let groups: Vec<String> = entry
            .pronunciation
            .syllables
            .iter()
            .map(|syl| format!("{} {}", syl.phonemes.join(" "), syl.tone.digit()))
            .collect();
        out.push_str(&groups.join(" . "));
        out.push('\n');
    }
    out
}

pub fn save_phoneme_tone_annotations(
    path: &Path,
    entries: &[PhonemeToneEntry],
) -> Result<(), CorpusError> {
    write_file(path, &render_phoneme_tone_annotations(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_syllable_line() {
        let entries = parse_phoneme_tone_annotations("กา\tk aː 0\n", "test").unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].word, "กา");
        let syl = &entries[0].pronunciation.syllables[0];
        assert_eq!(syl.phonemes, vec!["k", "aː"]);
        assert_eq!(syl.tone, Tone::Mid);
    }

    #[test]
    fn tone_digit_out_of_range_is_an_error() {
        let err = parse_phoneme_tone_annotations("กา\tk aː 7\n", "test").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("7"), "{msg}");
        assert!(msg.contains("test:1"), "{msg}");
    }

    #[test]
    fn empty_syllable_is_an_error() {
        assert!(parse_phoneme_tone_annotations("กา\tk aː 0 . \n", "test").is_err());
        assert!(parse_phoneme_tone_annotations("กา\t. k aː 0\n", "test").is_err());
    }

    #[test]
    fn multi_syllable_line_round_trips() {
        let text = "สบาย\ts a 1 . b aː j 0\n";
        let entries = parse_phoneme_tone_annotations(text, "test").unwrap();
        assert_eq!(entries[0].pronunciation.syllables.len(), 2);
        assert_eq!(render_phoneme_tone_annotations(&entries), text);
    }

    #[test]
    fn missing_tab_is_an_error() {
        assert!(parse_phoneme_tone_annotations("กา k aː 0\n", "test").is_err());
    }
}
