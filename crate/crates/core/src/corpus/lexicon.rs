//! Word inventory with frequencies.

use std::collections::BTreeMap;
use std::path::Path;

use super::{nfc, read_file, write_file, CorpusError};

/// Map from word to frequency. Words are non-empty, whitespace-free, and
/// unique; iteration is in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, u64>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    /// Convenience constructor with frequency 1 per word.
    pub fn from_words<I, S>(words: I) -> Result<Lexicon, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = Lexicon::new();
        for w in words {
            lex.insert(w.as_ref(), 1)?;
        }
        Ok(lex)
    }

    /// Inserts one entry, rejecting invalid words and duplicates.
    pub fn insert(&mut self, word: &str, frequency: u64) -> Result<(), CorpusError> {
        let word = nfc(word);
        if word.is_empty() {
            return Err(CorpusError::Invalid("empty word".into()));
        }
        if word.chars().any(char::is_whitespace) {
            return Err(CorpusError::Invalid(format!("word `{word}` contains whitespace")));
        }
        if self.entries.contains_key(&word) {
            return Err(CorpusError::Invalid(format!("duplicate word `{word}`")));
        }
        self.entries.insert(word, frequency);
        Ok(())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, &f)| (w.as_str(), f))
    }

    /// Parses the `word[\tfreq]` line format. Blank lines are skipped;
    /// a missing frequency defaults to 1.
    pub fn parse(text: &str, origin: &str) -> Result<Lexicon, CorpusError> {
        let mut lex = Lexicon::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (word_part, freq) = match line.split_once('\t') {
                Some((w, f)) => {
                    let f = f.trim();
                    if f.starts_with('-') && f[1..].chars().all(|c| c.is_ascii_digit()) && f.len() > 1 {
                        return Err(CorpusError::parse(
                            origin,
                            lineno,
                            format!("negative frequency `{f}`"),
                        ));
                    }
                    let parsed = f.parse::<u64>().map_err(|_| {
                        CorpusError::parse(origin, lineno, format!("invalid frequency `{f}`"))
                    })?;
                    (w, parsed)
                }
                None => (line, 1),
            };
            let word = nfc(word_part);
            if word.chars().any(char::is_whitespace) {
                return Err(CorpusError::parse(
                    origin,
                    lineno,
                    format!("word `{word}` contains whitespace"),
                ));
            }
            if word.is_empty() {
                return Err(CorpusError::parse(origin, lineno, "empty word"));
            }
            if lex.contains(&word) {
                return Err(CorpusError::parse(
                    origin,
                    lineno,
                    format!("duplicate word `{word}`"),
                ));
            }
            lex.entries.insert(word, freq);
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Lexicon, CorpusError> {
        let text = read_file(path)?;
        Lexicon::parse(&text, &path.display().to_string())
    }

    /// Canonical form: words in sorted order, frequency written only when it
    /// differs from 1.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (word, freq) in &self.entries {
            out.push_str(word);
            if *freq != 1 {
                out.push('\t');
                out.push_str(&freq.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        write_file(path, &self.render())
    }
}
