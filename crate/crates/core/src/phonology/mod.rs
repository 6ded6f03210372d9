//! Thai phonology: consonant classes, syllable parsing, the tone grid, and
//! grapheme-to-phoneme conversion.
//!
//! Conversion is hybrid: regular spellings go through the template-based
//! syllable parser plus the tone rule table, irregular words are served from
//! an exception dictionary, and anything left over can be delegated to a
//! pluggable fallback predictor (see [`g2p`]).

mod consonants;
mod g2p;
mod syllable;
mod tone_rules;

pub use consonants::{consonant_class, final_sound, initial_sound, is_thai_consonant, ConsonantClass};
pub use g2p::{
    fallback_registry, g2p_rules, FallbackPredictor, FallbackRegistry, G2pEngine,
    MostFrequentFallback, NoFallback,
};
pub use syllable::{contains_thai, parse_syllables, Liveness, SyllableStructure, ToneMark};
pub use tone_rules::{determine_tone, determine_tone_with, ToneRuleTable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhonologyError {
    #[error("`{0}` is not a Thai consonant letter")]
    NotAConsonant(char),
    #[error("cannot parse syllables of `{word}`: no template matches `{span}`")]
    Unparseable { word: String, span: String },
    #[error("word is empty")]
    EmptyWord,
    #[error("no rule, exception, or fallback resolves `{0}`")]
    UnresolvableWord(String),
    #[error("invalid phoneme-tone sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid tone rule table: {0}")]
    InvalidRuleTable(String),
}

/// The five Thai lexical tones, in file-format digit order (0–4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tone {
    Mid,
    Low,
    Falling,
    High,
    Rising,
}

impl Tone {
    pub const ALL: [Tone; 5] = [Tone::Mid, Tone::Low, Tone::Falling, Tone::High, Tone::Rising];

    /// Digit used by the on-disk annotation format.
    pub fn digit(self) -> u8 {
        match self {
            Tone::Mid => 0,
            Tone::Low => 1,
            Tone::Falling => 2,
            Tone::High => 3,
            Tone::Rising => 4,
        }
    }

    pub fn from_digit(d: u8) -> Option<Tone> {
        Tone::ALL.get(d as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Tone::Mid => "mid",
            Tone::Low => "low",
            Tone::Falling => "falling",
            Tone::High => "high",
            Tone::Rising => "rising",
        }
    }

    pub fn from_name(name: &str) -> Option<Tone> {
        Tone::ALL.into_iter().find(|t| t.name() == name)
    }
}

/// One pronounced syllable: IPA phoneme strings plus the lexical tone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToneSyllable {
    pub phonemes: Vec<String>,
    pub tone: Tone,
}

impl ToneSyllable {
    pub fn new(phonemes: Vec<String>, tone: Tone) -> Self {
        ToneSyllable { phonemes, tone }
    }
}

/// Pronunciation of a word as a non-empty list of [`ToneSyllable`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhonemeToneSequence {
    pub syllables: Vec<ToneSyllable>,
}

impl PhonemeToneSequence {
    /// Validates the invariants: at least one syllable, every syllable has at
    /// least one phoneme, no phoneme string is empty or contains whitespace.
    pub fn new(syllables: Vec<ToneSyllable>) -> Result<Self, PhonologyError> {
        if syllables.is_empty() {
            return Err(PhonologyError::InvalidSequence("no syllables".into()));
        }
        for syl in &syllables {
            if syl.phonemes.is_empty() {
                return Err(PhonologyError::InvalidSequence("empty syllable".into()));
            }
            for p in &syl.phonemes {
                if p.is_empty() || p.chars().any(char::is_whitespace) {
                    return Err(PhonologyError::InvalidSequence(format!(
                        "bad phoneme string `{p}`"
                    )));
                }
            }
        }
        Ok(PhonemeToneSequence { syllables })
    }

    /// Total number of phonemes across all syllables.
    pub fn phoneme_count(&self) -> usize {
        self.syllables.iter().map(|s| s.phonemes.len()).sum()
    }
}
