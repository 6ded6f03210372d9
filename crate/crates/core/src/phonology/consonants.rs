//! The 44 Thai consonant letters: class, initial sound, and final sound.

use super::PhonologyError;

/// Orthographic class of a Thai consonant letter. Together with syllable
/// liveness, vowel length, and the tone mark it determines the tone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsonantClass {
    High,
    Mid,
    Low,
}

impl ConsonantClass {
    pub const ALL: [ConsonantClass; 3] =
        [ConsonantClass::High, ConsonantClass::Mid, ConsonantClass::Low];

    pub fn name(self) -> &'static str {
        match self {
            ConsonantClass::High => "high",
            ConsonantClass::Mid => "mid",
            ConsonantClass::Low => "low",
        }
    }

    pub fn from_name(name: &str) -> Option<ConsonantClass> {
        ConsonantClass::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// (letter, class, initial IPA, final IPA or None when the letter never
/// closes a syllable).
///
/// Finals collapse to the eight Thai coda sounds: p t k m n ŋ j w.
const CONSONANTS: [(char, ConsonantClass, &str, Option<&str>); 44] = [
    ('ก', ConsonantClass::Mid, "k", Some("k")),
    ('ข', ConsonantClass::High, "kʰ", Some("k")),
    ('ฃ', ConsonantClass::High, "kʰ", Some("k")),
    ('ค', ConsonantClass::Low, "kʰ", Some("k")),
    ('ฅ', ConsonantClass::Low, "kʰ", Some("k")),
    ('ฆ', ConsonantClass::Low, "kʰ", Some("k")),
    ('ง', ConsonantClass::Low, "ŋ", Some("ŋ")),
    ('จ', ConsonantClass::Mid, "tɕ", Some("t")),
    ('ฉ', ConsonantClass::High, "tɕʰ", None),
    ('ช', ConsonantClass::Low, "tɕʰ", Some("t")),
    ('ซ', ConsonantClass::Low, "s", Some("t")),
    ('ฌ', ConsonantClass::Low, "tɕʰ", None),
    ('ญ', ConsonantClass::Low, "j", Some("n")),
    ('ฎ', ConsonantClass::Mid, "d", Some("t")),
    ('ฏ', ConsonantClass::Mid, "t", Some("t")),
    ('ฐ', ConsonantClass::High, "tʰ", Some("t")),
    ('ฑ', ConsonantClass::Low, "tʰ", Some("t")),
    ('ฒ', ConsonantClass::Low, "tʰ", Some("t")),
    ('ณ', ConsonantClass::Low, "n", Some("n")),
    ('ด', ConsonantClass::Mid, "d", Some("t")),
    ('ต', ConsonantClass::Mid, "t", Some("t")),
    ('ถ', ConsonantClass::High, "tʰ", Some("t")),
    ('ท', ConsonantClass::Low, "tʰ", Some("t")),
    ('ธ', ConsonantClass::Low, "tʰ", Some("t")),
    ('น', ConsonantClass::Low, "n", Some("n")),
    ('บ', ConsonantClass::Mid, "b", Some("p")),
    ('ป', ConsonantClass::Mid, "p", Some("p")),
    ('ผ', ConsonantClass::High, "pʰ", None),
    ('ฝ', ConsonantClass::High, "f", None),
    ('พ', ConsonantClass::Low, "pʰ", Some("p")),
    ('ฟ', ConsonantClass::Low, "f", Some("p")),
    ('ภ', ConsonantClass::Low, "pʰ", Some("p")),
    ('ม', ConsonantClass::Low, "m", Some("m")),
    ('ย', ConsonantClass::Low, "j", Some("j")),
    ('ร', ConsonantClass::Low, "r", Some("n")),
    ('ล', ConsonantClass::Low, "l", Some("n")),
    ('ว', ConsonantClass::Low, "w", Some("w")),
    ('ศ', ConsonantClass::High, "s", Some("t")),
    ('ษ', ConsonantClass::High, "s", Some("t")),
    ('ส', ConsonantClass::High, "s", Some("t")),
    ('ห', ConsonantClass::High, "h", None),
    ('ฬ', ConsonantClass::Low, "l", Some("n")),
    ('อ', ConsonantClass::Mid, "ʔ", None),
    ('ฮ', ConsonantClass::Low, "h", None),
];

fn lookup(ch: char) -> Option<&'static (char, ConsonantClass, &'static str, Option<&'static str>)> {
    CONSONANTS.iter().find(|row| row.0 == ch)
}

pub fn is_thai_consonant(ch: char) -> bool {
    lookup(ch).is_some()
}

/// Class of a Thai consonant letter. Total over all 44 letters; anything else
/// is an error.
pub fn consonant_class(ch: char) -> Result<ConsonantClass, PhonologyError> {
    lookup(ch).map(|row| row.1).ok_or(PhonologyError::NotAConsonant(ch))
}

/// IPA value of the letter in initial position.
pub fn initial_sound(ch: char) -> Result<&'static str, PhonologyError> {
    lookup(ch).map(|row| row.2).ok_or(PhonologyError::NotAConsonant(ch))
}

/// IPA value of the letter in final (coda) position, or `None` for letters
/// that never close a syllable.
pub fn final_sound(ch: char) -> Result<Option<&'static str>, PhonologyError> {
    lookup(ch).map(|row| row.3).ok_or(PhonologyError::NotAConsonant(ch))
}

/// Sonorant codas keep a syllable live; stops make it dead.
pub fn is_sonorant_final(ipa: &str) -> bool {
    matches!(ipa, "m" | "n" | "ŋ" | "j" | "w")
}
