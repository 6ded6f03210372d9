//! Template-based Thai syllable parser.
//!
//! A word is parsed left to right; at each position the vowel-pattern
//! templates are tried in priority order (most specific spelling first) and
//! the parser backtracks when the remainder of the word cannot be parsed.
//! Each template fixes the nucleus, the vowel length, and whether a final
//! consonant is forbidden, required, or optional.
//!
//! Pre-parse rewrites handled during initial-consonant matching:
//! - silent ห before a low-class sonorant raises the syllable to high class
//! - อย spells /j/ with mid class
//! - the digraphs ทร, สร, ศร spell /s/
//! - true clusters (กร, กล, กว, ขร, ขล, ขว, คร, คล, คว, ตร, ปร, ปล, ผล,
//!   พร, พล) keep both consonants; the leading consonant supplies the class
//!
//! A trailing thanthakhat (U+0E4C) silences its consonant; the silenced
//! characters stay attached to the surface of the preceding syllable so that
//! concatenating syllable surfaces always reproduces the input word.
//!
//! Words the templates cannot cover (vowel reordering as in เสมอ, silent ร
//! as in จริง, Indic loans) are the exception-dictionary cases.

use super::consonants::{
    consonant_class, final_sound, initial_sound, is_sonorant_final, is_thai_consonant,
    ConsonantClass,
};
use super::PhonologyError;

pub const THANTHAKHAT: char = '\u{0E4C}';

/// The four written tone marks (or none).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ToneMark {
    None,
    MaiEk,
    MaiTho,
    MaiTri,
    MaiChattawa,
}

impl ToneMark {
    pub const ALL: [ToneMark; 5] = [
        ToneMark::None,
        ToneMark::MaiEk,
        ToneMark::MaiTho,
        ToneMark::MaiTri,
        ToneMark::MaiChattawa,
    ];

    pub fn from_char(ch: char) -> Option<ToneMark> {
        match ch {
            '\u{0E48}' => Some(ToneMark::MaiEk),
            '\u{0E49}' => Some(ToneMark::MaiTho),
            '\u{0E4A}' => Some(ToneMark::MaiTri),
            '\u{0E4B}' => Some(ToneMark::MaiChattawa),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ToneMark::None => "none",
            ToneMark::MaiEk => "mai_ek",
            ToneMark::MaiTho => "mai_tho",
            ToneMark::MaiTri => "mai_tri",
            ToneMark::MaiChattawa => "mai_chattawa",
        }
    }

    pub fn from_name(name: &str) -> Option<ToneMark> {
        ToneMark::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// Live/dead classification of a syllable, derived from coda and length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Liveness {
    Live,
    Dead,
}

impl Liveness {
    pub const ALL: [Liveness; 2] = [Liveness::Live, Liveness::Dead];

    pub fn name(self) -> &'static str {
        match self {
            Liveness::Live => "live",
            Liveness::Dead => "dead",
        }
    }

    pub fn from_name(name: &str) -> Option<Liveness> {
        Liveness::ALL.into_iter().find(|l| l.name() == name)
    }
}

/// Parsed structure of one written syllable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllableStructure {
    /// The characters of the word this syllable covers, silenced letters
    /// included.
    pub surface: String,
    /// IPA of the onset consonant(s); one entry, or two for a true cluster.
    pub onset: Vec<String>,
    /// Tone-determining class. Starts as the class of the leading consonant
    /// and may be raised by silent-ห spelling or leading-syllable
    /// inheritance.
    pub onset_class: ConsonantClass,
    /// IPA nucleus.
    pub nucleus: String,
    pub long_vowel: bool,
    /// IPA coda, if any. Covers both written finals and the implicit codas
    /// of ำ, ไ, ใ, and เ-า spellings.
    pub coda: Option<String>,
    pub tone_mark: ToneMark,
}

impl SyllableStructure {
    /// Live iff the coda is sonorant, or there is no coda and the vowel is
    /// long. Dead iff the coda is a stop, or there is no coda and the vowel
    /// is short.
    pub fn liveness(&self) -> Liveness {
        match &self.coda {
            Some(c) if is_sonorant_final(c) => Liveness::Live,
            Some(_) => Liveness::Dead,
            None if self.long_vowel => Liveness::Live,
            None => Liveness::Dead,
        }
    }

    /// Flat phoneme list: onset consonants, nucleus, coda.
    pub fn phonemes(&self) -> Vec<String> {
        let mut out = self.onset.clone();
        out.push(self.nucleus.clone());
        if let Some(c) = &self.coda {
            out.push(c.clone());
        }
        out
    }
}

/// True if the string contains any character from the Thai block.
pub fn contains_thai(s: &str) -> bool {
    s.chars().any(|c| ('\u{0E01}'..='\u{0E5B}').contains(&c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FinalMode {
    Forbidden,
    Required,
    Optional,
    /// Required and drawn from a fixed letter set (e.g. the ย of ไทย).
    OneOf(&'static [char]),
}

struct Template {
    lead: Option<char>,
    lits: &'static [char],
    nucleus: &'static str,
    long: bool,
    fin: FinalMode,
    implicit_coda: Option<&'static str>,
    /// Inherent-a linker syllable (ส of สบาย); never matches at word end.
    linker: bool,
}

const fn tmpl(
    lead: Option<char>,
    lits: &'static [char],
    nucleus: &'static str,
    long: bool,
    fin: FinalMode,
) -> Template {
    Template { lead, lits, nucleus, long, fin, implicit_coda: None, linker: false }
}

const fn tmpl_coda(
    lead: Option<char>,
    lits: &'static [char],
    nucleus: &'static str,
    implicit_coda: &'static str,
) -> Template {
    Template {
        lead,
        lits,
        nucleus,
        long: false,
        fin: FinalMode::Forbidden,
        implicit_coda: Some(implicit_coda),
        linker: false,
    }
}

/// Vowel-pattern templates in matching priority order.
static TEMPLATES: &[Template] = &[
    // เ- group
    tmpl(Some('เ'), &['ี', 'ย', 'ะ'], "ia", false, FinalMode::Forbidden),
    tmpl(Some('เ'), &['ี', 'ย'], "ia", true, FinalMode::Optional),
    tmpl(Some('เ'), &['ื', 'อ', 'ะ'], "ɯa", false, FinalMode::Forbidden),
    tmpl(Some('เ'), &['ื', 'อ'], "ɯa", true, FinalMode::Optional),
    tmpl(Some('เ'), &['อ', 'ะ'], "ɤ", false, FinalMode::Forbidden),
    tmpl(Some('เ'), &['อ'], "ɤː", true, FinalMode::Required),
    tmpl(Some('เ'), &['อ'], "ɤː", true, FinalMode::Forbidden),
    tmpl(Some('เ'), &['ิ'], "ɤː", true, FinalMode::Required),
    tmpl(Some('เ'), &[], "ɤː", true, FinalMode::OneOf(&['ย'])),
    tmpl(Some('เ'), &['า', 'ะ'], "ɔ", false, FinalMode::Forbidden),
    tmpl_coda(Some('เ'), &['า'], "a", "w"),
    tmpl(Some('เ'), &['็'], "e", false, FinalMode::Required),
    tmpl(Some('เ'), &['ะ'], "e", false, FinalMode::Forbidden),
    tmpl(Some('เ'), &[], "eː", true, FinalMode::Optional),
    // แ- group
    tmpl(Some('แ'), &['็'], "ɛ", false, FinalMode::Required),
    tmpl(Some('แ'), &['ะ'], "ɛ", false, FinalMode::Forbidden),
    tmpl(Some('แ'), &[], "ɛː", true, FinalMode::Optional),
    // โ- group
    tmpl(Some('โ'), &['ะ'], "o", false, FinalMode::Forbidden),
    tmpl(Some('โ'), &[], "oː", true, FinalMode::Optional),
    // ไ- / ใ-
    tmpl(Some('ไ'), &[], "a", false, FinalMode::OneOf(&['ย'])),
    tmpl_coda(Some('ไ'), &[], "a", "j"),
    tmpl_coda(Some('ใ'), &[], "a", "j"),
    // bare-initial group
    tmpl(None, &['ั', 'ว', 'ะ'], "ua", false, FinalMode::Forbidden),
    tmpl(None, &['ั', 'ว'], "ua", true, FinalMode::Forbidden),
    tmpl_coda(None, &['ำ'], "a", "m"),
    tmpl(None, &['ั'], "a", false, FinalMode::Required),
    tmpl(None, &['ะ'], "a", false, FinalMode::Forbidden),
    tmpl(None, &['ร', 'ร'], "a", false, FinalMode::Required),
    tmpl_coda(None, &['ร', 'ร'], "a", "n"),
    tmpl(None, &['า'], "aː", true, FinalMode::Optional),
    tmpl(None, &['ิ'], "i", false, FinalMode::Optional),
    tmpl(None, &['ี'], "iː", true, FinalMode::Optional),
    tmpl(None, &['ึ'], "ɯ", false, FinalMode::Optional),
    tmpl(None, &['ื', 'อ'], "ɯː", true, FinalMode::Forbidden),
    tmpl(None, &['ื'], "ɯː", true, FinalMode::Required),
    tmpl(None, &['ุ'], "u", false, FinalMode::Optional),
    tmpl(None, &['ู'], "uː", true, FinalMode::Optional),
    tmpl(None, &['็', 'อ'], "ɔ", false, FinalMode::Required),
    tmpl(None, &['อ'], "ɔː", true, FinalMode::Optional),
    tmpl(None, &['ว'], "ua", true, FinalMode::Required),
    Template {
        lead: None,
        lits: &['ร'],
        nucleus: "ɔː",
        long: true,
        fin: FinalMode::Forbidden,
        implicit_coda: Some("n"),
        linker: false,
    },
    // inherent vowels, lowest priority
    tmpl(None, &[], "o", false, FinalMode::Required),
    Template {
        lead: None,
        lits: &[],
        nucleus: "a",
        long: false,
        fin: FinalMode::Forbidden,
        implicit_coda: None,
        linker: true,
    },
];

const CLUSTERS: [(char, char); 15] = [
    ('ก', 'ร'),
    ('ก', 'ล'),
    ('ก', 'ว'),
    ('ข', 'ร'),
    ('ข', 'ล'),
    ('ข', 'ว'),
    ('ค', 'ร'),
    ('ค', 'ล'),
    ('ค', 'ว'),
    ('ต', 'ร'),
    ('ป', 'ร'),
    ('ป', 'ล'),
    ('ผ', 'ล'),
    ('พ', 'ร'),
    ('พ', 'ล'),
];

fn is_low_sonorant(ch: char) -> bool {
    matches!(ch, 'ง' | 'ญ' | 'ณ' | 'น' | 'ม' | 'ย' | 'ร' | 'ล' | 'ว' | 'ฬ')
}

fn is_sonorant_onset_ipa(ipa: &str) -> bool {
    matches!(ipa, "ŋ" | "j" | "n" | "m" | "r" | "l" | "w")
}

struct InitMatch {
    consumed: usize,
    onset: Vec<String>,
    class: ConsonantClass,
}

struct Candidate {
    /// Effective characters consumed from the candidate's start position.
    consumed: usize,
    syllable: SyllableStructure,
}

struct Parser {
    chars: Vec<char>,
    silent: Vec<bool>,
    /// Indices into `chars` of the non-silent characters, in order.
    eff: Vec<usize>,
    /// Furthest effective position any parse attempt reached; used for the
    /// error span.
    furthest: std::cell::Cell<usize>,
}

impl Parser {
    fn eff_char(&self, m: usize) -> Option<char> {
        self.eff.get(m).map(|&i| self.chars[i])
    }

    fn init_candidates(&self, m: usize) -> Vec<InitMatch> {
        let mut out = Vec::new();
        let Some(c0) = self.eff_char(m) else { return out };
        if let Some(c1) = self.eff_char(m + 1) {
            if c0 == 'ห' && is_low_sonorant(c1) {
                out.push(InitMatch {
                    consumed: 2,
                    onset: vec![initial_sound(c1).unwrap().to_string()],
                    class: ConsonantClass::High,
                });
            }
            if c0 == 'อ' && c1 == 'ย' {
                out.push(InitMatch {
                    consumed: 2,
                    onset: vec!["j".to_string()],
                    class: ConsonantClass::Mid,
                });
            }
            if matches!(c0, 'ท' | 'ส' | 'ศ') && c1 == 'ร' {
                out.push(InitMatch {
                    consumed: 2,
                    onset: vec!["s".to_string()],
                    class: consonant_class(c0).unwrap(),
                });
            }
            if CLUSTERS.contains(&(c0, c1)) {
                out.push(InitMatch {
                    consumed: 2,
                    onset: vec![
                        initial_sound(c0).unwrap().to_string(),
                        initial_sound(c1).unwrap().to_string(),
                    ],
                    class: consonant_class(c0).unwrap(),
                });
            }
        }
        if is_thai_consonant(c0) {
            out.push(InitMatch {
                consumed: 1,
                onset: vec![initial_sound(c0).unwrap().to_string()],
                class: consonant_class(c0).unwrap(),
            });
        }
        out
    }

    /// Consumes a tone mark at `m` if present. Returns false on a second
    /// mark (invalid spelling).
    fn capture_tone(&self, m: &mut usize, tone: &mut ToneMark) -> bool {
        while let Some(mark) = self.eff_char(*m).and_then(ToneMark::from_char) {
            if *tone != ToneMark::None {
                return false;
            }
            *tone = mark;
            *m += 1;
        }
        true
    }

    fn note_progress(&self, m: usize) {
        if m > self.furthest.get() {
            self.furthest.set(m);
        }
    }

    fn final_at(&self, m: usize) -> Option<&'static str> {
        let ch = self.eff_char(m)?;
        if !is_thai_consonant(ch) {
            return None;
        }
        final_sound(ch).ok().flatten()
    }

    /// Surface of a syllable spanning effective positions [k, k+consumed),
    /// extended through any trailing silenced characters.
    fn surface(&self, k: usize, consumed: usize) -> String {
        let start = self.eff[k];
        let mut end = self.eff[k + consumed - 1];
        while end + 1 < self.chars.len() && self.silent[end + 1] {
            end += 1;
        }
        self.chars[start..=end].iter().collect()
    }

    fn match_template(&self, k: usize, t: &Template) -> Vec<Candidate> {
        let mut out = Vec::new();
        let mut m = k;
        if let Some(lead) = t.lead {
            if self.eff_char(m) != Some(lead) {
                return out;
            }
            m += 1;
        }
        for init in self.init_candidates(m) {
            let mut m2 = m + init.consumed;
            let mut tone = ToneMark::None;
            let mut ok = true;
            for &lit in t.lits {
                if !self.capture_tone(&mut m2, &mut tone) {
                    ok = false;
                    break;
                }
                if self.eff_char(m2) == Some(lit) {
                    m2 += 1;
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok || !self.capture_tone(&mut m2, &mut tone) {
                continue;
            }
            self.note_progress(m2);
            let mut push = |end: usize, coda: Option<String>| {
                out.push(Candidate {
                    consumed: end - k,
                    syllable: SyllableStructure {
                        surface: self.surface(k, end - k),
                        onset: init.onset.clone(),
                        onset_class: init.class,
                        nucleus: t.nucleus.to_string(),
                        long_vowel: t.long,
                        coda,
                        tone_mark: tone,
                    },
                });
            };
            let implicit = t.implicit_coda.map(str::to_string);
            match t.fin {
                FinalMode::Forbidden => push(m2, implicit),
                FinalMode::Required => {
                    if let Some(f) = self.final_at(m2) {
                        push(m2 + 1, Some(f.to_string()));
                    }
                }
                FinalMode::OneOf(set) => {
                    if let Some(ch) = self.eff_char(m2) {
                        if set.contains(&ch) {
                            if let Some(f) = self.final_at(m2) {
                                push(m2 + 1, Some(f.to_string()));
                            }
                        }
                    }
                }
                FinalMode::Optional => {
                    if let Some(f) = self.final_at(m2) {
                        push(m2 + 1, Some(f.to_string()));
                    }
                    push(m2, implicit);
                }
            }
        }
        out
    }

    fn parse_from(&self, k: usize, dead: &mut Vec<bool>) -> Option<Vec<SyllableStructure>> {
        if k == self.eff.len() {
            return Some(Vec::new());
        }
        if dead[k] {
            return None;
        }
        for t in TEMPLATES {
            for cand in self.match_template(k, t) {
                let next = k + cand.consumed;
                if t.linker && next == self.eff.len() {
                    continue;
                }
                if let Some(mut rest) = self.parse_from(next, dead) {
                    rest.insert(0, cand.syllable);
                    return Some(rest);
                }
            }
        }
        dead[k] = true;
        None
    }
}

/// Raises the class of a bare low-sonorant syllable following a written
/// inherent-a linker of high or mid class (the สนุก / ขนม / ตลาด pattern).
fn apply_leading_class(sylls: &mut [SyllableStructure]) {
    for i in 1..sylls.len() {
        let prev = &sylls[i - 1];
        let is_linker = prev.surface.chars().count() == 1
            && prev.nucleus == "a"
            && !prev.long_vowel
            && prev.coda.is_none()
            && prev.tone_mark == ToneMark::None
            && matches!(prev.onset_class, ConsonantClass::High | ConsonantClass::Mid);
        if !is_linker {
            continue;
        }
        let class = prev.onset_class;
        let cur = &mut sylls[i];
        if cur.onset.len() == 1
            && cur.onset_class == ConsonantClass::Low
            && is_sonorant_onset_ipa(&cur.onset[0])
        {
            cur.onset_class = class;
        }
    }
}

/// Parses an NFC Thai word into syllables. Concatenating the surfaces of the
/// result reproduces the word exactly.
pub fn parse_syllables(word: &str) -> Result<Vec<SyllableStructure>, PhonologyError> {
    if word.is_empty() {
        return Err(PhonologyError::EmptyWord);
    }
    let chars: Vec<char> = word.chars().collect();
    let mut silent = vec![false; chars.len()];
    for i in 0..chars.len() {
        if chars[i] == THANTHAKHAT {
            if i > 0 && is_thai_consonant(chars[i - 1]) && !silent[i - 1] {
                silent[i - 1] = true;
                silent[i] = true;
            } else {
                return Err(PhonologyError::Unparseable {
                    word: word.to_string(),
                    span: THANTHAKHAT.to_string(),
                });
            }
        }
    }
    let eff: Vec<usize> = (0..chars.len()).filter(|&i| !silent[i]).collect();
    if eff.is_empty() {
        return Err(PhonologyError::Unparseable {
            word: word.to_string(),
            span: word.to_string(),
        });
    }
    let parser = Parser { chars, silent, eff, furthest: std::cell::Cell::new(0) };
    let mut dead = vec![false; parser.eff.len()];
    match parser.parse_from(0, &mut dead) {
        Some(mut sylls) => {
            apply_leading_class(&mut sylls);
            Ok(sylls)
        }
        None => {
            let at = parser.furthest.get().min(parser.eff.len().saturating_sub(1));
            let span: String =
                parser.eff[at..].iter().map(|&i| parser.chars[i]).collect();
            Err(PhonologyError::Unparseable { word: word.to_string(), span })
        }
    }
}
