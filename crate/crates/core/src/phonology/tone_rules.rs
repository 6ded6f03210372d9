//! The Thai tone grid: (consonant class × liveness × vowel length × tone
//! mark) → tone.
//!
//! The grid ships as a versioned TSV data table rather than code constants
//! so it can be audited and patched without recompiling. A table must cover
//! all 60 cells exactly once; lookups are then total. Cells that standard
//! orthography never uses (mai tri and mai chattawa outside mid class) carry
//! the de facto colloquial readings: mai tri reads high, mai chattawa reads
//! rising.

use std::path::Path;

use once_cell::sync::Lazy;

use super::consonants::ConsonantClass;
use super::syllable::{Liveness, SyllableStructure, ToneMark};
use super::{PhonologyError, Tone};

pub const TONE_RULES_HEADER: &str = "thaifront-tone-rules v1";

const DEFAULT_TABLE_TSV: &str = include_str!("../../data/tone_rules.tsv");

static DEFAULT_TABLE: Lazy<ToneRuleTable> = Lazy::new(|| {
    ToneRuleTable::parse(DEFAULT_TABLE_TSV).expect("embedded tone rule table is valid")
});

fn class_index(c: ConsonantClass) -> usize {
    match c {
        ConsonantClass::High => 0,
        ConsonantClass::Mid => 1,
        ConsonantClass::Low => 2,
    }
}

fn liveness_index(l: Liveness) -> usize {
    match l {
        Liveness::Live => 0,
        Liveness::Dead => 1,
    }
}

fn mark_index(m: ToneMark) -> usize {
    match m {
        ToneMark::None => 0,
        ToneMark::MaiEk => 1,
        ToneMark::MaiTho => 2,
        ToneMark::MaiTri => 3,
        ToneMark::MaiChattawa => 4,
    }
}

/// A complete tone grid. `[class][liveness][length][mark]`, length index 0
/// is short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToneRuleTable {
    cells: [[[[Tone; 5]; 2]; 2]; 3],
}

impl ToneRuleTable {
    /// Grid lookup; total by construction.
    pub fn tone(
        &self,
        class: ConsonantClass,
        liveness: Liveness,
        long_vowel: bool,
        mark: ToneMark,
    ) -> Tone {
        self.cells[class_index(class)][liveness_index(liveness)][usize::from(long_vowel)]
            [mark_index(mark)]
    }

    /// The table embedded in the library.
    pub fn builtin() -> &'static ToneRuleTable {
        &DEFAULT_TABLE
    }

    /// Parses the versioned TSV form, requiring every one of the 60 cells
    /// exactly once.
    pub fn parse(text: &str) -> Result<ToneRuleTable, PhonologyError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == TONE_RULES_HEADER => {}
            other => {
                return Err(PhonologyError::InvalidRuleTable(format!(
                    "expected header `{TONE_RULES_HEADER}`, found `{}`",
                    other.unwrap_or("")
                )))
            }
        }
        let mut cells = [[[[None::<Tone>; 5]; 2]; 2]; 3];
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(PhonologyError::InvalidRuleTable(format!(
                    "line {lineno}: expected 5 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let class = ConsonantClass::from_name(fields[0]).ok_or_else(|| {
                PhonologyError::InvalidRuleTable(format!(
                    "line {lineno}: unknown class `{}`",
                    fields[0]
                ))
            })?;
            let liveness = Liveness::from_name(fields[1]).ok_or_else(|| {
                PhonologyError::InvalidRuleTable(format!(
                    "line {lineno}: unknown liveness `{}`",
                    fields[1]
                ))
            })?;
            let long = match fields[2] {
                "short" => false,
                "long" => true,
                other => {
                    return Err(PhonologyError::InvalidRuleTable(format!(
                        "line {lineno}: unknown length `{other}`"
                    )))
                }
            };
            let mark = ToneMark::from_name(fields[3]).ok_or_else(|| {
                PhonologyError::InvalidRuleTable(format!(
                    "line {lineno}: unknown tone mark `{}`",
                    fields[3]
                ))
            })?;
            let tone = Tone::from_name(fields[4]).ok_or_else(|| {
                PhonologyError::InvalidRuleTable(format!(
                    "line {lineno}: unknown tone `{}`",
                    fields[4]
                ))
            })?;
            let cell = &mut cells[class_index(class)][liveness_index(liveness)]
                [usize::from(long)][mark_index(mark)];
            if cell.is_some() {
                return Err(PhonologyError::InvalidRuleTable(format!(
                    "line {lineno}: duplicate cell ({} {} {} {})",
                    fields[0], fields[1], fields[2], fields[3]
                )));
            }
            *cell = Some(tone);
        }
        let mut out = [[[[Tone::Mid; 5]; 2]; 2]; 3];
        for class in ConsonantClass::ALL {
            for liveness in Liveness::ALL {
                for long in [false, true] {
                    for mark in ToneMark::ALL {
                        let ci = class_index(class);
                        let li = liveness_index(liveness);
                        let gi = usize::from(long);
                        let mi = mark_index(mark);
                        out[ci][li][gi][mi] = cells[ci][li][gi][mi].ok_or_else(|| {
                            PhonologyError::InvalidRuleTable(format!(
                                "missing cell ({} {} {} {})",
                                class.name(),
                                liveness.name(),
                                if long { "long" } else { "short" },
                                mark.name()
                            ))
                        })?;
                    }
                }
            }
        }
        Ok(ToneRuleTable { cells: out })
    }

    pub fn load(path: &Path) -> Result<ToneRuleTable, PhonologyError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            PhonologyError::InvalidRuleTable(format!("cannot read {}: {e}", path.display()))
        })?;
        ToneRuleTable::parse(&text)
    }

    /// Canonical TSV form: header, then rows in (class, liveness, length,
    /// mark) order.
    pub fn render(&self) -> String {
        let mut out = String::from(TONE_RULES_HEADER);
        out.push('\n');
        for class in ConsonantClass::ALL {
            for liveness in Liveness::ALL {
                for long in [false, true] {
                    for mark in ToneMark::ALL {
                        let tone = self.tone(class, liveness, long, mark);
                        out.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            class.name(),
                            liveness.name(),
                            if long { "long" } else { "short" },
                            mark.name(),
                            tone.name()
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Tone of a parsed syllable under the built-in grid.
pub fn determine_tone(s: &SyllableStructure) -> Tone {
    determine_tone_with(s, ToneRuleTable::builtin())
}

/// Tone of a parsed syllable under an explicit grid.
pub fn determine_tone_with(s: &SyllableStructure, table: &ToneRuleTable) -> Tone {
    table.tone(s.onset_class, s.liveness(), s.long_vowel, s.tone_mark)
}
