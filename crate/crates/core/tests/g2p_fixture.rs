//! Rule-engine validation against the hand-curated word suite. Every entry
//! was transcribed from standard Thai pronunciation references; the rule
//! path must reproduce all of them without exceptions or fallbacks.

use thaifront_core::corpus::parse_phoneme_tone_annotations;
use thaifront_core::phonology::{g2p_rules, parse_syllables, ToneRuleTable};

const FIXTURE: &str = include_str!("fixtures/g2p_words.tsv");

fn fixture_entries() -> Vec<thaifront_core::corpus::PhonemeToneEntry> {
    parse_phoneme_tone_annotations(FIXTURE, "g2p_words.tsv").expect("fixture parses")
}

#[test]
fn fixture_covers_a_meaningful_suite() {
    let entries = fixture_entries();
    assert!(entries.len() >= 50, "only {} fixture words", entries.len());
}

#[test]
fn rules_reproduce_every_fixture_word() {
    let table = ToneRuleTable::builtin();
    let mut failures = Vec::new();
    for entry in fixture_entries() {
        match g2p_rules(&entry.word, table) {
            Ok(got) if got == entry.pronunciation => {}
            Ok(got) => failures.push(format!(
                "{}: expected {:?}, got {:?}",
                entry.word, entry.pronunciation.syllables, got.syllables
            )),
            Err(e) => failures.push(format!("{}: {e}", entry.word)),
        }
    }
    assert!(failures.is_empty(), "{} mismatches:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn parse_is_lossless_over_the_fixture_suite() {
    for entry in fixture_entries() {
        let sylls = parse_syllables(&entry.word).expect("fixture word parses");
        let joined: String = sylls.iter().map(|s| s.surface.as_str()).collect();
        assert_eq!(joined, entry.word, "surface round-trip for {}", entry.word);
    }
}

#[test]
fn g2p_is_deterministic_across_threads() {
    let entries = fixture_entries();
    let expected: Vec<_> = entries
        .iter()
        .map(|e| g2p_rules(&e.word, ToneRuleTable::builtin()).unwrap())
        .collect();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let entries = entries.clone();
            std::thread::spawn(move || {
                entries
                    .iter()
                    .map(|e| g2p_rules(&e.word, ToneRuleTable::builtin()).unwrap())
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    for handle in handles {
        assert_eq!(handle.join().unwrap(), expected);
    }
}

#[test]
fn syllables_differing_only_in_tone_mark_share_phonemes() {
    // Generic minimal-pair property over the fixture: group words whose
    // surface differs only by tone marks and require identical phonemes.
    let strip_marks = |word: &str| -> String {
        word.chars().filter(|c| !('\u{0E48}'..='\u{0E4B}').contains(c)).collect()
    };
    let entries = fixture_entries();
    let mut by_base: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
    for (i, entry) in entries.iter().enumerate() {
        by_base.entry(strip_marks(&entry.word)).or_default().push(i);
    }
    let mut pairs = 0;
    for (_, group) in by_base {
        for window in group.windows(2) {
            let a = &entries[window[0]].pronunciation;
            let b = &entries[window[1]].pronunciation;
            let phonemes = |s: &thaifront_core::phonology::PhonemeToneSequence| {
                s.syllables.iter().map(|syl| syl.phonemes.clone()).collect::<Vec<_>>()
            };
            assert_eq!(phonemes(a), phonemes(b), "phonemes differ within a tone minimal pair");
            pairs += 1;
        }
    }
    assert!(pairs >= 3, "fixture should contain minimal pairs, found {pairs}");
}
