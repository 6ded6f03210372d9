//! Grapheme-to-phoneme conversion.
//!
//! Resolution order: exception dictionary, then the rule engine (syllable
//! parser + tone grid), then a pluggable fallback predictor. Fallbacks are
//! trait objects selected by name from [`FallbackRegistry`], so a learned
//! disambiguator can be swapped in behind the same interface.

use std::collections::BTreeMap;

use super::syllable::parse_syllables;
use super::tone_rules::{determine_tone_with, ToneRuleTable};
use super::{PhonemeToneSequence, PhonologyError, ToneSyllable};
use crate::corpus::PhonemeToneEntry;

/// Last-resort predictor consulted when neither the exception dictionary nor
/// the rule engine resolves a word.
pub trait FallbackPredictor: Send + Sync {
    fn name(&self) -> &str;
    fn predict(&self, word: &str) -> Option<PhonemeToneSequence>;
}

/// Fallback that never answers; unresolved words become errors.
pub struct NoFallback;

impl FallbackPredictor for NoFallback {
    fn name(&self) -> &str {
        "none"
    }

    fn predict(&self, _word: &str) -> Option<PhonemeToneSequence> {
        None
    }
}

/// Serves the most frequent pronunciation a word has in the phoneme-tone
/// annotation list. Ties go to the earliest entry.
pub struct MostFrequentFallback {
    map: BTreeMap<String, PhonemeToneSequence>,
}

impl MostFrequentFallback {
    pub fn from_annotations(entries: &[PhonemeToneEntry]) -> Self {
        let mut counts: BTreeMap<&str, Vec<(&PhonemeToneSequence, usize, usize)>> =
            BTreeMap::new();
        for (idx, entry) in entries.iter().enumerate() {
            let variants = counts.entry(entry.word.as_str()).or_default();
            match variants.iter_mut().find(|(seq, ..)| **seq == entry.pronunciation) {
                Some((_, count, _)) => *count += 1,
                None => variants.push((&entry.pronunciation, 1, idx)),
            }
        }
        let map = counts
            .into_iter()
            .map(|(word, variants)| {
                let best = variants
                    .into_iter()
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
                    .expect("word has at least one variant");
                (word.to_string(), best.0.clone())
            })
            .collect();
        MostFrequentFallback { map }
    }
}

impl FallbackPredictor for MostFrequentFallback {
    fn name(&self) -> &str {
        "most-frequent"
    }

    fn predict(&self, word: &str) -> Option<PhonemeToneSequence> {
        self.map.get(word).cloned()
    }
}

type FallbackBuilder = Box<
    dyn Fn(Option<&[PhonemeToneEntry]>) -> Result<Box<dyn FallbackPredictor>, PhonologyError>
        + Send
        + Sync,
>;

/// Name-keyed registry of fallback predictor builders.
pub struct FallbackRegistry {
    builders: BTreeMap<String, FallbackBuilder>,
}

impl FallbackRegistry {
    /// Registry with the built-in strategies `none` and `most-frequent`.
    pub fn builtin() -> Self {
        let mut reg = FallbackRegistry { builders: BTreeMap::new() };
        reg.register("none", Box::new(|_| Ok(Box::new(NoFallback))));
        reg.register(
            "most-frequent",
            Box::new(|annotations| match annotations {
                Some(entries) => {
                    Ok(Box::new(MostFrequentFallback::from_annotations(entries)) as Box<_>)
                }
                None => Err(PhonologyError::InvalidSequence(
                    "fallback `most-frequent` requires a phoneme-tone annotation file".into(),
                )),
            }),
        );
        reg
    }

    pub fn register(&mut self, name: &str, builder: FallbackBuilder) {
        self.builders.insert(name.to_string(), builder);
    }

    pub fn names(&self) -> Vec<&str> {
        self.builders.keys().map(String::as_str).collect()
    }

    pub fn build(
        &self,
        name: &str,
        annotations: Option<&[PhonemeToneEntry]>,
    ) -> Result<Box<dyn FallbackPredictor>, PhonologyError> {
        let builder = self.builders.get(name).ok_or_else(|| {
            PhonologyError::InvalidSequence(format!(
                "unknown fallback `{name}`; available: {}",
                self.names().join(", ")
            ))
        })?;
        builder(annotations)
    }
}

/// Convenience constructor for the built-in registry.
pub fn fallback_registry() -> FallbackRegistry {
    FallbackRegistry::builtin()
}

/// Pure rule path: syllable parse, phoneme mapping, tone grid.
pub fn g2p_rules(
    word: &str,
    table: &ToneRuleTable,
) -> Result<PhonemeToneSequence, PhonologyError> {
    let sylls = parse_syllables(word)?;
    let syllables = sylls
        .iter()
        .map(|s| ToneSyllable::new(s.phonemes(), determine_tone_with(s, table)))
        .collect();
    PhonemeToneSequence::new(syllables)
}

/// Exception dictionary + rule engine + fallback, bundled.
pub struct G2pEngine {
    exceptions: BTreeMap<String, PhonemeToneSequence>,
    rules: ToneRuleTable,
    fallback: Box<dyn FallbackPredictor>,
}

impl G2pEngine {
    pub fn new(
        exceptions: BTreeMap<String, PhonemeToneSequence>,
        rules: ToneRuleTable,
        fallback: Box<dyn FallbackPredictor>,
    ) -> Self {
        G2pEngine { exceptions, rules, fallback }
    }

    /// Engine with no exceptions, the built-in grid, and no fallback.
    pub fn rules_only() -> Self {
        G2pEngine::new(BTreeMap::new(), ToneRuleTable::builtin().clone(), Box::new(NoFallback))
    }

    /// Builds the exception map from annotation entries; the first entry for
    /// a word wins.
    pub fn exceptions_from_entries(entries: &[PhonemeToneEntry]) -> BTreeMap<String, PhonemeToneSequence> {
        let mut map = BTreeMap::new();
        for entry in entries {
            map.entry(entry.word.clone()).or_insert_with(|| entry.pronunciation.clone());
        }
        map
    }

    pub fn fallback_name(&self) -> &str {
        self.fallback.name()
    }

    pub fn rules(&self) -> &ToneRuleTable {
        &self.rules
    }

    /// Converts one word. Exception hits win outright; rule failures are
    /// delegated to the fallback; a miss everywhere is an error.
    pub fn convert(&self, word: &str) -> Result<PhonemeToneSequence, PhonologyError> {
        if word.is_empty() {
            return Err(PhonologyError::EmptyWord);
        }
        if let Some(seq) = self.exceptions.get(word) {
            return Ok(seq.clone());
        }
        match g2p_rules(word, &self.rules) {
            Ok(seq) => Ok(seq),
            Err(PhonologyError::Unparseable { .. }) => self
                .fallback
                .predict(word)
                .ok_or_else(|| PhonologyError::UnresolvableWord(word.to_string())),
            Err(other) => Err(other),
        }
    }
}
