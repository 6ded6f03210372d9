//! Prosodic pause prediction behind a pluggable scorer interface.
//!
//! A [`PauseScorer`] assigns a probability to every inter-token gap of a
//! segmented sentence; a pause is inserted where the score reaches the
//! scorer's threshold. The built-in baseline estimates gap probabilities by
//! smoothed counts over windowed token signatures; a fine-tuned language
//! model can be swapped in behind the same trait. Scorers are selected by
//! name through [`PauseModelRegistry`], which also dispatches model-file
//! loading on the file's `kind` field.
//!
//! The baseline scores sentences of any length in one pass; there is no
//! input chunking or truncation.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::corpus::PauseAnnotatedSentence;
use crate::metrics::{set_prf, PrecisionRecall};
use crate::segment::{segment, Segmentation, TrieIndex};

pub const PAUSE_MODEL_HEADER: &str = "thaifront-pause-model v1";
pub const DEFAULT_WINDOW: usize = 2;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Class symbol substituted for out-of-lexicon tokens in signatures, keeping
/// the signature space bounded.
pub const OOV_SYMBOL: &str = "<OOV>";

#[derive(Debug, Error)]
pub enum PauseError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("window must be at least 1")]
    ZeroWindow,
    #[error("threshold {0} outside [0, 1]")]
    BadThreshold(f64),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("raw texts differ: `{gold}` vs `{predicted}`")]
    TextMismatch { gold: String, predicted: String },
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
    #[error("invalid pause model: {0}")]
    BadModel(String),
}

/// Scores inter-token gaps of a segmented sentence. `gap` is the boundary
/// between `tokens[gap]` and `tokens[gap + 1]`.
pub trait PauseScorer: Send + Sync {
    fn kind(&self) -> &'static str;
    /// Probability of a pause at the gap, in [0, 1].
    fn score_gap(&self, segmentation: &Segmentation, gap: usize) -> f64;
    /// Insertion threshold.
    fn threshold(&self) -> f64;
    /// Serialized flat key-value form, parseable by the registry.
    fn render(&self) -> String;
}

/// Smoothed count-based gap model over windowed token signatures.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramPauseModel {
    window: usize,
    threshold: f64,
    /// Corpus-wide pause rate; the score of unseen signatures.
    prior: f64,
    scores: BTreeMap<String, f64>,
}

impl NgramPauseModel {
    pub fn new(
        window: usize,
        threshold: f64,
        prior: f64,
        scores: BTreeMap<String, f64>,
    ) -> Result<Self, PauseError> {
        if window == 0 {
            return Err(PauseError::ZeroWindow);
        }
        if !(0.0..=1.0).contains(&threshold) {
            return Err(PauseError::BadThreshold(threshold));
        }
        for &p in std::iter::once(&prior).chain(scores.values()) {
            if !(0.0..=1.0).contains(&p) {
                return Err(PauseError::BadProbability(p));
            }
        }
        Ok(NgramPauseModel { window, threshold, prior, scores })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    /// Same model with a different stored decision threshold, still in
    /// [0, 1]. Unreachable thresholds (to suppress insertion entirely) go
    /// through [`override_threshold`] instead, which is not serialized.
    pub fn with_threshold(mut self, threshold: f64) -> Result<Self, PauseError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(PauseError::BadThreshold(threshold));
        }
        self.threshold = threshold;
        Ok(self)
    }

    /// Probability for an explicit signature; the prior for unseen ones.
    pub fn score_signature(&self, signature: &str) -> f64 {
        self.scores.get(signature).copied().unwrap_or(self.prior)
    }
}

impl PauseScorer for NgramPauseModel {
    fn kind(&self) -> &'static str {
        "ngram"
    }

    fn score_gap(&self, segmentation: &Segmentation, gap: usize) -> f64 {
        self.score_signature(&gap_signature(segmentation, gap, self.window))
    }

    fn threshold(&self) -> f64 {
        self.threshold
    }

    fn render(&self) -> String {
        let mut out = String::from(PAUSE_MODEL_HEADER);
        out.push('\n');
        out.push_str("kind\tngram\n");
        out.push_str(&format!("window\t{}\n", self.window));
        out.push_str(&format!("threshold\t{}\n", self.threshold));
        out.push_str(&format!("prior\t{}\n", self.prior));
        for (sig, score) in &self.scores {
            out.push_str(&format!("score\t{}\t{}\n", escape(sig), score));
        }
        out
    }
}

/// Decorator replacing a scorer's stored threshold.
struct ThresholdOverride {
    inner: Box<dyn PauseScorer>,
    threshold: f64,
}

impl PauseScorer for ThresholdOverride {
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    fn score_gap(&self, segmentation: &Segmentation, gap: usize) -> f64 {
        self.inner.score_gap(segmentation, gap)
    }

    fn threshold(&self) -> f64 {
        self.threshold
    }

    fn render(&self) -> String {
        self.inner.render()
    }
}

/// Wraps a scorer so it decides at `threshold` instead of its stored one.
/// Any finite value is allowed, so values above 1 make insertion
/// unreachable; the override is prediction-time only and never serialized.
pub fn override_threshold(inner: Box<dyn PauseScorer>, threshold: f64) -> Box<dyn PauseScorer> {
    Box::new(ThresholdOverride { inner, threshold })
}

/// Scorer that never inserts a pause; the ablation baseline.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoPauseModel;

impl PauseScorer for NoPauseModel {
    fn kind(&self) -> &'static str {
        "none"
    }

    fn score_gap(&self, _segmentation: &Segmentation, _gap: usize) -> f64 {
        0.0
    }

    fn threshold(&self) -> f64 {
        1.0
    }

    fn render(&self) -> String {
        format!("{PAUSE_MODEL_HEADER}\nkind\tnone\n")
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, PauseError> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(PauseError::BadModel(format!(
                    "bad escape `\\{}`",
                    other.map(String::from).unwrap_or_default()
                )))
            }
        }
    }
    Ok(out)
}

/// Signature of a gap: the window of tokens on each side, OOV tokens
/// replaced by [`OOV_SYMBOL`], left and right parts joined around a gap
/// marker.
pub fn gap_signature(segmentation: &Segmentation, gap: usize, window: usize) -> String {
    let token_at = |i: usize| -> &str {
        if segmentation.oov_flags[i] {
            OOV_SYMBOL
        } else {
            segmentation.tokens[i].as_str()
        }
    };
    let left_start = (gap + 1).saturating_sub(window);
    let left: Vec<&str> = (left_start..=gap).map(token_at).collect();
    let right_end = (gap + 1 + window).min(segmentation.tokens.len());
    let right: Vec<&str> = (gap + 1..right_end).map(token_at).collect();
    format!("{}\u{1E}{}", left.join("\u{1F}"), right.join("\u{1F}"))
}

/// Maps pause character offsets to gap indices of a segmentation. Offsets
/// that do not fall on a token boundary are dropped (annotation and
/// segmentation disagree there).
fn offsets_to_gaps(segmentation: &Segmentation, offsets: &[usize]) -> Vec<usize> {
    let mut boundary_of = BTreeMap::new();
    let mut pos = 0usize;
    for (i, token) in segmentation.tokens.iter().enumerate() {
        pos += token.chars().count();
        if i + 1 < segmentation.tokens.len() {
            boundary_of.insert(pos, i);
        }
    }
    offsets.iter().filter_map(|o| boundary_of.get(o).copied()).collect()
}

/// Boundary character offset after `tokens[gap]`.
fn gap_offset(segmentation: &Segmentation, gap: usize) -> usize {
    segmentation.tokens[..=gap].iter().map(|t| t.chars().count()).sum()
}

/// Estimates P(pause | gap signature) by add-one-smoothed counts:
/// `(pauses + prior) / (seen + 1)`, where the prior is the corpus-wide pause
/// rate. Unseen signatures therefore score exactly the prior.
pub fn train_pause_model(
    corpus: &[PauseAnnotatedSentence],
    trie: &TrieIndex,
    window: usize,
) -> Result<NgramPauseModel, PauseError> {
    if corpus.is_empty() {
        return Err(PauseError::EmptyCorpus);
    }
    if window == 0 {
        return Err(PauseError::ZeroWindow);
    }
    let mut counts: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    let mut total_gaps = 0u64;
    let mut total_pauses = 0u64;
    for sentence in corpus {
        let seg = segment(sentence.raw_text(), trie);
        if seg.tokens.len() < 2 {
            continue;
        }
        let gaps: std::collections::BTreeSet<usize> =
            offsets_to_gaps(&seg, sentence.pause_offsets()).into_iter().collect();
        for gap in 0..seg.tokens.len() - 1 {
            let sig = gap_signature(&seg, gap, window);
            let entry = counts.entry(sig).or_insert((0, 0));
            entry.1 += 1;
            total_gaps += 1;
            if gaps.contains(&gap) {
                entry.0 += 1;
                total_pauses += 1;
            }
        }
    }
    let prior = if total_gaps == 0 { 0.0 } else { total_pauses as f64 / total_gaps as f64 };
    let scores = counts
        .into_iter()
        .map(|(sig, (pauses, seen))| (sig, (pauses as f64 + prior) / (seen as f64 + 1.0)))
        .collect();
    NgramPauseModel::new(window, DEFAULT_THRESHOLD, prior, scores)
}

/// Segments the text, scores every interior gap, and inserts a pause where
/// the score reaches the model threshold. Stripping tags from the result
/// recovers the text exactly; offsets are never 0 or the text length.
pub fn predict_pauses(
    text: &str,
    model: &dyn PauseScorer,
    trie: &TrieIndex,
) -> PauseAnnotatedSentence {
    let seg = segment(text, trie);
    let mut offsets = Vec::new();
    if seg.tokens.len() >= 2 {
        for gap in 0..seg.tokens.len() - 1 {
            if model.score_gap(&seg, gap) >= model.threshold() {
                offsets.push(gap_offset(&seg, gap));
            }
        }
    }
    PauseAnnotatedSentence::new(text.to_string(), offsets)
        .expect("gap offsets are interior and strictly increasing")
}

/// Set precision/recall/F1 over pause offsets. Both sentences must carry the
/// same raw text.
pub fn pause_gap_f1(
    gold: &PauseAnnotatedSentence,
    predicted: &PauseAnnotatedSentence,
) -> Result<PrecisionRecall, PauseError> {
    if gold.raw_text() != predicted.raw_text() {
        return Err(PauseError::TextMismatch {
            gold: gold.raw_text().to_string(),
            predicted: predicted.raw_text().to_string(),
        });
    }
    let gold_set = gold.pause_offsets().iter().copied().collect();
    let pred_set = predicted.pause_offsets().iter().copied().collect();
    Ok(set_prf(&gold_set, &pred_set))
}

type PauseModelLoader =
    Box<dyn Fn(&ModelFields) -> Result<Box<dyn PauseScorer>, PauseError> + Send + Sync>;

/// Parsed key-value fields of a serialized pause model.
pub struct ModelFields {
    pub fields: BTreeMap<String, String>,
    pub scores: BTreeMap<String, f64>,
}

impl ModelFields {
    fn required(&self, key: &str) -> Result<&str, PauseError> {
        self.fields
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| PauseError::BadModel(format!("missing field `{key}`")))
    }

    fn parse_f64(&self, key: &str) -> Result<f64, PauseError> {
        self.required(key)?
            .parse()
            .map_err(|_| PauseError::BadModel(format!("field `{key}` is not a number")))
    }

    fn parse_usize(&self, key: &str) -> Result<usize, PauseError> {
        self.required(key)?
            .parse()
            .map_err(|_| PauseError::BadModel(format!("field `{key}` is not an integer")))
    }
}

/// Name-keyed registry of pause model kinds. Loading a model file dispatches
/// on its `kind` field.
pub struct PauseModelRegistry {
    loaders: BTreeMap<String, PauseModelLoader>,
}

impl PauseModelRegistry {
    /// Registry with the built-in kinds `ngram` and `none`.
    pub fn builtin() -> Self {
        let mut reg = PauseModelRegistry { loaders: BTreeMap::new() };
        reg.register(
            "ngram",
            Box::new(|fields| {
                let model = NgramPauseModel::new(
                    fields.parse_usize("window")?,
                    fields.parse_f64("threshold")?,
                    fields.parse_f64("prior")?,
                    fields.scores.clone(),
                )?;
                Ok(Box::new(model) as Box<dyn PauseScorer>)
            }),
        );
        reg.register("none", Box::new(|_| Ok(Box::new(NoPauseModel) as Box<dyn PauseScorer>)));
        reg
    }

    pub fn register(&mut self, kind: &str, loader: PauseModelLoader) {
        self.loaders.insert(kind.to_string(), loader);
    }

    pub fn kinds(&self) -> Vec<&str> {
        self.loaders.keys().map(String::as_str).collect()
    }

    /// Instantiates a scorer from its serialized text form.
    pub fn parse(&self, text: &str) -> Result<Box<dyn PauseScorer>, PauseError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == PAUSE_MODEL_HEADER => {}
            other => {
                return Err(PauseError::BadModel(format!(
                    "expected header `{PAUSE_MODEL_HEADER}`, found `{}`",
                    other.unwrap_or("")
                )))
            }
        }
        let mut fields = BTreeMap::new();
        let mut scores = BTreeMap::new();
        for line in lines {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            match parts.as_slice() {
                ["score", sig, value] => {
                    let p: f64 = value
                        .parse()
                        .map_err(|_| PauseError::BadModel(format!("bad score `{value}`")))?;
                    scores.insert(unescape(sig)?, p);
                }
                [key, value] => {
                    fields.insert(key.to_string(), value.to_string());
                }
                _ => return Err(PauseError::BadModel(format!("unparseable line `{line}`"))),
            }
        }
        let parsed = ModelFields { fields, scores };
        let kind = parsed.required("kind")?.to_string();
        let loader = self.loaders.get(&kind).ok_or_else(|| {
            PauseError::BadModel(format!(
                "unknown model kind `{kind}`; available: {}",
                self.kinds().join(", ")
            ))
        })?;
        loader(&parsed)
    }

    pub fn load(&self, path: &Path) -> Result<Box<dyn PauseScorer>, PauseError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PauseError::Read { path: path.display().to_string(), source })?;
        self.parse(&text)
    }
}

pub fn save_pause_model(model: &dyn PauseScorer, path: &Path) -> Result<(), PauseError> {
    std::fs::write(path, model.render())
        .map_err(|source| PauseError::Write { path: path.display().to_string(), source })
}
