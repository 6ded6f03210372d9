//! Objective evaluation metrics: WER/CER, STOI, cosine similarity, and
//! segmentation boundary F1.

mod edit;
mod stoi;

pub use edit::{cer, wer, EditOps};
pub use stoi::{stoi, StoiConfig};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::audio::StyleVector;
use crate::segment::Segmentation;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("reference is empty")]
    EmptyReference,
    #[error("signals differ: {0}")]
    SignalMismatch(String),
    #[error("signal too short: {0}")]
    SignalTooShort(String),
    #[error("sample rate {0} below the 10 kHz minimum")]
    SampleRateTooLow(u32),
    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("segmentations cover different text: `{0}` vs `{1}`")]
    TextMismatch(String, String),
}

/// Precision, recall, and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Set precision/recall/F1. An empty prediction has precision 1 (no false
/// positives), an empty gold set has recall 1, so empty-vs-empty is perfect.
pub fn set_prf(gold: &BTreeSet<usize>, predicted: &BTreeSet<usize>) -> PrecisionRecall {
    let hits = gold.intersection(predicted).count() as f64;
    let precision = if predicted.is_empty() { 1.0 } else { hits / predicted.len() as f64 };
    let recall = if gold.is_empty() { 1.0 } else { hits / gold.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    PrecisionRecall { precision, recall, f1 }
}

/// Cosine similarity of two style vectors, in [-1, 1].
pub fn cosine_sim(a: &StyleVector, b: &StyleVector) -> Result<f64, MetricsError> {
    if a.values.len() != b.values.len() {
        return Err(MetricsError::DimensionMismatch(a.values.len(), b.values.len()));
    }
    let dot: f64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum();
    let norm_a: f64 = a.values.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b: f64 = b.values.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(MetricsError::ZeroVector);
    }
    Ok((dot / (norm_a * norm_b)).clamp(-1.0, 1.0))
}

/// Boundary positions of a segmentation: cumulative character counts of all
/// tokens except the last.
fn boundaries(seg: &Segmentation) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut pos = 0usize;
    for (i, token) in seg.tokens.iter().enumerate() {
        pos += token.chars().count();
        if i + 1 < seg.tokens.len() {
            out.insert(pos);
        }
    }
    out
}

/// Precision/recall/F1 over inter-character boundary positions. Both
/// segmentations must cover the same text.
pub fn segmentation_f1(
    gold: &Segmentation,
    predicted: &Segmentation,
) -> Result<PrecisionRecall, MetricsError> {
    let gold_text = gold.concat();
    let pred_text = predicted.concat();
    if gold_text != pred_text {
        return Err(MetricsError::TextMismatch(gold_text, pred_text));
    }
    Ok(set_prf(&boundaries(gold), &boundaries(predicted)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(tokens: &[&str]) -> Segmentation {
        Segmentation {
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            oov_flags: vec![false; tokens.len()],
        }
    }

    fn vector(values: &[f64]) -> StyleVector {
        StyleVector { values: values.to_vec() }
    }

    #[test]
    fn identical_vectors_have_similarity_one() {
        let a = vector(&[0.3, -1.2, 0.5]);
        assert!((cosine_sim(&a, &a).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_unit_vectors_have_similarity_zero() {
        let a = vector(&[1.0, 0.0]);
        let b = vector(&[0.0, 1.0]);
        assert_eq!(cosine_sim(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn zero_vector_is_rejected() {
        let a = vector(&[0.0, 0.0]);
        let b = vector(&[1.0, 0.0]);
        assert!(matches!(cosine_sim(&a, &b), Err(MetricsError::ZeroVector)));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = vector(&[1.0]);
        let b = vector(&[1.0, 0.0]);
        assert!(cosine_sim(&a, &b).is_err());
    }

    #[test]
    fn identical_segmentations_score_perfect() {
        let a = seg(&["กา", "มา"]);
        let prf = segmentation_f1(&a, &a.clone()).unwrap();
        assert_eq!((prf.precision, prf.recall, prf.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn merging_tokens_keeps_precision_drops_recall() {
        let gold = seg(&["กา", "มา", "ดี"]);
        let pred = seg(&["กามา", "ดี"]);
        let prf = segmentation_f1(&gold, &pred).unwrap();
        assert_eq!(prf.precision, 1.0);
        assert!(prf.recall < 1.0);
    }

    #[test]
    fn differing_text_is_rejected() {
        let gold = seg(&["กา"]);
        let pred = seg(&["มา"]);
        assert!(segmentation_f1(&gold, &pred).is_err());
    }

    #[test]
    fn empty_sets_are_perfect() {
        let prf = set_prf(&BTreeSet::new(), &BTreeSet::new());
        assert_eq!((prf.precision, prf.recall, prf.f1), (1.0, 1.0, 1.0));
    }
}
