//! Word and character error rates via dynamic-programming edit distance.

use unicode_segmentation::UnicodeSegmentation;

use super::MetricsError;

/// Counts of the edit operations turning the reference into the hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct EditOps {
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
}

impl EditOps {
    pub fn distance(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }
}

/// Levenshtein alignment with a deterministic backtrace: on cost ties a
/// substitution (diagonal move) is preferred over an insertion, which is
/// preferred over a deletion.
fn edit_ops<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> EditOps {
    let m = reference.len();
    let n = hypothesis.len();
    let mut dist = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in dist.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=n {
        dist[0][j] = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub_cost = usize::from(reference[i - 1] != hypothesis[j - 1]);
            dist[i][j] = (dist[i - 1][j - 1] + sub_cost)
                .min(dist[i][j - 1] + 1)
                .min(dist[i - 1][j] + 1);
        }
    }
    let mut ops = EditOps { substitutions: 0, insertions: 0, deletions: 0 };
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let sub_cost = usize::from(reference[i - 1] != hypothesis[j - 1]);
            if dist[i][j] == dist[i - 1][j - 1] + sub_cost {
                ops.substitutions += sub_cost;
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if j > 0 && dist[i][j] == dist[i][j - 1] + 1 {
            ops.insertions += 1;
            j -= 1;
        } else {
            ops.deletions += 1;
            i -= 1;
        }
    }
    ops
}

/// Word error rate: `(S + I + D) / len(reference)`. The reference must be
/// non-empty.
pub fn wer<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Result<(f64, EditOps), MetricsError> {
    if reference.is_empty() {
        return Err(MetricsError::EmptyReference);
    }
    let ops = edit_ops(reference, hypothesis);
    Ok((ops.distance() as f64 / reference.len() as f64, ops))
}

/// Character error rate over extended grapheme clusters, so Thai combining
/// marks count with their base consonant.
pub fn cer(reference: &str, hypothesis: &str) -> Result<(f64, EditOps), MetricsError> {
    let ref_clusters: Vec<&str> = reference.graphemes(true).collect();
    let hyp_clusters: Vec<&str> = hypothesis.graphemes(true).collect();
    wer(&ref_clusters, &hyp_clusters)
}
