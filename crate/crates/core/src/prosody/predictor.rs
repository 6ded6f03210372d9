//! Contextual token representations and the three affine prediction heads.

use std::io::Read;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::ProsodyError;
use crate::audio::StyleVector;
use crate::encoding::EncodedSequence;

/// Per-token feature matrix. Row `i` is the one-hot of token `i` followed by
/// the mean one-hot over the token's context window, so it depends only on
/// `ids[i - window ..= i + window]` (clamped at the edges). With window 0
/// the second half is all zero and the row is the pure one-hot of the
/// center token.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextualRepresentation {
    pub rows: Vec<Vec<f64>>,
    pub feat_dim: usize,
}

impl ContextualRepresentation {
    pub fn seq_len(&self) -> usize {
        self.rows.len()
    }
}

/// Deterministic context-window featurizer standing in for a learned
/// contextual encoder.
pub fn contextual_representation(
    encoded: &EncodedSequence,
    vocab_size: usize,
    window: usize,
) -> ContextualRepresentation {
    let feat_dim = 2 * vocab_size;
    let n = encoded.ids.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![0.0; feat_dim];
        let center = encoded.ids[i] as usize;
        if center < vocab_size {
            row[center] = 1.0;
        }
        if window > 0 {
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(n - 1);
            let count = (hi - lo + 1) as f64;
            for &id in &encoded.ids[lo..=hi] {
                let id = id as usize;
                if id < vocab_size {
                    row[vocab_size + id] += 1.0 / count;
                }
            }
        }
        rows.push(row);
    }
    ContextualRepresentation { rows, feat_dim }
}

/// Deterministic seeded embedding table; every token id has a finite row.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeEmbedding {
    rows: Vec<Vec<f64>>,
    pub dim: usize,
}

impl PhonemeEmbedding {
    pub fn new(vocab_size: usize, dim: usize, seed: u64) -> PhonemeEmbedding {
        let mut rng = StdRng::seed_from_u64(seed);
        let rows = (0..vocab_size)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        PhonemeEmbedding { rows, dim }
    }

    pub fn lookup(&self, id: u32) -> Option<&[f64]> {
        self.rows.get(id as usize).map(Vec::as_slice)
    }

    pub fn vocab_size(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// Softplus keeps durations non-negative.
    Softplus,
    Identity,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Softplus => softplus(z),
            Activation::Identity => z,
        }
    }

    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Softplus => sigmoid(z),
            Activation::Identity => 1.0,
        }
    }

    fn code(self) -> u8 {
        match self {
            Activation::Softplus => 0,
            Activation::Identity => 1,
        }
    }

    fn from_code(code: u8) -> Option<Activation> {
        match code {
            0 => Some(Activation::Softplus),
            1 => Some(Activation::Identity),
            _ => None,
        }
    }
}

pub fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z
    } else if z < -30.0 {
        z.exp()
    } else {
        (1.0 + z.exp()).ln()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// One affine regressor: `activation(w . x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHead {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub activation: Activation,
}

impl AffineHead {
    pub fn zeros(input_dim: usize, activation: Activation) -> AffineHead {
        AffineHead { weights: vec![0.0; input_dim], bias: 0.0, activation }
    }

    pub fn pre_activation(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn forward(&self, x: &[f64]) -> f64 {
        self.activation.apply(self.pre_activation(x))
    }
}

/// The three regression heads over `[contextual row || style vector]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProsodyPredictor {
    pub input_dim: usize,
    pub duration: AffineHead,
    pub pitch: AffineHead,
    pub energy: AffineHead,
}

impl ProsodyPredictor {
    pub fn zeros(input_dim: usize) -> ProsodyPredictor {
        ProsodyPredictor {
            input_dim,
            duration: AffineHead::zeros(input_dim, Activation::Softplus),
            pitch: AffineHead::zeros(input_dim, Activation::Identity),
            energy: AffineHead::zeros(input_dim, Activation::Identity),
        }
    }

    /// Seeded random initialization.
    pub fn init(input_dim: usize, seed: u64, scale: f64) -> ProsodyPredictor {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let mut head = |activation| AffineHead {
            weights: (0..input_dim).map(|_| rng.gen_range(-scale..scale)).collect(),
            bias: 0.0,
            activation,
        };
        ProsodyPredictor {
            input_dim,
            duration: head(Activation::Softplus),
            pitch: head(Activation::Identity),
            energy: head(Activation::Identity),
        }
    }

    pub fn heads(&self) -> [&AffineHead; 3] {
        [&self.duration, &self.pitch, &self.energy]
    }

    pub fn heads_mut(&mut self) -> [&mut AffineHead; 3] {
        [&mut self.duration, &mut self.pitch, &mut self.energy]
    }
}

/// Per-token prosody forecasts. Durations are non-negative by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedProsody {
    pub durations: Vec<f64>,
    pub pitch: Vec<f64>,
    pub energy: Vec<f64>,
}

/// Runs the three heads over every `[rep row || style]` input.
pub fn predict_prosody(
    rep: &ContextualRepresentation,
    style: &StyleVector,
    model: &ProsodyPredictor,
) -> Result<PredictedProsody, ProsodyError> {
    let found = rep.feat_dim + style.dim();
    if found != model.input_dim {
        return Err(ProsodyError::DimensionMismatch { expected: model.input_dim, found });
    }
    let n = rep.seq_len();
    let mut durations = Vec::with_capacity(n);
    let mut pitch = Vec::with_capacity(n);
    let mut energy = Vec::with_capacity(n);
    let mut x = vec![0.0; model.input_dim];
    for row in &rep.rows {
        x[..rep.feat_dim].copy_from_slice(row);
        x[rep.feat_dim..].copy_from_slice(&style.values);
        durations.push(model.duration.forward(&x));
        pitch.push(model.pitch.forward(&x));
        energy.push(model.energy.forward(&x));
    }
    Ok(PredictedProsody { durations, pitch, energy })
}

pub const PREDICTOR_MAGIC: &[u8; 4] = b"THPM";
pub const PREDICTOR_VERSION: u32 = 1;

/// Versioned binary model format: magic, version, input dim, then for each
/// head (duration, pitch, energy) the activation code, bias, and row-major
/// little-endian f64 weights.
pub fn save_predictor(path: &Path, model: &ProsodyPredictor) -> Result<(), ProsodyError> {
    let mut out = Vec::new();
    out.extend_from_slice(PREDICTOR_MAGIC);
    out.extend_from_slice(&PREDICTOR_VERSION.to_le_bytes());
    out.extend_from_slice(&(model.input_dim as u32).to_le_bytes());
    for head in model.heads() {
        out.push(head.activation.code());
        out.extend_from_slice(&head.bias.to_le_bytes());
        for w in &head.weights {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
    std::fs::write(path, out)
        .map_err(|source| ProsodyError::Write { path: path.display().to_string(), source })
}

pub fn load_predictor(path: &Path) -> Result<ProsodyPredictor, ProsodyError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| ProsodyError::Read { path: path.display().to_string(), source })?;
    let bad = |msg: &str| ProsodyError::BadModel(format!("{}: {msg}", path.display()));
    if bytes.len() < 12 || &bytes[0..4] != PREDICTOR_MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != PREDICTOR_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let input_dim = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let head_len = 1 + 8 + 8 * input_dim;
    if bytes.len() != 12 + 3 * head_len {
        return Err(bad("truncated"));
    }
    let mut pos = 12usize;
    let mut heads = Vec::with_capacity(3);
    for _ in 0..3 {
        let activation =
            Activation::from_code(bytes[pos]).ok_or_else(|| bad("unknown activation"))?;
        let bias = f64::from_le_bytes(bytes[pos + 1..pos + 9].try_into().unwrap());
        let weights = bytes[pos + 9..pos + head_len]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        heads.push(AffineHead { weights, bias, activation });
        pos += head_len;
    }
    let energy = heads.pop().unwrap();
    let pitch = heads.pop().unwrap();
    let duration = heads.pop().unwrap();
    Ok(ProsodyPredictor { input_dim, duration, pitch, energy })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(ids: &[u32]) -> EncodedSequence {
        EncodedSequence { ids: ids.to_vec(), syllable_spans: vec![(0, ids.len())] }
    }

    #[test]
    fn window_zero_rows_are_pure_one_hot() {
        let rep = contextual_representation(&enc(&[2, 0, 1]), 4, 0);
        assert_eq!(rep.feat_dim, 8);
        assert_eq!(rep.rows[0], vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(rep.rows[1][0], 1.0);
        assert!(rep.rows.iter().all(|r| r[4..].iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn rows_depend_only_on_their_window() {
        let a = contextual_representation(&enc(&[0, 1, 2, 3, 0]), 4, 1);
        let b = contextual_representation(&enc(&[3, 1, 2, 3, 1]), 4, 1);
        // Tokens outside the window of position 2 differ; the row must not.
        assert_eq!(a.rows[2], b.rows[2]);
    }

    #[test]
    fn zero_model_outputs_softplus_of_zero_and_zeros() {
        let rep = contextual_representation(&enc(&[0, 1]), 3, 1);
        let style = StyleVector { values: vec![0.5, -0.5] };
        let model = ProsodyPredictor::zeros(rep.feat_dim + 2);
        let out = predict_prosody(&rep, &style, &model).unwrap();
        let sp0 = softplus(0.0);
        assert!(out.durations.iter().all(|&d| (d - sp0).abs() < 1e-15));
        assert!(out.pitch.iter().all(|&p| p == 0.0));
        assert!(out.energy.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn prediction_matches_hand_computed_affine() {
        // Two tokens, vocab 2, window 0 → feat_dim 4; style dim 1 → input 5.
        let rep = contextual_representation(&enc(&[0, 1]), 2, 0);
        let style = StyleVector { values: vec![2.0] };
        let mut model = ProsodyPredictor::zeros(5);
        model.pitch.weights = vec![1.0, -1.0, 0.0, 0.0, 0.5];
        model.pitch.bias = 0.25;
        let out = predict_prosody(&rep, &style, &model).unwrap();
        // Token 0: one-hot [1,0] → 1*1 + 0.5*2 + 0.25 = 2.25.
        assert!((out.pitch[0] - 2.25).abs() < 1e-15);
        // Token 1: one-hot [0,1] → -1 + 1 + 0.25 = 0.25.
        assert!((out.pitch[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let rep = contextual_representation(&enc(&[0]), 2, 0);
        let style = StyleVector { values: vec![0.0; 3] };
        let model = ProsodyPredictor::zeros(5);
        assert!(matches!(
            predict_prosody(&rep, &style, &model),
            Err(ProsodyError::DimensionMismatch { expected: 5, found: 7 })
        ));
    }

    #[test]
    fn output_length_equals_input_length() {
        for n in [1usize, 3, 17] {
            let ids: Vec<u32> = (0..n as u32).map(|i| i % 5).collect();
            let rep = contextual_representation(&enc(&ids), 5, 2);
            let style = StyleVector { values: vec![0.1; 4] };
            let model = ProsodyPredictor::init(rep.feat_dim + 4, 9, 0.1);
            let out = predict_prosody(&rep, &style, &model).unwrap();
            assert_eq!(out.durations.len(), n);
            assert_eq!(out.pitch.len(), n);
            assert_eq!(out.energy.len(), n);
            assert!(out.durations.iter().all(|&d| d >= 0.0));
        }
    }

    #[test]
    fn embedding_covers_every_id_deterministically() {
        let a = PhonemeEmbedding::new(10, 8, 3);
        let b = PhonemeEmbedding::new(10, 8, 3);
        assert_eq!(a, b);
        for id in 0..10u32 {
            let row = a.lookup(id).unwrap();
            assert_eq!(row.len(), 8);
            assert!(row.iter().all(|v| v.is_finite()));
        }
        assert!(a.lookup(10).is_none());
    }

    #[test]
    fn predictor_binary_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.thpm");
        let model = ProsodyPredictor::init(7, 42, 0.2);
        save_predictor(&path, &model).unwrap();
        let back = load_predictor(&path).unwrap();
        assert_eq!(model, back);
        std::fs::write(&path, b"junk").unwrap();
        assert!(load_predictor(&path).is_err());
    }
}
