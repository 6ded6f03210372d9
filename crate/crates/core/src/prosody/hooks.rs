//! Pluggable loss hooks: the perceptual term of the reconstruction loss and
//! the decoder term of the joint loss. Both are trait objects selected by
//! name from a registry, so a real decoder can replace the desk-scale
//! stand-ins without touching the loss algebra.

use std::collections::BTreeMap;

use super::predictor::PredictedProsody;
use super::train::TrainingExample;
use super::ProsodyError;
use crate::audio::Waveform;

/// Perceptual reconstruction-loss term over waveform pairs.
pub trait PerceptualLoss: Send + Sync {
    fn name(&self) -> &'static str;
    fn loss(&self, target: &Waveform, predicted: &Waveform) -> Result<f64, ProsodyError>;
}

/// Default perceptual term: zero. The adversarial loss it stands in for
/// needs a trained discriminator.
pub struct ZeroPerceptualLoss;

impl PerceptualLoss for ZeroPerceptualLoss {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn loss(&self, _target: &Waveform, _predicted: &Waveform) -> Result<f64, ProsodyError> {
        Ok(0.0)
    }
}

/// Decoder term of the joint loss, computed from the predicted prosody and
/// the example's ground-truth features.
pub trait DecoderLossHook: Send + Sync {
    fn name(&self) -> &'static str;
    fn loss(
        &self,
        predicted: &PredictedProsody,
        example: &TrainingExample,
    ) -> Result<f64, ProsodyError>;
}

/// Decoder term fixed at zero; joint loss reduces to the three predictor
/// terms.
pub struct ZeroDecoderLoss;

impl DecoderLossHook for ZeroDecoderLoss {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn loss(
        &self,
        _predicted: &PredictedProsody,
        _example: &TrainingExample,
    ) -> Result<f64, ProsodyError> {
        Ok(0.0)
    }
}

/// Desk-scale decoder stand-in: expands predicted pitch/energy to frames
/// using the ground-truth durations, fits an affine readout per mel band by
/// least squares, and scores the mean absolute error of the readout against
/// the ground-truth mel. Better prosody predictions explain the mel better
/// and score lower.
pub struct LinearReadoutDecoderLoss;

/// Solves the 3x3 normal equations for `y ≈ a + b p + c e`; falls back to
/// the mean when the system is singular.
fn fit_band(p: &[f64], e: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = y.len() as f64;
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for i in 0..y.len() {
        let x = [1.0, p[i], e[i]];
        for r in 0..3 {
            for c in 0..3 {
                ata[r][c] += x[r] * x[c];
            }
            atb[r] += x[r] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting.
    let mut a = ata;
    let mut b = atb;
    for col in 0..3 {
        let pivot = (col..3).max_by(|&r1, &r2| {
            a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap()
        });
        let pivot = pivot.unwrap();
        if a[pivot][col].abs() < 1e-9 {
            return (y.iter().sum::<f64>() / n, 0.0, 0.0);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut sol = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for c in row + 1..3 {
            acc -= a[row][c] * sol[c];
        }
        sol[row] = acc / a[row][row];
    }
    (sol[0], sol[1], sol[2])
}

impl DecoderLossHook for LinearReadoutDecoderLoss {
    fn name(&self) -> &'static str {
        "linear-readout"
    }

    fn loss(
        &self,
        predicted: &PredictedProsody,
        example: &TrainingExample,
    ) -> Result<f64, ProsodyError> {
        let mel = example.mel.as_ref().ok_or_else(|| {
            ProsodyError::MelMismatch("linear-readout decoder loss needs mel frames".into())
        })?;
        let durations = &example.features.durations;
        if durations.len() != predicted.pitch.len() {
            return Err(ProsodyError::MelMismatch(format!(
                "{} durations for {} predictions",
                durations.len(),
                predicted.pitch.len()
            )));
        }
        let n_frames: usize = durations.iter().map(|&d| d as usize).sum();
        if n_frames != mel.n_frames() {
            return Err(ProsodyError::MelMismatch(format!(
                "durations cover {n_frames} frames, mel has {}",
                mel.n_frames()
            )));
        }
        if n_frames == 0 {
            return Err(ProsodyError::MelMismatch("no frames".into()));
        }
        let mut frame_pitch = Vec::with_capacity(n_frames);
        let mut frame_energy = Vec::with_capacity(n_frames);
        for (i, &d) in durations.iter().enumerate() {
            for _ in 0..d {
                frame_pitch.push(predicted.pitch[i]);
                frame_energy.push(predicted.energy[i]);
            }
        }
        let n_mels = mel.n_mels();
        let mut total = 0.0;
        for band in 0..n_mels {
            let y: Vec<f64> = mel.frames.iter().map(|row| row[band]).collect();
            let (a, b, c) = fit_band(&frame_pitch, &frame_energy, &y);
            for t in 0..n_frames {
                let readout = a + b * frame_pitch[t] + c * frame_energy[t];
                total += (y[t] - readout).abs();
            }
        }
        Ok(total / (n_frames * n_mels) as f64)
    }
}

type PerceptualFactory = fn() -> Box<dyn PerceptualLoss>;
type DecoderFactory = fn() -> Box<dyn DecoderLossHook>;

/// Name-keyed registry of perceptual-loss strategies.
pub struct PerceptualLossRegistry {
    factories: BTreeMap<String, PerceptualFactory>,
}

impl PerceptualLossRegistry {
    pub fn builtin() -> Self {
        let mut reg = PerceptualLossRegistry { factories: BTreeMap::new() };
        reg.register("zero", || Box::new(ZeroPerceptualLoss));
        reg
    }

    pub fn register(&mut self, name: &str, factory: PerceptualFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn build(&self, name: &str) -> Result<Box<dyn PerceptualLoss>, ProsodyError> {
        self.factories
            .get(name)
            .map(|f| f())
            .ok_or_else(|| {
                ProsodyError::BadModel(format!(
                    "unknown perceptual loss `{name}`; available: {}",
                    self.names().join(", ")
                ))
            })
    }
}

/// Name-keyed registry of decoder-loss strategies.
pub struct DecoderLossRegistry {
    factories: BTreeMap<String, DecoderFactory>,
}

impl DecoderLossRegistry {
    pub fn builtin() -> Self {
        let mut reg = DecoderLossRegistry { factories: BTreeMap::new() };
        reg.register("zero", || Box::new(ZeroDecoderLoss));
        reg.register("linear-readout", || Box::new(LinearReadoutDecoderLoss));
        reg
    }

    pub fn register(&mut self, name: &str, factory: DecoderFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn build(&self, name: &str) -> Result<Box<dyn DecoderLossHook>, ProsodyError> {
        self.factories
            .get(name)
            .map(|f| f())
            .ok_or_else(|| {
                ProsodyError::BadModel(format!(
                    "unknown decoder loss `{name}`; available: {}",
                    self.names().join(", ")
                ))
            })
    }
}

pub fn perceptual_loss_registry() -> PerceptualLossRegistry {
    PerceptualLossRegistry::builtin()
}

pub fn decoder_loss_registry() -> DecoderLossRegistry {
    DecoderLossRegistry::builtin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::{mel_spectrogram, MelConfig, ProsodyFeatures, StyleVector, Waveform};
    use crate::encoding::EncodedSequence;

    fn wave(n: usize) -> Waveform {
        let samples: Vec<f64> = (0..n)
            .map(|i| 0.4 * (2.0 * std::f64::consts::PI * 300.0 * i as f64 / 24000.0).sin())
            .collect();
        Waveform::new(samples, 24000).unwrap()
    }

    fn readout_example() -> (TrainingExample, PredictedProsody) {
        let cfg = MelConfig { n_mels: 6, ..MelConfig::default() };
        let mel = mel_spectrogram(&wave(2048), &cfg).unwrap();
        let n = mel.n_frames() as u32;
        let durations = vec![n / 2, n - n / 2];
        let features = ProsodyFeatures::new(
            durations.clone(),
            vec![200.0; n as usize],
            vec![0.5; n as usize],
        )
        .unwrap();
        let example = TrainingExample {
            encoded: EncodedSequence { ids: vec![3, 4], syllable_spans: vec![(0, 2)] },
            style: StyleVector { values: vec![0.0] },
            features,
            mel: Some(mel),
        };
        let predicted = PredictedProsody {
            durations: vec![2.0, 2.0],
            pitch: vec![210.0, 190.0],
            energy: vec![0.4, 0.6],
        };
        (example, predicted)
    }

    #[test]
    fn zero_hooks_return_zero() {
        let (example, predicted) = readout_example();
        assert_eq!(ZeroDecoderLoss.loss(&predicted, &example).unwrap(), 0.0);
        let w = wave(512);
        assert_eq!(ZeroPerceptualLoss.loss(&w, &w).unwrap(), 0.0);
    }

    #[test]
    fn linear_readout_is_finite_and_deterministic() {
        let (example, predicted) = readout_example();
        let a = LinearReadoutDecoderLoss.loss(&predicted, &example).unwrap();
        let b = LinearReadoutDecoderLoss.loss(&predicted, &example).unwrap();
        assert!(a.is_finite() && a >= 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn linear_readout_requires_mel() {
        let (mut example, predicted) = readout_example();
        example.mel = None;
        assert!(LinearReadoutDecoderLoss.loss(&predicted, &example).is_err());
    }

    #[test]
    fn band_fit_recovers_an_exact_affine_relation() {
        let p = vec![1.0, 2.0, 3.0, 4.0];
        let e = vec![0.5, 0.25, 0.75, 0.1];
        let y: Vec<f64> = p.iter().zip(&e).map(|(pv, ev)| 2.0 + 3.0 * pv - 1.5 * ev).collect();
        let (a, b, c) = fit_band(&p, &e, &y);
        assert!((a - 2.0).abs() < 1e-9);
        assert!((b - 3.0).abs() < 1e-9);
        assert!((c + 1.5).abs() < 1e-9);
    }

    #[test]
    fn registries_build_by_name() {
        let pr = perceptual_loss_registry();
        assert!(pr.build("zero").is_ok());
        assert!(pr.build("nope").is_err());
        let dr = decoder_loss_registry();
        assert_eq!(dr.names(), vec!["linear-readout", "zero"]);
        assert!(dr.build("linear-readout").is_ok());
    }
}
