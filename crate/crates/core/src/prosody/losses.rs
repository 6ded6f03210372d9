//! The reconstruction and joint loss compositions, plus their time- and
//! frequency-domain terms.

use super::ProsodyError;
use crate::audio::{MelFrames, Waveform};

/// Weights of the reconstruction loss terms, each non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub time: f64,
    pub freq: f64,
    pub perceptual: f64,
}

impl LossWeights {
    pub fn new(time: f64, freq: f64, perceptual: f64) -> Result<LossWeights, ProsodyError> {
        for w in [time, freq, perceptual] {
            if !w.is_finite() || w < 0.0 {
                return Err(ProsodyError::BadLossWeight(w));
            }
        }
        Ok(LossWeights { time, freq, perceptual })
    }
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights { time: 1.0, freq: 1.0, perceptual: 1.0 }
    }
}

/// L1 waveform loss: mean absolute difference. Zero iff identical.
pub fn loss_time(target: &Waveform, predicted: &Waveform) -> Result<f64, ProsodyError> {
    if target.sample_rate() != predicted.sample_rate() {
        return Err(ProsodyError::WaveformMismatch(format!(
            "sample rates {} vs {}",
            target.sample_rate(),
            predicted.sample_rate()
        )));
    }
    if target.len() != predicted.len() {
        return Err(ProsodyError::WaveformMismatch(format!(
            "lengths {} vs {}",
            target.len(),
            predicted.len()
        )));
    }
    if target.is_empty() {
        return Err(ProsodyError::WaveformMismatch("empty waveforms".into()));
    }
    let sum: f64 = target
        .samples()
        .iter()
        .zip(predicted.samples())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(sum / target.len() as f64)
}

/// Mel-spectrogram loss: mean absolute difference over all cells. The two
/// spectrograms must share configuration and shape.
pub fn loss_freq(target: &MelFrames, predicted: &MelFrames) -> Result<f64, ProsodyError> {
    if target.config != predicted.config || target.sample_rate != predicted.sample_rate {
        return Err(ProsodyError::MelMismatch("configurations differ".into()));
    }
    if target.n_frames() != predicted.n_frames() {
        return Err(ProsodyError::MelMismatch(format!(
            "frame counts {} vs {}",
            target.n_frames(),
            predicted.n_frames()
        )));
    }
    if target.n_frames() == 0 {
        return Err(ProsodyError::MelMismatch("no frames".into()));
    }
    let mut sum = 0.0;
    let mut cells = 0usize;
    for (ra, rb) in target.frames.iter().zip(&predicted.frames) {
        if ra.len() != rb.len() {
            return Err(ProsodyError::MelMismatch("row widths differ".into()));
        }
        for (a, b) in ra.iter().zip(rb) {
            sum += (a - b).abs();
            cells += 1;
        }
    }
    Ok(sum / cells as f64)
}

fn check_loss_input(v: f64) -> Result<f64, ProsodyError> {
    if !v.is_finite() || v < 0.0 {
        return Err(ProsodyError::BadLossInput(v));
    }
    Ok(v)
}

/// Reconstruction loss: `time_weight * l_time + freq_weight * l_freq +
/// perceptual_weight * l_perceptual`. The perceptual term is supplied by a
/// [`super::PerceptualLoss`] hook and defaults to zero.
pub fn recon_loss(
    l_time: f64,
    l_freq: f64,
    l_perceptual: f64,
    weights: &LossWeights,
) -> Result<f64, ProsodyError> {
    Ok(weights.time * check_loss_input(l_time)?
        + weights.freq * check_loss_input(l_freq)?
        + weights.perceptual * check_loss_input(l_perceptual)?)
}

/// Joint loss: the plain sum of the duration, pitch, energy, and decoder
/// terms.
pub fn joint_loss(
    l_duration: f64,
    l_pitch: f64,
    l_energy: f64,
    l_decoder: f64,
) -> Result<f64, ProsodyError> {
    Ok(check_loss_input(l_duration)?
        + check_loss_input(l_pitch)?
        + check_loss_input(l_energy)?
        + check_loss_input(l_decoder)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(samples: &[f64]) -> Waveform {
        Waveform::new(samples.to_vec(), 24000).unwrap()
    }

    #[test]
    fn identical_waveforms_have_zero_time_loss() {
        let w = wave(&[0.1, -0.2, 0.3]);
        assert_eq!(loss_time(&w, &w).unwrap(), 0.0);
    }

    #[test]
    fn unit_difference_gives_unit_loss() {
        let a = wave(&[1.0, 1.0]);
        let b = wave(&[0.0, 0.0]);
        assert_eq!(loss_time(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn time_loss_matches_elementwise_recomputation() {
        let a = wave(&[0.5, -0.25, 0.125, 0.0]);
        let b = wave(&[-0.5, 0.25, 0.5, 0.75]);
        let direct: f64 = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            / 4.0;
        assert_eq!(loss_time(&a, &b).unwrap(), direct);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let a = wave(&[0.1, 0.2]);
        let b = wave(&[0.1]);
        assert!(loss_time(&a, &b).is_err());
    }

    #[test]
    fn freq_loss_mirrors_time_loss_semantics() {
        use crate::audio::{mel_spectrogram, MelConfig};
        let cfg = MelConfig { n_mels: 8, ..MelConfig::default() };
        let w = wave(&vec![0.1; 2048]);
        let a = mel_spectrogram(&w, &cfg).unwrap();
        assert_eq!(loss_freq(&a, &a).unwrap(), 0.0);
        let mut b = a.clone();
        for row in &mut b.frames {
            for v in row.iter_mut() {
                *v += 1.0;
            }
        }
        assert!((loss_freq(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let mut c = a.clone();
        c.frames.pop();
        assert!(loss_freq(&a, &c).is_err());
        let mut d = a.clone();
        d.config.n_mels = 9;
        assert!(loss_freq(&a, &d).is_err());
    }

    #[test]
    fn recon_loss_is_the_exact_weighted_sum() {
        let w = LossWeights::new(1.0, 1.0, 1.0).unwrap();
        assert!((recon_loss(0.1, 0.2, 0.0, &w).unwrap() - 0.3).abs() < 1e-15);
        let zero = LossWeights::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(recon_loss(5.0, 7.0, 11.0, &zero).unwrap(), 0.0);
    }

    #[test]
    fn recon_loss_rejects_negative_terms() {
        let w = LossWeights::default();
        assert!(recon_loss(-0.1, 0.0, 0.0, &w).is_err());
        assert!(recon_loss(0.0, f64::NAN, 0.0, &w).is_err());
        assert!(LossWeights::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn joint_loss_is_the_plain_sum() {
        assert_eq!(joint_loss(1.0, 2.0, 3.0, 4.0).unwrap(), 10.0);
        assert_eq!(joint_loss(0.0, 0.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(joint_loss(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn recon_loss_is_linear_in_each_weight() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let (lt, lf, lp) = (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0));
            let (w1, w2, w3) = (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
            let delta: f64 = rng.gen_range(0.0..2.0);
            let base = recon_loss(lt, lf, lp, &LossWeights::new(w1, w2, w3).unwrap()).unwrap();
            let bumped =
                recon_loss(lt, lf, lp, &LossWeights::new(w1 + delta, w2, w3).unwrap()).unwrap();
            assert!((bumped - base - delta * lt).abs() < 1e-12 * (1.0 + bumped.abs()));
            let scaled = recon_loss(
                lt,
                lf,
                lp,
                &LossWeights::new(2.0 * w1, 2.0 * w2, 2.0 * w3).unwrap(),
            )
            .unwrap();
            assert!((scaled - 2.0 * base).abs() < 1e-12 * (1.0 + scaled.abs()));
        }
    }

    #[test]
    fn joint_loss_is_permutation_invariant() {
        let vals = [0.5, 1.25, 2.0, 3.75];
        let base = joint_loss(vals[0], vals[1], vals[2], vals[3]).unwrap();
        let perms = [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]];
        for p in perms {
            let v = joint_loss(vals[p[0]], vals[p[1]], vals[p[2]], vals[p[3]]).unwrap();
            assert!((v - base).abs() < 1e-12);
        }
    }
}
