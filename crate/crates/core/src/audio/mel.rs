//! Magnitude STFT → normalized mel filterbank → log-mel frames, plus the
//! mel-domain energy contour.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::{AudioError, MelConfig, MelFrames, Waveform};

/// Log floor applied to linear mel energies.
pub const LOG_FLOOR: f64 = 1e-5;

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular mel filterbank, `n_mels x (fft_size / 2 + 1)`. Every row sums
/// to 1; a triangle narrower than one bin collapses to its nearest bin so no
/// row is all-zero.
pub fn mel_filterbank(config: &MelConfig, sample_rate: u32) -> Vec<Vec<f64>> {
    let n_bins = config.fft_size / 2 + 1;
    let sr = sample_rate as f64;
    let fmax = config.fmax.min(sr / 2.0);
    let mel_lo = hz_to_mel(config.fmin);
    let mel_hi = hz_to_mel(fmax);
    let points: Vec<f64> = (0..config.n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (config.n_mels + 1) as f64))
        .collect();
    let bin_hz = |bin: usize| bin as f64 * sr / config.fft_size as f64;
    let mut bank = vec![vec![0.0; n_bins]; config.n_mels];
    for (m, row) in bank.iter_mut().enumerate() {
        let (left, center, right) = (points[m], points[m + 1], points[m + 2]);
        for (bin, w) in row.iter_mut().enumerate() {
            let f = bin_hz(bin);
            if f > left && f < right {
                *w = if f <= center {
                    (f - left) / (center - left).max(f64::EPSILON)
                } else {
                    (right - f) / (right - center).max(f64::EPSILON)
                };
            }
        }
        let sum: f64 = row.iter().sum();
        if sum <= 0.0 {
            // Degenerate triangle between bins: collapse to the nearest bin.
            let nearest = ((center / (sr / config.fft_size as f64)).round() as usize)
                .min(n_bins - 1);
            row[nearest] = 1.0;
        } else {
            for w in row.iter_mut() {
                *w /= sum;
            }
        }
    }
    bank
}

fn hann(win: usize) -> Vec<f64> {
    (0..win)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / win as f64).cos())
        .collect()
}

/// Magnitude spectra of all complete analysis windows, one row per frame.
fn stft_magnitudes(waveform: &Waveform, config: &MelConfig) -> Vec<Vec<f64>> {
    let n_frames = config.frame_count(waveform.len());
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(config.fft_size);
    let window = hann(config.win);
    let samples = waveform.samples();
    let n_bins = config.fft_size / 2 + 1;
    let mut out = Vec::with_capacity(n_frames);
    let mut buf = vec![Complex64::default(); config.fft_size];
    for t in 0..n_frames {
        let start = t * config.hop;
        for (i, slot) in buf.iter_mut().enumerate() {
            let v = if i < config.win { samples[start + i] * window[i] } else { 0.0 };
            *slot = Complex64::new(v, 0.0);
        }
        fft.process(&mut buf);
        out.push(buf[..n_bins].iter().map(|c| c.norm()).collect());
    }
    out
}

/// Log-mel spectrogram: magnitude STFT, normalized mel filterbank, natural
/// log with floor [`LOG_FLOOR`]. Errors when the signal is shorter than one
/// window.
pub fn mel_spectrogram(waveform: &Waveform, config: &MelConfig) -> Result<MelFrames, AudioError> {
    if waveform.len() < config.win {
        return Err(AudioError::SignalTooShort { len: waveform.len(), win: config.win });
    }
    let bank = mel_filterbank(config, waveform.sample_rate());
    let frames = stft_magnitudes(waveform, config)
        .into_iter()
        .map(|mag| {
            bank.iter()
                .map(|row| {
                    let energy: f64 = row.iter().zip(&mag).map(|(w, m)| w * m).sum();
                    energy.max(LOG_FLOOR).ln()
                })
                .collect()
        })
        .collect();
    Ok(MelFrames { frames, config: config.clone(), sample_rate: waveform.sample_rate() })
}

/// Per-frame RMS of the linear mel energies.
pub fn extract_energy(mel: &MelFrames) -> Vec<f64> {
    mel.frames
        .iter()
        .map(|row| {
            let sum_sq: f64 = row.iter().map(|&log_e| log_e.exp().powi(2)).sum();
            (sum_sq / row.len() as f64).sqrt()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, amp: f64, len: usize, sr: u32) -> Waveform {
        let samples: Vec<f64> = (0..len)
            .map(|i| amp * (2.0 * std::f64::consts::PI * freq * i as f64 / sr as f64).sin())
            .collect();
        Waveform::new(samples, sr).unwrap()
    }

    #[test]
    fn frame_count_formula_is_exact() {
        let cfg = MelConfig::default();
        assert_eq!(cfg.frame_count(24_000), 1 + (24_000 - 1024) / 256);
        assert_eq!(cfg.frame_count(24_000), 90);
        assert_eq!(cfg.frame_count(1024), 1);
        assert_eq!(cfg.frame_count(1023), 0);
    }

    #[test]
    fn too_short_signal_is_an_error() {
        let wave = Waveform::new(vec![0.0; 100], 24000).unwrap();
        assert!(matches!(
            mel_spectrogram(&wave, &MelConfig::default()),
            Err(AudioError::SignalTooShort { .. })
        ));
    }

    #[test]
    fn zero_signal_hits_the_log_floor_everywhere() {
        let wave = Waveform::new(vec![0.0; 4096], 24000).unwrap();
        let mel = mel_spectrogram(&wave, &MelConfig::default()).unwrap();
        let expected = LOG_FLOOR.ln();
        for row in &mel.frames {
            for &v in row {
                assert_eq!(v, expected);
            }
        }
    }

    #[test]
    fn filterbank_rows_sum_to_one_and_are_nonzero() {
        for n_mels in [10, 40, 80, 128] {
            let cfg = MelConfig { n_mels, ..MelConfig::default() };
            let bank = mel_filterbank(&cfg, 24000);
            for (i, row) in bank.iter().enumerate() {
                let sum: f64 = row.iter().sum();
                assert!((sum - 1.0).abs() < 1e-6, "row {i} of {n_mels} sums to {sum}");
                assert!(row.iter().any(|&w| w > 0.0), "row {i} is all zero");
            }
        }
    }

    #[test]
    fn sine_at_band_center_dominates_that_band() {
        let sr = 24000;
        let cfg = MelConfig::default();
        let bank = mel_filterbank(&cfg, sr);
        // Pick the band whose peak bin is largest for a 1 kHz tone.
        let wave = sine(1000.0, 0.5, 8192, sr);
        let mel = mel_spectrogram(&wave, &cfg).unwrap();
        let mid = &mel.frames[mel.n_frames() / 2];
        let argmax =
            mid.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0;
        // The winning band's filter must cover 1 kHz.
        let bin = (1000.0 / (sr as f64 / cfg.fft_size as f64)).round() as usize;
        assert!(bank[argmax][bin] > 0.0, "band {argmax} does not cover 1 kHz");
    }

    #[test]
    fn energy_matches_direct_recomputation() {
        let wave = sine(440.0, 0.4, 4096, 24000);
        let mel = mel_spectrogram(&wave, &MelConfig::default()).unwrap();
        let energy = extract_energy(&mel);
        assert_eq!(energy.len(), mel.n_frames());
        for (t, row) in mel.frames.iter().enumerate() {
            let direct =
                (row.iter().map(|v| v.exp() * v.exp()).sum::<f64>() / row.len() as f64).sqrt();
            assert!((energy[t] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_amplitude_doubles_energy() {
        let sr = 24000;
        let cfg = MelConfig::default();
        let soft = sine(440.0, 0.25, 4096, sr);
        let loud = sine(440.0, 0.5, 4096, sr);
        let e_soft = extract_energy(&mel_spectrogram(&soft, &cfg).unwrap());
        let e_loud = extract_energy(&mel_spectrogram(&loud, &cfg).unwrap());
        for (s, l) in e_soft.iter().zip(&e_loud) {
            if *s > 10.0 * LOG_FLOOR {
                let ratio = l / s;
                assert!((ratio - 2.0).abs() < 1e-6, "ratio {ratio}");
            }
        }
    }

    #[test]
    fn zero_signal_energy_is_the_floor_constant() {
        let wave = Waveform::new(vec![0.0; 4096], 24000).unwrap();
        let mel = mel_spectrogram(&wave, &MelConfig::default()).unwrap();
        for e in extract_energy(&mel) {
            assert!((e - LOG_FLOOR).abs() < 1e-18);
        }
    }
}
