//! Short-time objective intelligibility.
//!
//! Follows the published algorithm shape: short-time DFT frames, a
//! one-third-octave band decomposition, removal of silent frames, and the
//! clipped, normalized correlation of 384 ms temporal envelope segments,
//! averaged over bands and segments. Constants live in [`StoiConfig`] so
//! variants stay configurable.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::MetricsError;
use crate::audio::Waveform;

/// STOI constants. Defaults follow the published definition: 25.6 ms frames
/// with 50% overlap, 15 one-third-octave bands starting at 150 Hz, 384 ms
/// analysis segments, clipping at -15 dB signal-to-distortion, and a 40 dB
/// dynamic range for silent-frame removal.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StoiConfig {
    pub frame_ms: f64,
    pub overlap: f64,
    pub n_bands: usize,
    pub lowest_center_hz: f64,
    pub analysis_ms: f64,
    pub beta_db: f64,
    pub dynamic_range_db: f64,
}

impl Default for StoiConfig {
    fn default() -> Self {
        StoiConfig {
            frame_ms: 25.6,
            overlap: 0.5,
            n_bands: 15,
            lowest_center_hz: 150.0,
            analysis_ms: 384.0,
            beta_db: -15.0,
            dynamic_range_db: 40.0,
        }
    }
}

impl StoiConfig {
    fn frame_len(&self, sample_rate: u32) -> usize {
        (self.frame_ms / 1000.0 * sample_rate as f64).round() as usize
    }

    fn hop(&self, sample_rate: u32) -> usize {
        ((1.0 - self.overlap) * self.frame_len(sample_rate) as f64).round() as usize
    }

    /// Frames per analysis segment (30 at the defaults).
    fn segment_frames(&self) -> usize {
        (self.analysis_ms / (self.frame_ms * (1.0 - self.overlap))).round() as usize
    }
}

fn hann(win: usize) -> Vec<f64> {
    (0..win)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / win as f64).cos())
        .collect()
}

/// Windowed DFT magnitudes-squared per frame.
fn frame_spectra(samples: &[f64], frame_len: usize, hop: usize, fft_size: usize) -> Vec<Vec<f64>> {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(fft_size);
    let window = hann(frame_len);
    let n_bins = fft_size / 2 + 1;
    let mut out = Vec::new();
    let mut buf = vec![Complex64::default(); fft_size];
    let mut start = 0;
    while start + frame_len <= samples.len() {
        for (i, slot) in buf.iter_mut().enumerate() {
            let v = if i < frame_len { samples[start + i] * window[i] } else { 0.0 };
            *slot = Complex64::new(v, 0.0);
        }
        fft.process(&mut buf);
        out.push(buf[..n_bins].iter().map(|c| c.norm_sqr()).collect());
        start += hop;
    }
    out
}

/// Frame indices of the clean signal that lie within `dynamic_range_db` of
/// its loudest frame.
fn active_frames(
    samples: &[f64],
    frame_len: usize,
    hop: usize,
    dynamic_range_db: f64,
) -> Vec<usize> {
    let window = hann(frame_len);
    let mut energies = Vec::new();
    let mut start = 0;
    while start + frame_len <= samples.len() {
        let e: f64 = (0..frame_len).map(|i| (samples[start + i] * window[i]).powi(2)).sum();
        energies.push(20.0 * (e.sqrt() + 1e-20).log10());
        start += hop;
    }
    let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > max - dynamic_range_db)
        .map(|(i, _)| i)
        .collect()
}

/// One-third-octave band energies (square roots of summed bin powers) for
/// each frame.
fn third_octave_bands(
    spectra: &[Vec<f64>],
    config: &StoiConfig,
    sample_rate: u32,
    fft_size: usize,
) -> Result<Vec<Vec<f64>>, MetricsError> {
    let nyquist = sample_rate as f64 / 2.0;
    let bin_hz = sample_rate as f64 / fft_size as f64;
    let n_bins = fft_size / 2 + 1;
    let mut bands = Vec::with_capacity(config.n_bands);
    for k in 0..config.n_bands {
        let center = config.lowest_center_hz * 2f64.powf(k as f64 / 3.0);
        let lo = center / 2f64.powf(1.0 / 6.0);
        let hi = center * 2f64.powf(1.0 / 6.0);
        if hi > nyquist {
            return Err(MetricsError::SignalMismatch(format!(
                "band {k} upper edge {hi:.0} Hz exceeds Nyquist {nyquist:.0} Hz"
            )));
        }
        let lo_bin = (lo / bin_hz).ceil() as usize;
        let hi_bin = ((hi / bin_hz).floor() as usize).min(n_bins - 1);
        bands.push((lo_bin, hi_bin));
    }
    Ok(spectra
        .iter()
        .map(|spectrum| {
            bands
                .iter()
                .map(|&(lo, hi)| {
                    let power: f64 = spectrum[lo..=hi.max(lo)].iter().sum();
                    power.sqrt()
                })
                .collect()
        })
        .collect())
}

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut dot = 0.0;
    let mut ex = 0.0;
    let mut ey = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        dot += (a - mx) * (b - my);
        ex += (a - mx) * (a - mx);
        ey += (b - my) * (b - my);
    }
    if ex < 1e-20 && ey < 1e-20 {
        return 1.0;
    }
    if ex < 1e-20 || ey < 1e-20 {
        return 0.0;
    }
    dot / (ex * ey).sqrt()
}

/// STOI score of the processed signal against the clean reference. Signals
/// must share length and sample rate (at least 10 kHz); the result is
/// approximately 1 for identical inputs and falls as intelligibility
/// degrades.
pub fn stoi(
    clean: &Waveform,
    processed: &Waveform,
    config: &StoiConfig,
) -> Result<f64, MetricsError> {
    if clean.sample_rate() != processed.sample_rate() {
        return Err(MetricsError::SignalMismatch(format!(
            "sample rates differ: {} vs {}",
            clean.sample_rate(),
            processed.sample_rate()
        )));
    }
    if clean.len() != processed.len() {
        return Err(MetricsError::SignalMismatch(format!(
            "lengths differ: {} vs {}",
            clean.len(),
            processed.len()
        )));
    }
    let sr = clean.sample_rate();
    if sr < 10_000 {
        return Err(MetricsError::SampleRateTooLow(sr));
    }
    let frame_len = config.frame_len(sr);
    let hop = config.hop(sr);
    let fft_size = frame_len.next_power_of_two();
    let n_seg = config.segment_frames();

    let active = active_frames(clean.samples(), frame_len, hop, config.dynamic_range_db);
    let clean_spectra = frame_spectra(clean.samples(), frame_len, hop, fft_size);
    let proc_spectra = frame_spectra(processed.samples(), frame_len, hop, fft_size);
    let pick = |spectra: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        active.iter().map(|&i| spectra[i].clone()).collect()
    };
    let clean_bands = third_octave_bands(&pick(clean_spectra), config, sr, fft_size)?;
    let proc_bands = third_octave_bands(&pick(proc_spectra), config, sr, fft_size)?;
    if clean_bands.len() < n_seg {
        return Err(MetricsError::SignalTooShort(format!(
            "{} active frames, need at least {n_seg}",
            clean_bands.len()
        )));
    }

    let clip_factor = 1.0 + 10f64.powf(-config.beta_db / 20.0);
    let mut total = 0.0;
    let mut count = 0usize;
    for seg_end in n_seg..=clean_bands.len() {
        let seg = seg_end - n_seg..seg_end;
        for band in 0..config.n_bands {
            let x: Vec<f64> = clean_bands[seg.clone()].iter().map(|f| f[band]).collect();
            let y: Vec<f64> = proc_bands[seg.clone()].iter().map(|f| f[band]).collect();
            let nx: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let ny: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let scale = if ny < 1e-20 { 0.0 } else { nx / ny };
            let clipped: Vec<f64> = x
                .iter()
                .zip(&y)
                .map(|(&xv, &yv)| (yv * scale).min(clip_factor * xv))
                .collect();
            total += correlation(&x, &clipped);
            count += 1;
        }
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Speech-like synthetic: an amplitude-modulated harmonic stack with
    /// energy in every one-third-octave band up to ~4 kHz.
    pub fn speechish(len: usize, sr: u32, seed: u64) -> Waveform {
        let mut rng = StdRng::seed_from_u64(seed);
        let f0 = 120.0 + rng.gen_range(0.0..40.0);
        let phases: Vec<f64> =
            (0..32).map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI)).collect();
        let samples: Vec<f64> = (0..len)
            .map(|i| {
                let t = i as f64 / sr as f64;
                let env = 0.55
                    + 0.3 * (2.0 * std::f64::consts::PI * 3.0 * t).sin()
                    + 0.15 * (2.0 * std::f64::consts::PI * 7.3 * t).cos();
                let mut carrier = 0.0;
                for (k, phase) in phases.iter().enumerate() {
                    let harmonic = (k + 1) as f64;
                    if f0 * harmonic > 4500.0 {
                        break;
                    }
                    carrier += (2.0 * std::f64::consts::PI * f0 * harmonic * t + phase).sin()
                        / harmonic.sqrt();
                }
                0.08 * env * carrier
            })
            .collect();
        let peak = samples.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let samples = samples.into_iter().map(|v| 0.8 * v / peak).collect();
        Waveform::new(samples, sr).unwrap()
    }

    pub fn add_noise_at_snr(clean: &Waveform, snr_db: f64, seed: u64) -> Waveform {
        let mut rng = StdRng::seed_from_u64(seed);
        let signal_power: f64 =
            clean.samples().iter().map(|v| v * v).sum::<f64>() / clean.len() as f64;
        let noise_power = signal_power / 10f64.powf(snr_db / 10.0);
        let sigma = noise_power.sqrt();
        let samples: Vec<f64> = clean
            .samples()
            .iter()
            .map(|&s| {
                // Box-Muller normal noise.
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                (s + sigma * z).clamp(-1.0, 1.0)
            })
            .collect();
        Waveform::new(samples, clean.sample_rate()).unwrap()
    }

    #[test]
    fn identical_signals_score_near_one() {
        let clean = speechish(16_000, 16_000, 1);
        let score = stoi(&clean, &clean, &StoiConfig::default()).unwrap();
        assert!(score >= 0.999, "self-STOI {score}");
    }

    #[test]
    fn gain_on_processed_signal_does_not_change_the_score() {
        let clean = speechish(16_000, 16_000, 2);
        let scaled = Waveform::new(
            clean.samples().iter().map(|v| v * 0.25).collect(),
            clean.sample_rate(),
        )
        .unwrap();
        let a = stoi(&clean, &clean, &StoiConfig::default()).unwrap();
        let b = stoi(&clean, &scaled, &StoiConfig::default()).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn score_degrades_monotonically_with_snr() {
        let clean = speechish(20_000, 16_000, 3);
        let mut last = f64::INFINITY;
        for (i, snr) in [20.0, 10.0, 0.0, -10.0].into_iter().enumerate() {
            let noisy = add_noise_at_snr(&clean, snr, 100 + i as u64);
            let score = stoi(&clean, &noisy, &StoiConfig::default()).unwrap();
            assert!(score <= last + 1e-9, "STOI rose from {last} to {score} at {snr} dB");
            last = score;
        }
        assert!(last < 0.6, "heavy noise still scores {last}");
    }

    #[test]
    fn mismatched_signals_are_rejected() {
        let a = speechish(16_000, 16_000, 4);
        let b = speechish(15_000, 16_000, 4);
        assert!(stoi(&a, &b, &StoiConfig::default()).is_err());
        let c = speechish(16_000, 22_050, 4);
        assert!(stoi(&a, &c, &StoiConfig::default()).is_err());
    }

    #[test]
    fn low_sample_rate_is_rejected() {
        let a = speechish(16_000, 8_000, 5);
        assert!(matches!(
            stoi(&a, &a, &StoiConfig::default()),
            Err(MetricsError::SampleRateTooLow(8_000))
        ));
    }

    #[test]
    fn too_short_signal_is_rejected() {
        let a = speechish(2_000, 16_000, 6);
        assert!(matches!(
            stoi(&a, &a, &StoiConfig::default()),
            Err(MetricsError::SignalTooShort(_))
        ));
    }
}
