//! Fundamental frequency estimation by normalized autocorrelation.

use super::Waveform;

/// Pitch search parameters. Frame geometry (win, hop) must match the mel
/// configuration so all contours share one frame grid.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PitchConfig {
    pub fmin: f64,
    pub fmax: f64,
    /// Minimum normalized correlation for a frame to count as voiced.
    pub voicing_threshold: f64,
    pub win: usize,
    pub hop: usize,
}

impl Default for PitchConfig {
    fn default() -> Self {
        PitchConfig { fmin: 60.0, fmax: 400.0, voicing_threshold: 0.5, win: 1024, hop: 256 }
    }
}

/// Normalized cross-correlation of the frame with itself at the given lag.
fn ncc(frame: &[f64], lag: usize) -> f64 {
    let n = frame.len() - lag;
    let mut dot = 0.0;
    let mut e0 = 0.0;
    let mut e1 = 0.0;
    for i in 0..n {
        dot += frame[i] * frame[i + lag];
        e0 += frame[i] * frame[i];
        e1 += frame[i + lag] * frame[i + lag];
    }
    let denom = (e0 * e1).sqrt();
    if denom < 1e-12 {
        0.0
    } else {
        dot / denom
    }
}

/// Sub-sample lag refinement by a parabola through three correlation values.
fn parabolic_refine(values: &[f64], lag: usize, lo: usize, hi: usize) -> f64 {
    if lag <= lo || lag >= hi {
        return lag as f64;
    }
    let (a, b, c) = (values[lag - lo - 1], values[lag - lo], values[lag - lo + 1]);
    let denom = a - 2.0 * b + c;
    if denom.abs() < 1e-12 {
        return lag as f64;
    }
    let shift = 0.5 * (a - c) / denom;
    lag as f64 + shift.clamp(-1.0, 1.0)
}

/// Per-frame f0 in [fmin, fmax] Hz, 0 for unvoiced frames. The frame grid is
/// identical to the mel grid for the same (win, hop); signals shorter than
/// one window yield no frames.
pub fn extract_pitch(waveform: &Waveform, config: &PitchConfig) -> Vec<f64> {
    let samples = waveform.samples();
    let sr = waveform.sample_rate() as f64;
    let n_frames = if samples.len() < config.win {
        0
    } else {
        1 + (samples.len() - config.win) / config.hop
    };
    let mut lo = (sr / config.fmax).floor() as usize;
    let mut hi = (sr / config.fmin).ceil() as usize;
    lo = lo.max(1);
    hi = hi.min(config.win.saturating_sub(2));
    let mut out = Vec::with_capacity(n_frames);
    if lo >= hi {
        out.resize(n_frames, 0.0);
        return out;
    }
    let mut frame = vec![0.0; config.win];
    for t in 0..n_frames {
        let start = t * config.hop;
        let mean: f64 =
            samples[start..start + config.win].iter().sum::<f64>() / config.win as f64;
        for (i, v) in frame.iter_mut().enumerate() {
            *v = samples[start + i] - mean;
        }
        let energy: f64 = frame.iter().map(|v| v * v).sum();
        if energy < 1e-12 {
            out.push(0.0);
            continue;
        }
        let values: Vec<f64> = (lo..=hi).map(|lag| ncc(&frame, lag)).collect();
        let best =
            values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if best < config.voicing_threshold {
            out.push(0.0);
            continue;
        }
        // Smallest local maximum close to the global best, so a subharmonic
        // at double the period never wins over the true lag.
        let floor = (0.9 * best).max(config.voicing_threshold);
        let mut chosen = None;
        for (i, &v) in values.iter().enumerate() {
            let left = if i == 0 { f64::NEG_INFINITY } else { values[i - 1] };
            let right = if i + 1 == values.len() { f64::NEG_INFINITY } else { values[i + 1] };
            if v >= floor && v >= left && v >= right {
                chosen = Some(lo + i);
                break;
            }
        }
        match chosen {
            Some(lag) => {
                let refined = parabolic_refine(&values, lag, lo, hi);
                let f0 = (sr / refined).clamp(config.fmin, config.fmax);
                out.push(f0);
            }
            None => out.push(0.0),
        }
    }
    out
}
