//! Desk-scale audio feature extraction: mel spectrograms, autocorrelation
//! pitch, energy contours, phoneme durations, and style vectors, plus WAV
//! input/output and the binary feature-record format.

mod features;
mod mel;
mod pitch;
mod wav;

pub use features::{
    load_alignment, phoneme_durations, read_feature_record, style_vector, write_feature_record,
    Alignment, FeatureRecord, FEATURE_RECORD_MAGIC, FEATURE_RECORD_VERSION,
};
pub use mel::{extract_energy, mel_filterbank, mel_spectrogram, LOG_FLOOR};
pub use pitch::{extract_pitch, PitchConfig};
pub use wav::{read_wav, write_wav};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AudioError {
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
    #[error("invalid WAV file {path}: {message}")]
    BadWav { path: String, message: String },
    #[error("only mono audio is supported; {path} has {channels} channels")]
    NotMono { path: String, channels: u16 },
    #[error("invalid waveform: {0}")]
    BadWaveform(String),
    #[error("signal of {len} samples is shorter than one {win}-sample window")]
    SignalTooShort { len: usize, win: usize },
    #[error("mel configurations differ")]
    ConfigMismatch,
    #[error("invalid alignment: {0}")]
    BadAlignment(String),
    #[error("{0}")]
    BadDurations(String),
    #[error("style vector needs at least 2 frames, found {0}")]
    TooFewFrames(usize),
    #[error("invalid feature record: {0}")]
    BadFeatureRecord(String),
}

/// Mono waveform with amplitudes in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Waveform, AudioError> {
        if sample_rate == 0 {
            return Err(AudioError::BadWaveform("sample rate must be positive".into()));
        }
        for &s in &samples {
            if !s.is_finite() {
                return Err(AudioError::BadWaveform("non-finite sample".into()));
            }
            if !(-1.0..=1.0).contains(&s) {
                return Err(AudioError::BadWaveform(format!("sample {s} outside [-1, 1]")));
            }
        }
        Ok(Waveform { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// STFT and mel filterbank parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MelConfig {
    pub fft_size: usize,
    pub hop: usize,
    pub win: usize,
    pub n_mels: usize,
    pub fmin: f64,
    pub fmax: f64,
}

impl Default for MelConfig {
    fn default() -> Self {
        MelConfig { fft_size: 1024, hop: 256, win: 1024, n_mels: 80, fmin: 0.0, fmax: 12_000.0 }
    }
}

impl MelConfig {
    /// Number of complete analysis windows: `1 + (len - win) / hop`, no
    /// padding. Zero when the signal is shorter than one window.
    pub fn frame_count(&self, len: usize) -> usize {
        if len < self.win {
            0
        } else {
            1 + (len - self.win) / self.hop
        }
    }
}

/// Log-mel energies, one row per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFrames {
    pub frames: Vec<Vec<f64>>,
    pub config: MelConfig,
    pub sample_rate: u32,
}

impl MelFrames {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn n_mels(&self) -> usize {
        self.config.n_mels
    }
}

/// Per-phoneme durations plus frame-level pitch and energy contours.
/// Durations sum to the number of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct ProsodyFeatures {
    pub durations: Vec<u32>,
    pub pitch: Vec<f64>,
    pub energy: Vec<f64>,
}

impl ProsodyFeatures {
    pub fn new(
        durations: Vec<u32>,
        pitch: Vec<f64>,
        energy: Vec<f64>,
    ) -> Result<ProsodyFeatures, AudioError> {
        let total: u64 = durations.iter().map(|&d| u64::from(d)).sum();
        if total != pitch.len() as u64 || pitch.len() != energy.len() {
            return Err(AudioError::BadDurations(format!(
                "durations sum to {total} but pitch has {} and energy {} frames",
                pitch.len(),
                energy.len()
            )));
        }
        if pitch.iter().chain(energy.iter()).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(AudioError::BadWaveform("pitch and energy must be finite and >= 0".into()));
        }
        Ok(ProsodyFeatures { durations, pitch, energy })
    }

    pub fn n_frames(&self) -> usize {
        self.pitch.len()
    }
}

/// Fixed-dimension summary of a recording's vocal characteristics.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleVector {
    pub values: Vec<f64>,
}

impl StyleVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

pub const DEFAULT_STYLE_DIM: usize = 32;
