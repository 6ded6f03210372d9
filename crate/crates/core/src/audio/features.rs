//! Phoneme durations, style vectors, and the binary feature-record format.

use std::io::Read;
use std::path::Path;

use super::{AudioError, MelFrames, ProsodyFeatures, StyleVector};

/// External forced alignment: phoneme labels with frame counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub entries: Vec<(String, u32)>,
}

impl Alignment {
    pub fn total_frames(&self) -> u64 {
        self.entries.iter().map(|(_, f)| u64::from(*f)).sum()
    }
}

/// Loads an alignment file: one `phoneme TAB frame-count` per line.
pub fn load_alignment(path: &Path) -> Result<Alignment, AudioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| AudioError::Read { path: path.display().to_string(), source })?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (phoneme, frames) = line.split_once('\t').ok_or_else(|| {
            AudioError::BadAlignment(format!("line {}: expected `phoneme TAB frames`", idx + 1))
        })?;
        let frames: u32 = frames.trim().parse().map_err(|_| {
            AudioError::BadAlignment(format!("line {}: bad frame count `{frames}`", idx + 1))
        })?;
        entries.push((phoneme.to_string(), frames));
    }
    Ok(Alignment { entries })
}

/// Per-phoneme frame counts. With an alignment, validates that it covers
/// exactly `n_phonemes` phonemes and `n_frames` frames and returns its
/// counts. Without one, distributes frames as evenly as possible, earlier
/// phonemes taking the remainder.
pub fn phoneme_durations(
    n_phonemes: usize,
    n_frames: usize,
    alignment: Option<&Alignment>,
) -> Result<Vec<u32>, AudioError> {
    if n_phonemes == 0 {
        return Err(AudioError::BadDurations("no phonemes".into()));
    }
    if let Some(alignment) = alignment {
        if alignment.entries.len() != n_phonemes {
            return Err(AudioError::BadAlignment(format!(
                "alignment has {} phonemes, expected {n_phonemes}",
                alignment.entries.len()
            )));
        }
        let total = alignment.total_frames();
        if total != n_frames as u64 {
            return Err(AudioError::BadAlignment(format!(
                "alignment frames sum to {total}, expected {n_frames}"
            )));
        }
        return Ok(alignment.entries.iter().map(|(_, f)| *f).collect());
    }
    if n_frames < n_phonemes {
        return Err(AudioError::BadDurations(format!(
            "{n_frames} frames cannot cover {n_phonemes} phonemes in uniform mode"
        )));
    }
    let base = (n_frames / n_phonemes) as u32;
    let remainder = n_frames % n_phonemes;
    Ok((0..n_phonemes).map(|i| base + u32::from(i < remainder)).collect())
}

/// Per-band mean and standard deviation of the log-mel frames, interleaved
/// `[m0, s0, m1, s1, ...]`, truncated or zero-padded to `dim`. Deterministic;
/// needs at least two frames for the deviation to be defined.
pub fn style_vector(mel: &MelFrames, dim: usize) -> Result<StyleVector, AudioError> {
    let n = mel.n_frames();
    if n < 2 {
        return Err(AudioError::TooFewFrames(n));
    }
    let n_mels = mel.n_mels();
    let mut values = Vec::with_capacity(dim);
    'bands: for band in 0..n_mels {
        let mean = mel.frames.iter().map(|row| row[band]).sum::<f64>() / n as f64;
        let var =
            mel.frames.iter().map(|row| (row[band] - mean).powi(2)).sum::<f64>() / n as f64;
        for v in [mean, var.sqrt()] {
            values.push(v);
            if values.len() == dim {
                break 'bands;
            }
        }
    }
    values.resize(dim, 0.0);
    Ok(StyleVector { values })
}

pub const FEATURE_RECORD_MAGIC: &[u8; 4] = b"THFR";
pub const FEATURE_RECORD_VERSION: u32 = 1;

/// All extracted features of one utterance.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub mel: MelFrames,
    pub prosody: ProsodyFeatures,
    pub style: StyleVector,
}

fn push_section(out: &mut Vec<u8>, name: &str, dims: &[u32], data: impl Iterator<Item = f32>) {
    out.extend_from_slice(&(name.len() as u32).to_le_bytes());
    out.extend_from_slice(name.as_bytes());
    out.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for &d in dims {
        out.extend_from_slice(&d.to_le_bytes());
    }
    for v in data {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

/// Writes the versioned binary layout: magic, version, section count, then
/// named sections (`mel`, `pitch`, `energy`, `durations`, `style`), each a
/// little-endian f32 array with explicit dimensions. The mel section also
/// records the STFT configuration.
pub fn write_feature_record(path: &Path, record: &FeatureRecord) -> Result<(), AudioError> {
    let mut out = Vec::new();
    out.extend_from_slice(FEATURE_RECORD_MAGIC);
    out.extend_from_slice(&FEATURE_RECORD_VERSION.to_le_bytes());
    out.extend_from_slice(&5u32.to_le_bytes());
    let cfg = &record.mel.config;
    // mel config header rides in front of the mel section data.
    out.extend_from_slice(&(record.mel.sample_rate).to_le_bytes());
    for v in [cfg.fft_size, cfg.hop, cfg.win, cfg.n_mels] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&cfg.fmin.to_le_bytes());
    out.extend_from_slice(&cfg.fmax.to_le_bytes());
    let n_frames = record.mel.n_frames() as u32;
    let n_mels = record.mel.n_mels() as u32;
    push_section(
        &mut out,
        "mel",
        &[n_frames, n_mels],
        record.mel.frames.iter().flatten().map(|&v| v as f32),
    );
    push_section(
        &mut out,
        "pitch",
        &[record.prosody.pitch.len() as u32],
        record.prosody.pitch.iter().map(|&v| v as f32),
    );
    push_section(
        &mut out,
        "energy",
        &[record.prosody.energy.len() as u32],
        record.prosody.energy.iter().map(|&v| v as f32),
    );
    push_section(
        &mut out,
        "durations",
        &[record.prosody.durations.len() as u32],
        record.prosody.durations.iter().map(|&v| v as f32),
    );
    push_section(
        &mut out,
        "style",
        &[record.style.values.len() as u32],
        record.style.values.iter().map(|&v| v as f32),
    );
    std::fs::write(path, out)
        .map_err(|source| AudioError::Write { path: path.display().to_string(), source })
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: String,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], AudioError> {
        if self.pos + n > self.bytes.len() {
            return Err(AudioError::BadFeatureRecord(format!("{}: truncated", self.path)));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32, AudioError> {
        let mut buf = [0u8; 4];
        buf.copy_from_slice(self.take(4)?);
        Ok(u32::from_le_bytes(buf))
    }

    fn f64(&mut self) -> Result<f64, AudioError> {
        let mut buf = [0u8; 8];
        buf.copy_from_slice(self.take(8)?);
        Ok(f64::from_le_bytes(buf))
    }

    fn f32_vec(&mut self, n: usize) -> Result<Vec<f64>, AudioError> {
        let mut out = Vec::with_capacity(n);
        for chunk in self.take(n * 4)?.chunks_exact(4) {
            let mut buf = [0u8; 4];
            buf.copy_from_slice(chunk);
            out.push(f32::from_le_bytes(buf) as f64);
        }
        Ok(out)
    }
}

pub fn read_feature_record(path: &Path) -> Result<FeatureRecord, AudioError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| AudioError::Read { path: path.display().to_string(), source })?;
    let mut cur = Cursor { bytes: &bytes, pos: 0, path: path.display().to_string() };
    if cur.take(4)? != FEATURE_RECORD_MAGIC {
        return Err(AudioError::BadFeatureRecord(format!("{}: bad magic", cur.path)));
    }
    let version = cur.u32()?;
    if version != FEATURE_RECORD_VERSION {
        return Err(AudioError::BadFeatureRecord(format!(
            "{}: unsupported version {version}",
            cur.path
        )));
    }
    let n_sections = cur.u32()?;
    let sample_rate = cur.u32()?;
    let fft_size = cur.u32()? as usize;
    let hop = cur.u32()? as usize;
    let win = cur.u32()? as usize;
    let n_mels = cur.u32()? as usize;
    let fmin = cur.f64()?;
    let fmax = cur.f64()?;
    let config = super::MelConfig { fft_size, hop, win, n_mels, fmin, fmax };

    let mut mel_frames: Option<Vec<Vec<f64>>> = None;
    let mut pitch = None;
    let mut energy = None;
    let mut durations: Option<Vec<u32>> = None;
    let mut style = None;
    for _ in 0..n_sections {
        let name_len = cur.u32()? as usize;
        let name = String::from_utf8(cur.take(name_len)?.to_vec())
            .map_err(|_| AudioError::BadFeatureRecord(format!("{}: bad section name", cur.path)))?;
        let rank = cur.u32()? as usize;
        let mut dims = Vec::with_capacity(rank);
        for _ in 0..rank {
            dims.push(cur.u32()? as usize);
        }
        let count: usize = dims.iter().product();
        let data = cur.f32_vec(count)?;
        match name.as_str() {
            "mel" => {
                if dims.len() != 2 {
                    return Err(AudioError::BadFeatureRecord(format!(
                        "{}: mel section must be 2-d",
                        cur.path
                    )));
                }
                mel_frames =
                    Some(data.chunks(dims[1].max(1)).map(|row| row.to_vec()).collect());
            }
            "pitch" => pitch = Some(data),
            "energy" => energy = Some(data),
            "durations" => durations = Some(data.into_iter().map(|v| v as u32).collect()),
            "style" => style = Some(StyleVector { values: data }),
            other => {
                return Err(AudioError::BadFeatureRecord(format!(
                    "{}: unknown section `{other}`",
                    cur.path
                )))
            }
        }
    }
    let missing = |what: &str| {
        AudioError::BadFeatureRecord(format!("{}: missing section `{what}`", path.display()))
    };
    let mel = MelFrames {
        frames: mel_frames.ok_or_else(|| missing("mel"))?,
        config,
        sample_rate,
    };
    let prosody = ProsodyFeatures::new(
        durations.ok_or_else(|| missing("durations"))?,
        pitch.ok_or_else(|| missing("pitch"))?,
        energy.ok_or_else(|| missing("energy"))?,
    )?;
    Ok(FeatureRecord { mel, prosody, style: style.ok_or_else(|| missing("style"))? })
}
