//! Minimal 16-bit PCM mono WAV reader/writer.

use std::io::Write;
use std::path::Path;

use super::{AudioError, Waveform};

fn bad(path: &Path, message: impl Into<String>) -> AudioError {
    AudioError::BadWav { path: path.display().to_string(), message: message.into() }
}

fn u16_at(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

/// Reads a 16-bit PCM mono WAV file. Multichannel or non-PCM files are
/// rejected with a clear error.
pub fn read_wav(path: &Path) -> Result<Waveform, AudioError> {
    let bytes = std::fs::read(path)
        .map_err(|source| AudioError::Read { path: path.display().to_string(), source })?;
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(bad(path, "not a RIFF/WAVE file"));
    }
    let mut pos = 12usize;
    let mut format: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let chunk_id = &bytes[pos..pos + 4];
        let chunk_len = u32_at(&bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start.checked_add(chunk_len).filter(|&e| e <= bytes.len());
        let Some(body_end) = body_end else {
            return Err(bad(path, "truncated chunk"));
        };
        match chunk_id {
            b"fmt " => {
                if chunk_len < 16 {
                    return Err(bad(path, "fmt chunk too short"));
                }
                let audio_format = u16_at(&bytes, body_start);
                let channels = u16_at(&bytes, body_start + 2);
                let sample_rate = u32_at(&bytes, body_start + 4);
                let bits = u16_at(&bytes, body_start + 14);
                format = Some((audio_format, channels, sample_rate, bits));
            }
            b"data" => data = Some(&bytes[body_start..body_end]),
            _ => {}
        }
        // Chunks are word-aligned.
        pos = body_end + chunk_len % 2;
    }
    let (audio_format, channels, sample_rate, bits) =
        format.ok_or_else(|| bad(path, "missing fmt chunk"))?;
    if audio_format != 1 {
        return Err(bad(path, format!("unsupported audio format {audio_format}, want PCM")));
    }
    if channels != 1 {
        return Err(AudioError::NotMono { path: path.display().to_string(), channels });
    }
    if bits != 16 {
        return Err(bad(path, format!("unsupported bit depth {bits}, want 16")));
    }
    let data = data.ok_or_else(|| bad(path, "missing data chunk"))?;
    let samples: Vec<f64> = data
        .chunks_exact(2)
        .map(|pair| i16::from_le_bytes([pair[0], pair[1]]) as f64 / 32768.0)
        .collect();
    Waveform::new(samples, sample_rate)
}

/// Writes a waveform as a canonical 44-byte-header 16-bit PCM mono WAV.
pub fn write_wav(path: &Path, waveform: &Waveform) -> Result<(), AudioError> {
    let n = waveform.len() as u32;
    let data_len = n * 2;
    let sample_rate = waveform.sample_rate();
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in waveform.samples() {
        let v = (s * 32767.0).round().clamp(-32768.0, 32767.0) as i16;
        out.write_all(&v.to_le_bytes()).expect("vec write");
    }
    std::fs::write(path, out)
        .map_err(|source| AudioError::Write { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wav_round_trips_within_quantization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tone.wav");
        let samples: Vec<f64> =
            (0..2400).map(|i| 0.5 * (2.0 * std::f64::consts::PI * 220.0 * i as f64 / 24000.0).sin()).collect();
        let wave = Waveform::new(samples.clone(), 24000).unwrap();
        write_wav(&path, &wave).unwrap();
        let back = read_wav(&path).unwrap();
        assert_eq!(back.sample_rate(), 24000);
        assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(back.samples()) {
            assert!((a - b).abs() < 1.0 / 32000.0, "{a} vs {b}");
        }
    }

    #[test]
    fn stereo_is_rejected_with_a_clear_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"RIFF");
        bytes.extend_from_slice(&40u32.to_le_bytes());
        bytes.extend_from_slice(b"WAVE");
        bytes.extend_from_slice(b"fmt ");
        bytes.extend_from_slice(&16u32.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&2u16.to_le_bytes()); // stereo
        bytes.extend_from_slice(&24000u32.to_le_bytes());
        bytes.extend_from_slice(&(24000u32 * 4).to_le_bytes());
        bytes.extend_from_slice(&4u16.to_le_bytes());
        bytes.extend_from_slice(&16u16.to_le_bytes());
        bytes.extend_from_slice(b"data");
        bytes.extend_from_slice(&4u32.to_le_bytes());
        bytes.extend_from_slice(&[0, 0, 0, 0]);
        std::fs::write(&path, bytes).unwrap();
        match read_wav(&path) {
            Err(AudioError::NotMono { channels, .. }) => assert_eq!(channels, 2),
            other => panic!("expected NotMono, got {other:?}"),
        }
    }

    #[test]
    fn garbage_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("garbage.wav");
        std::fs::write(&path, b"not a wav").unwrap();
        assert!(read_wav(&path).is_err());
    }
}
