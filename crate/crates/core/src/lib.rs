//! Thai text-to-speech front-end toolkit.
//!
//! Turns raw, unspaced Thai text into model-ready phoneme-tone token
//! sequences and provides the desk-scale machinery around that pipeline:
//!
//! - [`corpus`] — loaders and writers for every file format the pipeline
//!   touches (lexicon, pause annotations, phoneme-tone annotations, audio
//!   manifests)
//! - [`segment`] — dictionary segmentation over a prefix trie, with an
//!   exhaustive brute-force oracle for testing
//! - [`pause`] — prosodic pause prediction behind a pluggable scorer
//!   interface, with a smoothed count-based baseline
//! - [`phonology`] — syllable parsing, the consonant-class/tone-mark tone
//!   grid, and rule-based grapheme-to-phoneme conversion with an exception
//!   dictionary
//! - [`encoding`] — the tone-merged phoneme token vocabulary and the
//!   length-preserving encoder/decoder
//! - [`audio`] — mel spectrograms, autocorrelation pitch, energy, phoneme
//!   durations, style vectors, and the binary feature-record format
//! - [`prosody`] — contextual token representations, duration/pitch/energy
//!   predictors, loss compositions, and seeded full-batch training
//! - [`metrics`] — WER/CER, STOI, cosine similarity, and segmentation
//!   boundary F1
//! - [`pipeline`] — configuration, validation, and the end-to-end
//!   text-to-token-ids pipeline

pub mod audio;
pub mod corpus;
pub mod encoding;
pub mod metrics;
pub mod pause;
pub mod phonology;
pub mod pipeline;
pub mod prosody;
pub mod segment;
