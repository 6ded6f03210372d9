//! Prosody prediction and the loss algebra around it.
//!
//! A deterministic context-window featurizer stands in for the learned
//! contextual encoder behind the same interface: one vector per token,
//! consumed together with a style vector by three affine regression heads
//! (duration, pitch, energy). Training is seeded full-batch gradient descent
//! with analytic gradients that finite differences can verify. The decoder
//! stays out of scope; its contribution to the joint loss comes from a
//! pluggable [`DecoderLossHook`], and the perceptual term of the
//! reconstruction loss from a pluggable [`PerceptualLoss`].

mod hooks;
mod losses;
mod predictor;
mod train;

pub use hooks::{
    decoder_loss_registry, perceptual_loss_registry, DecoderLossHook, DecoderLossRegistry,
    LinearReadoutDecoderLoss, PerceptualLoss, PerceptualLossRegistry, ZeroDecoderLoss,
    ZeroPerceptualLoss,
};
pub use losses::{joint_loss, loss_freq, loss_time, recon_loss, LossWeights};
pub use predictor::{
    contextual_representation, load_predictor, predict_prosody, save_predictor, Activation,
    AffineHead, ContextualRepresentation, PhonemeEmbedding, PredictedProsody, ProsodyPredictor,
    PREDICTOR_MAGIC, PREDICTOR_VERSION,
};
pub use train::{
    evaluate_joint, loss_and_gradients, phoneme_targets, train_predictors, Gradients,
    JointLossReport, TrainConfig, TrainReport, TrainingExample,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProsodyError {
    #[error("waveforms differ: {0}")]
    WaveformMismatch(String),
    #[error("mel frames differ: {0}")]
    MelMismatch(String),
    #[error("loss inputs must be finite and non-negative, found {0}")]
    BadLossInput(f64),
    #[error("loss weights must be finite and non-negative, found {0}")]
    BadLossWeight(f64),
    #[error("input dimension mismatch: model expects {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("training dataset is empty")]
    EmptyDataset,
    #[error("invalid training example {index}: {message}")]
    BadExample { index: usize, message: String },
    #[error("invalid model file: {0}")]
    BadModel(String),
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
}
