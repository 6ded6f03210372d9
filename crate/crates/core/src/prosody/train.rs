//! Seeded full-batch gradient-descent training of the prediction heads.

use super::hooks::DecoderLossHook;
use super::losses::joint_loss;
use super::predictor::{
    contextual_representation, predict_prosody, ContextualRepresentation, ProsodyPredictor,
};
use super::ProsodyError;
use crate::audio::{MelFrames, ProsodyFeatures, StyleVector};
use crate::encoding::EncodedSequence;

/// One training utterance. The mel spectrogram is only needed when a
/// decoder-loss hook wants it.
#[derive(Debug, Clone)]
pub struct TrainingExample {
    pub encoded: EncodedSequence,
    pub style: StyleVector,
    pub features: ProsodyFeatures,
    pub mel: Option<MelFrames>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub steps: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// Context window of the featurizer.
    pub window: usize,
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { steps: 1000, learning_rate: 0.5, seed: 0, window: 2, init_scale: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub initial_loss: f64,
    pub final_loss: f64,
    pub steps: usize,
}

/// Per-head parameter gradients in the same layout as the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub duration_weights: Vec<f64>,
    pub duration_bias: f64,
    pub pitch_weights: Vec<f64>,
    pub pitch_bias: f64,
    pub energy_weights: Vec<f64>,
    pub energy_bias: f64,
}

/// Per-phoneme training targets derived from frame-level features: the
/// duration itself, and pitch/energy averaged over each phoneme's duration
/// span. Zero-length spans average to 0.
pub fn phoneme_targets(features: &ProsodyFeatures) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut durations = Vec::with_capacity(features.durations.len());
    let mut pitch = Vec::with_capacity(features.durations.len());
    let mut energy = Vec::with_capacity(features.durations.len());
    let mut frame = 0usize;
    for &d in &features.durations {
        let d = d as usize;
        durations.push(d as f64);
        if d == 0 {
            pitch.push(0.0);
            energy.push(0.0);
        } else {
            let span = frame..frame + d;
            pitch.push(features.pitch[span.clone()].iter().sum::<f64>() / d as f64);
            energy.push(features.energy[span].iter().sum::<f64>() / d as f64);
            frame += d;
        }
    }
    (durations, pitch, energy)
}

struct Prepared {
    /// One input row per token: `[contextual row || style]`.
    inputs: Vec<Vec<f64>>,
    target_duration: Vec<f64>,
    target_pitch: Vec<f64>,
    target_energy: Vec<f64>,
    input_dim: usize,
    /// Token counts per example, for per-example prediction slicing.
    example_lens: Vec<usize>,
    reps: Vec<ContextualRepresentation>,
}

fn prepare(
    dataset: &[TrainingExample],
    vocab_size: usize,
    window: usize,
) -> Result<Prepared, ProsodyError> {
    if dataset.is_empty() {
        return Err(ProsodyError::EmptyDataset);
    }
    let style_dim = dataset[0].style.dim();
    let input_dim = 2 * vocab_size + style_dim;
    let mut prepared = Prepared {
        inputs: Vec::new(),
        target_duration: Vec::new(),
        target_pitch: Vec::new(),
        target_energy: Vec::new(),
        input_dim,
        example_lens: Vec::new(),
        reps: Vec::new(),
    };
    for (index, example) in dataset.iter().enumerate() {
        let bad = |message: String| ProsodyError::BadExample { index, message };
        if example.style.dim() != style_dim {
            return Err(bad(format!(
                "style dim {} differs from {} in the first example",
                example.style.dim(),
                style_dim
            )));
        }
        let n = example.encoded.ids.len();
        if n == 0 {
            return Err(bad("empty token sequence".into()));
        }
        if example.features.durations.len() != n {
            return Err(bad(format!(
                "{} durations for {n} tokens",
                example.features.durations.len()
            )));
        }
        let (d, p, e) = phoneme_targets(&example.features);
        if d.iter().chain(&p).chain(&e).any(|v| !v.is_finite()) {
            return Err(bad("non-finite target".into()));
        }
        let rep = contextual_representation(&example.encoded, vocab_size, window);
        for row in &rep.rows {
            let mut x = Vec::with_capacity(input_dim);
            x.extend_from_slice(row);
            x.extend_from_slice(&example.style.values);
            prepared.inputs.push(x);
        }
        prepared.target_duration.extend(d);
        prepared.target_pitch.extend(p);
        prepared.target_energy.extend(e);
        prepared.example_lens.push(n);
        prepared.reps.push(rep);
    }
    Ok(prepared)
}

fn head_loss_and_grad(
    head: &super::predictor::AffineHead,
    inputs: &[Vec<f64>],
    targets: &[f64],
    grad_w: &mut [f64],
) -> (f64, f64) {
    let m = inputs.len() as f64;
    let mut loss = 0.0;
    let mut grad_b = 0.0;
    grad_w.iter_mut().for_each(|g| *g = 0.0);
    for (x, &t) in inputs.iter().zip(targets) {
        let z = head.pre_activation(x);
        let y = head.activation.apply(z);
        let err = y - t;
        loss += err * err;
        let factor = 2.0 * err * head.activation.derivative(z) / m;
        for (g, &xi) in grad_w.iter_mut().zip(x) {
            *g += factor * xi;
        }
        grad_b += factor;
    }
    (loss / m, grad_b)
}

fn prepared_loss_and_grads(model: &ProsodyPredictor, data: &Prepared) -> (f64, Gradients) {
    let dim = model.input_dim;
    let mut grads = Gradients {
        duration_weights: vec![0.0; dim],
        duration_bias: 0.0,
        pitch_weights: vec![0.0; dim],
        pitch_bias: 0.0,
        energy_weights: vec![0.0; dim],
        energy_bias: 0.0,
    };
    let (ld, db) = head_loss_and_grad(
        &model.duration,
        &data.inputs,
        &data.target_duration,
        &mut grads.duration_weights,
    );
    grads.duration_bias = db;
    let (lp, pb) =
        head_loss_and_grad(&model.pitch, &data.inputs, &data.target_pitch, &mut grads.pitch_weights);
    grads.pitch_bias = pb;
    let (le, eb) = head_loss_and_grad(
        &model.energy,
        &data.inputs,
        &data.target_energy,
        &mut grads.energy_weights,
    );
    grads.energy_bias = eb;
    (ld + lp + le, grads)
}

/// Mean-squared training loss (summed over the three heads) and its analytic
/// gradient for every parameter.
pub fn loss_and_gradients(
    model: &ProsodyPredictor,
    dataset: &[TrainingExample],
    vocab_size: usize,
    window: usize,
) -> Result<(f64, Gradients), ProsodyError> {
    let data = prepare(dataset, vocab_size, window)?;
    if data.input_dim != model.input_dim {
        return Err(ProsodyError::DimensionMismatch {
            expected: model.input_dim,
            found: data.input_dim,
        });
    }
    Ok(prepared_loss_and_grads(model, &data))
}

/// Trains the three heads by plain full-batch gradient descent on the
/// mean-squared error of each per-phoneme target. Deterministic for a fixed
/// seed and single thread.
pub fn train_predictors(
    dataset: &[TrainingExample],
    vocab_size: usize,
    config: &TrainConfig,
) -> Result<(ProsodyPredictor, TrainReport), ProsodyError> {
    let data = prepare(dataset, vocab_size, config.window)?;
    let mut model = ProsodyPredictor::init(data.input_dim, config.seed, config.init_scale);
    let (initial_loss, _) = prepared_loss_and_grads(&model, &data);
    let mut final_loss = initial_loss;
    for _ in 0..config.steps {
        let (_, grads) = prepared_loss_and_grads(&model, &data);
        let lr = config.learning_rate;
        for (w, g) in model.duration.weights.iter_mut().zip(&grads.duration_weights) {
            *w -= lr * g;
        }
        model.duration.bias -= lr * grads.duration_bias;
        for (w, g) in model.pitch.weights.iter_mut().zip(&grads.pitch_weights) {
            *w -= lr * g;
        }
        model.pitch.bias -= lr * grads.pitch_bias;
        for (w, g) in model.energy.weights.iter_mut().zip(&grads.energy_weights) {
            *w -= lr * g;
        }
        model.energy.bias -= lr * grads.energy_bias;
        final_loss = prepared_loss_and_grads(&model, &data).0;
    }
    Ok((model, TrainReport { initial_loss, final_loss, steps: config.steps }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointLossReport {
    pub duration: f64,
    pub pitch: f64,
    pub energy: f64,
    pub decoder: f64,
    pub total: f64,
}

/// Evaluates the joint loss of a model on a dataset: per-head mean-squared
/// errors plus the decoder term from the hook, combined by [`joint_loss`].
pub fn evaluate_joint(
    model: &ProsodyPredictor,
    dataset: &[TrainingExample],
    vocab_size: usize,
    window: usize,
    hook: &dyn DecoderLossHook,
) -> Result<JointLossReport, ProsodyError> {
    let data = prepare(dataset, vocab_size, window)?;
    if data.input_dim != model.input_dim {
        return Err(ProsodyError::DimensionMismatch {
            expected: model.input_dim,
            found: data.input_dim,
        });
    }
    let (l_d, _) = head_loss_and_grad(
        &model.duration,
        &data.inputs,
        &data.target_duration,
        &mut vec![0.0; model.input_dim],
    );
    let (l_p, _) = head_loss_and_grad(
        &model.pitch,
        &data.inputs,
        &data.target_pitch,
        &mut vec![0.0; model.input_dim],
    );
    let (l_e, _) = head_loss_and_grad(
        &model.energy,
        &data.inputs,
        &data.target_energy,
        &mut vec![0.0; model.input_dim],
    );
    let mut decoder_sum = 0.0;
    for (i, example) in dataset.iter().enumerate() {
        let predicted = predict_prosody(&data.reps[i], &example.style, model)?;
        decoder_sum += hook.loss(&predicted, example)?;
    }
    let l_dec = decoder_sum / dataset.len() as f64;
    let total = joint_loss(l_d.max(0.0), l_p.max(0.0), l_e.max(0.0), l_dec.max(0.0))?;
    Ok(JointLossReport { duration: l_d, pitch: l_p, energy: l_e, decoder: l_dec, total })
}
