//! `thaifront`: the Thai TTS text front-end as a command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "thaifront", version, about = "Thai TTS text front-end", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Flat key-value config file; flags override file and environment.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    pause_model: Option<PathBuf>,
    #[arg(long)]
    exceptions: Option<PathBuf>,
    #[arg(long)]
    rules_table: Option<PathBuf>,
    #[arg(long)]
    annotations: Option<PathBuf>,
    /// G2P fallback strategy (none, most-frequent).
    #[arg(long)]
    fallback: Option<String>,
    /// Pause tag literal.
    #[arg(long)]
    tag: Option<String>,
    /// Pause decision threshold override.
    #[arg(long)]
    threshold: Option<f64>,
    /// Segmentation tie-break (longest-first, frequency).
    #[arg(long)]
    tie_break: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Segment stdin lines into lexicon words.
    Segment {
        #[arg(long)]
        lexicon: PathBuf,
        /// Token separator in the output.
        #[arg(long, default_value = "|")]
        sep: String,
        #[arg(long, default_value = "longest-first")]
        tie_break: String,
    },
    /// Train or apply a pause model.
    Pauses {
        #[command(subcommand)]
        action: PausesAction,
    },
    /// Convert words on stdin to phoneme-tone TSV.
    G2p {
        #[arg(long)]
        exceptions: Option<PathBuf>,
        #[arg(long)]
        rules_table: Option<PathBuf>,
        /// Fallback strategy (none, most-frequent).
        #[arg(long, default_value = "none")]
        fallback: String,
        /// Annotation file backing the most-frequent fallback.
        #[arg(long)]
        annotations: Option<PathBuf>,
    },
    /// Encode phoneme-tone TSV lines from stdin into token ids, or build
    /// the vocabulary itself.
    Encode {
        /// Vocabulary TSV used for encoding.
        #[arg(long, required_unless_present = "build_vocab", conflicts_with = "build_vocab")]
        vocab: Option<PathBuf>,
        /// Build a vocabulary from this annotation file instead of encoding.
        #[arg(long, requires = "out")]
        build_vocab: Option<PathBuf>,
        /// Where to write the built vocabulary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract feature records for every utterance of a manifest.
    Features {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Encoded id lines (one per utterance) supplying phoneme counts
        /// when a record has no alignment.
        #[arg(long)]
        encoded: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        style_dim: Option<usize>,
    },
    /// Train the prosody predictors on extracted features.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        encoded: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        window: Option<usize>,
        /// Decoder-loss hook for the joint loss report (zero,
        /// linear-readout).
        #[arg(long, default_value = "zero")]
        decoder_hook: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Score reference/hypothesis pairs.
    Eval {
        #[arg(long, value_parser = ["wer", "cer", "stoi", "sim", "seg"])]
        task: String,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        /// Write the JSON report here as well.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the full front-end on stdin lines.
    Pipeline {
        #[command(flatten)]
        config: ConfigArgs,
        /// Write each stage's intermediate output into this directory.
        #[arg(long)]
        emit_stages: Option<PathBuf>,
        /// Abort on the first failing line instead of continuing.
        #[arg(long)]
        strict: bool,
    },
    /// Validate a pipeline configuration without running it.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum PausesAction {
    /// Estimate a count-based pause model from a tagged corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        window: usize,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value = "<SPACE>")]
        tag: String,
    },
    /// Insert pause tags into stdin lines.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long, default_value = "<SPACE>")]
        tag: String,
        #[arg(long)]
        threshold: Option<f64>,
    },
}

/// Failures carry the exit code they map to.
pub struct AppError {
    pub code: u8,
    pub message: String,
}

impl AppError {
    pub fn data(message: impl Into<String>) -> AppError {
        AppError { code: 2, message: message.into() }
    }
}

impl<E: std::error::Error> From<E> for AppError {
    fn from(e: E) -> AppError {
        AppError::data(e.to_string())
    }
}

fn run() -> Result<(), AppError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, everything else is a
            // usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match cli.command {
        Command::Segment { lexicon, sep, tie_break } => {
            commands::segment(&lexicon, &sep, &tie_break)
        }
        Command::Pauses { action } => match action {
            PausesAction::Train { corpus, lexicon, out, window, threshold, tag } => {
                commands::pauses_train(&corpus, &lexicon, &out, window, threshold, &tag)
            }
            PausesAction::Predict { model, lexicon, tag, threshold } => {
                commands::pauses_predict(&model, &lexicon, &tag, threshold)
            }
        },
        Command::G2p { exceptions, rules_table, fallback, annotations } => commands::g2p(
            exceptions.as_deref(),
            rules_table.as_deref(),
            &fallback,
            annotations.as_deref(),
        ),
        Command::Encode { vocab, build_vocab, out } => match build_vocab {
            Some(annotations) => {
                commands::build_vocab(&annotations, &out.expect("clap enforces --out"))
            }
            None => commands::encode(&vocab.expect("clap enforces --vocab")),
        },
        Command::Features { manifest, out, encoded, config, style_dim } => {
            commands::features(&manifest, &out, encoded.as_deref(), config.as_deref(), style_dim)
        }
        Command::Train {
            features,
            encoded,
            vocab,
            out,
            steps,
            lr,
            seed,
            window,
            decoder_hook,
            config,
        } => commands::train(commands::TrainArgs {
            features,
            encoded,
            vocab,
            out,
            steps,
            lr,
            seed,
            window,
            decoder_hook,
            config,
        }),
        Command::Eval { task, reference, hyp, report } => {
            commands::eval(&task, &reference, &hyp, report.as_deref())
        }
        Command::Pipeline { config, emit_stages, strict } => {
            commands::pipeline(&config, emit_stages.as_deref(), strict)
        }
        Command::Validate { config, json } => commands::validate(&config, json),
    }
}

fn main() -> ExitCode {
    match std::panic::catch_unwind(run) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            eprintln!("internal error: {message}");
            ExitCode::from(3)
        }
    }
}
