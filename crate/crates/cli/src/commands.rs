//! Implementations of the `thaifront` subcommands.

use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use thaifront_core::audio::{
    extract_energy, extract_pitch, load_alignment, mel_spectrogram, phoneme_durations,
    read_feature_record, read_wav, style_vector, write_feature_record, FeatureRecord, PitchConfig,
    StyleVector,
};
use thaifront_core::corpus::{
    load_pause_corpus, nfc, parse_phoneme_tone_annotations, render_pause_annotation,
    render_phoneme_tone_annotations, Lexicon, PhonemeToneEntry,
};
use thaifront_core::encoding::{encode as encode_seq, EncodedSequence, PhonemeVocab};
use thaifront_core::metrics::{cer, cosine_sim, segmentation_f1, stoi, wer, StoiConfig};
use thaifront_core::pause::{
    override_threshold, predict_pauses, save_pause_model, train_pause_model, PauseModelRegistry,
};
use thaifront_core::phonology::{fallback_registry, G2pEngine, ToneRuleTable};
use thaifront_core::pipeline::{validate_config, PipelineConfig, PipelineEngine};
use thaifront_core::prosody::{
    decoder_loss_registry, evaluate_joint, save_predictor, train_predictors, TrainConfig,
    TrainingExample,
};
use thaifront_core::segment::{segment_with, Segmentation, TieBreak, TrieIndex};

use crate::{AppError, ConfigArgs};

fn stdin_lines() -> impl Iterator<Item = io::Result<String>> {
    io::stdin().lock().lines()
}

fn read_lines(path: &Path) -> Result<Vec<String>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::data(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.lines().map(str::to_string).collect())
}

/// Paths inside list files resolve relative to the list file's directory.
fn resolve_relative(base: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn resolve_config(args: &ConfigArgs) -> Result<PipelineConfig, AppError> {
    let mut cfg = PipelineConfig::resolve(args.config.as_deref())?;
    if let Some(p) = &args.lexicon {
        cfg.lexicon = Some(p.clone());
    }
    if let Some(p) = &args.vocab {
        cfg.vocab = Some(p.clone());
    }
    if let Some(p) = &args.pause_model {
        cfg.pause_model = Some(p.clone());
    }
    if let Some(p) = &args.exceptions {
        cfg.exceptions = Some(p.clone());
    }
    if let Some(p) = &args.rules_table {
        cfg.rules_table = Some(p.clone());
    }
    if let Some(p) = &args.annotations {
        cfg.annotations = Some(p.clone());
    }
    if let Some(f) = &args.fallback {
        cfg.fallback = f.clone();
    }
    if let Some(t) = &args.tag {
        cfg.pause_tag = t.clone();
    }
    if let Some(t) = args.threshold {
        cfg.pause_threshold = Some(t);
    }
    if let Some(t) = &args.tie_break {
        cfg.tie_break = TieBreak::from_name(t)
            .ok_or_else(|| AppError::data(format!("unknown tie-break `{t}`")))?;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

pub fn segment(lexicon: &Path, sep: &str, tie_break: &str) -> Result<(), AppError> {
    let tie = TieBreak::from_name(tie_break)
        .ok_or_else(|| AppError::data(format!("unknown tie-break `{tie_break}`")))?;
    let lex = Lexicon::load(lexicon)?;
    let trie = TrieIndex::build(&lex)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for line in stdin_lines() {
        let line = line.map_err(AppError::from)?;
        let seg = segment_with(&nfc(&line), &trie, tie);
        writeln!(out, "{}", seg.tokens.join(sep)).map_err(AppError::from)?;
    }
    Ok(())
}

pub fn pauses_train(
    corpus: &Path,
    lexicon: &Path,
    out: &Path,
    window: usize,
    threshold: Option<f64>,
    tag: &str,
) -> Result<(), AppError> {
    let sentences = load_pause_corpus(corpus, tag)?;
    let lex = Lexicon::load(lexicon)?;
    let trie = TrieIndex::build(&lex)?;
    let mut model = train_pause_model(&sentences, &trie, window)?;
    if let Some(t) = threshold {
        model = model.with_threshold(t)?;
    }
    save_pause_model(&model, out)?;
    eprintln!(
        "trained ngram pause model on {} sentences (window {window}, prior {:.4}) -> {}",
        sentences.len(),
        model.prior(),
        out.display()
    );
    Ok(())
}

pub fn pauses_predict(
    model: &Path,
    lexicon: &Path,
    tag: &str,
    threshold: Option<f64>,
) -> Result<(), AppError> {
    let mut scorer = PauseModelRegistry::builtin().load(model)?;
    if let Some(t) = threshold {
        scorer = override_threshold(scorer, t);
    }
    let lex = Lexicon::load(lexicon)?;
    let trie = TrieIndex::build(&lex)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for line in stdin_lines() {
        let line = line.map_err(AppError::from)?;
        let annotated = predict_pauses(&nfc(&line), scorer.as_ref(), &trie);
        writeln!(out, "{}", render_pause_annotation(&annotated, tag)).map_err(AppError::from)?;
    }
    Ok(())
}

pub fn g2p(
    exceptions: Option<&Path>,
    rules_table: Option<&Path>,
    fallback: &str,
    annotations: Option<&Path>,
) -> Result<(), AppError> {
    let exception_map = match exceptions {
        Some(path) => {
            let entries = thaifront_core::corpus::load_phoneme_tone_annotations(path)?;
            G2pEngine::exceptions_from_entries(&entries)
        }
        None => Default::default(),
    };
    let rules = match rules_table {
        Some(path) => ToneRuleTable::load(path)?,
        None => ToneRuleTable::builtin().clone(),
    };
    let annotation_entries = match annotations {
        Some(path) => Some(thaifront_core::corpus::load_phoneme_tone_annotations(path)?),
        None => None,
    };
    let fb = fallback_registry().build(fallback, annotation_entries.as_deref())?;
    let engine = G2pEngine::new(exception_map, rules, fb);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut failed = 0usize;
    for (idx, line) in stdin_lines().enumerate() {
        let line = line.map_err(AppError::from)?;
        let word = nfc(line.trim());
        if word.is_empty() {
            continue;
        }
        match engine.convert(&word) {
            Ok(pronunciation) => {
                let entry = PhonemeToneEntry { word, pronunciation };
                out.write_all(render_phoneme_tone_annotations(&[entry]).as_bytes())
                    .map_err(AppError::from)?;
            }
            Err(e) => {
                eprintln!("line {}: {e}", idx + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(AppError::data(format!("{failed} word(s) failed G2P")));
    }
    Ok(())
}

pub fn build_vocab(annotations: &Path, out: &Path) -> Result<(), AppError> {
    let entries = thaifront_core::corpus::load_phoneme_tone_annotations(annotations)?;
    let vocab = PhonemeVocab::build(&entries)?;
    vocab.save(out)?;
    eprintln!(
        "built vocabulary: {} base phoneme(s), {} id(s) -> {}",
        vocab.base_len(),
        vocab.len(),
        out.display()
    );
    Ok(())
}

pub fn encode(vocab: &Path) -> Result<(), AppError> {
    let vocab = PhonemeVocab::load(vocab)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut unknown = 0usize;
    for (idx, line) in stdin_lines().enumerate() {
        let line = line.map_err(AppError::from)?;
        if line.trim().is_empty() {
            continue;
        }
        let entries = parse_phoneme_tone_annotations(&line, "<stdin>")
            .map_err(|e| AppError::data(format!("line {}: {e}", idx + 1)))?;
        for entry in entries {
            let outcome = encode_seq(&entry.pronunciation, &vocab);
            unknown += outcome.unknown_count;
            let ids: Vec<String> =
                outcome.sequence.ids.iter().map(|id| id.to_string()).collect();
            writeln!(out, "{}", ids.join(" ")).map_err(AppError::from)?;
        }
    }
    if unknown > 0 {
        eprintln!("{unknown} phoneme(s) mapped to the unknown token");
    }
    Ok(())
}

pub fn features(
    manifest: &Path,
    out_dir: &Path,
    encoded: Option<&Path>,
    config: Option<&Path>,
    style_dim: Option<usize>,
) -> Result<(), AppError> {
    let cfg = PipelineConfig::resolve(config)?;
    let style_dim = style_dim.unwrap_or(cfg.style_dim);
    let records = thaifront_core::corpus::load_manifest(manifest)?;
    let encoded_lines: Option<Vec<Vec<u32>>> = match encoded {
        Some(path) => Some(parse_id_lines(path)?),
        None => None,
    };
    std::fs::create_dir_all(out_dir)
        .map_err(|e| AppError::data(format!("cannot create {}: {e}", out_dir.display())))?;
    // Pitch frames must share the mel frame grid.
    let pitch_cfg = PitchConfig { win: cfg.mel.win, hop: cfg.mel.hop, ..cfg.pitch.clone() };
    let mut index = String::new();
    for (i, record) in records.iter().enumerate() {
        let context = |msg: String| AppError::data(format!("record {i} ({}): {msg}", record.audio_path));
        let wav_path = resolve_relative(manifest, &record.audio_path);
        let wave = read_wav(&wav_path).map_err(|e| context(e.to_string()))?;
        if wave.sample_rate() != record.sample_rate {
            return Err(context(format!(
                "manifest says {} Hz but file is {} Hz",
                record.sample_rate,
                wave.sample_rate()
            )));
        }
        let mel = mel_spectrogram(&wave, &cfg.mel).map_err(|e| context(e.to_string()))?;
        let pitch = extract_pitch(&wave, &pitch_cfg);
        let energy = extract_energy(&mel);
        let n_frames = mel.n_frames();
        let durations = match &record.alignment_path {
            Some(alignment_path) => {
                let alignment = load_alignment(&resolve_relative(manifest, alignment_path))
                    .map_err(|e| context(e.to_string()))?;
                phoneme_durations(alignment.entries.len(), n_frames, Some(&alignment))
                    .map_err(|e| context(e.to_string()))?
            }
            None => {
                let ids = encoded_lines
                    .as_ref()
                    .and_then(|lines| lines.get(i))
                    .ok_or_else(|| {
                        context("no alignment and no --encoded line for this record".into())
                    })?;
                phoneme_durations(ids.len(), n_frames, None).map_err(|e| context(e.to_string()))?
            }
        };
        let prosody = thaifront_core::audio::ProsodyFeatures::new(durations, pitch, energy)
            .map_err(|e| context(e.to_string()))?;
        let style = style_vector(&mel, style_dim).map_err(|e| context(e.to_string()))?;
        let stem = Path::new(&record.audio_path)
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| format!("utt{i}"));
        let file_name = format!("{i:05}_{stem}.thfr");
        write_feature_record(&out_dir.join(&file_name), &FeatureRecord { mel, prosody, style })
            .map_err(|e| context(e.to_string()))?;
        index.push_str(&file_name);
        index.push('\n');
    }
    std::fs::write(out_dir.join("features.idx"), index)
        .map_err(|e| AppError::data(format!("cannot write index: {e}")))?;
    eprintln!("wrote {} feature record(s) to {}", records.len(), out_dir.display());
    Ok(())
}

fn parse_id_lines(path: &Path) -> Result<Vec<Vec<u32>>, AppError> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(idx, line)| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| {
                        AppError::data(format!(
                            "{}:{}: `{tok}` is not a token id",
                            path.display(),
                            idx + 1
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

pub struct TrainArgs {
    pub features: PathBuf,
    pub encoded: PathBuf,
    pub vocab: PathBuf,
    pub out: PathBuf,
    pub steps: Option<usize>,
    pub lr: Option<f64>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub decoder_hook: String,
    pub config: Option<PathBuf>,
}

pub fn train(args: TrainArgs) -> Result<(), AppError> {
    let cfg = PipelineConfig::resolve(args.config.as_deref())?;
    let train_cfg = TrainConfig {
        steps: args.steps.unwrap_or(cfg.train_steps),
        learning_rate: args.lr.unwrap_or(cfg.train_lr),
        seed: args.seed.unwrap_or(cfg.seed),
        window: args.window.unwrap_or(cfg.train_window),
        ..TrainConfig::default()
    };
    let vocab = PhonemeVocab::load(&args.vocab)?;
    let id_lines = parse_id_lines(&args.encoded)?;
    let index_path = args.features.join("features.idx");
    let index = read_lines(&index_path)?;
    let file_names: Vec<&String> = index.iter().filter(|l| !l.trim().is_empty()).collect();
    if file_names.len() != id_lines.len() {
        return Err(AppError::data(format!(
            "{} feature record(s) but {} encoded line(s)",
            file_names.len(),
            id_lines.len()
        )));
    }
    let mut dataset = Vec::with_capacity(file_names.len());
    for (i, name) in file_names.iter().enumerate() {
        let record = read_feature_record(&args.features.join(name))?;
        let ids = id_lines[i].clone();
        let encoded =
            EncodedSequence { ids: ids.clone(), syllable_spans: vec![(0, ids.len())] };
        dataset.push(TrainingExample {
            encoded,
            style: record.style,
            features: record.prosody,
            mel: Some(record.mel),
        });
    }
    let (model, report) = train_predictors(&dataset, vocab.len(), &train_cfg)?;
    save_predictor(&args.out, &model)?;
    let hook = decoder_loss_registry().build(&args.decoder_hook)?;
    let joint = evaluate_joint(&model, &dataset, vocab.len(), train_cfg.window, hook.as_ref())?;
    eprintln!(
        "trained on {} utterance(s): loss {:.6} -> {:.6} in {} steps",
        dataset.len(),
        report.initial_loss,
        report.final_loss,
        report.steps
    );
    eprintln!(
        "joint loss ({} decoder hook): duration {:.6} + pitch {:.6} + energy {:.6} + decoder {:.6} = {:.6}",
        hook.name(),
        joint.duration,
        joint.pitch,
        joint.energy,
        joint.decoder,
        joint.total
    );
    Ok(())
}

fn grapheme_count(s: &str) -> usize {
    // Cluster counting via the same segmentation cer uses is enough here:
    // whitespace-trimmed line length in clusters.
    use unicode_segmentation::UnicodeSegmentation;
    s.graphemes(true).count()
}

pub fn eval(
    task: &str,
    reference: &Path,
    hypothesis: &Path,
    report_path: Option<&Path>,
) -> Result<(), AppError> {
    let ref_lines = read_lines(reference)?;
    let hyp_lines = read_lines(hypothesis)?;
    if ref_lines.len() != hyp_lines.len() {
        return Err(AppError::data(format!(
            "reference has {} line(s), hypothesis {}",
            ref_lines.len(),
            hyp_lines.len()
        )));
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut items = Vec::new();
    let config_echo;
    let aggregate;
    match task {
        "wer" | "cer" => {
            let mut total_edits = 0usize;
            let mut total_ref = 0usize;
            for (i, (r, h)) in ref_lines.iter().zip(&hyp_lines).enumerate() {
                let (rate, ops, ref_len) = if task == "wer" {
                    let r_tok: Vec<&str> = r.split_whitespace().collect();
                    let h_tok: Vec<&str> = h.split_whitespace().collect();
                    let (rate, ops) = wer(&r_tok, &h_tok)
                        .map_err(|e| AppError::data(format!("line {}: {e}", i + 1)))?;
                    (rate, ops, r_tok.len())
                } else {
                    let (rate, ops) = cer(r, h)
                        .map_err(|e| AppError::data(format!("line {}: {e}", i + 1)))?;
                    (rate, ops, grapheme_count(r))
                };
                total_edits += ops.distance();
                total_ref += ref_len;
                writeln!(out, "{i}\t{rate:.6}").map_err(AppError::from)?;
                items.push(json!({
                    "index": i,
                    "rate": rate,
                    "substitutions": ops.substitutions,
                    "insertions": ops.insertions,
                    "deletions": ops.deletions,
                }));
            }
            let pooled = total_edits as f64 / total_ref.max(1) as f64;
            aggregate = json!({ "pooled_rate": pooled, "total_edits": total_edits, "total_reference": total_ref });
            config_echo = json!({
                "tokenization": if task == "wer" { "whitespace" } else { "grapheme-clusters" }
            });
            writeln!(out, "# pooled {task} {pooled:.6}").map_err(AppError::from)?;
        }
        "stoi" => {
            let cfg = StoiConfig::default();
            let mut sum = 0.0;
            for (i, (r, h)) in ref_lines.iter().zip(&hyp_lines).enumerate() {
                if r.trim().is_empty() {
                    continue;
                }
                let clean = read_wav(&resolve_relative(reference, r.trim()))?;
                let processed = read_wav(&resolve_relative(hypothesis, h.trim()))?;
                let score = stoi(&clean, &processed, &cfg)
                    .map_err(|e| AppError::data(format!("pair {}: {e}", i + 1)))?;
                sum += score;
                writeln!(out, "{i}\t{score:.6}").map_err(AppError::from)?;
                items.push(json!({ "index": i, "stoi": score }));
            }
            let mean = sum / items.len().max(1) as f64;
            aggregate = json!({ "mean_stoi": mean, "pairs": items.len() });
            config_echo = serde_json::to_value(&cfg).expect("config serializes");
            writeln!(out, "# mean stoi {mean:.6}").map_err(AppError::from)?;
        }
        "sim" => {
            let parse_vec = |line: &str, where_: String| -> Result<StyleVector, AppError> {
                let values: Result<Vec<f64>, _> =
                    line.split_whitespace().map(str::parse::<f64>).collect();
                values
                    .map(|values| StyleVector { values })
                    .map_err(|_| AppError::data(format!("{where_}: bad vector")))
            };
            let mut sum = 0.0;
            for (i, (r, h)) in ref_lines.iter().zip(&hyp_lines).enumerate() {
                if r.trim().is_empty() {
                    continue;
                }
                let a = parse_vec(r, format!("reference line {}", i + 1))?;
                let b = parse_vec(h, format!("hypothesis line {}", i + 1))?;
                let score = cosine_sim(&a, &b)
                    .map_err(|e| AppError::data(format!("pair {}: {e}", i + 1)))?;
                sum += score;
                writeln!(out, "{i}\t{score:.6}").map_err(AppError::from)?;
                items.push(json!({ "index": i, "cosine": score }));
            }
            let mean = sum / items.len().max(1) as f64;
            aggregate = json!({ "mean_cosine": mean, "pairs": items.len() });
            config_echo = json!({});
            writeln!(out, "# mean cosine {mean:.6}").map_err(AppError::from)?;
        }
        "seg" => {
            let to_seg = |line: &str| -> Segmentation {
                let tokens: Vec<String> = if line.is_empty() {
                    Vec::new()
                } else {
                    line.split('|').map(str::to_string).collect()
                };
                let flags = vec![false; tokens.len()];
                Segmentation { tokens, oov_flags: flags }
            };
            let (mut sp, mut sr, mut sf) = (0.0, 0.0, 0.0);
            for (i, (r, h)) in ref_lines.iter().zip(&hyp_lines).enumerate() {
                let prf = segmentation_f1(&to_seg(r), &to_seg(h))
                    .map_err(|e| AppError::data(format!("line {}: {e}", i + 1)))?;
                sp += prf.precision;
                sr += prf.recall;
                sf += prf.f1;
                writeln!(out, "{i}\t{:.6}\t{:.6}\t{:.6}", prf.precision, prf.recall, prf.f1)
                    .map_err(AppError::from)?;
                items.push(json!({
                    "index": i,
                    "precision": prf.precision,
                    "recall": prf.recall,
                    "f1": prf.f1,
                }));
            }
            let n = items.len().max(1) as f64;
            aggregate = json!({
                "mean_precision": sp / n,
                "mean_recall": sr / n,
                "mean_f1": sf / n,
                "lines": items.len(),
            });
            config_echo = json!({ "boundaries": "inter-character" });
            writeln!(out, "# mean f1 {:.6}", sf / n).map_err(AppError::from)?;
        }
        other => return Err(AppError::data(format!("unknown task `{other}`"))),
    }
    if let Some(path) = report_path {
        let report = json!({
            "task": task,
            "config": config_echo,
            "items": items,
            "aggregate": aggregate,
        });
        std::fs::write(path, serde_json::to_string_pretty(&report).expect("report serializes"))
            .map_err(|e| AppError::data(format!("cannot write report: {e}")))?;
    }
    Ok(())
}

pub fn pipeline(
    args: &ConfigArgs,
    emit_stages: Option<&Path>,
    strict: bool,
) -> Result<(), AppError> {
    let cfg = resolve_config(args)?;
    let engine = PipelineEngine::load(&cfg)?;
    let lines: Vec<String> =
        stdin_lines().collect::<Result<_, _>>().map_err(AppError::from)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut tagged_stage = String::new();
    let mut tokens_stage = String::new();
    let mut g2p_stage = String::new();
    let mut ids_stage = String::new();
    let mut failed = 0usize;
    for (i, line) in lines.iter().enumerate() {
        match engine.run_line(line) {
            Ok(output) => {
                let ids: Vec<String> = output.ids.iter().map(|id| id.to_string()).collect();
                let ids_line = ids.join(" ");
                writeln!(out, "{ids_line}").map_err(AppError::from)?;
                if emit_stages.is_some() {
                    tagged_stage.push_str(&output.tagged);
                    tagged_stage.push('\n');
                    tokens_stage.push_str(&output.tokens.join("|"));
                    tokens_stage.push('\n');
                    for (token, pron) in output.tokens.iter().zip(&output.pronunciations) {
                        if let Some(pron) = pron {
                            let entry = PhonemeToneEntry {
                                word: token.clone(),
                                pronunciation: pron.clone(),
                            };
                            g2p_stage.push_str(&render_phoneme_tone_annotations(&[entry]));
                        }
                    }
                    ids_stage.push_str(&ids_line);
                    ids_stage.push('\n');
                }
            }
            Err(e) => {
                failed += 1;
                eprintln!("line {}: {e}", i + 1);
                if strict {
                    return Err(AppError::data(format!("aborted at line {} (--strict)", i + 1)));
                }
                writeln!(out).map_err(AppError::from)?;
                if emit_stages.is_some() {
                    tagged_stage.push('\n');
                    tokens_stage.push('\n');
                    ids_stage.push('\n');
                }
            }
        }
    }
    if let Some(dir) = emit_stages {
        std::fs::create_dir_all(dir)
            .map_err(|e| AppError::data(format!("cannot create {}: {e}", dir.display())))?;
        for (name, contents) in [
            ("tagged.txt", &tagged_stage),
            ("tokens.txt", &tokens_stage),
            ("g2p.tsv", &g2p_stage),
            ("ids.txt", &ids_stage),
        ] {
            std::fs::write(dir.join(name), contents)
                .map_err(|e| AppError::data(format!("cannot write {name}: {e}")))?;
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} line(s) failed", lines.len());
    }
    Ok(())
}

pub fn validate(args: &ConfigArgs, as_json: bool) -> Result<(), AppError> {
    let cfg = resolve_config(args)?;
    let report = validate_config(&cfg);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else if report.issues.is_empty() {
        println!("ok");
    } else {
        for issue in &report.issues {
            println!(
                "{}\t{}\t{}",
                match issue.severity {
                    thaifront_core::pipeline::Severity::Error => "error",
                    thaifront_core::pipeline::Severity::Warning => "warning",
                },
                issue.field,
                issue.message
            );
        }
    }
    if report.has_errors() {
        let n = report
            .issues
            .iter()
            .filter(|i| i.severity == thaifront_core::pipeline::Severity::Error)
            .count();
        return Err(AppError::data(format!("{n} validation error(s)")));
    }
    Ok(())
}
