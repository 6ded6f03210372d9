//! Acceptance suite. Each test implements one numbered criterion at its
//! stated tolerance and prints one `[PASS]` line when it holds.
//!
//! Run with `cargo test -p thaifront-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use thaifront_core::audio::Waveform;
use thaifront_core::corpus::{
    parse_pause_annotation, render_pause_annotation, save_phoneme_tone_annotations, Lexicon,
    PhonemeToneEntry,
};
use thaifront_core::encoding::{decode, encode, PhonemeVocab};
use thaifront_core::metrics::{cosine_sim, stoi, wer, StoiConfig};
use thaifront_core::pause::{
    pause_gap_f1, predict_pauses, save_pause_model, train_pause_model, NoPauseModel,
};
use thaifront_core::phonology::{
    consonant_class, determine_tone_with, g2p_rules, G2pEngine, Liveness, NoFallback,
    PhonemeToneSequence, SyllableStructure, Tone, ToneMark, ToneRuleTable, ToneSyllable,
};
use thaifront_core::prosody::{
    joint_loss, loss_and_gradients, recon_loss, train_predictors, LossWeights, TrainConfig,
};
use thaifront_core::segment::{segment, segment_bruteforce, TieBreak, TrieIndex};

const TONE_RULES_FIXTURE: &str = include_str!("../../core/data/tone_rules.tsv");
const G2P_FIXTURE: &str = include_str!("../../core/tests/fixtures/g2p_words.tsv");

const THAI_POOL: &[char] = &['ก', 'ข', 'ค', 'ม', 'า', 'ต', 'ล', 'น', 'ส', 'ร'];
const MARK_POOL: &[char] = &['\u{0E48}', '\u{0E49}', '\u{0E4A}', '\u{0E31}', '\u{0E39}'];

fn random_word(rng: &mut StdRng, max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| THAI_POOL[rng.gen_range(0..THAI_POOL.len())]).collect()
}

fn random_text(rng: &mut StdRng, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let roll: f64 = rng.gen();
            if roll < 0.75 {
                THAI_POOL[rng.gen_range(0..THAI_POOL.len())]
            } else {
                MARK_POOL[rng.gen_range(0..MARK_POOL.len())]
            }
        })
        .collect()
}

#[test]
fn criterion_1_segmentation_oracle_equivalence_and_losslessness() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC1);
    for case in 0..500 {
        let mut lex = Lexicon::new();
        let n_words = rng.gen_range(1..=8);
        for _ in 0..n_words {
            let word = random_word(&mut rng, 4);
            if !lex.contains(&word) {
                lex.insert(&word, rng.gen_range(1..50)).unwrap();
            }
        }
        let trie = TrieIndex::build(&lex).unwrap();
        let text = random_text(&mut rng, 12);
        for tie in [TieBreak::LongestFirst, TieBreak::Frequency] {
            let best = segment(&text, &trie);
            let best = if tie == TieBreak::LongestFirst {
                best
            } else {
                thaifront_core::segment::segment_with(&text, &trie, tie)
            };
            let oracle = segment_bruteforce(&text, &lex, tie).unwrap();
            assert_eq!(
                best.cost(),
                oracle[0].cost(),
                "case {case}: cost mismatch for {text:?} under {tie:?}"
            );
            assert_eq!(best, oracle[0], "case {case}: output mismatch for {text:?}");
        }
    }
    // Losslessness over 10,000 fuzzed strings mixing Thai, combining marks,
    // and arbitrary Unicode scalars.
    let lex = Lexicon::from_words(["กา", "มา", "ตาก", "ลม"]).unwrap();
    let trie = TrieIndex::build(&lex).unwrap();
    for _ in 0..10_000 {
        let len = rng.gen_range(0..20);
        let text: String = (0..len)
            .map(|_| {
                let roll: f64 = rng.gen();
                if roll < 0.5 {
                    THAI_POOL[rng.gen_range(0..THAI_POOL.len())]
                } else if roll < 0.7 {
                    MARK_POOL[rng.gen_range(0..MARK_POOL.len())]
                } else {
                    // Arbitrary scalar, surrogates excluded by from_u32.
                    char::from_u32(rng.gen_range(0x20..0x2FFFF)).unwrap_or('x')
                }
            })
            .collect();
        let seg = segment(&text, &trie);
        assert_eq!(seg.concat(), text, "losslessness broke on {text:?}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "criterion 1 took {elapsed:?}");
    println!(
        "[PASS] criterion 1: segment equals brute-force optimum on 500 instances; \
         losslessness on 10000 fuzzed strings ({elapsed:?})"
    );
}

#[test]
fn criterion_2_tone_grid_totality_and_minimal_pair() {
    let fixture = ToneRuleTable::parse(TONE_RULES_FIXTURE).unwrap();
    // Reachable syllables for each (liveness, length) combination.
    let build = |class_char: char, liveness: Liveness, long: bool, mark: ToneMark| {
        let coda = match (liveness, long) {
            (Liveness::Live, true) => None,
            (Liveness::Live, false) => Some("n".to_string()),
            (Liveness::Dead, true) => Some("k".to_string()),
            (Liveness::Dead, false) => None,
        };
        SyllableStructure {
            surface: String::new(),
            onset: vec!["x".to_string()],
            onset_class: consonant_class(class_char).unwrap(),
            nucleus: if long { "aː" } else { "a" }.to_string(),
            long_vowel: long,
            coda,
            tone_mark: mark,
        }
    };
    let mut cells = 0;
    for (class_char, class_name) in [('ข', "high"), ('ก', "mid"), ('ค', "low")] {
        for liveness in [Liveness::Live, Liveness::Dead] {
            for long in [false, true] {
                for mark in ToneMark::ALL {
                    let syllable = build(class_char, liveness, long, mark);
                    assert_eq!(
                        syllable.liveness(),
                        liveness,
                        "constructed syllable has wrong liveness"
                    );
                    let got = determine_tone_with(&syllable, &fixture);
                    let expected = fixture.tone(
                        consonant_class(class_char).unwrap(),
                        liveness,
                        long,
                        mark,
                    );
                    assert_eq!(
                        got, expected,
                        "cell ({class_name}, {liveness:?}, long={long}, {mark:?})"
                    );
                    cells += 1;
                }
            }
        }
    }
    assert_eq!(cells, 60);
    // The Suea minimal pair: identical phonemes, tones per the fixture grid.
    let engine = G2pEngine::rules_only();
    let mat = engine.convert("เสื่อ").unwrap();
    let clothes = engine.convert("เสื้อ").unwrap();
    assert_eq!(mat.syllables.len(), 1);
    assert_eq!(mat.syllables[0].phonemes, clothes.syllables[0].phonemes);
    assert_eq!(mat.syllables[0].tone, Tone::Low);
    assert_eq!(clothes.syllables[0].tone, Tone::Falling);
    assert_ne!(mat.syllables[0].tone, clothes.syllables[0].tone);
    println!(
        "[PASS] criterion 2: tone grid total over all {cells} cells and equal to the fixture; \
         minimal pair shares phonemes with distinct tones"
    );
}

#[test]
fn criterion_3_encoding_length_preservation_and_inverse() {
    let inventory: Vec<&str> =
        vec!["k", "kʰ", "m", "n", "t", "s", "aː", "a", "iː", "ɯa", "ua", "ŋ", "w", "j"];
    let vocab = PhonemeVocab::from_phonemes(inventory.iter().copied());
    let mut rng = StdRng::seed_from_u64(0xC3);
    for case in 0..10_000 {
        let n_syllables = rng.gen_range(1..=5);
        let syllables: Vec<ToneSyllable> = (0..n_syllables)
            .map(|_| {
                let n_phonemes = rng.gen_range(1..=4);
                let phonemes: Vec<String> = (0..n_phonemes)
                    .map(|_| inventory[rng.gen_range(0..inventory.len())].to_string())
                    .collect();
                let tone = Tone::ALL[rng.gen_range(0..5)];
                ToneSyllable::new(phonemes, tone)
            })
            .collect();
        let seq = PhonemeToneSequence::new(syllables).unwrap();
        let outcome = encode(&seq, &vocab);
        assert_eq!(outcome.unknown_count, 0);
        assert_eq!(
            outcome.sequence.len(),
            seq.phoneme_count(),
            "case {case}: length not preserved"
        );
        let back = decode(&outcome.sequence, &vocab).unwrap();
        assert_eq!(back, seq, "case {case}: decode(encode(x)) != x");
    }
    println!(
        "[PASS] criterion 3: encoding preserves phoneme count and decode inverts encode \
         on 10000 random sequences"
    );
}

#[test]
fn criterion_4_gradient_checks_and_planted_recovery() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC4);
    // Finite-difference validation of every parameter block on >= 20
    // random instances.
    for instance in 0..20 {
        let vocab_size = rng.gen_range(2..5usize);
        let style_dim = rng.gen_range(1..4usize);
        let window = rng.gen_range(0..3usize);
        let n_examples = rng.gen_range(1..4);
        let dataset = random_dataset(&mut rng, vocab_size, style_dim, n_examples);
        let model = thaifront_core::prosody::ProsodyPredictor::init(
            2 * vocab_size + style_dim,
            rng.gen(),
            0.3,
        );
        let (_, grads) = loss_and_gradients(&model, &dataset, vocab_size, window).unwrap();
        let eps = 1e-5;
        let mut worst: f64 = 0.0;
        let param_count = model.input_dim;
        for head_idx in 0..3 {
            for w_idx in 0..=param_count {
                let read = |m: &thaifront_core::prosody::ProsodyPredictor| -> f64 {
                    let head = m.heads()[head_idx];
                    if w_idx == param_count {
                        head.bias
                    } else {
                        head.weights[w_idx]
                    }
                };
                let write = |m: &mut thaifront_core::prosody::ProsodyPredictor, v: f64| {
                    let mut heads = m.heads_mut();
                    let head = &mut heads[head_idx];
                    if w_idx == param_count {
                        head.bias = v;
                    } else {
                        head.weights[w_idx] = v;
                    }
                };
                let analytic = {
                    let g = &grads;
                    match head_idx {
                        0 if w_idx == param_count => g.duration_bias,
                        0 => g.duration_weights[w_idx],
                        1 if w_idx == param_count => g.pitch_bias,
                        1 => g.pitch_weights[w_idx],
                        2 if w_idx == param_count => g.energy_bias,
                        _ => g.energy_weights[w_idx],
                    }
                };
                let base = read(&model);
                let mut plus = model.clone();
                write(&mut plus, base + eps);
                let mut minus = model.clone();
                write(&mut minus, base - eps);
                let (lp, _) = loss_and_gradients(&plus, &dataset, vocab_size, window).unwrap();
                let (lm, _) = loss_and_gradients(&minus, &dataset, vocab_size, window).unwrap();
                let numeric = (lp - lm) / (2.0 * eps);
                let denom = analytic.abs().max(numeric.abs()).max(1e-8);
                let rel = (analytic - numeric).abs() / denom;
                worst = worst.max(rel);
                assert!(
                    rel < 1e-4,
                    "instance {instance}, head {head_idx}, param {w_idx}: \
                     analytic {analytic} vs numeric {numeric} (rel {rel})"
                );
            }
        }
        assert!(worst.is_finite());
    }
    // Planted-model recovery within 5000 steps.
    let (dataset, planted) = planted_dataset(0x9_17, 12, 4, 2);
    let (planted_loss, _) = loss_and_gradients(&planted, &dataset, 4, 2).unwrap();
    let cfg = TrainConfig { steps: 5000, learning_rate: 0.5, seed: 7, window: 2, init_scale: 0.1 };
    let (_, report) = train_predictors(&dataset, 4, &cfg).unwrap();
    assert!(
        report.final_loss <= planted_loss + 1e-3,
        "trained loss {} exceeds planted loss {} + 1e-3",
        report.final_loss,
        planted_loss
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 4 took {elapsed:?}");
    println!(
        "[PASS] criterion 4: gradients within 1e-4 of finite differences on 20 instances; \
         planted model recovered to within 1e-3 excess loss ({elapsed:?})"
    );
}

#[test]
fn criterion_5_loss_algebra_exactness() {
    let mut rng = StdRng::seed_from_u64(0xC5);
    for case in 0..1000 {
        let lt: f64 = rng.gen_range(0.0..10.0);
        let lf: f64 = rng.gen_range(0.0..10.0);
        let lp: f64 = rng.gen_range(0.0..10.0);
        let w1: f64 = rng.gen_range(0.0..5.0);
        let w2: f64 = rng.gen_range(0.0..5.0);
        let w3: f64 = rng.gen_range(0.0..5.0);
        let weights = LossWeights::new(w1, w2, w3).unwrap();
        let got = recon_loss(lt, lf, lp, &weights).unwrap();
        let expected = w1 * lt + w2 * lf + w3 * lp;
        let rel = (got - expected).abs() / expected.abs().max(1e-300);
        assert!(rel <= 1e-12, "case {case}: recon {got} vs {expected}");

        let (a, b, c, d) = (
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..10.0),
        );
        let got = joint_loss(a, b, c, d).unwrap();
        let expected = a + b + c + d;
        let rel = (got - expected).abs() / expected.abs().max(1e-300);
        assert!(rel <= 1e-12, "case {case}: joint {got} vs {expected}");
    }
    println!("[PASS] criterion 5: loss compositions exact on 1000 random inputs (rel <= 1e-12)");
}

/// Plain exponential-recursion edit distance, the independent oracle.
fn naive_distance(a: &[&str], b: &[&str]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let sub = naive_distance(&a[1..], &b[1..]) + usize::from(a[0] != b[0]);
    let del = naive_distance(&a[1..], b) + 1;
    let ins = naive_distance(a, &b[1..]) + 1;
    sub.min(del).min(ins)
}

fn kahan_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (x, y) in a.iter().zip(b) {
        let term = x * y - comp;
        let t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    sum
}

fn speechish(len: usize, sr: u32, seed: u64) -> Waveform {
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
                carrier +=
                    (2.0 * std::f64::consts::PI * f0 * harmonic * t + phase).sin() / harmonic.sqrt();
            }
            0.08 * env * carrier
        })
        .collect();
    let peak = samples.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    Waveform::new(samples.into_iter().map(|v| 0.8 * v / peak).collect(), sr).unwrap()
}

fn with_noise(clean: &Waveform, snr_db: f64, seed: u64) -> Waveform {
    let mut rng = StdRng::seed_from_u64(seed);
    let power: f64 = clean.samples().iter().map(|v| v * v).sum::<f64>() / clean.len() as f64;
    let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    let samples: Vec<f64> = clean
        .samples()
        .iter()
        .map(|&s| {
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let z: f64 = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            (s + sigma * z).clamp(-1.0, 1.0)
        })
        .collect();
    Waveform::new(samples, clean.sample_rate()).unwrap()
}

#[test]
fn criterion_6_metric_oracles() {
    // WER against the exponential oracle: exhaustive on a binary alphabet up
    // to length 3, random pairs up to length 8.
    let mut checked = 0usize;
    let binary_words = |len: usize| -> Vec<Vec<&'static str>> {
        (0..2usize.pow(len as u32))
            .map(|mask| (0..len).map(|i| if mask >> i & 1 == 0 { "a" } else { "b" }).collect())
            .collect()
    };
    let mut all_short: Vec<Vec<&str>> = Vec::new();
    for len in 0..=3 {
        all_short.extend(binary_words(len));
    }
    for reference in &all_short {
        for hypothesis in &all_short {
            if reference.is_empty() {
                continue;
            }
            let (_, ops) = wer(reference, hypothesis).unwrap();
            assert_eq!(ops.distance(), naive_distance(reference, hypothesis));
            checked += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(0xC6);
    let alphabet = ["ka", "ma", "ta", "la"];
    for _ in 0..300 {
        let reference: Vec<&str> =
            (0..rng.gen_range(1..=8)).map(|_| alphabet[rng.gen_range(0..4)]).collect();
        let hypothesis: Vec<&str> =
            (0..rng.gen_range(0..=8)).map(|_| alphabet[rng.gen_range(0..4)]).collect();
        let (rate, ops) = wer(&reference, &hypothesis).unwrap();
        assert_eq!(ops.distance(), naive_distance(&reference, &hypothesis));
        assert!((rate - ops.distance() as f64 / reference.len() as f64).abs() < 1e-15);
        checked += 1;
    }

    // STOI: self-similarity and monotone degradation over the SNR sweep.
    let cfg = StoiConfig::default();
    let clean = speechish(20_000, 16_000, 0x5701);
    let self_score = stoi(&clean, &clean, &cfg).unwrap();
    assert!(self_score >= 0.999, "self STOI {self_score}");
    let mut last = f64::INFINITY;
    let mut sweep = Vec::new();
    for (i, snr) in [20.0, 10.0, 0.0, -10.0].into_iter().enumerate() {
        let noisy = with_noise(&clean, snr, 0x600D + i as u64);
        let score = stoi(&clean, &noisy, &cfg).unwrap();
        assert!(score <= last + 1e-9, "STOI not monotone at {snr} dB: {score} > {last}");
        sweep.push(format!("{snr} dB -> {score:.3}"));
        last = score;
    }
    assert!(last < 0.6, "-10 dB SNR still scores {last}");

    // Cosine similarity against compensated-summation recomputation.
    for case in 0..200 {
        let dim = rng.gen_range(1..64);
        let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        if a.iter().all(|&v| v == 0.0) || b.iter().all(|&v| v == 0.0) {
            continue;
        }
        let got = cosine_sim(
            &thaifront_core::audio::StyleVector { values: a.clone() },
            &thaifront_core::audio::StyleVector { values: b.clone() },
        )
        .unwrap();
        let expected =
            kahan_dot(&a, &b) / (kahan_dot(&a, &a).sqrt() * kahan_dot(&b, &b).sqrt());
        assert!(
            (got - expected).abs() <= 1e-12 * expected.abs().max(1.0),
            "case {case}: cosine {got} vs {expected}"
        );
    }
    println!(
        "[PASS] criterion 6: WER matches the exponential oracle on {checked} pairs; \
         STOI(x,x)={self_score:.4} and degrades monotonically ({}); \
         cosine matches compensated recomputation within 1e-12",
        sweep.join(", ")
    );
}

#[test]
fn criterion_7_ablation_directions() {
    // Pause side: planted rule "pause after แล้ว". Train on the corpus,
    // predict back on it: F1 1.0. The no-op model drops to the baseline.
    let words = ["กา", "มา", "ตา", "แล้ว"];
    let lex = Lexicon::from_words(words).unwrap();
    let trie = TrieIndex::build(&lex).unwrap();
    let mut corpus = Vec::new();
    for a in ["กา", "มา", "ตา"] {
        for b in ["กา", "มา", "ตา"] {
            for _ in 0..4 {
                corpus.push(
                    parse_pause_annotation(&format!("{a}แล้ว<SPACE>{b}"), "<SPACE>").unwrap(),
                );
            }
        }
    }
    let model = train_pause_model(&corpus, &trie, 2).unwrap();
    let f1_of = |scorer: &dyn thaifront_core::pause::PauseScorer| -> f64 {
        let mut sum = 0.0;
        for gold in &corpus {
            let predicted = predict_pauses(gold.raw_text(), scorer, &trie);
            sum += pause_gap_f1(gold, &predicted).unwrap().f1;
        }
        sum / corpus.len() as f64
    };
    let trained_f1 = f1_of(&model);
    let baseline_f1 = f1_of(&NoPauseModel);
    assert!((trained_f1 - 1.0).abs() < 1e-12, "trained F1 {trained_f1}");
    assert!(baseline_f1 < trained_f1, "baseline {baseline_f1} !< trained {trained_f1}");
    assert_eq!(baseline_f1, 0.0, "no-op baseline predicts nothing, so F1 is 0 here");

    // Exception side: planted irregular words whose true pronunciation
    // differs from the rule output. Removing the dictionary must strictly
    // increase the phoneme error rate.
    let planted: Vec<PhonemeToneEntry> = [("กา", Tone::Rising), ("มา", Tone::Low), ("ตา", Tone::High)]
        .into_iter()
        .map(|(word, tone)| {
            let mut truth = g2p_rules(word, ToneRuleTable::builtin()).unwrap();
            truth.syllables[0].tone = tone;
            PhonemeToneEntry { word: word.to_string(), pronunciation: truth }
        })
        .collect();
    let flatten = |seq: &PhonemeToneSequence| -> Vec<String> {
        let mut out = Vec::new();
        for syl in &seq.syllables {
            for (i, p) in syl.phonemes.iter().enumerate() {
                if i + 1 == syl.phonemes.len() {
                    out.push(format!("{p}#{}", syl.tone.digit()));
                } else {
                    out.push(p.clone());
                }
            }
        }
        out
    };
    let with_exceptions = G2pEngine::new(
        G2pEngine::exceptions_from_entries(&planted),
        ToneRuleTable::builtin().clone(),
        Box::new(NoFallback),
    );
    let without_exceptions = G2pEngine::rules_only();
    let per_of = |engine: &G2pEngine| -> f64 {
        let mut edits = 0usize;
        let mut total = 0usize;
        for entry in &planted {
            let truth = flatten(&entry.pronunciation);
            let hyp = flatten(&engine.convert(&entry.word).unwrap());
            let truth_refs: Vec<&str> = truth.iter().map(String::as_str).collect();
            let hyp_refs: Vec<&str> = hyp.iter().map(String::as_str).collect();
            let (_, ops) = wer(&truth_refs, &hyp_refs).unwrap();
            edits += ops.distance();
            total += truth.len();
        }
        edits as f64 / total as f64
    };
    let per_with = per_of(&with_exceptions);
    let per_without = per_of(&without_exceptions);
    assert_eq!(per_with, 0.0, "exceptions should reproduce the planted truth");
    assert!(per_without > per_with, "{per_without} !> {per_with}");
    println!(
        "[PASS] criterion 7: pause F1 {trained_f1:.2} -> {baseline_f1:.2} without the model; \
         phoneme error rate {per_with:.2} -> {per_without:.2} without the exception dictionary"
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: format round-trips and the CLI golden-file equivalence.

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_thaifront")
}

fn run_with_stdin(args: &[&str], stdin: &str) -> (String, String, i32) {
    use std::io::Write;
    let mut child = Command::new(bin())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn thaifront");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    let output = child.wait_with_output().unwrap();
    (
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
        output.status.code().unwrap_or(-1),
    )
}

struct GoldenSetup {
    dir: tempfile::TempDir,
    lexicon: PathBuf,
    vocab: PathBuf,
    exceptions: PathBuf,
    pause_model: PathBuf,
    words: Vec<String>,
    vocab_loaded: PhonemeVocab,
}

fn golden_setup() -> GoldenSetup {
    let dir = tempfile::tempdir().unwrap();
    let fixture_entries =
        thaifront_core::corpus::parse_phoneme_tone_annotations(G2P_FIXTURE, "fixture").unwrap();
    let words: Vec<String> = fixture_entries.iter().map(|e| e.word.clone()).collect();
    let lexicon_path = dir.path().join("lexicon.txt");
    Lexicon::from_words(words.iter().map(String::as_str)).unwrap().save(&lexicon_path).unwrap();
    let annotations_path = dir.path().join("annotations.tsv");
    save_phoneme_tone_annotations(&annotations_path, &fixture_entries).unwrap();
    let vocab = PhonemeVocab::build(&fixture_entries).unwrap();
    let vocab_path = dir.path().join("vocab.tsv");
    vocab.save(&vocab_path).unwrap();
    // A couple of planted exceptions exercise the precedence path.
    let exceptions: Vec<PhonemeToneEntry> = fixture_entries
        .iter()
        .take(2)
        .map(|e| {
            let mut p = e.pronunciation.clone();
            let last = p.syllables.len() - 1;
            p.syllables[last].tone = Tone::Rising;
            PhonemeToneEntry { word: e.word.clone(), pronunciation: p }
        })
        .collect();
    let exceptions_path = dir.path().join("exceptions.tsv");
    save_phoneme_tone_annotations(&exceptions_path, &exceptions).unwrap();
    // Pause model trained on a small tagged corpus over fixture words.
    let lex = Lexicon::load(&lexicon_path).unwrap();
    let trie = TrieIndex::build(&lex).unwrap();
    let mut rng = StdRng::seed_from_u64(0xC8);
    let mut corpus = Vec::new();
    for _ in 0..30 {
        let n = rng.gen_range(2..5);
        let parts: Vec<&str> =
            (0..n).map(|_| words[rng.gen_range(0..words.len())].as_str()).collect();
        corpus.push(parse_pause_annotation(&parts.join("<SPACE>"), "<SPACE>").unwrap());
    }
    let model = train_pause_model(&corpus, &trie, 2).unwrap();
    let pause_model_path = dir.path().join("pause.model");
    save_pause_model(&model, &pause_model_path).unwrap();
    GoldenSetup {
        dir,
        lexicon: lexicon_path,
        vocab: vocab_path,
        exceptions: exceptions_path,
        pause_model: pause_model_path,
        words,
        vocab_loaded: vocab,
    }
}

fn golden_corpus(words: &[String], lines: usize, seed: u64) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..lines)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            (0..n).map(|_| words[rng.gen_range(0..words.len())].clone()).collect::<String>()
        })
        .collect()
}

#[test]
fn criterion_8_round_trips_and_golden_pipeline() {
    // Byte-identical round-trips for every text format on canonical files,
    // and value round-trips for the binary formats.
    let setup = golden_setup();
    for path in [&setup.lexicon, &setup.vocab, &setup.exceptions, &setup.pause_model] {
        let text = std::fs::read_to_string(path).unwrap();
        let again: String = match path {
            p if p == &setup.lexicon => Lexicon::parse(&text, "rt").unwrap().render(),
            p if p == &setup.vocab => PhonemeVocab::parse(&text).unwrap().render(),
            p if p == &setup.pause_model => thaifront_core::pause::PauseModelRegistry::builtin()
                .parse(&text)
                .unwrap()
                .render(),
            _ => thaifront_core::corpus::render_phoneme_tone_annotations(
                &thaifront_core::corpus::parse_phoneme_tone_annotations(&text, "rt").unwrap(),
            ),
        };
        assert_eq!(again, text, "round-trip broke for {}", path.display());
    }
    let rules_text = TONE_RULES_FIXTURE;
    assert_eq!(ToneRuleTable::parse(rules_text).unwrap().render(), rules_text);
    // Pause corpus round-trip.
    let tagged = "กาแล้ว<SPACE>มา";
    let sentence = parse_pause_annotation(tagged, "<SPACE>").unwrap();
    assert_eq!(render_pause_annotation(&sentence, "<SPACE>"), tagged);

    // Golden 100-line corpus: `pipeline` equals the chained stage CLIs, and
    // repeated runs are byte-identical.
    let lines = golden_corpus(&setup.words, 100, 0xF00D);
    let stdin = format!("{}\n", lines.join("\n"));
    let common = [
        "--lexicon",
        setup.lexicon.to_str().unwrap(),
        "--vocab",
        setup.vocab.to_str().unwrap(),
        "--exceptions",
        setup.exceptions.to_str().unwrap(),
        "--pause-model",
        setup.pause_model.to_str().unwrap(),
    ];
    let mut pipeline_args = vec!["pipeline"];
    pipeline_args.extend_from_slice(&common);
    let (out1, err1, code1) = run_with_stdin(&pipeline_args, &stdin);
    assert_eq!(code1, 0, "pipeline failed: {err1}");
    let (out2, _, code2) = run_with_stdin(&pipeline_args, &stdin);
    assert_eq!(code2, 0);
    assert_eq!(out1, out2, "repeated pipeline runs differ");

    // Stage chaining: pauses predict -> segment -> g2p -> encode.
    let (tagged_out, err, code) = run_with_stdin(
        &[
            "pauses",
            "predict",
            "--model",
            setup.pause_model.to_str().unwrap(),
            "--lexicon",
            setup.lexicon.to_str().unwrap(),
        ],
        &stdin,
    );
    assert_eq!(code, 0, "pauses predict failed: {err}");
    let tagged_lines: Vec<&str> = tagged_out.lines().collect();
    assert_eq!(tagged_lines.len(), lines.len());

    // Split each tagged line into chunks and segment them (one chunk per
    // stdin line of the segment CLI).
    let mut chunk_counts = Vec::new();
    let mut chunk_lines = String::new();
    for line in &tagged_lines {
        let chunks: Vec<&str> = if line.is_empty() {
            Vec::new()
        } else {
            line.split("<SPACE>").collect()
        };
        chunk_counts.push(chunks.len());
        for chunk in chunks {
            chunk_lines.push_str(chunk);
            chunk_lines.push('\n');
        }
    }
    let (segmented_out, err, code) = run_with_stdin(
        &["segment", "--lexicon", setup.lexicon.to_str().unwrap(), "--sep", "|"],
        &chunk_lines,
    );
    assert_eq!(code, 0, "segment failed: {err}");
    let segmented_lines: Vec<&str> = segmented_out.lines().collect();

    // G2P for every Thai token, one word per stdin line.
    let mut token_stream = Vec::new();
    for seg_line in &segmented_lines {
        let tokens: Vec<&str> =
            if seg_line.is_empty() { Vec::new() } else { seg_line.split('|').collect() };
        token_stream.push(
            tokens
                .into_iter()
                .map(str::to_string)
                .collect::<Vec<_>>(),
        );
    }
    let mut g2p_input = String::new();
    for tokens in &token_stream {
        for token in tokens {
            if thaifront_core::phonology::contains_thai(token) {
                g2p_input.push_str(token);
                g2p_input.push('\n');
            }
        }
    }
    let (g2p_out, err, code) = run_with_stdin(
        &["g2p", "--exceptions", setup.exceptions.to_str().unwrap()],
        &g2p_input,
    );
    assert_eq!(code, 0, "g2p failed: {err}");

    let (ids_out, err, code) =
        run_with_stdin(&["encode", "--vocab", setup.vocab.to_str().unwrap()], &g2p_out);
    assert_eq!(code, 0, "encode failed: {err}");
    let id_lines: Vec<&str> = ids_out.lines().collect();

    // Reassemble: per original line, concatenate its words' ids with the
    // pause id between chunks.
    let pause_id = PhonemeVocab::PAUSE_ID.to_string();
    let mut id_cursor = 0usize;
    let mut seg_cursor = 0usize;
    let mut chained = String::new();
    for &n_chunks in &chunk_counts {
        let mut line_ids: Vec<String> = Vec::new();
        for chunk_idx in 0..n_chunks {
            if chunk_idx > 0 {
                line_ids.push(pause_id.clone());
            }
            for token in &token_stream[seg_cursor] {
                if thaifront_core::phonology::contains_thai(token) {
                    line_ids.extend(
                        id_lines[id_cursor].split_whitespace().map(str::to_string),
                    );
                    id_cursor += 1;
                }
            }
            seg_cursor += 1;
        }
        chained.push_str(&line_ids.join(" "));
        chained.push('\n');
    }
    assert_eq!(id_cursor, id_lines.len(), "unconsumed encode output");
    assert_eq!(
        out1, chained,
        "pipeline output differs from the chained stage CLIs"
    );

    // The ids only use the loaded vocabulary.
    let max_id = setup.vocab_loaded.len() as u32;
    for line in out1.lines() {
        for tok in line.split_whitespace() {
            let id: u32 = tok.parse().unwrap();
            assert!(id < max_id);
        }
    }
    drop(setup.dir);
    println!(
        "[PASS] criterion 8: formats round-trip byte-identically; pipeline output equals the \
         chained stage CLIs on a 100-line corpus and repeated runs are byte-identical"
    );
}

// ---------------------------------------------------------------------------
// Shared helpers for criterion 4.

fn random_dataset(
    rng: &mut StdRng,
    vocab_size: usize,
    style_dim: usize,
    n_examples: usize,
) -> Vec<thaifront_core::prosody::TrainingExample> {
    use thaifront_core::audio::{ProsodyFeatures, StyleVector};
    use thaifront_core::encoding::EncodedSequence;
    (0..n_examples)
        .map(|_| {
            let len = rng.gen_range(1..5usize);
            let ids: Vec<u32> = (0..len).map(|_| rng.gen_range(0..vocab_size as u32)).collect();
            let durations: Vec<u32> = (0..len).map(|_| rng.gen_range(1..4)).collect();
            let n_frames: usize = durations.iter().map(|&d| d as usize).sum();
            let pitch: Vec<f64> = (0..n_frames).map(|_| rng.gen_range(0.0..2.0)).collect();
            let energy: Vec<f64> = (0..n_frames).map(|_| rng.gen_range(0.0..1.0)).collect();
            thaifront_core::prosody::TrainingExample {
                encoded: EncodedSequence { ids: ids.clone(), syllable_spans: vec![(0, len)] },
                style: StyleVector {
                    values: (0..style_dim).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                },
                features: ProsodyFeatures::new(durations, pitch, energy).unwrap(),
                mel: None,
            }
        })
        .collect()
}

fn planted_dataset(
    seed: u64,
    n_examples: usize,
    vocab_size: usize,
    style_dim: usize,
) -> (Vec<thaifront_core::prosody::TrainingExample>, thaifront_core::prosody::ProsodyPredictor) {
    use thaifront_core::audio::{ProsodyFeatures, StyleVector};
    use thaifront_core::encoding::EncodedSequence;
    use thaifront_core::prosody::{contextual_representation, predict_prosody, ProsodyPredictor};
    let mut rng = StdRng::seed_from_u64(seed);
    let input_dim = 2 * vocab_size + style_dim;
    let mut planted = ProsodyPredictor::init(input_dim, seed ^ 0x5eed, 0.3);
    planted.duration.bias = 1.2;
    planted.pitch.bias = 1.5;
    planted.energy.bias = 0.8;
    let mut dataset = Vec::new();
    for _ in 0..n_examples {
        let len = rng.gen_range(2..8usize);
        let ids: Vec<u32> = (0..len).map(|_| rng.gen_range(0..vocab_size as u32)).collect();
        let encoded = EncodedSequence { ids: ids.clone(), syllable_spans: vec![(0, len)] };
        let style = StyleVector {
            values: (0..style_dim).map(|_| rng.gen_range(-0.5..0.5)).collect(),
        };
        let rep = contextual_representation(&encoded, vocab_size, 2);
        let pred = predict_prosody(&rep, &style, &planted).unwrap();
        let durations: Vec<u32> =
            pred.durations.iter().map(|&d| d.round().max(1.0) as u32).collect();
        let mut pitch = Vec::new();
        let mut energy = Vec::new();
        for (i, &d) in durations.iter().enumerate() {
            for _ in 0..d {
                pitch.push(pred.pitch[i].max(0.0));
                energy.push(pred.energy[i].max(0.0));
            }
        }
        dataset.push(thaifront_core::prosody::TrainingExample {
            encoded,
            style,
            features: ProsodyFeatures::new(durations, pitch, energy).unwrap(),
            mel: None,
        });
    }
    (dataset, planted)
}
