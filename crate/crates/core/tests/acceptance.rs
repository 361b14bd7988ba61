//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. `ACCEPTANCE_ONLY=2,3` restricts the run to the listed criteria.

mod common;

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::gradients;
use microtrans::cli;
use microtrans::corpus::{clean_text, split, tokenize, CleaningPolicy, Corpus, SentencePair};
use microtrans::eval::{evaluate_model, interpret, modified_precision, Interpretation, Smoothing};
use microtrans::obfuscation::{
    generate_pairs, leet_encode, mirror_encode, LeetTier, ObfuscationMode, SubstitutionTable,
};
use microtrans::phrasebook;
use microtrans::rng::SplitMix64;
use microtrans::seq2seq::{fit, ModelOptions, Seq2SeqModel, TrainingConfig};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_vectors() -> Outcome {
    let t = SubstitutionTable::default_table();
    let leet = |s: &str, tier| leet_encode(s, tier, &t, None).map_err(|e| e.to_string());
    let cases = [
        (leet("It was a bomb", LeetTier::Lite)?, "17 waz a b0mb"),
        (leet("She just left", LeetTier::Lite)?, "Zh3 juz7 l3f7"),
        (leet("Shoot me", LeetTier::Lite)?, "Zh007 m3"),
        (leet("It was a bomb", LeetTier::Mid)?, "3y37 vv45 4 80448"),
        (leet("Shoot me", LeetTier::Mid)?, "5aych007 443"),
        (mirror_encode("it was a bomb"), "bmob a saw ti"),
        (mirror_encode("She just left"), "tfel tsuj ehS"),
    ];
    for (got, want) in &cases {
        ensure(got == want, || format!("got {got:?}, expected {want:?}"))?;
    }
    Ok(format!("{} vectors byte-exact", cases.len()))
}

struct DeskRun {
    bleu1: f64,
    bleu: [f64; 4],
    test_pairs: usize,
    seconds: f64,
}

/// Desk-scale protocol: 12,500 phrasebook sentences, 10,000 training pairs,
/// 2,000 held-out pairs whose tokens all occur in training, default model
/// size, 30 epochs.
fn desk_scale(mode: ObfuscationMode) -> Result<DeskRun, String> {
    let started = Instant::now();
    let policy = CleaningPolicy::Obfuscated;
    let sentences = phrasebook::sentences(12_500, 7);
    let english_vocab: HashSet<&str> = sentences.iter().flat_map(|s| tokenize(s)).collect();
    ensure(english_vocab.len() <= 6_000, || {
        format!("sentence vocabulary {} > 6000", english_vocab.len())
    })?;
    let corpus = generate_pairs(&sentences, mode, &SubstitutionTable::default_table(), 1, 1)
        .map_err(|e| e.to_string())?;
    let (train, pool) = split(&corpus, 0.8, 3).map_err(|e| e.to_string())?;
    ensure(train.len() >= 10_000, || {
        format!("only {} training pairs", train.len())
    })?;

    let words = |texts: &mut dyn Iterator<Item = &str>| -> HashSet<String> {
        texts
            .flat_map(|t| {
                tokenize(&clean_text(t, policy))
                    .map(String::from)
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let src_seen = words(&mut train.sources());
    let tgt_seen = words(&mut train.targets());
    let covered = |text: &str, seen: &HashSet<String>| {
        tokenize(&clean_text(text, policy)).all(|w| seen.contains(w))
    };
    let held_out: Vec<SentencePair> = pool
        .pairs
        .iter()
        .filter(|p| covered(&p.source, &src_seen) && covered(&p.target, &tgt_seen))
        .take(2_000)
        .cloned()
        .collect();
    ensure(held_out.len() == 2_000, || {
        format!("only {} fully covered held-out pairs", held_out.len())
    })?;
    let test = pool.with_pairs(held_out);

    let options = ModelOptions {
        policy,
        ..ModelOptions::default()
    };
    let training = TrainingConfig {
        epochs: 30,
        ..TrainingConfig::default()
    };
    let (model, _) = fit(&train, &options, &training, |r| {
        eprintln!(
            "  {} epoch {:>2} train {:.4} val {:.4?}",
            mode, r.epoch, r.train_loss, r.val_loss
        )
    })
    .map_err(|e| e.to_string())?;
    let report = evaluate_model(&model, &test, Smoothing::None).map_err(|e| e.to_string())?;
    Ok(DeskRun {
        bleu1: report.bleu[0],
        bleu: report.bleu,
        test_pairs: report.pairs_scored,
        seconds: started.elapsed().as_secs_f64(),
    })
}

fn fmt_bleu(b: &[f64; 4]) -> String {
    format!("{:.3}/{:.3}/{:.3}/{:.3}", b[0], b[1], b[2], b[3])
}

fn mirror_desk_scale() -> Outcome {
    let run = desk_scale(ObfuscationMode::Mirror)?;
    let detail = format!(
        "BLEU-1..4 {} on {} held-out pairs in {:.0}s (gate BLEU-1 >= 0.85)",
        fmt_bleu(&run.bleu),
        run.test_pairs,
        run.seconds
    );
    ensure(run.bleu1 >= 0.85 && run.seconds <= 3_600.0, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn lite_beats_mid() -> Outcome {
    let lite = desk_scale(ObfuscationMode::Leet(LeetTier::Lite))?;
    let mid = desk_scale(ObfuscationMode::Leet(LeetTier::Mid))?;
    let detail = format!(
        "lite BLEU-1..4 {}, mid BLEU-1..4 {} (gate lite >= 0.45 and lite > mid)",
        fmt_bleu(&lite.bleu),
        fmt_bleu(&mid.bleu)
    );
    ensure(lite.bleu1 >= 0.45 && lite.bleu1 > mid.bleu1, || {
        detail.clone()
    })?;
    Ok(detail)
}

/// Counts every n-gram occurrence by linear scan, no hashing.
fn brute_force_precision(cand: &[String], reference: &[String], n: usize) -> (u64, u64) {
    if cand.len() < n {
        return (0, 0);
    }
    let grams = |s: &[String]| -> Vec<Vec<String>> {
        (0..s.len())
            .filter(|&i| i + n <= s.len())
            .map(|i| s[i..i + n].to_vec())
            .collect()
    };
    let cg = grams(cand);
    let rg = grams(reference);
    let mut done: Vec<&Vec<String>> = Vec::new();
    let mut matched = 0;
    for g in &cg {
        if done.contains(&g) {
            continue;
        }
        done.push(g);
        let in_cand = cg.iter().filter(|x| *x == g).count() as u64;
        let in_ref = rg.iter().filter(|x| *x == g).count() as u64;
        matched += in_cand.min(in_ref);
    }
    (matched, cg.len() as u64)
}

fn bleu_oracle() -> Outcome {
    let mut rng = SplitMix64::new(2024);
    let words = ["the", "a", "cat", "sat", "on", "mat", "dog", "ran"];
    let sentence = |rng: &mut SplitMix64| -> Vec<String> {
        let len = rng.below(13);
        (0..len)
            .map(|_| words[rng.below(words.len())].to_string())
            .collect()
    };
    let mut compared = 0;
    for i in 0..500 {
        let cand = sentence(&mut rng);
        let reference = sentence(&mut rng);
        for n in 1..=4 {
            let p = modified_precision(&cand, std::slice::from_ref(&reference), n);
            let oracle = brute_force_precision(&cand, &reference, n);
            ensure((p.matched, p.total) == oracle, || {
                format!(
                    "pair {i} n={n}: {}/{} vs oracle {}/{}",
                    p.matched, p.total, oracle.0, oracle.1
                )
            })?;
            compared += 1;
        }
    }
    Ok(format!("{compared} exact rational matches over 500 pairs"))
}

fn gradient_checks() -> Outcome {
    gradients::lstm_cell(100)?;
    gradients::embedding_and_projection(100)?;
    gradients::cross_entropy_loss(100)?;
    gradients::corrupted_lstm_backward()?;
    gradients::whole_model(20)?;
    Ok("LSTM cell, embedding, projection, cross-entropy: 100 instances each within 1e-4".into())
}

fn model_size() -> Outcome {
    // Two independently seeded hard-tier renderings give each side a large
    // vocabulary; both are capped at 12,000 entries.
    let sentences = phrasebook::sentences(4_000, 5);
    let table = SubstitutionTable::default_table();
    let hard = |seed: u64| -> Result<Vec<String>, String> {
        sentences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                leet_encode(s, LeetTier::Hard, &table, Some(seed ^ i as u64))
                    .map_err(|e| e.to_string())
            })
            .collect()
    };
    let (src, tgt) = (hard(1)?, hard(2)?);
    let corpus = Corpus::new(
        src.into_iter()
            .zip(tgt)
            .map(|(s, t)| SentencePair::new(s, t))
            .collect(),
        "a",
        "b",
    );
    let options = ModelOptions {
        max_vocab: Some(12_000),
        policy: CleaningPolicy::Obfuscated,
        ..ModelOptions::default()
    };
    let training = TrainingConfig {
        epochs: 1,
        ..TrainingConfig::default()
    };
    let (model, _) = fit(&corpus, &options, &training, |_| {}).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("big.mtm");
    model.save(&path).map_err(|e| e.to_string())?;
    let bytes = fs::metadata(&path).map_err(|e| e.to_string())?.len();
    let loaded = Seq2SeqModel::load(&path).map_err(|e| e.to_string())?;
    let probe: Vec<&str> = corpus.sources().take(100).collect();
    let before = model.translate_batch(&probe).map_err(|e| e.to_string())?;
    let after = loaded.translate_batch(&probe).map_err(|e| e.to_string())?;
    let detail = format!(
        "vocab {}/{}, d=h=256, {} parameters, file {:.1} MB",
        model.config.src_vocab_size,
        model.config.tgt_vocab_size,
        model.parameter_count(),
        bytes as f64 / 1e6
    );
    ensure(
        model.config.src_vocab_size == 12_000 && model.config.tgt_vocab_size == 12_000,
        || format!("vocabularies did not reach the cap: {detail}"),
    )?;
    ensure(bytes < 50_000_000, || detail.clone())?;
    ensure(before == after, || {
        format!("probe translations changed after reload; {detail}")
    })?;
    Ok(format!("{detail}, 100-sentence probe unchanged"))
}

fn run_bin(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_microtrans"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })
}

fn million_pairs() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("sentences.txt");
    let mut text = phrasebook::sentences(150_000, 42).join("\n");
    text.push('\n');
    fs::write(&input, text).map_err(|e| e.to_string())?;
    let first = dir.path().join("a.tsv");
    let second = dir.path().join("b.tsv");
    let gen = |out: &Path| -> Result<Duration, String> {
        let started = Instant::now();
        run_bin(&[
            "gen",
            "--mode",
            "leet-hard",
            "--variants",
            "7",
            "--seed",
            "1",
            "--in",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])?;
        Ok(started.elapsed())
    };
    let elapsed = gen(&first)?;
    gen(&second)?;
    let a = fs::read(&first).map_err(|e| e.to_string())?;
    let b = fs::read(&second).map_err(|e| e.to_string())?;
    let text = String::from_utf8(a.clone()).map_err(|e| e.to_string())?;
    let mut rows = 0usize;
    for line in text.lines() {
        let fields: Vec<&str> = line.split('\t').collect();
        ensure(
            fields.len() == 2 && fields.iter().all(|f| !f.is_empty()),
            || format!("malformed row {line:?}"),
        )?;
        rows += 1;
    }
    let detail = format!(
        "{rows} pairs in {:.1}s, rerun byte-identical: {}",
        elapsed.as_secs_f64(),
        a == b
    );
    ensure(
        rows >= 1_000_000 && elapsed <= Duration::from_secs(300) && a == b,
        || detail.clone(),
    )?;
    Ok(detail)
}

fn interpretation_bins() -> Outcome {
    let got: Vec<Interpretation> = [0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.95]
        .iter()
        .map(|&s| interpret(s))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(got == Interpretation::ALL, || format!("{got:?}"))?;
    let mirror_row = interpret(0.95).map_err(|e| e.to_string())?;
    ensure(mirror_row.label() == "May Exceed Human", || {
        mirror_row.label().into()
    })?;
    Ok("seven bins in order; 0.95 -> May Exceed Human".into())
}

fn cli_call(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("microtrans").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    ensure(code == cli::EXIT_OK, || {
        String::from_utf8_lossy(&err).into_owned()
    })?;
    Ok(String::from_utf8_lossy(&out).into_owned())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let mut artifacts: HashMap<&str, Vec<Vec<u8>>> = HashMap::new();
    for run in ["1", "2"] {
        let pairs = d.join(format!("pairs{run}.tsv"));
        let model = d.join(format!("model{run}.mtm"));
        let report = d.join(format!("report{run}.json"));
        let (pairs_s, model_s, report_s) = (
            pairs.to_str().unwrap(),
            model.to_str().unwrap(),
            report.to_str().unwrap(),
        );
        cli_call(&[
            "gen",
            "--mode",
            "leet-hard",
            "--phrasebook",
            "300",
            "--variants",
            "3",
            "--seed",
            "9",
            "--out",
            pairs_s,
        ])?;
        cli_call(&[
            "train",
            "--pairs",
            pairs_s,
            "--out",
            model_s,
            "--epochs",
            "3",
            "--embed",
            "32",
            "--hidden",
            "32",
            "--seed",
            "4",
            "--policy",
            "obfuscated",
        ])?;
        cli_call(&[
            "eval",
            "--model",
            model_s,
            "--pairs",
            pairs_s,
            "--json",
            report_s,
            "--language",
            "leet-hard",
        ])?;
        for (key, path) in [("corpus", &pairs), ("model", &model), ("report", &report)] {
            artifacts
                .entry(key)
                .or_default()
                .push(fs::read(path).map_err(|e| e.to_string())?);
        }
    }
    for (key, runs) in &artifacts {
        ensure(runs[0] == runs[1], || format!("{key} differs between runs"))?;
    }
    Ok("corpus, model file and eval report bit-identical across two runs".into())
}

fn main() -> ExitCode {
    let only: Option<HashSet<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let criteria: [Criterion; 9] = [
        (1, "golden obfuscation vectors", golden_vectors),
        (
            2,
            "mirror-writing translation at desk scale",
            mirror_desk_scale,
        ),
        (3, "leet-lite beats leet-mid at desk scale", lite_beats_mid),
        (
            4,
            "BLEU modified precision vs brute-force oracle",
            bleu_oracle,
        ),
        (5, "gradient correctness", gradient_checks),
        (6, "model file under 50 MB with reload probe", model_size),
        (7, "million-pair hard-tier generation", million_pairs),
        (8, "interpretation bins", interpretation_bins),
        (9, "determinism of corpora, models and reports", determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {id}. {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {id}. {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
