//! Command-line front end: `gen`, `train`, `translate`, `eval` and `replay`.
//!
//! Exit codes are a stable contract: 0 success, 2 usage or argument error,
//! 3 I/O or malformed input, 4 numeric failure.

mod manifest;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use manifest::{manifest_path, now_unix_ms, RunManifest, MANIFEST_SUFFIX};

use crate::corpus::{load_tsv, CleaningPolicy, TsvColumns};
use crate::error::{Error, Result};
use crate::eval::{evaluate_model, render_table, Smoothing};
use crate::obfuscation::{generate_pairs, ObfuscationMode, SubstitutionTable};
use crate::phrasebook;
use crate::seq2seq::{fit, ModelOptions, Seq2SeqModel, TrainingConfig, MAX_LEN_CAP};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

/// Maps a library error to its exit code.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Argument(_) | Error::Config(_) => EXIT_USAGE,
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::Format { .. }
        | Error::Json(_)
        | Error::EmptyCorpus => EXIT_IO,
        Error::NonFinite(_) | Error::Shape(_) => EXIT_NUMERIC,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "microtrans",
    version,
    about = "Obfuscated-language corpora, LSTM translators and BLEU reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate (obfuscated, english) pairs as TSV.
    Gen(GenArgs),
    /// Train an encoder-decoder translator from a TSV file.
    Train(TrainArgs),
    /// Translate text with a trained model.
    Translate(TranslateArgs),
    /// Score a model on test pairs with BLEU-1..4.
    Eval(EvalArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    /// mirror, leet-lite, leet-mid or leet-hard.
    #[arg(long)]
    pub mode: ObfuscationMode,
    /// Plain-text sentences, one per line.
    #[arg(
        long = "in",
        conflicts_with = "phrasebook",
        required_unless_present = "phrasebook"
    )]
    pub input: Option<PathBuf>,
    /// Use this many built-in English sentences instead of --in.
    #[arg(long)]
    pub phrasebook: Option<usize>,
    /// Output TSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Substitution table file; the bundled table when omitted.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub variants: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub src_col: usize,
    #[arg(long, default_value_t = 1)]
    pub tgt_col: usize,
    /// Skip malformed TSV lines instead of failing.
    #[arg(long)]
    pub lenient: bool,
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    #[arg(long, default_value_t = 64)]
    pub batch: usize,
    #[arg(long, default_value_t = 256)]
    pub embed: usize,
    #[arg(long, default_value_t = 256)]
    pub hidden: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.1)]
    pub val_fraction: f64,
    /// Vocabulary cap per side, reserved tokens included.
    #[arg(long)]
    pub max_vocab: Option<usize>,
    #[arg(long, default_value_t = MAX_LEN_CAP)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "natural")]
    pub policy: CleaningPolicy,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-epoch JSONL log; `<out>.log.jsonl` when omitted.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TranslateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub text: Option<String>,
    /// One sentence per line; one translation per line is written.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub src_col: usize,
    #[arg(long, default_value_t = 1)]
    pub tgt_col: usize,
    /// `none` (strict) or `epsilon` (0.1 for zero match counts).
    #[arg(long, default_value = "none")]
    pub smoothing: Smoothing,
    /// Row label; the TSV file stem when omitted.
    #[arg(long)]
    pub language: Option<String>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let args: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match dispatch(cli.command, args, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(
    command: Command,
    args: Vec<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    match command {
        Command::Gen(a) => cmd_gen(&a, args, out),
        Command::Train(a) => cmd_train(&a, args, out, err),
        Command::Translate(a) => cmd_translate(&a, args, out),
        Command::Eval(a) => cmd_eval(&a, args, out),
        Command::Replay(a) => cmd_replay(&a, out, err),
    }
}

struct Run {
    manifest: RunManifest,
}

impl Run {
    fn start<A: Serialize>(
        subcommand: &str,
        config: &A,
        args: Vec<String>,
        seed: Option<u64>,
    ) -> Result<Self> {
        Ok(Self {
            manifest: RunManifest {
                subcommand: subcommand.into(),
                config: serde_json::to_value(config)?,
                args,
                inputs: Vec::new(),
                outputs: Vec::new(),
                seed,
                version: env!("CARGO_PKG_VERSION").into(),
                started_unix_ms: now_unix_ms(),
                finished_unix_ms: 0,
            },
        })
    }

    fn finish(mut self, inputs: Vec<PathBuf>, outputs: Vec<PathBuf>) -> Result<()> {
        self.manifest.inputs = inputs;
        self.manifest.outputs = outputs;
        self.manifest.finished_unix_ms = now_unix_ms();
        self.manifest.save_beside_outputs()
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn write_out(out: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    out.write_all(bytes)
        .map_err(|e| Error::io("writing stdout", e))
}

pub fn cmd_gen(a: &GenArgs, args: Vec<String>, out: &mut dyn Write) -> Result<()> {
    let run = Run::start("gen", a, args, Some(a.seed))?;
    let table = match &a.table {
        Some(p) => SubstitutionTable::load(p)?,
        None => SubstitutionTable::default_table(),
    };
    let sentences: Vec<String> = match (&a.input, a.phrasebook) {
        (Some(p), _) => read_file(p)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect(),
        (None, Some(n)) => phrasebook::sentences(n, a.seed),
        (None, None) => {
            return Err(Error::Argument(
                "one of --in or --phrasebook is required".into(),
            ))
        }
    };
    let corpus = generate_pairs(&sentences, a.mode, &table, a.variants, a.seed)?;
    let tsv = corpus.to_tsv();
    match &a.out {
        Some(path) => {
            write_file(path, tsv.as_bytes())?;
            let inputs = a.input.iter().chain(&a.table).cloned().collect();
            run.finish(inputs, vec![path.clone()])
        }
        None => write_out(out, tsv.as_bytes()),
    }
}

pub fn cmd_train(
    a: &TrainArgs,
    args: Vec<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let run = Run::start("train", a, args, Some(a.seed))?;
    let corpus = load_tsv(
        &a.pairs,
        TsvColumns {
            source: a.src_col,
            target: a.tgt_col,
            lenient: a.lenient,
        },
    )?;
    let options = ModelOptions {
        embed_dim: a.embed,
        hidden_size: a.hidden,
        max_vocab: a.max_vocab,
        max_len_cap: a.max_len,
        policy: a.policy,
    };
    let training = TrainingConfig {
        epochs: a.epochs,
        batch_size: a.batch,
        learning_rate: a.lr,
        seed: a.seed,
        validation_fraction: a.val_fraction,
        checkpoint_path: Some(a.out.clone()),
    };
    let log_path = a.log.clone().unwrap_or_else(|| {
        let mut p = a.out.as_os_str().to_owned();
        p.push(".log.jsonl");
        PathBuf::from(p)
    });
    let mut log = String::new();
    let mut log_error = None;
    let (model, history) = fit(&corpus, &options, &training, |rec| {
        match serde_json::to_string(rec) {
            Ok(line) => {
                log.push_str(&line);
                log.push('\n');
            }
            Err(e) => log_error = Some(e),
        }
        let val = rec.val_loss.map_or("-".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(
            err,
            "epoch {:>3}  train {:.6}  val {val}  {:.1}s",
            rec.epoch, rec.train_loss, rec.seconds
        );
    })?;
    if let Some(e) = log_error {
        return Err(e.into());
    }
    write_file(&log_path, log.as_bytes())?;
    let last = history.epochs.last();
    let final_val = last.and_then(|r| r.val_loss);
    let mut summary = format!("parameters: {}\n", model.parameter_count());
    match final_val {
        Some(v) => summary.push_str(&format!("final val loss: {v:.6}\n")),
        None => summary.push_str(&format!(
            "final train loss: {:.6}\n",
            last.map_or(f64::NAN, |r| r.train_loss)
        )),
    }
    if let Some(best) = history.best_epoch {
        summary.push_str(&format!("saved epoch {best} to {}\n", a.out.display()));
    }
    write_out(out, summary.as_bytes())?;
    run.finish(vec![a.pairs.clone()], vec![a.out.clone(), log_path])
}

pub fn cmd_translate(a: &TranslateArgs, args: Vec<String>, out: &mut dyn Write) -> Result<()> {
    let run = Run::start("translate", a, args, None)?;
    let model = Seq2SeqModel::load(&a.model)?;
    let lines: Vec<String> = match (&a.text, &a.input) {
        (Some(t), _) => vec![t.clone()],
        (None, Some(p)) => read_file(p)?.lines().map(String::from).collect(),
        (None, None) => return Err(Error::Argument("one of --text or --in is required".into())),
    };
    let mut text = String::new();
    for line in model.translate_batch(&lines)? {
        text.push_str(&line);
        text.push('\n');
    }
    match &a.out {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            let inputs = std::iter::once(a.model.clone())
                .chain(a.input.clone())
                .collect();
            run.finish(inputs, vec![path.clone()])
        }
        None => write_out(out, text.as_bytes()),
    }
}

pub fn cmd_eval(a: &EvalArgs, args: Vec<String>, out: &mut dyn Write) -> Result<()> {
    let run = Run::start("eval", a, args, None)?;
    let model = Seq2SeqModel::load(&a.model)?;
    let mut test = load_tsv(
        &a.pairs,
        TsvColumns {
            source: a.src_col,
            target: a.tgt_col,
            lenient: false,
        },
    )?;
    test.source_lang = match &a.language {
        Some(l) => l.clone(),
        None => a
            .pairs
            .file_stem()
            .map_or_else(|| "unknown".into(), |s| s.to_string_lossy().into_owned()),
    };
    let report = evaluate_model(&model, &test, a.smoothing)?;
    write_out(out, render_table(std::slice::from_ref(&report)).as_bytes())?;
    match &a.json {
        Some(path) => {
            write_file(path, (report.to_json()? + "\n").as_bytes())?;
            run.finish(vec![a.model.clone(), a.pairs.clone()], vec![path.clone()])
        }
        None => Ok(()),
    }
}

pub fn cmd_replay(a: &ReplayArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let manifest = RunManifest::load(&a.manifest)?;
    if manifest.subcommand == "replay"
        || manifest.args.first().map(String::as_str) == Some("replay")
    {
        return Err(Error::Argument(
            "a replay manifest cannot be replayed".into(),
        ));
    }
    let argv = std::iter::once("microtrans".to_string()).chain(manifest.args);
    match run(argv, out, err) {
        EXIT_OK => Ok(()),
        code => Err(Error::Argument(format!(
            "replayed command exited with {code}"
        ))),
    }
}
