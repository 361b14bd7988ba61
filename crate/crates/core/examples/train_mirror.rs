//! Train a small mirror-writing translator, then translate and score it.
//!
//! cargo run --release --example train_mirror -- 2000 15

use microtrans::corpus::{split, CleaningPolicy};
use microtrans::eval::{evaluate_model, render_table, Smoothing};
use microtrans::obfuscation::{generate_pairs, ObfuscationMode, SubstitutionTable};
use microtrans::phrasebook;
use microtrans::seq2seq::{fit, ModelOptions, TrainingConfig};

fn main() -> microtrans::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let count: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(2_000);
    let epochs: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(15);

    let sentences = phrasebook::sentences(count, 7);
    let corpus = generate_pairs(
        &sentences,
        ObfuscationMode::Mirror,
        &SubstitutionTable::default_table(),
        1,
        1,
    )?;
    let (train, test) = split(&corpus, 0.9, 3)?;

    let options = ModelOptions {
        embed_dim: 128,
        hidden_size: 128,
        policy: CleaningPolicy::Obfuscated,
        ..ModelOptions::default()
    };
    let training = TrainingConfig {
        epochs,
        ..TrainingConfig::default()
    };
    let (model, history) = fit(&train, &options, &training, |r| {
        eprintln!(
            "epoch {:>2}  train {:.4}  val {:.4?}  {:.1}s",
            r.epoch, r.train_loss, r.val_loss, r.seconds
        )
    })?;
    println!(
        "{} parameters, best epoch {:?}",
        model.parameter_count(),
        history.best_epoch
    );

    for s in ["tfel tsuj ehS", "bmob a saw ti"] {
        println!("{s} -> {}", model.translate(s)?);
    }
    let report = evaluate_model(&model, &test, Smoothing::None)?;
    print!("{}", render_table(&[report]));
    Ok(())
}
