//! Save a model, inspect the file layout and load it back.

use microtrans::corpus::{build_vocab, CleaningPolicy};
use microtrans::seq2seq::format::{FORMAT_VERSION, MAGIC};
use microtrans::seq2seq::{ModelConfig, Seq2SeqModel};
use microtrans::Error;

fn main() -> microtrans::Result<()> {
    let src = build_vocab(["tfel tsuj ehs", "em toohs"], None);
    let tgt = build_vocab(["she just left", "shoot me"], None);
    let config = ModelConfig {
        embed_dim: 64,
        hidden_size: 64,
        src_vocab_size: src.len(),
        tgt_vocab_size: tgt.len(),
        src_max_len: 4,
        tgt_max_len: 4,
    };
    let model = Seq2SeqModel::new(config, src, tgt, CleaningPolicy::Natural, 0)?;

    let dir = std::env::temp_dir().join("microtrans-model-file");
    std::fs::create_dir_all(&dir).map_err(|e| Error::io("creating temp dir", e))?;
    let path = dir.join("untrained.mtm");
    model.save(&path)?;

    let bytes = std::fs::read(&path).map_err(|e| Error::io("reading model", e))?;
    let header_len = u32::from_le_bytes(bytes[9..13].try_into().expect("4 bytes")) as usize;
    println!(
        "{} bytes; magic ok: {}; version {}",
        bytes.len(),
        &bytes[..8] == MAGIC,
        bytes[8]
    );
    assert_eq!(bytes[8], FORMAT_VERSION);
    println!(
        "header ({header_len} bytes): {}",
        String::from_utf8_lossy(&bytes[13..13 + header_len])
    );
    println!("{} parameters stored as f32", model.parameter_count());

    let loaded = Seq2SeqModel::load(&path)?;
    println!(
        "reloaded output for \"em toohs\": {:?}",
        loaded.translate("em toohs")?
    );
    Ok(())
}
