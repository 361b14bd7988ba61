//! Build a bilingual (obfuscated, English) corpus and write it as TSV.
//!
//! cargo run --example generate_corpus -- leet-hard 1000 7 pairs.tsv

use microtrans::obfuscation::{generate_pairs, ObfuscationMode, SubstitutionTable};
use microtrans::phrasebook;

fn main() -> microtrans::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mode: ObfuscationMode = args.first().map_or("leet-hard", String::as_str).parse()?;
    let count: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1_000);
    let variants: usize = args
        .get(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(if mode.is_deterministic() { 1 } else { 7 });

    let sentences = phrasebook::sentences(count, 0);
    let corpus = generate_pairs(
        &sentences,
        mode,
        &SubstitutionTable::default_table(),
        variants,
        1,
    )?;
    match args.get(3) {
        Some(path) => {
            corpus.save_tsv(path)?;
            eprintln!("wrote {} {} pairs to {path}", corpus.len(), mode);
        }
        None => {
            for pair in corpus.pairs.iter().take(10) {
                println!("{}\t{}", pair.source, pair.target);
            }
            eprintln!("... {} pairs in total", corpus.len());
        }
    }
    Ok(())
}
