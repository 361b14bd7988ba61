//! Read a Tatoeba/Anki style TSV file, pick the translation direction,
//! clean it, split it and build vocabularies.
//!
//! cargo run --example load_pairs -- fra.txt 1 0

use microtrans::corpus::{build_vocab, clean, load_tsv, split, CleaningPolicy, TsvColumns};

fn main() -> microtrans::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(path) = args.first() else {
        eprintln!("usage: load_pairs FILE [SRC_COL TGT_COL]");
        std::process::exit(2);
    };
    let columns = TsvColumns {
        source: args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0),
        target: args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1),
        lenient: true,
    };
    let corpus = load_tsv(path, columns)?;
    let cleaned = clean(&corpus, CleaningPolicy::Natural);
    println!(
        "{} pairs read, {} dropped by cleaning",
        corpus.len(),
        cleaned.dropped
    );

    let (train, test) = split(&cleaned.corpus, 0.8, 0)?;
    let src = build_vocab(train.sources(), Some(6_000));
    let tgt = build_vocab(train.targets(), Some(6_000));
    println!(
        "train {} / test {}; vocabularies {} / {}",
        train.len(),
        test.len(),
        src.len(),
        tgt.len()
    );
    if let Some(p) = corpus.pairs.first() {
        println!(
            "first pair: {:?} -> {:?} ({})",
            p.source,
            p.target,
            p.attribution.as_deref().unwrap_or("no attribution")
        );
    }
    Ok(())
}
