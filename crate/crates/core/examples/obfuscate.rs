//! Render sentences in every obfuscation mode.
//!
//! cargo run --example obfuscate -- "It was a bomb" "Shoot me"

use microtrans::obfuscation::{leet_encode, mirror_encode, LeetTier, SubstitutionTable};

fn main() -> microtrans::Result<()> {
    let mut sentences: Vec<String> = std::env::args().skip(1).collect();
    if sentences.is_empty() {
        sentences = vec![
            "It was a bomb".into(),
            "She just left".into(),
            "Shoot me".into(),
        ];
    }
    let table = SubstitutionTable::default_table();
    for s in &sentences {
        println!("{s}");
        println!(
            "  lite    {}",
            leet_encode(s, LeetTier::Lite, &table, None)?
        );
        println!("  mid     {}", leet_encode(s, LeetTier::Mid, &table, None)?);
        for seed in 0..3 {
            println!(
                "  hard/{seed}  {}",
                leet_encode(s, LeetTier::Hard, &table, Some(seed))?
            );
        }
        println!("  mirror  {}", mirror_encode(s));
    }
    Ok(())
}
