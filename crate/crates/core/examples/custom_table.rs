//! Swap in a different substitution table and round-trip it through text.

use microtrans::obfuscation::{leet_encode, LeetTier, SubstitutionTable};

fn main() -> microtrans::Result<()> {
    // Start from the bundled table and change the mid-tier choice for A.
    let text = SubstitutionTable::default_table()
        .to_text()
        .replace("!name\tdefault", "!name\tat-sign")
        .replace("\nA\t4\t@", "\nA\t@\t4");
    let table = SubstitutionTable::parse(&text)?;
    assert_eq!(SubstitutionTable::parse(&table.to_text())?, table);

    println!("table {:?}", table.name);
    println!(
        "A candidates: {:?}",
        table.candidates('A').unwrap_or_default()
    );
    println!("{}", leet_encode("a bad cat", LeetTier::Mid, &table, None)?);
    Ok(())
}
