/// Reverses the whole phrase, character by character.
pub fn mirror_encode(text: &str) -> String {
    text.chars().rev().collect()
}
