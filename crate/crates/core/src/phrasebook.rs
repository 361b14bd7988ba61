//! Seeded generator of short English phrase-book sentences.
//!
//! Produces Tatoeba-style lines ("She just left", "We will visit the old
//! castle tomorrow"): first word capitalized, no final punctuation. Useful
//! as the English side of generated obfuscation corpora when no sentence
//! list is at hand.

use std::collections::HashSet;

use crate::rng::SplitMix64;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Person {
    First,
    Second,
    Third,
    Plural,
}

struct Verb {
    base: &'static str,
    third: &'static str,
    past: &'static str,
    ing: &'static str,
    transitive: bool,
}

const fn v(
    base: &'static str,
    third: &'static str,
    past: &'static str,
    ing: &'static str,
    transitive: bool,
) -> Verb {
    Verb {
        base,
        third,
        past,
        ing,
        transitive,
    }
}

const VERBS: &[Verb] = &[
    v("see", "sees", "saw", "seeing", true),
    v("buy", "buys", "bought", "buying", true),
    v("find", "finds", "found", "finding", true),
    v("need", "needs", "needed", "needing", true),
    v("want", "wants", "wanted", "wanting", true),
    v("like", "likes", "liked", "liking", true),
    v("love", "loves", "loved", "loving", true),
    v("hate", "hates", "hated", "hating", true),
    v("open", "opens", "opened", "opening", true),
    v("close", "closes", "closed", "closing", true),
    v("clean", "cleans", "cleaned", "cleaning", true),
    v("paint", "paints", "painted", "painting", true),
    v("sell", "sells", "sold", "selling", true),
    v("carry", "carries", "carried", "carrying", true),
    v("bring", "brings", "brought", "bringing", true),
    v("take", "takes", "took", "taking", true),
    v("read", "reads", "read", "reading", true),
    v("write", "writes", "wrote", "writing", true),
    v("lose", "loses", "lost", "losing", true),
    v("fix", "fixes", "fixed", "fixing", true),
    v("break", "breaks", "broke", "breaking", true),
    v("hide", "hides", "hid", "hiding", true),
    v("watch", "watches", "watched", "watching", true),
    v("visit", "visits", "visited", "visiting", true),
    v("cook", "cooks", "cooked", "cooking", true),
    v("eat", "eats", "ate", "eating", true),
    v("drink", "drinks", "drank", "drinking", true),
    v("order", "orders", "ordered", "ordering", true),
    v("borrow", "borrows", "borrowed", "borrowing", true),
    v("keep", "keeps", "kept", "keeping", true),
    v("draw", "draws", "drew", "drawing", true),
    v("wash", "washes", "washed", "washing", true),
    v("leave", "leaves", "left", "leaving", false),
    v("arrive", "arrives", "arrived", "arriving", false),
    v("sleep", "sleeps", "slept", "sleeping", false),
    v("laugh", "laughs", "laughed", "laughing", false),
    v("cry", "cries", "cried", "crying", false),
    v("win", "wins", "won", "winning", false),
    v("lose", "loses", "lost", "losing", false),
    v("run", "runs", "ran", "running", false),
    v("swim", "swims", "swam", "swimming", false),
    v("sing", "sings", "sang", "singing", false),
    v("dance", "dances", "danced", "dancing", false),
    v("wait", "waits", "waited", "waiting", false),
    v("work", "works", "worked", "working", false),
    v("study", "studies", "studied", "studying", false),
    v("smile", "smiles", "smiled", "smiling", false),
    v("shout", "shouts", "shouted", "shouting", false),
    v("travel", "travels", "traveled", "traveling", false),
    v("fall", "falls", "fell", "falling", false),
];

const NOUNS: &[&str] = &[
    "book",
    "car",
    "door",
    "window",
    "letter",
    "key",
    "phone",
    "bag",
    "dog",
    "cat",
    "horse",
    "bird",
    "house",
    "room",
    "table",
    "chair",
    "bed",
    "lamp",
    "clock",
    "watch",
    "picture",
    "song",
    "movie",
    "game",
    "ball",
    "bike",
    "boat",
    "train",
    "ticket",
    "map",
    "box",
    "cup",
    "glass",
    "bottle",
    "plate",
    "knife",
    "apple",
    "bread",
    "cake",
    "soup",
    "fish",
    "egg",
    "coffee",
    "tea",
    "milk",
    "juice",
    "shirt",
    "coat",
    "hat",
    "shoe",
    "dress",
    "ring",
    "gift",
    "pen",
    "pencil",
    "notebook",
    "camera",
    "computer",
    "radio",
    "newspaper",
    "story",
    "question",
    "answer",
    "problem",
    "plan",
    "idea",
    "job",
    "bomb",
    "flower",
    "tree",
    "garden",
    "river",
    "bridge",
    "road",
    "city",
    "village",
    "castle",
    "church",
    "school",
    "hospital",
    "library",
    "shop",
    "market",
    "bank",
    "office",
    "kitchen",
    "letterbox",
    "umbrella",
    "wallet",
    "mirror",
    "candle",
];

const ADJECTIVES: &[&str] = &[
    "new",
    "old",
    "big",
    "small",
    "red",
    "blue",
    "green",
    "black",
    "white",
    "yellow",
    "cheap",
    "expensive",
    "beautiful",
    "ugly",
    "strange",
    "famous",
    "broken",
    "empty",
    "full",
    "heavy",
    "light",
    "clean",
    "dirty",
    "warm",
    "cold",
    "hot",
    "long",
    "short",
    "quiet",
    "noisy",
    "funny",
    "sad",
    "happy",
    "tired",
    "hungry",
    "angry",
    "busy",
    "sick",
    "ready",
    "late",
    "early",
    "rich",
    "poor",
    "young",
    "strong",
    "weak",
    "kind",
    "brave",
    "lazy",
    "clever",
];

const STATES: &[&str] = &[
    "happy", "tired", "hungry", "angry", "busy", "sick", "ready", "late", "early", "rich", "poor",
    "young", "strong", "weak", "kind", "brave", "lazy", "clever", "sad", "funny", "quiet",
    "famous", "right", "wrong", "free", "alone", "asleep", "awake", "afraid", "sorry",
];

const PROFESSIONS: &[&str] = &[
    "doctor", "teacher", "student", "nurse", "farmer", "singer", "writer", "painter", "pilot",
    "cook", "driver", "lawyer", "soldier", "dancer", "baker",
];

const NAMES: &[&str] = &[
    "Tom", "Mary", "John", "Anna", "Paul", "Lucy", "Mark", "Emma", "David", "Sara", "Peter",
    "Laura",
];

const RELATIVES: &[&str] = &[
    "father", "mother", "brother", "sister", "uncle", "aunt", "friend", "neighbor", "boss",
    "teacher", "son", "daughter", "cousin", "wife", "husband",
];

const POSSESSIVES: &[&str] = &["my", "your", "his", "her", "our", "their"];

const TIMES: &[&str] = &[
    "yesterday",
    "today",
    "tomorrow",
    "now",
    "again",
    "tonight",
    "early",
    "later",
    "last week",
    "last night",
    "this morning",
    "every day",
    "on Sunday",
    "on Monday",
    "at noon",
];

const PLACES: &[&str] = &[
    "at home",
    "at school",
    "at work",
    "in the garden",
    "in the kitchen",
    "in the park",
    "in the city",
    "in the village",
    "at the station",
    "at the market",
    "in the car",
    "on the train",
    "by the river",
    "near the bridge",
    "in the library",
    "at the office",
];

const ADVERBS: &[&str] = &[
    "just", "never", "often", "always", "already", "really", "finally", "suddenly",
];

const MODALS: &[&str] = &[
    "can", "will", "should", "must", "might", "cannot", "would", "could",
];

const WH: &[&str] = &[
    "Where is",
    "Who has",
    "Who took",
    "Who broke",
    "Who found",
    "What happened to",
];

fn pick<'a>(rng: &mut SplitMix64, items: &[&'a str]) -> &'a str {
    items[rng.below(items.len())]
}

fn subject(rng: &mut SplitMix64) -> (String, Person) {
    match rng.below(10) {
        0 => ("I".into(), Person::First),
        1 => ("you".into(), Person::Second),
        2 => ("he".into(), Person::Third),
        3 => ("she".into(), Person::Third),
        4 => ("we".into(), Person::Plural),
        5 => ("they".into(), Person::Plural),
        6 | 7 => (pick(rng, NAMES).into(), Person::Third),
        8 => (
            format!("{} {}", pick(rng, POSSESSIVES), pick(rng, RELATIVES)),
            Person::Third,
        ),
        _ => (format!("the {}", pick(rng, PROFESSIONS)), Person::Third),
    }
}

fn object(rng: &mut SplitMix64) -> String {
    let noun = pick(rng, NOUNS);
    match rng.below(6) {
        0 => format!("the {noun}"),
        1 => format!("the {} {noun}", pick(rng, ADJECTIVES)),
        2 => format!("a {} {noun}", pick(rng, ADJECTIVES)),
        3 => format!("{} {noun}", pick(rng, POSSESSIVES)),
        4 => format!(
            "{} {} {noun}",
            pick(rng, POSSESSIVES),
            pick(rng, ADJECTIVES)
        ),
        _ => {
            let article = if noun.starts_with(['a', 'e', 'i', 'o', 'u']) {
                "an"
            } else {
                "a"
            };
            format!("{article} {noun}")
        }
    }
}

fn be(person: Person, past: bool) -> &'static str {
    match (person, past) {
        (Person::First, false) => "am",
        (Person::Third, false) => "is",
        (_, false) => "are",
        (Person::First | Person::Third, true) => "was",
        (_, true) => "were",
    }
}

fn complement(rng: &mut SplitMix64, verb: &Verb) -> String {
    if verb.transitive {
        format!(" {}", object(rng))
    } else {
        String::new()
    }
}

fn tail(rng: &mut SplitMix64) -> String {
    match rng.below(4) {
        0 => format!(" {}", pick(rng, TIMES)),
        1 => format!(" {}", pick(rng, PLACES)),
        _ => String::new(),
    }
}

fn sentence(rng: &mut SplitMix64) -> String {
    let (subj, person) = subject(rng);
    let verb = &VERBS[rng.below(VERBS.len())];
    let raw = match rng.below(12) {
        0 | 1 => format!("{subj} {}{}{}", verb.past, complement(rng, verb), tail(rng)),
        2 => {
            let form = if person == Person::Third {
                verb.third
            } else {
                verb.base
            };
            format!(
                "{subj} {} {form}{}",
                pick(rng, ADVERBS),
                complement(rng, verb)
            )
        }
        3 | 4 => format!(
            "{subj} {} {}{}{}",
            pick(rng, MODALS),
            verb.base,
            complement(rng, verb),
            tail(rng)
        ),
        5 => format!(
            "{subj} {} {}{}",
            be(person, rng.below(2) == 0),
            verb.ing,
            complement(rng, verb)
        ),
        6 => {
            let very = if rng.below(3) == 0 { "very " } else { "" };
            format!(
                "{subj} {} {very}{}",
                be(person, rng.below(2) == 0),
                pick(rng, STATES)
            )
        }
        7 => {
            let article = if rng.below(2) == 0 { "a" } else { "the" };
            format!(
                "{subj} {} {article} {}",
                be(person, rng.below(2) == 0),
                pick(rng, PROFESSIONS)
            )
        }
        8 => {
            let please = if rng.below(3) == 0 { " please" } else { "" };
            format!("{}{}{please}", verb.base, complement(rng, verb))
        }
        9 => format!("{} {}", pick(rng, WH), object(rng)),
        10 => format!(
            "it {} {}",
            if rng.below(2) == 0 { "was" } else { "is" },
            object(rng)
        ),
        _ => format!("{subj} did not {}{}", verb.base, complement(rng, verb)),
    };
    capitalize(&raw)
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `count` distinct sentences, deterministic in `seed`.
pub fn sentences(count: usize, seed: u64) -> Vec<String> {
    let mut rng = SplitMix64::new(seed);
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = sentence(&mut rng);
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}
