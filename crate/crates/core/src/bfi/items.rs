//! The 44 Big Five Inventory items, their letters, traits, and
//! reverse-scoring flags, plus the questionnaire prompt.
//!
//! Statements are indexed by letter (a..z, aa..ar) rather than number so
//! the model cannot confuse statement indices with Likert responses. The
//! canonical 1..44 numbering of the scoring scale maps to letters by
//! ordinal position.

use crate::persona::TraitName;

/// One questionnaire statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfiItem {
    pub letter: &'static str,
    pub text: &'static str,
    /// Ordinal position, 1-based: a = 1, ..., ar = 44.
    pub canonical_index: u8,
    pub trait_name: TraitName,
    pub reversed: bool,
}

use TraitName::{
    Agreeableness as A, Conscientiousness as C, Extraversion as E, Neuroticism as N, Openness as O,
};

const ITEMS: [BfiItem; 44] = [
    BfiItem {
        letter: "a",
        text: "Is talkative",
        canonical_index: 1,
        trait_name: E,
        reversed: false,
    },
    BfiItem {
        letter: "b",
        text: "Tends to find fault with others",
        canonical_index: 2,
        trait_name: A,
        reversed: true,
    },
    BfiItem {
        letter: "c",
        text: "Does a thorough job",
        canonical_index: 3,
        trait_name: C,
        reversed: false,
    },
    BfiItem {
        letter: "d",
        text: "Is depressed, blue",
        canonical_index: 4,
        trait_name: N,
        reversed: false,
    },
    BfiItem {
        letter: "e",
        text: "Is original, comes up with new ideas",
        canonical_index: 5,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "f",
        text: "Is reserved",
        canonical_index: 6,
        trait_name: E,
        reversed: true,
    },
    BfiItem {
        letter: "g",
        text: "Is helpful and unselfish with others",
        canonical_index: 7,
        trait_name: A,
        reversed: false,
    },
    BfiItem {
        letter: "h",
        text: "Can be somewhat careless",
        canonical_index: 8,
        trait_name: C,
        reversed: true,
    },
    BfiItem {
        letter: "i",
        text: "Is relaxed, handles stress well",
        canonical_index: 9,
        trait_name: N,
        reversed: true,
    },
    BfiItem {
        letter: "j",
        text: "Is curious about many different things",
        canonical_index: 10,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "k",
        text: "Is full of energy",
        canonical_index: 11,
        trait_name: E,
        reversed: false,
    },
    BfiItem {
        letter: "l",
        text: "Starts quarrels with others",
        canonical_index: 12,
        trait_name: A,
        reversed: true,
    },
    BfiItem {
        letter: "m",
        text: "Is a reliable worker",
        canonical_index: 13,
        trait_name: C,
        reversed: false,
    },
    BfiItem {
        letter: "n",
        text: "Can be tense",
        canonical_index: 14,
        trait_name: N,
        reversed: false,
    },
    BfiItem {
        letter: "o",
        text: "Is ingenious, a deep thinker",
        canonical_index: 15,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "p",
        text: "Generates a lot of enthusiasm",
        canonical_index: 16,
        trait_name: E,
        reversed: false,
    },
    BfiItem {
        letter: "q",
        text: "Has a forgiving nature",
        canonical_index: 17,
        trait_name: A,
        reversed: false,
    },
    BfiItem {
        letter: "r",
        text: "Tends to be disorganized",
        canonical_index: 18,
        trait_name: C,
        reversed: true,
    },
    BfiItem {
        letter: "s",
        text: "Worries a lot",
        canonical_index: 19,
        trait_name: N,
        reversed: false,
    },
    BfiItem {
        letter: "t",
        text: "Has an active imagination",
        canonical_index: 20,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "u",
        text: "Tends to be quiet",
        canonical_index: 21,
        trait_name: E,
        reversed: true,
    },
    BfiItem {
        letter: "v",
        text: "Is generally trusting",
        canonical_index: 22,
        trait_name: A,
        reversed: false,
    },
    BfiItem {
        letter: "w",
        text: "Tends to be lazy",
        canonical_index: 23,
        trait_name: C,
        reversed: true,
    },
    BfiItem {
        letter: "x",
        text: "Is emotionally stable, not easily upset",
        canonical_index: 24,
        trait_name: N,
        reversed: true,
    },
    BfiItem {
        letter: "y",
        text: "Is inventive",
        canonical_index: 25,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "z",
        text: "Has an assertive personality",
        canonical_index: 26,
        trait_name: E,
        reversed: false,
    },
    BfiItem {
        letter: "aa",
        text: "Can be cold and aloof",
        canonical_index: 27,
        trait_name: A,
        reversed: true,
    },
    BfiItem {
        letter: "ab",
        text: "Perseveres until the task is finished",
        canonical_index: 28,
        trait_name: C,
        reversed: false,
    },
    BfiItem {
        letter: "ac",
        text: "Can be moody",
        canonical_index: 29,
        trait_name: N,
        reversed: false,
    },
    BfiItem {
        letter: "ad",
        text: "Values artistic, aesthetic experiences",
        canonical_index: 30,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "ae",
        text: "Is sometimes shy, inhibited",
        canonical_index: 31,
        trait_name: E,
        reversed: true,
    },
    BfiItem {
        letter: "af",
        text: "Is considerate and kind to almost everyone",
        canonical_index: 32,
        trait_name: A,
        reversed: false,
    },
    BfiItem {
        letter: "ag",
        text: "Does things efficiently",
        canonical_index: 33,
        trait_name: C,
        reversed: false,
    },
    BfiItem {
        letter: "ah",
        text: "Remains calm in tense situations",
        canonical_index: 34,
        trait_name: N,
        reversed: true,
    },
    BfiItem {
        letter: "ai",
        text: "Prefers work that is routine",
        canonical_index: 35,
        trait_name: O,
        reversed: true,
    },
    BfiItem {
        letter: "aj",
        text: "Is outgoing, sociable",
        canonical_index: 36,
        trait_name: E,
        reversed: false,
    },
    BfiItem {
        letter: "ak",
        text: "Is sometimes rude to others",
        canonical_index: 37,
        trait_name: A,
        reversed: true,
    },
    BfiItem {
        letter: "al",
        text: "Makes plans and follows through with them",
        canonical_index: 38,
        trait_name: C,
        reversed: false,
    },
    BfiItem {
        letter: "am",
        text: "Gets nervous easily",
        canonical_index: 39,
        trait_name: N,
        reversed: false,
    },
    BfiItem {
        letter: "an",
        text: "Likes to reflect, play with ideas",
        canonical_index: 40,
        trait_name: O,
        reversed: false,
    },
    BfiItem {
        letter: "ao",
        text: "Has few artistic interests",
        canonical_index: 41,
        trait_name: O,
        reversed: true,
    },
    BfiItem {
        letter: "ap",
        text: "Likes to cooperate with others",
        canonical_index: 42,
        trait_name: A,
        reversed: false,
    },
    BfiItem {
        letter: "aq",
        text: "Is easily distracted",
        canonical_index: 43,
        trait_name: C,
        reversed: true,
    },
    BfiItem {
        letter: "ar",
        text: "Is sophisticated in art, music, or literature",
        canonical_index: 44,
        trait_name: O,
        reversed: false,
    },
];

/// All 44 items in questionnaire order.
pub fn items() -> &'static [BfiItem] {
    &ITEMS
}

/// Item lookup by letter.
pub fn item_by_letter(letter: &str) -> Option<&'static BfiItem> {
    ITEMS.iter().find(|item| item.letter == letter)
}

/// Number of items contributing to each trait sum.
pub fn items_per_trait(trait_name: TraitName) -> u32 {
    ITEMS
        .iter()
        .filter(|item| item.trait_name == trait_name)
        .count() as u32
}

const PROMPT_TEMPLATE: &str = "Here are a number of characteristics that may or may not apply \
to you. For example, do you agree that you are someone who likes to spend time with others? \
Please write a number next to each statement to indicate the extent to which you agree or \
disagree with that statement, such as `(a) 1' without explanation separated by new lines.\n\
\n\
1 for Disagree strongly, 2 Disagree a little, 3 for Neither agree nor disagree, 4 for Agree a \
little, 5 for Agree strongly.\n\
\n\
Statements: {BFI statements}";

/// The questionnaire prompt: the fixed scaffold with the 44 lettered
/// statements substituted for the `{BFI statements}` placeholder. Pure;
/// repeated calls are byte-identical.
pub fn build_bfi_prompt() -> String {
    let statements: Vec<String> = ITEMS
        .iter()
        .map(|item| format!("({}) {}", item.letter, item.text))
        .collect();
    PROMPT_TEMPLATE.replace("{BFI statements}", &statements.join("\n"))
}
