//! Letters, words and the lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A letter of the alphabet, identified by its 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    /// # Panics
    /// When `index` is zero.
    pub const fn new(index: u32) -> Self {
        assert!(index >= 1, "letter indices start at 1");
        Letter(index)
    }

    pub fn try_new(index: u32) -> Option<Self> {
        (index >= 1).then_some(Letter(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Position in a 0-based table.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_slot(slot: usize) -> Self {
        Letter(slot as u32 + 1)
    }
}

/// A finite word. The derived order on the letter vector is exactly the
/// lexicographic order: first difference decides, a proper prefix is smaller.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from 1-based indices.
    pub fn from_indices(indices: &[u32]) -> Self {
        Word(indices.iter().map(|&i| Letter::new(i)).collect())
    }

    pub fn letter(letter: Letter) -> Self {
        Word(vec![letter])
    }

    /// `letter` repeated `count` times.
    pub fn run(letter: Letter, count: usize) -> Self {
        Word(vec![letter; count])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.0).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn prepend(&self, letter: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    pub fn append(&self, letter: Letter) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Subword `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Length of the leading run of `letter`.
    pub fn leading_run(&self, letter: Letter) -> usize {
        self.0.iter().take_while(|&&l| l == letter).count()
    }

    pub fn starts_with(&self, letter: Letter) -> bool {
        self.first() == Some(letter)
    }

    /// Splits off the maximal leading run of the first letter.
    pub fn split_leading_run(&self) -> Option<(Letter, usize, Word)> {
        let first = self.first()?;
        let n = self.leading_run(first);
        Some((first, n, self.slice(n, self.len())))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

pub fn lex_compare(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

/// All `c^n` words of length `n` over letters `1..=c`, lexicographically ascending.
pub fn words_of_length(n: usize, c: usize) -> Vec<Word> {
    assert!(c >= 1, "alphabet must be non-empty");
    let mut out = Vec::with_capacity(c.pow(n as u32));
    let mut current = vec![Letter(1); n];
    loop {
        out.push(Word(current.clone()));
        // odometer, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if (current[pos].0 as usize) < c {
                current[pos].0 += 1;
                for l in current.iter_mut().skip(pos + 1) {
                    l.0 = 1;
                }
                break;
            }
        }
    }
}

/// Words of every length `1..=max_len`, grouped by length.
pub fn words_up_to(max_len: usize, c: usize) -> Vec<Vec<Word>> {
    (0..=max_len).map(|n| words_of_length(n, c)).collect()
}

/// All `len(w)+1` deconcatenations `(u, v)` with `uv = w`, shortest prefix first.
pub fn deconcat_splits(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|i| (w.slice(0, i), w.slice(i, w.len()))).collect()
}

/// How letters are spelled in text.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum LetterNames {
    /// `a`..`z` for indices up to 26, dotted numerals (`1.27.3`) otherwise.
    #[default]
    Latin,
    /// A prefix followed by the index, as in `x1x12`.
    Indexed(String),
    /// One explicit name per letter, matched greedily (longest first).
    Named(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordParseError {
    #[error("empty word text (use `_` for the empty word)")]
    Blank,
    #[error("cannot read letter at `{0}`")]
    BadLetter(String),
    #[error("letter {0} is outside the alphabet")]
    OutOfRange(u32),
}

impl LetterNames {
    pub fn named<S: AsRef<str>>(names: &[S]) -> Self {
        LetterNames::Named(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(WordParseError::Blank);
        }
        if text == "_" {
            return Ok(Word::empty());
        }
        if text.chars().all(|c| c.is_ascii_digit() || c == '.') {
            return parse_dotted(text);
        }
        match self {
            LetterNames::Latin => text
                .chars()
                .map(|c| match c {
                    'a'..='z' => Ok(Letter(c as u32 - 'a' as u32 + 1)),
                    _ => Err(WordParseError::BadLetter(c.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Word),
            LetterNames::Indexed(prefix) => {
                let mut rest = text;
                let mut letters = Vec::new();
                while !rest.is_empty() {
                    let tail = rest
                        .strip_prefix(prefix.as_str())
                        .ok_or_else(|| WordParseError::BadLetter(rest.to_string()))?;
                    let digits = tail.chars().take_while(|c| c.is_ascii_digit()).count();
                    let index: u32 = tail[..digits]
                        .parse()
                        .map_err(|_| WordParseError::BadLetter(rest.to_string()))?;
                    letters.push(Letter::try_new(index).ok_or(WordParseError::OutOfRange(0))?);
                    rest = &tail[digits..];
                }
                Ok(Word(letters))
            }
            LetterNames::Named(names) => {
                let mut order: Vec<usize> = (0..names.len()).collect();
                order.sort_by_key(|&i| std::cmp::Reverse(names[i].len()));
                let mut rest = text;
                let mut letters = Vec::new();
                'outer: while !rest.is_empty() {
                    for &i in &order {
                        if let Some(tail) = rest.strip_prefix(names[i].as_str()) {
                            letters.push(Letter::from_slot(i));
                            rest = tail;
                            continue 'outer;
                        }
                    }
                    return Err(WordParseError::BadLetter(rest.to_string()));
                }
                Ok(Word(letters))
            }
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "_".to_string();
        }
        match self {
            LetterNames::Latin if w.max_index() <= 26 => w
                .0
                .iter()
                .map(|l| char::from(b'a' + (l.0 - 1) as u8))
                .collect(),
            LetterNames::Indexed(prefix) => {
                w.0.iter().map(|l| format!("{prefix}{}", l.0)).collect()
            }
            LetterNames::Named(names) if w.max_index() as usize <= names.len() => {
                w.0.iter().map(|l| names[l.slot()].as_str()).collect()
            }
            _ => dotted(w),
        }
    }
}

fn dotted(w: &Word) -> String {
    w.0.iter().map(|l| l.0.to_string()).collect::<Vec<_>>().join(".")
}

fn parse_dotted(text: &str) -> Result<Word, WordParseError> {
    text.split('.')
        .map(|part| {
            let index: u32 = part
                .parse()
                .map_err(|_| WordParseError::BadLetter(part.to_string()))?;
            Letter::try_new(index).ok_or(WordParseError::OutOfRange(index))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&LetterNames::Latin.format_word(self))
    }
}

impl std::str::FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LetterNames::Latin.parse_word(s)
    }
}

/// Shorthand for tests and examples: `w("abba")`.
///
/// # Panics
/// On text that is not a Latin or dotted word.
pub fn w(text: &str) -> Word {
    text.parse().expect("invalid word literal")
}
