//! Alphabets and words over interned symbols.

use std::cmp::Ordering;

use thiserror::Error;

/// A word is a sequence of symbol indices into its [`Alphabet`].
pub type Word = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot read {word:?} as a word over the alphabet {alphabet:?}")]
    Unreadable { word: String, alphabet: Vec<String> },
    #[error("symbol {0:?} appears twice in the alphabet")]
    Duplicate(String),
    #[error("alphabet symbols must be non-empty and free of whitespace, got {0:?}")]
    BadSymbol(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Alphabet, WordError> {
        let mut out: Vec<String> = Vec::new();
        for s in symbols {
            let s = s.into();
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(WordError::BadSymbol(s));
            }
            if out.contains(&s) {
                return Err(WordError::Duplicate(s));
            }
            out.push(s);
        }
        Ok(Alphabet { symbols: out })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, s: &str) -> Option<usize> {
        self.symbols.iter().position(|x| x == s)
    }

    /// Reads a word. Whitespace-separated input is read token by token;
    /// otherwise the string is split into symbols, preferring longer symbols.
    pub fn parse_word(&self, s: &str) -> Result<Word, WordError> {
        let unreadable = || WordError::Unreadable { word: s.to_string(), alphabet: self.symbols.clone() };
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            match self.index_of(tok) {
                Some(i) => out.push(i),
                None => out.extend(greedy_split(tok, &self.symbols).ok_or_else(unreadable)?),
            }
        }
        Ok(out)
    }

    /// Renders a word; symbols are concatenated when all are single
    /// characters and space-separated otherwise. The empty word renders as "".
    pub fn render(&self, w: &[usize]) -> String {
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            w.iter().map(|&i| self.symbols[i].as_str()).collect()
        } else {
            w.iter().map(|&i| self.symbols[i].as_str()).collect::<Vec<_>>().join(" ")
        }
    }

    /// All words of length at most `maxlen`, in length-lexicographic order.
    pub fn words_up_to(&self, maxlen: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..maxlen {
            let next: Vec<Word> = layer
                .iter()
                .flat_map(|w: &Word| {
                    (0..self.len()).map(move |a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// Splits `s` into a sequence of symbols, trying longer symbols first and
/// backtracking when a choice leads to a dead end.
pub fn greedy_split(s: &str, symbols: &[String]) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..symbols.len()).filter(|&i| !symbols[i].is_empty()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(symbols[i].len()));
    fn go(rest: &str, symbols: &[String], order: &[usize], acc: &mut Vec<usize>) -> bool {
        if rest.is_empty() {
            return true;
        }
        for &i in order {
            if let Some(tail) = rest.strip_prefix(symbols[i].as_str()) {
                acc.push(i);
                if go(tail, symbols, order, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(s, symbols, &order, &mut acc).then_some(acc)
}

/// Shorter words first, then lexicographic by symbol index.
pub fn length_lex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn reversed(w: &[usize]) -> Word {
    w.iter().rev().copied().collect()
}
