use std::collections::HashSet;

use serde_json::{json, Value};

use crate::words::{Alphabet, Word};

/// A suffix telling prefixes `i` and `j` apart: exactly one of
/// `prefixes[i]·suffix` and `prefixes[j]·suffix` is in the language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub suffix: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerodeReport {
    pub prefixes: Vec<Word>,
    pub witnesses: Vec<PairWitness>,
}

fn words_over(symbols: &[usize], maxlen: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for &a in symbols {
                let mut w2: Word = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Greedily collects prefixes over `symbols` (in length-lexicographic order,
/// up to `prefix_maxlen`) whose residuals differ pairwise on some suffix of
/// length at most `suffix_maxlen`. Stops after `want` prefixes.
pub fn nerode_separators(
    oracle: &dyn Fn(&[usize]) -> bool,
    symbols: &[usize],
    prefix_maxlen: usize,
    suffix_maxlen: usize,
    want: usize,
) -> NerodeReport {
    let suffixes = words_over(symbols, suffix_maxlen);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut chosen: Vec<(Word, Vec<bool>)> = Vec::new();
    for u in words_over(symbols, prefix_maxlen) {
        if chosen.len() >= want {
            break;
        }
        let sig: Vec<bool> = suffixes
            .iter()
            .map(|s| {
                let mut w = u.clone();
                w.extend(s);
                oracle(&w)
            })
            .collect();
        if seen.insert(sig.clone()) {
            chosen.push((u, sig));
        }
    }
    let mut witnesses = Vec::new();
    for i in 0..chosen.len() {
        for j in i + 1..chosen.len() {
            let k = (0..suffixes.len()).find(|&k| chosen[i].1[k] != chosen[j].1[k]).expect("signatures differ");
            witnesses.push(PairWitness { i, j, suffix: suffixes[k].clone() });
        }
    }
    NerodeReport { prefixes: chosen.into_iter().map(|(u, _)| u).collect(), witnesses }
}

impl NerodeReport {
    /// Re-checks every pair witness against the oracle.
    pub fn verify(&self, oracle: &dyn Fn(&[usize]) -> bool) -> bool {
        let n = self.prefixes.len();
        self.witnesses.len() == n * n.saturating_sub(1) / 2
            && self.witnesses.iter().all(|p| {
                let mut a = self.prefixes[p.i].clone();
                a.extend(&p.suffix);
                let mut b = self.prefixes[p.j].clone();
                b.extend(&p.suffix);
                oracle(&a) != oracle(&b)
            })
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "count": self.prefixes.len(),
            "prefixes": self.prefixes.iter().map(|w| alphabet.render(w)).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|p| json!({
                "i": p.i, "j": p.j, "suffix": alphabet.render(&p.suffix),
            })).collect::<Vec<_>>(),
        })
    }
}
