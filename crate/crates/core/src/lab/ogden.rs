use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::LabError;
use crate::words::{Alphabet, Word};

/// `z = u v w x y` given by the cut points `0 <= i <= j <= k <= l <= |z|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl Decomposition {
    /// `u v^e w x^e y`.
    pub fn pump(&self, z: &[usize], e: usize) -> Word {
        let mut out = z[..self.i].to_vec();
        for _ in 0..e {
            out.extend(&z[self.i..self.j]);
        }
        out.extend(&z[self.j..self.k]);
        for _ in 0..e {
            out.extend(&z[self.k..self.l]);
        }
        out.extend(&z[self.l..]);
        out
    }
}

/// Result of checking every decomposition of one marked word. Zero
/// survivors is evidence against the language being context-free with
/// constant `m`, not a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OgdenReport {
    pub z: Word,
    pub marks: BTreeSet<usize>,
    pub m: usize,
    pub pump_set: Vec<usize>,
    /// Decompositions meeting the marking conditions.
    pub examined: usize,
    pub survivors: Vec<Decomposition>,
}

/// Enumerates all `z = uvwxy` where `w` contains a marked position, `u` and
/// `v` (or `x` and `y`) both contain marked positions and `vwx` contains at
/// most `m` of them; keeps those with `u v^e w x^e y` in the language for
/// every `e` in `pump_set`.
pub fn ogden_falsify(
    oracle: &dyn Fn(&[usize]) -> bool,
    z: &[usize],
    marks: &BTreeSet<usize>,
    m: usize,
    pump_set: &[usize],
) -> Result<OgdenReport, LabError> {
    let n = z.len();
    if let Some(&p) = marks.iter().find(|&&p| p >= n) {
        return Err(LabError::Marks(format!("position {p} is outside a word of length {n}")));
    }
    if marks.len() < m {
        return Err(LabError::Marks(format!("{} marked positions are fewer than m = {m}", marks.len())));
    }
    // prefix sums of marks
    let mut pre = vec![0usize; n + 1];
    for p in 0..n {
        pre[p + 1] = pre[p] + usize::from(marks.contains(&p));
    }
    let count = |a: usize, b: usize| pre[b] - pre[a];
    let mut examined = 0;
    let mut survivors = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            for k in j..=n {
                if count(j, k) == 0 {
                    continue;
                }
                for l in k..=n {
                    let uv = count(0, i) > 0 && count(i, j) > 0;
                    let xy = count(k, l) > 0 && count(l, n) > 0;
                    if !(uv || xy) || count(i, l) > m {
                        continue;
                    }
                    examined += 1;
                    let d = Decomposition { i, j, k, l };
                    if pump_set.iter().all(|&e| oracle(&d.pump(z, e))) {
                        survivors.push(d);
                    }
                }
            }
        }
    }
    Ok(OgdenReport { z: z.to_vec(), marks: marks.clone(), m, pump_set: pump_set.to_vec(), examined, survivors })
}

impl OgdenReport {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let part = |a: usize, b: usize| alphabet.render(&self.z[a..b]);
        json!({
            "z": alphabet.render(&self.z),
            "marks": self.marks.iter().collect::<Vec<_>>(),
            "m": self.m,
            "pump_set": self.pump_set,
            "examined": self.examined,
            "survivor_count": self.survivors.len(),
            "survivors": self.survivors.iter().map(|d| json!({
                "u": part(0, d.i), "v": part(d.i, d.j), "w": part(d.j, d.k),
                "x": part(d.k, d.l), "y": part(d.l, self.z.len()),
            })).collect::<Vec<_>>(),
            "note": "zero survivors for one marked word is evidence, not a proof, that the language is not context-free",
        })
    }
}
