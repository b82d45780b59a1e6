//! Sequences over a finite group (written with `□` for concatenation to keep
//! it apart from the group product): the joining operator `J`, shuffles, and
//! a membership test for `J(σ1 ⧢ ... ⧢ σn)` that avoids materialising either.

use std::collections::{BTreeSet, HashSet};

use crate::group::FiniteGroup;

/// A sequence of group elements, as indices into the group.
pub type Seq = Vec<usize>;

/// All sequences obtained from `sigma` by multiplying runs of adjacent
/// entries: the fixpoint of
/// `J(h1□h2□σ) = J((h1 h2)□σ) ∪ { h1□σ' : σ' ∈ J(h2□σ) }`.
pub fn join_sequences(g: &FiniteGroup, sigma: &[usize]) -> BTreeSet<Seq> {
    let mut out = BTreeSet::new();
    if sigma.len() <= 1 {
        out.insert(sigma.to_vec());
        return out;
    }
    let joined: Seq = std::iter::once(g.mul(sigma[0], sigma[1])).chain(sigma[2..].iter().copied()).collect();
    out.extend(join_sequences(g, &joined));
    for rest in join_sequences(g, &sigma[1..]) {
        let mut s = vec![sigma[0]];
        s.extend(rest);
        out.insert(s);
    }
    out
}

/// `J` applied to every member of a set.
pub fn join_set(g: &FiniteGroup, set: &BTreeSet<Seq>) -> BTreeSet<Seq> {
    let mut out = BTreeSet::new();
    for s in set {
        // cutting the sequence into runs: each of the |s|-1 gaps is kept or joined
        let n = s.len();
        if n <= 1 {
            out.insert(s.clone());
            continue;
        }
        for mask in 0u64..(1u64 << (n - 1)) {
            let mut seq = Vec::new();
            let mut acc = s[0];
            for i in 1..n {
                if mask >> (i - 1) & 1 == 1 {
                    acc = g.mul(acc, s[i]);
                } else {
                    seq.push(acc);
                    acc = s[i];
                }
            }
            seq.push(acc);
            out.insert(seq);
        }
    }
    out
}

/// All interleavings of a member of `a` with a member of `b`.
pub fn shuffle_sequences(a: &BTreeSet<Seq>, b: &BTreeSet<Seq>) -> BTreeSet<Seq> {
    fn go(x: &[usize], y: &[usize], acc: &mut Seq, out: &mut BTreeSet<Seq>) {
        if x.is_empty() || y.is_empty() {
            let mut s = acc.clone();
            s.extend_from_slice(x);
            s.extend_from_slice(y);
            out.insert(s);
            return;
        }
        acc.push(x[0]);
        go(&x[1..], y, acc, out);
        acc.pop();
        acc.push(y[0]);
        go(x, &y[1..], acc, out);
        acc.pop();
    }
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            go(x, y, &mut Vec::new(), &mut out);
        }
    }
    out
}

/// Whether `tau ∈ J(σ1 ⧢ ... ⧢ σn)`: some interleaving of the `sigmas` can be
/// cut into `|tau|` nonempty runs whose products are the entries of `tau`.
pub fn in_joined_shuffle(g: &FiniteGroup, tau: &[usize], sigmas: &[&[usize]]) -> bool {
    let total: usize = sigmas.iter().map(|s| s.len()).sum();
    if total == 0 {
        return tau.is_empty();
    }
    if tau.is_empty() || tau.len() > total {
        return false;
    }
    // state: positions in each sigma, completed runs, product of the open run
    let mut seen: HashSet<(Vec<usize>, usize, Option<usize>)> = HashSet::new();
    let mut stack = vec![(vec![0usize; sigmas.len()], 0usize, None::<usize>)];
    while let Some((pos, j, acc)) = stack.pop() {
        if !seen.insert((pos.clone(), j, acc)) {
            continue;
        }
        let consumed: usize = pos.iter().sum();
        if consumed == total {
            if acc.is_some_and(|a| j + 1 == tau.len() && a == tau[j]) {
                return true;
            }
            continue;
        }
        // close the open run
        if let Some(a) = acc {
            if j + 1 < tau.len() && a == tau[j] {
                stack.push((pos.clone(), j + 1, None));
            }
        }
        for (i, s) in sigmas.iter().enumerate() {
            if pos[i] < s.len() {
                let x = s[pos[i]];
                let mut p2 = pos.clone();
                p2[i] += 1;
                let a2 = match acc {
                    Some(a) => g.mul(a, x),
                    None => x,
                };
                stack.push((p2, j, Some(a2)));
            }
        }
    }
    false
}

/// All sequences over `g` of length at most `m`, shortest first.
pub fn sequences_up_to(g: &FiniteGroup, m: usize) -> Vec<Seq> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for s in &layer {
            for h in 0..g.order() {
                let mut t: Seq = s.clone();
                t.push(h);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `|H^{<=m}|`, saturating.
pub fn count_sequences_up_to(order: usize, m: usize) -> usize {
    let mut total = 1usize;
    let mut layer = 1usize;
    for _ in 0..m {
        layer = layer.saturating_mul(order);
        total = total.saturating_add(layer);
    }
    total
}

/// Renders a sequence as `h1□h2□...`, or `λ` when empty.
pub fn render_seq(g: &FiniteGroup, s: &[usize]) -> String {
    if s.is_empty() {
        return "λ".to_string();
    }
    s.iter().map(|&h| g.name(h)).collect::<Vec<_>>().join("□")
}
