//! A small catalog of concrete finite monoids, including exhaustive
//! enumeration of all monoids of a given small order up to isomorphism.

use std::collections::BTreeSet;

use crate::monoid::{FiniteTable, Monoid};

/// The symmetric group on three points.
pub fn symmetric3() -> Monoid {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let names = ["1", "(01)", "(02)", "(12)", "(012)", "(021)"].iter().map(|s| s.to_string()).collect();
    let compose = |a: usize, b: usize| {
        let p: [usize; 3] = std::array::from_fn(|x| perms[a][perms[b][x]]);
        perms.iter().position(|q| *q == p).unwrap()
    };
    Monoid::Finite(FiniteTable::from_fn(names, 0, compose).expect("S3 is a group"))
}

/// The Klein four-group.
pub fn klein4() -> Monoid {
    let names = ["1", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
    Monoid::Finite(FiniteTable::from_fn(names, 0, |x, y| x ^ y).expect("Klein group"))
}

/// `{1, a, 0}` with `a^2 = 0`.
pub fn zero_square() -> Monoid {
    let names = ["1", "a", "0"].iter().map(|s| s.to_string()).collect();
    Monoid::Finite(
        FiniteTable::from_fn(names, 0, |x, y| match (x, y) {
            (0, y) => y,
            (x, 0) => x,
            _ => 2,
        })
        .expect("nilpotent monoid"),
    )
}

/// `{1, a, b}` where every product of non-identity elements is its left factor.
pub fn left_zero_band() -> Monoid {
    let names = ["1", "a", "b"].iter().map(|s| s.to_string()).collect();
    Monoid::Finite(FiniteTable::from_fn(names, 0, |x, y| if x == 0 { y } else { x }).expect("band"))
}

/// Adjoins an absorbing element `0` to a finite monoid.
pub fn with_zero(m: &Monoid) -> Monoid {
    let t = m.as_finite().expect("with_zero needs a finite table");
    let n = t.order();
    let mut names = t.names().to_vec();
    let mut zero = "0".to_string();
    while names.contains(&zero) {
        zero.push('\'');
    }
    names.push(zero);
    Monoid::Finite(
        FiniteTable::from_fn(names, t.identity(), |x, y| if x == n || y == n { n } else { t.mul(x, y) })
            .expect("adjoining a zero keeps associativity"),
    )
}

fn canonical(order: usize, entries: &[usize]) -> Vec<usize> {
    // entries: products of non-identity elements 1..order, row-major
    let k = order - 1;
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (1..order).collect();
    loop {
        // perm maps old element i (1-based) to new element perm[i-1]
        let mut inv = vec![0; order];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old + 1;
        }
        let map = |x: usize| if x == 0 { 0 } else { perm[x - 1] };
        let mut img = vec![0; k * k];
        for a in 1..order {
            for b in 1..order {
                let (oa, ob) = (inv[a], inv[b]);
                img[(a - 1) * k + (b - 1)] = map(entries[(oa - 1) * k + (ob - 1)]);
            }
        }
        if best.as_ref().map_or(true, |b| img < *b) {
            best = Some(img);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every monoid of the given order, one representative per isomorphism class.
/// Element 0 is the identity; the others are named `a`, `b`, `c`, ...
pub fn all_monoids(order: usize) -> Vec<Monoid> {
    assert!((1..=4).contains(&order), "exhaustive enumeration is limited to order <= 4");
    let k = order - 1;
    let cells = k * k;
    let mut names = vec!["1".to_string()];
    names.extend((0..k).map(|i| ((b'a' + i as u8) as char).to_string()));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut entries = vec![0usize; cells];
    let total = order.pow(cells as u32);
    for code in 0..total {
        let mut c = code;
        for e in entries.iter_mut() {
            *e = c % order;
            c /= order;
        }
        let mul = |x: usize, y: usize| match (x, y) {
            (0, y) => y,
            (x, 0) => x,
            (x, y) => entries[(x - 1) * k + (y - 1)],
        };
        let assoc = (1..order)
            .all(|a| (1..order).all(|b| (1..order).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))));
        if !assoc {
            continue;
        }
        if seen.insert(canonical(order, &entries)) {
            out.push(Monoid::Finite(FiniteTable::from_fn(names.clone(), 0, mul).expect("checked associative")));
        }
    }
    out
}

/// The finite-monoid corpus used by the classification suites: all monoids
/// of order at most 4 up to isomorphism plus selected larger tables.
pub fn corpus() -> Vec<Monoid> {
    let mut out = Vec::new();
    for order in 1..=4 {
        out.extend(all_monoids(order));
    }
    out.push(Monoid::cyclic(5));
    out.push(with_zero(&klein4()));
    out.push(with_zero(&Monoid::cyclic(4)));
    out.push(with_zero(&zero_square()));
    out.push(symmetric3());
    out.push(with_zero(&symmetric3()));
    out
}
