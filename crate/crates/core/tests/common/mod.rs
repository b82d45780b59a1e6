#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::rngs::StdRng;
use rand::Rng;
use valence_core::grammars::{Sym, ValenceGrammar};
use valence_core::machines::ValenceAutomaton;
use valence_core::monoid::{Elem, Monoid};
use valence_core::words::{Alphabet, Word};

pub fn random_elem(rng: &mut StdRng, m: &Monoid) -> Elem {
    let elems = m.elements().expect("finite monoid");
    elems[rng.gen_range(0..elems.len())].clone()
}

/// A random automaton over a finite monoid with 1 to 4 states. Inputs have
/// length 0 to 2 and every state gets at least one outgoing edge.
pub fn random_automaton(rng: &mut StdRng, m: &Monoid) -> ValenceAutomaton {
    let states = rng.gen_range(1..5);
    let extra_edges = rng.gen_range(0..7);
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let mut a = ValenceAutomaton::new(m.clone(), alphabet);
    for i in 0..states {
        a.add_state(format!("q{i}"));
    }
    a.set_initial(0);
    for q in 0..states {
        if rng.gen_bool(0.4) || q == states - 1 {
            a.set_final(q, true);
        }
    }
    let add = |rng: &mut StdRng, a: &mut ValenceAutomaton, from: usize| {
        let len = [0, 1, 1, 1, 2][rng.gen_range(0..5)];
        let input: Word = (0..len).map(|_| rng.gen_range(0..2)).collect();
        let v = if rng.gen_bool(0.3) { m.identity() } else { random_elem(rng, m) };
        let to = rng.gen_range(0..states);
        a.add_edge(from, input, v, to).unwrap();
    };
    for q in 0..states {
        add(rng, &mut a, q);
    }
    for _ in 0..extra_edges {
        let from = rng.gen_range(0..states);
        add(rng, &mut a, from);
    }
    a
}

/// Classical subset simulation over configurations `(state, element)` with
/// closure under empty-input edges. Exact for finite monoids.
pub fn simulate(a: &ValenceAutomaton, w: &[usize]) -> bool {
    let m = a.monoid();
    type Conf = (usize, Elem, usize);
    let mut seen: HashSet<Conf> = HashSet::new();
    let mut stack: Vec<Conf> = vec![(a.initial(), m.identity(), 0)];
    while let Some(c) = stack.pop() {
        if !seen.insert(c.clone()) {
            continue;
        }
        let (q, e, pos) = c;
        if pos == w.len() && a.finals().contains(&q) && m.is_identity(&e) {
            return true;
        }
        for edge in a.edges().iter().filter(|x| x.from == q) {
            let n = edge.input.len();
            if pos + n <= w.len() && w[pos..pos + n] == edge.input[..] {
                stack.push((edge.to, m.mul(&e, &edge.valence).unwrap(), pos + n));
            }
        }
    }
    false
}

pub fn oracle_language(a: &ValenceAutomaton, maxlen: usize) -> Vec<Word> {
    a.alphabet().words_up_to(maxlen).into_iter().filter(|w| simulate(a, w)).collect()
}

/// A random grammar over a finite commutative monoid with terminals
/// `{a, b}` and nonterminals `S, A, B`. The start symbol always has a
/// terminating production.
pub fn random_grammar(rng: &mut StdRng, m: &Monoid, productions: usize) -> ValenceGrammar {
    let mut g = ValenceGrammar::new(m.clone(), Alphabet::new(["a", "b"]).unwrap(), "S").unwrap();
    let nts = [g.start(), g.add_nonterminal("A").unwrap(), g.add_nonterminal("B").unwrap()];
    let sym = |rng: &mut StdRng| {
        if rng.gen_bool(0.5) {
            Sym::T(rng.gen_range(0..2))
        } else {
            Sym::N(nts[rng.gen_range(0..3)])
        }
    };
    let leaf: Vec<Sym> = if rng.gen_bool(0.5) { vec![] } else { vec![Sym::T(rng.gen_range(0..2))] };
    g.add_production(nts[0], leaf, m.identity()).unwrap();
    for _ in 0..productions {
        let lhs = nts[rng.gen_range(0..3)];
        let len = rng.gen_range(0..4);
        let rhs: Vec<Sym> = (0..len).map(|_| sym(rng)).collect();
        let v = random_elem(rng, m);
        g.add_production(lhs, rhs, v).unwrap();
    }
    g
}

/// Words up to `maxlen` generated with valence 1, computed per word as the
/// least fixpoint of "nonterminal A derives substring u with product e".
/// Only valid for commutative monoids, where the value of a derivation tree
/// does not depend on the application order.
pub fn grammar_oracle(g: &ValenceGrammar, maxlen: usize) -> BTreeSet<Word> {
    let m = g.monoid();
    assert!(m.is_commutative());
    let mut out = BTreeSet::new();
    for w in g.terminals().words_up_to(maxlen) {
        if derives(g, &w) {
            out.insert(w);
        }
    }
    out
}

fn derives(g: &ValenceGrammar, w: &[usize]) -> bool {
    let m = g.monoid();
    let n = w.len();
    // table[(A, i, j)] = products of derivation trees of A with yield w[i..j]
    let mut table: HashMap<(usize, usize, usize), HashSet<Elem>> = HashMap::new();
    loop {
        let mut changed = false;
        for p in g.productions() {
            for i in 0..=n {
                for j in i..=n {
                    let mut found: Vec<Elem> = Vec::new();
                    spans(g, &table, &p.rhs, w, i, j, m.identity(), &mut found);
                    for e in found {
                        let e = m.mul(&p.valence, &e).unwrap();
                        if table.entry((p.lhs, i, j)).or_default().insert(e) {
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    table.get(&(g.start(), 0, n)).is_some_and(|s| s.contains(&m.identity()))
}

#[allow(clippy::too_many_arguments)]
fn spans(
    g: &ValenceGrammar,
    table: &HashMap<(usize, usize, usize), HashSet<Elem>>,
    rhs: &[Sym],
    w: &[usize],
    i: usize,
    j: usize,
    acc: Elem,
    out: &mut Vec<Elem>,
) {
    let m = g.monoid();
    let Some((first, rest)) = rhs.split_first() else {
        if i == j {
            out.push(acc);
        }
        return;
    };
    match *first {
        Sym::T(t) => {
            if i < j && w[i] == t {
                spans(g, table, rest, w, i + 1, j, acc, out);
            }
        }
        Sym::N(a) => {
            for k in i..=j {
                if let Some(set) = table.get(&(a, i, k)) {
                    for e in set {
                        spans(g, table, rest, w, k, j, m.mul(&acc, e).unwrap(), out);
                    }
                }
            }
        }
    }
}

/// A random tree on `n` nodes (node 0 is the root, parents precede
/// children) with random valences.
pub fn random_tree(rng: &mut StdRng, m: &Monoid, n: usize) -> (Vec<Option<usize>>, Vec<Elem>) {
    let parent: Vec<Option<usize>> = (0..n).map(|i| (i > 0).then(|| rng.gen_range(0..i))).collect();
    let valences = (0..n).map(|_| random_elem(rng, m)).collect();
    (parent, valences)
}

/// Every ordering of the nodes in which parents come before children.
pub fn all_orders(parent: &[Option<usize>]) -> Vec<Vec<usize>> {
    fn go(parent: &[Option<usize>], placed: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == parent.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..parent.len() {
            if !placed[x] && parent[x].map_or(true, |p| placed[p]) {
                placed[x] = true;
                cur.push(x);
                go(parent, placed, cur, out);
                cur.pop();
                placed[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(parent, &mut vec![false; parent.len()], &mut Vec::new(), &mut out);
    out
}

pub fn is_topological(parent: &[Option<usize>], order: &[usize]) -> bool {
    let mut pos = vec![usize::MAX; parent.len()];
    for (i, &x) in order.iter().enumerate() {
        if x >= parent.len() || pos[x] != usize::MAX {
            return false;
        }
        pos[x] = i;
    }
    order.len() == parent.len() && (0..parent.len()).all(|x| parent[x].map_or(true, |p| pos[p] < pos[x]))
}

pub fn in_subtree(parent: &[Option<usize>], t: usize, x: usize) -> bool {
    let mut cur = Some(x);
    while let Some(c) = cur {
        if c == t {
            return true;
        }
        cur = parent[c];
    }
    false
}

/// Number of maximal runs of letters satisfying `in_v`.
pub fn blocks<T>(w: &[T], in_v: impl Fn(&T) -> bool) -> usize {
    let mut n = 0;
    let mut inside = false;
    for x in w {
        let v = in_v(x);
        if v && !inside {
            n += 1;
        }
        inside = v;
    }
    n
}

/// Maximum over nodes `t` of the number of maximal runs of subtree-of-`t`
/// nodes in `order`.
pub fn excursiveness_of(parent: &[Option<usize>], order: &[usize]) -> usize {
    (0..parent.len()).map(|t| blocks(order, |&x| in_subtree(parent, t, x))).max().unwrap_or(0)
}

/// Reduces a word over {p, q} with `pq -> 1`; the identity is the empty
/// result.
pub fn reduce_pq(w: &str) -> String {
    let mut out = String::new();
    for c in w.chars() {
        if c == 'q' && out.ends_with('p') {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// Membership in `X* ∪ {w ∈ X*Y* : φ(w) = 1}` over the bicyclic monoid with
/// `x_p, y_p -> p` and `x_q, y_q -> q`, from symbol names.
pub fn bicyclic_k(symbols: &[&str]) -> bool {
    let first_y = symbols.iter().position(|s| s.starts_with('y')).unwrap_or(symbols.len());
    if symbols[first_y..].iter().any(|s| s.starts_with('x')) {
        return false;
    }
    if first_y == symbols.len() {
        return true;
    }
    let spelled: String = symbols.iter().map(|s| if s.ends_with('p') { 'p' } else { 'q' }).collect();
    reduce_pq(&spelled).is_empty()
}

/// Membership in `{r c s c rev(r) : r, s ∈ {x1, x2}*, φ(rs) = 0}` with
/// `x1 -> +1`, `x2 -> -1`.
pub fn integer_k_prime(symbols: &[&str]) -> bool {
    let parts: Vec<&[&str]> = symbols.split(|s| *s == "c").collect();
    let [r, s, r2] = parts[..] else { return false };
    let rev: Vec<&str> = r.iter().rev().copied().collect();
    if rev != r2 {
        return false;
    }
    let sum: i64 = r.iter().chain(s).map(|x| if *x == "x1" { 1 } else { -1 }).sum();
    sum == 0
}
