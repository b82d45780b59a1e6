//! Valence trees and their evaluations (linear extensions of the tree
//! order), U-decompositions, valence sequences, excursiveness, and the
//! rewriting step that lowers excursiveness over a finite group without
//! changing the value.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::sequences::{join_set, shuffle_sequences, Seq};
use crate::group::FiniteGroup;
use crate::monoid::{Elem, Monoid, MonoidError};

/// Trees up to this many nodes may be evaluated exhaustively.
pub const DEFAULT_EVALUATION_CAP: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("{nodes} nodes exceed the exhaustive evaluation cap of {cap}; use the rewriting path instead")]
    TooLarge { nodes: usize, cap: usize },
    #[error("not a linear extension of the tree order: {0}")]
    NotLinearExtension(String),
    #[error("indices ({k}, {l}) do not apply: {reason}")]
    NotApplicable { k: usize, l: usize, reason: String },
    #[error("{n} pairs are fewer than the commutation bound {m}")]
    BelowBound { n: usize, m: usize },
    #[error("{0} is not a value of the tree")]
    NotAValue(String),
    #[error("valence {0} does not lie in the group")]
    NotInGroup(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// The `U`-decomposition `w = y0 x1 y1 ... xn yn` with `xi ∈ U+`, inner
/// `yi` nonempty and free of `U`, and `y0`, `yn` possibly empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UDecomposition<T> {
    pub ys: Vec<Vec<T>>,
    pub xs: Vec<Vec<T>>,
}

impl<T: Clone> UDecomposition<T> {
    /// The factor count `n`.
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn reassemble(&self) -> Vec<T> {
        let mut out = self.ys[0].clone();
        for (x, y) in self.xs.iter().zip(&self.ys[1..]) {
            out.extend(x.iter().cloned());
            out.extend(y.iter().cloned());
        }
        out
    }
}

pub fn u_decomposition<T: Clone>(w: &[T], in_u: impl Fn(&T) -> bool) -> UDecomposition<T> {
    let mut ys = vec![Vec::new()];
    let mut xs: Vec<Vec<T>> = Vec::new();
    let mut inside = false;
    for a in w {
        match (in_u(a), inside) {
            (true, true) => xs.last_mut().expect("open block").push(a.clone()),
            (true, false) => {
                xs.push(vec![a.clone()]);
                ys.push(Vec::new());
                inside = true;
            }
            (false, _) => {
                ys.last_mut().expect("gap").push(a.clone());
                inside = false;
            }
        }
    }
    UDecomposition { ys, xs }
}

/// `⌊w⌋_U`, the number of maximal `U`-blocks of `w`.
pub fn factor_count<T>(w: &[T], in_u: impl Fn(&T) -> bool) -> usize {
    let mut n = 0;
    let mut inside = false;
    for a in w {
        let u = in_u(a);
        if u && !inside {
            n += 1;
        }
        inside = u;
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValenceTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    valences: Vec<Elem>,
    root: usize,
}

/// A linear extension with its value and excursiveness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub order: Vec<usize>,
    pub value: Elem,
    pub excursiveness: usize,
}

impl ValenceTree {
    /// Nodes are `0..parent.len()`; exactly one node has no parent. Children
    /// keep the order in which they appear.
    pub fn new(parent: Vec<Option<usize>>, valences: Vec<Elem>) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::NotATree("no nodes".into()));
        }
        if valences.len() != n {
            return Err(TreeError::NotATree(format!("{n} nodes but {} valences", valences.len())));
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(TreeError::NotATree(format!("expected one root, found {}", roots.len())));
        }
        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeError::NotATree(format!("node {i} has unknown parent {p}")));
                }
                children[p].push(i);
            }
        }
        let tree = ValenceTree { parent, children, valences, root: roots[0] };
        if tree.preorder().len() != n {
            return Err(TreeError::NotATree("parent links contain a cycle".into()));
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn valence(&self, t: usize) -> &Elem {
        &self.valences[t]
    }

    pub fn valences(&self) -> &[Elem] {
        &self.valences
    }

    /// `a <= b` in the tree order: `a` is `b` or an ancestor of it.
    pub fn le(&self, a: usize, b: usize) -> bool {
        let mut x = Some(b);
        while let Some(y) = x {
            if y == a {
                return true;
            }
            x = self.parent[y];
        }
        false
    }

    /// Membership mask of `U_t = {t' : t <= t'}`.
    pub fn subtree(&self, t: usize) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let mut stack = vec![t];
        while let Some(x) = stack.pop() {
            mask[x] = true;
            stack.extend(&self.children[x]);
        }
        mask
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        let mut seen = vec![false; self.len()];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                break;
            }
            out.push(x);
            stack.extend(self.children[x].iter().rev());
        }
        out
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        self.check_linear_extension(order).is_ok()
    }

    fn check_linear_extension(&self, order: &[usize]) -> Result<(), TreeError> {
        let n = self.len();
        if order.len() != n {
            return Err(TreeError::NotLinearExtension(format!("{} entries for {n} nodes", order.len())));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &t) in order.iter().enumerate() {
            if t >= n || pos[t] != usize::MAX {
                return Err(TreeError::NotLinearExtension(format!("node {t} is out of range or repeated")));
            }
            pos[t] = i;
        }
        for t in 0..n {
            if let Some(p) = self.parent[t] {
                if pos[p] > pos[t] {
                    return Err(TreeError::NotLinearExtension(format!("node {t} precedes its parent {p}")));
                }
            }
        }
        Ok(())
    }

    fn product(&self, m: &Monoid, nodes: &[usize]) -> Result<Elem, MonoidError> {
        m.product(nodes.iter().map(|&t| &self.valences[t]))
    }

    /// Validates `order` and computes its value and excursiveness.
    pub fn evaluate(&self, m: &Monoid, order: &[usize]) -> Result<Evaluation, TreeError> {
        self.check_linear_extension(order)?;
        let value = self.product(m, order)?;
        let excursiveness = self.profile(order).into_iter().max().unwrap_or(0);
        Ok(Evaluation { order: order.to_vec(), value, excursiveness })
    }

    /// `μ_w(t) = ⌊w⌋_{U_t}` for every node.
    pub fn profile(&self, order: &[usize]) -> Vec<usize> {
        (0..self.len())
            .map(|t| {
                let mask = self.subtree(t);
                factor_count(order, |&x| mask[x])
            })
            .collect()
    }

    pub fn excursiveness(&self, order: &[usize]) -> usize {
        self.profile(order).into_iter().max().unwrap_or(0)
    }

    pub fn decomposition(&self, order: &[usize], t: usize) -> UDecomposition<usize> {
        let mask = self.subtree(t);
        u_decomposition(order, |&x| mask[x])
    }

    /// `(φ(x1), ..., φ(xn))` for the `U_t`-decomposition of `order`.
    pub fn valence_sequence(&self, m: &Monoid, order: &[usize], t: usize) -> Result<Vec<Elem>, TreeError> {
        let d = self.decomposition(order, t);
        Ok(d.xs.iter().map(|x| self.product(m, x)).collect::<Result<_, _>>()?)
    }

    /// Every linear extension, lexicographic by node id at each choice point.
    pub fn linear_extensions(&self, cap: usize) -> Result<LinearExtensions<'_>, TreeError> {
        if self.len() > cap {
            return Err(TreeError::TooLarge { nodes: self.len(), cap });
        }
        Ok(LinearExtensions { tree: self, order: Vec::new(), choice: Vec::new(), avail: Vec::new(), started: false })
    }

    /// Every evaluation, in the order of [`ValenceTree::linear_extensions`].
    pub fn evaluations<'a>(
        &'a self,
        m: &'a Monoid,
        cap: usize,
    ) -> Result<impl Iterator<Item = Result<Evaluation, TreeError>> + 'a, TreeError> {
        Ok(self.linear_extensions(cap)?.map(move |o| self.evaluate(m, &o)))
    }

    /// All values, by exhaustive enumeration.
    pub fn values(&self, m: &Monoid, cap: usize) -> Result<BTreeSet<Elem>, TreeError> {
        let mut out = BTreeSet::new();
        for o in self.linear_extensions(cap)? {
            out.insert(self.product(m, &o)?);
        }
        Ok(out)
    }

    fn group_valences(&self, g: &FiniteGroup) -> Result<Vec<usize>, TreeError> {
        self.valences.iter().map(|v| g.index_of(v).ok_or_else(|| TreeError::NotInGroup(format!("{v:?}")))).collect()
    }

    /// Replaces `x_k y_k ... x_l y_l` in the `U_t`-decomposition of `order`
    /// by `x_k ... x_l y_k ... y_l` (indices are 1-based, as in the
    /// decomposition). Fails unless the value is preserved.
    pub fn rewrite_evaluation(&self, m: &Monoid, order: &[usize], t: usize, k: usize, l: usize) -> Result<Evaluation, TreeError> {
        self.check_linear_extension(order)?;
        let d = self.decomposition(order, t);
        let n = d.n();
        let na = |reason: String| TreeError::NotApplicable { k, l, reason };
        if !(1 <= k && k < l && l <= n) {
            return Err(na(format!("need 1 <= k < l <= {n}")));
        }
        let mut interleaved = m.identity();
        let (mut xs, mut ys) = (m.identity(), m.identity());
        for i in k..=l {
            let gx = self.product(m, &d.xs[i - 1])?;
            let hy = self.product(m, &d.ys[i])?;
            interleaved = m.mul(&m.mul(&interleaved, &gx)?, &hy)?;
            xs = m.mul(&xs, &gx)?;
            ys = m.mul(&ys, &hy)?;
        }
        if interleaved != m.mul(&xs, &ys)? {
            return Err(na("the blocks do not commute".into()));
        }
        let mut w = d.ys[0].clone();
        for i in 1..k {
            w.extend(&d.xs[i - 1]);
            w.extend(&d.ys[i]);
        }
        for i in k..=l {
            w.extend(&d.xs[i - 1]);
        }
        for i in k..=l {
            w.extend(&d.ys[i]);
        }
        for i in l + 1..=n {
            w.extend(&d.xs[i - 1]);
            w.extend(&d.ys[i]);
        }
        self.evaluate(m, &w)
    }

    /// Repeats the commuting rewrite until every valence sequence has length
    /// at most `bound`, or no applicable rewrite remains. Sequences of length
    /// at least `2(|G|^3+1)` always admit one; shorter ones are searched
    /// directly.
    pub fn minimize_evaluation(&self, m: &Monoid, g: &FiniteGroup, order: &[usize], bound: usize) -> Result<Evaluation, TreeError> {
        let vals = self.group_valences(g)?;
        let mut current = self.evaluate(m, order)?;
        loop {
            let prof = self.profile(&current.order);
            let mut candidates: Vec<usize> = (0..self.len()).filter(|&t| prof[t] > bound).collect();
            candidates.sort_by_key(|&t| std::cmp::Reverse(prof[t]));
            let mut progressed = false;
            for t in candidates {
                let d = self.decomposition(&current.order, t);
                let prod = |nodes: &[usize]| g.product(nodes.iter().map(|&x| vals[x]));
                let pairs: Vec<(usize, usize)> =
                    (1..=d.n()).map(|i| (prod(&d.xs[i - 1]), prod(&d.ys[i]))).collect();
                let found = if pairs.len() >= g.commutation_bound() {
                    Some(commute_indices(g, &pairs)?)
                } else {
                    find_commuting_indices(g, &pairs)
                };
                if let Some((k, l)) = found {
                    current = self.rewrite_evaluation(m, &current.order, t, k, l)?;
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return Ok(current);
            }
        }
    }

    /// An evaluation with value `target` and excursiveness at most
    /// `2(|G|^3+1)`. The starting evaluation comes from exhaustive
    /// enumeration, so the tree must be within `cap`.
    pub fn minimize_excursiveness(&self, m: &Monoid, g: &FiniteGroup, target: &Elem, cap: usize) -> Result<Evaluation, TreeError> {
        let mut start = None;
        for o in self.linear_extensions(cap)? {
            if self.product(m, &o)? == *target {
                start = Some(o);
                break;
            }
        }
        let start = start.ok_or_else(|| TreeError::NotAValue(m.display(target)))?;
        self.minimize_evaluation(m, g, &start, g.commutation_bound())
    }

    /// Values reachable through valence sequences of length at most `bound`,
    /// computed bottom-up over sequence sets: a node with valence `h` whose
    /// children combine to `τ ∈ J(σ1 ⧢ ... ⧢ σn)` gets `(h τ1)□τ'` or `h□τ`.
    /// This contains the values of evaluations of excursiveness at most
    /// `bound` and is contained in the set of all values.
    pub fn bounded_excursiveness_values(&self, g: &FiniteGroup, bound: usize) -> Result<BTreeSet<Elem>, TreeError> {
        let vals = self.group_valences(g)?;
        let mut seqs: HashMap<usize, BTreeSet<Seq>> = HashMap::new();
        let order = self.preorder();
        for &t in order.iter().rev() {
            let mut combined: BTreeSet<Seq> = BTreeSet::from([Vec::new()]);
            for c in &self.children[t] {
                let child = seqs.remove(c).expect("children are processed first");
                combined = join_set(g, &shuffle_sequences(&combined, &child));
            }
            let h = vals[t];
            let mut mine = BTreeSet::new();
            for tau in &combined {
                if let Some((&first, rest)) = tau.split_first() {
                    if tau.len() <= bound {
                        let mut s = vec![g.mul(h, first)];
                        s.extend_from_slice(rest);
                        mine.insert(s);
                    }
                }
                if tau.len() < bound {
                    let mut s = vec![h];
                    s.extend_from_slice(tau);
                    mine.insert(s);
                }
            }
            seqs.insert(t, mine);
        }
        let root = seqs.remove(&self.root).expect("root processed");
        Ok(root.into_iter().filter(|s| s.len() == 1).map(|s| g.elem(s[0]).clone()).collect())
    }
}

/// Streaming enumeration of linear extensions.
pub struct LinearExtensions<'a> {
    tree: &'a ValenceTree,
    order: Vec<usize>,
    choice: Vec<usize>,
    avail: Vec<Vec<usize>>,
    started: bool,
}

impl LinearExtensions<'_> {
    fn descend(&mut self) {
        while self.order.len() < self.tree.len() {
            let d = self.order.len();
            let av = if d == 0 { vec![self.tree.root] } else { self.next_avail(d - 1) };
            self.avail.push(av);
            self.choice.push(0);
            self.order.push(self.avail[d][0]);
        }
    }

    fn next_avail(&self, d: usize) -> Vec<usize> {
        let chosen = self.order[d];
        let mut av: Vec<usize> = self.avail[d].iter().copied().filter(|&x| x != chosen).collect();
        av.extend(&self.tree.children[chosen]);
        av.sort_unstable();
        av
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            self.descend();
            return Some(self.order.clone());
        }
        loop {
            let d = self.order.len().checked_sub(1)?;
            self.order.pop();
            self.choice[d] += 1;
            if self.choice[d] < self.avail[d].len() {
                self.order.push(self.avail[d][self.choice[d]]);
                self.descend();
                return Some(self.order.clone());
            }
            self.choice.pop();
            self.avail.pop();
        }
    }
}

/// Indices `1 <= k < l <= n` with
/// `g_k h_k ... g_l h_l = g_k ... g_l h_k ... h_l`, found by pigeonhole on
/// `α(i) = (g_1...g_i, h_1...h_i, g_1 h_1...g_i h_i)` over odd `i`.
/// Requires `n >= 2(|G|^3+1)`.
pub fn commute_indices(g: &FiniteGroup, pairs: &[(usize, usize)]) -> Result<(usize, usize), TreeError> {
    let m = g.commutation_bound();
    if pairs.len() < m {
        return Err(TreeError::BelowBound { n: pairs.len(), m });
    }
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let (mut a, mut b, mut c) = (g.identity(), g.identity(), g.identity());
    for (idx, &(gi, hi)) in pairs.iter().enumerate() {
        let i = idx + 1;
        a = g.mul(a, gi);
        b = g.mul(b, hi);
        c = g.mul(g.mul(c, gi), hi);
        if i % 2 == 1 {
            if let Some(&j) = seen.get(&(a, b, c)) {
                return Ok((j + 1, i));
            }
            seen.insert((a, b, c), i);
        }
    }
    unreachable!("pigeonhole over |G|^3 + 1 odd indices")
}

/// Any `(k, l)` (1-based) satisfying the commutation equality, preferring
/// the widest span; `None` when there is none.
pub fn find_commuting_indices(g: &FiniteGroup, pairs: &[(usize, usize)]) -> Option<(usize, usize)> {
    let n = pairs.len();
    let mut best: Option<(usize, usize)> = None;
    for k in 0..n {
        let (mut lhs, mut gs, mut hs) = (g.identity(), g.identity(), g.identity());
        for l in k..n {
            let (gl, hl) = pairs[l];
            lhs = g.mul(g.mul(lhs, gl), hl);
            gs = g.mul(gs, gl);
            hs = g.mul(hs, hl);
            if l > k && lhs == g.mul(gs, hs) && best.map_or(true, |(bk, bl)| l - k > bl - bk) {
                best = Some((k + 1, l + 1));
            }
        }
    }
    best
}

/// Whether `(k, l)` satisfies the commutation equality.
pub fn commutes_at(g: &FiniteGroup, pairs: &[(usize, usize)], k: usize, l: usize) -> bool {
    let slice = &pairs[k - 1..l];
    let lhs = g.product(slice.iter().flat_map(|&(a, b)| [a, b]));
    let rhs = g.mul(g.product(slice.iter().map(|p| p.0)), g.product(slice.iter().map(|p| p.1)));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z2() -> (Monoid, FiniteGroup) {
        let m = Monoid::cyclic(2);
        let g = FiniteGroup::from_monoid(&m).unwrap();
        (m, g)
    }

    fn f(i: usize) -> Elem {
        Elem::Finite(i)
    }

    #[test]
    fn decomposition_examples() {
        // X = {a, b}, U = {a}, w = baaba
        let w: Vec<char> = "baaba".chars().collect();
        let d = u_decomposition(&w, |&c| c == 'a');
        assert_eq!(d.n(), 2);
        assert_eq!(d.ys, vec![vec!['b'], vec!['b'], vec![]]);
        assert_eq!(d.xs, vec![vec!['a', 'a'], vec!['a']]);
        assert_eq!(d.reassemble(), w);
        assert_eq!(factor_count(&['b', 'b'], |&c| c == 'a'), 0);
        let d = u_decomposition(&['a', 'a'], |&c| c == 'a');
        assert_eq!((d.n(), d.ys.clone()), (1, vec![vec![], vec![]]));
    }

    #[test]
    fn extension_counts() {
        let one = f(0);
        let chain = ValenceTree::new(vec![None, Some(0), Some(1)], vec![one.clone(); 3]).unwrap();
        assert_eq!(chain.linear_extensions(9).unwrap().count(), 1);
        let cherry = ValenceTree::new(vec![None, Some(0), Some(0)], vec![one.clone(); 3]).unwrap();
        assert_eq!(cherry.linear_extensions(9).unwrap().count(), 2);
        let star = ValenceTree::new(vec![None, Some(0), Some(0), Some(0)], vec![one.clone(); 4]).unwrap();
        let all: Vec<_> = star.linear_extensions(9).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1, 2, 3]);
        assert_eq!(all[5], vec![0, 3, 2, 1]);
        assert!(matches!(star.linear_extensions(3), Err(TreeError::TooLarge { .. })));
    }

    #[test]
    fn excursiveness_examples() {
        let (m, _) = z2();
        // r=0, a=1, b=2, a'=3 under a, b'=4 under b
        let t = ValenceTree::new(vec![None, Some(0), Some(0), Some(1), Some(2)], vec![f(0); 5]).unwrap();
        assert_eq!(t.excursiveness(&t.preorder()), 1);
        let e = t.evaluate(&m, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(t.profile(&e.order)[1], 2);
        assert_eq!(e.excursiveness, 2);
        let single = ValenceTree::new(vec![None], vec![f(1)]).unwrap();
        assert_eq!(single.excursiveness(&[0]), 1);
        assert_eq!(single.values(&m, 9).unwrap(), BTreeSet::from([f(1)]));
        assert!(t.evaluate(&m, &[1, 0, 2, 3, 4]).is_err());
    }

    #[test]
    fn invalid_trees() {
        assert!(ValenceTree::new(vec![], vec![]).is_err());
        assert!(ValenceTree::new(vec![None, None], vec![f(0), f(0)]).is_err());
        assert!(ValenceTree::new(vec![None, Some(2), Some(1)], vec![f(0); 3]).is_err());
    }

    #[test]
    fn commute_in_abelian_and_s3() {
        let (_, g) = z2();
        let pairs = vec![(1, 1); 18];
        let (k, l) = commute_indices(&g, &pairs).unwrap();
        assert!(k < l && commutes_at(&g, &pairs, k, l));
        assert!(matches!(commute_indices(&g, &pairs[..17]), Err(TreeError::BelowBound { .. })));
        assert_eq!(find_commuting_indices(&g, &[(1, 0), (0, 1)]), Some((1, 2)));

        let s3 = FiniteGroup::from_monoid(&catalog::symmetric3()).unwrap();
        let mut x = 7usize;
        let pairs: Vec<(usize, usize)> = (0..s3.commutation_bound())
            .map(|_| {
                x = (x * 1103515245 + 12345) % (1 << 31);
                (x % 6, (x / 6) % 6)
            })
            .collect();
        let (k, l) = commute_indices(&s3, &pairs).unwrap();
        assert!(commutes_at(&s3, &pairs, k, l));
    }

    #[test]
    fn rewriting_lowers_the_profile() {
        let (m, g) = z2();
        // root 0 with children a=1 and b=2, each with 20 leaf children
        let k = 20;
        let mut parent = vec![None, Some(0), Some(0)];
        let mut vals = vec![f(0), f(1), f(0)];
        for i in 0..k {
            parent.push(Some(1));
            vals.push(f(i % 2));
            parent.push(Some(2));
            vals.push(f((i / 3) % 2));
        }
        let t = ValenceTree::new(parent, vals).unwrap();
        // r a b a1 b1 a2 b2 ... interleaves the two subtrees
        let mut order = vec![0, 1, 2];
        for i in 0..k {
            order.push(3 + 2 * i);
            order.push(4 + 2 * i);
        }
        let e = t.evaluate(&m, &order).unwrap();
        let before = t.profile(&order);
        assert_eq!(before[1], k + 1);
        assert!(e.excursiveness > g.commutation_bound());

        let r = t.rewrite_evaluation(&m, &order, 1, 2, 5).unwrap();
        let after = t.profile(&r.order);
        assert_eq!(r.value, e.value);
        assert_eq!(after[1], before[1] - 3);
        assert!(after.iter().zip(&before).all(|(a, b)| a <= b));

        let best = t.minimize_evaluation(&m, &g, &order, g.commutation_bound()).unwrap();
        assert_eq!(best.value, e.value);
        assert!(best.excursiveness <= g.commutation_bound());
        let one = t.minimize_evaluation(&m, &g, &order, 1).unwrap();
        assert_eq!(one.excursiveness, 1);
        assert_eq!(one.value, e.value);
    }

    #[test]
    fn rewrite_rejects_non_commuting_blocks() {
        let s3m = catalog::symmetric3();
        let a = s3m.parse_literal(&serde_json::json!("(01)")).unwrap();
        let b = s3m.parse_literal(&serde_json::json!("(012)")).unwrap();
        // root with children u (child u1) and v; order r u v u1 gives U_u blocks [u],[u1]
        let t = ValenceTree::new(vec![None, Some(0), Some(0), Some(1)], vec![f(0), a.clone(), b, a]).unwrap();
        let err = t.rewrite_evaluation(&s3m, &[0, 1, 2, 3], 1, 1, 2).unwrap_err();
        assert!(matches!(err, TreeError::NotApplicable { .. }));
        assert!(t.rewrite_evaluation(&s3m, &[0, 1, 2, 3], 1, 1, 3).is_err());
    }

    #[test]
    fn bounded_values_match_enumeration_on_a_small_tree() {
        let (m, g) = z2();
        let t = ValenceTree::new(vec![None, Some(0), Some(0), Some(1), Some(2)], vec![f(0), f(1), f(0), f(1), f(1)])
            .unwrap();
        let all = t.values(&m, 9).unwrap();
        assert_eq!(t.bounded_excursiveness_values(&g, g.commutation_bound()).unwrap(), all);
        assert_eq!(t.bounded_excursiveness_values(&g, 1).unwrap(), all);
        assert_eq!(all, BTreeSet::from([f(1)]));
        let e = t.minimize_excursiveness(&m, &g, &f(1), 9).unwrap();
        assert_eq!(e.value, f(1));
        assert!(matches!(t.minimize_excursiveness(&m, &g, &f(0), 9), Err(TreeError::NotAValue(_))));
    }
}
