mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use valence_core::catalog;
use valence_core::grammars::{commutes_at, u_decomposition, ValenceTree};
use valence_core::group::FiniteGroup;
use valence_core::monoid::{Elem, Monoid};

fn random_order(rng: &mut StdRng, parent: &[Option<usize>]) -> Vec<usize> {
    let mut placed = vec![false; parent.len()];
    let mut order = Vec::new();
    while order.len() < parent.len() {
        let ready: Vec<usize> =
            (0..parent.len()).filter(|&x| !placed[x] && parent[x].map_or(true, |p| placed[p])).collect();
        let x = ready[rng.gen_range(0..ready.len())];
        placed[x] = true;
        order.push(x);
    }
    order
}

fn values_with_excursiveness_at_most(parent: &[Option<usize>], vals: &[Elem], m: &Monoid, b: usize) -> BTreeSet<Elem> {
    common::all_orders(parent)
        .into_iter()
        .filter(|o| common::excursiveness_of(parent, o) <= b)
        .map(|o| m.product(o.iter().map(|&x| &vals[x])).unwrap())
        .collect()
}

#[test]
fn bounded_values_sit_between_the_two_oracles() {
    let mut rng = StdRng::seed_from_u64(31);
    for m in [Monoid::cyclic(3), catalog::symmetric3()] {
        let g = FiniteGroup::from_monoid(&m).unwrap();
        for _ in 0..150 {
            let n = rng.gen_range(1..=6);
            let (parent, vals) = common::random_tree(&mut rng, &m, n);
            let tree = ValenceTree::new(parent.clone(), vals.clone()).unwrap();
            let all = values_with_excursiveness_at_most(&parent, &vals, &m, usize::MAX);
            assert_eq!(tree.values(&m, 9).unwrap(), all);
            assert_eq!(tree.bounded_excursiveness_values(&g, g.commutation_bound()).unwrap(), all);
            for b in 1..=3 {
                let got = tree.bounded_excursiveness_values(&g, b).unwrap();
                assert!(values_with_excursiveness_at_most(&parent, &vals, &m, b).is_subset(&got));
                assert!(got.is_subset(&all));
            }
        }
    }
}

#[test]
fn preorder_has_excursiveness_one() {
    let mut rng = StdRng::seed_from_u64(32);
    let m = catalog::symmetric3();
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let (parent, vals) = common::random_tree(&mut rng, &m, n);
        let tree = ValenceTree::new(parent.clone(), vals).unwrap();
        let pre = tree.preorder();
        assert!(common::is_topological(&parent, &pre));
        assert_eq!(tree.excursiveness(&pre), 1);
    }
}

#[test]
fn linear_extension_counts() {
    let m = Monoid::trivial();
    let one = || m.identity();
    let chain = ValenceTree::new(vec![None, Some(0), Some(1)], vec![one(), one(), one()]).unwrap();
    assert_eq!(chain.linear_extensions(9).unwrap().count(), 1);
    let fan = ValenceTree::new(vec![None, Some(0), Some(0), Some(0)], vec![one(); 4]).unwrap();
    assert_eq!(fan.linear_extensions(9).unwrap().count(), 6);
    let mut rng = StdRng::seed_from_u64(33);
    for _ in 0..50 {
        let n = rng.gen_range(1..=7);
        let (parent, vals) = common::random_tree(&mut rng, &m, n);
        let tree = ValenceTree::new(parent.clone(), vals).unwrap();
        let mine: BTreeSet<Vec<usize>> = common::all_orders(&parent).into_iter().collect();
        let theirs: Vec<Vec<usize>> = tree.linear_extensions(9).unwrap().collect();
        assert_eq!(theirs.len(), mine.len());
        assert_eq!(theirs.into_iter().collect::<BTreeSet<_>>(), mine);
    }
    let big = ValenceTree::new((0..10).map(|i| (i > 0).then_some(0)).collect(), vec![one(); 10]).unwrap();
    assert!(big.linear_extensions(9).is_err());
}

#[test]
fn rewrites_preserve_value_and_shrink_the_profile() {
    let mut rng = StdRng::seed_from_u64(34);
    let mut rewrites = 0;
    for m in [Monoid::cyclic(2), catalog::symmetric3()] {
        let g = FiniteGroup::from_monoid(&m).unwrap();
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let (parent, vals) = common::random_tree(&mut rng, &m, n);
            let tree = ValenceTree::new(parent.clone(), vals.clone()).unwrap();
            let order = random_order(&mut rng, &parent);
            let before = tree.evaluate(&m, &order).unwrap();
            let prof = tree.profile(&order);
            for t in 0..n {
                let d = tree.decomposition(&order, t);
                let prod = |xs: &[usize]| g.index_of(&m.product(xs.iter().map(|&x| &vals[x])).unwrap()).unwrap();
                let pairs: Vec<(usize, usize)> = (1..=d.n()).map(|i| (prod(&d.xs[i - 1]), prod(&d.ys[i]))).collect();
                for k in 1..=d.n() {
                    for l in k + 1..=d.n() {
                        let res = tree.rewrite_evaluation(&m, &order, t, k, l);
                        if !commutes_at(&g, &pairs, k, l) {
                            assert!(res.is_err());
                            continue;
                        }
                        let after = res.unwrap();
                        assert!(common::is_topological(&parent, &after.order));
                        assert_eq!(after.value, before.value);
                        let p2 = tree.profile(&after.order);
                        assert_eq!(p2[t], prof[t] - (l - k));
                        assert!(p2.iter().zip(&prof).all(|(a, b)| a <= b));
                        rewrites += 1;
                    }
                }
            }
        }
    }
    assert!(rewrites > 100, "only {rewrites} rewrites exercised");
}

proptest! {
    #[test]
    fn u_decomposition_reassembles(w in prop::collection::vec(0usize..4, 0..20), mask in 0u8..16) {
        let in_u = |a: &usize| mask & (1 << a) != 0;
        let d = u_decomposition(&w, in_u);
        prop_assert_eq!(d.reassemble(), w.clone());
        prop_assert_eq!(d.n(), common::blocks(&w, in_u));
        prop_assert_eq!(d.ys.len(), d.n() + 1);
        for x in &d.xs {
            prop_assert!(!x.is_empty() && x.iter().all(in_u));
        }
        for (i, y) in d.ys.iter().enumerate() {
            prop_assert!(y.iter().all(|a| !in_u(a)));
            if i > 0 && i < d.n() {
                prop_assert!(!y.is_empty());
            }
        }
    }
}
