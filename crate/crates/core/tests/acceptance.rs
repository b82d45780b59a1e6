//! Acceptance suite. Each criterion prints one PASS or FAIL line with its
//! measured time against the pinned limit; the process fails if any
//! criterion fails.

mod common;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use valence_core::analysis::{
    classify, divides, linv_set, rinv_set, units_finite_gate, DichotomyVerdict, GateAnswer, GateOptions,
};
use valence_core::catalog;
use valence_core::grammars::{commute_indices, factor_count, CfgOptions, Sym, ValenceGrammar, ValenceTree};
use valence_core::group::FiniteGroup;
use valence_core::lab::{nerode_separators, ogden_falsify, WitnessSpec};
use valence_core::machines::{SearchBudget, ValenceAutomaton};
use valence_core::monoid::{Elem, Monoid};
use valence_core::words::{Alphabet, Word};

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn dichotomy_suite() -> Outcome {
    let corpus = catalog::corpus();
    check(corpus.len() >= 20, || format!("corpus has only {} monoids", corpus.len()))?;
    for (i, m) in corpus.iter().enumerate() {
        let t = m.as_finite().unwrap();
        let n = t.order();
        let one = t.identity();
        let r: Vec<usize> = (0..n).filter(|&a| (0..n).any(|b| t.mul(a, b) == one)).collect();
        let l: Vec<usize> = (0..n).filter(|&a| (0..n).any(|b| t.mul(b, a) == one)).collect();
        let e: Vec<usize> =
            (0..n).filter(|&a| (0..n).any(|b| (0..n).any(|c| t.mul(t.mul(b, a), c) == one))).collect();
        check(r == l && l == e, || format!("monoid #{i}: brute-force R, L, E differ"))?;
        let DichotomyVerdict::FiniteGroup(cert) = classify(m).map_err(|e| e.to_string())? else {
            return Err(format!("monoid #{i} classified as infinite"));
        };
        let idx = |xs: &[Elem]| sorted(xs.iter().map(|x| if let Elem::Finite(a) = x { *a } else { usize::MAX }).collect());
        check(idx(&cert.right_invertibles) == r, || format!("monoid #{i}: R mismatch"))?;
        check(idx(&cert.left_invertibles) == l, || format!("monoid #{i}: L mismatch"))?;
        check(idx(&cert.e_set) == e, || format!("monoid #{i}: E mismatch"))?;
        check(cert.inverses.len() == r.len(), || format!("monoid #{i}: inverse table incomplete"))?;
        for (a, b) in &cert.inverses {
            let (Elem::Finite(a), Elem::Finite(b)) = (a, b) else { unreachable!() };
            check(t.mul(*a, *b) == one && t.mul(*b, *a) == one, || format!("monoid #{i}: bad inverse"))?;
        }
        for &a in &r {
            for &b in &r {
                check(r.contains(&t.mul(a, b)), || format!("monoid #{i}: group not closed"))?;
            }
        }
    }
    Ok(format!("{} monoids", corpus.len()))
}

fn disjoint_inverses_suite() -> Outcome {
    let mut pairs = 0;
    for (i, m) in catalog::corpus().iter().enumerate() {
        let t = m.as_finite().unwrap();
        for s in 0..t.order() {
            for u in 0..t.order() {
                if s == u || divides(t, s, u).is_none() {
                    continue;
                }
                pairs += 1;
                let (rs, ru) = (rinv_set(t, s), rinv_set(t, u));
                let (ls, lu) = (linv_set(t, s), linv_set(t, u));
                check(rs.iter().all(|x| !ru.contains(x)), || format!("monoid #{i}: right inverse sets meet"))?;
                check(ls.iter().all(|x| !lu.contains(x)), || format!("monoid #{i}: left inverse sets meet"))?;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs s != t with s dividing t"))
}

fn commute_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut detail = Vec::new();
    for (name, m) in [("Z2", Monoid::cyclic(2)), ("Z3", Monoid::cyclic(3)), ("S3", catalog::symmetric3())] {
        let g = FiniteGroup::from_monoid(&m).map_err(|e| e.to_string())?;
        let len = 2 * (g.order().pow(3) + 1);
        for trial in 0..100 {
            let pairs: Vec<(usize, usize)> =
                (0..len).map(|_| (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()))).collect();
            let (k, l) = commute_indices(&g, &pairs).map_err(|e| e.to_string())?;
            check(1 <= k && k < l && l <= len, || format!("{name} trial {trial}: indices ({k}, {l}) out of range"))?;
            let el = |i: usize| g.elem(i);
            let slice = &pairs[k - 1..l];
            let lhs = m.product(slice.iter().flat_map(|&(a, b)| [el(a), el(b)])).unwrap();
            let rhs = m
                .mul(
                    &m.product(slice.iter().map(|&(a, _)| el(a))).unwrap(),
                    &m.product(slice.iter().map(|&(_, b)| el(b))).unwrap(),
                )
                .unwrap();
            check(lhs == rhs, || format!("{name} trial {trial}: ({k}, {l}) does not commute"))?;
        }
        detail.push(format!("{name} m={len}"));
    }
    Ok(format!("100 sequences each for {}", detail.join(", ")))
}

fn excursiveness_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let m = Monoid::cyclic(2);
    let g = FiniteGroup::from_monoid(&m).map_err(|e| e.to_string())?;
    let bound = g.commutation_bound();
    let mut minimized = 0;
    for trial in 0..500 {
        let n = rng.gen_range(1..=7);
        let (parent, valences) = common::random_tree(&mut rng, &m, n);
        let tree = ValenceTree::new(parent.clone(), valences.clone()).map_err(|e| e.to_string())?;
        let oracle: BTreeSet<Elem> =
            common::all_orders(&parent).iter().map(|o| m.product(o.iter().map(|&x| &valences[x])).unwrap()).collect();
        let got = tree.bounded_excursiveness_values(&g, bound).map_err(|e| e.to_string())?;
        check(got == oracle, || format!("tree {trial} ({parent:?}): bounded values {got:?} != {oracle:?}"))?;
        for target in &oracle {
            let ev = tree.minimize_excursiveness(&m, &g, target, 9).map_err(|e| e.to_string())?;
            check(common::is_topological(&parent, &ev.order), || format!("tree {trial}: not a linear extension"))?;
            let value = m.product(ev.order.iter().map(|&x| &valences[x])).unwrap();
            check(value == *target, || format!("tree {trial}: value changed"))?;
            let exc = common::excursiveness_of(&parent, &ev.order);
            check(exc <= bound && exc == ev.excursiveness, || format!("tree {trial}: excursiveness {exc}"))?;
            minimized += 1;
        }
    }
    Ok(format!("500 trees, {minimized} minimizations, m={bound}"))
}

fn words_property_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    for trial in 0..1000 {
        let size = rng.gen_range(2..=5);
        let u_size = rng.gen_range(1..size);
        let u: Vec<usize> = (0..u_size).collect();
        let not_u: Vec<usize> = (u_size..size).collect();
        let v: Vec<usize> = match rng.gen_range(0..3) {
            // V ⊆ U
            0 => u.iter().copied().filter(|_| rng.gen_bool(0.5)).collect(),
            // U ⊆ V
            1 => u.iter().copied().chain(not_u.iter().copied().filter(|_| rng.gen_bool(0.5))).collect(),
            // U ∩ V = ∅
            _ => not_u.iter().copied().filter(|_| rng.gen_bool(0.5)).collect(),
        };
        let pick = |rng: &mut StdRng, from: &[usize]| from[rng.gen_range(0..from.len())];
        let any = |rng: &mut StdRng, len: usize| -> Word { (0..len).map(|_| rng.gen_range(0..size)).collect() };
        let len = rng.gen_range(0..5);
        let mut r = any(&mut rng, len);
        r.push(pick(&mut rng, &u));
        let x: Word = (0..rng.gen_range(1..4)).map(|_| pick(&mut rng, &u)).collect();
        let y: Word = (0..rng.gen_range(1..4)).map(|_| pick(&mut rng, &not_u)).collect();
        let mut s = Word::new();
        if rng.gen_bool(0.8) {
            s.push(pick(&mut rng, &not_u));
            let len = rng.gen_range(0..4);
            s.extend(any(&mut rng, len));
        }
        let rxys = [&r[..], &x, &y, &s].concat();
        let ryxs = [&r[..], &y, &x, &s].concat();
        let in_v = |a: &usize| v.contains(a);
        let (lhs, rhs) = (factor_count(&rxys, in_v), factor_count(&ryxs, in_v));
        check(lhs == common::blocks(&rxys, in_v) && rhs == common::blocks(&ryxs, in_v), || {
            format!("trial {trial}: factor count disagrees with the block oracle")
        })?;
        check(lhs <= rhs, || format!("trial {trial}: {lhs} > {rhs} for r={r:?} x={x:?} y={y:?} s={s:?} V={v:?}"))?;
    }
    Ok("1000 instances".into())
}

fn automaton_conversion_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let budget = SearchBudget::default();
    let mut automata = vec![ValenceAutomaton::load(&data("even_a_automaton.json")).map_err(|e| e.to_string())?];
    let corpus: Vec<Monoid> =
        catalog::corpus().into_iter().filter(|m| m.as_finite().unwrap().order() > 1).collect();
    for _ in 0..11 {
        let m = &corpus[rng.gen_range(0..corpus.len())];
        automata.push(common::random_automaton(&mut rng, m));
    }
    let mut words = 0;
    for (i, a) in automata.iter().enumerate() {
        let base = a.enumerate_language(10, &budget).map_err(|e| e.to_string())?;
        let nfa = a.to_nfa(&GateOptions::default()).map_err(|e| format!("automaton {i}: {e}"))?;
        let conv = nfa.enumerate_language(10, &budget).map_err(|e| e.to_string())?;
        check(base.complete && conv.complete, || format!("automaton {i}: incomplete enumeration"))?;
        check(conv.words == base.words, || format!("automaton {i}: slices differ"))?;
        check(base.words == common::oracle_language(a, 10), || format!("automaton {i}: simulator disagrees"))?;
        words += base.len();
    }
    Ok(format!("{} automata, {words} accepted words up to length 10", automata.len()))
}

fn grammar_conversion_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let budget = SearchBudget::default();
    let even_a = ValenceGrammar::load(&data("even_a_grammar.json")).map_err(|e| e.to_string())?;
    let z3 = Monoid::cyclic(3);
    let mut z3_variant = ValenceGrammar::new(z3.clone(), Alphabet::new(["a"]).unwrap(), "S").unwrap();
    z3_variant.add_production(0, vec![Sym::T(0), Sym::N(0)], Elem::Finite(1)).unwrap();
    z3_variant.add_production(0, vec![], z3.identity()).unwrap();
    let mut grammars = vec![("Z2 even-a".to_string(), even_a), ("Z3 a^3k".to_string(), z3_variant)];
    let groups = [
        ("trivial", Monoid::trivial()),
        ("Z2", Monoid::cyclic(2)),
        ("Z3", Monoid::cyclic(3)),
        ("Z4", Monoid::cyclic(4)),
        ("Z2xZ2", catalog::klein4()),
        ("Z6", Monoid::cyclic(6)),
        ("Z2xZ3", Monoid::direct_product(Monoid::cyclic(2), Monoid::cyclic(3))),
    ];
    for i in 0..10 {
        let (name, m) = &groups[i % groups.len()];
        let k = rng.gen_range(2..6);
        grammars.push((format!("random {name}"), common::random_grammar(&mut rng, m, k)));
    }
    let mut nonempty = 0;
    for (name, g) in &grammars {
        let base = g.bounded_language(8, &budget).map_err(|e| e.to_string())?;
        let cfg = g.normalize().to_cfg(&CfgOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let conv = cfg.bounded_language(8, &budget).map_err(|e| e.to_string())?;
        check(base.complete && conv.complete, || format!("{name}: incomplete enumeration"))?;
        check(conv.words == base.words, || format!("{name}: slices differ ({} vs {})", conv.len(), base.len()))?;
        let oracle: Vec<Word> = common::grammar_oracle(g, 8).into_iter().collect();
        let mut mine = base.words.clone();
        mine.sort();
        check(mine == oracle, || format!("{name}: fixpoint oracle disagrees"))?;
        nonempty += usize::from(!base.is_empty());
    }
    Ok(format!("{} grammars ({nonempty} with nonempty slices), length 8", grammars.len()))
}

fn names<'a>(alphabet: &'a Alphabet, w: &[usize]) -> Vec<&'a str> {
    w.iter().map(|&i| alphabet.symbol(i)).collect()
}

fn witness_suite() -> Outcome {
    let budget = SearchBudget::default();
    let k = WitnessSpec::load(&data("witness_k.json")).map_err(|e| e.to_string())?;
    let auto = k.build_automaton().map_err(|e| e.to_string())?;
    let slice = auto.enumerate_language(4, &budget).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for w in k.alphabet().words_up_to(4) {
        let direct = k.contains(&w).map_err(|e| e.to_string())?;
        let oracle = common::bicyclic_k(&names(k.alphabet(), &w));
        check(direct == oracle, || format!("K membership disagrees on {}", k.alphabet().render(&w)))?;
        check(slice.contains(&w) == oracle, || format!("K automaton disagrees on {}", k.alphabet().render(&w)))?;
        checked += 1;
    }
    let kp = WitnessSpec::load(&data("witness_k_prime.json")).map_err(|e| e.to_string())?;
    let gram = kp.build_grammar().map_err(|e| e.to_string())?;
    let slice = gram.bounded_language(9, &budget).map_err(|e| e.to_string())?;
    check(slice.complete, || "K' grammar slice incomplete".into())?;
    let mut members = 0;
    for w in kp.alphabet().words_up_to(9) {
        let direct = kp.contains(&w).map_err(|e| e.to_string())?;
        let oracle = common::integer_k_prime(&names(kp.alphabet(), &w));
        check(direct == oracle, || format!("K' membership disagrees on {}", kp.alphabet().render(&w)))?;
        check(slice.contains(&w) == oracle, || format!("K' grammar disagrees on {}", kp.alphabet().render(&w)))?;
        checked += 1;
        members += usize::from(oracle);
    }
    Ok(format!("{checked} words checked, {members} in K' up to length 9"))
}

fn nerode_suite() -> Outcome {
    let k = WitnessSpec::load(&data("witness_k.json")).map_err(|e| e.to_string())?;
    let alphabet = k.alphabet().clone();
    let oracle = |w: &[usize]| common::bicyclic_k(&names(&alphabet, w));
    let symbols = [alphabet.index_of("x_p").unwrap(), alphabet.index_of("y_q").unwrap()];
    let report = nerode_separators(&oracle, &symbols, 9, 9, 10);
    check(report.prefixes.len() >= 10, || format!("only {} prefixes", report.prefixes.len()))?;
    let n = report.prefixes.len();
    check(report.witnesses.len() == n * (n - 1) / 2, || "missing pair witnesses".into())?;
    for p in &report.witnesses {
        let a = [&report.prefixes[p.i][..], &p.suffix].concat();
        let b = [&report.prefixes[p.j][..], &p.suffix].concat();
        check(oracle(&a) != oracle(&b), || format!("pair ({}, {}) is not separated", p.i, p.j))?;
    }
    Ok(format!("{n} prefixes, {} verified witnesses", report.witnesses.len()))
}

fn ogden_suite() -> Outcome {
    let kp = WitnessSpec::load(&data("witness_k_prime.json")).map_err(|e| e.to_string())?;
    let alphabet = kp.alphabet().clone();
    let z = kp.word(&[("x1", 5), ("c", 1), ("x2", 5), ("c", 1), ("x1", 5)]).map_err(|e| e.to_string())?;
    let marks: BTreeSet<usize> = (0..5).collect();
    let oracle = |w: &[usize]| common::integer_k_prime(&names(&alphabet, w));
    check(oracle(&z), || "z is not in K'".into())?;
    let report = ogden_falsify(&oracle, &z, &marks, 5, &[0, 2]).map_err(|e| e.to_string())?;
    check(report.examined > 0, || "no decompositions examined".into())?;
    check(report.survivors.is_empty(), || format!("{} survivors", report.survivors.len()))?;
    let x1 = alphabet.index_of("x1").unwrap();
    let star = |w: &[usize]| w.iter().all(|&a| a == x1);
    let sanity = ogden_falsify(&star, &vec![x1; 10], &marks, 5, &[0, 2]).map_err(|e| e.to_string())?;
    check(!sanity.survivors.is_empty(), || "a* sanity oracle has no survivors".into())?;
    Ok(format!(
        "K': {} examined, 0 survivors; a*: {} of {} survive",
        report.examined,
        sanity.survivors.len(),
        sanity.examined
    ))
}

/// Whether some nonempty combination of nonzero generators sums to zero,
/// exploring partial sums of L1 norm at most `cap`.
fn brute_force_unit(gens: &[Vec<i64>], cap: i64) -> bool {
    let nonzero: Vec<&Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = nonzero.iter().map(|g| (*g).clone()).collect();
    while let Some(p) = queue.pop_front() {
        if p.iter().all(|&x| x == 0) {
            return true;
        }
        if !seen.insert(p.clone()) {
            continue;
        }
        for g in &nonzero {
            let q: Vec<i64> = p.iter().zip(g.iter()).map(|(a, b)| a + b).collect();
            if q.iter().map(|x| x.abs()).sum::<i64>() <= cap && !seen.contains(&q) {
                queue.push_back(q);
            }
        }
    }
    false
}

fn gate_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let (mut finite, mut infinite) = (0, 0);
    for trial in 0..50 {
        let k = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=5);
        // half of the sets are drawn from a half-space to exercise the finite case
        let cone = trial % 2 == 0;
        let gens: Vec<Vec<i64>> = (0..count)
            .map(|_| {
                let mut v: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
                if cone {
                    v[0] = rng.gen_range(1..=3);
                }
                v
            })
            .collect();
        let m = Monoid::integers(k);
        let elems: Vec<Elem> = gens.iter().cloned().map(Elem::Vector).collect();
        let verdict = units_finite_gate(&m, &elems, &GateOptions::default()).map_err(|e| e.to_string())?;
        let has_unit = brute_force_unit(&gens, 50);
        let expect = if has_unit { GateAnswer::Infinite } else { GateAnswer::Finite };
        check(verdict.answer == expect, || {
            format!("trial {trial}: gate says {} but brute force found unit = {has_unit} for {gens:?}", verdict.answer.as_str())
        })?;
        if has_unit {
            infinite += 1;
        } else {
            finite += 1;
        }
    }
    Ok(format!("50 generator sets ({finite} finite, {infinite} infinite)"))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("dichotomy suite", 1, dichotomy_suite),
        ("disjoint inverses", 1, disjoint_inverses_suite),
        ("commute suite", 5, commute_suite),
        ("excursiveness oracle", 60, excursiveness_suite),
        ("words property", 1, words_property_suite),
        ("automaton conversion", 10, automaton_conversion_suite),
        ("grammar conversion", 60, grammar_conversion_suite),
        ("witness fidelity", 30, witness_suite),
        ("regularity evidence", 10, nerode_suite),
        ("ogden evidence", 10, ogden_suite),
        ("gate correctness", 30, gate_suite),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name}: {detail} [{:.3}s / limit {limit}s]", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
