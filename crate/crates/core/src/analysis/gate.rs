//! The finiteness gate: is `R(N)` finite for the submonoid `N` generated by a
//! finite set of elements? Finite tables are decided by closure, `Z^k` by
//! exact linear feasibility, bicyclic powers by sign rules with a bounded
//! search fallback.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::{e_set_in, lp, right_invertibles_in, submonoid_generated, AnalysisError};
use crate::group::FiniteGroup;
use crate::monoid::{Elem, GenMap, Monoid};

pub const DEFAULT_NORM_CAP: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateOptions {
    /// Elements above this norm are not explored by bounded searches.
    pub norm_cap: u64,
    /// Hard limit on the number of elements a bounded search may collect.
    pub max_elements: usize,
}

impl Default for GateOptions {
    fn default() -> Self {
        GateOptions { norm_cap: DEFAULT_NORM_CAP, max_elements: 200_000 }
    }
}

impl GateOptions {
    pub fn with_norm_cap(norm_cap: u64) -> Self {
        GateOptions { norm_cap, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateAnswer {
    Finite,
    Infinite,
    Unknown,
}

impl GateAnswer {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateAnswer::Finite => "finite",
            GateAnswer::Infinite => "infinite",
            GateAnswer::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateMethod {
    ExhaustiveClosure,
    LinearFeasibility,
    ClassRule,
    BoundedSearch,
}

impl GateMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateMethod::ExhaustiveClosure => "exhaustive-closure",
            GateMethod::LinearFeasibility => "linear-feasibility",
            GateMethod::ClassRule => "class-rule",
            GateMethod::BoundedSearch => "bounded-search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateCertificate {
    /// `R(N)` listed in full.
    Units { units: Vec<Elem> },
    /// An integer functional positive on every nonzero generator, so no
    /// nonzero element of `N` has its negative in `N`; `R(N) = {0}`.
    SeparatingFunctional { functional: Vec<i64>, units: Vec<Elem> },
    /// `sum_i coefficients[i] * g_i = 0`: `element` is a nonzero generator
    /// with a positive coefficient and `inverse` the rest of the sum.
    ZeroCombination { coefficients: Vec<u64>, element: Elem, inverse: Elem },
    /// A sign rule excluding nontrivial right inverses inside `N`.
    NoInvertibleCore { rule: String, units: Vec<Elem> },
    /// Every factor projection has a finite `R`, which bounds `R(N)`.
    Factors { factors: Vec<GateVerdict> },
    /// A right-invertible element of infinite order inside `N`, with the
    /// generator words producing it and its inverse.
    RightInvertible {
        element: Elem,
        inverse: Elem,
        element_word: Vec<usize>,
        inverse_word: Vec<usize>,
        powers_checked: u64,
    },
    Inconclusive { explored: usize, norm_cap: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateVerdict {
    pub answer: GateAnswer,
    pub method: GateMethod,
    pub certificate: GateCertificate,
}

impl GateVerdict {
    fn new(answer: GateAnswer, method: GateMethod, certificate: GateCertificate) -> Self {
        GateVerdict { answer, method, certificate }
    }

    pub fn is_finite(&self) -> bool {
        self.answer == GateAnswer::Finite
    }

    pub fn to_json(&self, m: &Monoid) -> Value {
        json!({
            "answer": self.answer.as_str(),
            "method": self.method.as_str(),
            "certificate": self.certificate.to_json(m),
        })
    }
}

impl GateCertificate {
    pub fn to_json(&self, m: &Monoid) -> Value {
        let r = |xs: &[Elem]| Value::Array(xs.iter().map(|x| m.render(x)).collect());
        match self {
            GateCertificate::Units { units } => json!({"kind": "units", "units": r(units)}),
            GateCertificate::SeparatingFunctional { functional, units } => {
                json!({"kind": "separating-functional", "functional": functional, "units": r(units)})
            }
            GateCertificate::ZeroCombination { coefficients, element, inverse } => json!({
                "kind": "zero-combination",
                "coefficients": coefficients,
                "element": m.render(element),
                "inverse": m.render(inverse),
            }),
            GateCertificate::NoInvertibleCore { rule, units } => {
                json!({"kind": "sign-rule", "rule": rule, "units": r(units)})
            }
            GateCertificate::Factors { factors } => {
                let parts: Vec<Value> = match m {
                    Monoid::Product(fs) => factors.iter().zip(fs).map(|(v, f)| v.to_json(f)).collect(),
                    _ => factors.iter().map(|v| v.to_json(m)).collect(),
                };
                json!({"kind": "factor-projections", "factors": parts})
            }
            GateCertificate::RightInvertible { element, inverse, element_word, inverse_word, powers_checked } => {
                json!({
                    "kind": "right-invertible-of-infinite-order",
                    "element": m.render(element),
                    "inverse": m.render(inverse),
                    "element_word": element_word,
                    "inverse_word": inverse_word,
                    "powers_checked": powers_checked,
                })
            }
            GateCertificate::Inconclusive { explored, norm_cap } => {
                json!({"kind": "inconclusive", "explored": explored, "norm_cap": norm_cap})
            }
        }
    }
}

/// Elements of a submonoid reachable within a norm cap, each with the
/// generator word that first produced it.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub elements: Vec<Elem>,
    pub words: Vec<Vec<usize>>,
    /// Some element was skipped because of the norm cap or the size limit.
    pub truncated: bool,
}

impl Exploration {
    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }
}

/// Breadth-first closure of `{1} ∪ gens` under right multiplication by
/// generators, restricted to elements of norm at most `opts.norm_cap`.
pub fn explore_submonoid(m: &Monoid, gens: &[Elem], opts: &GateOptions) -> Result<Exploration, AnalysisError> {
    let mut index: HashMap<Elem, usize> = HashMap::new();
    let mut elements = vec![m.identity()];
    let mut words = vec![vec![]];
    index.insert(m.identity(), 0);
    let mut truncated = false;
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        for (gi, g) in gens.iter().enumerate() {
            let y = m.mul(&x, g)?;
            if index.contains_key(&y) {
                continue;
            }
            if m.norm(&y) > opts.norm_cap || elements.len() >= opts.max_elements {
                truncated = true;
                continue;
            }
            let mut w = words[head].clone();
            w.push(gi);
            index.insert(y.clone(), elements.len());
            elements.push(y);
            words.push(w);
        }
        head += 1;
    }
    Ok(Exploration { elements, words, truncated })
}

fn check_members(m: &Monoid, gens: &[Elem]) -> Result<(), AnalysisError> {
    for g in gens {
        if !m.contains(g) {
            return Err(crate::monoid::MonoidError::Mismatch { kind: m.kind_name(), elem: format!("{g:?}") }.into());
        }
    }
    Ok(())
}

/// Decides (or bounds) whether `R(N)` is finite for `N = <gens>`. `Unknown`
/// is an answer, not an error.
pub fn units_finite_gate(m: &Monoid, gens: &[Elem], opts: &GateOptions) -> Result<GateVerdict, AnalysisError> {
    check_members(m, gens)?;
    match m {
        Monoid::Finite(t) => {
            let idx: Vec<usize> = gens
                .iter()
                .map(|g| match g {
                    Elem::Finite(i) => *i,
                    _ => unreachable!("membership checked"),
                })
                .collect();
            let carrier = submonoid_generated(t, &idx);
            let units = right_invertibles_in(t, &carrier).into_iter().map(Elem::Finite).collect();
            Ok(GateVerdict::new(GateAnswer::Finite, GateMethod::ExhaustiveClosure, GateCertificate::Units { units }))
        }
        _ if flat_rank(m).is_some() => int_gate(m, gens),
        Monoid::Bicyclic { power } => {
            let mut rules = Vec::new();
            for f in 0..*power {
                let pairs: Vec<(u64, u64)> = gens
                    .iter()
                    .map(|g| match g {
                        Elem::Bicyclic(v) => v[f],
                        _ => unreachable!("membership checked"),
                    })
                    .collect();
                match bicyclic_sign_rule(&pairs) {
                    Some(rule) => rules.push(format!("factor {f}: {rule}")),
                    None => return bounded_gate(m, gens, opts),
                }
            }
            Ok(GateVerdict::new(
                GateAnswer::Finite,
                GateMethod::ClassRule,
                GateCertificate::NoInvertibleCore { rule: rules.join("; "), units: vec![m.identity()] },
            ))
        }
        Monoid::Product(fs) => {
            let mut factors = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let proj: Vec<Elem> = gens
                    .iter()
                    .map(|g| match g {
                        Elem::Tuple(cs) => cs[i].clone(),
                        _ => unreachable!("membership checked"),
                    })
                    .collect();
                let v = units_finite_gate(f, &proj, opts)?;
                if !v.is_finite() {
                    return bounded_gate(m, gens, opts);
                }
                factors.push(v);
            }
            Ok(GateVerdict::new(GateAnswer::Finite, GateMethod::ClassRule, GateCertificate::Factors { factors }))
        }
        Monoid::IntVectors { .. } => unreachable!("handled by flat_rank"),
    }
}

/// Wrapper taking the generators from a generator map.
pub fn units_finite_gate_genmap(m: &Monoid, gm: &GenMap, opts: &GateOptions) -> Result<GateVerdict, AnalysisError> {
    units_finite_gate(m, gm.images(), opts)
}

/// If every non-identity generator keeps a coordinate away from the shapes
/// `p^b` or `q^b`, the only right-invertible element of `N` is 1.
fn bicyclic_sign_rule(pairs: &[(u64, u64)]) -> Option<&'static str> {
    let nontrivial: Vec<(u64, u64)> = pairs.iter().copied().filter(|&p| p != (0, 0)).collect();
    if nontrivial.iter().all(|&(a, _)| a >= 1) {
        // a product's q-exponent is at least that of its first factor: no p^b
        return Some("every generator has a q-prefix, so N contains no p^b");
    }
    if nontrivial.iter().all(|&(_, b)| b >= 1) {
        return Some("every generator has a p-suffix, so N contains no q^b");
    }
    if nontrivial.iter().all(|&(a, b)| b >= a) {
        // b - a is a homomorphism to Z
        return Some("every generator has degree b - a >= 0, so N contains no q^b");
    }
    if nontrivial.iter().all(|&(a, b)| b <= a) {
        return Some("every generator has degree b - a <= 0, so N contains no p^b");
    }
    None
}

/// Total rank when the monoid is `Z^k` or a nested product of such.
fn flat_rank(m: &Monoid) -> Option<usize> {
    match m {
        Monoid::IntVectors { rank } => Some(*rank),
        Monoid::Product(fs) => fs.iter().map(flat_rank).sum(),
        _ => None,
    }
}

fn flatten(e: &Elem, out: &mut Vec<i64>) {
    match e {
        Elem::Vector(v) => out.extend(v),
        Elem::Tuple(cs) => cs.iter().for_each(|c| flatten(c, out)),
        _ => {}
    }
}

fn int_gate(m: &Monoid, gens: &[Elem]) -> Result<GateVerdict, AnalysisError> {
    let vecs: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| {
            let mut v = Vec::new();
            flatten(g, &mut v);
            v
        })
        .collect();
    let nonzero: Vec<usize> = (0..vecs.len()).filter(|&i| vecs[i].iter().any(|&x| x != 0)).collect();
    let units = vec![m.identity()];
    if nonzero.is_empty() {
        let rank = flat_rank(m).unwrap_or(0);
        return Ok(GateVerdict::new(
            GateAnswer::Finite,
            GateMethod::LinearFeasibility,
            GateCertificate::SeparatingFunctional { functional: vec![0; rank], units },
        ));
    }
    let sub: Vec<Vec<i64>> = nonzero.iter().map(|&i| vecs[i].clone()).collect();
    if let Some(c) = lp::zero_combination(&sub) {
        let mut coefficients = vec![0u64; gens.len()];
        for (k, &i) in nonzero.iter().enumerate() {
            coefficients[i] = c[k];
        }
        let j = nonzero.iter().copied().find(|&i| coefficients[i] > 0).expect("nonzero combination");
        let mut inverse = m.identity();
        for (i, g) in gens.iter().enumerate() {
            let times = if i == j { coefficients[i] - 1 } else { coefficients[i] };
            for _ in 0..times {
                inverse = m.mul(&inverse, g)?;
            }
        }
        return Ok(GateVerdict::new(
            GateAnswer::Infinite,
            GateMethod::LinearFeasibility,
            GateCertificate::ZeroCombination { coefficients, element: gens[j].clone(), inverse },
        ));
    }
    match lp::separating_functional(&sub) {
        Some(functional) => Ok(GateVerdict::new(
            GateAnswer::Finite,
            GateMethod::LinearFeasibility,
            GateCertificate::SeparatingFunctional { functional, units },
        )),
        None => Err(AnalysisError::Certificate("neither alternative of the cone test holds".into())),
    }
}

/// Components living in an infinite factor are non-identity; together with
/// right invertibility this forces infinite order.
fn has_infinite_part(m: &Monoid, e: &Elem) -> bool {
    match (m, e) {
        (Monoid::Finite(_), _) => false,
        (Monoid::IntVectors { .. }, Elem::Vector(v)) => v.iter().any(|&x| x != 0),
        (Monoid::Bicyclic { .. }, Elem::Bicyclic(v)) => v.iter().any(|&p| p != (0, 0)),
        (Monoid::Product(fs), Elem::Tuple(cs)) => fs.iter().zip(cs).any(|(f, c)| has_infinite_part(f, c)),
        _ => false,
    }
}

/// All right inverses of `e` in the whole monoid, when that set is finite
/// and easy to list.
fn right_inverses(m: &Monoid, e: &Elem) -> Vec<Elem> {
    match (m, e) {
        (Monoid::Finite(t), Elem::Finite(a)) => {
            (0..t.order()).filter(|&b| t.mul(*a, b) == t.identity()).map(Elem::Finite).collect()
        }
        (Monoid::IntVectors { .. }, Elem::Vector(v)) => vec![Elem::Vector(v.iter().map(|x| -x).collect())],
        (Monoid::Bicyclic { .. }, Elem::Bicyclic(v)) => {
            if v.iter().all(|&(a, _)| a == 0) {
                vec![Elem::Bicyclic(v.iter().map(|&(_, b)| (b, 0)).collect())]
            } else {
                vec![]
            }
        }
        (Monoid::Product(fs), Elem::Tuple(cs)) => {
            let mut acc: Vec<Vec<Elem>> = vec![vec![]];
            for (f, c) in fs.iter().zip(cs) {
                let opts = right_inverses(f, c);
                acc = acc
                    .into_iter()
                    .flat_map(|p| {
                        opts.iter().map(move |o| {
                            let mut q = p.clone();
                            q.push(o.clone());
                            q
                        })
                    })
                    .collect();
            }
            acc.into_iter().map(Elem::Tuple).collect()
        }
        _ => vec![],
    }
}

fn bounded_gate(m: &Monoid, gens: &[Elem], opts: &GateOptions) -> Result<GateVerdict, AnalysisError> {
    let ex = explore_submonoid(m, gens, opts)?;
    let index: HashMap<&Elem, usize> = ex.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    for (i, x) in ex.elements.iter().enumerate() {
        if !has_infinite_part(m, x) {
            continue;
        }
        for y in right_inverses(m, x) {
            if let Some(&j) = index.get(&y) {
                let powers_checked = check_powers(m, x, &y, 8)?;
                return Ok(GateVerdict::new(
                    GateAnswer::Infinite,
                    GateMethod::BoundedSearch,
                    GateCertificate::RightInvertible {
                        element: x.clone(),
                        inverse: y,
                        element_word: ex.words[i].clone(),
                        inverse_word: ex.words[j].clone(),
                        powers_checked,
                    },
                ));
            }
        }
    }
    if !ex.truncated {
        let one = m.identity();
        let mut units = Vec::new();
        for x in &ex.elements {
            for y in &ex.elements {
                if m.mul(x, y)? == one {
                    units.push(x.clone());
                    break;
                }
            }
        }
        units.sort();
        return Ok(GateVerdict::new(GateAnswer::Finite, GateMethod::BoundedSearch, GateCertificate::Units { units }));
    }
    Ok(GateVerdict::new(
        GateAnswer::Unknown,
        GateMethod::BoundedSearch,
        GateCertificate::Inconclusive { explored: ex.elements.len(), norm_cap: opts.norm_cap },
    ))
}

/// Checks `x^b y^b = 1` and pairwise distinctness of `x^b` for `b = 1..=n`.
fn check_powers(m: &Monoid, x: &Elem, y: &Elem, n: u64) -> Result<u64, AnalysisError> {
    let one = m.identity();
    let mut xs: Vec<Elem> = Vec::new();
    let (mut xb, mut yb) = (one.clone(), one.clone());
    for b in 1..=n {
        xb = m.mul(&xb, x)?;
        yb = m.mul(&yb, y)?;
        if m.mul(&xb, &yb)? != one || xs.contains(&xb) {
            return Err(AnalysisError::Certificate(format!("power {b} of the chain seed fails")));
        }
        xs.push(xb.clone());
    }
    Ok(n)
}

/// A finite group `H ⊇ E(N)` closed under multiplication, computed after a
/// finite gate verdict; conversions fold `H` into states or nonterminals.
#[derive(Clone, Debug)]
pub struct ControlGroup {
    pub group: FiniteGroup,
    pub verdict: GateVerdict,
}

/// Runs the gate and, when it answers finite, returns the control group.
/// Any other answer is a refusal carrying the verdict.
pub fn control_group(m: &Monoid, gens: &[Elem], opts: &GateOptions) -> Result<ControlGroup, AnalysisError> {
    let verdict = units_finite_gate(m, gens, opts)?;
    if !verdict.is_finite() {
        return Err(AnalysisError::GateRefused(Box::new(verdict)));
    }
    let elems = control_elements(m, gens, &verdict, opts)?;
    let group = FiniteGroup::from_elements(m, elems).map_err(|e| AnalysisError::Certificate(e.to_string()))?;
    Ok(ControlGroup { group, verdict })
}

fn control_elements(m: &Monoid, gens: &[Elem], verdict: &GateVerdict, opts: &GateOptions) -> Result<Vec<Elem>, AnalysisError> {
    match (m, &verdict.certificate) {
        (Monoid::Finite(t), _) => {
            let idx: Vec<usize> = gens.iter().filter_map(|g| if let Elem::Finite(i) = g { Some(*i) } else { None }).collect();
            let carrier = submonoid_generated(t, &idx);
            Ok(e_set_in(t, &carrier).into_iter().map(Elem::Finite).collect())
        }
        (Monoid::Product(fs), GateCertificate::Factors { .. }) => {
            let mut acc: Vec<Vec<Elem>> = vec![vec![]];
            for (i, f) in fs.iter().enumerate() {
                let proj: Vec<Elem> = gens
                    .iter()
                    .map(|g| match g {
                        Elem::Tuple(cs) => cs[i].clone(),
                        _ => unreachable!("membership checked"),
                    })
                    .collect();
                let sub = control_group(f, &proj, opts)?;
                let es = sub.group.elems().to_vec();
                acc = acc
                    .into_iter()
                    .flat_map(|p| {
                        es.iter().map(move |e| {
                            let mut q = p.clone();
                            q.push(e.clone());
                            q
                        })
                    })
                    .collect();
            }
            Ok(acc.into_iter().map(Elem::Tuple).collect())
        }
        (_, GateCertificate::Units { .. }) if !m.as_finite().is_some() && verdict.method == GateMethod::BoundedSearch => {
            // the exploration was exhaustive, so N is finite and listed
            let ex = explore_submonoid(m, gens, opts)?;
            let one = m.identity();
            let mut out = Vec::new();
            for a in &ex.elements {
                'search: for b in &ex.elements {
                    let ba = m.mul(b, a)?;
                    for c in &ex.elements {
                        if m.mul(&ba, c)? == one {
                            out.push(a.clone());
                            break 'search;
                        }
                    }
                }
            }
            Ok(out)
        }
        // Z^k and sign-rule verdicts: the only unit is the identity, and
        // E(N) = R(N) for a finite R(N).
        _ => Ok(vec![m.identity()]),
    }
}
