//! Right/left invertible elements, `E(M)`, divisibility and the dichotomy
//! classification, plus the finiteness gate for finitely generated
//! submonoids of catalog monoids.

mod gate;
pub mod lp;

use serde_json::{json, Value};
use thiserror::Error;

use crate::monoid::{Elem, FiniteTable, Monoid, MonoidError};

pub use gate::{
    control_group, explore_submonoid, units_finite_gate, units_finite_gate_genmap, ControlGroup, Exploration,
    GateAnswer, GateCertificate, GateMethod, GateOptions, GateVerdict, DEFAULT_NORM_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("{op} needs a finite-table monoid, got {kind}")]
    NotFinite { op: &'static str, kind: &'static str },
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("finiteness gate answered {}, refusing to convert", .0.answer.as_str())]
    GateRefused(Box<GateVerdict>),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

fn all(t: &FiniteTable) -> Vec<usize> {
    (0..t.order()).collect()
}

/// Closure of `gens` together with the identity under multiplication.
/// Sorted element indices.
pub fn submonoid_generated(t: &FiniteTable, gens: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; t.order()];
    let mut stack = vec![t.identity()];
    inside[t.identity()] = true;
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = t.mul(x, g);
            if !inside[y] {
                inside[y] = true;
                stack.push(y);
            }
        }
    }
    (0..t.order()).filter(|&i| inside[i]).collect()
}

/// `R(N)`: members of the submonoid `carrier` with a right inverse inside it.
pub fn right_invertibles_in(t: &FiniteTable, carrier: &[usize]) -> Vec<usize> {
    let one = t.identity();
    carrier.iter().copied().filter(|&a| carrier.iter().any(|&b| t.mul(a, b) == one)).collect()
}

pub fn left_invertibles_in(t: &FiniteTable, carrier: &[usize]) -> Vec<usize> {
    let one = t.identity();
    carrier.iter().copied().filter(|&a| carrier.iter().any(|&b| t.mul(b, a) == one)).collect()
}

/// `E(N) = {a | bac = 1 for some b, c in N}`.
pub fn e_set_in(t: &FiniteTable, carrier: &[usize]) -> Vec<usize> {
    let one = t.identity();
    carrier
        .iter()
        .copied()
        .filter(|&a| carrier.iter().any(|&b| carrier.iter().any(|&c| t.mul(t.mul(b, a), c) == one)))
        .collect()
}

pub fn right_invertibles(t: &FiniteTable) -> Vec<usize> {
    right_invertibles_in(t, &all(t))
}

pub fn left_invertibles(t: &FiniteTable) -> Vec<usize> {
    left_invertibles_in(t, &all(t))
}

pub fn e_set(t: &FiniteTable) -> Vec<usize> {
    e_set_in(t, &all(t))
}

/// All right inverses of `a`.
pub fn rinv_set(t: &FiniteTable, a: usize) -> Vec<usize> {
    (0..t.order()).filter(|&b| t.mul(a, b) == t.identity()).collect()
}

/// All left inverses of `a`.
pub fn linv_set(t: &FiniteTable, a: usize) -> Vec<usize> {
    (0..t.order()).filter(|&b| t.mul(b, a) == t.identity()).collect()
}

/// Whether `a ⊑ b`, i.e. `b = ac = da` for some `c, d`; returns `(c, d)`.
pub fn divides(t: &FiniteTable, a: usize, b: usize) -> Option<(usize, usize)> {
    let c = (0..t.order()).find(|&c| t.mul(a, c) == b)?;
    let d = (0..t.order()).find(|&d| t.mul(d, a) == b)?;
    Some((c, d))
}

/// The unit group `R = L = E` with two-sided inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCertificate {
    pub right_invertibles: Vec<Elem>,
    pub left_invertibles: Vec<Elem>,
    pub e_set: Vec<Elem>,
    /// `(a, a^-1)` for every member of the group.
    pub inverses: Vec<(Elem, Elem)>,
}

/// One element of an ascending chain `x_1 ⊑ x_2 ⊑ ...`, with an inverse
/// witness and the factors showing `x_i ⊑ x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub element: Elem,
    pub inverse: Elem,
    /// `(c, d)` with `x_{i+1} = x_i c = d x_i`.
    pub step: (Elem, Elem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCertificate {
    /// Prefix of a chain in `R(M)`; `inverse` is a right inverse.
    pub right_chain: Vec<ChainLink>,
    /// Prefix of a chain in `L(M)`; `inverse` is a left inverse.
    pub left_chain: Vec<ChainLink>,
    /// Closed-form description of the chains.
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DichotomyVerdict {
    FiniteGroup(GroupCertificate),
    InfiniteChain(ChainCertificate),
}

impl DichotomyVerdict {
    pub fn is_finite_group(&self) -> bool {
        matches!(self, DichotomyVerdict::FiniteGroup(_))
    }

    pub fn verify(&self, m: &Monoid) -> Result<(), AnalysisError> {
        match self {
            DichotomyVerdict::FiniteGroup(g) => g.verify(m),
            DichotomyVerdict::InfiniteChain(c) => c.verify(m),
        }
    }

    pub fn to_json(&self, m: &Monoid) -> Value {
        let r = |xs: &[Elem]| Value::Array(xs.iter().map(|x| m.render(x)).collect());
        match self {
            DichotomyVerdict::FiniteGroup(g) => json!({
                "case": "finite-group",
                "size": g.inverses.len(),
                "right_invertibles": r(&g.right_invertibles),
                "left_invertibles": r(&g.left_invertibles),
                "e_set": r(&g.e_set),
                "inverses": g.inverses.iter()
                    .map(|(a, b)| json!({"element": m.render(a), "inverse": m.render(b)}))
                    .collect::<Vec<_>>(),
            }),
            DichotomyVerdict::InfiniteChain(c) => {
                let links = |ls: &[ChainLink]| {
                    ls.iter()
                        .map(|l| {
                            json!({"element": m.render(&l.element), "inverse": m.render(&l.inverse),
                                   "c": m.render(&l.step.0), "d": m.render(&l.step.1)})
                        })
                        .collect::<Vec<_>>()
                };
                json!({
                    "case": "infinite-chain",
                    "basis": "class-rule",
                    "rule": c.rule,
                    "right_chain": links(&c.right_chain),
                    "left_chain": links(&c.left_chain),
                })
            }
        }
    }
}

impl GroupCertificate {
    pub fn verify(&self, m: &Monoid) -> Result<(), AnalysisError> {
        let fail = |s: String| Err(AnalysisError::Certificate(s));
        let mut r = self.right_invertibles.clone();
        let mut l = self.left_invertibles.clone();
        let mut e = self.e_set.clone();
        r.sort();
        l.sort();
        e.sort();
        if r != l || r != e {
            return fail("R, L and E differ".into());
        }
        let members: Vec<&Elem> = self.inverses.iter().map(|(a, _)| a).collect();
        let mut sorted: Vec<Elem> = members.iter().map(|a| (*a).clone()).collect();
        sorted.sort();
        if sorted != r {
            return fail("inverse table does not cover the group".into());
        }
        let one = m.identity();
        if !r.contains(&one) {
            return fail("identity missing".into());
        }
        for (a, b) in &self.inverses {
            if m.mul(a, b)? != one || m.mul(b, a)? != one {
                return fail(format!("{} is not a two-sided inverse of {}", m.display(b), m.display(a)));
            }
            if !r.contains(b) {
                return fail(format!("inverse {} lies outside the group", m.display(b)));
            }
        }
        for a in &r {
            for b in &r {
                if !r.contains(&m.mul(a, b)?) {
                    return fail(format!("{} {} leaves the group", m.display(a), m.display(b)));
                }
            }
        }
        Ok(())
    }
}

impl ChainCertificate {
    pub fn verify(&self, m: &Monoid) -> Result<(), AnalysisError> {
        let one = m.identity();
        let check = |chain: &[ChainLink], right: bool| -> Result<(), AnalysisError> {
            let fail = |s: String| Err(AnalysisError::Certificate(s));
            for (i, x) in chain.iter().enumerate() {
                let prod = if right { m.mul(&x.element, &x.inverse)? } else { m.mul(&x.inverse, &x.element)? };
                if prod != one {
                    return fail(format!("bad inverse witness at position {i}"));
                }
                if let Some(next) = chain.get(i + 1) {
                    let (c, d) = &x.step;
                    if m.mul(&x.element, c)? != next.element || m.mul(d, &x.element)? != next.element {
                        return fail(format!("divisibility witness fails at position {i}"));
                    }
                }
                for (j, y) in chain.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    if x.element == y.element {
                        return fail(format!("chain elements {i} and {j} coincide"));
                    }
                    // disjoint inverse sets: x's witness must not invert y
                    let cross = if right { m.mul(&y.element, &x.inverse)? } else { m.mul(&x.inverse, &y.element)? };
                    if cross == one {
                        return fail(format!("inverse of element {i} also inverts element {j}"));
                    }
                }
            }
            Ok(())
        };
        check(&self.right_chain, true)?;
        check(&self.left_chain, false)
    }
}

/// The dichotomy for a finite monoid. A finite carrier always lands in the
/// first case; the certificate is validated before it is returned.
pub fn classify_dichotomy(t: &FiniteTable) -> Result<DichotomyVerdict, AnalysisError> {
    let m = Monoid::Finite(t.clone());
    let el = |xs: Vec<usize>| xs.into_iter().map(Elem::Finite).collect::<Vec<_>>();
    let r = right_invertibles(t);
    let inverses = r
        .iter()
        .map(|&a| {
            let inv = (0..t.order())
                .find(|&b| t.mul(a, b) == t.identity() && t.mul(b, a) == t.identity())
                .ok_or_else(|| AnalysisError::Certificate(format!("{} has no two-sided inverse", t.name(a))))?;
            Ok((Elem::Finite(a), Elem::Finite(inv)))
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let cert = GroupCertificate {
        right_invertibles: el(r),
        left_invertibles: el(left_invertibles(t)),
        e_set: el(e_set(t)),
        inverses,
    };
    cert.verify(&m)?;
    Ok(DichotomyVerdict::FiniteGroup(cert))
}

/// Default number of chain elements listed in infinite-chain certificates.
pub const CHAIN_PREFIX: usize = 6;

/// The dichotomy for any catalog monoid. Infinite cases carry finite chain
/// prefixes generated by a closed-form rule.
pub fn classify(m: &Monoid) -> Result<DichotomyVerdict, AnalysisError> {
    let verdict = match m {
        Monoid::Finite(t) => return classify_dichotomy(t),
        Monoid::IntVectors { rank: 0 } => {
            let one = m.identity();
            DichotomyVerdict::FiniteGroup(GroupCertificate {
                right_invertibles: vec![one.clone()],
                left_invertibles: vec![one.clone()],
                e_set: vec![one.clone()],
                inverses: vec![(one.clone(), one)],
            })
        }
        Monoid::IntVectors { rank } => {
            let unit = |k: i64| {
                let mut v = vec![0; *rank];
                v[0] = k;
                Elem::Vector(v)
            };
            let link = |i: i64| ChainLink { element: unit(i), inverse: unit(-i), step: (unit(1), unit(1)) };
            let chain: Vec<ChainLink> = (1..=CHAIN_PREFIX as i64).map(link).collect();
            DichotomyVerdict::InfiniteChain(ChainCertificate {
                right_chain: chain.clone(),
                left_chain: chain,
                rule: "x_b = b*e1 with inverse -b*e1 (c = d = e1)".into(),
            })
        }
        Monoid::Bicyclic { power } => {
            let at = |pair: (u64, u64)| {
                let mut v = vec![(0, 0); *power];
                v[0] = pair;
                Elem::Bicyclic(v)
            };
            let right = (1..=CHAIN_PREFIX as u64)
                .map(|b| ChainLink { element: at((0, b)), inverse: at((b, 0)), step: (at((0, 1)), at((0, 1))) })
                .collect();
            let left = (1..=CHAIN_PREFIX as u64)
                .map(|b| ChainLink { element: at((b, 0)), inverse: at((0, b)), step: (at((1, 0)), at((1, 0))) })
                .collect();
            DichotomyVerdict::InfiniteChain(ChainCertificate {
                right_chain: right,
                left_chain: left,
                rule: "right chain p^b with right inverse q^b; left chain q^b with left inverse p^b".into(),
            })
        }
        Monoid::Product(fs) => {
            let parts = fs.iter().map(classify).collect::<Result<Vec<_>, _>>()?;
            if let Some(pos) = parts.iter().position(|v| !v.is_finite_group()) {
                let DichotomyVerdict::InfiniteChain(c) = &parts[pos] else { unreachable!() };
                let lift = |e: &Elem| {
                    let mut comps: Vec<Elem> = fs.iter().map(Monoid::identity).collect();
                    comps[pos] = e.clone();
                    Elem::Tuple(comps)
                };
                let lift_chain = |ls: &[ChainLink]| {
                    ls.iter()
                        .map(|l| ChainLink {
                            element: lift(&l.element),
                            inverse: lift(&l.inverse),
                            step: (lift(&l.step.0), lift(&l.step.1)),
                        })
                        .collect()
                };
                DichotomyVerdict::InfiniteChain(ChainCertificate {
                    right_chain: lift_chain(&c.right_chain),
                    left_chain: lift_chain(&c.left_chain),
                    rule: format!("factor {pos}: {}", c.rule),
                })
            } else {
                let groups: Vec<&GroupCertificate> = parts
                    .iter()
                    .map(|v| match v {
                        DichotomyVerdict::FiniteGroup(g) => g,
                        DichotomyVerdict::InfiniteChain(_) => unreachable!(),
                    })
                    .collect();
                let mut pairs: Vec<(Vec<Elem>, Vec<Elem>)> = vec![(vec![], vec![])];
                for g in &groups {
                    pairs = pairs
                        .into_iter()
                        .flat_map(|(a, b)| {
                            g.inverses.iter().map(move |(x, y)| {
                                let mut a2 = a.clone();
                                let mut b2 = b.clone();
                                a2.push(x.clone());
                                b2.push(y.clone());
                                (a2, b2)
                            })
                        })
                        .collect();
                }
                let inverses: Vec<(Elem, Elem)> =
                    pairs.into_iter().map(|(a, b)| (Elem::Tuple(a), Elem::Tuple(b))).collect();
                let mut units: Vec<Elem> = inverses.iter().map(|(a, _)| a.clone()).collect();
                units.sort();
                DichotomyVerdict::FiniteGroup(GroupCertificate {
                    right_invertibles: units.clone(),
                    left_invertibles: units.clone(),
                    e_set: units,
                    inverses,
                })
            }
        }
    };
    verdict.verify(m)?;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn table(m: &Monoid) -> &FiniteTable {
        m.as_finite().unwrap()
    }

    #[test]
    fn closures() {
        let z2 = Monoid::cyclic(2);
        assert_eq!(submonoid_generated(table(&z2), &[1]), vec![0, 1]);
        assert_eq!(submonoid_generated(table(&z2), &[]), vec![0]);
        let n = catalog::zero_square();
        assert_eq!(submonoid_generated(table(&n), &[1]), vec![0, 1, 2]);
    }

    #[test]
    fn invertible_sets() {
        let z2 = Monoid::cyclic(2);
        assert_eq!(right_invertibles(table(&z2)), vec![0, 1]);
        let n = catalog::zero_square();
        let t = table(&n);
        assert_eq!(right_invertibles(t), vec![0]);
        assert_eq!(left_invertibles(t), vec![0]);
        assert_eq!(e_set(t), vec![0]);
        assert_eq!(rinv_set(table(&z2), 1), vec![1]);
        for m in catalog::corpus() {
            assert!(rinv_set(table(&m), table(&m).identity()).contains(&table(&m).identity()));
        }
    }

    #[test]
    fn divisibility() {
        let n = catalog::zero_square();
        let t = table(&n);
        assert_eq!(divides(t, 1, 1), Some((0, 0)));
        assert_eq!(divides(t, 1, 2), Some((1, 1)));
        assert_eq!(divides(t, 2, 1), None);
        let z2 = Monoid::cyclic(2);
        assert_eq!(divides(table(&z2), 1, 0), Some((1, 1)));
    }

    #[test]
    fn finite_classification() {
        let v = classify_dichotomy(table(&Monoid::trivial())).unwrap();
        let DichotomyVerdict::FiniteGroup(g) = v else { panic!() };
        assert_eq!(g.inverses.len(), 1);
        let DichotomyVerdict::FiniteGroup(g) = classify_dichotomy(table(&Monoid::cyclic(2))).unwrap() else {
            panic!()
        };
        assert_eq!(g.inverses.len(), 2);
    }

    #[test]
    fn opposite_swaps_r_and_l() {
        for m in catalog::corpus() {
            let op = m.opposite().unwrap();
            assert_eq!(right_invertibles(table(&op)), left_invertibles(table(&m)));
            assert_eq!(left_invertibles(table(&op)), right_invertibles(table(&m)));
        }
    }

    #[test]
    fn infinite_catalog_classes() {
        for m in [Monoid::integers(2), Monoid::bicyclic(1).unwrap(), Monoid::bicyclic(2).unwrap()] {
            let v = classify(&m).unwrap();
            assert!(!v.is_finite_group(), "{m}");
            v.verify(&m).unwrap();
        }
        let p = Monoid::direct_product(Monoid::cyclic(2), Monoid::bicyclic(1).unwrap());
        assert!(!classify(&p).unwrap().is_finite_group());
        let q = Monoid::direct_product(Monoid::cyclic(2), catalog::zero_square());
        let DichotomyVerdict::FiniteGroup(g) = classify(&q).unwrap() else { panic!() };
        assert_eq!(g.inverses.len(), 2);
        assert!(classify(&Monoid::integers(0)).unwrap().is_finite_group());
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let m = Monoid::bicyclic(1).unwrap();
        let DichotomyVerdict::InfiniteChain(mut c) = classify(&m).unwrap() else { panic!() };
        c.right_chain[1].inverse = c.right_chain[0].inverse.clone();
        assert!(c.verify(&m).is_err());
        let z2 = Monoid::cyclic(2);
        let DichotomyVerdict::FiniteGroup(mut g) = classify(&z2).unwrap() else { panic!() };
        g.inverses[1].1 = Elem::Finite(0);
        assert!(g.verify(&z2).is_err());
    }
}
