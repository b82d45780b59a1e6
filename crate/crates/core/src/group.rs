//! Finite groups with a compact Cayley table over local indices `0..order`.
//! These are the control groups `E(N)` that the conversions to classical
//! devices fold into states or nonterminals.

use std::collections::HashMap;

use thiserror::Error;

use crate::monoid::{Elem, Monoid, MonoidError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("the element set does not contain the identity")]
    MissingIdentity,
    #[error("the element set is not closed: {0} x {1} leaves it")]
    NotClosed(String, String),
    #[error("element {0} has no inverse in the set")]
    NoInverse(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    elems: Vec<Elem>,
    names: Vec<String>,
    identity: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds the group carried by `elems` inside `monoid`, checking that the
    /// set contains the identity, is closed and has two-sided inverses.
    pub fn from_elements(monoid: &Monoid, elems: Vec<Elem>) -> Result<FiniteGroup, GroupError> {
        let mut elems = elems;
        elems.sort();
        elems.dedup();
        let index: HashMap<&Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let one = monoid.identity();
        let identity = *index.get(&one).ok_or(GroupError::MissingIdentity)?;
        let n = elems.len();
        let mut table = vec![0; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = monoid.mul(a, b)?;
                table[i * n + j] = *index
                    .get(&c)
                    .ok_or_else(|| GroupError::NotClosed(monoid.display(a), monoid.display(b)))?;
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            inverse[i] = (0..n)
                .find(|&j| table[i * n + j] == identity && table[j * n + i] == identity)
                .ok_or_else(|| GroupError::NoInverse(monoid.display(&elems[i])))?;
        }
        let names = elems.iter().map(|e| monoid.display(e)).collect();
        drop(index);
        Ok(FiniteGroup { elems, names, identity, table, inverse })
    }

    /// The whole carrier of a finite monoid, which must be a group.
    pub fn from_monoid(monoid: &Monoid) -> Result<FiniteGroup, GroupError> {
        let elems = monoid
            .elements()
            .ok_or(MonoidError::Unsupported { op: "enumerating elements", kind: monoid.kind_name() })?;
        FiniteGroup::from_elements(monoid, elems)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elems.len() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn product(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn elem(&self, a: usize) -> &Elem {
        &self.elems[a]
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elems.binary_search(e).ok()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The constant `2(|G|^3 + 1)` of the commutation lemma: any `n >= m`
    /// pairs `(g_i, h_i)` admit `k < l` with
    /// `g_k h_k ... g_l h_l = g_k ... g_l h_k ... h_l`.
    pub fn commutation_bound(&self) -> usize {
        let n = self.order();
        2 * (n * n * n + 1)
    }
}
