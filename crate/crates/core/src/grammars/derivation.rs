//! Derivations, their derivation trees, and the converse direction from a
//! derivation tree with an evaluation back to a derivation.

use super::grammar::{Sym, ValenceGrammar};
use super::tree::{Evaluation, ValenceTree};
use super::GrammarError;
use crate::monoid::Elem;
use crate::words::Word;

/// Rewrites the nonterminal at `position` of the current sentential form
/// with production `production`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub position: usize,
    pub production: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    N(usize),
    T(usize),
    Lambda,
}

/// A valence tree with node labels, plus the production applied at each
/// nonterminal node. Children are stored left to right.
#[derive(Clone, Debug)]
pub struct DerivationTree {
    pub tree: ValenceTree,
    pub labels: Vec<Label>,
    pub productions: Vec<Option<usize>>,
    /// The evaluation induced by the derivation: nodes in the order their
    /// productions were applied, each followed by its leaf children.
    pub order: Vec<usize>,
}

fn invalid(step: usize, reason: impl Into<String>) -> GrammarError {
    GrammarError::InvalidDerivation { step, reason: reason.into() }
}

/// Builds the derivation tree of a complete derivation from the start
/// symbol.
pub fn derivation_tree_of(g: &ValenceGrammar, steps: &[Step]) -> Result<DerivationTree, GrammarError> {
    let m = g.monoid();
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut labels = vec![Label::N(g.start())];
    let mut valences: Vec<Elem> = vec![m.identity()];
    let mut productions: Vec<Option<usize>> = vec![None];
    let mut order = Vec::new();
    // the sentential form as node ids
    let mut form: Vec<usize> = vec![0];
    for (k, st) in steps.iter().enumerate() {
        let node = *form.get(st.position).ok_or_else(|| invalid(k, format!("position {} is past the end", st.position)))?;
        let Label::N(a) = labels[node] else {
            return Err(invalid(k, format!("position {} holds a terminal", st.position)));
        };
        let p = g.productions().get(st.production).ok_or_else(|| invalid(k, format!("no production {}", st.production)))?;
        if p.lhs != a {
            return Err(invalid(k, format!("production {} rewrites {}, not {}", st.production, g.nonterminals()[p.lhs], g.nonterminals()[a])));
        }
        valences[node] = p.valence.clone();
        productions[node] = Some(st.production);
        order.push(node);
        let mut created = Vec::new();
        let mut leaves = Vec::new();
        let mut push = |label: Label| {
            parent.push(Some(node));
            labels.push(label);
            valences.push(m.identity());
            productions.push(None);
            labels.len() - 1
        };
        if p.rhs.is_empty() {
            leaves.push(push(Label::Lambda));
        }
        for s in &p.rhs {
            let id = match *s {
                Sym::N(b) => push(Label::N(b)),
                Sym::T(t) => {
                    let id = push(Label::T(t));
                    leaves.push(id);
                    id
                }
            };
            created.push(id);
        }
        order.extend(&leaves);
        form.splice(st.position..st.position + 1, created);
    }
    if let Some(&x) = form.iter().find(|&&x| matches!(labels[x], Label::N(_))) {
        let Label::N(a) = labels[x] else { unreachable!() };
        return Err(invalid(steps.len(), format!("{} is never rewritten", g.nonterminals()[a])));
    }
    let tree = ValenceTree::new(parent, valences)?;
    Ok(DerivationTree { tree, labels, productions, order })
}

impl DerivationTree {
    /// Left-to-right terminal leaves.
    pub fn yield_word(&self) -> Word {
        let mut out = Vec::new();
        let mut stack = vec![self.tree.root()];
        while let Some(x) = stack.pop() {
            if let Label::T(t) = self.labels[x] {
                out.push(t);
            }
            stack.extend(self.tree.children(x).iter().rev());
        }
        out
    }

    /// A derivation applying the productions in the order `order`, which
    /// must be a linear extension of the tree.
    pub fn derivation_of(&self, order: &[usize]) -> Result<Vec<Step>, GrammarError> {
        if !self.tree.is_linear_extension(order) {
            return Err(super::TreeError::NotLinearExtension("derivation order".into()).into());
        }
        let mut form = vec![self.tree.root()];
        let mut steps = Vec::new();
        for &x in order {
            let Some(production) = self.productions[x] else { continue };
            let position = form.iter().position(|&y| y == x).expect("parents are expanded first");
            steps.push(Step { position, production });
            let kids: Vec<usize> =
                self.tree.children(x).iter().copied().filter(|&c| self.labels[c] != Label::Lambda).collect();
            form.splice(position..position + 1, kids);
        }
        Ok(steps)
    }
}

pub fn yield_of(dt: &DerivationTree) -> Word {
    dt.yield_word()
}

/// Evaluates `order` on the tree of `dt` in the grammar's monoid.
pub fn tree_value_check(g: &ValenceGrammar, dt: &DerivationTree, order: &[usize]) -> Result<Evaluation, GrammarError> {
    Ok(dt.tree.evaluate(g.monoid(), order)?)
}
