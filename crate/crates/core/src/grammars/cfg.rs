//! Conversion of a valence grammar whose control group is finite into a
//! context-free grammar over nonterminals `(A, σ)`, where `σ` ranges over
//! group sequences of bounded length.

use std::collections::{HashMap, VecDeque};

use super::grammar::{Production, Sym, ValenceGrammar};
use super::sequences::{count_sequences_up_to, in_joined_shuffle, render_seq, sequences_up_to, Seq};
use super::{Cfg, GrammarError};
use crate::analysis::GateOptions;
use crate::group::FiniteGroup;
use crate::monoid::Monoid;

/// Default limit on `|H^{<=m}|` for [`ValenceGrammar::to_cfg`].
pub const DEFAULT_MAX_SEQUENCES: usize = 512;

#[derive(Clone, Debug)]
pub struct CfgOptions {
    pub gate: GateOptions,
    /// Length bound `m` on valence sequences. When unset: 1 for an abelian
    /// control group, `2(|H|^3+1)` otherwise.
    pub sequence_bound: Option<usize>,
    pub max_sequences: usize,
}

impl Default for CfgOptions {
    fn default() -> Self {
        CfgOptions { gate: GateOptions::default(), sequence_bound: None, max_sequences: DEFAULT_MAX_SEQUENCES }
    }
}

/// The bound `m` used for the control group `h`.
pub fn sequence_bound(h: &FiniteGroup, opts: &CfgOptions) -> usize {
    opts.sequence_bound.unwrap_or_else(|| if h.is_abelian() { 1 } else { h.commutation_bound() })
}

fn node_name(g: &ValenceGrammar, h: &FiniteGroup, a: usize, s: &[usize]) -> String {
    format!("({},{})", g.nonterminals()[a], render_seq(h, s))
}

fn is_terminal_rule(g: &ValenceGrammar, p: &Production) -> bool {
    g.monoid().is_identity(&p.valence) && (p.rhs.is_empty() || matches!(p.rhs[..], [Sym::T(_)]))
}

/// Every tuple of `n` sequences drawn from `all`.
fn tuples(all: &[Seq], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..all.len()).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

impl ValenceGrammar {
    /// A context-free grammar (over the trivial monoid) with the same
    /// language. Refuses unless the finiteness gate answers finite; the input
    /// must be normalized.
    pub fn to_cfg(&self, opts: &CfgOptions) -> Result<Cfg, GrammarError> {
        if !self.is_normalized() {
            return Err(GrammarError::NotNormalized);
        }
        let cg = self.control_group(&opts.gate)?;
        let h = &cg.group;
        let g = self.prune_productions_outside(h.elems()).binarize();
        let m = sequence_bound(h, opts);
        let size = count_sequences_up_to(h.order(), m);
        if size > opts.max_sequences {
            return Err(GrammarError::ConstructionTooLarge { size, limit: opts.max_sequences });
        }
        let all = sequences_up_to(h, m);
        let mut by_lhs: Vec<Vec<&Production>> = vec![Vec::new(); g.nonterminals().len()];
        for p in g.productions() {
            by_lhs[p.lhs].push(p);
        }
        let pairs: Vec<Vec<Vec<usize>>> = (0..=2).map(|n| tuples(&all, n)).collect();

        let start = (g.start(), vec![h.identity()]);
        let mut cfg = ValenceGrammar::new(Monoid::trivial(), g.terminals().clone(), node_name(&g, h, start.0, &start.1))?;
        let one = cfg.monoid().identity();
        let mut index: HashMap<(usize, Seq), usize> = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some((a, sigma)) = queue.pop_front() {
            let src = index[&(a, sigma.clone())];
            let mut bodies: Vec<Vec<Sym>> = Vec::new();
            if sigma.is_empty() {
                for p in by_lhs[a].iter().filter(|p| is_terminal_rule(&g, p)) {
                    bodies.push(p.rhs.clone());
                }
            } else {
                if sigma == [h.identity()] {
                    for p in by_lhs[a].iter().filter(|p| is_terminal_rule(&g, p)) {
                        bodies.push(p.rhs.clone());
                    }
                }
                let (h1, rest) = (sigma[0], &sigma[1..]);
                for p in by_lhs[a].iter().filter(|p| p.rhs.iter().all(|s| matches!(s, Sym::N(_)))) {
                    let hp = h.index_of(&p.valence).expect("pruned to the control group");
                    let mut tau = vec![h.mul(h.inverse(hp), h1)];
                    tau.extend_from_slice(rest);
                    for tuple in &pairs[p.rhs.len()] {
                        let sigmas: Vec<&[usize]> = tuple.iter().map(|&i| all[i].as_slice()).collect();
                        let ok = in_joined_shuffle(h, &tau, &sigmas) || (h1 == hp && in_joined_shuffle(h, rest, &sigmas));
                        if !ok {
                            continue;
                        }
                        let mut body = Vec::new();
                        for (s, &i) in p.rhs.iter().zip(tuple) {
                            let Sym::N(b) = *s else { unreachable!() };
                            let key = (b, all[i].clone());
                            let idx = match index.get(&key) {
                                Some(&x) => x,
                                None => {
                                    let x = cfg.add_nonterminal(node_name(&g, h, b, &key.1))?;
                                    index.insert(key.clone(), x);
                                    queue.push_back(key);
                                    x
                                }
                            };
                            body.push(Sym::N(idx));
                        }
                        bodies.push(body);
                    }
                }
            }
            for body in bodies {
                if !cfg.productions().iter().any(|q| q.lhs == src && q.rhs == body) {
                    cfg.add_production(src, body, one.clone())?;
                }
            }
        }
        Ok(cfg.trim())
    }
}
