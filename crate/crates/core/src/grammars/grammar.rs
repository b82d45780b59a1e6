use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::GrammarError;
use crate::analysis::{control_group, ControlGroup, GateOptions};
use crate::load::{self, LoadError};
use crate::machines::{LangSample, SearchBudget};
use crate::monoid::{parse_valence, Elem, GenMap, Monoid, MonoidError};
use crate::words::{greedy_split, Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    N(usize),
    T(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Sym>,
    pub valence: Elem,
}

/// A context-free grammar whose productions carry monoid valences. A word is
/// generated when some derivation of it multiplies, in the order the
/// productions are applied, to the identity.
#[derive(Clone, Debug)]
pub struct ValenceGrammar {
    monoid: Monoid,
    generators: Option<GenMap>,
    nonterminals: Vec<String>,
    terminals: Alphabet,
    start: usize,
    productions: Vec<Production>,
}

#[derive(Serialize, Deserialize)]
struct GrammarFile {
    monoid: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Value>,
    nonterminals: Vec<String>,
    terminals: Vec<String>,
    start: String,
    productions: Vec<ProductionFile>,
}

#[derive(Serialize, Deserialize)]
struct ProductionFile {
    lhs: String,
    #[serde(default)]
    rhs: Option<String>,
    #[serde(default)]
    valence: Value,
}

impl ValenceGrammar {
    /// A grammar with the single nonterminal `start` and no productions.
    pub fn new(monoid: Monoid, terminals: Alphabet, start: impl Into<String>) -> Result<Self, GrammarError> {
        let start = start.into();
        if terminals.index_of(&start).is_some() {
            return Err(GrammarError::Overlap(start));
        }
        Ok(ValenceGrammar {
            monoid,
            generators: None,
            nonterminals: vec![start],
            terminals,
            start: 0,
            productions: Vec::new(),
        })
    }

    pub fn with_generators(mut self, gm: GenMap) -> Self {
        self.generators = Some(gm);
        self
    }

    /// Index of the nonterminal `name`, adding it if new.
    pub fn add_nonterminal(&mut self, name: impl Into<String>) -> Result<usize, GrammarError> {
        let name = name.into();
        if self.terminals.index_of(&name).is_some() {
            return Err(GrammarError::Overlap(name));
        }
        if let Some(i) = self.nonterminal_index(&name) {
            return Ok(i);
        }
        self.nonterminals.push(name);
        Ok(self.nonterminals.len() - 1)
    }

    pub fn add_production(&mut self, lhs: usize, rhs: Vec<Sym>, valence: Elem) -> Result<(), GrammarError> {
        if !self.monoid.contains(&valence) {
            return Err(MonoidError::Mismatch { kind: self.monoid.kind_name(), elem: format!("{valence:?}") }.into());
        }
        let n = self.nonterminals.len();
        let t = self.terminals.len();
        let ok = lhs < n
            && rhs.iter().all(|s| match *s {
                Sym::N(i) => i < n,
                Sym::T(i) => i < t,
            });
        if !ok {
            return Err(GrammarError::UnknownSymbol(format!("production for index {lhs}")));
        }
        self.productions.push(Production { lhs, rhs, valence });
        Ok(())
    }

    /// Parses a body such as `"a S b"` or `"aSb"` into symbols.
    pub fn parse_rhs(&self, s: &str) -> Result<Vec<Sym>, GrammarError> {
        let s = s.trim();
        if s.is_empty() || s == "λ" {
            return Ok(Vec::new());
        }
        let lookup = |tok: &str| -> Result<Sym, GrammarError> {
            if let Some(i) = self.nonterminal_index(tok) {
                Ok(Sym::N(i))
            } else if let Some(i) = self.terminals.index_of(tok) {
                Ok(Sym::T(i))
            } else {
                Err(GrammarError::UnknownSymbol(tok.to_string()))
            }
        };
        if s.contains(char::is_whitespace) {
            return s.split_whitespace().map(lookup).collect();
        }
        let names: Vec<String> = self.nonterminals.iter().chain(self.terminals.symbols()).cloned().collect();
        let idx = greedy_split(s, &names).ok_or_else(|| GrammarError::UnknownSymbol(s.to_string()))?;
        let k = self.nonterminals.len();
        Ok(idx.into_iter().map(|i| if i < k { Sym::N(i) } else { Sym::T(i - k) }).collect())
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn generators(&self) -> Option<&GenMap> {
        self.generators.as_ref()
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn valences(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self.productions.iter().map(|p| p.valence.clone()).collect();
        set.into_iter().collect()
    }

    pub fn render_sym(&self, s: Sym) -> &str {
        match s {
            Sym::N(i) => &self.nonterminals[i],
            Sym::T(i) => self.terminals.symbol(i),
        }
    }

    pub fn render_rhs(&self, rhs: &[Sym]) -> String {
        rhs.iter().map(|&s| self.render_sym(s)).collect::<Vec<_>>().join(" ")
    }

    pub fn from_json(v: &Value, base: Option<&Path>) -> Result<Self, GrammarError> {
        let file: GrammarFile =
            serde_json::from_value(v.clone()).map_err(|e| LoadError::Schema(format!("grammar: {e}")))?;
        Self::from_file(file, base)
    }

    pub fn load(path: &Path) -> Result<Self, GrammarError> {
        let file: GrammarFile = load::read_file(path)?;
        Self::from_file(file, load::base_dir(path))
    }

    fn from_file(file: GrammarFile, base: Option<&Path>) -> Result<Self, GrammarError> {
        let monoid = load::resolve_monoid(&file.monoid, base)?;
        let generators = load::resolve_generators(&monoid, file.generators.as_ref(), base)?;
        let terminals = Alphabet::new(file.terminals)?;
        let mut g = ValenceGrammar::new(monoid, terminals, file.start.clone())?;
        g.generators = generators;
        g.nonterminals.clear();
        for n in file.nonterminals {
            if g.nonterminal_index(&n).is_some() {
                return Err(GrammarError::UnknownSymbol(format!("{n} declared twice")));
            }
            g.add_nonterminal(n)?;
        }
        g.start = g.nonterminal_index(&file.start).ok_or_else(|| GrammarError::UnknownSymbol(file.start.clone()))?;
        for p in file.productions {
            let lhs = g.nonterminal_index(&p.lhs).ok_or_else(|| GrammarError::UnknownSymbol(p.lhs.clone()))?;
            let rhs = g.parse_rhs(p.rhs.as_deref().unwrap_or(""))?;
            let valence = parse_valence(&g.monoid, g.generators.as_ref(), &p.valence)?;
            g.add_production(lhs, rhs, valence)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Value {
        let file = GrammarFile {
            monoid: self.monoid.to_json(),
            generators: self.generators.as_ref().map(|g| g.to_json(&self.monoid)),
            nonterminals: self.nonterminals.clone(),
            terminals: self.terminals.symbols().to_vec(),
            start: self.nonterminals[self.start].clone(),
            productions: self
                .productions
                .iter()
                .map(|p| ProductionFile {
                    lhs: self.nonterminals[p.lhs].clone(),
                    rhs: Some(self.render_rhs(&p.rhs)),
                    valence: if self.monoid.is_identity(&p.valence) {
                        Value::Null
                    } else {
                        self.monoid.render(&p.valence)
                    },
                })
                .collect(),
        };
        serde_json::to_value(file).expect("grammar serializes")
    }

    fn fresh_name(&self, base: String) -> String {
        let mut name = base;
        while self.nonterminal_index(&name).is_some() || self.terminals.index_of(&name).is_some() {
            name.push('\'');
        }
        name
    }

    /// Whether every production is `(A -> w; h)` with `w` over nonterminals,
    /// or `(A -> t; 1)` with `t` a single terminal.
    pub fn is_normalized(&self) -> bool {
        self.productions.iter().all(|p| {
            p.rhs.iter().all(|s| matches!(s, Sym::N(_)))
                || (p.rhs.len() == 1 && self.monoid.is_identity(&p.valence))
        })
    }

    /// Lifts terminals out of mixed bodies through fresh nonterminals `A_t`
    /// with the single production `(A_t -> t; 1)`.
    pub fn normalize(&self) -> ValenceGrammar {
        let mut out = ValenceGrammar { productions: Vec::new(), ..self.clone() };
        let mut lifted: HashMap<usize, usize> = HashMap::new();
        let one = self.monoid.identity();
        for p in &self.productions {
            let terminal_form = p.rhs.len() == 1 && self.monoid.is_identity(&p.valence);
            if terminal_form || p.rhs.iter().all(|s| matches!(s, Sym::N(_))) {
                out.productions.push(p.clone());
                continue;
            }
            let rhs = p
                .rhs
                .iter()
                .map(|&s| match s {
                    Sym::N(_) => s,
                    Sym::T(t) => Sym::N(*lifted.entry(t).or_insert_with(|| {
                        let name = out.fresh_name(format!("A_{}", self.terminals.symbol(t)));
                        out.nonterminals.push(name);
                        let a = out.nonterminals.len() - 1;
                        out.productions.push(Production { lhs: a, rhs: vec![Sym::T(t)], valence: one.clone() });
                        a
                    })),
                })
                .collect();
            out.productions.push(Production { lhs: p.lhs, rhs, valence: p.valence.clone() });
        }
        out
    }

    /// Splits nonterminal bodies longer than two into chains
    /// `A -> B1 A'(h), A' -> B2 A''(1), ...`.
    pub fn binarize(&self) -> ValenceGrammar {
        let mut out = ValenceGrammar { productions: Vec::new(), ..self.clone() };
        let one = self.monoid.identity();
        for (k, p) in self.productions.iter().enumerate() {
            let n = p.rhs.len();
            if n <= 2 || !p.rhs.iter().all(|s| matches!(s, Sym::N(_))) {
                out.productions.push(p.clone());
                continue;
            }
            let mut lhs = p.lhs;
            for i in 0..n - 2 {
                let name = out.fresh_name(format!("{}~{k}.{}", self.nonterminals[p.lhs], i + 1));
                out.nonterminals.push(name);
                let next = out.nonterminals.len() - 1;
                let valence = if i == 0 { p.valence.clone() } else { one.clone() };
                out.productions.push(Production { lhs, rhs: vec![p.rhs[i], Sym::N(next)], valence });
                lhs = next;
            }
            let valence = if n == 2 { p.valence.clone() } else { one.clone() };
            out.productions.push(Production { lhs, rhs: p.rhs[n - 2..].to_vec(), valence });
        }
        out
    }

    pub fn control_group(&self, opts: &GateOptions) -> Result<ControlGroup, GrammarError> {
        Ok(control_group(&self.monoid, &self.valences(), opts)?)
    }

    /// Keeps only productions whose valence is listed.
    pub fn prune_productions_outside(&self, keep: &[Elem]) -> ValenceGrammar {
        let keep: HashSet<&Elem> = keep.iter().collect();
        let productions = self.productions.iter().filter(|p| keep.contains(&p.valence)).cloned().collect();
        ValenceGrammar { productions, ..self.clone() }
    }

    /// Shortest terminal yield of each nonterminal, ignoring valences;
    /// `None` for nonterminals that derive no terminal word.
    pub fn min_yields(&self) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                let mut total = Some(0usize);
                for s in &p.rhs {
                    total = match (total, s) {
                        (Some(x), Sym::T(_)) => Some(x + 1),
                        (Some(x), Sym::N(b)) => best[*b].map(|y| x + y),
                        (None, _) => None,
                    };
                }
                if let Some(x) = total {
                    if best[p.lhs].map_or(true, |y| x < y) {
                        best[p.lhs] = Some(x);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best;
            }
        }
    }

    /// Removes nonterminals that are unproductive or unreachable from the
    /// start symbol, together with their productions. The start symbol is
    /// always kept.
    pub fn trim(&self) -> ValenceGrammar {
        let productive: Vec<bool> = self.min_yields().iter().map(|x| x.is_some()).collect();
        let usable = |p: &Production| {
            productive[p.lhs] && p.rhs.iter().all(|s| matches!(s, Sym::T(_)) || matches!(s, Sym::N(b) if productive[*b]))
        };
        let mut reachable = vec![false; self.nonterminals.len()];
        reachable[self.start] = true;
        let mut queue = VecDeque::from([self.start]);
        while let Some(a) = queue.pop_front() {
            for p in self.productions.iter().filter(|p| p.lhs == a && usable(p)) {
                for s in &p.rhs {
                    if let Sym::N(b) = *s {
                        if !std::mem::replace(&mut reachable[b], true) {
                            queue.push_back(b);
                        }
                    }
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nonterminals.len()];
        let mut nonterminals = Vec::new();
        for (i, name) in self.nonterminals.iter().enumerate() {
            if reachable[i] && (productive[i] || i == self.start) {
                remap[i] = nonterminals.len();
                nonterminals.push(name.clone());
            }
        }
        let productions = self
            .productions
            .iter()
            .filter(|p| reachable[p.lhs] && usable(p))
            .map(|p| Production {
                lhs: remap[p.lhs],
                rhs: p.rhs.iter().map(|&s| if let Sym::N(b) = s { Sym::N(remap[b]) } else { s }).collect(),
                valence: p.valence.clone(),
            })
            .collect();
        ValenceGrammar { nonterminals, start: remap[self.start], productions, ..self.clone() }
    }

    /// Terminal words of length at most `maxlen` generated with value 1.
    ///
    /// Over a commutative monoid the order of application is irrelevant and
    /// a fixpoint over `(nonterminal, word, element)` triples is used; the
    /// step count is the number of productions in the derivation tree.
    /// Otherwise sentential forms are expanded at every occurrence, up to
    /// `max_steps` (or a default depending on `maxlen` when unset).
    pub fn bounded_language(&self, maxlen: usize, budget: &SearchBudget) -> Result<LangSample, GrammarError> {
        if self.monoid.is_commutative() {
            self.bounded_language_commutative(maxlen, budget)
        } else {
            self.bounded_language_forms(maxlen, budget)
        }
    }

    /// The default derivation length used by the sentential-form search.
    pub fn default_max_steps(&self, maxlen: usize) -> usize {
        4 * (maxlen + 1) + 2 * self.nonterminals.len()
    }

    fn bounded_language_commutative(&self, maxlen: usize, budget: &SearchBudget) -> Result<LangSample, GrammarError> {
        type Table = HashMap<(Word, Elem), usize>;
        let m = &self.monoid;
        let mut tables: Vec<Table> = vec![HashMap::new(); self.nonterminals.len()];
        let mut truncated = false;
        loop {
            let mut changed = false;
            for p in &self.productions {
                let mut partial: Table = HashMap::from([((Vec::new(), p.valence.clone()), 1)]);
                for s in &p.rhs {
                    let mut next: Table = HashMap::new();
                    for ((w, e), k) in &partial {
                        match *s {
                            Sym::T(t) => {
                                if w.len() < maxlen {
                                    let mut w2 = w.clone();
                                    w2.push(t);
                                    next.insert((w2, e.clone()), *k);
                                }
                            }
                            Sym::N(b) => {
                                for ((w2, e2), k2) in &tables[b] {
                                    if w.len() + w2.len() > maxlen {
                                        continue;
                                    }
                                    let e3 = m.mul(e, e2)?;
                                    let steps = k + k2;
                                    if !budget.allows(m.norm(&e3), steps) {
                                        truncated = true;
                                        continue;
                                    }
                                    let mut w3 = w.clone();
                                    w3.extend(w2);
                                    let slot = next.entry((w3, e3)).or_insert(usize::MAX);
                                    *slot = (*slot).min(steps);
                                }
                            }
                        }
                    }
                    partial = next;
                }
                for (key, k) in partial {
                    if !budget.allows(m.norm(&key.1), k) {
                        truncated = true;
                        continue;
                    }
                    let slot = tables[p.lhs].entry(key).or_insert(usize::MAX);
                    if k < *slot {
                        *slot = k;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let one = m.identity();
        let words =
            tables[self.start].keys().filter(|(_, e)| *e == one).map(|(w, _)| w.clone()).collect::<Vec<_>>();
        Ok(LangSample::new(maxlen, words, !truncated))
    }

    fn bounded_language_forms(&self, maxlen: usize, budget: &SearchBudget) -> Result<LangSample, GrammarError> {
        let m = &self.monoid;
        let max_steps = budget.max_steps.unwrap_or_else(|| self.default_max_steps(maxlen));
        let min_yield = self.min_yields();
        let mut by_lhs: Vec<Vec<&Production>> = vec![Vec::new(); self.nonterminals.len()];
        for p in &self.productions {
            by_lhs[p.lhs].push(p);
        }
        let one = m.identity();
        let mut words = Vec::new();
        let mut truncated = false;
        let start = (vec![Sym::N(self.start)], one.clone());
        let mut seen: HashSet<(Vec<Sym>, Elem)> = HashSet::from([start.clone()]);
        let mut layer = vec![start];
        for depth in 0..=max_steps {
            let mut next = Vec::new();
            for (form, e) in &layer {
                let nts: Vec<usize> =
                    form.iter().enumerate().filter(|(_, s)| matches!(s, Sym::N(_))).map(|(i, _)| i).collect();
                if nts.is_empty() {
                    if *e == one {
                        words.push(form.iter().map(|s| if let Sym::T(t) = s { *t } else { unreachable!() }).collect());
                    }
                    continue;
                }
                if depth == max_steps {
                    truncated = true;
                    continue;
                }
                for &i in &nts {
                    let Sym::N(a) = form[i] else { unreachable!() };
                    for p in &by_lhs[a] {
                        let mut f2 = form[..i].to_vec();
                        f2.extend(&p.rhs);
                        f2.extend(&form[i + 1..]);
                        let need: Option<usize> = f2.iter().try_fold(0usize, |acc, s| match s {
                            Sym::T(_) => Some(acc + 1),
                            Sym::N(b) => min_yield[*b].map(|y| acc + y),
                        });
                        if need.map_or(true, |n| n > maxlen) {
                            continue;
                        }
                        let e2 = m.mul(e, &p.valence)?;
                        if m.norm(&e2) > budget.norm_cap {
                            truncated = true;
                            continue;
                        }
                        let key = (f2, e2);
                        if seen.insert(key.clone()) {
                            next.push(key);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        Ok(LangSample::new(maxlen, words, !truncated))
    }
}
