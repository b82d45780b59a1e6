use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{label_from_json, Acceptance, LangSample, MachineError, Nfa, SearchBudget};
use crate::analysis::{control_group, AnalysisError, ControlGroup, GateOptions};
use crate::load::{self, LoadError};
use crate::monoid::{parse_valence, Elem, GenMap, Monoid, MonoidError};
use crate::words::{Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub input: Word,
    pub valence: Elem,
    pub to: usize,
}

/// An automaton over `X* x M`: a run is accepted when it reads the input,
/// ends in a final state and the product of its valences is the identity.
#[derive(Clone, Debug)]
pub struct ValenceAutomaton {
    monoid: Monoid,
    generators: Option<GenMap>,
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    finals: BTreeSet<usize>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct AutomatonFile {
    monoid: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Value>,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: String,
    #[serde(rename = "final")]
    finals: Vec<String>,
    edges: Vec<EdgeFile>,
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    from: String,
    #[serde(default)]
    input: Option<String>,
    #[serde(default)]
    valence: Value,
    to: String,
}

/// Adjacency of a normalized automaton: every edge reads at most one symbol.
pub(crate) struct Graph {
    pub(crate) eps: Vec<Vec<(Elem, usize)>>,
    pub(crate) sym: Vec<Vec<Vec<(Elem, usize)>>>,
}

type Config = (usize, Elem);

/// Budgeted configuration search over `(state, element)` pairs, each kept
/// with the least number of edges that reaches it.
pub(crate) struct Search<'a> {
    monoid: &'a Monoid,
    graph: &'a Graph,
    budget: SearchBudget,
    pub(crate) truncated: bool,
}

impl<'a> Search<'a> {
    pub(crate) fn new(monoid: &'a Monoid, graph: &'a Graph, budget: SearchBudget) -> Self {
        Search { monoid, graph, budget, truncated: false }
    }

    /// Closes a configuration set under lambda-edges (Dijkstra on step counts).
    pub(crate) fn closure(&mut self, seeds: HashMap<Config, usize>) -> Result<HashMap<Config, usize>, MonoidError> {
        let mut heap: BinaryHeap<Reverse<(usize, usize, Elem)>> =
            seeds.iter().map(|((q, e), &s)| Reverse((s, *q, e.clone()))).collect();
        let mut best = seeds;
        while let Some(Reverse((s, q, e))) = heap.pop() {
            if best.get(&(q, e.clone())).is_some_and(|&b| b < s) {
                continue;
            }
            for (m, to) in &self.graph.eps[q] {
                let e2 = self.monoid.mul(&e, m)?;
                let s2 = s + 1;
                if !self.budget.allows(self.monoid.norm(&e2), s2) {
                    self.truncated = true;
                    continue;
                }
                let key = (*to, e2);
                if best.get(&key).is_some_and(|&b| b <= s2) {
                    continue;
                }
                heap.push(Reverse((s2, key.0, key.1.clone())));
                best.insert(key, s2);
            }
        }
        Ok(best)
    }

    pub(crate) fn start(&mut self, initial: usize) -> Result<HashMap<Config, usize>, MonoidError> {
        let mut seeds = HashMap::new();
        seeds.insert((initial, self.monoid.identity()), 0);
        self.closure(seeds)
    }

    /// Reads one symbol, then closes under lambda-edges.
    pub(crate) fn step(&mut self, configs: &HashMap<Config, usize>, a: usize) -> Result<HashMap<Config, usize>, MonoidError> {
        let mut next: HashMap<Config, usize> = HashMap::new();
        for ((q, e), &s) in configs {
            for (m, to) in &self.graph.sym[*q][a] {
                let e2 = self.monoid.mul(e, m)?;
                let s2 = s + 1;
                if !self.budget.allows(self.monoid.norm(&e2), s2) {
                    self.truncated = true;
                    continue;
                }
                let slot = next.entry((*to, e2)).or_insert(s2);
                *slot = (*slot).min(s2);
            }
        }
        if next.is_empty() {
            return Ok(next);
        }
        self.closure(next)
    }
}

impl ValenceAutomaton {
    /// An automaton with no states; add them with [`ValenceAutomaton::add_state`].
    pub fn new(monoid: Monoid, alphabet: Alphabet) -> Self {
        ValenceAutomaton {
            monoid,
            generators: None,
            alphabet,
            states: Vec::new(),
            initial: 0,
            finals: BTreeSet::new(),
            edges: Vec::new(),
        }
    }

    pub fn with_generators(mut self, gm: GenMap) -> Self {
        self.generators = Some(gm);
        self
    }

    /// Adds a state, or returns the index of an existing state of that name.
    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(i) = self.state_index(&name) {
            return i;
        }
        self.states.push(name);
        self.states.len() - 1
    }

    pub fn set_initial(&mut self, q: usize) {
        assert!(q < self.states.len(), "initial state out of range");
        self.initial = q;
    }

    pub fn set_final(&mut self, q: usize, is_final: bool) {
        assert!(q < self.states.len(), "final state out of range");
        if is_final {
            self.finals.insert(q);
        } else {
            self.finals.remove(&q);
        }
    }

    pub fn add_edge(&mut self, from: usize, input: Word, valence: Elem, to: usize) -> Result<(), MachineError> {
        for q in [from, to] {
            if q >= self.states.len() {
                return Err(MachineError::UnknownState(format!("#{q}")));
            }
        }
        if let Some(&a) = input.iter().find(|&&a| a >= self.alphabet.len()) {
            return Err(MachineError::UnknownState(format!("symbol #{a}")));
        }
        if !self.monoid.contains(&valence) {
            return Err(MonoidError::Mismatch { kind: self.monoid.kind_name(), elem: format!("{valence:?}") }.into());
        }
        self.edges.push(Edge { from, input, valence, to });
        Ok(())
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn generators(&self) -> Option<&GenMap> {
        self.generators.as_ref()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The distinct edge valences; they generate the submonoid `N` that the
    /// gate inspects.
    pub fn valences(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self.edges.iter().map(|e| e.valence.clone()).collect();
        set.into_iter().collect()
    }

    pub fn from_json(v: &Value, base: Option<&Path>) -> Result<Self, MachineError> {
        let file: AutomatonFile =
            serde_json::from_value(v.clone()).map_err(|e| LoadError::Schema(format!("automaton: {e}")))?;
        Self::from_file(file, base)
    }

    /// Reads an automaton file; `monoid` and `generators` paths resolve
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self, MachineError> {
        let file: AutomatonFile = load::read_file(path)?;
        Self::from_file(file, load::base_dir(path))
    }

    fn from_file(file: AutomatonFile, base: Option<&Path>) -> Result<Self, MachineError> {
        let monoid = load::resolve_monoid(&file.monoid, base)?;
        let generators = load::resolve_generators(&monoid, file.generators.as_ref(), base)?;
        let alphabet = Alphabet::new(file.alphabet)?;
        let mut a = ValenceAutomaton::new(monoid, alphabet);
        a.generators = generators;
        for s in file.states {
            if a.state_index(&s).is_some() {
                return Err(MachineError::DuplicateState(s));
            }
            a.add_state(s);
        }
        if a.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        let lookup = |a: &ValenceAutomaton, s: &str| a.state_index(s).ok_or_else(|| MachineError::UnknownState(s.into()));
        a.initial = lookup(&a, &file.initial)?;
        for f in &file.finals {
            let q = lookup(&a, f)?;
            a.finals.insert(q);
        }
        for e in file.edges {
            let from = lookup(&a, &e.from)?;
            let to = lookup(&a, &e.to)?;
            let input = label_from_json(&a.alphabet, e.input.map(Value::String).as_ref())?;
            let valence = parse_valence(&a.monoid, a.generators.as_ref(), &e.valence)?;
            a.add_edge(from, input, valence, to)?;
        }
        Ok(a)
    }

    pub fn to_json(&self) -> Value {
        let file = AutomatonFile {
            monoid: self.monoid.to_json(),
            generators: self.generators.as_ref().map(|g| g.to_json(&self.monoid)),
            alphabet: self.alphabet.symbols().to_vec(),
            states: self.states.clone(),
            initial: self.states.get(self.initial).cloned().unwrap_or_default(),
            finals: self.finals.iter().map(|&q| self.states[q].clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: self.states[e.from].clone(),
                    input: Some(self.alphabet.render(&e.input)),
                    valence: if self.monoid.is_identity(&e.valence) {
                        Value::Null
                    } else {
                        self.monoid.render(&e.valence)
                    },
                    to: self.states[e.to].clone(),
                })
                .collect(),
        };
        serde_json::to_value(file).expect("automaton serializes")
    }

    /// Splits edges reading more than one symbol into chains through fresh
    /// states; the first link carries the valence, the rest the identity.
    pub fn normalize(&self) -> ValenceAutomaton {
        let mut out = ValenceAutomaton { edges: Vec::new(), ..self.clone() };
        let one = self.monoid.identity();
        for (k, e) in self.edges.iter().enumerate() {
            if e.input.len() <= 1 {
                out.edges.push(e.clone());
                continue;
            }
            let mut prev = e.from;
            for (i, &a) in e.input.iter().enumerate() {
                let next = if i + 1 == e.input.len() {
                    e.to
                } else {
                    let mut name = format!("{}~{k}.{}", self.states[e.from], i + 1);
                    while out.state_index(&name).is_some() {
                        name.push('\'');
                    }
                    out.add_state(name)
                };
                let valence = if i == 0 { e.valence.clone() } else { one.clone() };
                out.edges.push(Edge { from: prev, input: vec![a], valence, to: next });
                prev = next;
            }
        }
        out
    }

    pub(crate) fn graph(&self) -> Graph {
        let n = self.states.len();
        let mut eps = vec![Vec::new(); n];
        let mut sym = vec![vec![Vec::new(); self.alphabet.len()]; n];
        for e in &self.edges {
            match e.input.as_slice() {
                [] => eps[e.from].push((e.valence.clone(), e.to)),
                [a] => sym[e.from][*a].push((e.valence.clone(), e.to)),
                _ => unreachable!("graph() needs a normalized automaton"),
            }
        }
        Graph { eps, sym }
    }

    fn accepting(&self, configs: &HashMap<Config, usize>) -> bool {
        let one = self.monoid.identity();
        self.finals.iter().any(|&f| configs.contains_key(&(f, one.clone())))
    }

    /// Decides whether `(w, 1)` is reachable. The answer is definitive
    /// unless the budget cut off part of the search.
    pub fn accepts(&self, w: &[usize], budget: &SearchBudget) -> Result<Acceptance, MachineError> {
        if self.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        let norm = self.normalize();
        let graph = norm.graph();
        let mut search = Search::new(&self.monoid, &graph, *budget);
        let mut configs = search.start(self.initial)?;
        for &a in w {
            if configs.is_empty() {
                break;
            }
            if a >= self.alphabet.len() {
                return Err(MachineError::UnknownState(format!("symbol #{a}")));
            }
            configs = search.step(&configs, a)?;
        }
        Ok(if norm.accepting(&configs) {
            Acceptance::Yes
        } else if search.truncated {
            Acceptance::NoWithinBudget
        } else {
            Acceptance::No
        })
    }

    /// All accepted words of length at most `maxlen`.
    pub fn enumerate_language(&self, maxlen: usize, budget: &SearchBudget) -> Result<LangSample, MachineError> {
        if self.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        let norm = self.normalize();
        let graph = norm.graph();
        let mut search = Search::new(&self.monoid, &graph, *budget);
        let mut layer: Vec<(Word, HashMap<Config, usize>)> = vec![(Vec::new(), search.start(self.initial)?)];
        let mut words = Vec::new();
        for len in 0..=maxlen {
            for (w, configs) in &layer {
                if norm.accepting(configs) {
                    words.push(w.clone());
                }
            }
            if len == maxlen {
                break;
            }
            let mut next = Vec::new();
            for (w, configs) in &layer {
                for a in 0..self.alphabet.len() {
                    let c2 = search.step(configs, a)?;
                    if !c2.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, c2));
                    }
                }
            }
            layer = next;
        }
        Ok(LangSample::new(maxlen, words, !search.truncated))
    }

    /// Every edge reads exactly one symbol and no state has two edges on the
    /// same symbol.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| e.input.len() == 1 && seen.insert((e.from, e.input[0])))
    }

    /// Keeps only edges whose valence lies in `keep`.
    pub fn prune_edges_outside(&self, keep: &[Elem]) -> ValenceAutomaton {
        let keep: BTreeSet<&Elem> = keep.iter().collect();
        ValenceAutomaton {
            edges: self.edges.iter().filter(|e| keep.contains(&e.valence)).cloned().collect(),
            ..self.clone()
        }
    }

    /// Removes edges whose valence is outside `E(N)` (or outside the control
    /// group containing it); such edges never occur in an accepting run.
    pub fn prune_non_e_edges(&self, opts: &GateOptions) -> Result<ValenceAutomaton, MachineError> {
        let cg = match self.control_group(opts) {
            Ok(cg) => cg,
            Err(MachineError::Analysis(AnalysisError::GateRefused(v))) => {
                return Err(MachineError::ESetUnavailable(format!("the gate answered {}", v.answer.as_str())));
            }
            Err(e) => return Err(e),
        };
        Ok(self.prune_edges_outside(cg.group.elems()))
    }

    /// Runs the gate on the edge valences and returns the control group.
    pub fn control_group(&self, opts: &GateOptions) -> Result<ControlGroup, MachineError> {
        Ok(control_group(&self.monoid, &self.valences(), opts)?)
    }

    /// The classical automaton on states `Q x H` tracking the running
    /// product inside the control group `H`. Refuses unless the gate on the
    /// edge valences answers finite.
    pub fn to_nfa(&self, opts: &GateOptions) -> Result<Nfa, MachineError> {
        let cg = self.control_group(opts)?;
        let h = &cg.group;
        let pruned = self.prune_edges_outside(h.elems());
        let trivial = Monoid::trivial();
        let one = trivial.identity();
        let mut nfa = ValenceAutomaton::new(trivial, self.alphabet.clone());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = vec![(self.initial, h.identity())];
        let name = |q: usize, x: usize| format!("({},{})", self.states[q], h.name(x));
        index.insert(queue[0], nfa.add_state(name(queue[0].0, queue[0].1)));
        let mut out_edges: Vec<Vec<&Edge>> = vec![Vec::new(); self.states.len()];
        for e in &pruned.edges {
            out_edges[e.from].push(e);
        }
        let mut head = 0;
        while head < queue.len() {
            let (q, x) = queue[head];
            head += 1;
            let src = index[&(q, x)];
            for e in &out_edges[q] {
                let m = h.index_of(&e.valence).expect("pruned edges stay in H");
                let y = h.mul(x, m);
                let dst = *index.entry((e.to, y)).or_insert_with(|| {
                    queue.push((e.to, y));
                    nfa.add_state(name(e.to, y))
                });
                nfa.edges.push(Edge { from: src, input: e.input.clone(), valence: one.clone(), to: dst });
            }
        }
        for &f in &self.finals {
            if let Some(&q) = index.get(&(f, h.identity())) {
                nfa.finals.insert(q);
            }
        }
        Ok(nfa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn counter() -> ValenceAutomaton {
        let mut a = ValenceAutomaton::new(Monoid::integers(1), Alphabet::new(["a", "b"]).unwrap());
        let q0 = a.add_state("q0");
        let q1 = a.add_state("q1");
        a.set_final(q1, true);
        a.add_edge(q0, vec![0], Elem::Vector(vec![1]), q0).unwrap();
        a.add_edge(q0, vec![1], Elem::Vector(vec![-1]), q1).unwrap();
        a.add_edge(q1, vec![1], Elem::Vector(vec![-1]), q1).unwrap();
        a
    }

    fn even_a() -> ValenceAutomaton {
        let m = Monoid::cyclic(2);
        let mut a = ValenceAutomaton::new(m, Alphabet::new(["a"]).unwrap());
        let q = a.add_state("q0");
        a.set_final(q, true);
        a.add_edge(q, vec![0], Elem::Finite(1), q).unwrap();
        a
    }

    #[test]
    fn counter_runs() {
        let a = counter();
        let b = SearchBudget::default();
        assert_eq!(a.accepts(&[0, 0, 1, 1], &b).unwrap(), Acceptance::Yes);
        assert_eq!(a.accepts(&[0, 0, 1], &b).unwrap(), Acceptance::No);
        assert_eq!(a.accepts(&[], &b).unwrap(), Acceptance::No);
        let s = a.enumerate_language(6, &b).unwrap();
        assert!(s.complete);
        assert_eq!(s.render(a.alphabet()), vec!["ab", "aabb", "aaabbb"]);
    }

    #[test]
    fn even_a_language() {
        let a = even_a();
        let s = a.enumerate_language(5, &SearchBudget::default()).unwrap();
        assert_eq!(s.render(a.alphabet()), vec!["", "aa", "aaaa"]);
        let nfa = a.to_nfa(&GateOptions::default()).unwrap();
        assert_eq!(nfa.states(), &["(q0,1)".to_string(), "(q0,g)".to_string()]);
        assert_eq!(nfa.enumerate_language(10, &SearchBudget::default()).unwrap().words, {
            a.enumerate_language(10, &SearchBudget::default()).unwrap().words
        });
    }

    #[test]
    fn empty_word_needs_identity_path() {
        let mut a = ValenceAutomaton::new(Monoid::cyclic(2), Alphabet::new(["a"]).unwrap());
        let q0 = a.add_state("q0");
        let q1 = a.add_state("q1");
        a.set_final(q1, true);
        a.add_edge(q0, vec![], Elem::Finite(1), q1).unwrap();
        assert_eq!(a.accepts(&[], &SearchBudget::default()).unwrap(), Acceptance::No);
        a.add_edge(q1, vec![], Elem::Finite(1), q1).unwrap();
        assert_eq!(a.accepts(&[], &SearchBudget::default()).unwrap(), Acceptance::Yes);
    }

    #[test]
    fn determinism() {
        let a = even_a();
        assert!(a.is_deterministic());
        let mut b = a.clone();
        b.add_edge(0, vec![0], Elem::Finite(0), 0).unwrap();
        assert!(!b.is_deterministic());
        let mut c = a.clone();
        c.add_edge(0, vec![], Elem::Finite(0), 0).unwrap();
        assert!(!c.is_deterministic());
        let mut d = a.clone();
        d.edges[0].input = vec![0, 0];
        assert!(!d.is_deterministic());
    }

    #[test]
    fn refusal_over_integers() {
        let mut a = counter();
        a.add_edge(1, vec![], Elem::Vector(vec![1]), 1).unwrap();
        let err = a.to_nfa(&GateOptions::default()).unwrap_err();
        let v = err.refusal().expect("gate refusal");
        assert_eq!(v.answer, crate::analysis::GateAnswer::Infinite);
    }

    #[test]
    fn lambda_cycles_hit_the_budget() {
        let mut a = ValenceAutomaton::new(Monoid::integers(1), Alphabet::new(["a"]).unwrap());
        let q = a.add_state("q");
        let r = a.add_state("r");
        a.add_edge(q, vec![], Elem::Vector(vec![1]), q).unwrap();
        a.set_final(r, true);
        assert_eq!(a.accepts(&[0], &SearchBudget::new(5, None)).unwrap(), Acceptance::NoWithinBudget);
        a.add_edge(q, vec![0], Elem::Vector(vec![-7]), r).unwrap();
        assert_eq!(a.accepts(&[0], &SearchBudget::new(5, None)).unwrap(), Acceptance::NoWithinBudget);
        assert_eq!(a.accepts(&[0], &SearchBudget::new(7, None)).unwrap(), Acceptance::Yes);
        assert_eq!(a.accepts(&[0], &SearchBudget::new(64, Some(3))).unwrap(), Acceptance::NoWithinBudget);
        assert_eq!(a.accepts(&[0], &SearchBudget::new(64, Some(8))).unwrap(), Acceptance::Yes);
        assert_eq!(a.accepts(&[0, 0], &SearchBudget::new(64, None)).unwrap(), Acceptance::NoWithinBudget);
    }

    #[test]
    fn prune_zero_edges() {
        let m = crate::catalog::zero_square();
        let mut a = ValenceAutomaton::new(m, Alphabet::new(["a", "b"]).unwrap());
        let q = a.add_state("q");
        a.set_final(q, true);
        a.add_edge(q, vec![0], Elem::Finite(0), q).unwrap();
        a.add_edge(q, vec![1], Elem::Finite(2), q).unwrap();
        a.add_edge(q, vec![1], Elem::Finite(1), q).unwrap();
        let p = a.prune_non_e_edges(&GateOptions::default()).unwrap();
        assert_eq!(p.edges().len(), 1);
        let b = SearchBudget::default();
        assert_eq!(a.enumerate_language(8, &b).unwrap(), p.enumerate_language(8, &b).unwrap());
    }

    #[test]
    fn long_labels_are_chained() {
        let mut a = ValenceAutomaton::new(Monoid::cyclic(2), Alphabet::new(["a", "b"]).unwrap());
        let q = a.add_state("q");
        a.set_final(q, true);
        a.add_edge(q, vec![0, 1, 0], Elem::Finite(1), q).unwrap();
        a.add_edge(q, vec![1], Elem::Finite(1), q).unwrap();
        let n = a.normalize();
        assert_eq!(n.states().len(), 3);
        assert!(n.edges().iter().all(|e| e.input.len() == 1));
        let s = a.enumerate_language(4, &SearchBudget::default()).unwrap();
        assert_eq!(s.render(a.alphabet()), vec!["", "bb", "abab", "baba", "bbbb"]);
    }

    #[test]
    fn json_round_trip() {
        let v = json!({
            "monoid": {"kind": "int-vectors", "rank": 1},
            "generators": {"inc": [1], "dec": [-1]},
            "alphabet": ["a", "b"],
            "states": ["q0", "q1"],
            "initial": "q0",
            "final": ["q1"],
            "edges": [
                {"from": "q0", "input": "a", "valence": "inc", "to": "q0"},
                {"from": "q0", "input": "b", "valence": "dec", "to": "q1"},
                {"from": "q1", "input": "b", "valence": [-1], "to": "q1"}
            ]
        });
        let a = ValenceAutomaton::from_json(&v, None).unwrap();
        let b = ValenceAutomaton::from_json(&a.to_json(), None).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.accepts(&[0, 1], &SearchBudget::default()).unwrap(), Acceptance::Yes);
        let bad = json!({"monoid": {"kind": "int-vectors", "rank": 1}, "alphabet": ["a"], "states": ["q"],
                         "initial": "r", "final": [], "edges": []});
        assert!(matches!(ValenceAutomaton::from_json(&bad, None), Err(MachineError::UnknownState(_))));
    }
}
