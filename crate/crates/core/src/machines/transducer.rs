use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{label_from_json, Fst, MachineError, SearchBudget};
use crate::analysis::{control_group, ControlGroup, GateOptions};
use crate::load::{self, LoadError};
use crate::monoid::{parse_valence, Elem, GenMap, Monoid, MonoidError};
use crate::words::{length_lex, Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerEdge {
    pub from: usize,
    pub input: Word,
    pub output: Word,
    pub valence: Elem,
    pub to: usize,
}

/// A transducer over `X* x Y* x M`; `(x, y)` is in the transduction when a
/// run reads `x`, writes `y`, ends in a final state with valence product 1.
#[derive(Clone, Debug)]
pub struct ValenceTransducer {
    monoid: Monoid,
    generators: Option<GenMap>,
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    finals: BTreeSet<usize>,
    edges: Vec<TransducerEdge>,
}

/// Outputs found for one input word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transduction {
    pub outputs: Vec<Word>,
    /// False when the norm cap, the step budget or the output length cap cut
    /// off part of the search.
    pub complete: bool,
}

#[derive(Serialize, Deserialize)]
struct TransducerFile {
    monoid: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Value>,
    alphabet: Vec<String>,
    output_alphabet: Vec<String>,
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
    output: Option<String>,
    #[serde(default)]
    valence: Value,
    to: String,
}

impl ValenceTransducer {
    pub fn new(monoid: Monoid, input_alphabet: Alphabet, output_alphabet: Alphabet) -> Self {
        ValenceTransducer {
            monoid,
            generators: None,
            input_alphabet,
            output_alphabet,
            states: Vec::new(),
            initial: 0,
            finals: BTreeSet::new(),
            edges: Vec::new(),
        }
    }

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

    pub fn add_edge(&mut self, from: usize, input: Word, output: Word, valence: Elem, to: usize) -> Result<(), MachineError> {
        for q in [from, to] {
            if q >= self.states.len() {
                return Err(MachineError::UnknownState(format!("#{q}")));
            }
        }
        if input.iter().any(|&a| a >= self.input_alphabet.len()) || output.iter().any(|&b| b >= self.output_alphabet.len()) {
            return Err(MachineError::UnknownState("edge label symbol out of range".into()));
        }
        if !self.monoid.contains(&valence) {
            return Err(MonoidError::Mismatch { kind: self.monoid.kind_name(), elem: format!("{valence:?}") }.into());
        }
        self.edges.push(TransducerEdge { from, input, output, valence, to });
        Ok(())
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn edges(&self) -> &[TransducerEdge] {
        &self.edges
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn valences(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self.edges.iter().map(|e| e.valence.clone()).collect();
        set.into_iter().collect()
    }

    pub fn from_json(v: &Value, base: Option<&Path>) -> Result<Self, MachineError> {
        let file: TransducerFile =
            serde_json::from_value(v.clone()).map_err(|e| LoadError::Schema(format!("transducer: {e}")))?;
        Self::from_file(file, base)
    }

    pub fn load(path: &Path) -> Result<Self, MachineError> {
        let file: TransducerFile = load::read_file(path)?;
        Self::from_file(file, load::base_dir(path))
    }

    fn from_file(file: TransducerFile, base: Option<&Path>) -> Result<Self, MachineError> {
        let monoid = load::resolve_monoid(&file.monoid, base)?;
        let generators = load::resolve_generators(&monoid, file.generators.as_ref(), base)?;
        let mut t = ValenceTransducer::new(monoid, Alphabet::new(file.alphabet)?, Alphabet::new(file.output_alphabet)?);
        t.generators = generators;
        for s in file.states {
            if t.state_index(&s).is_some() {
                return Err(MachineError::DuplicateState(s));
            }
            t.add_state(s);
        }
        if t.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        let lookup = |t: &ValenceTransducer, s: &str| t.state_index(s).ok_or_else(|| MachineError::UnknownState(s.into()));
        t.initial = lookup(&t, &file.initial)?;
        for f in &file.finals {
            let q = lookup(&t, f)?;
            t.finals.insert(q);
        }
        for e in file.edges {
            let from = lookup(&t, &e.from)?;
            let to = lookup(&t, &e.to)?;
            let input = label_from_json(&t.input_alphabet, e.input.map(Value::String).as_ref())?;
            let output = label_from_json(&t.output_alphabet, e.output.map(Value::String).as_ref())?;
            let valence = parse_valence(&t.monoid, t.generators.as_ref(), &e.valence)?;
            t.add_edge(from, input, output, valence, to)?;
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Value {
        let file = TransducerFile {
            monoid: self.monoid.to_json(),
            generators: self.generators.as_ref().map(|g| g.to_json(&self.monoid)),
            alphabet: self.input_alphabet.symbols().to_vec(),
            output_alphabet: self.output_alphabet.symbols().to_vec(),
            states: self.states.clone(),
            initial: self.states.get(self.initial).cloned().unwrap_or_default(),
            finals: self.finals.iter().map(|&q| self.states[q].clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: self.states[e.from].clone(),
                    input: Some(self.input_alphabet.render(&e.input)),
                    output: Some(self.output_alphabet.render(&e.output)),
                    valence: if self.monoid.is_identity(&e.valence) {
                        Value::Null
                    } else {
                        self.monoid.render(&e.valence)
                    },
                    to: self.states[e.to].clone(),
                })
                .collect(),
        };
        serde_json::to_value(file).expect("transducer serializes")
    }

    /// All outputs `y` with `|y| <= max_output` and `(x, y)` in the
    /// transduction, by breadth-first search over
    /// `(state, position, element, output)`.
    pub fn transduce(&self, x: &[usize], max_output: usize, budget: &SearchBudget) -> Result<Transduction, MachineError> {
        if self.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        let one = self.monoid.identity();
        let mut out_edges: Vec<Vec<&TransducerEdge>> = vec![Vec::new(); self.states.len()];
        for e in &self.edges {
            out_edges[e.from].push(e);
        }
        type Key = (usize, usize, Elem, Word);
        let start: Key = (self.initial, 0, one.clone(), Vec::new());
        let mut seen: HashSet<Key> = HashSet::new();
        let mut queue: VecDeque<(Key, usize)> = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back((start, 0));
        let mut truncated = false;
        let mut outputs = BTreeSet::new();
        while let Some(((q, pos, e, out), steps)) = queue.pop_front() {
            if pos == x.len() && e == one && self.finals.contains(&q) {
                outputs.insert(out.clone());
            }
            for edge in &out_edges[q] {
                if !x[pos..].starts_with(&edge.input) {
                    continue;
                }
                let e2 = self.monoid.mul(&e, &edge.valence)?;
                if out.len() + edge.output.len() > max_output || !budget.allows(self.monoid.norm(&e2), steps + 1) {
                    truncated = true;
                    continue;
                }
                let mut out2 = out.clone();
                out2.extend(&edge.output);
                let key = (edge.to, pos + edge.input.len(), e2, out2);
                if seen.insert(key.clone()) {
                    queue.push_back((key, steps + 1));
                }
            }
        }
        let mut outputs: Vec<Word> = outputs.into_iter().collect();
        outputs.sort_by(|a, b| length_lex(a, b));
        Ok(Transduction { outputs, complete: !truncated })
    }

    /// Pairs `(x, y)` with `|x| <= max_input` and `|y| <= max_output`, sorted
    /// by input then output in length-lexicographic order.
    pub fn transduction_slice(
        &self,
        max_input: usize,
        max_output: usize,
        budget: &SearchBudget,
    ) -> Result<(Vec<(Word, Word)>, bool), MachineError> {
        let mut pairs = Vec::new();
        let mut complete = true;
        for x in self.input_alphabet.words_up_to(max_input) {
            let t = self.transduce(&x, max_output, budget)?;
            complete &= t.complete;
            pairs.extend(t.outputs.into_iter().map(|y| (x.clone(), y)));
        }
        Ok((pairs, complete))
    }

    pub fn control_group(&self, opts: &GateOptions) -> Result<ControlGroup, MachineError> {
        Ok(control_group(&self.monoid, &self.valences(), opts)?)
    }

    /// The classical transducer on states `Q x H`; refuses unless the gate on
    /// the edge valences answers finite.
    pub fn to_fst(&self, opts: &GateOptions) -> Result<Fst, MachineError> {
        let cg = self.control_group(opts)?;
        let h = &cg.group;
        let trivial = Monoid::trivial();
        let one = trivial.identity();
        let mut fst = ValenceTransducer::new(trivial, self.input_alphabet.clone(), self.output_alphabet.clone());
        let mut out_edges: Vec<Vec<(&TransducerEdge, usize)>> = vec![Vec::new(); self.states.len()];
        for e in &self.edges {
            if let Some(m) = h.index_of(&e.valence) {
                out_edges[e.from].push((e, m));
            }
        }
        let name = |q: usize, x: usize| format!("({},{})", self.states[q], h.name(x));
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = vec![(self.initial, h.identity())];
        index.insert(queue[0], fst.add_state(name(queue[0].0, queue[0].1)));
        let mut head = 0;
        while head < queue.len() {
            let (q, x) = queue[head];
            head += 1;
            let src = index[&(q, x)];
            for &(e, m) in &out_edges[q] {
                let y = h.mul(x, m);
                let dst = *index.entry((e.to, y)).or_insert_with(|| {
                    queue.push((e.to, y));
                    fst.add_state(name(e.to, y))
                });
                fst.edges.push(TransducerEdge {
                    from: src,
                    input: e.input.clone(),
                    output: e.output.clone(),
                    valence: one.clone(),
                    to: dst,
                });
            }
        }
        for &f in &self.finals {
            if let Some(&q) = index.get(&(f, h.identity())) {
                fst.finals.insert(q);
            }
        }
        Ok(fst)
    }

    pub fn transduction_to_json(&self, x: &[usize], t: &Transduction) -> Value {
        json!({
            "input": self.input_alphabet.render(x),
            "complete": t.complete,
            "outputs": t.outputs.iter().map(|y| self.output_alphabet.render(y)).collect::<Vec<_>>(),
        })
    }
}
