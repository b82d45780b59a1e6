use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::LabError;
use crate::grammars::{Sym, ValenceGrammar};
use crate::load::{self, LoadError};
use crate::machines::ValenceAutomaton;
use crate::monoid::{Elem, GenMap, Monoid};
use crate::words::{Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `K = X* ∪ {w ∈ X*Y* | φ(w) = 1}`.
    AutomatonK,
    /// `K' = {r c s c rev(r) | r, s ∈ X*, φ(rs) = 1}`.
    GrammarK,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::AutomatonK => "automaton-K",
            WitnessKind::GrammarK => "grammar-K'",
        }
    }

    pub fn parse(s: &str) -> Option<WitnessKind> {
        match s {
            "automaton-K" | "K" => Some(WitnessKind::AutomatonK),
            "grammar-K'" | "grammar-K′" | "grammar-Kprime" | "K'" => Some(WitnessKind::GrammarK),
            _ => None,
        }
    }
}

/// The mirror `Y` symbol of an `X` symbol: `x1 -> y1`, `x_p -> y_p`, and
/// `y_`-prefixed otherwise.
pub fn mirror_symbol(x: &str) -> String {
    match x.strip_prefix('x') {
        Some(rest) if !rest.is_empty() => format!("y{rest}"),
        _ => format!("y_{x}"),
    }
}

/// A witness language over the generators `X` of `gens`. The alphabet is
/// `X` followed by the mirrored `Y` (for `K`) or by the separator (for `K'`).
#[derive(Clone, Debug)]
pub struct WitnessSpec {
    kind: WitnessKind,
    monoid: Monoid,
    gens: GenMap,
    alphabet: Alphabet,
}

#[derive(Deserialize)]
struct WitnessFile {
    kind: String,
    monoid: Value,
    generators: Value,
    #[serde(default)]
    separator: Option<String>,
}

impl WitnessSpec {
    pub fn automaton_k(monoid: Monoid, gens: GenMap) -> Result<Self, LabError> {
        let mut symbols: Vec<String> = gens.symbols().to_vec();
        symbols.extend(gens.symbols().iter().map(|x| mirror_symbol(x)));
        Self::build(WitnessKind::AutomatonK, monoid, gens, symbols)
    }

    pub fn grammar_k(monoid: Monoid, gens: GenMap, separator: &str) -> Result<Self, LabError> {
        let mut symbols: Vec<String> = gens.symbols().to_vec();
        symbols.push(separator.to_string());
        Self::build(WitnessKind::GrammarK, monoid, gens, symbols)
    }

    fn build(kind: WitnessKind, monoid: Monoid, gens: GenMap, symbols: Vec<String>) -> Result<Self, LabError> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(LabError::Overlap(s.clone()));
            }
        }
        let alphabet = Alphabet::new(symbols)?;
        Ok(WitnessSpec { kind, monoid, gens, alphabet })
    }

    pub fn from_json(v: &Value, base: Option<&Path>) -> Result<Self, LabError> {
        let file: WitnessFile =
            serde_json::from_value(v.clone()).map_err(|e| LoadError::Schema(format!("witness: {e}")))?;
        let kind = WitnessKind::parse(&file.kind)
            .ok_or_else(|| LoadError::Schema(format!("unknown witness kind {:?}", file.kind)))?;
        let monoid = load::resolve_monoid(&file.monoid, base)?;
        let gens = load::resolve_generators(&monoid, Some(&file.generators), base)?
            .ok_or_else(|| LoadError::Schema("witness needs generators".into()))?;
        match kind {
            WitnessKind::AutomatonK => Self::automaton_k(monoid, gens),
            WitnessKind::GrammarK => Self::grammar_k(monoid, gens, file.separator.as_deref().unwrap_or("c")),
        }
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let v: Value = load::read_file(path)?;
        Self::from_json(&v, load::base_dir(path))
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn generators(&self) -> &GenMap {
        &self.gens
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of `X` symbols; they occupy indices `0..k` of the alphabet.
    pub fn x_len(&self) -> usize {
        self.gens.len()
    }

    /// Index of the separator `c` for `K'`.
    pub fn separator(&self) -> Option<usize> {
        (self.kind == WitnessKind::GrammarK).then_some(self.x_len())
    }

    fn image(&self, a: usize) -> &Elem {
        &self.gens.images()[a % self.x_len()]
    }

    fn phi(&self, w: &[usize]) -> Result<Elem, LabError> {
        Ok(self.monoid.product(w.iter().map(|&a| self.image(a)))?)
    }

    /// Direct structural membership test.
    pub fn contains(&self, w: &[usize]) -> Result<bool, LabError> {
        if let Some(&a) = w.iter().find(|&&a| a >= self.alphabet.len()) {
            return Err(LabError::ForeignSymbol(a));
        }
        let k = self.x_len();
        let one = self.monoid.identity();
        match self.kind {
            WitnessKind::AutomatonK => {
                let split = w.iter().position(|&a| a >= k).unwrap_or(w.len());
                if split == w.len() {
                    return Ok(true);
                }
                if w[split..].iter().any(|&a| a < k) {
                    return Ok(false);
                }
                Ok(self.phi(w)? == one)
            }
            WitnessKind::GrammarK => {
                let cs: Vec<usize> = (0..w.len()).filter(|&i| w[i] == k).collect();
                let [c1, c2] = cs[..] else { return Ok(false) };
                let (r, s, r2) = (&w[..c1], &w[c1 + 1..c2], &w[c2 + 1..]);
                if r.len() != r2.len() || r.iter().zip(r2.iter().rev()).any(|(a, b)| a != b) {
                    return Ok(false);
                }
                let rs: Vec<usize> = r.iter().chain(s).copied().collect();
                Ok(self.phi(&rs)? == one)
            }
        }
    }

    pub fn contains_str(&self, w: &str) -> Result<bool, LabError> {
        let w = self.alphabet.parse_word(w)?;
        self.contains(&w)
    }

    /// `x1^n0 c x2^n1 ...` style helper: concatenates `(symbol, count)` runs.
    pub fn word(&self, runs: &[(&str, usize)]) -> Result<Word, LabError> {
        let mut w = Vec::new();
        for &(s, n) in runs {
            let a = self.alphabet.index_of(s).ok_or_else(|| crate::words::WordError::Unreadable {
                word: s.to_string(),
                alphabet: self.alphabet.symbols().to_vec(),
            })?;
            w.extend(std::iter::repeat(a).take(n));
        }
        Ok(w)
    }

    /// A nondeterministic valence automaton for `K`: from `start` it guesses
    /// either `free`, which reads `X*` with identity valences, or `count`
    /// and then `check`, which read `X*Y*` with the generator images.
    pub fn build_automaton(&self) -> Result<ValenceAutomaton, LabError> {
        let k = self.x_len();
        let one = self.monoid.identity();
        let mut a = ValenceAutomaton::new(self.monoid.clone(), self.alphabet.clone()).with_generators(self.gens.clone());
        let start = a.add_state("start");
        let free = a.add_state("free");
        let count = a.add_state("count");
        let check = a.add_state("check");
        a.set_initial(start);
        for q in [start, free, count, check] {
            a.set_final(q, true);
        }
        a.add_edge(start, vec![], one.clone(), free)?;
        a.add_edge(start, vec![], one.clone(), count)?;
        for i in 0..k {
            let img = self.gens.images()[i].clone();
            a.add_edge(free, vec![i], one.clone(), free)?;
            a.add_edge(count, vec![i], img.clone(), count)?;
            if self.kind == WitnessKind::AutomatonK {
                a.add_edge(count, vec![k + i], img.clone(), check)?;
                a.add_edge(check, vec![k + i], img, check)?;
            }
        }
        Ok(a)
    }

    /// The valence grammar for `K'`: `S0 -> x S0 x (φ(x))`, `S0 -> c S1 c`,
    /// `S1 -> x S1 (φ(x))`, `S1 -> λ`.
    pub fn build_grammar(&self) -> Result<ValenceGrammar, LabError> {
        let k = self.x_len();
        let c = self.separator().unwrap_or(k);
        let mut terminals: Vec<String> = self.gens.symbols().to_vec();
        terminals.push(self.alphabet.symbols().get(c).cloned().unwrap_or_else(|| "c".into()));
        let terminals = Alphabet::new(terminals)?;
        let fresh = |base: &str| {
            let mut s = base.to_string();
            while terminals.index_of(&s).is_some() {
                s.push('\'');
            }
            s
        };
        let one = self.monoid.identity();
        let mut g = ValenceGrammar::new(self.monoid.clone(), terminals.clone(), fresh("S0"))?.with_generators(self.gens.clone());
        let s0 = g.start();
        let s1 = g.add_nonterminal(fresh("S1"))?;
        for i in 0..k {
            let img = self.gens.images()[i].clone();
            g.add_production(s0, vec![Sym::T(i), Sym::N(s0), Sym::T(i)], img.clone())?;
        }
        g.add_production(s0, vec![Sym::T(k), Sym::N(s1), Sym::T(k)], one.clone())?;
        for i in 0..k {
            let img = self.gens.images()[i].clone();
            g.add_production(s1, vec![Sym::T(i), Sym::N(s1)], img)?;
        }
        g.add_production(s1, vec![], one)?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::SearchBudget;
    use serde_json::json;

    fn bicyclic_k() -> WitnessSpec {
        let m = Monoid::bicyclic(1).unwrap();
        let gens = GenMap::from_json(&m, &json!({"x_p": [0, 1], "x_q": [1, 0]})).unwrap();
        WitnessSpec::automaton_k(m, gens).unwrap()
    }

    fn integer_k_prime() -> WitnessSpec {
        let m = Monoid::integers(1);
        let gens = GenMap::from_json(&m, &json!({"x1": [1], "x2": [-1]})).unwrap();
        WitnessSpec::grammar_k(m, gens, "c").unwrap()
    }

    #[test]
    fn mirror_names() {
        assert_eq!(mirror_symbol("x_p"), "y_p");
        assert_eq!(mirror_symbol("x1"), "y1");
        assert_eq!(mirror_symbol("a"), "y_a");
        assert_eq!(mirror_symbol("x"), "y_x");
    }

    #[test]
    fn k_membership() {
        let k = bicyclic_k();
        assert!(k.contains_str("x_py_q").unwrap());
        assert!(!k.contains_str("x_qy_p").unwrap());
        assert!(k.contains_str("x_qx_q").unwrap());
        assert!(!k.contains_str("y_qx_p").unwrap());
        assert!(k.contains(&[7]).is_err());
    }

    #[test]
    fn k_prime_membership() {
        let k = integer_k_prime();
        let z = k.word(&[("x1", 5), ("c", 1), ("x2", 5), ("c", 1), ("x1", 5)]).unwrap();
        assert!(k.contains(&z).unwrap());
        let bad = k.word(&[("x1", 5), ("c", 1), ("x2", 4), ("c", 1), ("x1", 5)]).unwrap();
        assert!(!k.contains(&bad).unwrap());
        assert!(k.contains_str("cc").unwrap());
        assert!(!k.contains_str("x1cx2cx2").unwrap());
    }

    #[test]
    fn automaton_agrees_on_short_words() {
        let k = bicyclic_k();
        let a = k.build_automaton().unwrap();
        let budget = SearchBudget::default();
        for w in k.alphabet().words_up_to(3) {
            assert_eq!(a.accepts(&w, &budget).unwrap().is_yes(), k.contains(&w).unwrap(), "{}", k.alphabet().render(&w));
        }
    }

    #[test]
    fn grammar_agrees_on_short_words() {
        let k = integer_k_prime();
        let g = k.build_grammar().unwrap();
        let sample = g.bounded_language(5, &SearchBudget::default()).unwrap();
        for w in k.alphabet().words_up_to(5) {
            assert_eq!(sample.contains(&w), k.contains(&w).unwrap());
        }
    }

    #[test]
    fn trivial_monoid_accepts_all_of_x_star_y_star() {
        let m = Monoid::trivial();
        let one = m.identity();
        let gens = GenMap::new(&m, [("x1".to_string(), one.clone()), ("x2".to_string(), one)]).unwrap();
        let k = WitnessSpec::automaton_k(m, gens).unwrap();
        assert!(k.contains_str("x1x2y2y1").unwrap());
        assert!(!k.contains_str("y1x1").unwrap());
    }
}
