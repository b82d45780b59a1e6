//! The `valence` command line: every subcommand prints one JSON document.
//!
//! Exit codes: 0 success, 1 error, 2 a decided negative verdict (an
//! infinite case, or a conversion refused with its certificate), 3 an
//! unknown verdict or a budget-limited answer.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{classify, units_finite_gate_genmap, AnalysisError, GateAnswer, GateOptions, DEFAULT_NORM_CAP};
use crate::grammars::{
    CfgOptions, GrammarError, TreeError, ValenceGrammar, ValenceTree, DEFAULT_EVALUATION_CAP, DEFAULT_MAX_SEQUENCES,
};
use crate::group::FiniteGroup;
use crate::lab::{nerode_separators, ogden_falsify, LabError, WitnessKind, WitnessSpec};
use crate::load::{self, LoadError};
use crate::machines::{Acceptance, MachineError, SearchBudget, ValenceAutomaton, ValenceTransducer};
use crate::monoid::{parse_valence, Monoid, MonoidError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

#[derive(Parser, Debug)]
#[command(name = "valence", version, about = "Monoid-controlled automata, transducers and grammars")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Budgets and output shared by all subcommands.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Largest monoid-element norm kept during searches.
    #[arg(long, global = true, default_value_t = DEFAULT_NORM_CAP)]
    pub norm_cap: u64,
    /// Largest number of edges or derivation steps in a run.
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Length bound for language slices and cross-checks.
    #[arg(long, global = true, default_value_t = 6)]
    pub maxlen: usize,
    /// Write the JSON result here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget::new(self.norm_cap, self.max_steps)
    }

    pub fn gate(&self) -> GateOptions {
        GateOptions::with_norm_cap(self.norm_cap)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dichotomy verdict for a monoid.
    Classify { monoid: PathBuf },
    /// Finiteness of the units of the submonoid generated by a generator map.
    Gate { monoid: PathBuf, generators: PathBuf },
    /// Decide membership of one word (automaton, transducer or grammar).
    Run {
        device: PathBuf,
        #[arg(long)]
        word: String,
        /// Output length bound for transducers (defaults to --maxlen).
        #[arg(long)]
        max_output: Option<usize>,
    },
    /// Language slice up to --maxlen (automaton, transducer or grammar).
    Enumerate {
        device: PathBuf,
        #[arg(long)]
        max_output: Option<usize>,
    },
    /// Convert a valence automaton to an NFA, or refuse with the gate verdict.
    ConvertAutomaton { file: PathBuf },
    /// Convert a valence transducer to a finite-state transducer.
    ConvertTransducer { file: PathBuf },
    /// Convert a valence grammar to a context-free grammar.
    ConvertGrammar {
        file: PathBuf,
        /// Valence-sequence length bound (default: 1 for abelian control
        /// groups, 2(|H|^3+1) otherwise).
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_SEQUENCES)]
        max_sequences: usize,
    },
    /// Language slice of a grammar up to --maxlen.
    EnumerateGrammar { file: PathBuf },
    /// Evaluations, values and excursiveness of a valence tree.
    EvaluateTree {
        file: PathBuf,
        /// Sequence length bound for the bounded-excursiveness values.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_EVALUATION_CAP)]
        cap: usize,
    },
    /// Build a witness device and cross-check it against the membership oracle.
    Witness { spec: PathBuf },
    /// Pairwise distinguishable prefixes of a witness language.
    Separate {
        spec: PathBuf,
        /// Symbols to build prefixes and suffixes from (comma separated;
        /// default: the whole alphabet).
        #[arg(long)]
        symbols: Option<String>,
        #[arg(long, default_value_t = 4)]
        prefix_maxlen: usize,
        #[arg(long, default_value_t = 4)]
        suffix_maxlen: usize,
        #[arg(long, default_value_t = 10)]
        want: usize,
    },
    /// Check all Ogden decompositions of a marked word.
    FalsifyOgden {
        spec: PathBuf,
        #[arg(long)]
        word: String,
        /// Marked positions (comma separated, 0-based). Default: the first
        /// block before the separator, or every position.
        #[arg(long)]
        marks: Option<String>,
        #[arg(long, default_value = "0,2")]
        pump: String,
        /// Candidate constant (default: the number of marks).
        #[arg(long)]
        m: Option<usize>,
    },
}

/// A finished command: the JSON document and the exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { code: EXIT_OK, json }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    Ok(load::read_file::<Value>(path)?)
}

fn load_monoid(path: &Path) -> Result<Monoid, CliError> {
    let v = read_json(path)?;
    Ok(load::resolve_monoid(&v, load::base_dir(path))?)
}

fn refusal(verdict: &crate::analysis::GateVerdict, monoid: &Monoid, reason: String) -> Outcome {
    let code = if verdict.answer == GateAnswer::Unknown { EXIT_UNKNOWN } else { EXIT_REFUSED };
    Outcome { code, json: json!({"refused": true, "reason": reason, "gate": verdict.to_json(monoid)}) }
}

enum Device {
    Automaton(ValenceAutomaton),
    Transducer(ValenceTransducer),
    Grammar(ValenceGrammar),
}

fn load_device(path: &Path) -> Result<Device, CliError> {
    let v = read_json(path)?;
    let base = load::base_dir(path);
    if v.get("productions").is_some() {
        Ok(Device::Grammar(ValenceGrammar::from_json(&v, base)?))
    } else if v.get("output_alphabet").is_some() {
        Ok(Device::Transducer(ValenceTransducer::from_json(&v, base)?))
    } else {
        Ok(Device::Automaton(ValenceAutomaton::from_json(&v, base)?))
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

fn parse_numbers(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    split_list(s).map(|t| t.parse().map_err(|_| CliError::Usage(format!("{what}: {t:?} is not a number")))).collect()
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Classify { monoid } => {
            let m = load_monoid(monoid)?;
            let v = classify(&m)?;
            v.verify(&m)?;
            let code = if v.is_finite_group() { EXIT_OK } else { EXIT_REFUSED };
            Ok(Outcome { code, json: v.to_json(&m) })
        }
        Command::Gate { monoid, generators } => {
            let m = load_monoid(monoid)?;
            let gv = read_json(generators)?;
            let gm = load::resolve_generators(&m, Some(&gv), load::base_dir(generators))?
                .ok_or_else(|| CliError::Usage("empty generator file".into()))?;
            let v = units_finite_gate_genmap(&m, &gm, &cfg.gate())?;
            let code = match v.answer {
                GateAnswer::Finite => EXIT_OK,
                GateAnswer::Infinite => EXIT_REFUSED,
                GateAnswer::Unknown => EXIT_UNKNOWN,
            };
            Ok(Outcome { code, json: v.to_json(&m) })
        }
        Command::Run { device, word, max_output } => run_word(cfg, &load_device(device)?, word, *max_output),
        Command::Enumerate { device, max_output } => enumerate(cfg, &load_device(device)?, *max_output),
        Command::EnumerateGrammar { file } => {
            let g = ValenceGrammar::load(file)?;
            enumerate(cfg, &Device::Grammar(g), None)
        }
        Command::ConvertAutomaton { file } => {
            let a = ValenceAutomaton::load(file)?;
            match a.to_nfa(&cfg.gate()) {
                Ok(nfa) => Ok(Outcome::ok(nfa.to_json())),
                Err(e) => match e.refusal() {
                    Some(v) => Ok(refusal(v, a.monoid(), e.to_string())),
                    None => Err(e.into()),
                },
            }
        }
        Command::ConvertTransducer { file } => {
            let t = ValenceTransducer::load(file)?;
            match t.to_fst(&cfg.gate()) {
                Ok(fst) => Ok(Outcome::ok(fst.to_json())),
                Err(e) => match e.refusal() {
                    Some(v) => Ok(refusal(v, t.monoid(), e.to_string())),
                    None => Err(e.into()),
                },
            }
        }
        Command::ConvertGrammar { file, bound, max_sequences } => {
            let g = ValenceGrammar::load(file)?;
            let opts = CfgOptions { gate: cfg.gate(), sequence_bound: *bound, max_sequences: *max_sequences };
            match g.normalize().to_cfg(&opts) {
                Ok(c) => Ok(Outcome::ok(c.to_json())),
                Err(e) => match e.refusal() {
                    Some(v) => Ok(refusal(v, g.monoid(), e.to_string())),
                    None => Err(e.into()),
                },
            }
        }
        Command::EvaluateTree { file, bound, cap } => evaluate_tree(file, *bound, *cap),
        Command::Witness { spec } => witness(cfg, &WitnessSpec::load(spec)?),
        Command::Separate { spec, symbols, prefix_maxlen, suffix_maxlen, want } => {
            let k = WitnessSpec::load(spec)?;
            let alpha = k.alphabet();
            let syms: Vec<usize> = match symbols {
                Some(s) => split_list(s)
                    .map(|t| alpha.index_of(t).ok_or_else(|| CliError::Usage(format!("unknown symbol {t:?}"))))
                    .collect::<Result<_, _>>()?,
                None => (0..alpha.len()).collect(),
            };
            let oracle = |w: &[usize]| k.contains(w).unwrap_or(false);
            let r = nerode_separators(&oracle, &syms, *prefix_maxlen, *suffix_maxlen, *want);
            let mut j = r.to_json(alpha);
            j["verified"] = json!(r.verify(&oracle));
            Ok(Outcome::ok(j))
        }
        Command::FalsifyOgden { spec, word, marks, pump, m } => {
            let k = WitnessSpec::load(spec)?;
            let z = k.alphabet().parse_word(word).map_err(LabError::from)?;
            let marks: BTreeSet<usize> = match marks {
                Some(s) => parse_numbers(s, "--marks")?.into_iter().collect(),
                None => match k.separator() {
                    Some(c) => (0..z.iter().position(|&a| a == c).unwrap_or(z.len())).collect(),
                    None => (0..z.len()).collect(),
                },
            };
            let pump = parse_numbers(pump, "--pump")?;
            let m = m.unwrap_or(marks.len());
            let oracle = |w: &[usize]| k.contains(w).unwrap_or(false);
            let r = ogden_falsify(&oracle, &z, &marks, m, &pump)?;
            Ok(Outcome::ok(r.to_json(k.alphabet())))
        }
    }
}

fn run_word(cfg: &RunConfig, d: &Device, word: &str, max_output: Option<usize>) -> Result<Outcome, CliError> {
    let budget = cfg.budget();
    match d {
        Device::Automaton(a) => {
            let w = a.alphabet().parse_word(word).map_err(MachineError::from)?;
            let r = a.accepts(&w, &budget)?;
            let code = if r == Acceptance::NoWithinBudget { EXIT_UNKNOWN } else { EXIT_OK };
            Ok(Outcome { code, json: json!({"word": a.alphabet().render(&w), "result": r.as_str()}) })
        }
        Device::Transducer(t) => {
            let x = t.input_alphabet().parse_word(word).map_err(MachineError::from)?;
            let r = t.transduce(&x, max_output.unwrap_or(cfg.maxlen), &budget)?;
            Ok(Outcome::ok(t.transduction_to_json(&x, &r)))
        }
        Device::Grammar(g) => {
            let w = g.terminals().parse_word(word).map_err(GrammarError::from)?;
            let sample = g.bounded_language(w.len(), &budget)?;
            let r = if sample.contains(&w) {
                Acceptance::Yes
            } else if sample.complete {
                Acceptance::No
            } else {
                Acceptance::NoWithinBudget
            };
            let code = if r == Acceptance::NoWithinBudget { EXIT_UNKNOWN } else { EXIT_OK };
            Ok(Outcome { code, json: json!({"word": g.terminals().render(&w), "result": r.as_str()}) })
        }
    }
}

fn enumerate(cfg: &RunConfig, d: &Device, max_output: Option<usize>) -> Result<Outcome, CliError> {
    let budget = cfg.budget();
    let json = match d {
        Device::Automaton(a) => a.enumerate_language(cfg.maxlen, &budget)?.to_json(a.alphabet()),
        Device::Grammar(g) => g.bounded_language(cfg.maxlen, &budget)?.to_json(g.terminals()),
        Device::Transducer(t) => {
            let (pairs, complete) = t.transduction_slice(cfg.maxlen, max_output.unwrap_or(cfg.maxlen), &budget)?;
            json!({
                "maxlen": cfg.maxlen,
                "complete": complete,
                "count": pairs.len(),
                "pairs": pairs.iter()
                    .map(|(x, y)| json!([t.input_alphabet().render(x), t.output_alphabet().render(y)]))
                    .collect::<Vec<_>>(),
            })
        }
    };
    Ok(Outcome::ok(json))
}

#[derive(Deserialize)]
struct TreeFile {
    monoid: Value,
    #[serde(default)]
    generators: Option<Value>,
    nodes: Vec<NodeFile>,
    #[serde(default)]
    order: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct NodeFile {
    name: String,
    #[serde(default)]
    parent: Option<String>,
    #[serde(default)]
    valence: Value,
}

fn evaluate_tree(path: &Path, bound: Option<usize>, cap: usize) -> Result<Outcome, CliError> {
    let file: TreeFile = load::read_file(path)?;
    let base = load::base_dir(path);
    let m = load::resolve_monoid(&file.monoid, base)?;
    let gens = load::resolve_generators(&m, file.generators.as_ref(), base)?;
    let names: Vec<&str> = file.nodes.iter().map(|n| n.name.as_str()).collect();
    let index = |s: &str| {
        names.iter().position(|&n| n == s).ok_or_else(|| CliError::Usage(format!("unknown tree node {s:?}")))
    };
    let mut parent = Vec::new();
    let mut valences = Vec::new();
    for n in &file.nodes {
        parent.push(n.parent.as_deref().map(index).transpose()?);
        valences.push(parse_valence(&m, gens.as_ref(), &n.valence)?);
    }
    let tree = ValenceTree::new(parent, valences)?;
    let render_order = |o: &[usize]| o.iter().map(|&i| names[i]).collect::<Vec<_>>();
    let eval_json = |o: &[usize]| -> Result<Value, CliError> {
        let e = tree.evaluate(&m, o)?;
        let profile = tree.profile(o);
        Ok(json!({
            "order": render_order(&e.order),
            "value": m.render(&e.value),
            "excursiveness": e.excursiveness,
            "profile": names.iter().zip(&profile).map(|(n, p)| (n.to_string(), json!(p))).collect::<serde_json::Map<_, _>>(),
        }))
    };
    let mut out = json!({"nodes": tree.len(), "preorder": eval_json(&tree.preorder())?});
    if let Some(order) = &file.order {
        let o: Vec<usize> = order.iter().map(|s| index(s)).collect::<Result<_, _>>()?;
        out["evaluation"] = eval_json(&o)?;
    }
    if tree.len() <= cap {
        let values = tree.values(&m, cap)?;
        out["evaluation_count"] = json!(tree.linear_extensions(cap)?.count());
        out["values"] = Value::Array(values.iter().map(|v| m.render(v)).collect());
        if let Ok(g) = FiniteGroup::from_monoid(&m) {
            let mut minimized = Vec::new();
            for v in &values {
                let e = tree.minimize_excursiveness(&m, &g, v, cap)?;
                minimized.push(json!({
                    "value": m.render(v), "order": render_order(&e.order), "excursiveness": e.excursiveness,
                }));
            }
            out["minimized"] = Value::Array(minimized);
        }
    } else {
        out["values"] = Value::Null;
        out["note"] = json!(format!("{} nodes exceed the exhaustive cap {cap}", tree.len()));
    }
    if let Ok(g) = FiniteGroup::from_monoid(&m) {
        let b = bound.unwrap_or_else(|| g.commutation_bound());
        let vals = tree.bounded_excursiveness_values(&g, b)?;
        out["bound"] = json!(b);
        out["bounded_values"] = Value::Array(vals.iter().map(|v| m.render(v)).collect());
    }
    Ok(Outcome::ok(out))
}

fn witness(cfg: &RunConfig, k: &WitnessSpec) -> Result<Outcome, CliError> {
    let budget = cfg.budget();
    let (device, sample) = match k.kind() {
        WitnessKind::AutomatonK => {
            let a = k.build_automaton()?;
            let s = a.enumerate_language(cfg.maxlen, &budget)?;
            (a.to_json(), s)
        }
        WitnessKind::GrammarK => {
            let g = k.build_grammar()?;
            let s = g.bounded_language(cfg.maxlen, &budget)?;
            (g.to_json(), s)
        }
    };
    let mut checked = 0usize;
    let mut members = 0usize;
    let mut mismatches = Vec::new();
    for w in k.alphabet().words_up_to(cfg.maxlen) {
        checked += 1;
        let inside = k.contains(&w)?;
        members += usize::from(inside);
        if inside != sample.contains(&w) {
            mismatches.push(k.alphabet().render(&w));
        }
    }
    let agree = mismatches.is_empty();
    mismatches.truncate(20);
    let json = json!({
        "kind": k.kind().as_str(),
        "alphabet": k.alphabet().symbols(),
        "maxlen": cfg.maxlen,
        "checked": checked,
        "members": members,
        "complete": sample.complete,
        "agree": agree,
        "mismatches": mismatches,
        "device": device,
    });
    let code = if agree { EXIT_OK } else if sample.complete { EXIT_ERROR } else { EXIT_UNKNOWN };
    Ok(Outcome { code, json })
}

/// Parses `args`, runs the command, prints the result and returns the exit
/// code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.json).expect("json renders") + "\n";
            match (&cli.config.output, out.code) {
                (Some(path), EXIT_OK) => {
                    if let Err(source) = std::fs::write(path, text) {
                        eprintln!("error: {}", CliError::Write { path: path.display().to_string(), source });
                        return EXIT_ERROR;
                    }
                }
                _ => print!("{text}"),
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
