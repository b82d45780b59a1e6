//! Element representation and arithmetic for the monoid catalog.
//!
//! The catalog covers finite multiplication tables, the free abelian groups
//! `Z^k`, direct powers of the bicyclic monoid `<p, q | pq = 1>` and direct
//! products of these. Elements are kept in normal form so that structural
//! equality is monoid equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("element {elem} does not belong to the {kind} monoid")]
    Mismatch { kind: &'static str, elem: String },
    #[error("integer overflow while multiplying {0}")]
    Overflow(String),
    #[error("multiplication table is malformed: {0}")]
    Malformed(String),
    #[error("multiplication table is not associative: ({a}{b}){c} = {left} but {a}({b}{c}) = {right}")]
    NotAssociative {
        a: String,
        b: String,
        c: String,
        left: String,
        right: String,
    },
    #[error("identity {0} does not act neutrally")]
    BadIdentity(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("unknown generator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("{op} is not supported for {kind} monoids")]
    Unsupported { op: &'static str, kind: &'static str },
    #[error("malformed element literal {literal}: {reason}")]
    BadLiteral { literal: String, reason: String },
    #[error("invalid monoid description: {0}")]
    Invalid(String),
}

/// A validated finite monoid given by its Cayley table. Elements are indices
/// into `names`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    names: Vec<String>,
    identity: usize,
    table: Vec<usize>,
}

impl FiniteTable {
    /// Builds a table from rows (`rows[a][b]` is the index of `ab`) and checks
    /// totality, neutrality of the identity and associativity.
    pub fn new(names: Vec<String>, identity: usize, rows: Vec<Vec<usize>>) -> Result<Self, MonoidError> {
        let n = names.len();
        if n == 0 {
            return Err(MonoidError::Malformed("a monoid needs at least one element".into()));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(MonoidError::Malformed(format!("duplicate element name {name:?}")));
            }
        }
        if identity >= n {
            return Err(MonoidError::Malformed(format!("identity index {identity} out of range")));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(MonoidError::Malformed(format!("table must be {n}x{n}")));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in &rows {
            for &entry in row {
                if entry >= n {
                    return Err(MonoidError::Malformed(format!("entry {entry} out of range")));
                }
                table.push(entry);
            }
        }
        let t = FiniteTable { names, identity, table };
        t.validate()?;
        Ok(t)
    }

    pub fn from_fn(
        names: Vec<String>,
        identity: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, MonoidError> {
        let n = names.len();
        let rows = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::new(names, identity, rows)
    }

    fn validate(&self) -> Result<(), MonoidError> {
        let n = self.order();
        let e = self.identity;
        for a in 0..n {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(MonoidError::BadIdentity(self.names[e].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    let left = self.mul(ab, c);
                    let right = self.mul(a, self.mul(b, c));
                    if left != right {
                        return Err(MonoidError::NotAssociative {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            c: self.names[c].clone(),
                            left: self.names[left].clone(),
                            right: self.names[right].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.names.len() + b]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The table of the opposite monoid, `a o b := ba`.
    pub fn transpose(&self) -> FiniteTable {
        let n = self.order();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(b, a);
            }
        }
        FiniteTable { names: self.names.clone(), identity: self.identity, table }
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }
}

/// A catalog monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monoid {
    Finite(FiniteTable),
    /// The additive group `Z^rank`.
    IntVectors { rank: usize },
    /// The `power`-fold direct power of the bicyclic monoid.
    Bicyclic { power: usize },
    Product(Vec<Monoid>),
}

/// An element in normal form. Bicyclic factors are pairs `(a, b)` standing for
/// `q^a p^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Finite(usize),
    Vector(Vec<i64>),
    Bicyclic(Vec<(u64, u64)>),
    Tuple(Vec<Elem>),
}

/// Normal-form product in the bicyclic monoid: `(a,b)(c,d) = (a+c-t, b+d-t)`
/// with `t = min(b, c)`.
pub fn bicyclic_mul(x: (u64, u64), y: (u64, u64)) -> Option<(u64, u64)> {
    let (a, b) = x;
    let (c, d) = y;
    let t = b.min(c);
    Some((a.checked_add(c - t)?, (b - t).checked_add(d)?))
}

impl Monoid {
    pub fn trivial() -> Monoid {
        Monoid::cyclic(1)
    }

    /// The cyclic group of order `n` with elements `1, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Monoid {
        assert!(n >= 1, "cyclic group needs positive order");
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        Monoid::Finite(FiniteTable::from_fn(names, 0, |a, b| (a + b) % n).expect("cyclic table is a monoid"))
    }

    pub fn integers(rank: usize) -> Monoid {
        Monoid::IntVectors { rank }
    }

    pub fn bicyclic(power: usize) -> Result<Monoid, MonoidError> {
        if power == 0 {
            return Err(MonoidError::Invalid("bicyclic power must be at least 1".into()));
        }
        Ok(Monoid::Bicyclic { power })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Monoid::Finite(_) => "finite-table",
            Monoid::IntVectors { .. } => "int-vectors",
            Monoid::Bicyclic { .. } => "bicyclic",
            Monoid::Product(_) => "product",
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteTable> {
        match self {
            Monoid::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn identity(&self) -> Elem {
        match self {
            Monoid::Finite(t) => Elem::Finite(t.identity()),
            Monoid::IntVectors { rank } => Elem::Vector(vec![0; *rank]),
            Monoid::Bicyclic { power } => Elem::Bicyclic(vec![(0, 0); *power]),
            Monoid::Product(fs) => Elem::Tuple(fs.iter().map(Monoid::identity).collect()),
        }
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        *a == self.identity()
    }

    pub fn contains(&self, a: &Elem) -> bool {
        match (self, a) {
            (Monoid::Finite(t), Elem::Finite(i)) => *i < t.order(),
            (Monoid::IntVectors { rank }, Elem::Vector(v)) => v.len() == *rank,
            (Monoid::Bicyclic { power }, Elem::Bicyclic(v)) => v.len() == *power,
            (Monoid::Product(fs), Elem::Tuple(es)) => {
                fs.len() == es.len() && fs.iter().zip(es).all(|(f, e)| f.contains(e))
            }
            _ => false,
        }
    }

    fn mismatch(&self, a: &Elem) -> MonoidError {
        MonoidError::Mismatch { kind: self.kind_name(), elem: format!("{a:?}") }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem, MonoidError> {
        match (self, a, b) {
            (Monoid::Finite(t), Elem::Finite(x), Elem::Finite(y)) if *x < t.order() && *y < t.order() => {
                Ok(Elem::Finite(t.mul(*x, *y)))
            }
            (Monoid::IntVectors { rank }, Elem::Vector(x), Elem::Vector(y))
                if x.len() == *rank && y.len() == *rank =>
            {
                x.iter()
                    .zip(y)
                    .map(|(s, t)| s.checked_add(*t))
                    .collect::<Option<Vec<_>>>()
                    .map(Elem::Vector)
                    .ok_or_else(|| MonoidError::Overflow(format!("{x:?} + {y:?}")))
            }
            (Monoid::Bicyclic { power }, Elem::Bicyclic(x), Elem::Bicyclic(y))
                if x.len() == *power && y.len() == *power =>
            {
                x.iter()
                    .zip(y)
                    .map(|(s, t)| bicyclic_mul(*s, *t))
                    .collect::<Option<Vec<_>>>()
                    .map(Elem::Bicyclic)
                    .ok_or_else(|| MonoidError::Overflow(format!("{x:?} . {y:?}")))
            }
            (Monoid::Product(fs), Elem::Tuple(xs), Elem::Tuple(ys)) if xs.len() == fs.len() && ys.len() == fs.len() => {
                fs.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(f, (x, y))| f.mul(x, y))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Elem::Tuple)
            }
            _ => Err(if self.contains(a) { self.mismatch(b) } else { self.mismatch(a) }),
        }
    }

    /// Left-to-right product of a sequence; the empty product is the identity.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Result<Elem, MonoidError> {
        let mut acc = self.identity();
        for x in items {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Size measure used to cap searches: 0 for finite tables, the l1 norm for
    /// vectors, `a + b` summed over bicyclic factors and the maximum over the
    /// factors of a product.
    pub fn norm(&self, a: &Elem) -> u64 {
        match (self, a) {
            (Monoid::Finite(_), _) => 0,
            (Monoid::IntVectors { .. }, Elem::Vector(v)) => v.iter().map(|x| x.unsigned_abs()).sum(),
            (Monoid::Bicyclic { .. }, Elem::Bicyclic(v)) => v.iter().map(|(a, b)| a + b).sum(),
            (Monoid::Product(fs), Elem::Tuple(es)) => {
                fs.iter().zip(es).map(|(f, e)| f.norm(e)).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Monoid::Finite(_) => true,
            Monoid::IntVectors { rank } => *rank == 0,
            Monoid::Bicyclic { .. } => false,
            Monoid::Product(fs) => fs.iter().all(Monoid::is_finite),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            Monoid::Finite(t) => t.is_commutative(),
            Monoid::IntVectors { .. } => true,
            Monoid::Bicyclic { .. } => false,
            Monoid::Product(fs) => fs.iter().all(Monoid::is_commutative),
        }
    }

    /// All elements, for monoids with a finite carrier.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            Monoid::Finite(t) => Some((0..t.order()).map(Elem::Finite).collect()),
            Monoid::IntVectors { rank: 0 } => Some(vec![Elem::Vector(vec![])]),
            Monoid::IntVectors { .. } | Monoid::Bicyclic { .. } => None,
            Monoid::Product(fs) => {
                let mut acc: Vec<Vec<Elem>> = vec![vec![]];
                for f in fs {
                    let es = f.elements()?;
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            es.iter().map(move |e| {
                                let mut p = prefix.clone();
                                p.push(e.clone());
                                p
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(Elem::Tuple).collect())
            }
        }
    }

    /// The opposite monoid of a finite table (transposed table).
    pub fn opposite(&self) -> Result<Monoid, MonoidError> {
        match self {
            Monoid::Finite(t) => Ok(Monoid::Finite(t.transpose())),
            _ => Err(MonoidError::Unsupported { op: "opposite", kind: self.kind_name() }),
        }
    }

    pub fn direct_product(a: Monoid, b: Monoid) -> Monoid {
        Monoid::Product(vec![a, b])
    }

    /// Parses an element literal: a name for finite tables, an integer array
    /// for vectors, `[a, b]` (or a list of such pairs) for bicyclic powers and
    /// an array of component literals for products.
    pub fn parse_literal(&self, v: &Value) -> Result<Elem, MonoidError> {
        let bad = |reason: &str| MonoidError::BadLiteral { literal: v.to_string(), reason: reason.to_string() };
        match self {
            Monoid::Finite(t) => {
                let name = v.as_str().ok_or_else(|| bad("expected an element name"))?;
                t.index_of(name).map(Elem::Finite).ok_or_else(|| MonoidError::UnknownElement(name.to_string()))
            }
            Monoid::IntVectors { rank } => {
                let arr = match v {
                    Value::Number(_) => vec![v.clone()],
                    Value::Array(a) => a.clone(),
                    _ => return Err(bad("expected an integer array")),
                };
                if arr.len() != *rank {
                    return Err(bad(&format!("expected {rank} coordinates")));
                }
                arr.iter()
                    .map(|x| x.as_i64().ok_or_else(|| bad("coordinates must be integers")))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Elem::Vector)
            }
            Monoid::Bicyclic { power } => {
                let arr = v.as_array().ok_or_else(|| bad("expected [a, b] pairs"))?;
                let pair = |p: &Value| -> Result<(u64, u64), MonoidError> {
                    let xs = p.as_array().filter(|xs| xs.len() == 2).ok_or_else(|| bad("expected a pair [a, b]"))?;
                    let a = xs[0].as_u64().ok_or_else(|| bad("pair entries must be natural numbers"))?;
                    let b = xs[1].as_u64().ok_or_else(|| bad("pair entries must be natural numbers"))?;
                    Ok((a, b))
                };
                let pairs = if *power == 1 && arr.len() == 2 && arr.iter().all(Value::is_u64) {
                    vec![pair(v)?]
                } else {
                    arr.iter().map(pair).collect::<Result<Vec<_>, _>>()?
                };
                if pairs.len() != *power {
                    return Err(bad(&format!("expected {power} pairs")));
                }
                Ok(Elem::Bicyclic(pairs))
            }
            Monoid::Product(fs) => {
                let arr = v.as_array().ok_or_else(|| bad("expected an array of components"))?;
                if arr.len() != fs.len() {
                    return Err(bad(&format!("expected {} components", fs.len())));
                }
                fs.iter().zip(arr).map(|(f, x)| f.parse_literal(x)).collect::<Result<Vec<_>, _>>().map(Elem::Tuple)
            }
        }
    }

    /// Inverse of [`Monoid::parse_literal`].
    pub fn render(&self, a: &Elem) -> Value {
        match (self, a) {
            (Monoid::Finite(t), Elem::Finite(i)) => Value::String(t.name(*i).to_string()),
            (Monoid::IntVectors { .. }, Elem::Vector(v)) => Value::from(v.clone()),
            (Monoid::Bicyclic { power }, Elem::Bicyclic(v)) => {
                if *power == 1 {
                    Value::from(vec![v[0].0, v[0].1])
                } else {
                    Value::Array(v.iter().map(|(a, b)| Value::from(vec![*a, *b])).collect())
                }
            }
            (Monoid::Product(fs), Elem::Tuple(es)) => {
                Value::Array(fs.iter().zip(es).map(|(f, e)| f.render(e)).collect())
            }
            _ => Value::String(format!("{a:?}")),
        }
    }

    /// Compact human-readable element name.
    pub fn display(&self, a: &Elem) -> String {
        match (self, a) {
            (Monoid::Finite(t), Elem::Finite(i)) if *i < t.order() => t.name(*i).to_string(),
            (Monoid::Product(fs), Elem::Tuple(es)) => {
                let parts: Vec<String> = fs.iter().zip(es).map(|(f, e)| f.display(e)).collect();
                format!("({})", parts.join(","))
            }
            _ => self.render(a).to_string(),
        }
    }

    pub fn from_spec(spec: &MonoidSpec) -> Result<Monoid, MonoidError> {
        match spec {
            MonoidSpec::FiniteTable { elements, identity, table } => {
                let index: HashMap<&str, usize> =
                    elements.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                let lookup = |name: &str| {
                    index.get(name).copied().ok_or_else(|| MonoidError::UnknownElement(name.to_string()))
                };
                let id = lookup(identity)?;
                let mut rows = vec![vec![usize::MAX; elements.len()]; elements.len()];
                for (a, row) in table {
                    let ai = lookup(a)?;
                    for (b, c) in row {
                        rows[ai][lookup(b)?] = lookup(c)?;
                    }
                }
                for (a, row) in rows.iter().enumerate() {
                    if let Some(b) = row.iter().position(|&c| c == usize::MAX) {
                        return Err(MonoidError::Malformed(format!(
                            "missing product {}{}",
                            elements[a], elements[b]
                        )));
                    }
                }
                Ok(Monoid::Finite(FiniteTable::new(elements.clone(), id, rows)?))
            }
            MonoidSpec::IntVectors { rank } => Ok(Monoid::IntVectors { rank: *rank }),
            MonoidSpec::Bicyclic { power } => Monoid::bicyclic(*power),
            MonoidSpec::Product { factors } => {
                factors.iter().map(Monoid::from_spec).collect::<Result<Vec<_>, _>>().map(Monoid::Product)
            }
        }
    }

    pub fn to_spec(&self) -> MonoidSpec {
        match self {
            Monoid::Finite(t) => {
                let mut table = BTreeMap::new();
                for a in 0..t.order() {
                    let row = (0..t.order())
                        .map(|b| (t.name(b).to_string(), t.name(t.mul(a, b)).to_string()))
                        .collect();
                    table.insert(t.name(a).to_string(), row);
                }
                MonoidSpec::FiniteTable {
                    elements: t.names().to_vec(),
                    identity: t.name(t.identity()).to_string(),
                    table,
                }
            }
            Monoid::IntVectors { rank } => MonoidSpec::IntVectors { rank: *rank },
            Monoid::Bicyclic { power } => MonoidSpec::Bicyclic { power: *power },
            Monoid::Product(fs) => MonoidSpec::Product { factors: fs.iter().map(Monoid::to_spec).collect() },
        }
    }

    pub fn from_json(v: &Value) -> Result<Monoid, MonoidError> {
        let spec: MonoidSpec =
            serde_json::from_value(v.clone()).map_err(|e| MonoidError::Invalid(e.to_string()))?;
        Monoid::from_spec(&spec)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_spec()).expect("monoid spec serializes")
    }
}

impl fmt::Display for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monoid::Finite(t) => write!(f, "finite monoid of order {}", t.order()),
            Monoid::IntVectors { rank } => write!(f, "Z^{rank}"),
            Monoid::Bicyclic { power: 1 } => write!(f, "bicyclic monoid"),
            Monoid::Bicyclic { power } => write!(f, "bicyclic monoid^{power}"),
            Monoid::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|m| m.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

/// JSON description of a monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonoidSpec {
    FiniteTable {
        elements: Vec<String>,
        identity: String,
        table: BTreeMap<String, BTreeMap<String, String>>,
    },
    IntVectors {
        rank: usize,
    },
    Bicyclic {
        power: usize,
    },
    Product {
        factors: Vec<MonoidSpec>,
    },
}

/// Assignment of monoid elements to generator symbols; induces the
/// homomorphism from words over the symbols into the monoid.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenMap {
    symbols: Vec<String>,
    images: Vec<Elem>,
}

impl GenMap {
    pub fn new(monoid: &Monoid, pairs: impl IntoIterator<Item = (String, Elem)>) -> Result<GenMap, MonoidError> {
        let mut gm = GenMap::default();
        for (sym, img) in pairs {
            if !monoid.contains(&img) {
                return Err(MonoidError::Mismatch { kind: monoid.kind_name(), elem: format!("{img:?}") });
            }
            if gm.symbols.contains(&sym) {
                return Err(MonoidError::Invalid(format!("generator {sym:?} declared twice")));
            }
            gm.symbols.push(sym);
            gm.images.push(img);
        }
        Ok(gm)
    }

    pub fn from_json(monoid: &Monoid, v: &Value) -> Result<GenMap, MonoidError> {
        let obj = v.as_object().ok_or_else(|| MonoidError::Invalid("generator map must be a JSON object".into()))?;
        let pairs = obj
            .iter()
            .map(|(k, lit)| Ok((k.clone(), monoid.parse_literal(lit)?)))
            .collect::<Result<Vec<_>, MonoidError>>()?;
        GenMap::new(monoid, pairs)
    }

    pub fn to_json(&self, monoid: &Monoid) -> Value {
        Value::Object(self.symbols.iter().zip(&self.images).map(|(s, e)| (s.clone(), monoid.render(e))).collect())
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn image(&self, sym: &str) -> Option<&Elem> {
        self.symbols.iter().position(|s| s == sym).map(|i| &self.images[i])
    }

    /// The homomorphic image of a word, computed left to right.
    pub fn eval_word<S: AsRef<str>>(&self, monoid: &Monoid, word: &[S]) -> Result<Elem, MonoidError> {
        let mut acc = monoid.identity();
        for s in word {
            let img = self.image(s.as_ref()).ok_or_else(|| MonoidError::UnknownSymbol(s.as_ref().to_string()))?;
            acc = monoid.mul(&acc, img)?;
        }
        Ok(acc)
    }
}

/// Free-function form of [`GenMap::eval_word`].
pub fn eval_word<S: AsRef<str>>(monoid: &Monoid, gm: &GenMap, word: &[S]) -> Result<Elem, MonoidError> {
    gm.eval_word(monoid, word)
}

/// Resolves an edge or production valence. Strings are whitespace-separated
/// tokens, each a generator symbol or (for finite tables) an element name; a
/// token that is neither is split greedily into generator symbols. Any other
/// JSON value is an element literal, and `null` is the identity.
pub fn parse_valence(monoid: &Monoid, gens: Option<&GenMap>, v: &Value) -> Result<Elem, MonoidError> {
    match v {
        Value::Null => Ok(monoid.identity()),
        Value::String(s) => {
            let mut acc = monoid.identity();
            for tok in s.split_whitespace() {
                let img = resolve_token(monoid, gens, tok)?;
                acc = monoid.mul(&acc, &img)?;
            }
            Ok(acc)
        }
        other => monoid.parse_literal(other),
    }
}

fn resolve_token(monoid: &Monoid, gens: Option<&GenMap>, tok: &str) -> Result<Elem, MonoidError> {
    if let Some(img) = gens.and_then(|g| g.image(tok)) {
        return Ok(img.clone());
    }
    if let Monoid::Finite(t) = monoid {
        if let Some(i) = t.index_of(tok) {
            return Ok(Elem::Finite(i));
        }
    }
    let gm = gens.ok_or_else(|| MonoidError::UnknownSymbol(tok.to_string()))?;
    let symbols = gm.symbols();
    let parts = crate::words::greedy_split(tok, symbols).ok_or_else(|| MonoidError::UnknownSymbol(tok.to_string()))?;
    gm.eval_word(monoid, &parts.iter().map(|&i| symbols[i].as_str()).collect::<Vec<_>>())
}
