//! Verifiers and bounded searchers for colorings of regular families, plus
//! a finitely sampled pruning engine.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::dsl::{ErrorKind, ParseError, Parser};
use crate::family::{Family, FamilyError, FinSet};
use crate::index::iota;
use crate::ordinal::Ordinal;

/// The first constraint a witness breaks, with the offending data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{constraint}: {witness}")]
pub struct Violation {
    pub constraint: String,
    pub witness: String,
}

fn violation(constraint: &str, witness: impl Into<String>) -> Violation {
    Violation { constraint: constraint.to_string(), witness: witness.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("{0} has infinite index {1}; the searcher handles finite indices only")]
    InfiniteIndex(String, Ordinal),
    #[error("coloring is not total: {0}")]
    NotTotal(Violation),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{0}")]
    Parse(ParseError),
    #[error("{0}")]
    Invalid(Violation),
}

// colorings

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetRef {
    E,
    F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetTerm {
    MaxE,
    MinE,
    CardE,
    MaxF,
    MinF,
    CardF,
}

impl SetTerm {
    const NAMES: [(&'static str, SetTerm); 6] = [
        ("maxE", SetTerm::MaxE),
        ("minE", SetTerm::MinE),
        ("cardE", SetTerm::CardE),
        ("maxF", SetTerm::MaxF),
        ("minF", SetTerm::MinF),
        ("cardF", SetTerm::CardF),
    ];

    pub fn from_name(s: &str) -> Option<SetTerm> {
        Self::NAMES.iter().find(|(n, _)| *n == s).map(|&(_, t)| t)
    }

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, t)| *t == self).unwrap().0
    }

    fn eval(self, e: &FinSet, f: &FinSet) -> u64 {
        match self {
            SetTerm::MaxE => e.max_or_zero(),
            SetTerm::MinE => e.min().unwrap_or(0),
            SetTerm::CardE => e.len() as u64,
            SetTerm::MaxF => f.max_or_zero(),
            SetTerm::MinF => f.min().unwrap_or(0),
            SetTerm::CardF => f.len() as u64,
        }
    }
}

/// Predicate on a node `E` and a maximal extension `F ⪰ E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pred {
    True,
    False,
    Even(SetTerm),
    Odd(SetTerm),
    Le(SetTerm, u64),
    Ge(SetTerm, u64),
    Member(SetRef, Family),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn eval(&self, e: &FinSet, f: &FinSet) -> bool {
        match self {
            Pred::True => true,
            Pred::False => false,
            Pred::Even(t) => t.eval(e, f) % 2 == 0,
            Pred::Odd(t) => t.eval(e, f) % 2 == 1,
            Pred::Le(t, k) => t.eval(e, f) <= *k,
            Pred::Ge(t, k) => t.eval(e, f) >= *k,
            Pred::Member(SetRef::E, g) => g.member(e),
            Pred::Member(SetRef::F, g) => g.member(f),
            Pred::Not(p) => !p.eval(e, f),
            Pred::And(p, q) => p.eval(e, f) && q.eval(e, f),
            Pred::Or(p, q) => p.eval(e, f) || q.eval(e, f),
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::True => write!(f, "true"),
            Pred::False => write!(f, "false"),
            Pred::Even(t) => write!(f, "even({})", t.name()),
            Pred::Odd(t) => write!(f, "odd({})", t.name()),
            Pred::Le(t, k) => write!(f, "le({},{k})", t.name()),
            Pred::Ge(t, k) => write!(f, "ge({},{k})", t.name()),
            Pred::Member(SetRef::E, g) => write!(f, "memE({g})"),
            Pred::Member(SetRef::F, g) => write!(f, "memF({g})"),
            Pred::Not(p) => write!(f, "not({p})"),
            Pred::And(p, q) => write!(f, "and({p},{q})"),
            Pred::Or(p, q) => write!(f, "or({p},{q})"),
        }
    }
}

/// Two-color rule: color 0 where `zero` holds, color 1 where `one` holds
/// (or, when absent, where `zero` fails).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    pub zero: Pred,
    pub one: Option<Pred>,
}

impl Coloring {
    pub fn new(zero: Pred) -> Self {
        Coloring { zero, one: None }
    }

    pub fn holds(&self, j: u8, e: &FinSet, f: &FinSet) -> bool {
        match (j, &self.one) {
            (0, _) => self.zero.eval(e, f),
            (_, Some(p)) => p.eval(e, f),
            (_, None) => !self.zero.eval(e, f),
        }
    }

    /// Every pair `(E, F)` inside `[1, bound]` receives a color.
    pub fn check_total(&self, dst: &Family, bound: u64) -> Result<(), Violation> {
        if self.one.is_none() {
            return Ok(());
        }
        for e in dst.enumerate(bound).into_iter().filter(|e| !e.is_empty()) {
            for f in maximal_extensions(dst, &e, bound) {
                if !self.holds(0, &e, &f) && !self.holds(1, &e, &f) {
                    return Err(violation("uncolored pair", format!("E={e} F={f}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.one {
            None => write!(f, "{}", self.zero),
            Some(p) => write!(f, "colors({};{p})", self.zero),
        }
    }
}

impl std::str::FromStr for Coloring {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_coloring(s)
    }
}

/// Maximal members `F ⪰ E` of `dst` with `F ⊆ [1, bound]`, lexicographically.
pub fn maximal_extensions(dst: &Family, e: &FinSet, bound: u64) -> Vec<FinSet> {
    let mut out = Vec::new();
    let mut cur = e.elems().to_vec();
    max_ext_dfs(dst, bound, &mut cur, &mut out, usize::MAX);
    out
}

fn max_ext_dfs(dst: &Family, bound: u64, cur: &mut Vec<u64>, out: &mut Vec<FinSet>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    let next = match dst.min_ext(cur) {
        None => {
            out.push(FinSet::from_sorted(cur.clone()));
            return;
        }
        Some(n) => n,
    };
    for n in next..=bound {
        cur.push(n);
        if dst.member_slice(cur) {
            max_ext_dfs(dst, bound, cur, out, limit);
        }
        cur.pop();
        if out.len() >= limit {
            return;
        }
    }
}

// extended embeddings

/// `i` on nonempty members of the source, `e` on its maximal members.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtendedEmbedding {
    pub i: BTreeMap<FinSet, FinSet>,
    pub e: BTreeMap<FinSet, FinSet>,
}

/// A source family restricted to the ground set `[1, ground]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    pub family: Family,
    pub ground: u64,
}

impl Source {
    fn nodes(&self) -> Vec<FinSet> {
        self.family.enumerate(self.ground).into_iter().filter(|e| !e.is_empty()).collect()
    }

    fn maximal(&self) -> Vec<FinSet> {
        self.family.enumerate(self.ground).into_iter().filter(|e| self.family.min_ext(e.elems()).is_none()).collect()
    }
}

pub fn verify_extended_embedding(src: &Source, dst: &Family, emb: &ExtendedEmbedding) -> Result<(), Violation> {
    let nodes = src.nodes();
    for e in &nodes {
        let Some(img) = emb.i.get(e) else {
            return Err(violation("i is not defined on a source node", e.to_string()));
        };
        if img.is_empty() || !dst.member(img) {
            return Err(violation("i(E) is not a nonempty member of the target", format!("E={e} i(E)={img}")));
        }
    }
    if let Some(extra) = emb.i.keys().find(|k| k.is_empty() || !nodes.contains(k)) {
        return Err(violation("i is defined outside the source nodes", extra.to_string()));
    }
    for (a, ia) in &emb.i {
        for (b, ib) in &emb.i {
            if a != b && ia == ib {
                return Err(violation("i is not injective", format!("i({a}) = i({b}) = {ia}")));
            }
            if a.is_proper_prefix_of(b) != ia.is_proper_prefix_of(ib) {
                return Err(violation("i does not preserve the tree order", format!("E={a} E'={b} i(E)={ia} i(E')={ib}")));
            }
        }
    }
    let maximal = src.maximal();
    for e in &maximal {
        let Some(ext) = emb.e.get(e) else {
            return Err(violation("e is not defined on a maximal source node", e.to_string()));
        };
        if !dst.member(ext) || dst.min_ext(ext.elems()).is_some() {
            return Err(violation("e(E) is not a maximal member of the target", format!("E={e} e(E)={ext}")));
        }
        let base = if e.is_empty() { FinSet::empty() } else { emb.i[e].clone() };
        if !base.is_prefix_of(ext) {
            return Err(violation("i(E) is not an initial segment of e(E)", format!("E={e} i(E)={base} e(E)={ext}")));
        }
    }
    if let Some(extra) = emb.e.keys().find(|k| !maximal.contains(k)) {
        return Err(violation("e is defined outside the maximal source nodes", extra.to_string()));
    }
    Ok(())
}

/// `e(E) ∈ ⋂_{k=1}^{|E|} A^j_{i(E|_k)}` for every maximal source node `E`.
pub fn verify_monochromatic(
    src: &Source,
    dst: &Family,
    emb: &ExtendedEmbedding,
    coloring: &Coloring,
    j: u8,
) -> Result<(), Violation> {
    verify_extended_embedding(src, dst, emb)?;
    for (e, ext) in &emb.e {
        for k in 1..=e.len() {
            let node = &emb.i[&e.prefix(k)];
            if !coloring.holds(j, node, ext) {
                return Err(violation(&format!("color {j} fails"), format!("E={e} k={k} i(E|k)={node} e(E)={ext}")));
            }
        }
    }
    Ok(())
}

/// One half of a sum witness: an embedding of `FS[ξ]` that is
/// monochromatically `color`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumPart {
    pub xi: Ordinal,
    pub ground: u64,
    pub embedding: ExtendedEmbedding,
}

impl SumPart {
    pub fn source(&self) -> Source {
        Source { family: Family::Fine(self.xi.clone()), ground: self.ground }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumWitness {
    pub family: Family,
    pub coloring: Coloring,
    pub parts: [SumPart; 2],
}

pub fn verify_sum_witness(w: &SumWitness) -> Result<(), Violation> {
    let target = iota(&w.family);
    let sum = w.parts[0].xi.hessenberg(&w.parts[1].xi);
    if sum != target {
        return Err(violation("indices do not add up", format!("{} (+) {} = {sum}, expected {target}", w.parts[0].xi, w.parts[1].xi)));
    }
    for (j, part) in w.parts.iter().enumerate() {
        verify_monochromatic(&part.source(), &w.family, &part.embedding, &w.coloring, j as u8)
            .map_err(|v| Violation { constraint: format!("part {j}: {}", v.constraint), witness: v.witness })?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Candidate pairs in the order they were tried.
    pub attempted: Vec<(Ordinal, Ordinal)>,
    pub witness: Option<SumWitness>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub bound: u64,
    pub source_ground: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { bound: 30, source_ground: 4 }
    }
}

/// Bounded search for a pair of monochromatic embeddings with
/// `ξ_0 ⊕ ξ_1 = ι(F)`. A `None` witness means nothing was found inside
/// `[1, bound]`.
pub fn search_sum_witness(f: &Family, coloring: &Coloring, opts: SearchOptions) -> Result<SearchOutcome, RamseyError> {
    let target = iota(f);
    if !target.is_finite() {
        return Err(RamseyError::InfiniteIndex(f.to_string(), target));
    }
    coloring.check_total(f, opts.bound.min(12)).map_err(RamseyError::NotTotal)?;
    let ground = opts.source_ground.max(target.to_u64().unwrap());
    let mut attempted = Vec::new();
    for (x0, x1) in target.hessenberg_decompositions() {
        attempted.push((x0.clone(), x1.clone()));
        let mut found = Vec::new();
        for (j, xi) in [(0u8, &x0), (1u8, &x1)] {
            let src = Source { family: Family::Fine(xi.clone()), ground };
            match embed(&src, f, coloring, j, opts.bound) {
                Some(embedding) => found.push(SumPart { xi: xi.clone(), ground, embedding }),
                None => break,
            }
        }
        if found.len() == 2 {
            let p1 = found.pop().unwrap();
            let p0 = found.pop().unwrap();
            let witness = SumWitness { family: f.clone(), coloring: coloring.clone(), parts: [p0, p1] };
            return Ok(SearchOutcome { attempted, witness: Some(witness) });
        }
    }
    Ok(SearchOutcome { attempted, witness: None })
}

/// Builds `i` top-down: each child's image is its parent's image followed by
/// a block, the first elements of sibling blocks strictly increasing, which
/// keeps sibling images incomparable. Each child takes the lexicographically
/// least feasible block; subtrees are independent, so this greedy choice is
/// complete within the scheme. `path` holds the images of the nonempty
/// prefixes of the current node; results are memoized per (node, path).
struct Embedder<'a> {
    src: &'a Source,
    dst: &'a Family,
    coloring: &'a Coloring,
    j: u8,
    bound: u64,
    memo: HashMap<(FinSet, Vec<FinSet>), bool>,
}

impl Embedder<'_> {
    fn children(&self, node: &FinSet) -> Vec<u64> {
        (node.max_or_zero() + 1..=self.src.ground).filter(|&a| self.src.family.member(&node.with(a))).collect()
    }

    /// Lexicographically first maximal extension of the last image with
    /// color `j` against every image on the path.
    fn extension(&self, path: &[FinSet]) -> Option<FinSet> {
        let mut cur = path.last().map_or_else(Vec::new, |img| img.elems().to_vec());
        self.ext_dfs(&mut cur, path)
    }

    fn ext_dfs(&self, cur: &mut Vec<u64>, path: &[FinSet]) -> Option<FinSet> {
        let Some(next) = self.dst.min_ext(cur) else {
            let f = FinSet::from_sorted(cur.clone());
            return path.iter().all(|p| self.coloring.holds(self.j, p, &f)).then_some(f);
        };
        for n in next..=self.bound {
            cur.push(n);
            if self.dst.member_slice(cur) {
                if let Some(f) = self.ext_dfs(cur, path) {
                    return Some(f);
                }
            }
            cur.pop();
        }
        None
    }

    fn feasible(&mut self, node: &FinSet, path: &mut Vec<FinSet>) -> bool {
        let key = (node.clone(), path.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.solve(node, path, &mut ExtendedEmbedding::default());
        self.memo.insert(key, v);
        v
    }

    fn solve(&mut self, node: &FinSet, path: &mut Vec<FinSet>, out: &mut ExtendedEmbedding) -> bool {
        if self.src.family.min_ext(node.elems()).is_none() {
            return match self.extension(path) {
                Some(f) => {
                    out.e.insert(node.clone(), f);
                    true
                }
                None => false,
            };
        }
        let img = path.last().cloned().unwrap_or_else(FinSet::empty);
        let mut floor = img.max_or_zero() + 1;
        for a in self.children(node) {
            let child = node.with(a);
            let Some(cand) = self.first_block(&child, &img, floor, path) else { return false };
            floor = cand.elems()[img.len()] + 1;
            out.i.insert(child.clone(), cand.clone());
            path.push(cand);
            let ok = self.solve(&child, path, out);
            path.pop();
            debug_assert!(ok);
        }
        true
    }

    fn first_block(&mut self, child: &FinSet, img: &FinSet, floor: u64, path: &mut Vec<FinSet>) -> Option<FinSet> {
        for t in floor..=self.bound {
            let mut cur = img.elems().to_vec();
            cur.push(t);
            if !self.dst.member_slice(&cur) {
                continue;
            }
            if let Some(found) = self.block_dfs(child, &mut cur, path) {
                return Some(found);
            }
        }
        None
    }

    fn block_dfs(&mut self, child: &FinSet, cur: &mut Vec<u64>, path: &mut Vec<FinSet>) -> Option<FinSet> {
        let cand = FinSet::from_sorted(cur.clone());
        path.push(cand.clone());
        let ok = self.feasible(child, path);
        path.pop();
        if ok {
            return Some(cand);
        }
        for n in cur.last().unwrap() + 1..=self.bound {
            cur.push(n);
            if self.dst.member_slice(cur) {
                if let Some(found) = self.block_dfs(child, cur, path) {
                    return Some(found);
                }
            }
            cur.pop();
        }
        None
    }
}

fn embed(src: &Source, dst: &Family, coloring: &Coloring, j: u8, bound: u64) -> Option<ExtendedEmbedding> {
    let mut emb = Embedder { src, dst, coloring, j, bound, memo: HashMap::new() };
    let mut out = ExtendedEmbedding::default();
    emb.solve(&FinSet::empty(), &mut Vec::new(), &mut out).then_some(out)
}

// chain maps

/// Predicate on a chain `c` of nested sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainPred {
    Const(bool),
    LenEq(u64),
    LenLe(u64),
    LenGe(u64),
    /// The largest set of the chain ends in an even number.
    EvenTop,
    Not(Box<ChainPred>),
    And(Box<ChainPred>, Box<ChainPred>),
    Or(Box<ChainPred>, Box<ChainPred>),
}

impl ChainPred {
    pub fn eval(&self, c: &[FinSet]) -> bool {
        match self {
            ChainPred::Const(b) => *b,
            ChainPred::LenEq(k) => c.len() as u64 == *k,
            ChainPred::LenLe(k) => c.len() as u64 <= *k,
            ChainPred::LenGe(k) => c.len() as u64 >= *k,
            ChainPred::EvenTop => c.iter().map(FinSet::max_or_zero).max().unwrap_or(0) % 2 == 0,
            ChainPred::Not(p) => !p.eval(c),
            ChainPred::And(p, q) => p.eval(c) && q.eval(c),
            ChainPred::Or(p, q) => p.eval(c) || q.eval(c),
        }
    }

    /// Color of the chain: 0 where the predicate holds.
    pub fn color(&self, c: &[FinSet]) -> u8 {
        if self.eval(c) {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for ChainPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainPred::Const(true) => write!(f, "true"),
            ChainPred::Const(false) => write!(f, "false"),
            ChainPred::LenEq(k) => write!(f, "len_eq({k})"),
            ChainPred::LenLe(k) => write!(f, "len_le({k})"),
            ChainPred::LenGe(k) => write!(f, "len_ge({k})"),
            ChainPred::EvenTop => write!(f, "even_top"),
            ChainPred::Not(p) => write!(f, "not({p})"),
            ChainPred::And(p, q) => write!(f, "and({p},{q})"),
            ChainPred::Or(p, q) => write!(f, "or({p},{q})"),
        }
    }
}

/// `j` from nonempty members of `F ∩ [1, ground]` to chains in `F[G]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWitness {
    pub outer: Family,
    pub inner: Family,
    pub coloring: ChainPred,
    pub ground: u64,
    pub j: BTreeMap<FinSet, Vec<FinSet>>,
}

/// `j(E) = {E}`, valid whenever the inner family holds every singleton.
pub fn identity_chain_map(outer: &Family, inner: &Family, coloring: ChainPred, ground: u64) -> ProductWitness {
    let j = outer.enumerate(ground).into_iter().filter(|e| !e.is_empty()).map(|e| (e.clone(), vec![e])).collect();
    ProductWitness { outer: outer.clone(), inner: inner.clone(), coloring, ground, j }
}

/// `c < c'` iff every set of `c` is a proper initial segment of every set of `c'`.
pub fn chain_less(c: &[FinSet], d: &[FinSet]) -> bool {
    c.iter().all(|s| d.iter().all(|t| s.is_proper_prefix_of(t)))
}

pub fn verify_product_witness(w: &ProductWitness) -> Result<(), Violation> {
    let product = Family::prod(w.outer.clone(), w.inner.clone());
    let domain: Vec<FinSet> = w.outer.enumerate(w.ground).into_iter().filter(|e| !e.is_empty()).collect();
    for e in &domain {
        let Some(c) = w.j.get(e) else {
            return Err(violation("j is not defined on a source node", e.to_string()));
        };
        if c.is_empty() {
            return Err(violation("j(E) is an empty chain", e.to_string()));
        }
        for s in c {
            if s.is_empty() || !product.member(s) {
                return Err(violation("chain element is not a nonempty member of the product", format!("E={e} s={s}")));
            }
        }
        for (x, s) in c.iter().enumerate() {
            for t in &c[x + 1..] {
                if s == t || !(s.is_proper_prefix_of(t) || t.is_proper_prefix_of(s)) {
                    return Err(violation("j(E) is not a chain", format!("E={e} {s} {t}")));
                }
            }
        }
    }
    if let Some(extra) = w.j.keys().find(|k| !domain.contains(k)) {
        return Err(violation("j is defined outside the source nodes", extra.to_string()));
    }
    for a in &domain {
        for b in &domain {
            if a.is_proper_prefix_of(b) && !chain_less(&w.j[a], &w.j[b]) {
                return Err(violation("j is not order preserving", format!("E={a} E'={b}")));
            }
        }
    }
    for e in &domain {
        if w.coloring.color(&w.j[e]) != 0 {
            return Err(violation("j(E) has color 1", e.to_string()));
        }
    }
    Ok(())
}

// pruning

/// Closed-form index maps `ψ_E`, applied from `s(E)` onwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    Id,
    Scale(u64),
    Shift(u64),
    /// `n ↦ a·n + b`.
    Affine(u64, u64),
    /// `n ↦ p + 2(n - s)` with `p` the least even number `≥ max(s, s(φ(E)))`.
    NextEven,
    NextOdd,
}

impl Selector {
    /// `ψ(n)` given `s = s(E)` and `floor = s(φ(E))`.
    pub fn apply(self, n: u64, s: u64, floor: u64) -> u64 {
        match self {
            Selector::Id => n,
            Selector::Scale(k) => k * n,
            Selector::Shift(c) => n + c,
            Selector::Affine(a, b) => a * n + b,
            Selector::NextEven | Selector::NextOdd => {
                let want = if self == Selector::NextEven { 0 } else { 1 };
                let mut p = s.max(floor);
                if p % 2 != want {
                    p += 1;
                }
                p + 2 * (n - s)
            }
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Id => write!(f, "id"),
            Selector::Scale(k) => write!(f, "scale({k})"),
            Selector::Shift(c) => write!(f, "shift({c})"),
            Selector::Affine(a, b) => write!(f, "affine({a},{b})"),
            Selector::NextEven => write!(f, "nexteven"),
            Selector::NextOdd => write!(f, "nextodd"),
        }
    }
}

/// `φ` on the sampled nodes; `selectors[d]` drives the children of nodes at
/// depth `d`, the last one repeating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruningMap {
    pub family: Family,
    pub selectors: Vec<Selector>,
    pub depth: usize,
    pub breadth: u64,
    pub phi: BTreeMap<FinSet, FinSet>,
}

fn selector_at(selectors: &[Selector], depth: usize) -> Selector {
    selectors[depth.min(selectors.len() - 1)]
}

/// Samples nodes up to `depth` with the first `breadth` successors of each,
/// checking `φ(E⌢n) = φ(E)⌢ψ_E(n)`, strict increase of `ψ_E` and membership.
pub fn prune(f: &Family, selectors: &[Selector], depth: usize, breadth: u64) -> Result<PruningMap, Violation> {
    if selectors.is_empty() {
        return Err(violation("no selectors given", ""));
    }
    let mut phi = BTreeMap::new();
    phi.insert(FinSet::empty(), FinSet::empty());
    let mut frontier = vec![FinSet::empty()];
    for d in 0..depth {
        let sel = selector_at(selectors, d);
        let mut next = Vec::new();
        for e in frontier {
            let image = phi[&e].clone();
            let Some(s) = f.min_ext(e.elems()) else { continue };
            let floor = f.min_ext(image.elems()).unwrap_or(u64::MAX);
            if floor == u64::MAX {
                return Err(violation("image of a non-maximal node is maximal", format!("E={e} phi(E)={image}")));
            }
            let mut prev = None;
            for n in s..s + breadth {
                let child = e.with(n);
                if !f.member(&child) {
                    continue;
                }
                let t = sel.apply(n, s, floor);
                if prev.is_some_and(|p| t <= p) {
                    return Err(violation("selector is not strictly increasing", format!("E={e} n={n} psi={t}")));
                }
                prev = Some(t);
                if t <= image.max_or_zero() {
                    return Err(violation("selector output does not extend the image", format!("E={e} n={n} psi={t}")));
                }
                let img = image.with(t);
                if !f.member(&img) {
                    return Err(violation("image leaves the family", format!("E={child} phi={img}")));
                }
                phi.insert(child.clone(), img);
                next.push(child);
            }
        }
        frontier = next;
    }
    let map = PruningMap { family: f.clone(), selectors: selectors.to_vec(), depth, breadth, phi };
    verify_pruning(&map)?;
    Ok(map)
}

/// Re-checks a pruning table against its defining identity.
pub fn verify_pruning(map: &PruningMap) -> Result<(), Violation> {
    let f = &map.family;
    for (e, img) in &map.phi {
        if !f.member(img) {
            return Err(violation("image leaves the family", format!("E={e} phi={img}")));
        }
        if img.len() != e.len() {
            return Err(violation("image length differs", format!("E={e} phi={img}")));
        }
        if e.is_empty() {
            continue;
        }
        let parent = e.prefix(e.len() - 1);
        let Some(pimg) = map.phi.get(&parent) else {
            return Err(violation("parent missing from the table", e.to_string()));
        };
        let s = f.min_ext(parent.elems()).expect("parent has a child");
        let floor = f.min_ext(pimg.elems()).expect("checked during construction");
        let t = selector_at(&map.selectors, parent.len()).apply(e.max().unwrap(), s, floor);
        if *img != pimg.with(t) {
            return Err(violation("phi(E^n) differs from phi(E)^psi(n)", format!("E={e} phi={img}")));
        }
    }
    Ok(())
}

// text records

fn line_error(e: ParseError, line: usize, col_offset: usize) -> RamseyError {
    RamseyError::Parse(ParseError { line, column: e.column + col_offset, ..e })
}

fn record_error(line: usize, message: String) -> RamseyError {
    RamseyError::Parse(ParseError { kind: ErrorKind::Syntax, line, column: 1, offset: 0, message })
}

struct Records<'a> {
    lines: Vec<(usize, &'a str, &'a str)>,
    at: usize,
}

impl<'a> Records<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(i, l)| {
                let (k, r) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
                (i, k, r.trim_start())
            })
            .collect();
        Records { lines, at: 0 }
    }

    fn peek_key(&self) -> Option<&'a str> {
        self.lines.get(self.at).map(|l| l.1)
    }

    fn next(&mut self, key: &str) -> Result<(usize, &'a str), RamseyError> {
        match self.lines.get(self.at) {
            Some(&(n, k, rest)) if k == key => {
                self.at += 1;
                Ok((n, rest))
            }
            Some(&(n, k, _)) => Err(record_error(n, format!("expected '{key}', found '{k}'"))),
            None => Err(record_error(self.lines.last().map_or(1, |l| l.0), format!("expected '{key}', found end of input"))),
        }
    }

    fn parse<T>(&mut self, key: &str, f: impl FnOnce(&mut Parser<'a>) -> Result<T, ParseError>) -> Result<T, RamseyError> {
        let (n, rest) = self.next(key)?;
        let col = key.len() + 2;
        let mut p = Parser::new(rest);
        let v = f(&mut p).map_err(|e| line_error(e, n, col - 1))?;
        p.finish().map_err(|e| line_error(e, n, col - 1))?;
        Ok(v)
    }

    fn finish(&self) -> Result<(), RamseyError> {
        match self.lines.get(self.at) {
            Some(&(n, k, _)) => Err(record_error(n, format!("unexpected '{k}'"))),
            None => Ok(()),
        }
    }
}

fn arrow(p: &mut Parser) -> Result<(), ParseError> {
    p.expect('-')?;
    p.expect('>')
}

fn set_pair(p: &mut Parser) -> Result<(FinSet, FinSet), ParseError> {
    let a = p.set()?;
    arrow(p)?;
    Ok((a, p.set()?))
}

fn set_chain(p: &mut Parser) -> Result<(FinSet, Vec<FinSet>), ParseError> {
    let a = p.set()?;
    arrow(p)?;
    let mut c = vec![p.set()?];
    while !p.at_end() {
        c.push(p.set()?);
    }
    Ok((a, c))
}

fn write_embedding(out: &mut String, emb: &ExtendedEmbedding) {
    for (a, b) in &emb.i {
        out.push_str(&format!("i {a} -> {b}\n"));
    }
    for (a, b) in &emb.e {
        out.push_str(&format!("e {a} -> {b}\n"));
    }
}

impl fmt::Display for SumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        out.push_str("sum-witness\n");
        out.push_str(&format!("family {}\ncoloring {}\n", self.family, self.coloring));
        for (j, part) in self.parts.iter().enumerate() {
            out.push_str(&format!("part {j}\nxi {}\nground {}\n", part.xi, part.ground));
            write_embedding(&mut out, &part.embedding);
        }
        out.push_str("end\n");
        f.write_str(&out)
    }
}

impl std::str::FromStr for SumWitness {
    type Err = RamseyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = Records::new(s);
        r.next("sum-witness")?;
        let family = r.parse("family", Parser::family)?;
        let coloring = r.parse("coloring", Parser::coloring)?;
        let mut parts = Vec::new();
        for j in 0..2u64 {
            let (n, idx) = r.next("part")?;
            if idx != j.to_string() {
                return Err(record_error(n, format!("expected part {j}")));
            }
            let xi = r.parse("xi", Parser::ordinal)?;
            let ground = r.parse("ground", |p| p.u64("ground"))?;
            let mut embedding = ExtendedEmbedding::default();
            while r.peek_key() == Some("i") {
                let (a, b) = r.parse("i", set_pair)?;
                embedding.i.insert(a, b);
            }
            while r.peek_key() == Some("e") {
                let (a, b) = r.parse("e", set_pair)?;
                embedding.e.insert(a, b);
            }
            parts.push(SumPart { xi, ground, embedding });
        }
        r.next("end")?;
        r.finish()?;
        let p1 = parts.pop().unwrap();
        let p0 = parts.pop().unwrap();
        Ok(SumWitness { family, coloring, parts: [p0, p1] })
    }
}

impl fmt::Display for ProductWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "product-witness")?;
        writeln!(f, "outer {}\ninner {}\ncoloring {}\nground {}", self.outer, self.inner, self.coloring, self.ground)?;
        for (e, c) in &self.j {
            write!(f, "j {e} ->")?;
            for s in c {
                write!(f, " {s}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "end")
    }
}

impl std::str::FromStr for ProductWitness {
    type Err = RamseyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = Records::new(s);
        r.next("product-witness")?;
        let outer = r.parse("outer", Parser::family)?;
        let inner = r.parse("inner", Parser::family)?;
        let coloring = r.parse("coloring", Parser::chain_pred)?;
        let ground = r.parse("ground", |p| p.u64("ground"))?;
        let mut j = BTreeMap::new();
        while r.peek_key() == Some("j") {
            let (a, c) = r.parse("j", set_chain)?;
            j.insert(a, c);
        }
        r.next("end")?;
        r.finish()?;
        Ok(ProductWitness { outer, inner, coloring, ground, j })
    }
}

impl fmt::Display for PruningMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pruning")?;
        writeln!(f, "family {}", self.family)?;
        let sels: Vec<String> = self.selectors.iter().map(|s| s.to_string()).collect();
        writeln!(f, "selectors {}", sels.join(","))?;
        writeln!(f, "depth {}\nbreadth {}", self.depth, self.breadth)?;
        for (e, img) in &self.phi {
            writeln!(f, "phi {e} -> {img}")?;
        }
        writeln!(f, "end")
    }
}

impl std::str::FromStr for PruningMap {
    type Err = RamseyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = Records::new(s);
        r.next("pruning")?;
        let family = r.parse("family", Parser::family)?;
        let selectors = r.parse("selectors", Parser::selectors)?;
        let depth = r.parse("depth", |p| p.u64("depth"))? as usize;
        let breadth = r.parse("breadth", |p| p.u64("breadth"))?;
        let mut phi = BTreeMap::new();
        while r.peek_key() == Some("phi") {
            let (a, b) = r.parse("phi", set_pair)?;
            phi.insert(a, b);
        }
        r.next("end")?;
        r.finish()?;
        Ok(PruningMap { family, selectors, depth, breadth, phi })
    }
}

/// Colorings depending only on parities of `min`, `max` and cardinality of
/// `E` and `F`: the twelve parity atoms and every conjunction and
/// disjunction of two distinct atoms, 144 in all. Each is total.
pub fn parity_corpus() -> Vec<Coloring> {
    let mut atoms = Vec::new();
    for (_, t) in SetTerm::NAMES {
        atoms.push(Pred::Even(t));
        atoms.push(Pred::Odd(t));
    }
    let mut out: Vec<Coloring> = atoms.iter().cloned().map(Coloring::new).collect();
    for (x, p) in atoms.iter().enumerate() {
        for q in &atoms[x + 1..] {
            out.push(Coloring::new(Pred::And(Box::new(p.clone()), Box::new(q.clone()))));
            out.push(Coloring::new(Pred::Or(Box::new(p.clone()), Box::new(q.clone()))));
        }
    }
    out
}
