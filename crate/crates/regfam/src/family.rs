//! Regular families on finite subsets of the positive integers.
//!
//! A [`Family`] is an expression over a small constructor algebra. Every
//! operation here works structurally on the expression, unfolding the
//! Schreier, fine Schreier and power constructors one level at a time.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ordinal::Ordinal;

/// A strictly increasing finite sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet(Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{0} is not strictly increasing with positive entries")]
    BadSet(String),
    #[error("{set} is not a member of {family}")]
    NotMember { family: String, set: FinSet },
    #[error("{set} has no standard decomposition with respect to {family}")]
    NoDecomposition { family: String, set: FinSet },
    #[error("invalid relabeling: {0}")]
    BadRelabeling(String),
    #[error("diagonal rule needs a limit ordinal, got {0}")]
    NotLimit(Ordinal),
}

impl FinSet {
    pub fn new(elems: Vec<u64>) -> Result<Self, FamilyError> {
        let ok = elems.first().is_none_or(|&x| x >= 1) && elems.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(FinSet(elems))
        } else {
            Err(FamilyError::BadSet(format!("{elems:?}")))
        }
    }

    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    pub(crate) fn from_sorted(elems: Vec<u64>) -> Self {
        debug_assert!(FinSet::new(elems.clone()).is_ok());
        FinSet(elems)
    }

    pub fn elems(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// `max E`, with 0 for the empty set.
    pub fn max_or_zero(&self) -> u64 {
        self.max().unwrap_or(0)
    }

    /// `E⌢n`; panics unless `n > max E`.
    pub fn with(&self, n: u64) -> FinSet {
        assert!(n > self.max_or_zero(), "appended element must exceed max");
        let mut v = self.0.clone();
        v.push(n);
        FinSet(v)
    }

    /// `E|_k`.
    pub fn prefix(&self, k: usize) -> FinSet {
        FinSet(self.0[..k].to_vec())
    }

    pub fn slice(&self, from: usize, to: usize) -> FinSet {
        FinSet(self.0[from..to].to_vec())
    }

    pub fn concat(&self, other: &FinSet) -> FinSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FinSet::new(v).expect("concatenated sets must be successive")
    }

    /// `self ≺ other`: a proper initial segment.
    pub fn is_proper_prefix_of(&self, other: &FinSet) -> bool {
        self.len() < other.len() && other.0[..self.len()] == self.0[..]
    }

    pub fn is_prefix_of(&self, other: &FinSet) -> bool {
        self.len() <= other.len() && other.0[..self.len()] == self.0[..]
    }

    /// Equal length and coordinatewise `self ≤ other`.
    pub fn is_spread(&self, other: &FinSet) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.0.iter().all(|x| other.0.binary_search(x).is_ok())
    }

    /// All subsets, in no particular order.
    pub fn subsets(&self) -> Vec<FinSet> {
        let n = self.len();
        (0u64..(1 << n))
            .map(|mask| FinSet((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl From<FinSet> for Vec<u64> {
    fn from(s: FinSet) -> Self {
        s.0
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn is_spread(e: &FinSet, l: &FinSet) -> bool {
    e.is_spread(l)
}

pub fn is_subset(e: &FinSet, f: &FinSet) -> bool {
    e.is_subset(f)
}

/// A strictly increasing map `M: N -> N`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Relabeling {
    /// `n ↦ a + (n-1)d`.
    Ap { a: u64, d: u64 },
    /// An explicit prefix, then steps of `d` from its last entry.
    Explicit { prefix: Vec<u64>, d: u64 },
}

impl Relabeling {
    pub fn ap(a: u64, d: u64) -> Result<Self, FamilyError> {
        if a == 0 || d == 0 {
            return Err(FamilyError::BadRelabeling(format!("ap({a},{d})")));
        }
        Ok(Relabeling::Ap { a, d })
    }

    pub fn even() -> Self {
        Relabeling::Ap { a: 2, d: 2 }
    }

    pub fn odd() -> Self {
        Relabeling::Ap { a: 1, d: 2 }
    }

    pub fn explicit(prefix: Vec<u64>, d: u64) -> Result<Self, FamilyError> {
        if prefix.is_empty() || d == 0 || FinSet::new(prefix.clone()).is_err() {
            return Err(FamilyError::BadRelabeling(format!("seq({prefix:?};{d})")));
        }
        Ok(Relabeling::Explicit { prefix, d })
    }

    pub fn apply(&self, n: u64) -> u64 {
        match self {
            Relabeling::Ap { a, d } => a + (n - 1) * d,
            Relabeling::Explicit { prefix, d } => {
                let k = prefix.len() as u64;
                if n <= k {
                    prefix[(n - 1) as usize]
                } else {
                    prefix[prefix.len() - 1] + (n - k) * d
                }
            }
        }
    }

    pub fn apply_set(&self, e: &FinSet) -> FinSet {
        FinSet(e.0.iter().map(|&n| self.apply(n)).collect())
    }

    /// The least `n ≥ 1` with `M(n) ≥ m`.
    pub fn inverse_ceil(&self, m: u64) -> u64 {
        match self {
            Relabeling::Ap { a, d } => {
                if m <= *a {
                    1
                } else {
                    1 + (m - a).div_ceil(*d)
                }
            }
            Relabeling::Explicit { prefix, d } => {
                if let Some(i) = prefix.iter().position(|&p| p >= m) {
                    return i as u64 + 1;
                }
                let last = prefix[prefix.len() - 1];
                prefix.len() as u64 + (m - last).div_ceil(*d)
            }
        }
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relabeling::Ap { a: 2, d: 2 } => write!(f, "even"),
            Relabeling::Ap { a: 1, d: 2 } => write!(f, "odd"),
            Relabeling::Ap { a, d } => write!(f, "ap({a},{d})"),
            Relabeling::Explicit { prefix, d } => {
                write!(f, "seq(")?;
                for (i, p) in prefix.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ";{d})")
            }
        }
    }
}

/// Closed-form index sequences `k ↦ G_k` for the diagonal constructor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum DiagRule {
    /// `k ↦ A(k)`.
    Card,
    /// `k ↦ S[λ[k]]`.
    Schreier(Ordinal),
    /// `k ↦ FS[λ[k]]`.
    Fine(Ordinal),
}

impl DiagRule {
    pub fn at(&self, k: u64) -> Family {
        match self {
            DiagRule::Card => Family::Card(k),
            DiagRule::Schreier(l) => Family::Schreier(l.fundamental_sequence(k).expect("validated limit")),
            DiagRule::Fine(l) => Family::Fine(l.fundamental_sequence(k).expect("validated limit")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    /// Sets of cardinality at most n.
    Card(u64),
    /// `{E : |E| ≤ min E}`.
    SchreierBase,
    Schreier(Ordinal),
    Fine(Ordinal),
    /// `{F⌢G : F ∈ f, G ∈ g}`.
    Sum(Arc<Family>, Arc<Family>),
    /// `f[g]`: unions of successive members of g whose minima lie in f.
    Prod(Arc<Family>, Arc<Family>),
    Pow(Arc<Family>, u32),
    /// `{E : E ∈ G_k for some k ≤ min E}`.
    Diag(DiagRule),
    /// `M⁻¹(f) = {E : M(E) ∈ f}`.
    Pre(Relabeling, Arc<Family>),
}

impl Family {
    pub fn sum(f: Family, g: Family) -> Family {
        Family::Sum(Arc::new(f), Arc::new(g))
    }

    pub fn prod(f: Family, g: Family) -> Family {
        Family::Prod(Arc::new(f), Arc::new(g))
    }

    pub fn pow(f: Family, n: u32) -> Family {
        Family::Pow(Arc::new(f), n)
    }

    pub fn pre(m: Relabeling, f: Family) -> Family {
        Family::Pre(m, Arc::new(f))
    }

    pub fn schreier(x: u64) -> Family {
        Family::Schreier(Ordinal::from(x))
    }

    pub fn fine(x: u64) -> Family {
        Family::Fine(Ordinal::from(x))
    }

    /// Rejects diagonal rules over non-limit ordinals, recursively.
    pub fn validate(&self) -> Result<(), FamilyError> {
        match self {
            Family::Diag(DiagRule::Schreier(l) | DiagRule::Fine(l)) if !l.is_limit() => {
                Err(FamilyError::NotLimit(l.clone()))
            }
            Family::Sum(f, g) | Family::Prod(f, g) => {
                f.validate()?;
                g.validate()
            }
            Family::Pow(f, _) | Family::Pre(_, f) => f.validate(),
            _ => Ok(()),
        }
    }

    /// One step of unfolding into the core constructors
    /// `Card`, `Diag`, `Sum`, `Prod`, `Pre`.
    pub fn unfold(&self) -> Family {
        match self {
            Family::SchreierBase => Family::Diag(DiagRule::Card),
            Family::Schreier(x) => {
                if x.is_zero() {
                    Family::Card(1)
                } else if let Some(p) = x.pred() {
                    Family::prod(Family::SchreierBase, Family::Schreier(p))
                } else {
                    Family::Diag(DiagRule::Schreier(x.clone()))
                }
            }
            Family::Fine(x) => {
                if x.is_zero() {
                    Family::Card(0)
                } else if let Some(p) = x.pred() {
                    Family::sum(Family::Card(1), Family::Fine(p))
                } else {
                    Family::Diag(DiagRule::Fine(x.clone()))
                }
            }
            Family::Pow(f, n) => match n {
                0 => Family::Card(1),
                1 => Family::clone(f),
                _ => Family::Prod(f.clone(), Arc::new(Family::Pow(f.clone(), n - 1))),
            },
            other => other.clone(),
        }
    }

    fn is_core(&self) -> bool {
        matches!(self, Family::Card(_) | Family::Diag(_) | Family::Sum(..) | Family::Prod(..) | Family::Pre(..))
    }

    /// Membership of `E⌢n` does not depend on `n > max E`.
    pub fn tail_invariant(&self) -> bool {
        match self {
            Family::Pre(..) => false,
            Family::Sum(f, g) | Family::Prod(f, g) => f.tail_invariant() && g.tail_invariant(),
            Family::Pow(f, _) => f.tail_invariant(),
            _ => true,
        }
    }

    pub fn member(&self, e: &FinSet) -> bool {
        if e.is_empty() {
            return true;
        }
        self.member_slice(e.elems())
    }

    pub(crate) fn member_slice(&self, e: &[u64]) -> bool {
        if e.is_empty() {
            return true;
        }
        match self {
            Family::Card(n) => e.len() as u64 <= *n,
            Family::SchreierBase | Family::Diag(DiagRule::Card) => e.len() as u64 <= e[0],
            Family::Diag(rule) => (1..=e[0]).any(|k| rule.at(k).member_slice(e)),
            Family::Sum(f, g) => {
                for i in 0..=e.len() {
                    if !f.member_slice(&e[..i]) {
                        break;
                    }
                    if g.member_slice(&e[i..]) {
                        return true;
                    }
                }
                false
            }
            Family::Prod(f, g) => match decompose_slice(g, e) {
                Some(blocks) => {
                    let minima: Vec<u64> = blocks.iter().map(|&(s, _)| e[s]).collect();
                    f.member_slice(&minima)
                }
                None => false,
            },
            Family::Pre(m, f) => {
                let image: Vec<u64> = e.iter().map(|&n| m.apply(n)).collect();
                f.member_slice(&image)
            }
            other => other.unfold().member_slice(e),
        }
    }

    /// The least `n > max E` with `E⌢n` a member, or `None` when `E` is
    /// maximal.
    pub fn min_extension(&self, e: &FinSet) -> Result<Option<u64>, FamilyError> {
        if !self.member(e) {
            return Err(self.not_member(e));
        }
        Ok(self.min_ext(e.elems()))
    }

    pub fn is_maximal(&self, e: &FinSet) -> Result<bool, FamilyError> {
        Ok(self.min_extension(e)?.is_none())
    }

    pub(crate) fn not_member(&self, e: &FinSet) -> FamilyError {
        FamilyError::NotMember { family: self.to_string(), set: e.clone() }
    }

    /// Assumes membership.
    pub(crate) fn min_ext(&self, e: &[u64]) -> Option<u64> {
        let floor = e.last().map_or(1, |m| m + 1);
        match self {
            Family::Card(n) => ((e.len() as u64) < *n).then_some(floor),
            Family::SchreierBase | Family::Diag(DiagRule::Card) => match e.first() {
                None => Some(1),
                Some(&m) => ((e.len() as u64) < m).then_some(floor),
            },
            Family::Diag(rule) => match e.first() {
                Some(&m) => (1..=m)
                    .map(|k| rule.at(k))
                    .filter(|g| g.member_slice(e))
                    .filter_map(|g| g.min_ext(e))
                    .min(),
                None => (1..=DIAG_SINGLETON_SCAN).find(|&n| {
                    (1..=n).any(|k| rule.at(k).min_ext(&[]).is_some_and(|v| v <= n))
                }),
            },
            Family::Sum(f, g) => {
                let mut best: Option<u64> = None;
                let mut offer = |v: Option<u64>| {
                    if let Some(v) = v {
                        best = Some(best.map_or(v, |b| b.min(v)));
                    }
                };
                for i in 0..=e.len() {
                    if !f.member_slice(&e[..i]) {
                        break;
                    }
                    if !g.member_slice(&e[i..]) {
                        continue;
                    }
                    if i == e.len() {
                        offer(f.min_ext(e));
                        offer(g.min_ext(&[]).map(|v| v.max(floor)));
                    } else {
                        offer(g.min_ext(&e[i..]));
                    }
                }
                best
            }
            Family::Prod(f, g) => {
                if e.is_empty() {
                    return match (f.min_ext(&[]), g.min_ext(&[])) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                }
                let blocks = decompose_slice(g, e).expect("member has a decomposition");
                let (s, t) = *blocks.last().unwrap();
                let minima: Vec<u64> = blocks.iter().map(|&(s, _)| e[s]).collect();
                let extend = g.min_ext(&e[s..t]);
                let open = match (g.min_ext(&[]), f.min_ext(&minima)) {
                    (Some(a), Some(b)) => Some(a.max(b).max(floor)),
                    _ => None,
                };
                match (extend, open) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            }
            Family::Pre(m, f) => {
                let image: Vec<u64> = e.iter().map(|&n| m.apply(n)).collect();
                f.min_ext(&image).map(|v| m.inverse_ceil(v))
            }
            other => {
                debug_assert!(!other.is_core());
                other.unfold().min_ext(e)
            }
        }
    }

    /// Greedy maximal initial segments of `E` lying in `self`.
    pub fn standard_decomposition(&self, e: &FinSet) -> Result<Vec<FinSet>, FamilyError> {
        if e.is_empty() {
            return Ok(Vec::new());
        }
        match decompose_slice(self, e.elems()) {
            Some(blocks) => Ok(blocks.into_iter().map(|(s, t)| e.slice(s, t)).collect()),
            None => Err(FamilyError::NoDecomposition { family: self.to_string(), set: e.clone() }),
        }
    }

    /// Successive blocks whose minima form a member of `self`.
    pub fn is_admissible(&self, blocks: &[FinSet]) -> bool {
        if blocks.iter().any(FinSet::is_empty) {
            return false;
        }
        if blocks.windows(2).any(|w| FinSet::max(&w[0]) >= FinSet::min(&w[1])) {
            return false;
        }
        let minima: Vec<u64> = blocks.iter().map(|b| b.min().unwrap()).collect();
        self.member_slice(&minima)
    }

    /// All members contained in `[1, n]`, in lexicographic order.
    pub fn enumerate(&self, n: u64) -> Vec<FinSet> {
        let ground: Vec<u64> = (1..=n).collect();
        self.members_within(&ground)
    }

    /// All members contained in a sorted ground set, in lexicographic order.
    pub fn members_within(&self, ground: &[u64]) -> Vec<FinSet> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.dfs(ground, 0, &mut cur, &mut out);
        out
    }

    fn dfs(&self, ground: &[u64], from: usize, cur: &mut Vec<u64>, out: &mut Vec<FinSet>) {
        out.push(FinSet(cur.clone()));
        for i in from..ground.len() {
            cur.push(ground[i]);
            if self.member_slice(cur) {
                self.dfs(ground, i + 1, cur, out);
            }
            cur.pop();
        }
    }
}

const DIAG_SINGLETON_SCAN: u64 = 1 << 16;

/// Standard decomposition as index ranges, or `None` if `(min E) ∉ g`.
pub(crate) fn decompose_slice(g: &Family, e: &[u64]) -> Option<Vec<(usize, usize)>> {
    if e.is_empty() {
        return Some(Vec::new());
    }
    if !g.member_slice(&e[..1]) {
        return None;
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < e.len() {
        let mut end = start + 1;
        while end < e.len() && g.member_slice(&e[start..=end]) {
            end += 1;
        }
        blocks.push((start, end));
        start = end;
    }
    Some(blocks)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Card(n) => write!(f, "A({n})"),
            Family::SchreierBase => write!(f, "S"),
            Family::Schreier(x) => write!(f, "S[{x}]"),
            Family::Fine(x) => write!(f, "FS[{x}]"),
            Family::Sum(a, b) => write!(f, "sum({a},{b})"),
            Family::Prod(a, b) => write!(f, "prod({a},{b})"),
            Family::Pow(a, n) => write!(f, "pow({a},{n})"),
            Family::Diag(DiagRule::Card) => write!(f, "diag(A)"),
            Family::Diag(DiagRule::Schreier(l)) => write!(f, "diag(S,{l})"),
            Family::Diag(DiagRule::Fine(l)) => write!(f, "diag(FS,{l})"),
            Family::Pre(m, a) => write!(f, "pre({m},{a})"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = crate::dsl::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_family(s)
    }
}

impl std::str::FromStr for FinSet {
    type Err = crate::dsl::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_set(s)
    }
}
