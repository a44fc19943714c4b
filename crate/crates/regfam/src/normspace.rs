//! Exact norms of finitely supported vectors: family-sup ℓ₁ norms, mixed
//! Tsirelson norms and finite direct sums.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::family::{Family, FamilyError, FinSet};

pub const DEFAULT_SUPPORT_LIMIT: usize = 24;
const HARD_SUPPORT_LIMIT: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("support has {size} positions, above the limit of {limit}")]
    SupportTooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("expected {expected} parts, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0}")]
    WrongSpace(String),
    #[error("base family {0} does not contain the singletons")]
    NoSingletons(String),
}

/// Finitely supported vector with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseVec(BTreeMap<u64, BigRational>);

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec(BTreeMap::new())
    }

    /// Later entries overwrite earlier ones at the same position.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut v = SparseVec::zero();
        for (p, c) in pairs {
            v.set(p, c);
        }
        v
    }

    /// `Σ_{i∈E} a_i e_i` with coefficients in the order of `E`.
    pub fn on_set(e: &FinSet, coeffs: &[BigRational]) -> Self {
        SparseVec::from_pairs(e.elems().iter().copied().zip(coeffs.iter().cloned()))
    }

    pub fn set(&mut self, pos: u64, c: BigRational) {
        assert!(pos >= 1, "positions start at 1");
        if c.is_zero() {
            self.0.remove(&pos);
        } else {
            self.0.insert(pos, c);
        }
    }

    pub fn get(&self, pos: u64) -> BigRational {
        self.0.get(&pos).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn contains(&self, pos: u64) -> bool {
        self.0.contains_key(&pos)
    }

    pub fn support(&self) -> Vec<u64> {
        self.0.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.0.iter().map(|(&p, c)| (p, c))
    }

    pub fn l1(&self) -> BigRational {
        self.0.values().fold(BigRational::zero(), |acc, c| acc + c.abs())
    }

    /// `P_E x`.
    pub fn restrict(&self, e: &[u64]) -> SparseVec {
        SparseVec(self.0.iter().filter(|(p, _)| e.binary_search(p).is_ok()).map(|(&p, c)| (p, c.clone())).collect())
    }

    pub fn scale(&self, r: &BigRational) -> SparseVec {
        SparseVec::from_pairs(self.iter().map(|(p, c)| (p, c * r)))
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.set(p, out.get(p) + c);
        }
        out
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (p, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}:{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for SparseVec {
    type Err = crate::dsl::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_vector(s)
    }
}

/// Weights `1 > θ_1 > θ_2 > … → 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ThetaSeq {
    /// `θ_n = θ^n`.
    Geometric(BigRational),
    /// `θ_n = head[n-1]` for `n ≤ k`, then `head[k-1]·ratio^(n-k)`.
    Explicit { head: Vec<BigRational>, ratio: BigRational },
}

fn in_unit(r: &BigRational) -> bool {
    r.is_positive() && *r < BigRational::one()
}

impl ThetaSeq {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            ThetaSeq::Geometric(t) if !in_unit(t) => Err(format!("theta {t} must lie strictly between 0 and 1")),
            ThetaSeq::Explicit { head, ratio } => {
                if let Some(t) = head.iter().find(|t| !in_unit(t)) {
                    return Err(format!("theta {t} must lie strictly between 0 and 1"));
                }
                if head.windows(2).any(|w| w[0] <= w[1]) {
                    return Err("theta values must be strictly decreasing".into());
                }
                if !in_unit(ratio) {
                    return Err(format!("tail ratio {ratio} must lie strictly between 0 and 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `θ_m` for `m ≥ 1`.
    pub fn at(&self, m: u32) -> BigRational {
        assert!(m >= 1);
        match self {
            ThetaSeq::Geometric(t) => num_traits::pow(t.clone(), m as usize),
            ThetaSeq::Explicit { head, ratio } => {
                let k = head.len() as u32;
                if m <= k {
                    head[m as usize - 1].clone()
                } else {
                    head[k as usize - 1].clone() * num_traits::pow(ratio.clone(), (m - k) as usize)
                }
            }
        }
    }
}

impl fmt::Display for ThetaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSeq::Geometric(t) => write!(f, "{t}"),
            ThetaSeq::Explicit { head, ratio } => {
                write!(f, "seq(")?;
                for (i, t) in head.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ";{ratio})")
            }
        }
    }
}

/// Closed-form family sequences `n ↦ G_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GSeq {
    Const(Family),
    /// `n ↦ [F]^n`.
    Pow(Family),
    /// `n ↦ S[n]`.
    Schreier,
    /// `n ↦ FS[n]`.
    Fine,
    /// `n ↦ A(n)`.
    Card,
}

impl GSeq {
    pub fn at(&self, m: u32) -> Family {
        match self {
            GSeq::Const(f) => f.clone(),
            GSeq::Pow(f) => Family::pow(f.clone(), m),
            GSeq::Schreier => Family::schreier(m as u64),
            GSeq::Fine => Family::fine(m as u64),
            GSeq::Card => Family::Card(m as u64),
        }
    }
}

impl fmt::Display for GSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSeq::Const(g) => write!(f, "{g}"),
            GSeq::Pow(g) => write!(f, "pow({g},n)"),
            GSeq::Schreier => write!(f, "S[n]"),
            GSeq::Fine => write!(f, "FS[n]"),
            GSeq::Card => write!(f, "A(n)"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Space {
    /// `‖x‖ = max_{E∈G} ‖P_E x‖_{ℓ₁}`.
    FamilySup(Family),
    /// `T(G_0, (θ_n, G_n))`.
    Tsirelson { g0: Family, thetas: ThetaSeq, gseq: GSeq },
    /// `T(θ, G)`.
    SingleTsirelson { theta: BigRational, g: Family },
    /// `(⊕ X_i)_U` with summand `i` at position `i` of `U`.
    DirectSum { u: Box<Space>, summands: Vec<Space> },
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::FamilySup(Family::Schreier(x)) => write!(f, "X[{x}]"),
            Space::FamilySup(g) => write!(f, "sup({g})"),
            Space::Tsirelson { g0, thetas, gseq } => write!(f, "T({thetas};{g0};{gseq})"),
            Space::SingleTsirelson { theta, g } => write!(f, "T({theta},{g})"),
            Space::DirectSum { u, summands } => {
                write!(f, "dsum({u};")?;
                for (i, s) in summands.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl std::str::FromStr for Space {
    type Err = crate::dsl::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_space(s)
    }
}

impl Space {
    /// `(θ_m, G_m)` of a Tsirelson form. For `T(θ,G)` these are `(θ^m, [G]^m)`.
    pub fn level(&self, m: u32) -> Option<(BigRational, Family)> {
        match self {
            Space::Tsirelson { thetas, gseq, .. } => Some((thetas.at(m), gseq.at(m))),
            Space::SingleTsirelson { theta, g } => {
                Some((num_traits::pow(theta.clone(), m as usize), Family::pow(g.clone(), m)))
            }
            _ => None,
        }
    }

    pub fn base_family(&self) -> Option<Family> {
        match self {
            Space::FamilySup(g) => Some(g.clone()),
            Space::Tsirelson { g0, .. } => Some(g0.clone()),
            Space::SingleTsirelson { .. } => Some(Family::Card(1)),
            Space::DirectSum { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NormOptions {
    pub support_limit: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { support_limit: DEFAULT_SUPPORT_LIMIT }
    }
}

/// `max_{E∈G} Σ_{i∈E} |x_i|`.
pub fn family_sup_norm(g: &Family, x: &SparseVec) -> BigRational {
    let pos = x.support();
    let w: Vec<BigRational> = x.iter().map(|(_, c)| c.abs()).collect();
    let mut best = BigRational::zero();
    let mut cur = Vec::new();
    sup_dfs(g, &pos, &w, 0, &mut cur, &BigRational::zero(), &mut best);
    best
}

fn sup_dfs(
    g: &Family,
    pos: &[u64],
    w: &[BigRational],
    from: usize,
    cur: &mut Vec<u64>,
    acc: &BigRational,
    best: &mut BigRational,
) {
    if *acc > *best {
        *best = acc.clone();
    }
    for i in from..pos.len() {
        cur.push(pos[i]);
        if g.member_slice(cur) {
            sup_dfs(g, pos, w, i + 1, cur, &(acc + &w[i]), best);
        }
        cur.pop();
    }
}

/// Mixed Tsirelson parameters as used by the evaluator.
struct Mixed {
    g0: Family,
    thetas: ThetaSeq,
    gseq: GSeq,
}

impl Mixed {
    fn of(space: &Space) -> Result<Mixed, NormError> {
        match space {
            Space::Tsirelson { g0, thetas, gseq } => Ok(Mixed { g0: g0.clone(), thetas: thetas.clone(), gseq: gseq.clone() }),
            // One level suffices: the [G]^m levels with weight θ^m are
            // dominated by iterating the first.
            Space::SingleTsirelson { theta, g } => Ok(Mixed {
                g0: Family::Card(1),
                thetas: ThetaSeq::Geometric(theta.clone()),
                gseq: GSeq::Const(g.clone()),
            }),
            other => Err(NormError::WrongSpace(format!("{other} is not a Tsirelson space"))),
        }
    }

    /// Levels after the first are skipped when the family never changes.
    fn level_count_cap(&self) -> Option<u32> {
        matches!(self.gseq, GSeq::Const(_)).then_some(1)
    }
}

/// Member sets of a family inside the support, as index lists, grouped by
/// first index; only sets with at least two elements are kept.
struct Level {
    theta: BigRational,
    by_first: Vec<Vec<Vec<usize>>>,
}

fn index_members(g: &Family, pos: &[u64]) -> Vec<Vec<usize>> {
    g.members_within(pos)
        .into_iter()
        .map(|e| e.elems().iter().map(|p| pos.binary_search(p).unwrap()).collect())
        .collect()
}

struct Evaluator {
    pos: Vec<u64>,
    w: Vec<BigRational>,
    /// `n[a][b]` is the norm of the restriction to support indices `a..=b`.
    n: Vec<Vec<BigRational>>,
    levels: Vec<Level>,
    base: Vec<Vec<BigRational>>,
    mixed: Mixed,
}

impl Evaluator {
    fn new(space: &Space, x: &SparseVec, opts: NormOptions) -> Result<Evaluator, NormError> {
        let mixed = Mixed::of(space)?;
        if !mixed.g0.member(&FinSet::from_sorted(vec![1])) {
            return Err(NormError::NoSingletons(mixed.g0.to_string()));
        }
        let size = x.len();
        let limit = opts.support_limit.min(HARD_SUPPORT_LIMIT);
        if size > limit {
            return Err(NormError::SupportTooLarge { size, limit });
        }
        let pos = x.support();
        let w: Vec<BigRational> = x.iter().map(|(_, c)| c.abs()).collect();
        let len = pos.len();

        let mut base = vec![vec![BigRational::zero(); len]; len];
        for m in index_members(&mixed.g0, &pos).into_iter().filter(|m| !m.is_empty()) {
            let v = m.iter().fold(BigRational::zero(), |acc, &i| acc + &w[i]);
            let (a, b) = (m[0], *m.last().unwrap());
            if v > base[a][b] {
                base[a][b] = v;
            }
        }
        for width in 1..len {
            for a in 0..len - width {
                let b = a + width;
                let best = base[a][b].clone().max(base[a + 1][b].clone()).max(base[a][b - 1].clone());
                base[a][b] = best;
            }
        }

        let mut ev = Evaluator { pos, w, n: Vec::new(), levels: Vec::new(), base, mixed };
        if len > 0 {
            let ratio_floor = ev.min_sup_to_l1_ratio();
            let cap = ev.mixed.level_count_cap().unwrap_or(u32::MAX);
            let mut m = 1;
            while m <= cap {
                let theta = ev.mixed.thetas.at(m);
                if theta <= ratio_floor {
                    break;
                }
                let mut by_first = vec![Vec::new(); len];
                for set in index_members(&ev.mixed.gseq.at(m), &ev.pos) {
                    if set.len() >= 2 {
                        by_first[set[0]].push(set);
                    }
                }
                ev.levels.push(Level { theta, by_first });
                m += 1;
            }
        }
        ev.solve();
        Ok(ev)
    }

    /// A level `θ_m` can only matter on an interval where
    /// `θ_m·ℓ₁ > max |x_i|`; this is the least such ratio.
    fn min_sup_to_l1_ratio(&self) -> BigRational {
        let len = self.pos.len();
        let mut best: Option<BigRational> = None;
        for a in 0..len {
            let mut l1 = BigRational::zero();
            let mut mx = BigRational::zero();
            for b in a..len {
                l1 += &self.w[b];
                if self.w[b] > mx {
                    mx = self.w[b].clone();
                }
                let r = &mx / &l1;
                if best.as_ref().is_none_or(|x| r < *x) {
                    best = Some(r);
                }
            }
        }
        best.unwrap()
    }

    fn l1(&self, a: usize, b: usize) -> BigRational {
        self.w[a..=b].iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// Sum of block norms for minima `set`, the last block running to `b`.
    fn blocks(&self, set: &[usize], b: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for win in set.windows(2) {
            acc += &self.n[win[0]][win[1] - 1];
        }
        acc + &self.n[*set.last().unwrap()][b]
    }

    fn solve(&mut self) {
        let len = self.pos.len();
        self.n = vec![vec![BigRational::zero(); len]; len];
        for a in (0..len).rev() {
            // closed[m][l]: best sum over completed blocks of sets starting at
            // `a` whose last minimum is `l`.
            let mut closed: Vec<Vec<Option<BigRational>>> = vec![vec![None; len]; self.levels.len()];
            for b in a..len {
                for (li, level) in self.levels.iter().enumerate() {
                    for set in level.by_first[a].iter().filter(|s| *s.last().unwrap() == b) {
                        let mut acc = BigRational::zero();
                        for win in set.windows(2) {
                            acc += &self.n[win[0]][win[1] - 1];
                        }
                        let slot = &mut closed[li][b];
                        if slot.as_ref().is_none_or(|c| acc > *c) {
                            *slot = Some(acc);
                        }
                    }
                }
                let mut best = self.base[a][b].clone();
                if a < b && self.n[a + 1][b] > best {
                    best = self.n[a + 1][b].clone();
                }
                let l1 = self.l1(a, b);
                for (li, level) in self.levels.iter().enumerate() {
                    if &level.theta * &l1 <= best {
                        break;
                    }
                    for (l, acc) in closed[li].iter().enumerate().take(b + 1).skip(a + 1) {
                        if let Some(acc) = acc {
                            let v = &level.theta * (acc + &self.n[l][b]);
                            if v > best {
                                best = v;
                            }
                        }
                    }
                }
                self.n[a][b] = best;
            }
        }
    }

    fn norm(&self) -> BigRational {
        match self.pos.len() {
            0 => BigRational::zero(),
            len => self.n[0][len - 1].clone(),
        }
    }

    /// Right-hand side of the implicit equation at the full support, now
    /// admitting every member set including the single full block.
    fn full_rhs(&self) -> BigRational {
        let len = self.pos.len();
        if len == 0 {
            return BigRational::zero();
        }
        let mut best = self.base[0][len - 1].clone();
        for (m, level) in (1u32..).zip(&self.levels) {
            let family = self.mixed.gseq.at(m);
            for set in index_members(&family, &self.pos).into_iter().filter(|s| !s.is_empty()) {
                let v = &level.theta * self.blocks(&set, len - 1);
                if v > best {
                    best = v;
                }
            }
        }
        best
    }
}

pub fn tsirelson_norm(space: &Space, x: &SparseVec) -> Result<BigRational, NormError> {
    tsirelson_norm_with(space, x, NormOptions::default())
}

pub fn tsirelson_norm_with(space: &Space, x: &SparseVec, opts: NormOptions) -> Result<BigRational, NormError> {
    Ok(Evaluator::new(space, x, opts)?.norm())
}

/// The computed norm and the implicit equation's right-hand side evaluated
/// at it; the two agree for a correct solution.
pub fn tsirelson_fixpoint(space: &Space, x: &SparseVec, opts: NormOptions) -> Result<(BigRational, BigRational), NormError> {
    let ev = Evaluator::new(space, x, opts)?;
    Ok((ev.norm(), ev.full_rhs()))
}

/// Norm in any non-sum space.
pub fn norm(space: &Space, x: &SparseVec, opts: NormOptions) -> Result<BigRational, NormError> {
    match space {
        Space::FamilySup(g) => Ok(family_sup_norm(g, x)),
        Space::Tsirelson { .. } | Space::SingleTsirelson { .. } => tsirelson_norm_with(space, x, opts),
        Space::DirectSum { .. } => Err(NormError::WrongSpace("a direct sum takes one vector per summand".into())),
    }
}

/// `‖(x_i)‖ = ‖Σ ‖x_i‖ e_i‖_U`.
pub fn direct_sum_norm(space: &Space, parts: &[SparseVec], opts: NormOptions) -> Result<BigRational, NormError> {
    let Space::DirectSum { u, summands } = space else {
        return Err(NormError::WrongSpace(format!("{space} is not a direct sum")));
    };
    if parts.len() != summands.len() {
        return Err(NormError::LengthMismatch { expected: summands.len(), got: parts.len() });
    }
    let mut outer = SparseVec::zero();
    for (i, (s, x)) in summands.iter().zip(parts).enumerate() {
        let v = match s {
            Space::DirectSum { .. } => {
                return Err(NormError::WrongSpace("nested direct sums are not supported".into()));
            }
            _ => norm(s, x, opts)?,
        };
        outer.set(i as u64 + 1, v);
    }
    norm(u, &outer, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCertificate {
    pub norm: BigRational,
    pub bound: BigRational,
}

impl LowerCertificate {
    pub fn holds(&self) -> bool {
        self.norm >= self.bound
    }
}

/// Checks `‖Σ a_i e_i‖ ≥ θ_m^k Σ|a_i|` for `E ∈ [G_m]^k[G_0]`.
pub fn l1_lower_certificate(
    space: &Space,
    e: &FinSet,
    m: u32,
    k: u32,
    coeffs: &[BigRational],
    opts: NormOptions,
) -> Result<LowerCertificate, NormError> {
    if m == 0 {
        return Err(NormError::WrongSpace("levels start at 1".into()));
    }
    let (theta, gm) = space
        .level(m)
        .ok_or_else(|| NormError::WrongSpace(format!("{space} is not a Tsirelson space")))?;
    if coeffs.len() != e.len() {
        return Err(NormError::LengthMismatch { expected: e.len(), got: coeffs.len() });
    }
    let g0 = space.base_family().unwrap();
    let composed = Family::prod(Family::pow(gm, k), g0);
    if !composed.member(e) {
        return Err(composed.not_member(e).into());
    }
    let x = SparseVec::on_set(e, coeffs);
    let bound = num_traits::pow(theta, k as usize) * x.l1();
    Ok(LowerCertificate { norm: tsirelson_norm_with(space, &x, opts)?, bound })
}

/// The tree vectors `x_F = e^{min E_i}_{max F}` evaluated in
/// `(⊕ X_ζ)_{U}`, where `E_i` is the last block of the decomposition of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierSumWitness {
    pub value: BigRational,
    pub l1: BigRational,
    pub parts: Vec<SparseVec>,
    pub space: Space,
}

impl SchreierSumWitness {
    pub fn holds(&self) -> bool {
        self.value >= self.l1
    }
}

pub fn schreier_sum_witness(
    inner: &Space,
    outer: &Family,
    e: &FinSet,
    coeffs: &[BigRational],
    opts: NormOptions,
) -> Result<SchreierSumWitness, NormError> {
    let Space::FamilySup(g) = inner else {
        return Err(NormError::WrongSpace(format!("{inner} is not a family-sup space")));
    };
    if coeffs.len() != e.len() {
        return Err(NormError::LengthMismatch { expected: e.len(), got: coeffs.len() });
    }
    let product = Family::prod(outer.clone(), g.clone());
    if !product.member(e) {
        return Err(product.not_member(e).into());
    }
    let copies = e.max_or_zero() as usize;
    let mut parts = vec![SparseVec::zero(); copies];
    let blocks = g.standard_decomposition(e)?;
    let mut idx = 0;
    for block in &blocks {
        let summand = block.min().unwrap() as usize;
        for &p in block.elems() {
            // x_F for the prefix F ending at p
            let c = &coeffs[idx];
            let slot = &mut parts[summand - 1];
            slot.set(p, slot.get(p) + c);
            idx += 1;
        }
    }
    let space = Space::DirectSum { u: Box::new(Space::FamilySup(outer.clone())), summands: vec![inner.clone(); copies] };
    let value = direct_sum_norm(&space, &parts, opts)?;
    let l1 = coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c.abs());
    Ok(SchreierSumWitness { value, l1, parts, space })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::family::tests::{fam, set};
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    pub fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn space(s: &str) -> Space {
        s.parse().unwrap()
    }

    fn vec_of(s: &str) -> SparseVec {
        s.parse().unwrap()
    }

    /// Independent evaluator: arbitrary successive subset blocks, memoized on
    /// the support bitmask, levels up to six.
    pub fn exhaustive_norm(g0: &Family, levels: &[(BigRational, Family)], x: &SparseVec) -> BigRational {
        let pos = x.support();
        let full: u32 = (1u32 << pos.len()) - 1;
        let mut memo = HashMap::new();
        exhaustive_rec(g0, levels, x, &pos, full, &mut memo)
    }

    fn bits_to_set(pos: &[u64], mask: u32) -> Vec<u64> {
        (0..pos.len()).filter(|i| mask >> i & 1 == 1).map(|i| pos[i]).collect()
    }

    fn exhaustive_rec(
        g0: &Family,
        levels: &[(BigRational, Family)],
        x: &SparseVec,
        pos: &[u64],
        mask: u32,
        memo: &mut HashMap<u32, BigRational>,
    ) -> BigRational {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut best = BigRational::zero();
        let mut sub = mask;
        loop {
            let e = bits_to_set(pos, sub);
            if g0.member(&FinSet::new(e.clone()).unwrap()) {
                let v = e.iter().fold(BigRational::zero(), |a, p| a + x.get(*p).abs());
                best = best.max(v);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        for (theta, g) in levels {
            let mut blocks = Vec::new();
            let mut out = BigRational::zero();
            block_sequences(g, x, pos, mask, 0, &mut blocks, &mut out, levels, g0, memo);
            best = best.max(theta * out);
        }
        memo.insert(mask, best.clone());
        best
    }

    /// Best Σ over successive blocks `E_1 < E_2 < …` drawn from `mask` with
    /// admissible minima, the whole mask as a single block excluded.
    #[allow(clippy::too_many_arguments)]
    fn block_sequences(
        g: &Family,
        x: &SparseVec,
        pos: &[u64],
        mask: u32,
        above: usize,
        blocks: &mut Vec<u32>,
        out: &mut BigRational,
        levels: &[(BigRational, Family)],
        g0: &Family,
        memo: &mut HashMap<u32, BigRational>,
    ) {
        if !blocks.is_empty() {
            let minima: Vec<u64> = blocks.iter().map(|b| pos[b.trailing_zeros() as usize]).collect();
            if !g.member(&FinSet::new(minima).unwrap()) {
                return;
            }
            if !(blocks.len() == 1 && blocks[0] == mask) {
                let v = blocks
                    .iter()
                    .fold(BigRational::zero(), |a, &b| a + exhaustive_rec(g0, levels, x, pos, b, memo));
                if v > *out {
                    *out = v;
                }
            }
        }
        let avail = mask & !((1u32 << above) - 1);
        let mut sub = avail;
        while sub != 0 {
            blocks.push(sub);
            let top = 32 - sub.leading_zeros() as usize;
            block_sequences(g, x, pos, mask, top, blocks, out, levels, g0, memo);
            blocks.pop();
            sub = (sub - 1) & avail;
        }
    }

    fn exhaustive_single(theta: BigRational, g: &Family, x: &SparseVec) -> BigRational {
        let levels: Vec<_> = (1..=6).map(|m| (num_traits::pow(theta.clone(), m), Family::pow(g.clone(), m as u32))).collect();
        exhaustive_norm(&Family::Card(1), &levels, x)
    }

    #[test]
    fn family_sup_examples() {
        let ones = SparseVec::from_pairs((1..=5).map(|i| (i, q(1, 1))));
        assert_eq!(family_sup_norm(&fam("S[1]"), &ones), q(3, 1));
        assert_eq!(family_sup_norm(&fam("S"), &vec_of("[7:1]")), q(1, 1));
        assert_eq!(family_sup_norm(&fam("A(2)"), &vec_of("[1:1,2:-2,3:3]")), q(5, 1));
        assert_eq!(family_sup_norm(&fam("S"), &SparseVec::zero()), q(0, 1));
    }

    #[test]
    fn tsirelson_spot_values() {
        let t = space("T(1/2,S)");
        assert_eq!(tsirelson_norm(&t, &vec_of("[1:1,2:1]")).unwrap(), q(1, 1));
        assert_eq!(tsirelson_norm(&t, &vec_of("[3:1,4:1,5:1]")).unwrap(), q(3, 2));
        assert_eq!(exhaustive_single(q(1, 2), &fam("S"), &vec_of("[1:1,2:1]")), q(1, 1));
        assert_eq!(exhaustive_single(q(1, 2), &fam("S"), &vec_of("[3:1,4:1,5:1]")), q(3, 2));
        for s in ["T(1/2,S)", "T(1/3;A(1);S[n])", "T(seq(1/2,1/4;1/2);S;A(n))"] {
            assert_eq!(tsirelson_norm(&space(s), &vec_of("[9:-3/4]")).unwrap(), q(3, 4));
        }
    }

    #[test]
    fn engine_matches_exhaustive_on_small_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..40 {
            let n = rng.gen_range(1..=5);
            let mut pos: Vec<u64> = (1..=9).collect();
            while pos.len() > n {
                pos.remove(rng.gen_range(0..pos.len()));
            }
            let x = SparseVec::from_pairs(pos.iter().map(|&p| (p, q(rng.gen_range(-4..=4), rng.gen_range(1..=3)))));
            let t = space("T(1/2,S)");
            assert_eq!(tsirelson_norm(&t, &x).unwrap(), exhaustive_single(q(1, 2), &fam("S"), &x), "{x}");
            if round % 4 == 0 {
                let mixed = space("T(seq(2/3,1/3;1/2);A(1);A(n))");
                let levels: Vec<_> = (1..=6).map(|m| mixed.level(m).unwrap()).collect();
                assert_eq!(tsirelson_norm(&mixed, &x).unwrap(), exhaustive_norm(&Family::Card(1), &levels, &x), "{x}");
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let t = space("T(1/2,S)");
        let c = l1_lower_certificate(&t, &set(&[3, 4, 5]), 1, 1, &vec![q(1, 1); 3], NormOptions::default()).unwrap();
        assert_eq!(c.norm, q(3, 2));
        assert_eq!(c.bound, q(3, 2));
        assert!(c.holds());
        let c = l1_lower_certificate(&t, &set(&[6]), 1, 1, &[q(1, 1)], NormOptions::default()).unwrap();
        assert!(c.holds());
        let c = l1_lower_certificate(&t, &set(&[2, 3, 5, 6]), 1, 2, &vec![q(1, 1); 4], NormOptions::default()).unwrap();
        assert!(c.holds());
        assert!(l1_lower_certificate(&t, &set(&[1, 2]), 1, 1, &vec![q(1, 1); 2], NormOptions::default()).is_err());
    }

    #[test]
    fn direct_sum_examples() {
        let d = space("dsum(sup(A(1));X[1])");
        assert_eq!(direct_sum_norm(&d, &[vec_of("[3:1,4:1,5:1]")], NormOptions::default()).unwrap(), q(3, 1));
        let d = space("dsum(sup(A(1));X[0],T(1/2,S))");
        let parts = [vec_of("[2:1]"), vec_of("[1:1,2:1]")];
        assert_eq!(direct_sum_norm(&d, &parts, NormOptions::default()).unwrap(), q(1, 1));
        assert!(matches!(
            direct_sum_norm(&d, &parts[..1], NormOptions::default()),
            Err(NormError::LengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn schreier_witness_examples() {
        let x1 = space("X[1]");
        let s1 = fam("S[1]");
        let w = schreier_sum_witness(&x1, &s1, &set(&[4]), &[q(1, 1)], NormOptions::default()).unwrap();
        assert!(w.holds());
        assert_eq!(w.value, q(1, 1));
        let e = set(&[2, 3, 5, 6, 7]);
        let w = schreier_sum_witness(&x1, &s1, &e, &vec![q(1, 1); 5], NormOptions::default()).unwrap();
        assert!(w.holds());
        assert_eq!(w.value, q(5, 1));
        let w = schreier_sum_witness(&x1, &s1, &e, &vec![q(0, 1); 5], NormOptions::default()).unwrap();
        assert!(w.holds());
        assert_eq!(w.value, q(0, 1));
        assert!(schreier_sum_witness(&x1, &s1, &set(&[1, 2]), &vec![q(1, 1); 2], NormOptions::default()).is_err());
    }

    #[test]
    fn support_limit_is_enforced() {
        let x = SparseVec::from_pairs((1..=30).map(|i| (i, q(1, 1))));
        let t = space("T(1/2,S)");
        assert!(matches!(tsirelson_norm(&t, &x), Err(NormError::SupportTooLarge { size: 30, limit: 24 })));
    }

    #[test]
    fn theta_validation() {
        assert!(ThetaSeq::Geometric(q(1, 1)).validate().is_err());
        assert!(ThetaSeq::Explicit { head: vec![q(1, 3), q(1, 2)], ratio: q(1, 2) }.validate().is_err());
        let t = ThetaSeq::Explicit { head: vec![q(1, 2), q(1, 3)], ratio: q(1, 2) };
        assert_eq!(t.at(4), q(1, 12));
    }

    pub fn arb_vec(max_pos: u64, max_len: usize) -> impl Strategy<Value = SparseVec> {
        prop::collection::btree_map(1..=max_pos, (-6i64..=6, 1i64..=4), 0..=max_len)
            .prop_map(|m| SparseVec::from_pairs(m.into_iter().map(|(p, (n, d))| (p, q(n, d)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn norm_axioms(x in arb_vec(10, 7), y in arb_vec(10, 7), n in -3i64..=3, d in 1i64..=3) {
            let t = space("T(1/2,S)");
            let nx = tsirelson_norm(&t, &x).unwrap();
            let ny = tsirelson_norm(&t, &y).unwrap();
            prop_assert!(nx <= x.l1());
            prop_assert!(nx >= family_sup_norm(&Family::Card(1), &x));
            prop_assert!(tsirelson_norm(&t, &x.add(&y)).unwrap() <= &nx + &ny);
            let r = q(n, d);
            prop_assert_eq!(tsirelson_norm(&t, &x.scale(&r)).unwrap(), nx.clone() * r.abs());
            let (v, rhs) = tsirelson_fixpoint(&t, &x, NormOptions::default()).unwrap();
            prop_assert_eq!(v, rhs);
        }

        #[test]
        fn unconditional_and_monotone(x in arb_vec(12, 8), signs in prop::collection::vec(any::<bool>(), 8)) {
            let t = space("T(1/3;A(1);S[n])");
            let nx = tsirelson_norm(&t, &x).unwrap();
            let flipped = SparseVec::from_pairs(x.iter().zip(&signs).map(|((p, c), s)| (p, if *s { -c } else { c.clone() })));
            prop_assert_eq!(tsirelson_norm(&t, &flipped).unwrap(), nx.clone());
            let shrunk = SparseVec::from_pairs(x.iter().zip(&signs).map(|((p, c), s)| (p, if *s { c / q(2, 1) } else { c.clone() })));
            prop_assert!(tsirelson_norm(&t, &shrunk).unwrap() <= nx);
        }

        #[test]
        fn sparse_vec_print_parse(x in arb_vec(40, 8)) {
            prop_assert_eq!(x.to_string().parse::<SparseVec>().unwrap(), x);
        }
    }
}
