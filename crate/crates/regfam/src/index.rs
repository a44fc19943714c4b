//! Cantor–Bendixson rank and the ι-index of family expressions.

use thiserror::Error;

use crate::family::{decompose_slice, DiagRule, Family, FamilyError, FinSet};
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{0} is not tail-invariant; the successor walk does not compute its rank")]
    NotTailInvariant(String),
}

/// Supremum of `ι(G_k)` over a diagonal rule.
pub fn diag_sup(rule: &DiagRule) -> Ordinal {
    match rule {
        DiagRule::Card => Ordinal::omega(),
        DiagRule::Schreier(l) => Ordinal::omega_power(l.clone()),
        DiagRule::Fine(l) => l.clone(),
    }
}

pub fn iota(f: &Family) -> Ordinal {
    match f {
        Family::Card(n) => Ordinal::from(*n),
        Family::SchreierBase => Ordinal::omega(),
        Family::Schreier(x) => Ordinal::omega_power(x.clone()),
        Family::Fine(x) => x.clone(),
        Family::Sum(f, g) => iota(g).add(&iota(f)),
        Family::Prod(f, g) => iota(g).mul(&iota(f)),
        Family::Pow(f, n) => iota(f).pow_nat(*n),
        Family::Diag(rule) => diag_sup(rule),
        Family::Pre(_, f) => iota(f),
    }
}

/// The unique `ξ` with `E ∈ F^ξ \ F^{ξ+1}`.
pub fn rank(f: &Family, e: &FinSet) -> Result<Ordinal, FamilyError> {
    if !f.member(e) {
        return Err(f.not_member(e));
    }
    Ok(rank_slice(f, e.elems()))
}

/// Assumes membership.
pub(crate) fn rank_slice(f: &Family, e: &[u64]) -> Ordinal {
    if e.is_empty() {
        return iota(f);
    }
    match f {
        Family::Card(n) => Ordinal::from(n - e.len() as u64),
        Family::SchreierBase | Family::Diag(DiagRule::Card) => Ordinal::from(e[0] - e.len() as u64),
        Family::Diag(rule) => (1..=e[0])
            .map(|k| rule.at(k))
            .filter(|g| g.member_slice(e))
            .map(|g| rank_slice(&g, e))
            .max()
            .expect("member of some level"),
        Family::Sum(f, g) => {
            if f.member_slice(e) {
                return iota(g).add(&rank_slice(f, e));
            }
            let mut best = None::<Ordinal>;
            for i in 0..e.len() {
                if !f.member_slice(&e[..i]) {
                    break;
                }
                if g.member_slice(&e[i..]) {
                    let r = rank_slice(g, &e[i..]);
                    if best.as_ref().is_none_or(|b| r > *b) {
                        best = Some(r);
                    }
                }
            }
            best.expect("member has a split")
        }
        Family::Prod(f, g) => {
            let blocks = decompose_slice(g, e).expect("member has a decomposition");
            let minima: Vec<u64> = blocks.iter().map(|&(s, _)| e[s]).collect();
            let (s, t) = *blocks.last().unwrap();
            iota(g).mul(&rank_slice(f, &minima)).add(&rank_slice(g, &e[s..t]))
        }
        Family::Pre(m, f) => {
            let image: Vec<u64> = e.iter().map(|&n| m.apply(n)).collect();
            rank_slice(f, &image)
        }
        other => rank_slice(&other.unfold(), e),
    }
}

/// `E ∈ F^x`.
pub fn in_derivative(f: &Family, e: &FinSet, x: &Ordinal) -> bool {
    f.member(e) && rank_slice(f, e.elems()) >= *x
}

/// Rank by walking `E, E⌢(m+1), E⌢(m+1)(m+2), …` until the family is left.
///
/// Returns `None` when the walk is still inside after `cap` steps.
pub fn rank_oracle(f: &Family, e: &FinSet, cap: u64) -> Result<Option<u64>, IndexError> {
    if !f.tail_invariant() {
        return Err(IndexError::NotTailInvariant(f.to_string()));
    }
    if !f.member(e) {
        return Err(f.not_member(e).into());
    }
    Ok(successor_walk(f, e, cap))
}

pub(crate) fn successor_walk(f: &Family, e: &FinSet, cap: u64) -> Option<u64> {
    let mut cur = e.elems().to_vec();
    for k in 0..=cap {
        cur.push(cur.last().map_or(1, |m| m + 1));
        if !f.member_slice(&cur) {
            return Some(k);
        }
    }
    None
}

/// `ι([G_m]^k[G_0]) = ι(G_0)·ι(G_m)^k`.
pub fn composed_iota(gm: &Family, k: u32, g0: &Family) -> Ordinal {
    iota(g0).mul(&iota(gm).pow_nat(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::tests::{fam, set};
    use crate::ordinal::tests::o;
    use proptest::prelude::*;

    #[test]
    fn iota_examples() {
        assert_eq!(iota(&fam("A(4)")), o("4"));
        for x in ["0", "1", "2", "w", "w+1", "w^2"] {
            assert_eq!(iota(&fam(&format!("S[{x}]"))), Ordinal::omega_power(o(x)));
        }
        assert_eq!(iota(&fam("sum(S,A(2))")), o("2+w"));
        assert_eq!(iota(&fam("sum(A(2),S)")), o("w+2"));
        assert_eq!(iota(&fam("prod(S[1],S[1])")), o("w^2"));
        assert_eq!(iota(&fam("prod(A(3),S)")), o("w*3"));
        assert_eq!(iota(&fam("FS[w*2+3]")), o("w*2+3"));
        assert_eq!(iota(&fam("pow(A(2),3)")), o("8"));
        assert_eq!(iota(&fam("pre(ap(3,2),S[2])")), o("w^2"));
        assert_eq!(iota(&fam("diag(A)")), o("w"));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&fam("A(5)"), &set(&[2, 9])).unwrap(), o("3"));
        assert_eq!(rank(&fam("S"), &set(&[3, 5])).unwrap(), o("1"));
        assert_eq!(rank(&fam("S"), &set(&[3, 4, 5])).unwrap(), o("0"));
        assert_eq!(rank(&fam("S[2]"), &FinSet::empty()).unwrap(), o("w^2"));
        assert_eq!(rank(&fam("S[2]"), &set(&[2])).unwrap(), o("w+1"));
        assert_eq!(rank(&fam("sum(A(1),S)"), &set(&[1])).unwrap(), o("w"));
        assert!(rank(&fam("S"), &set(&[1, 2])).is_err());
    }

    #[test]
    fn in_derivative_examples() {
        assert!(in_derivative(&fam("A(3)"), &set(&[5]), &o("2")));
        assert!(!in_derivative(&fam("S"), &set(&[2, 3]), &o("1")));
        for f in ["S[2]", "sum(A(2),S)", "FS[w+1]", "A(3)"] {
            let f = fam(f);
            let i = iota(&f);
            assert!(in_derivative(&f, &FinSet::empty(), &i));
            assert!(!in_derivative(&f, &FinSet::empty(), &i.succ()));
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(rank_oracle(&fam("A(4)"), &set(&[2, 7]), 10).unwrap(), Some(2));
        assert_eq!(rank_oracle(&fam("prod(A(2),A(2))"), &set(&[1, 2, 3]), 10).unwrap(), Some(1));
        assert_eq!(rank_oracle(&fam("S"), &set(&[4, 9]), 10).unwrap(), Some(2));
        assert_eq!(rank_oracle(&fam("S"), &FinSet::empty(), 10).unwrap(), Some(1));
        assert!(matches!(
            rank_oracle(&fam("pre(even,S)"), &set(&[2]), 10),
            Err(IndexError::NotTailInvariant(_))
        ));
    }

    #[test]
    fn walk_fails_on_relabeled_root() {
        // The walk from the root of a gapped relabeling stops after three
        // steps while the true rank is infinite.
        let f = fam("pre(ap(3,2),S)");
        assert_eq!(successor_walk(&f, &FinSet::empty(), 30), Some(3));
        assert_eq!(rank(&f, &FinSet::empty()).unwrap(), o("w"));
    }

    fn tail_invariant_corpus() -> Vec<Family> {
        let mut v: Vec<Family> = (0..=5).map(Family::Card).collect();
        for s in [
            "sum(A(2),A(3))",
            "prod(A(2),A(2))",
            "prod(A(3),A(2))",
            "pow(A(2),3)",
            "sum(prod(A(2),A(2)),A(1))",
            "prod(sum(A(1),A(1)),A(3))",
            "S",
        ] {
            v.push(fam(s));
        }
        v
    }

    #[test]
    fn rank_matches_oracle_and_successor_coherence() {
        for f in tail_invariant_corpus() {
            for e in f.enumerate(10) {
                if e.is_empty() && !iota(&f).is_finite() {
                    continue;
                }
                let r = rank(&f, &e).unwrap();
                assert_eq!(rank_oracle(&f, &e, 30).unwrap(), r.to_u64(), "{f} {e}");
                let next = e.with(e.max_or_zero() + 1);
                if f.member(&next) {
                    assert_eq!(r, rank(&f, &next).unwrap().succ(), "{f} {e}");
                } else {
                    assert!(r.is_zero());
                }
            }
        }
    }

    #[test]
    fn rank_is_strictly_monotone() {
        for f in tail_invariant_corpus().into_iter().chain([fam("S[2]"), fam("sum(A(1),S)"), fam("FS[w+1]")]) {
            for e in f.enumerate(10) {
                let r = rank(&f, &e).unwrap();
                for n in e.max_or_zero() + 1..=14 {
                    let next = e.with(n);
                    if f.member(&next) {
                        assert!(r >= rank(&f, &next).unwrap().succ(), "{f} {e} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_zero_iff_maximal() {
        for f in ["S[2]", "sum(S,A(2))", "prod(A(2),S)", "FS[w+2]", "pre(odd,S)"] {
            let f = fam(f);
            for e in f.enumerate(9) {
                assert_eq!(rank(&f, &e).unwrap().is_zero(), f.is_maximal(&e).unwrap(), "{f} {e}");
            }
        }
    }

    #[test]
    fn relabeling_preserves_rank() {
        for m in ["even", "odd", "ap(3,2)"] {
            for inner in ["S", "A(3)", "S[2]", "sum(A(1),S)"] {
                let inner = fam(inner);
                let f = fam(&format!("pre({m},{inner})"));
                let Family::Pre(rel, _) = &f else { unreachable!() };
                for e in f.enumerate(8) {
                    assert_eq!(rank(&f, &e).unwrap(), rank(&inner, &rel.apply_set(&e)).unwrap());
                }
            }
        }
    }

    #[test]
    fn card_algebra_iota() {
        for m in 0..=4u64 {
            for n in 0..=4u64 {
                let s = Family::sum(Family::Card(m), Family::Card(n));
                let p = Family::prod(Family::Card(m), Family::Card(n));
                assert_eq!(iota(&s), Ordinal::from(m + n));
                assert_eq!(iota(&p), Ordinal::from(m * n));
            }
        }
    }

    #[test]
    fn fine_schreier_extension() {
        for x in ["2", "3", "w", "w+1"] {
            let f = fam(&format!("FS[{x}]"));
            for e in f.enumerate(10) {
                if rank(&f, &e).unwrap() >= Ordinal::one() {
                    assert!(f.member(&e.with(e.max_or_zero() + 1)), "{f} {e}");
                }
            }
        }
    }

    #[test]
    fn composed_iota_matches_product() {
        let f = Family::prod(Family::pow(Family::SchreierBase, 2), Family::Card(1));
        assert_eq!(composed_iota(&Family::SchreierBase, 2, &Family::Card(1)), iota(&f));
    }

    proptest! {
        #[test]
        fn card_rank_is_cardinality_gap((n, elems) in (0usize..6).prop_flat_map(|n| (Just(n), proptest::sample::subsequence((1..=10u64).collect::<Vec<_>>(), 0..=n)))) {
            let e = FinSet::new(elems).unwrap();
            let f = Family::Card(n as u64);
            let n = n as u64;
            prop_assert_eq!(rank(&f, &e).unwrap(), Ordinal::from(n - e.len() as u64));
        }
    }
}
