//! Ordinals below epsilon_0 in Cantor normal form.
//!
//! An ordinal is a list of `(exponent, coefficient)` terms with strictly
//! decreasing exponents and nonzero coefficients. The empty list is 0.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("fundamental sequence index must be positive")]
    ZeroIndex,
    #[error("terms are not in Cantor normal form")]
    NotNormal,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from(1u64)
    }

    pub fn omega() -> Self {
        Self::omega_power(Self::one())
    }

    /// The single-term ordinal w^a.
    pub fn omega_power(a: Ordinal) -> Self {
        Ordinal { terms: vec![Term { exp: a, coeff: BigUint::one() }] }
    }

    /// w^a * c.
    pub fn monomial(a: Ordinal, c: BigUint) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Ordinal { terms: vec![Term { exp: a, coeff: c }] }
    }

    /// Builds an ordinal from terms that must already be in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, BigUint)>) -> Result<Self, OrdinalError> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(OrdinalError::NotNormal);
            }
        }
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(OrdinalError::NotNormal);
        }
        Ok(Ordinal { terms: terms.into_iter().map(|(exp, coeff)| Term { exp, coeff }).collect() })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_zero())
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => t.coeff.to_u64(),
            _ => None,
        }
    }

    /// Nonzero with a last exponent that is nonzero.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exp.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    pub fn leading_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    /// Nesting depth of exponents; 0 for finite ordinals.
    pub fn height(&self) -> usize {
        self.terms.iter().map(|t| if t.exp.is_zero() { 0 } else { 1 + t.exp.height() }).max().unwrap_or(0)
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// The predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        last.coeff -= 1u32;
        if last.coeff.is_zero() {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    pub fn add(&self, b: &Ordinal) -> Ordinal {
        let Some(lead) = b.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self.terms.iter().take_while(|t| t.exp > lead.exp).cloned().collect();
        let same = self.terms.iter().find(|t| t.exp == lead.exp);
        let mut rest = b.terms.iter();
        let first = rest.next().unwrap();
        match same {
            Some(t) => terms.push(Term { exp: first.exp.clone(), coeff: &t.coeff + &first.coeff }),
            None => terms.push(first.clone()),
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    pub fn mul(&self, b: &Ordinal) -> Ordinal {
        if self.is_zero() || b.is_zero() {
            return Ordinal::zero();
        }
        let lead = &self.terms[0];
        let mut out = Vec::new();
        for t in &b.terms {
            if t.exp.is_zero() {
                out.push(Term { exp: lead.exp.clone(), coeff: &lead.coeff * &t.coeff });
                out.extend(self.terms[1..].iter().cloned());
            } else {
                out.push(Term { exp: lead.exp.add(&t.exp), coeff: t.coeff.clone() });
            }
        }
        Ordinal { terms: out }
    }

    /// a^n by repeated multiplication.
    pub fn pow_nat(&self, n: u32) -> Ordinal {
        let mut acc = Ordinal::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Natural (Hessenberg) sum: coefficient-wise over the merged exponents.
    pub fn hessenberg(&self, b: &Ordinal) -> Ordinal {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.terms.len() + b.terms.len());
        while i < self.terms.len() || j < b.terms.len() {
            let ord = match (self.terms.get(i), b.terms.get(j)) {
                (Some(x), Some(y)) => x.exp.cmp(&y.exp),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(Term { exp: self.terms[i].exp.clone(), coeff: &self.terms[i].coeff + &b.terms[j].coeff });
                    i += 1;
                    j += 1;
                }
            }
        }
        Ordinal { terms: out }
    }

    /// Every pair `(a, b)` with `a ⊕ b = self`, sorted by `a` then `b`.
    pub fn hessenberg_decompositions(&self) -> Vec<(Ordinal, Ordinal)> {
        let mut out = vec![(Vec::new(), Vec::new())];
        for t in &self.terms {
            let mut next = Vec::new();
            for (a, b) in &out {
                let mut s = BigUint::zero();
                while s <= t.coeff {
                    let rem = &t.coeff - &s;
                    let mut a2: Vec<Term> = Vec::clone(a);
                    let mut b2: Vec<Term> = Vec::clone(b);
                    if !s.is_zero() {
                        a2.push(Term { exp: t.exp.clone(), coeff: s.clone() });
                    }
                    if !rem.is_zero() {
                        b2.push(Term { exp: t.exp.clone(), coeff: rem });
                    }
                    next.push((a2, b2));
                    s += 1u32;
                }
            }
            out = next;
        }
        let mut pairs: Vec<(Ordinal, Ordinal)> =
            out.into_iter().map(|(a, b)| (Ordinal { terms: a }, Ordinal { terms: b })).collect();
        pairs.sort();
        pairs
    }

    /// The canonical fundamental sequence: `(g + w^(a+1))[n] = g + w^a * n`
    /// and `(g + w^l)[n] = g + w^(l[n])` for limit `l`.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        if n == 0 {
            return Err(OrdinalError::ZeroIndex);
        }
        let mut terms = self.terms.clone();
        let last = terms.pop().unwrap();
        let beta = last.exp.clone();
        if last.coeff > BigUint::one() {
            terms.push(Term { exp: beta.clone(), coeff: last.coeff - 1u32 });
        }
        let gamma = Ordinal { terms };
        let tail = match beta.pred() {
            Some(alpha) => Ordinal::monomial(alpha, BigUint::from(n)),
            None => Ordinal::omega_power(beta.fundamental_sequence(n)?),
        };
        Ok(gamma.add(&tail))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::monomial(Ordinal::zero(), BigUint::from(n))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a.exp.cmp(&b.exp).then_with(|| a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_exponent(f: &mut fmt::Formatter<'_>, e: &Ordinal) -> fmt::Result {
    let atomic = e.is_finite() || *e == Ordinal::omega();
    if atomic {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            write!(f, "w")?;
            if !t.exp.is_one() {
                write!(f, "^")?;
                write_exponent(f, &t.exp)?;
            }
            if !t.coeff.is_one() {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl Ordinal {
    fn is_one(&self) -> bool {
        *self == Ordinal::one()
    }
}

impl std::str::FromStr for Ordinal {
    type Err = crate::dsl::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_ordinal(s)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn n(k: u64) -> Ordinal {
        Ordinal::from(k)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(n(1).add(&o("w")), o("w"));
        assert_eq!(o("w").add(&n(1)), o("w+1"));
        assert_eq!(o("w*2+3").add(&o("w+1")), o("w*3+1"));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(o("w").mul(&n(2)), o("w*2"));
        assert_eq!(n(2).mul(&o("w")), o("w"));
        assert_eq!(o("w+1").mul(&o("w")), o("w^2"));
        assert_eq!(o("w+1").mul(&n(3)), o("w*3+1"));
        assert_eq!(o("w^2+w").mul(&o("w^2+3")), o("w^4+w^2*3+w"));
    }

    #[test]
    fn hessenberg_examples() {
        assert_eq!(n(4).hessenberg(&n(4)), n(8));
        assert_eq!(o("w").hessenberg(&o("w")), o("w*2"));
        assert_eq!(o("w^2+1").hessenberg(&o("w*3")), o("w^2+w*3+1"));
    }

    #[test]
    fn decomposition_examples() {
        let d = n(2).hessenberg_decompositions();
        assert_eq!(d, vec![(n(0), n(2)), (n(1), n(1)), (n(2), n(0))]);
        assert_eq!(o("w").hessenberg_decompositions(), vec![(n(0), o("w")), (o("w"), n(0))]);
        assert_eq!(
            o("w+1").hessenberg_decompositions(),
            vec![(n(0), o("w+1")), (n(1), o("w")), (o("w"), n(1)), (o("w+1"), n(0))]
        );
        assert_eq!(n(0).hessenberg_decompositions(), vec![(n(0), n(0))]);
    }

    #[test]
    fn fundamental_sequence_examples() {
        assert_eq!(o("w").fundamental_sequence(3).unwrap(), n(3));
        assert_eq!(o("w^2").fundamental_sequence(4).unwrap(), o("w*4"));
        assert_eq!(o("w^w").fundamental_sequence(2).unwrap(), o("w^2"));
        assert_eq!(o("w*3").fundamental_sequence(2).unwrap(), o("w*2+2"));
        assert_eq!(o("w^(w+1)").fundamental_sequence(2).unwrap(), o("w^w*2"));
        assert!(o("w+1").fundamental_sequence(1).is_err());
        assert!(n(0).fundamental_sequence(1).is_err());
        assert_eq!(o("w").fundamental_sequence(0), Err(OrdinalError::ZeroIndex));
    }

    #[test]
    fn predicates() {
        assert!(o("w") < o("w+1"));
        assert!(o("w*2").is_limit());
        assert!(!o("w*2+1").is_limit());
        assert!(!n(0).is_limit());
        assert_eq!(Ordinal::omega_power(n(2)), o("w^2"));
        assert_eq!(o("w^2*3+w+4").pred(), Some(o("w^2*3+w+3")));
        assert_eq!(o("w^2").pred(), None);
    }

    #[test]
    fn printing() {
        assert_eq!(o("w^2*3+w+4").to_string(), "w^2*3+w+4");
        assert_eq!(Ordinal::omega_power(o("w^2")).to_string(), "w^(w^2)");
        assert_eq!(Ordinal::omega_power(o("w")).to_string(), "w^w");
        assert_eq!(n(0).to_string(), "0");
    }

    #[test]
    fn from_terms_rejects_bad_order() {
        let bad = Ordinal::from_terms(vec![(n(1), BigUint::one()), (n(2), BigUint::one())]);
        assert_eq!(bad, Err(OrdinalError::NotNormal));
    }

    /// Ordinals below w^3*5.
    pub fn small_ordinal() -> impl Strategy<Value = Ordinal> {
        (0u64..5, 0u64..6, 0u64..6, 0u64..6).prop_map(|(c3, c2, c1, c0)| {
            let mut terms = Vec::new();
            for (e, c) in [(3, c3), (2, c2), (1, c1), (0, c0)] {
                if c > 0 {
                    terms.push((n(e), BigUint::from(c)));
                }
            }
            Ordinal::from_terms(terms).unwrap()
        })
    }

    /// Ordinals with nested exponents.
    pub fn any_ordinal() -> impl Strategy<Value = Ordinal> {
        let leaf = (0u64..6).prop_map(n);
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop::collection::vec((inner, 1u64..4), 1..4).prop_map(|ts| {
                ts.into_iter()
                    .fold(Ordinal::zero(), |acc, (e, c)| acc.hessenberg(&Ordinal::monomial(e, BigUint::from(c))))
            })
        })
    }

    /// Independent enumerator: every ordinal built from a subset of x's
    /// exponents with coefficients up to x's, paired and filtered.
    fn brute_decompositions(x: &Ordinal) -> Vec<(Ordinal, Ordinal)> {
        let mut cands = vec![Ordinal::zero()];
        for t in x.terms() {
            let cmax = t.coeff.to_u64().unwrap();
            let mut next = Vec::new();
            for c in &cands {
                for k in 0..=cmax {
                    next.push(c.add(&Ordinal::monomial(t.exp.clone(), BigUint::from(k))));
                }
            }
            cands = next;
        }
        let mut out = Vec::new();
        for a in &cands {
            for b in &cands {
                if a.hessenberg(b) == *x {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn three_term_ordinal() -> impl Strategy<Value = Ordinal> {
        prop::collection::btree_map(0u64..5, 1u64..4, 0..=3).prop_map(|m| {
            let terms = m.into_iter().rev().map(|(e, c)| (n(e), BigUint::from(c))).collect();
            Ordinal::from_terms(terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn add_is_associative(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn mul_is_associative(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn mul_left_distributes(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn finite_arithmetic_agrees(x in 0u64..1000, y in 0u64..1000) {
            prop_assert_eq!(n(x).add(&n(y)), n(x + y));
            prop_assert_eq!(n(x).mul(&n(y)), n(x * y));
            prop_assert_eq!(n(x).hessenberg(&n(y)), n(x + y));
        }

        #[test]
        fn hessenberg_laws(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
            prop_assert_eq!(a.hessenberg(&b), b.hessenberg(&a));
            prop_assert_eq!(a.hessenberg(&b).hessenberg(&c), a.hessenberg(&b.hessenberg(&c)));
            prop_assert_eq!(a.hessenberg(&Ordinal::zero()), a.clone());
            if b < c {
                prop_assert!(a.hessenberg(&b) < a.hessenberg(&c));
            }
            prop_assert!(a.add(&b) <= a.hessenberg(&b));
        }

        #[test]
        fn decompositions_match_brute_force(x in three_term_ordinal()) {
            let d = x.hessenberg_decompositions();
            for (a, b) in &d {
                prop_assert_eq!(&a.hessenberg(b), &x);
            }
            prop_assert_eq!(d, brute_decompositions(&x));
        }

        #[test]
        fn fundamental_sequences_increase(x in any_ordinal(), k in 1u64..6) {
            if x.is_limit() {
                let a = x.fundamental_sequence(k).unwrap();
                let b = x.fundamental_sequence(k + 1).unwrap();
                prop_assert!(a < b);
                prop_assert!(b < x);
            }
        }

        #[test]
        fn print_parse_identity(x in any_ordinal()) {
            prop_assert_eq!(o(&x.to_string()), x);
        }
    }
}
