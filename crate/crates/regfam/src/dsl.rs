//! Recursive-descent parser for the expression language.
//!
//! Ordinals `w^2*3+w+4`, families `A(n) | S | S[x] | FS[x] | sum | prod | pow
//! | pre | diag`, sets `{2,3,5}`, vectors `[3:1/2,5:-2]`, spaces `X[x] |
//! sup(f) | T(..) | dsum(..)`, colorings and pruning selectors. Printers
//! live next to each type as `Display` impls and emit this same grammar.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::family::{DiagRule, Family, FinSet, Relabeling};
use crate::normspace::{GSeq, Space, SparseVec, ThetaSeq};
use crate::ordinal::Ordinal;
use crate::ramsey::{ChainPred, Coloring, Pred, Selector, SetRef, SetTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "invalid value",
        };
        write!(f, "{kind} at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let r = self.rest();
        let trimmed = r.trim_start();
        self.pos += r.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn error_at(&self, offset: usize, kind: ErrorKind, message: String) -> ParseError {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().unwrap().chars().count() + 1;
        ParseError { kind, line, column, offset, message }
    }

    fn found(&mut self) -> String {
        self.skip_ws();
        match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(c) if is_ident_start(c) => format!("'{}'", self.peek_ident().unwrap()),
            Some(c) => format!("'{c}'"),
        }
    }

    pub fn expected(&mut self, what: &str) -> ParseError {
        let found = self.found();
        self.error_at(self.pos, ErrorKind::Syntax, format!("expected {what}, found {found}"))
    }

    pub fn semantic(&self, offset: usize, message: String) -> ParseError {
        self.error_at(offset, ErrorKind::Semantic, message)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.expected(&format!("'{c}'")))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        if !r.starts_with(is_ident_start) {
            return None;
        }
        let end = r.find(|c: char| !is_ident_char(c)).unwrap_or(r.len());
        Some(&r[..end])
    }

    pub fn ident(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id)
            }
            None => Err(self.expected(what)),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn peek_digit(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    pub fn biguint(&mut self, what: &str) -> Result<BigUint, ParseError> {
        self.skip_ws();
        let r = self.rest();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if end == 0 {
            return Err(self.expected(what));
        }
        self.pos += end;
        Ok(r[..end].parse().unwrap())
    }

    pub fn u64(&mut self, what: &str) -> Result<u64, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let v = self.biguint(what)?;
        u64::try_from(&v).map_err(|_| self.semantic(start, format!("{v} is too large")))
    }

    pub fn positive(&mut self, what: &str) -> Result<u64, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let v = self.u64(what)?;
        if v == 0 {
            return Err(self.semantic(start, format!("{what} must be positive")));
        }
        Ok(v)
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.expected("end of input"))
        }
    }

    // ordinals

    pub fn ordinal(&mut self) -> Result<Ordinal, ParseError> {
        let mut acc = self.ordinal_term()?;
        loop {
            self.skip_ws();
            let plus = self.pos;
            if !self.eat('+') {
                return Ok(acc);
            }
            let starts_term = self.peek_digit() || self.peek_ident() == Some("w");
            if !starts_term {
                let found = self.found();
                return Err(self.error_at(
                    plus,
                    ErrorKind::Syntax,
                    format!("expected ordinal term after '+', found {found}"),
                ));
            }
            acc = acc.add(&self.ordinal_term()?);
        }
    }

    fn ordinal_term(&mut self) -> Result<Ordinal, ParseError> {
        if self.peek_digit() {
            let n = self.biguint("integer")?;
            return Ok(Ordinal::monomial(Ordinal::zero(), n));
        }
        if !self.eat_keyword("w") {
            return Err(self.expected("ordinal term ('w' or integer)"));
        }
        let exp = if self.eat('^') { self.ordinal_atom()? } else { Ordinal::one() };
        let coeff = if self.eat('*') {
            let at = self.pos;
            let c = self.biguint("coefficient")?;
            if c.is_zero() {
                return Err(self.semantic(at, "coefficient must be positive".into()));
            }
            c
        } else {
            BigUint::one()
        };
        Ok(Ordinal::monomial(exp, coeff))
    }

    fn ordinal_atom(&mut self) -> Result<Ordinal, ParseError> {
        if self.eat('(') {
            let o = self.ordinal()?;
            self.expect(')')?;
            return Ok(o);
        }
        if self.peek_digit() {
            return Ok(Ordinal::monomial(Ordinal::zero(), self.biguint("exponent")?));
        }
        if self.eat_keyword("w") {
            return Ok(Ordinal::omega());
        }
        Err(self.expected("exponent ('w', integer or parenthesized ordinal)"))
    }

    fn limit_ordinal(&mut self) -> Result<Ordinal, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let l = self.ordinal()?;
        if !l.is_limit() {
            return Err(self.semantic(at, format!("{l} is not a limit ordinal")));
        }
        Ok(l)
    }

    // families

    pub fn family(&mut self) -> Result<Family, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let Some(id) = self.peek_ident() else {
            return Err(self.expected("family"));
        };
        self.pos += id.len();
        match id {
            "A" => {
                self.expect('(')?;
                let n = self.u64("cardinality")?;
                self.expect(')')?;
                Ok(Family::Card(n))
            }
            "S" => {
                if self.eat('[') {
                    let x = self.ordinal()?;
                    self.expect(']')?;
                    Ok(Family::Schreier(x))
                } else {
                    Ok(Family::SchreierBase)
                }
            }
            "FS" => {
                self.expect('[')?;
                let x = self.ordinal()?;
                self.expect(']')?;
                Ok(Family::Fine(x))
            }
            "sum" | "prod" => {
                self.expect('(')?;
                let f = self.family()?;
                self.expect(',')?;
                let g = self.family()?;
                self.expect(')')?;
                Ok(if id == "sum" { Family::sum(f, g) } else { Family::prod(f, g) })
            }
            "pow" => {
                self.expect('(')?;
                let f = self.family()?;
                self.expect(',')?;
                let n = self.u64("exponent")?;
                self.expect(')')?;
                let n = u32::try_from(n).map_err(|_| self.semantic(at, "exponent too large".into()))?;
                Ok(Family::pow(f, n))
            }
            "pre" => {
                self.expect('(')?;
                let m = self.relabeling()?;
                self.expect(',')?;
                let f = self.family()?;
                self.expect(')')?;
                Ok(Family::pre(m, f))
            }
            "diag" => {
                self.expect('(')?;
                let rule = match self.ident("'A', 'S' or 'FS'")? {
                    "A" => DiagRule::Card,
                    "S" => {
                        self.expect(',')?;
                        DiagRule::Schreier(self.limit_ordinal()?)
                    }
                    "FS" => {
                        self.expect(',')?;
                        DiagRule::Fine(self.limit_ordinal()?)
                    }
                    other => {
                        return Err(self.semantic(at, format!("unknown diagonal rule '{other}'")));
                    }
                };
                self.expect(')')?;
                Ok(Family::Diag(rule))
            }
            _ => {
                self.pos = at;
                Err(self.expected("family (A, S, FS, sum, prod, pow, pre, diag)"))
            }
        }
    }

    pub fn relabeling(&mut self) -> Result<Relabeling, ParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.ident("relabeling")? {
            "even" => Ok(Relabeling::even()),
            "odd" => Ok(Relabeling::odd()),
            "ap" => {
                self.expect('(')?;
                let a = self.positive("start")?;
                self.expect(',')?;
                let d = self.positive("step")?;
                self.expect(')')?;
                Ok(Relabeling::Ap { a, d })
            }
            "seq" => {
                self.expect('(')?;
                let mut prefix = vec![self.positive("entry")?];
                while self.eat(',') {
                    prefix.push(self.positive("entry")?);
                }
                self.expect(';')?;
                let d = self.positive("step")?;
                self.expect(')')?;
                Relabeling::explicit(prefix, d).map_err(|e| self.semantic(at, e.to_string()))
            }
            _ => {
                self.pos = at;
                Err(self.expected("relabeling (even, odd, ap, seq)"))
            }
        }
    }

    // sets, rationals, vectors

    pub fn set(&mut self) -> Result<FinSet, ParseError> {
        self.skip_ws();
        let at = self.pos;
        self.expect('{')?;
        let mut v = Vec::new();
        if !self.eat('}') {
            loop {
                v.push(self.u64("set element")?);
                if self.eat('}') {
                    break;
                }
                self.expect(',')?;
            }
        }
        FinSet::new(v).map_err(|_| self.semantic(at, "set must be strictly increasing positive integers".into()))
    }

    pub fn rational(&mut self) -> Result<BigRational, ParseError> {
        let neg = self.eat('-');
        let num = BigInt::from(self.biguint("number")?);
        let at = self.pos;
        let den = if self.eat('/') { BigInt::from(self.biguint("denominator")?) } else { BigInt::one() };
        if den.is_zero() {
            return Err(self.semantic(at, "zero denominator".into()));
        }
        let r = BigRational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    pub fn vector(&mut self) -> Result<SparseVec, ParseError> {
        self.expect('[')?;
        let mut v = SparseVec::zero();
        if self.eat(']') {
            return Ok(v);
        }
        loop {
            self.skip_ws();
            let at = self.pos;
            let p = self.positive("position")?;
            self.expect(':')?;
            let c = self.rational()?;
            if v.contains(p) {
                return Err(self.semantic(at, format!("position {p} repeated")));
            }
            v.set(p, c);
            if self.eat(']') {
                return Ok(v);
            }
            self.expect(',')?;
        }
    }

    // spaces

    fn theta(&mut self) -> Result<ThetaSeq, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let t = if self.eat_keyword("seq") {
            self.expect('(')?;
            let mut head = vec![self.rational()?];
            while self.eat(',') {
                head.push(self.rational()?);
            }
            self.expect(';')?;
            let ratio = self.rational()?;
            self.expect(')')?;
            ThetaSeq::Explicit { head, ratio }
        } else {
            ThetaSeq::Geometric(self.rational()?)
        };
        t.validate().map_err(|m| self.semantic(at, m))?;
        Ok(t)
    }

    fn gseq(&mut self) -> Result<GSeq, ParseError> {
        self.skip_ws();
        let save = self.pos;
        let id = self.peek_ident();
        let index_var = |p: &mut Parser| p.eat_keyword("n");
        match id {
            Some("pow") => {
                self.pos += 3;
                self.expect('(')?;
                let f = self.family()?;
                self.expect(',')?;
                if index_var(self) {
                    self.expect(')')?;
                    return Ok(GSeq::Pow(f));
                }
            }
            Some("S") | Some("FS") => {
                self.pos += id.unwrap().len();
                if self.eat('[') && index_var(self) {
                    self.expect(']')?;
                    return Ok(if id == Some("S") { GSeq::Schreier } else { GSeq::Fine });
                }
            }
            Some("A") => {
                self.pos += 1;
                if self.eat('(') && index_var(self) {
                    self.expect(')')?;
                    return Ok(GSeq::Card);
                }
            }
            _ => {}
        }
        self.pos = save;
        Ok(GSeq::Const(self.family()?))
    }

    pub fn space(&mut self) -> Result<Space, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let Some(id) = self.peek_ident() else {
            return Err(self.expected("space"));
        };
        self.pos += id.len();
        match id {
            "X" => {
                self.expect('[')?;
                let x = self.ordinal()?;
                self.expect(']')?;
                Ok(Space::FamilySup(Family::Schreier(x)))
            }
            "sup" => {
                self.expect('(')?;
                let f = self.family()?;
                self.expect(')')?;
                Ok(Space::FamilySup(f))
            }
            "T" => {
                self.expect('(')?;
                let theta_at = {
                    self.skip_ws();
                    self.pos
                };
                let thetas = self.theta()?;
                if self.eat(',') {
                    let ThetaSeq::Geometric(theta) = thetas else {
                        return Err(self.semantic(theta_at, "T(theta,g) takes a single theta".into()));
                    };
                    let g = self.family()?;
                    self.expect(')')?;
                    return Ok(Space::SingleTsirelson { theta, g });
                }
                self.expect(';')?;
                let g0 = self.family()?;
                self.expect(';')?;
                let gseq = self.gseq()?;
                self.expect(')')?;
                Ok(Space::Tsirelson { g0, thetas, gseq })
            }
            "dsum" => {
                self.expect('(')?;
                let u = self.space()?;
                self.expect(';')?;
                let mut summands = vec![self.space()?];
                while self.eat(',') {
                    summands.push(self.space()?);
                }
                self.expect(')')?;
                Ok(Space::DirectSum { u: Box::new(u), summands })
            }
            _ => {
                self.pos = at;
                Err(self.expected("space (X, sup, T, dsum)"))
            }
        }
    }

    // colorings and selectors

    fn set_term(&mut self) -> Result<SetTerm, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let id = self.ident("term (maxE, minE, cardE, maxF, minF, cardF)")?;
        SetTerm::from_name(id).ok_or_else(|| {
            self.pos = at;
            self.expected("term (maxE, minE, cardE, maxF, minF, cardF)")
        })
    }

    pub fn pred(&mut self) -> Result<Pred, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let id = self.ident("predicate")?;
        let p = match id {
            "true" | "all0" => Pred::True,
            "false" | "all1" => Pred::False,
            "parity" => Pred::Even(SetTerm::MaxE),
            "even" | "odd" => {
                self.expect('(')?;
                let t = self.set_term()?;
                self.expect(')')?;
                if id == "even" {
                    Pred::Even(t)
                } else {
                    Pred::Odd(t)
                }
            }
            "le" | "ge" => {
                self.expect('(')?;
                let t = self.set_term()?;
                self.expect(',')?;
                let k = self.u64("bound")?;
                self.expect(')')?;
                if id == "le" {
                    Pred::Le(t, k)
                } else {
                    Pred::Ge(t, k)
                }
            }
            "memE" | "memF" => {
                self.expect('(')?;
                let f = self.family()?;
                self.expect(')')?;
                Pred::Member(if id == "memE" { SetRef::E } else { SetRef::F }, f)
            }
            "not" => {
                self.expect('(')?;
                let p = self.pred()?;
                self.expect(')')?;
                Pred::Not(Box::new(p))
            }
            "and" | "or" => {
                self.expect('(')?;
                let p = self.pred()?;
                self.expect(',')?;
                let q = self.pred()?;
                self.expect(')')?;
                if id == "and" {
                    Pred::And(Box::new(p), Box::new(q))
                } else {
                    Pred::Or(Box::new(p), Box::new(q))
                }
            }
            _ => {
                self.pos = at;
                return Err(self.expected("predicate"));
            }
        };
        Ok(p)
    }

    pub fn coloring(&mut self) -> Result<Coloring, ParseError> {
        if self.peek_ident() == Some("colors") {
            self.pos += "colors".len();
            self.expect('(')?;
            let zero = self.pred()?;
            self.expect(';')?;
            let one = self.pred()?;
            self.expect(')')?;
            return Ok(Coloring { zero, one: Some(one) });
        }
        Ok(Coloring { zero: self.pred()?, one: None })
    }

    pub fn chain_pred(&mut self) -> Result<ChainPred, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let id = self.ident("chain predicate")?;
        let p = match id {
            "true" | "all0" => ChainPred::Const(true),
            "false" | "all1" => ChainPred::Const(false),
            "len_eq" | "len_le" | "len_ge" => {
                self.expect('(')?;
                let k = self.u64("length")?;
                self.expect(')')?;
                match id {
                    "len_eq" => ChainPred::LenEq(k),
                    "len_le" => ChainPred::LenLe(k),
                    _ => ChainPred::LenGe(k),
                }
            }
            "even_top" => ChainPred::EvenTop,
            "not" => {
                self.expect('(')?;
                let p = self.chain_pred()?;
                self.expect(')')?;
                ChainPred::Not(Box::new(p))
            }
            "and" | "or" => {
                self.expect('(')?;
                let p = self.chain_pred()?;
                self.expect(',')?;
                let q = self.chain_pred()?;
                self.expect(')')?;
                if id == "and" {
                    ChainPred::And(Box::new(p), Box::new(q))
                } else {
                    ChainPred::Or(Box::new(p), Box::new(q))
                }
            }
            _ => {
                self.pos = at;
                return Err(self.expected("chain predicate"));
            }
        };
        Ok(p)
    }

    pub fn selector(&mut self) -> Result<Selector, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let s = match self.ident("selector")? {
            "id" => Selector::Id,
            "nexteven" => Selector::NextEven,
            "nextodd" => Selector::NextOdd,
            "scale" => {
                self.expect('(')?;
                let k = self.positive("factor")?;
                self.expect(')')?;
                Selector::Scale(k)
            }
            "shift" => {
                self.expect('(')?;
                let c = self.u64("shift")?;
                self.expect(')')?;
                Selector::Shift(c)
            }
            "affine" => {
                self.expect('(')?;
                let a = self.positive("slope")?;
                self.expect(',')?;
                let b = self.u64("offset")?;
                self.expect(')')?;
                Selector::Affine(a, b)
            }
            _ => {
                self.pos = at;
                return Err(self.expected("selector (id, scale, shift, affine, nexteven, nextodd)"));
            }
        };
        Ok(s)
    }

    pub fn selectors(&mut self) -> Result<Vec<Selector>, ParseError> {
        let mut v = vec![self.selector()?];
        while self.eat(',') {
            v.push(self.selector()?);
        }
        Ok(v)
    }
}

fn whole<'s, T>(s: &'s str, f: impl FnOnce(&mut Parser<'s>) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser::new(s);
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_ordinal(s: &str) -> Result<Ordinal, ParseError> {
    whole(s, Parser::ordinal)
}

pub fn parse_family(s: &str) -> Result<Family, ParseError> {
    whole(s, Parser::family)
}

pub fn parse_set(s: &str) -> Result<FinSet, ParseError> {
    whole(s, Parser::set)
}

pub fn parse_vector(s: &str) -> Result<SparseVec, ParseError> {
    whole(s, Parser::vector)
}

pub fn parse_space(s: &str) -> Result<Space, ParseError> {
    whole(s, Parser::space)
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    whole(s, Parser::rational)
}

pub fn parse_coloring(s: &str) -> Result<Coloring, ParseError> {
    whole(s, Parser::coloring)
}

pub fn parse_chain_pred(s: &str) -> Result<ChainPred, ParseError> {
    whole(s, Parser::chain_pred)
}

pub fn parse_selectors(s: &str) -> Result<Vec<Selector>, ParseError> {
    whole(s, Parser::selectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dangling_plus_points_at_plus() {
        let e = parse_family("S[w+]").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        assert_eq!((e.line, e.column), (1, 4));
        assert!(e.message.contains("after '+'"), "{}", e.message);
    }

    #[test]
    fn positions_count_lines() {
        let e = parse_family("sum(A(1),\n  prod(S,))").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        assert!(e.message.contains("expected family"), "{}", e.message);
    }

    #[test]
    fn semantic_errors_are_distinct() {
        let e = parse_space("T(3/2,S)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        let e = parse_family("diag(S,w+1)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        let e = parse_set("{3,2}").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        let e = parse_vector("[1:1,1:2]").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
    }

    #[test]
    fn ordinal_forms() {
        assert_eq!(parse_ordinal("w^2*3+w+4").unwrap().to_string(), "w^2*3+w+4");
        assert_eq!(parse_ordinal("1+w").unwrap().to_string(), "w");
        assert_eq!(parse_ordinal("w^(w+1)*2").unwrap().to_string(), "w^(w+1)*2");
        assert!(parse_ordinal("w*0").is_err());
        assert!(parse_ordinal("w^").is_err());
    }

    #[test]
    fn spaces_and_vectors() {
        let t = parse_space("T(1/2,S)").unwrap();
        assert_eq!(t.to_string(), "T(1/2,S)");
        let t = parse_space("T(seq(1/2,1/3;1/2);A(1);pow(S,n))").unwrap();
        assert_eq!(t.to_string(), "T(seq(1/2,1/3;1/2);A(1);pow(S,n))");
        let t = parse_space("T(1/3;S;pow(S,2))").unwrap();
        assert_eq!(t.to_string(), "T(1/3;S;pow(S,2))");
        let d = parse_space("dsum(X[1];X[0],sup(A(2)))").unwrap();
        assert_eq!(d.to_string(), "dsum(X[1];X[0],sup(A(2)))");
        let v = parse_vector("[5:-2, 3:1/2]").unwrap();
        assert_eq!(v.to_string(), "[3:1/2,5:-2]");
    }

    #[test]
    fn colorings_and_selectors() {
        assert_eq!(parse_coloring("parity").unwrap().to_string(), "even(maxE)");
        let c = parse_coloring("colors(ge(cardE,2);le(maxF,9))").unwrap();
        assert_eq!(c.to_string(), "colors(ge(cardE,2);le(maxF,9))");
        assert_eq!(parse_selectors("id, scale(2),nexteven").unwrap().len(), 3);
        assert!(parse_chain_pred("len_eq(1)").is_ok());
    }
}
