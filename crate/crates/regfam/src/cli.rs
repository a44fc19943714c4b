//! Command parsing and dispatch for the `regfam` binary.

use std::fmt;
use std::fs;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::dsl::{ErrorKind, ParseError, Parser};
use crate::family::{Family, FinSet};
use crate::index::{iota, rank, rank_oracle};
use crate::normspace::{direct_sum_norm, l1_lower_certificate, norm, schreier_sum_witness, NormOptions, Space, SparseVec};
use crate::ramsey::{
    prune, search_sum_witness, verify_product_witness, verify_pruning, verify_sum_witness, Coloring, ProductWitness,
    PruningMap, SearchOptions, Selector, SumWitness,
};
use crate::selftest;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Member,
    Maximal,
    MinExt,
    Decompose,
    Admissible,
    Enumerate,
    Iota,
    Rank,
    Norm,
    CertifyLower,
    Witness,
    VerifySum,
    SearchSum,
    VerifyProd,
    Prune,
    OracleCheck,
    Selftest,
}

impl Verb {
    pub const ALL: [(&'static str, Verb); 17] = [
        ("member", Verb::Member),
        ("maximal", Verb::Maximal),
        ("minext", Verb::MinExt),
        ("decompose", Verb::Decompose),
        ("admissible", Verb::Admissible),
        ("enumerate", Verb::Enumerate),
        ("iota", Verb::Iota),
        ("rank", Verb::Rank),
        ("norm", Verb::Norm),
        ("certify-lower", Verb::CertifyLower),
        ("witness", Verb::Witness),
        ("verify-sum", Verb::VerifySum),
        ("search-sum", Verb::SearchSum),
        ("verify-prod", Verb::VerifyProd),
        ("prune", Verb::Prune),
        ("oracle-check", Verb::OracleCheck),
        ("selftest", Verb::Selftest),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, v)| *v == self).unwrap().0
    }

    fn usage(self) -> &'static str {
        match self {
            Verb::Member | Verb::Maximal | Verb::MinExt | Verb::Rank => "<family> <set>",
            Verb::Decompose => "<family> <set>",
            Verb::Admissible => "<family> <set>...",
            Verb::Enumerate => "<family> <n>",
            Verb::Iota => "<family>",
            Verb::Norm => "<space> <vector>...",
            Verb::CertifyLower => "<space> <set> <m> <k> [<vector>]",
            Verb::Witness => "<space> <family> <set> [<vector>]",
            Verb::VerifySum | Verb::VerifyProd => "<file>",
            Verb::SearchSum => "<family> <coloring> [<bound>]",
            Verb::Prune => "<family> <selectors> [<depth> [<breadth>]] | <file>",
            Verb::OracleCheck => "<family> [<n>]",
            Verb::Selftest => "",
        }
    }
}

impl FromStr for Verb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.iter().find(|(n, _)| *n == s).map(|&(_, v)| v).ok_or_else(|| format!("unknown verb '{s}'"))
    }
}

/// A parsed invocation: one verb with its DSL arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Member(Family, FinSet),
    Maximal(Family, FinSet),
    MinExt(Family, FinSet),
    Decompose(Family, FinSet),
    Admissible(Family, Vec<FinSet>),
    Enumerate(Family, u64),
    Iota(Family),
    Rank(Family, FinSet),
    Norm(Space, Vec<SparseVec>),
    CertifyLower { space: Space, set: FinSet, m: u32, k: u32, coeffs: Option<SparseVec> },
    Witness { inner: Space, outer: Family, set: FinSet, coeffs: Option<SparseVec> },
    VerifySum(String),
    SearchSum { family: Family, coloring: Coloring, bound: Option<u64> },
    VerifyProd(String),
    Prune { family: Family, selectors: Vec<Selector>, depth: usize, breadth: u64 },
    VerifyPruning(String),
    OracleCheck(Family, u64),
    Selftest,
}

impl Command {
    pub fn verb(&self) -> Verb {
        match self {
            Command::Member(..) => Verb::Member,
            Command::Maximal(..) => Verb::Maximal,
            Command::MinExt(..) => Verb::MinExt,
            Command::Decompose(..) => Verb::Decompose,
            Command::Admissible(..) => Verb::Admissible,
            Command::Enumerate(..) => Verb::Enumerate,
            Command::Iota(..) => Verb::Iota,
            Command::Rank(..) => Verb::Rank,
            Command::Norm(..) => Verb::Norm,
            Command::CertifyLower { .. } => Verb::CertifyLower,
            Command::Witness { .. } => Verb::Witness,
            Command::VerifySum(..) => Verb::VerifySum,
            Command::SearchSum { .. } => Verb::SearchSum,
            Command::VerifyProd(..) => Verb::VerifyProd,
            Command::Prune { .. } | Command::VerifyPruning(..) => Verb::Prune,
            Command::OracleCheck(..) => Verb::OracleCheck,
            Command::Selftest => Verb::Selftest,
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verb().name())?;
        match self {
            Command::Member(a, e)
            | Command::Maximal(a, e)
            | Command::MinExt(a, e)
            | Command::Decompose(a, e)
            | Command::Rank(a, e) => write!(f, " {a} {e}"),
            Command::Admissible(a, blocks) => write!(f, " {a} {}", join(blocks, " ")),
            Command::Enumerate(a, n) | Command::OracleCheck(a, n) => write!(f, " {a} {n}"),
            Command::Iota(a) => write!(f, " {a}"),
            Command::Norm(s, xs) => write!(f, " {s} {}", join(xs, " ")),
            Command::CertifyLower { space, set, m, k, coeffs } => {
                write!(f, " {space} {set} {m} {k}")?;
                coeffs.iter().try_for_each(|c| write!(f, " {c}"))
            }
            Command::Witness { inner, outer, set, coeffs } => {
                write!(f, " {inner} {outer} {set}")?;
                coeffs.iter().try_for_each(|c| write!(f, " {c}"))
            }
            Command::VerifySum(p) | Command::VerifyProd(p) | Command::VerifyPruning(p) => write!(f, " {p}"),
            Command::SearchSum { family, coloring, bound } => {
                write!(f, " {family} {coloring}")?;
                bound.iter().try_for_each(|b| write!(f, " {b}"))
            }
            Command::Prune { family, selectors, depth, breadth } => {
                write!(f, " {family} {} {depth} {breadth}", join(selectors, ","))
            }
            Command::Selftest => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(ParseError),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(e) if e.kind == ErrorKind::Semantic => 1,
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Inconclusive(_) => 3,
        }
    }
}

fn domain(e: impl fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// Splits on whitespace outside brackets, keeping byte offsets.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, c) in line.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth <= 0 {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

struct Args<'a> {
    line: &'a str,
    lineno: usize,
    verb: Verb,
    toks: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Args<'a> {
    fn remaining(&self) -> usize {
        self.toks.len() - self.at
    }

    fn missing(&self, what: &str) -> CliError {
        CliError::Usage(format!("{}: missing {what}; usage: {} {}", self.verb.name(), self.verb.name(), self.verb.usage()))
    }

    fn next<T>(&mut self, what: &str, f: impl FnOnce(&mut Parser<'a>) -> Result<T, ParseError>) -> Result<T, CliError> {
        let Some(&(start, tok)) = self.toks.get(self.at) else {
            return Err(self.missing(what));
        };
        self.at += 1;
        let mut p = Parser::new(tok);
        let res = f(&mut p).and_then(|v| p.finish().map(|_| v));
        res.map_err(|e| {
            let column = self.line[..start].chars().count() + e.column;
            CliError::Parse(ParseError { line: self.lineno, column, offset: start + e.offset, ..e })
        })
    }

    fn raw(&mut self, what: &str) -> Result<&'a str, CliError> {
        let Some(&(_, tok)) = self.toks.get(self.at) else {
            return Err(self.missing(what));
        };
        self.at += 1;
        Ok(tok)
    }

    fn finish(&self) -> Result<(), CliError> {
        match self.toks.get(self.at) {
            Some((_, tok)) => Err(CliError::Usage(format!(
                "{}: unexpected argument '{tok}'; usage: {} {}",
                self.verb.name(),
                self.verb.name(),
                self.verb.usage()
            ))),
            None => Ok(()),
        }
    }
}

/// Parses one command line; `lineno` positions diagnostics in batch input.
pub fn parse_command(line: &str, lineno: usize) -> Result<Command, CliError> {
    let toks = tokens(line);
    let Some(&(_, verb)) = toks.first() else {
        return Err(CliError::Usage("empty command".into()));
    };
    let verb: Verb = verb.parse().map_err(CliError::Usage)?;
    let mut a = Args { line, lineno, verb, toks, at: 1 };
    let cmd = match verb {
        Verb::Member | Verb::Maximal | Verb::MinExt | Verb::Decompose | Verb::Rank => {
            let f = a.next("family", Parser::family)?;
            let e = a.next("set", Parser::set)?;
            match verb {
                Verb::Member => Command::Member(f, e),
                Verb::Maximal => Command::Maximal(f, e),
                Verb::MinExt => Command::MinExt(f, e),
                Verb::Decompose => Command::Decompose(f, e),
                _ => Command::Rank(f, e),
            }
        }
        Verb::Admissible => {
            let f = a.next("family", Parser::family)?;
            let mut blocks = Vec::new();
            while a.remaining() > 0 {
                blocks.push(a.next("set", Parser::set)?);
            }
            Command::Admissible(f, blocks)
        }
        Verb::Enumerate => Command::Enumerate(a.next("family", Parser::family)?, a.next("n", |p| p.u64("n"))?),
        Verb::Iota => Command::Iota(a.next("family", Parser::family)?),
        Verb::Norm => {
            let s = a.next("space", Parser::space)?;
            let mut xs = vec![a.next("vector", Parser::vector)?];
            while a.remaining() > 0 {
                xs.push(a.next("vector", Parser::vector)?);
            }
            Command::Norm(s, xs)
        }
        Verb::CertifyLower => {
            let space = a.next("space", Parser::space)?;
            let set = a.next("set", Parser::set)?;
            let m = a.next("m", |p| p.positive("m"))? as u32;
            let k = a.next("k", |p| p.u64("k"))? as u32;
            let coeffs = if a.remaining() > 0 { Some(a.next("vector", Parser::vector)?) } else { None };
            Command::CertifyLower { space, set, m, k, coeffs }
        }
        Verb::Witness => {
            let inner = a.next("space", Parser::space)?;
            let outer = a.next("family", Parser::family)?;
            let set = a.next("set", Parser::set)?;
            let coeffs = if a.remaining() > 0 { Some(a.next("vector", Parser::vector)?) } else { None };
            Command::Witness { inner, outer, set, coeffs }
        }
        Verb::VerifySum => Command::VerifySum(a.raw("file")?.to_string()),
        Verb::VerifyProd => Command::VerifyProd(a.raw("file")?.to_string()),
        Verb::SearchSum => {
            let family = a.next("family", Parser::family)?;
            let coloring = a.next("coloring", Parser::coloring)?;
            let bound = if a.remaining() > 0 { Some(a.next("bound", |p| p.positive("bound"))?) } else { None };
            Command::SearchSum { family, coloring, bound }
        }
        Verb::Prune if a.remaining() == 1 => Command::VerifyPruning(a.raw("file")?.to_string()),
        Verb::Prune => {
            let family = a.next("family", Parser::family)?;
            let selectors = a.next("selectors", Parser::selectors)?;
            let depth = if a.remaining() > 0 { a.next("depth", |p| p.u64("depth"))? as usize } else { 3 };
            let breadth = if a.remaining() > 0 { a.next("breadth", |p| p.positive("breadth"))? } else { 10 };
            Command::Prune { family, selectors, depth, breadth }
        }
        Verb::OracleCheck => {
            let f = a.next("family", Parser::family)?;
            let n = if a.remaining() > 0 { a.next("n", |p| p.u64("n"))? } else { 10 };
            Command::OracleCheck(f, n)
        }
        Verb::Selftest => Command::Selftest,
    };
    a.finish()?;
    Ok(cmd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Table,
    Records,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Mode::Table),
            "records" => Ok(Mode::Records),
            _ => Err(format!("unknown mode '{s}' (expected table or records)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub mode: Mode,
    pub bound: u64,
    pub support_limit: usize,
    pub src_ground: u64,
}

impl Default for Options {
    fn default() -> Self {
        let search = SearchOptions::default();
        Options {
            mode: Mode::Table,
            bound: search.bound,
            support_limit: NormOptions::default().support_limit,
            src_ground: search.source_ground,
        }
    }
}

impl Options {
    fn norm(&self) -> NormOptions {
        NormOptions { support_limit: self.support_limit }
    }
}

/// One result line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub verb: Verb,
    pub input: String,
    pub value: String,
    pub witness: Option<String>,
}

impl Record {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("verb".into(), json!(self.verb.name()));
        m.insert("input".into(), json!(self.input));
        m.insert("value".into(), json!(self.value));
        if let Some(w) = &self.witness {
            m.insert("witness".into(), json!(w));
        }
        Value::Object(m)
    }

    /// Table rendering: the value, then the witness text if any.
    pub fn to_table(&self) -> String {
        match &self.witness {
            Some(w) if self.value.is_empty() => w.trim_end().to_string(),
            Some(w) => format!("{}\n{}", self.value, w.trim_end()),
            None => self.value.clone(),
        }
    }

    pub fn render(&self, mode: Mode) -> String {
        match mode {
            Mode::Table => self.to_table(),
            Mode::Records => self.to_json().to_string(),
        }
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {path}: {e}")))
}

fn coeffs_on(set: &FinSet, v: &Option<SparseVec>) -> Vec<BigRational> {
    set.elems().iter().map(|&p| v.as_ref().map_or_else(BigRational::one, |v| v.get(p))).collect()
}

/// Executes a command; an `Err` carries the exit status to report.
pub fn run(cmd: &Command, opts: &Options) -> Result<Vec<Record>, CliError> {
    let input = cmd.to_string();
    let verb = cmd.verb();
    let rec = |value: String, witness: Option<String>| Record { verb, input: input.clone(), value, witness };
    let one = |value: String| Ok(vec![rec(value, None)]);
    match cmd {
        Command::Member(f, e) => one(f.member(e).to_string()),
        Command::Maximal(f, e) => one(f.is_maximal(e).map_err(domain)?.to_string()),
        Command::MinExt(f, e) => {
            let n = f.min_extension(e).map_err(domain)?;
            one(n.map_or_else(|| "none".to_string(), |n| n.to_string()))
        }
        Command::Decompose(g, e) => one(join(&g.standard_decomposition(e).map_err(domain)?, " ")),
        Command::Admissible(f, blocks) => one(f.is_admissible(blocks).to_string()),
        Command::Enumerate(f, n) => Ok(f.enumerate(*n).into_iter().map(|e| rec(e.to_string(), None)).collect()),
        Command::Iota(f) => one(iota(f).to_string()),
        Command::Rank(f, e) => one(rank(f, e).map_err(domain)?.to_string()),
        Command::Norm(space, xs) => {
            let v = match space {
                Space::DirectSum { .. } => direct_sum_norm(space, xs, opts.norm()),
                _ if xs.len() == 1 => norm(space, &xs[0], opts.norm()),
                _ => return Err(CliError::Usage(format!("{space} takes exactly one vector"))),
            };
            one(v.map_err(domain)?.to_string())
        }
        Command::CertifyLower { space, set, m, k, coeffs } => {
            let c = l1_lower_certificate(space, set, *m, *k, &coeffs_on(set, coeffs), opts.norm()).map_err(domain)?;
            Ok(vec![rec(c.holds().to_string(), Some(format!("norm {} >= bound {}", c.norm, c.bound)))])
        }
        Command::Witness { inner, outer, set, coeffs } => {
            let w = schreier_sum_witness(inner, outer, set, &coeffs_on(set, coeffs), opts.norm()).map_err(domain)?;
            let parts: Vec<String> = w.parts.iter().enumerate().filter(|(_, p)| !p.is_empty()).map(|(i, p)| format!("x{} {p}", i + 1)).collect();
            Ok(vec![rec(w.holds().to_string(), Some(format!("value {} l1 {}\n{}", w.value, w.l1, parts.join("\n"))))])
        }
        Command::VerifySum(path) => {
            let w: SumWitness = read_file(path)?.parse().map_err(ramsey_err)?;
            verify_sum_witness(&w).map_err(domain)?;
            one("valid".into())
        }
        Command::VerifyProd(path) => {
            let w: ProductWitness = read_file(path)?.parse().map_err(ramsey_err)?;
            verify_product_witness(&w).map_err(domain)?;
            one("valid".into())
        }
        Command::VerifyPruning(path) => {
            let m: PruningMap = read_file(path)?.parse().map_err(ramsey_err)?;
            verify_pruning(&m).map_err(domain)?;
            one("valid".into())
        }
        Command::SearchSum { family, coloring, bound } => {
            let so = SearchOptions { bound: bound.unwrap_or(opts.bound), source_ground: opts.src_ground };
            let out = search_sum_witness(family, coloring, so).map_err(ramsey_err)?;
            let tried = out.attempted.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ");
            match out.witness {
                Some(w) => {
                    let xi = format!("{} {}", w.parts[0].xi, w.parts[1].xi);
                    Ok(vec![rec(xi, Some(w.to_string()))])
                }
                None => Err(CliError::Inconclusive(format!(
                    "no witness inside [1,{}]; tried {tried}",
                    so.bound
                ))),
            }
        }
        Command::Prune { family, selectors, depth, breadth } => {
            let m = prune(family, selectors, *depth, *breadth).map_err(domain)?;
            Ok(vec![rec(format!("{} nodes", m.phi.len()), Some(m.to_string()))])
        }
        Command::OracleCheck(f, n) => {
            let sets = f.enumerate(*n);
            let mut skipped = 0;
            for e in &sets {
                let r = rank(f, e).map_err(domain)?;
                // the walk from the root only sees the leftmost branch
                if e.is_empty() && !r.is_finite() {
                    skipped += 1;
                    continue;
                }
                match rank_oracle(f, e, *n + 64).map_err(domain)? {
                    Some(k) if r.to_u64() == Some(k) => {}
                    None if !r.is_finite() => {}
                    walk => {
                        return Err(CliError::Domain(format!(
                            "rank {r} disagrees with the successor walk {} at {e}",
                            walk.map_or_else(|| "unbounded".to_string(), |k| k.to_string())
                        )))
                    }
                }
            }
            one(format!("agree on {} sets", sets.len() - skipped))
        }
        Command::Selftest => {
            let results = selftest::run();
            let failed = results.iter().filter(|r| !r.passed).count();
            let lines: Vec<Record> = results.iter().map(|r| rec(r.line(), None)).collect();
            if failed > 0 {
                let text = lines.iter().map(|r| r.value.clone()).collect::<Vec<_>>().join("\n");
                return Err(CliError::Domain(format!("{text}\n{failed} check(s) failed")));
            }
            Ok(lines)
        }
    }
}

fn ramsey_err(e: crate::ramsey::RamseyError) -> CliError {
    match e {
        crate::ramsey::RamseyError::Parse(p) => CliError::Parse(p),
        other => domain(other),
    }
}

/// Parses and runs one line, returning rendered output and the exit status.
pub fn execute(line: &str, lineno: usize, opts: &Options) -> (Vec<String>, Result<(), CliError>) {
    match parse_command(line, lineno).and_then(|c| run(&c, opts)) {
        Ok(recs) => (recs.iter().map(|r| r.render(opts.mode)).collect(), Ok(())),
        Err(e) => (Vec::new(), Err(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(line: &str) -> Result<Vec<Record>, CliError> {
        parse_command(line, 1).and_then(|c| run(&c, &Options::default()))
    }

    fn value(line: &str) -> String {
        exec(line).unwrap()[0].value.clone()
    }

    #[test]
    fn parse_examples() {
        let c = parse_command("iota prod(S[1],S[1])", 1).unwrap();
        assert_eq!(c, Command::Iota("prod(S[1],S[1])".parse().unwrap()));
        let c = parse_command("norm T(1/2,S) [3:1,4:1,5:1]", 1).unwrap();
        assert!(matches!(c, Command::Norm(..)));
        match parse_command("iota S[w+]", 1) {
            Err(CliError::Parse(e)) => {
                assert_eq!((e.line, e.column, e.offset), (1, 9, 8));
                assert_eq!(e.kind, ErrorKind::Syntax);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn run_examples() {
        assert_eq!(value("iota S[2]"), "w^2");
        assert_eq!(value("member S {2,3,4}"), "false");
        assert_eq!(value("norm T(1/2,S) [3:1,4:1,5:1]"), "3/2");
        assert_eq!(value("rank S[2] {2}"), "w+1");
        assert_eq!(value("minext A(2) {5}"), "6");
        assert_eq!(value("maximal S {2,3}"), "true");
        assert_eq!(value("decompose S {2,3,4,5,6,7}"), "{2,3} {4,5,6,7}");
        assert_eq!(value("admissible S {2,3} {4,5,6,7}"), "true");
        assert_eq!(exec("enumerate A(1) 3").unwrap().len(), 4);
        assert_eq!(value("certify-lower T(1/2,S) {3,4,5} 1 1"), "true");
        assert_eq!(value("witness X[1] S {2,3,4}"), "true");
        assert_eq!(value("oracle-check sum(A(1),A(2)) 8"), "agree on 93 sets");
        assert_eq!(value("oracle-check S 6"), "agree on 20 sets");
        assert_eq!(value("norm dsum(X[0];X[0],X[0]) [1:1] [2:-1]"), "1");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exec("frobnicate S").unwrap_err().exit_code(), 2);
        assert_eq!(exec("iota S[w+]").unwrap_err().exit_code(), 2);
        assert_eq!(exec("norm T(3/2,S) [1:1]").unwrap_err().exit_code(), 1);
        assert_eq!(exec("rank S {2,3,4}").unwrap_err().exit_code(), 1);
        assert_eq!(exec("iota").unwrap_err().exit_code(), 2);
        assert_eq!(exec("iota S S").unwrap_err().exit_code(), 2);
        assert_eq!(exec("oracle-check pre(odd,S)").unwrap_err().exit_code(), 1);
        let err = exec("search-sum A(2) even(maxF) 2").unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn search_sum_records() {
        let recs = exec("search-sum A(2) parity 30").unwrap();
        let w: SumWitness = recs[0].witness.as_ref().unwrap().parse().unwrap();
        assert!(verify_sum_witness(&w).is_ok());
        let json = recs[0].to_json();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["input", "value", "verb", "witness"]);
        let line = recs[0].render(Mode::Records);
        assert!(!line.contains('\n'));
        assert_eq!(serde_json::from_str::<Value>(&line).unwrap(), json);
    }

    #[test]
    fn witness_files_verify() {
        let dir = std::env::temp_dir().join(format!("regfam-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let recs = exec("search-sum A(3) or(even(maxE),odd(cardF))").unwrap();
        let sum = dir.join("sum.txt");
        fs::write(&sum, recs[0].witness.as_ref().unwrap()).unwrap();
        assert_eq!(value(&format!("verify-sum {}", sum.display())), "valid");

        let recs = exec("prune S nexteven 3 10").unwrap();
        let pr = dir.join("prune.txt");
        fs::write(&pr, recs[0].witness.as_ref().unwrap()).unwrap();
        assert_eq!(value(&format!("prune {}", pr.display())), "valid");

        let prod = dir.join("prod.txt");
        fs::write(&prod, "product-witness\nouter A(1)\ninner A(1)\ncoloring true\nground 2\nj {1} -> {1}\nj {2} -> {2}\nend\n")
            .unwrap();
        assert_eq!(value(&format!("verify-prod {}", prod.display())), "valid");
        fs::write(&prod, "product-witness\nouter A(1)\ninner A(1)\ncoloring false\nground 2\nj {1} -> {1}\nj {2} -> {2}\nend\n")
            .unwrap();
        assert_eq!(exec(&format!("verify-prod {}", prod.display())).unwrap_err().exit_code(), 1);
        fs::write(&prod, "product-witness\nouter A(1)\ninner A(1\n").unwrap();
        match exec(&format!("verify-prod {}", prod.display())) {
            Err(CliError::Parse(e)) => assert_eq!(e.line, 3),
            other => panic!("{other:?}"),
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn commands_round_trip() {
        for line in [
            "member sum(A(1),S) {1,2,3}",
            "admissible S[1] {2,3} {4,5,6,7}",
            "norm dsum(X[1];X[0],sup(A(2))) [1:1/2] [2:-3,5:1]",
            "certify-lower T(seq(1/2,1/3;1/2);A(1);pow(S,n)) {3,4,5} 2 1 [3:1,4:1,5:-1]",
            "search-sum A(3) colors(ge(cardE,2);le(maxF,9)) 20",
            "prune S nexteven,scale(2) 2 4",
            "oracle-check pow(A(2),3) 9",
        ] {
            let c = parse_command(line, 1).unwrap();
            assert_eq!(c.to_string(), line);
            assert_eq!(parse_command(&c.to_string(), 1).unwrap(), c);
        }
    }
}
