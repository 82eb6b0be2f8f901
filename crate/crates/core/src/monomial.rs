//! Exact monomial arithmetic over singly indexed rings `k[x_1..x_n]` and
//! doubly indexed rings `k[x_{i,j}]`.
//!
//! A [`Monomial`] stores only its positive exponents, sorted by variable. The
//! same type doubles as a multidegree label for graded free modules.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial ring descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingSpec {
    /// `k[x_1, ..., x_n]`.
    Single { n: u32 },
    /// `k[x_{i,j} | 1 <= i <= n, 1 <= j <= d]`.
    Double { n: u32, d: u32 },
}

impl RingSpec {
    pub fn single(n: u32) -> Self {
        RingSpec::Single { n }
    }

    pub fn double(n: u32, d: u32) -> Self {
        RingSpec::Double { n, d }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, RingSpec::Single { .. })
    }

    /// Number of "rows" `n` (the single index range, or the `i` range).
    pub fn n(&self) -> u32 {
        match *self {
            RingSpec::Single { n } | RingSpec::Double { n, .. } => n,
        }
    }

    pub fn num_vars(&self) -> usize {
        match *self {
            RingSpec::Single { n } => n as usize,
            RingSpec::Double { n, d } => (n * d) as usize,
        }
    }

    /// Variables in canonical order (lexicographic by index).
    pub fn variables(&self) -> Vec<Var> {
        match *self {
            RingSpec::Single { n } => (1..=n).map(Var::Single).collect(),
            RingSpec::Double { n, d } => (1..=n).flat_map(|i| (1..=d).map(move |j| Var::Double(i, j))).collect(),
        }
    }

    /// Position of `v` in [`RingSpec::variables`].
    pub fn var_index(&self, v: &Var) -> Option<usize> {
        match (*self, *v) {
            (RingSpec::Single { n }, Var::Single(i)) if (1..=n).contains(&i) => Some((i - 1) as usize),
            (RingSpec::Double { n, d }, Var::Double(i, j)) if (1..=n).contains(&i) && (1..=d).contains(&j) => {
                Some(((i - 1) * d + (j - 1)) as usize)
            }
            _ => None,
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.iter().all(|(v, _)| self.var_index(v).is_some())
    }

    /// Dense exponent vector of `m` indexed by [`RingSpec::var_index`].
    pub fn dense(&self, m: &Monomial) -> Vec<u32> {
        let mut out = vec![0; self.num_vars()];
        for (v, e) in m.iter() {
            let idx = self.var_index(v).unwrap_or_else(|| panic!("variable {v} outside ring {self}"));
            out[idx] = *e;
        }
        out
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RingSpec::Single { n } => write!(f, "k[x1..x{n}]"),
            RingSpec::Double { n, d } => write!(f, "k[x[i,j] | i<={n}, j<={d}]"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("'{s}' is not a ring"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let s = s.trim();
        if let Some(n) = s.strip_prefix("k[x1..x").and_then(|t| t.strip_suffix(']')) {
            return Ok(RingSpec::single(num(n)?));
        }
        let body = s.strip_prefix("k[x[i,j] | i<=").and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (n, d) = body.split_once(", j<=").ok_or_else(bad)?;
        Ok(RingSpec::double(num(n)?, num(d)?))
    }
}

/// A variable `x_i` or `x_{i,j}`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Single(u32),
    Double(u32, u32),
}

impl Var {
    /// The row index `i`.
    pub fn row(&self) -> u32 {
        match *self {
            Var::Single(i) | Var::Double(i, _) => i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Single(i) => write!(f, "x{i}"),
            Var::Double(i, j) => write!(f, "x[{i},{j}]"),
        }
    }
}

/// A monomial, stored as the sorted list of its positive exponents.
///
/// `Ord` is the lexicographic order with `x_1 > x_2 > ...`: `a > b` iff at the
/// smallest variable where the exponents differ, `a` has the larger one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

/// Multidegree labels share the monomial representation.
pub type MultiDegree = Monomial;

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs; repeated
    /// variables accumulate and zero exponents are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut exps: Vec<(Var, u32)> = pairs.into_iter().filter(|(_, e)| *e > 0).collect();
        exps.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { exps: merged }
    }

    /// `x_1^{a_1} ... x_n^{a_n}` from a dense exponent vector.
    pub fn from_exponents(a: &[u32]) -> Self {
        Monomial {
            exps: a.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (Var::Single(i as u32 + 1), *e)).collect(),
        }
    }

    /// Squarefree monomial in a double ring from a list of positions.
    pub fn from_positions<I: IntoIterator<Item = (u32, u32)>>(positions: I) -> Self {
        Self::from_pairs(positions.into_iter().map(|(i, j)| (Var::Double(i, j), 1)))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, u32)> {
        self.exps.iter()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.exps.binary_search_by(|(w, _)| w.cmp(v)).map(|k| self.exps[k].1).unwrap_or(0)
    }

    /// Exponent of `x_i` in a singly indexed monomial.
    pub fn exp(&self, i: u32) -> u32 {
        self.exponent(&Var::Single(i))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|(_, e)| *e == 1)
    }

    /// True when every variable is singly indexed (the unit counts as both).
    pub fn is_single(&self) -> bool {
        self.exps.iter().all(|(v, _)| matches!(v, Var::Single(_)))
    }

    pub fn is_double(&self) -> bool {
        self.exps.iter().all(|(v, _)| matches!(v, Var::Double(..)))
    }

    pub fn support(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|(v, _)| *v)
    }

    fn merge_with(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, e) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, f(a[i - 1].1, 0))
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, f(0, b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, f(a[i - 1].1, b[j - 1].1))
            };
            if e > 0 {
                out.push((v, e));
            }
        }
        Monomial { exps: out }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |x, y| x + y)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::min)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for (v, e) in &self.exps {
            while j < other.exps.len() && other.exps[j].0 < *v {
                j += 1;
            }
            if j == other.exps.len() || other.exps[j].0 != *v || other.exps[j].1 < *e {
                return false;
            }
        }
        true
    }

    /// `self / divisor`, failing unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Monomial) -> Result<Monomial> {
        if !divisor.divides(self) {
            return Err(Error::NotDivisible { divisor: divisor.to_string(), dividend: self.to_string() });
        }
        Ok(self.merge_with(divisor, |x, y| x - y))
    }

    /// The quotient `lcm(self, other) / other`, i.e. the colon generator.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |x, y| x.saturating_sub(y))
    }

    /// Applies a variable substitution; exponents of variables with the same
    /// image accumulate.
    pub fn map_vars(&self, f: impl Fn(&Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|(v, e)| (f(v), *e)))
    }

    fn require_single(&self) -> Result<()> {
        if self.is_single() {
            Ok(())
        } else {
            Err(Error::NotSingleRing)
        }
    }

    /// The unique non-decreasing index sequence `α_1 <= ... <= α_e` with
    /// `m = x_{α_1} ... x_{α_e}`.
    pub fn alpha_expression(&self) -> Result<Vec<u32>> {
        self.require_single()?;
        Ok(self.exps.iter().flat_map(|(v, e)| std::iter::repeat_n(v.row(), *e as usize)).collect())
    }

    /// Largest index with positive exponent.
    pub fn nu(&self) -> Result<u32> {
        self.require_single()?;
        self.exps.last().map(|(v, _)| v.row()).ok_or(Error::UnitMonomial)
    }

    /// Smallest index with positive exponent.
    pub fn mu(&self) -> Result<u32> {
        self.require_single()?;
        self.exps.first().map(|(v, _)| v.row()).ok_or(Error::UnitMonomial)
    }

    /// Dense exponents `(a_1, ..., a_n)` of a singly indexed monomial.
    pub fn single_exponents(&self, n: u32) -> Vec<u32> {
        (1..=n).map(|i| self.exp(i)).collect()
    }
}

/// `m_1 ≻ m_2` in the lexicographic order with `x_1 ≻ x_2 ≻ ...`.
pub fn lex_compare(m1: &Monomial, m2: &Monomial) -> Ordering {
    let (a, b) = (&m1.exps, &m2.exps);
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((v, e)), Some((w, f))) => match v.cmp(w) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if e != f {
                        return e.cmp(f);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// lcm of a collection; the unit for an empty one.
pub fn lcm_of<'a, I: IntoIterator<Item = &'a Monomial>>(ms: I) -> Monomial {
    ms.into_iter().fold(Monomial::one(), |acc, m| acc.lcm(m))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    src: &'a str,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|(b, _)| self.src[..*b].chars().count() + 1).unwrap_or(self.chars.len() + 1)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column(), message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.error(format!("expected '{c}', found '{x}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|(_, c)| c.to_digit(10)) {
            value = value * 10 + d as u64;
            if value > u32::MAX as u64 {
                return Err(self.error("integer too large"));
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        Ok(value as u32)
    }
}

/// Parses one monomial from `src`, reporting positions relative to `line`.
pub fn parse_monomial_at(src: &str, line: usize) -> Result<Monomial> {
    let mut cur = Cursor { chars: src.char_indices().collect(), pos: 0, line, src };
    if cur.peek().is_none() {
        return Err(cur.error("empty monomial"));
    }
    if cur.peek() == Some('1') {
        cur.pos += 1;
        if cur.peek().is_some() {
            return Err(cur.error("unexpected input after unit monomial"));
        }
        return Ok(Monomial::one());
    }
    let mut pairs = Vec::new();
    let mut kind: Option<bool> = None;
    loop {
        cur.expect('x')?;
        let var = if cur.peek() == Some('[') {
            cur.pos += 1;
            let i = cur.number()?;
            cur.expect(',')?;
            let j = cur.number()?;
            cur.expect(']')?;
            Var::Double(i, j)
        } else {
            Var::Single(cur.number()?)
        };
        if var.row() == 0 || matches!(var, Var::Double(_, 0)) {
            return Err(cur.error("variable indices are 1-based"));
        }
        let is_double = matches!(var, Var::Double(..));
        match kind {
            Some(k) if k != is_double => return Err(cur.error("cannot mix singly and doubly indexed variables")),
            _ => kind = Some(is_double),
        }
        let exp = if cur.peek() == Some('^') {
            cur.pos += 1;
            let e = cur.number()?;
            if e == 0 {
                return Err(cur.error("exponent must be positive"));
            }
            e
        } else {
            1
        };
        pairs.push((var, exp));
        match cur.peek() {
            None => break,
            Some('*') => cur.pos += 1,
            Some(c) => return Err(cur.error(format!("unexpected '{c}'"))),
        }
    }
    Ok(Monomial::from_pairs(pairs))
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_monomial_at(s, 1)
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
