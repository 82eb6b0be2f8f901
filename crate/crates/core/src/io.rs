//! Text and structured formats for ideals and complexes.
//!
//! Ideal text: one monomial per line, `#` starts a comment, blank lines are
//! ignored. Structured ideal: `{"ring": {"n": .., "d": ..}, "generators": [..]}`
//! where `d` is present exactly for doubly indexed rings.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{BasisElement, FreeComplex, Term};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{parse_monomial_at, Monomial, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDoc {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
}

impl From<RingSpec> for RingDoc {
    fn from(r: RingSpec) -> Self {
        match r {
            RingSpec::Single { n } => RingDoc { n, d: None },
            RingSpec::Double { n, d } => RingDoc { n, d: Some(d) },
        }
    }
}

impl From<RingDoc> for RingSpec {
    fn from(r: RingDoc) -> Self {
        match r.d {
            None => RingSpec::single(r.n),
            Some(d) => RingSpec::double(r.n, d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingDoc>,
    pub generators: Vec<Monomial>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Parses the line-oriented ideal format; the ring is inferred.
pub fn parse_ideal_text(src: &str) -> Result<MonomialIdeal> {
    let mut gens = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let offset = body.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let m = parse_monomial_at(trimmed, k + 1).map_err(|e| match e {
            Error::Parse { line, column, message } => Error::Parse { line, column: column + offset, message },
            other => other,
        })?;
        if m.is_one() {
            return Err(Error::Parse {
                line: k + 1,
                column: offset + 1,
                message: "the unit ideal is not supported".into(),
            });
        }
        gens.push(m);
    }
    if gens.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "no generators".into() });
    }
    MonomialIdeal::from_gens(gens)
}

/// Parses either format, choosing the structured one when the first
/// non-blank character is `{`.
pub fn parse_ideal(src: &str) -> Result<MonomialIdeal> {
    if src.trim_start().starts_with('{') {
        let doc: IdealDocument = serde_json::from_str(src).map_err(json_error)?;
        if doc.generators.is_empty() {
            return Err(Error::InvalidArgument("no generators".into()));
        }
        match doc.ring {
            Some(r) => MonomialIdeal::new(r.into(), doc.generators),
            None => MonomialIdeal::from_gens(doc.generators),
        }
    } else {
        parse_ideal_text(src)
    }
}

/// Generators one per line, descending lex.
pub fn ideal_to_text(ideal: &MonomialIdeal) -> String {
    ideal.gens().iter().map(|g| format!("{g}\n")).collect()
}

pub fn ideal_to_json(ideal: &MonomialIdeal) -> String {
    let doc = IdealDocument { ring: Some(ideal.ring().into()), generators: ideal.gens().to_vec() };
    serde_json::to_string_pretty(&doc).expect("ideal serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub id: String,
    pub pair: String,
    pub degree: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub row: String,
    pub col: String,
    pub sign: i64,
    pub monomial: Monomial,
}

/// Self-describing export of a complex with the run configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    #[serde(default)]
    pub config: BTreeMap<String, String>,
    pub ring: RingDoc,
    pub ranks: Vec<usize>,
    pub levels: Vec<Vec<BasisRecord>>,
    pub differentials: Vec<EntryRecord>,
}

fn basis_id(level: usize, k: usize) -> String {
    format!("{level}.{k}")
}

impl ComplexDocument {
    pub fn from_complex(c: &FreeComplex, config: BTreeMap<String, String>) -> Self {
        let levels = c
            .levels
            .iter()
            .enumerate()
            .map(|(l, basis)| {
                basis
                    .iter()
                    .enumerate()
                    .map(|(k, b)| BasisRecord { id: basis_id(l, k), pair: b.label.clone(), degree: b.degree.clone() })
                    .collect()
            })
            .collect();
        let differentials = c
            .entries()
            .map(|(l, col, t)| EntryRecord {
                row: basis_id(l - 1, t.row),
                col: basis_id(l, col),
                sign: t.coeff,
                monomial: t.monomial.clone(),
            })
            .collect();
        ComplexDocument { config, ring: c.ring.into(), ranks: c.ranks(), levels, differentials }
    }

    pub fn to_complex(&self) -> Result<FreeComplex> {
        let mut ids: HashMap<&str, (usize, usize)> = HashMap::new();
        for (l, basis) in self.levels.iter().enumerate() {
            for (k, b) in basis.iter().enumerate() {
                if ids.insert(b.id.as_str(), (l, k)).is_some() {
                    return Err(Error::InvalidArgument(format!("duplicate basis id {}", b.id)));
                }
            }
        }
        let mut diffs: Vec<Vec<Vec<Term>>> = self.levels.iter().skip(1).map(|b| vec![Vec::new(); b.len()]).collect();
        for e in &self.differentials {
            let lookup =
                |id: &str| ids.get(id).copied().ok_or_else(|| Error::InvalidArgument(format!("unknown basis id {id}")));
            let (rl, rk) = lookup(&e.row)?;
            let (cl, ck) = lookup(&e.col)?;
            if cl == 0 || rl + 1 != cl {
                return Err(Error::InvalidArgument(format!("entry {} -> {} skips a level", e.col, e.row)));
            }
            diffs[cl - 1][ck].push(Term { row: rk, coeff: e.sign, monomial: e.monomial.clone() });
        }
        let mut c = FreeComplex::new(self.ring.into());
        c.levels.clear();
        c.levels.extend(self.levels.iter().map(|basis| {
            basis.iter().map(|b| BasisElement { label: b.pair.clone(), degree: b.degree.clone() }).collect::<Vec<_>>()
        }));
        c.diffs =
            diffs.into_iter().map(|cols| cols.into_iter().map(crate::complex::normalize_terms).collect()).collect();
        c.validate()?;
        if c.ranks() != self.ranks {
            return Err(Error::InvalidArgument("ranks disagree with the listed levels".into()));
        }
        Ok(c)
    }
}

pub fn complex_to_json(c: &FreeComplex, config: BTreeMap<String, String>) -> String {
    serde_json::to_string_pretty(&ComplexDocument::from_complex(c, config)).expect("complex serializes")
}

pub fn complex_from_json(src: &str) -> Result<FreeComplex> {
    let doc: ComplexDocument = serde_json::from_str(src).map_err(json_error)?;
    doc.to_complex()
}
