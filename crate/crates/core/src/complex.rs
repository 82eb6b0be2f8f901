//! Multigraded free complexes with sparse signed-monomial differentials.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, RingSpec};
use crate::polarize::SpecializationMap;

/// A basis element of a free module, labeled and multigraded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: Monomial,
}

/// One matrix entry `coeff · monomial` in row `row` of the target level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub row: usize,
    pub coeff: i64,
    pub monomial: Monomial,
}

/// `levels[0]` is the ring itself (one generator of degree `1`);
/// `diffs[q][col]` lists the image of basis element `col` of level `q + 1`
/// in level `q`, sorted by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeComplex {
    pub ring: RingSpec,
    pub levels: Vec<Vec<BasisElement>>,
    pub diffs: Vec<Vec<Vec<Term>>>,
}

/// A nonzero entry of `∂∘∂`: column `col` of level `level` hits `row` of
/// level `level - 2` with the listed monomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareWitness {
    pub level: usize,
    pub col: usize,
    pub row: usize,
    pub value: Vec<(Monomial, i64)>,
}

/// Collapses repeated rows and drops zero coefficients.
pub fn normalize_terms(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(|a, b| a.row.cmp(&b.row).then_with(|| a.monomial.cmp(&b.monomial)));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.row == t.row && last.monomial == t.monomial => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.coeff != 0);
    out
}

impl FreeComplex {
    /// The complex `0 → R` with only the unit level.
    pub fn new(ring: RingSpec) -> Self {
        FreeComplex {
            ring,
            levels: vec![vec![BasisElement { label: "1".into(), degree: Monomial::one() }]],
            diffs: Vec::new(),
        }
    }

    /// Appends a level together with its differential into the current top.
    pub fn push_level(&mut self, basis: Vec<BasisElement>, diff: Vec<Vec<Term>>) {
        assert_eq!(basis.len(), diff.len(), "one column per basis element");
        self.levels.push(basis);
        self.diffs.push(diff.into_iter().map(normalize_terms).collect());
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Highest level index with a nonzero module.
    pub fn length(&self) -> usize {
        self.levels.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }

    pub fn num_entries(&self) -> usize {
        self.diffs.iter().flatten().map(Vec::len).sum()
    }

    /// All entries `(level, col, term)` where `level` is the source level.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Term)> {
        self.diffs.iter().enumerate().flat_map(|(q, cols)| {
            cols.iter().enumerate().flat_map(move |(c, ts)| ts.iter().map(move |t| (q + 1, c, t)))
        })
    }

    /// Index checks: rows in range and every degree living in the ring.
    pub fn validate(&self) -> Result<()> {
        if self.levels.first().map(Vec::len) != Some(1) || !self.levels[0][0].degree.is_one() {
            return Err(Error::InvalidArgument("level 0 must be the ring itself".into()));
        }
        if self.diffs.len() + 1 != self.levels.len() {
            return Err(Error::InvalidArgument("one differential per positive level".into()));
        }
        for (q, cols) in self.diffs.iter().enumerate() {
            if cols.len() != self.levels[q + 1].len() {
                return Err(Error::InvalidArgument(format!("level {} column count", q + 1)));
            }
            for t in cols.iter().flatten() {
                if t.row >= self.levels[q].len() {
                    return Err(Error::InvalidArgument(format!("row {} out of range at level {q}", t.row)));
                }
                if !self.ring.contains(&t.monomial) {
                    return Err(Error::InvalidArgument(format!("{} is outside {}", t.monomial, self.ring)));
                }
            }
        }
        for b in self.levels.iter().flatten() {
            if !self.ring.contains(&b.degree) {
                return Err(Error::InvalidArgument(format!("{} is outside {}", b.degree, self.ring)));
            }
        }
        Ok(())
    }

    /// Entries whose monomial is not `deg(col) / deg(row)`.
    pub fn inhomogeneous_entries(&self) -> Vec<(usize, usize, Term)> {
        self.entries()
            .filter(|(q, c, t)| {
                let src = &self.levels[*q][*c].degree;
                let dst = &self.levels[q - 1][t.row].degree;
                dst.mul(&t.monomial) != *src
            })
            .map(|(q, c, t)| (q, c, t.clone()))
            .collect()
    }

    /// Entries with a unit monomial; a minimal complex has none.
    pub fn unit_entries(&self) -> Vec<(usize, usize, Term)> {
        self.entries().filter(|(_, _, t)| t.monomial.is_one()).map(|(q, c, t)| (q, c, t.clone())).collect()
    }

    /// Nonzero entries of `∂_{q-1} ∘ ∂_q`, computed symbolically.
    pub fn square_witnesses(&self) -> Vec<SquareWitness> {
        let mut out = Vec::new();
        for q in 2..self.levels.len() {
            for (c, col) in self.diffs[q - 1].iter().enumerate() {
                let mut acc: BTreeMap<usize, BTreeMap<Monomial, i64>> = BTreeMap::new();
                for t in col {
                    for s in &self.diffs[q - 2][t.row] {
                        *acc.entry(s.row).or_default().entry(t.monomial.mul(&s.monomial)).or_default() +=
                            t.coeff * s.coeff;
                    }
                }
                for (row, coeffs) in acc {
                    let value: Vec<(Monomial, i64)> = coeffs.into_iter().filter(|(_, v)| *v != 0).collect();
                    if !value.is_empty() {
                        out.push(SquareWitness { level: q, col: c, row, value });
                    }
                }
            }
        }
        out
    }

    pub fn is_complex(&self) -> bool {
        self.square_witnesses().is_empty()
    }

    /// Applies `φ` to every degree and every entry.
    pub fn specialize(&self, phi: &SpecializationMap) -> Result<FreeComplex> {
        let ring = phi.target_ring(self.ring)?;
        let map = |m: &Monomial| -> Monomial {
            if m.is_one() {
                Monomial::one()
            } else {
                m.map_vars(|v| phi.apply_var(v))
            }
        };
        Ok(FreeComplex {
            ring,
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|b| BasisElement { label: b.label.clone(), degree: map(&b.degree) }).collect())
                .collect(),
            diffs: self
                .diffs
                .iter()
                .map(|cols| {
                    cols.iter()
                        .map(|ts| {
                            ts.iter().map(|t| Term { row: t.row, coeff: t.coeff, monomial: map(&t.monomial) }).collect()
                        })
                        .collect()
                })
                .collect(),
        })
    }

    /// Multiplies the coefficient of one entry by `-1`.
    pub fn flip_sign(&mut self, level: usize, col: usize, index: usize) {
        self.diffs[level - 1][col][index].coeff *= -1;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    pub fn from_json(s: &str) -> Result<FreeComplex> {
        let c: FreeComplex = serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        c.validate()?;
        Ok(c)
    }
}
