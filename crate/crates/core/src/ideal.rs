use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, RingSpec, Var};

/// A monomial ideal given by its minimal generators, kept in descending
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    ring: RingSpec,
    gens: Vec<Monomial>,
}

/// Drops duplicates and non-minimal elements, then sorts descending lex.
pub fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    kept
}

impl MonomialIdeal {
    pub fn new(ring: RingSpec, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            if g.is_one() {
                return Err(Error::InvalidArgument("the unit ideal is not supported".into()));
            }
            if !ring.contains(g) {
                return Err(Error::InvalidArgument(format!("{g} does not live in {ring}")));
            }
        }
        Ok(MonomialIdeal { ring, gens: minimalize(gens) })
    }

    /// The smallest ring of the matching kind containing all of `gens`.
    pub fn infer_ring(gens: &[Monomial]) -> Result<RingSpec> {
        let vars: Vec<Var> = gens.iter().flat_map(|g| g.support()).collect();
        let single = vars.iter().filter(|v| matches!(v, Var::Single(_))).count();
        if single != 0 && single != vars.len() {
            return Err(Error::InvalidArgument("generators mix singly and doubly indexed variables".into()));
        }
        let n = vars.iter().map(|v| v.row()).max().unwrap_or(1);
        if single == vars.len() {
            Ok(RingSpec::single(n))
        } else {
            let d = vars
                .iter()
                .map(|v| match v {
                    Var::Double(_, j) => *j,
                    Var::Single(_) => 0,
                })
                .max()
                .unwrap_or(1);
            Ok(RingSpec::double(n, d))
        }
    }

    /// Ideal in the smallest ring containing its generators.
    pub fn from_gens(gens: Vec<Monomial>) -> Result<Self> {
        let ring = Self::infer_ring(&gens)?;
        Self::new(ring, gens)
    }

    /// The zero ideal (no generators).
    pub fn zero(ring: RingSpec) -> Self {
        MonomialIdeal { ring, gens: Vec::new() }
    }

    /// The unit ideal, generated by `1`. Only produced by colon operations.
    pub fn unit(ring: RingSpec) -> Self {
        MonomialIdeal { ring, gens: vec![Monomial::one()] }
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Monomial::is_one)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// `m ∈ I` iff some minimal generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(Monomial::is_squarefree)
    }

    /// True when all minimal generators share one degree.
    pub fn is_equigenerated(&self) -> bool {
        self.gens.windows(2).all(|w| w[0].degree() == w[1].degree())
    }

    /// Same generators regarded in a larger ring.
    pub fn with_ring(&self, ring: RingSpec) -> Result<Self> {
        Self::new(ring, self.gens.clone())
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}
