//! lcm-lattices: the join-closure of the minimal generators under lcm.

use std::collections::HashSet;

use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;

/// `{ lcm(σ) | ∅ ≠ σ ⊆ G(J) }`, ordered by divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcmLattice {
    elements: Vec<Monomial>,
}

/// Join-closure of `atoms` under lcm, without the unit unless it is an atom.
pub fn join_closure<'a, I: IntoIterator<Item = &'a Monomial>>(atoms: I) -> Vec<Monomial> {
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut elems: Vec<Monomial> = Vec::new();
    for a in atoms {
        if seen.contains(a) {
            continue;
        }
        let fresh: Vec<Monomial> = elems.iter().map(|e| e.lcm(a)).chain(std::iter::once(a.clone())).collect();
        for f in fresh {
            if seen.insert(f.clone()) {
                elems.push(f);
            }
        }
    }
    elems.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    elems
}

impl LcmLattice {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        LcmLattice { elements: join_closure(ideal.gens()) }
    }

    /// Elements sorted by degree, then descending lex.
    pub fn elements(&self) -> &[Monomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.elements.iter().any(|e| e == m)
    }

    /// `a ∨ b`, defined when both are lattice elements.
    pub fn join(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        (self.contains(a) && self.contains(b)).then(|| a.lcm(b))
    }

    /// Top element `lcm(G(J))`.
    pub fn top(&self) -> Option<&Monomial> {
        self.elements.last()
    }
}

pub fn lcm_lattice(ideal: &MonomialIdeal) -> LcmLattice {
    LcmLattice::new(ideal)
}

/// The joins `a ∨ b` for each requested pair, and whether they are pairwise distinct.
pub fn joins_distinct(lattice: &LcmLattice, pairs: &[(Monomial, Monomial)]) -> (Vec<Option<Monomial>>, bool) {
    let joins: Vec<Option<Monomial>> = pairs.iter().map(|(a, b)| lattice.join(a, b)).collect();
    let distinct = joins.iter().all(Option::is_some) && joins.iter().collect::<HashSet<_>>().len() == joins.len();
    (joins, distinct)
}
