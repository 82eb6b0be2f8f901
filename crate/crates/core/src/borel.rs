//! Borel fixed (strongly stable) ideals: recognition, closure, the
//! Eliahou–Kervaire splitting `g(m)`, the moves `fb_i` and `m_<i>`, the lex
//! filtration and monomial colon ideals.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ideal::{minimalize, MonomialIdeal};
use crate::monomial::{Monomial, RingSpec, Var};

/// `(x_j / x_i) · m`; the caller guarantees `x_i | m`.
fn exchange(m: &Monomial, from: u32, to: u32) -> Monomial {
    m.div_exact(&Monomial::var(Var::Single(from))).expect("x_from divides m").mul(&Monomial::var(Var::Single(to)))
}

/// First violation of the Borel condition as `(m, (x_j/x_i)·m)`.
pub fn borel_violation(ideal: &MonomialIdeal) -> Option<(Monomial, Monomial)> {
    for m in ideal.gens() {
        for i in m.support().map(|v| v.row()) {
            for j in 1..i {
                let moved = exchange(m, i, j);
                if !ideal.contains(&moved) {
                    return Some((m.clone(), moved));
                }
            }
        }
    }
    None
}

/// `m ∈ G(I)`, `x_i | m`, `j < i` imply `(x_j/x_i)·m ∈ I`.
pub fn is_borel_fixed(ideal: &MonomialIdeal) -> bool {
    ideal.ring().is_single() && borel_violation(ideal).is_none()
}

/// Eliahou–Kervaire stability: `(x_j / x_{ν(m)})·m ∈ I` for `j < ν(m)`.
pub fn is_stable(ideal: &MonomialIdeal) -> bool {
    ideal.ring().is_single()
        && ideal.gens().iter().all(|m| {
            let nu = m.nu().expect("generators are not units");
            (1..nu).all(|j| ideal.contains(&exchange(m, nu, j)))
        })
}

/// Squarefree analog of [`is_borel_fixed`]: only moves onto variables not
/// already dividing the generator are required.
pub fn is_sq_strongly_stable(ideal: &MonomialIdeal) -> Result<bool> {
    if !ideal.ring().is_single() {
        return Err(Error::NotSingleRing);
    }
    if !ideal.is_squarefree() {
        return Err(Error::InvalidArgument("squarefree strong stability needs squarefree generators".into()));
    }
    Ok(ideal.gens().iter().all(|m| {
        m.support()
            .map(|v| v.row())
            .all(|i| (1..i).filter(|j| m.exp(*j) == 0).all(|j| ideal.contains(&exchange(m, i, j))))
    }))
}

/// `fb_i(m) = (x_i / x_k)·m` with `k = min{ j > i | a_j > 0 }`.
pub fn fb(m: &Monomial, i: u32) -> Result<Monomial> {
    let nu = m.nu()?;
    if i == 0 || i >= nu {
        return Err(Error::InvalidArgument(format!("fb_{i} needs 1 <= i < nu({m}) = {nu}")));
    }
    let k = m.support().map(|v| v.row()).find(|&k| k > i).expect("i < nu(m)");
    Ok(exchange(m, k, i))
}

/// A Borel fixed ideal together with its maximal generator degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BorelIdeal {
    ideal: MonomialIdeal,
    maxdeg: u32,
}

impl BorelIdeal {
    pub fn new(ideal: MonomialIdeal) -> Result<Self> {
        if !ideal.ring().is_single() {
            return Err(Error::NotSingleRing);
        }
        if ideal.is_empty() {
            return Err(Error::InvalidArgument("the zero ideal has no resolution here".into()));
        }
        if let Some((m, moved)) = borel_violation(&ideal) {
            return Err(Error::NotBorel(format!("{moved} is a Borel move of {m} outside I")));
        }
        let maxdeg = ideal.max_degree();
        Ok(BorelIdeal { ideal, maxdeg })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn gens(&self) -> &[Monomial] {
        self.ideal.gens()
    }

    pub fn ring(&self) -> RingSpec {
        self.ideal.ring()
    }

    pub fn n(&self) -> u32 {
        self.ideal.ring().n()
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.ideal.contains(m)
    }

    /// Position of `m` in the (descending lex) generator list.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.gens().binary_search_by(|g| m.cmp(g)).ok()
    }

    /// The Eliahou–Kervaire factor `g(m)`: the unique prefix of the alpha
    /// expression of `m` lying in `G(I)`.
    pub fn ek_g(&self, m: &Monomial) -> Result<Monomial> {
        if !self.contains(m) {
            return Err(Error::NotInIdeal(m.to_string()));
        }
        let alpha = m.alpha_expression()?;
        let mut found: Option<Monomial> = None;
        let mut prefix = Monomial::one();
        for &a in &alpha {
            prefix = prefix.mul(&Monomial::var(Var::Single(a)));
            if self.index_of(&prefix).is_some() {
                if let Some(prev) = &found {
                    return Err(Error::Internal(format!("{m} has two generator prefixes {prev} and {prefix}")));
                }
                found = Some(prefix.clone());
            }
        }
        found.ok_or_else(|| Error::Internal(format!("{m} lies in I but no prefix is a minimal generator")))
    }

    /// `m_<i> = g(fb_i(m))` for `i < ν(m)`, and `m` itself otherwise.
    pub fn m_bracket(&self, m: &Monomial, i: u32) -> Result<Monomial> {
        if self.index_of(m).is_none() {
            return Err(Error::NotGenerator(m.to_string()));
        }
        if i >= m.nu()? {
            return Ok(m.clone());
        }
        self.ek_g(&fb(m, i)?)
    }

    /// `I_r = (m_1, ..., m_r)` for `r = 1..t`, each certified Borel fixed.
    pub fn lex_filtration(&self) -> Result<Vec<MonomialIdeal>> {
        (1..=self.gens().len())
            .map(|r| {
                let part = MonomialIdeal::new(self.ring(), self.gens()[..r].to_vec())?;
                if !is_borel_fixed(&part) {
                    return Err(Error::Internal(format!("lex prefix {part} is not Borel fixed")));
                }
                Ok(part)
            })
            .collect()
    }
}

/// Smallest Borel fixed ideal of `ring` containing `gens`.
pub fn borel_closure_in(ring: RingSpec, gens: &[Monomial]) -> Result<BorelIdeal> {
    if !ring.is_single() {
        return Err(Error::NotSingleRing);
    }
    let mut seen: HashSet<Monomial> = gens.iter().cloned().collect();
    let mut work: Vec<Monomial> = gens.to_vec();
    while let Some(m) = work.pop() {
        for i in m.support().map(|v| v.row()).collect::<Vec<_>>() {
            for j in 1..i {
                let moved = exchange(&m, i, j);
                if seen.insert(moved.clone()) {
                    work.push(moved);
                }
            }
        }
    }
    BorelIdeal::new(MonomialIdeal::new(ring, minimalize(seen.into_iter().collect()))?)
}

/// Smallest Borel fixed ideal containing `gens`, in the smallest ring holding them.
pub fn borel_closure(gens: &[Monomial]) -> Result<BorelIdeal> {
    borel_closure_in(MonomialIdeal::infer_ring(gens)?, gens)
}

/// `(J : m)`, generated by `lcm(g, m) / m` for `g ∈ G(J)`.
pub fn colon_ideal(ideal: &MonomialIdeal, m: &Monomial) -> MonomialIdeal {
    let quotients: Vec<Monomial> = ideal.gens().iter().map(|g| g.colon(m)).collect();
    if quotients.iter().any(Monomial::is_one) {
        return MonomialIdeal::unit(ideal.ring());
    }
    MonomialIdeal::new(ideal.ring(), quotients).expect("quotients live in the same ring")
}

/// Every prefix colon `(m_1..m_{k-1}) : m_k` of `order` is generated by variables.
pub fn has_linear_quotients(ideal: &MonomialIdeal, order: &[Monomial]) -> Result<bool> {
    let mut sorted = order.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    if sorted != ideal.gens() {
        return Err(Error::InvalidArgument("order must be a permutation of the minimal generators".into()));
    }
    for k in 1..order.len() {
        let prefix = MonomialIdeal::new(ideal.ring(), order[..k].to_vec())?;
        if colon_ideal(&prefix, &order[k]).gens().iter().any(|g| g.degree() != 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
