//! The polarization `b-pol`, the squarefree operator, the `γ(a)` operators
//! and the specializations `θ`, `θ_a` from the doubly indexed ring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::borel::BorelIdeal;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{Monomial, RingSpec, Var};

/// `∏ x_{α_i} ↦ ∏ x_{α_i, i}`.
pub fn bpol_monomial(m: &Monomial, d: u32) -> Result<Monomial> {
    let alpha = m.alpha_expression()?;
    if alpha.len() as u32 > d {
        return Err(Error::DegreeOverflow { monomial: m.to_string(), degree: alpha.len() as u32, bound: d });
    }
    Ok(Monomial::from_positions(alpha.iter().enumerate().map(|(k, &a)| (a, k as u32 + 1))))
}

/// `b-pol(I)` in `k[x_{i,j} | i <= n, j <= d]` with `d` the maximal generator degree.
pub fn bpol_ideal(ideal: &BorelIdeal) -> MonomialIdeal {
    bpol_any(ideal.ideal(), ideal.maxdeg()).expect("degrees are bounded by maxdeg")
}

/// Generator-wise `b-pol` of an arbitrary monomial ideal of a single ring.
/// Only Borel fixed input yields a polarization.
pub fn bpol_any(ideal: &MonomialIdeal, d: u32) -> Result<MonomialIdeal> {
    if !ideal.ring().is_single() {
        return Err(Error::NotSingleRing);
    }
    let gens = ideal.gens().iter().map(|m| bpol_monomial(m, d)).collect::<Result<Vec<_>>>()?;
    MonomialIdeal::new(RingSpec::double(ideal.ring().n(), d.max(1)), gens)
}

/// A non-decreasing sequence `a_0 = 0 <= a_1 <= ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaSequence(Vec<u32>);

impl GammaSequence {
    pub fn new(a: Vec<u32>) -> Result<Self> {
        if a.first() != Some(&0) {
            return Err(Error::InvalidArgument("a gamma sequence starts with a_0 = 0".into()));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!("gamma sequence {a:?} is not non-decreasing")));
        }
        Ok(GammaSequence(a))
    }

    /// `a_i = i`, which turns `γ(a)` into the squarefree operator.
    pub fn squarefree(len: usize) -> Self {
        GammaSequence((0..len as u32).collect())
    }

    /// `a_i = 0`, which turns `θ_a` into `θ`.
    pub fn zero(len: usize) -> Self {
        GammaSequence(vec![0; len.max(1)])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    fn get(&self, i: usize) -> Result<u32> {
        self.0.get(i).copied().ok_or_else(|| {
            Error::InvalidArgument(format!("gamma sequence of length {} has no entry a_{i}", self.0.len()))
        })
    }

    /// Target ring `k[x_1..x_N]` with `N = n + a_{d-1}`.
    pub fn target_ring(&self, n: u32, d: u32) -> Result<RingSpec> {
        Ok(RingSpec::single(n + self.get(d.saturating_sub(1) as usize)?))
    }
}

impl FromStr for GammaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let a = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("'{t}' is not a non-negative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        GammaSequence::new(a)
    }
}

impl fmt::Display for GammaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `m^{γ(a)} = ∏ x_{α_i + a_{i-1}}`.
pub fn gamma_monomial(m: &Monomial, a: &GammaSequence) -> Result<Monomial> {
    let alpha = m.alpha_expression()?;
    let vars =
        alpha.iter().enumerate().map(|(k, &al)| Ok((Var::Single(al + a.get(k)?), 1))).collect::<Result<Vec<_>>>()?;
    Ok(Monomial::from_pairs(vars))
}

/// `I^{γ(a)}` in `k[x_1..x_N]`, `N = n + a_{d-1}`.
pub fn gamma_ideal(ideal: &MonomialIdeal, a: &GammaSequence) -> Result<MonomialIdeal> {
    if !ideal.ring().is_single() {
        return Err(Error::NotSingleRing);
    }
    let ring = a.target_ring(ideal.ring().n(), ideal.max_degree())?;
    let gens = ideal.gens().iter().map(|m| gamma_monomial(m, a)).collect::<Result<Vec<_>>>()?;
    MonomialIdeal::new(ring, gens)
}

/// `m^sq = ∏ x_{α_i + i - 1}`.
pub fn sq_monomial(m: &Monomial) -> Result<Monomial> {
    let alpha = m.alpha_expression()?;
    Ok(Monomial::from_pairs(alpha.iter().enumerate().map(|(k, &al)| (Var::Single(al + k as u32), 1))))
}

/// `I^sq` in `k[x_1..x_{n+d-1}]`.
pub fn sq_ideal(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    if !ideal.ring().is_single() {
        return Err(Error::NotSingleRing);
    }
    let ring = RingSpec::single(ideal.ring().n() + ideal.max_degree().max(1) - 1);
    let gens = ideal.gens().iter().map(sq_monomial).collect::<Result<Vec<_>>>()?;
    MonomialIdeal::new(ring, gens)
}

/// A ring map out of `k[x_{i,j}]` that sends variables to variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecializationMap {
    /// `x_{i,j} ↦ x_i`.
    Theta,
    /// `x_{i,j} ↦ x_{i + a_{j-1}}`.
    ThetaA { a: GammaSequence },
}

impl SpecializationMap {
    pub fn theta_a(a: GammaSequence) -> Self {
        SpecializationMap::ThetaA { a }
    }

    pub fn target_ring(&self, source: RingSpec) -> Result<RingSpec> {
        match (self, source) {
            (SpecializationMap::Theta, RingSpec::Double { n, .. }) => Ok(RingSpec::single(n)),
            (SpecializationMap::ThetaA { a }, RingSpec::Double { n, d }) => a.target_ring(n, d),
            _ => Err(Error::InvalidArgument("specialization maps start from a doubly indexed ring".into())),
        }
    }

    pub fn apply_var(&self, v: &Var) -> Var {
        match (self, *v) {
            (SpecializationMap::Theta, Var::Double(i, _)) => Var::Single(i),
            (SpecializationMap::ThetaA { a }, Var::Double(i, j)) => {
                let shift =
                    a.0.get(j as usize - 1)
                        .copied()
                        .unwrap_or_else(|| panic!("gamma sequence too short for column {j}"));
                Var::Single(i + shift)
            }
            (_, Var::Single(_)) => panic!("specialization applied to a singly indexed variable"),
        }
    }
}

impl fmt::Display for SpecializationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecializationMap::Theta => write!(f, "theta"),
            SpecializationMap::ThetaA { a } => write!(f, "theta_a({a})"),
        }
    }
}

pub fn specialize_monomial(m: &Monomial, phi: &SpecializationMap) -> Result<Monomial> {
    if !m.is_double() {
        return Err(Error::InvalidArgument(format!("{m} is not doubly indexed")));
    }
    if let SpecializationMap::ThetaA { a } = phi {
        if let Some(j) = m
            .support()
            .map(|v| match v {
                Var::Double(_, j) => j,
                Var::Single(_) => 0,
            })
            .max()
        {
            a.get(j as usize - 1)?;
        }
    }
    Ok(m.map_vars(|v| phi.apply_var(v)))
}

/// Image of a monomial ideal under a specialization map.
pub fn specialize_ideal(ideal: &MonomialIdeal, phi: &SpecializationMap) -> Result<MonomialIdeal> {
    let ring = phi.target_ring(ideal.ring())?;
    let gens = ideal.gens().iter().map(|g| specialize_monomial(g, phi)).collect::<Result<Vec<_>>>()?;
    MonomialIdeal::new(ring, gens)
}
