//! Admissible pairs and the explicit minimal free resolution of
//! `S̃ / b-pol(I)` for a Borel fixed ideal `I`.
//!
//! Level `0` is `S̃`, level `q + 1` is spanned by the pairs `(F, m̃)` with
//! `#F = q`, and
//!
//! ```text
//! ∂ e(F, m̃) = Σ_r (-1)^r x_{i_r,j_r} e(F_r, m̃)
//!           - Σ_{r ∈ B(F, m̃)} (-1)^r (x_{i_r,j_r} m̃ / m̃_<i_r>) e(F_r, m̃_<i_r>),
//! ∂ e(∅, m̃) = m̃.
//! ```

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::borel::BorelIdeal;
use crate::complex::{BasisElement, FreeComplex, Term};
use crate::error::{Error, Result};
use crate::homology::BettiTable;
use crate::ideal::MonomialIdeal;
use crate::monomial::{Monomial, Var};
use crate::polarize::{bpol_ideal, bpol_monomial};

/// Differential columns per level.
type Columns = Vec<Vec<Vec<Term>>>;

/// A generator `m̃` together with positions `F = {(i_1,j_1) < ... < (i_q,j_q)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdmissiblePair {
    /// Index of `m` in the descending lex generator list.
    pub gen: usize,
    pub m: Monomial,
    pub mt: Monomial,
    pub f: Vec<(u32, u32)>,
}

/// The column forced for row `i`: `j = 1 + Σ_{l ≤ i} a_l`.
pub fn forced_column(m: &Monomial, i: u32) -> u32 {
    1 + (1..=i).map(|l| m.exp(l)).sum::<u32>()
}

/// Whether `(F, b-pol(m))` is admissible: `i_1 < ... < i_q < ν(m)` with
/// every `j_r` forced by `m`.
pub fn is_admissible_positions(f: &[(u32, u32)], m: &Monomial) -> bool {
    let Ok(nu) = m.nu() else { return false };
    f.windows(2).all(|w| w[0].0 < w[1].0) && f.iter().all(|&(i, j)| i >= 1 && i < nu && j == forced_column(m, i))
}

impl AdmissiblePair {
    pub fn q(&self) -> usize {
        self.f.len()
    }

    /// The rows `i_r` as a bitmask (bit `i`).
    pub fn i_mask(&self) -> u64 {
        self.f.iter().fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// `x(F, m̃) = m̃ · ∏ x_{i_r, j_r}`, the multidegree of `e(F, m̃)`.
    pub fn x_of(&self) -> Monomial {
        self.mt.mul(&Monomial::from_positions(self.f.iter().copied()))
    }

    /// `F_r`, with `r` 1-based.
    pub fn without(&self, r: usize) -> Vec<(u32, u32)> {
        let mut f = self.f.clone();
        f.remove(r - 1);
        f
    }
}

impl fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.f.iter().map(|(i, j)| format!("({i},{j})")).collect();
        write!(f, "({{{}}}, {})", parts.join(","), self.mt)
    }
}

/// Columns `j_r` occurring in `F`, each with all positions of `x(F, m̃)` in it.
pub fn rmv_blocks(pair: &AdmissiblePair) -> Vec<Vec<(u32, u32)>> {
    let x = pair.x_of();
    let mut cols: Vec<u32> = pair.f.iter().map(|p| p.1).collect();
    cols.sort_unstable();
    cols.dedup();
    cols.into_iter()
        .map(|j| {
            x.support()
                .filter_map(|v| match v {
                    Var::Double(i, jj) if jj == j => Some((i, j)),
                    _ => None,
                })
                .collect()
        })
        .collect()
}

/// `rmv(F, m̃)`: every square of the diagram in a column carrying a white square.
pub fn rmv(pair: &AdmissiblePair) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = rmv_blocks(pair).into_iter().flatten().collect();
    out.sort_unstable();
    out
}

/// Rows `1..=n`, columns `1..=d`: `B` where `x_{i,j} | m̃`, `W` on `F`, `.` elsewhere.
pub fn stair_diagram(pair: &AdmissiblePair, n: u32, d: u32) -> String {
    let mut s = String::new();
    for i in 1..=n {
        for j in 1..=d {
            let c = if pair.mt.exponent(&Var::Double(i, j)) > 0 {
                'B'
            } else if pair.f.contains(&(i, j)) {
                'W'
            } else {
                '.'
            };
            s.push(c);
        }
        s.push('\n');
    }
    s
}

/// `rank P̃_{q+1} = Σ_m C(ν(m) - 1, q)`.
pub fn rank_formula(ideal: &BorelIdeal) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for m in ideal.gens() {
        let k = m.nu().expect("generators are not units") as usize - 1;
        let mut binom = 1usize;
        for q in 0..=k {
            if out.len() <= q {
                out.resize(q + 1, 0);
            }
            out[q] += binom;
            binom = binom * (k - q) / (q + 1);
        }
    }
    out
}

/// The resolution together with its index of admissible pairs.
#[derive(Clone, Debug)]
pub struct Resolution {
    ideal: BorelIdeal,
    bpol: MonomialIdeal,
    /// `pairs[q]` = `A_q`, ordered by generator then `F`.
    pairs: Vec<Vec<AdmissiblePair>>,
    index: HashMap<(usize, u64), usize>,
    /// `brackets[g][i]` = index of `(m_g)_<i>` for `1 <= i <= n`.
    brackets: Vec<Vec<usize>>,
    /// `mts[g]` = `b-pol(m_g)`.
    mts: Vec<Monomial>,
    complex: FreeComplex,
}

/// All `A_q`, ordered by generator (descending lex) then `F` (lex).
pub fn enumerate_admissible(ideal: &BorelIdeal) -> Vec<Vec<AdmissiblePair>> {
    let d = ideal.maxdeg();
    let mut pairs: Vec<Vec<AdmissiblePair>> = Vec::new();
    for (g, m) in ideal.gens().iter().enumerate() {
        let mt = bpol_monomial(m, d).expect("degree bounded by maxdeg");
        let k = m.nu().expect("generators are not units") - 1;
        let mut subsets: Vec<Vec<u32>> =
            (0u64..1 << k).map(|mask| (1..=k).filter(|i| mask >> (i - 1) & 1 == 1).collect()).collect();
        subsets.sort();
        for is in subsets {
            let q = is.len();
            if pairs.len() <= q {
                pairs.resize(q + 1, Vec::new());
            }
            pairs[q].push(AdmissiblePair {
                gen: g,
                m: m.clone(),
                mt: mt.clone(),
                f: is.iter().map(|&i| (i, forced_column(m, i))).collect(),
            });
        }
    }
    pairs
}

impl Resolution {
    pub fn build(ideal: &BorelIdeal) -> Result<Self> {
        let n = ideal.n();
        if n >= 64 {
            return Err(Error::SizeLimit("at most 63 variables".into()));
        }
        let brackets = ideal
            .gens()
            .iter()
            .map(|m| {
                (0..=n)
                    .map(|i| {
                        if i == 0 {
                            return Ok(usize::MAX);
                        }
                        let b = ideal.m_bracket(m, i)?;
                        ideal.index_of(&b).ok_or_else(|| Error::Internal(format!("bracket {b} is not a generator")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let pairs = enumerate_admissible(ideal);
        let index =
            pairs.iter().flat_map(|level| level.iter().enumerate().map(|(k, p)| ((p.gen, p.i_mask()), k))).collect();
        let mut res = Resolution {
            ideal: ideal.clone(),
            bpol: bpol_ideal(ideal),
            pairs,
            index,
            brackets,
            mts: ideal.gens().iter().map(|m| bpol_monomial(m, ideal.maxdeg())).collect::<Result<Vec<_>>>()?,
            complex: FreeComplex::new(crate::monomial::RingSpec::double(n, ideal.maxdeg())),
        };
        let (delta, delta_prime) = res.split_terms()?;
        let mut complex = FreeComplex::new(res.bpol.ring());
        for (q, level) in res.pairs.iter().enumerate() {
            let basis = level.iter().map(|p| BasisElement { label: p.to_string(), degree: p.x_of() }).collect();
            let diff = delta[q]
                .iter()
                .zip(&delta_prime[q])
                .map(|(a, b)| {
                    a.iter().cloned().chain(b.iter().map(|t| Term { coeff: -t.coeff, ..t.clone() })).collect()
                })
                .collect();
            complex.push_level(basis, diff);
        }
        res.complex = complex;
        Ok(res)
    }

    pub fn ideal(&self) -> &BorelIdeal {
        &self.ideal
    }

    pub fn bpol(&self) -> &MonomialIdeal {
        &self.bpol
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn into_complex(self) -> FreeComplex {
        self.complex
    }

    /// `A_q` for every `q`.
    pub fn pairs(&self) -> &[Vec<AdmissiblePair>] {
        &self.pairs
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }

    /// Position of `(F, m̃_gen)` within `A_{#F}`, if admissible.
    pub fn find(&self, gen: usize, f: &[(u32, u32)]) -> Option<usize> {
        let m = self.ideal.gens().get(gen)?;
        if !is_admissible_positions(f, m) {
            return None;
        }
        let mask = f.iter().fold(0u64, |acc, (i, _)| acc | 1 << i);
        self.index.get(&(gen, mask)).copied()
    }

    /// Looks up a pair given by its positions and `m̃`.
    pub fn find_pair(&self, f: &[(u32, u32)], mt: &Monomial) -> Option<&AdmissiblePair> {
        let gen = self.mts.iter().position(|g| g == mt)?;
        self.find(gen, f).map(|k| &self.pairs[f.len()][k])
    }

    /// Index of `(m_gen)_<i>` in `G(I)`.
    pub fn bracket(&self, gen: usize, i: u32) -> usize {
        self.brackets[gen][i as usize]
    }

    /// `B(F, m̃) = { r | (F_r, m̃_<i_r>) admissible }`, 1-based.
    pub fn b_set(&self, pair: &AdmissiblePair) -> Vec<usize> {
        (1..=pair.q())
            .filter(|&r| {
                let target = self.bracket(pair.gen, pair.f[r - 1].0);
                is_admissible_positions(&pair.without(r), &self.ideal.gens()[target])
            })
            .collect()
    }

    /// Column lists of `δ` and `δ'` per level, with `∂ = δ - δ'`.
    fn split_terms(&self) -> Result<(Columns, Columns)> {
        let mut delta = Vec::with_capacity(self.pairs.len());
        let mut delta_prime = Vec::with_capacity(self.pairs.len());
        for level in &self.pairs {
            let mut d = Vec::with_capacity(level.len());
            let mut dp = Vec::with_capacity(level.len());
            for p in level {
                if p.f.is_empty() {
                    d.push(Vec::new());
                    dp.push(vec![Term { row: 0, coeff: -1, monomial: p.mt.clone() }]);
                    continue;
                }
                let b = self.b_set(p);
                let mut dcol = Vec::with_capacity(p.q());
                let mut dpcol = Vec::with_capacity(b.len());
                for r in 1..=p.q() {
                    let sign = if r % 2 == 0 { 1 } else { -1 };
                    let (i, j) = p.f[r - 1];
                    let x = Monomial::from_positions([(i, j)]);
                    let fr = p.without(r);
                    let row = self
                        .find(p.gen, &fr)
                        .ok_or_else(|| Error::Internal(format!("face {r} of {p} is not admissible")))?;
                    dcol.push(Term { row, coeff: sign, monomial: x.clone() });
                    if b.contains(&r) {
                        let g2 = self.bracket(p.gen, i);
                        let row = self.find(g2, &fr).expect("r lies in B");
                        let mt2 = &self.mts[g2];
                        let mono = x
                            .mul(&p.mt)
                            .div_exact(mt2)
                            .map_err(|_| Error::Internal(format!("{mt2} does not divide x_({i},{j}) * {}", p.mt)))?;
                        dpcol.push(Term { row, coeff: sign, monomial: mono });
                    }
                }
                d.push(dcol);
                dp.push(dpcol);
            }
            delta.push(d);
            delta_prime.push(dp);
        }
        Ok((delta, delta_prime))
    }

    /// `(δ, δ')` as complexes on the same bases, `∂ = δ - δ'`.
    pub fn split_differential(&self) -> Result<(FreeComplex, FreeComplex)> {
        let (delta, delta_prime) = self.split_terms()?;
        let mut a = FreeComplex::new(self.complex.ring);
        let mut b = FreeComplex::new(self.complex.ring);
        for (q, level) in self.complex.levels.iter().enumerate().skip(1) {
            a.push_level(level.clone(), delta[q - 1].clone());
            b.push_level(level.clone(), delta_prime[q - 1].clone());
        }
        Ok((a, b))
    }

    /// Multigraded Betti numbers read off the ranks of this minimal resolution.
    pub fn betti_table(&self) -> BettiTable {
        BettiTable::from_complex(&self.complex)
    }

    /// Maximal pairs: those appearing in no differential.
    pub fn maximal_pairs(&self) -> Vec<&AdmissiblePair> {
        let mut hit: Vec<Vec<bool>> = self.pairs.iter().map(|l| vec![false; l.len()]).collect();
        for (q, cols) in self.complex.diffs.iter().enumerate().skip(1) {
            for t in cols.iter().flatten() {
                hit[q - 1][t.row] = true;
            }
        }
        self.pairs.iter().zip(&hit).flat_map(|(l, h)| l.iter().zip(h).filter(|(_, h)| !**h).map(|(p, _)| p)).collect()
    }
}

/// `P̃` for `b-pol(I)`.
pub fn build_p(ideal: &BorelIdeal) -> Result<FreeComplex> {
    Ok(Resolution::build(ideal)?.into_complex())
}
