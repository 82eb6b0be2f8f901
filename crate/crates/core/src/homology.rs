//! Certification of free resolutions by multigraded strands, and an
//! independent Betti-number oracle.
//!
//! The oracle tensors the Lyubeznik resolution with `k`: in multidegree `b`
//! only cells with `lcm = b` survive, and only faces with the same lcm keep a
//! unit coefficient. The full Taylor complex is kept for small ideals as a
//! cross-check.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::complex::{BasisElement, FreeComplex, Term};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::lattice::join_closure;
use crate::linalg::{Field, SparseMatrix};
use crate::monomial::{lcm_of, Monomial};

/// The finite-dimensional complex of `k`-vector spaces in one multidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    /// `dims[q]` = number of level-`q` basis elements whose degree divides `b`.
    pub dims: Vec<usize>,
    /// `maps[q]`: level `q + 1` → level `q`, in strand-local indices.
    pub maps: Vec<SparseMatrix>,
}

impl Strand {
    /// `dim H_q` for every level (`dim ker - rank`, clamped at zero when the
    /// maps do not compose to zero).
    pub fn homology(&self, field: Field) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(|m| m.rank(field)).collect();
        (0..self.dims.len())
            .map(|q| {
                let out = if q == 0 { 0 } else { ranks[q - 1] };
                let inc = ranks.get(q).copied().unwrap_or(0);
                self.dims[q].saturating_sub(out + inc)
            })
            .collect()
    }
}

/// Restriction of `complex` to multidegree `b`. Each basis element `e` with
/// `deg(e) | b` contributes the single vector `(b / deg e) · e`.
pub fn strand(complex: &FreeComplex, b: &Monomial) -> Strand {
    let local: Vec<Vec<Option<usize>>> = complex
        .levels
        .iter()
        .map(|level| {
            let mut next = 0;
            level
                .iter()
                .map(|e| {
                    e.degree.divides(b).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = local.iter().map(|l| l.iter().flatten().count()).collect();
    let maps = complex
        .diffs
        .iter()
        .enumerate()
        .map(|(q, cols)| {
            let cols = cols
                .iter()
                .zip(&local[q + 1])
                .filter_map(|(ts, idx)| idx.map(|_| ts))
                .map(|ts| ts.iter().filter_map(|t| local[q][t.row].map(|r| (r, t.coeff))).collect())
                .collect();
            SparseMatrix::new(dims[q], cols)
        })
        .collect();
    Strand { dims, maps }
}

/// A strand whose homology differs from that of a resolution of `R/J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandFailure {
    pub degree: Monomial,
    pub homology: Vec<usize>,
}

/// Outcome of [`certify_resolution`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificationReport {
    pub ring_matches: bool,
    pub square_zero: bool,
    pub homogeneous: bool,
    pub unit_entries: usize,
    pub degrees_checked: usize,
    pub failures: Vec<StrandFailure>,
}

impl CertificationReport {
    /// `∂∘∂ = 0`, homogeneous, and exact with `H_0 = R/J` in every checked degree.
    pub fn is_resolution(&self) -> bool {
        self.ring_matches && self.square_zero && self.homogeneous && self.failures.is_empty()
    }

    pub fn is_minimal_resolution(&self) -> bool {
        self.is_resolution() && self.unit_entries == 0
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "ring {}, d^2 = 0 {}, homogeneous {}, unit entries {}, strands checked {}, failing strands {}",
            ok(self.ring_matches),
            ok(self.square_zero),
            ok(self.homogeneous),
            self.unit_entries,
            self.degrees_checked,
            self.failures.len()
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; first failure at {} with homology {:?}", f.degree, f.homology));
        }
        s
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

/// Checks that `complex` is a free resolution of `R/J`: a homogeneous complex
/// whose strand at every join of basis degrees and generators of `J` has
/// `H_q = 0` for `q ≥ 1` and `dim H_0 = [b ∉ J]`. Homology of a multigraded
/// complex of this kind is constant between lattice degrees, so these
/// strands suffice. Minimality is reported separately.
pub fn certify_resolution(complex: &FreeComplex, ideal: &MonomialIdeal, field: Field) -> CertificationReport {
    let mut report = CertificationReport {
        ring_matches: complex.ring == ideal.ring(),
        square_zero: complex.is_complex(),
        homogeneous: complex.inhomogeneous_entries().is_empty(),
        unit_entries: complex.unit_entries().len(),
        ..Default::default()
    };
    if !report.homogeneous {
        return report;
    }
    let atoms: Vec<&Monomial> = ideal.gens().iter().chain(complex.levels.iter().flatten().map(|e| &e.degree)).collect();
    let mut degrees = join_closure(atoms);
    if !degrees.iter().any(Monomial::is_one) {
        degrees.insert(0, Monomial::one());
    }
    report.degrees_checked = degrees.len();
    let mut failures: Vec<(usize, StrandFailure)> = degrees
        .par_iter()
        .enumerate()
        .filter_map(|(k, b)| {
            let h = strand(complex, b).homology(field);
            let h0 = usize::from(!ideal.contains(b));
            let good = h[0] == h0 && h[1..].iter().all(|&x| x == 0);
            (!good).then(|| (k, StrandFailure { degree: b.clone(), homology: h }))
        })
        .collect();
    failures.sort_by_key(|f| f.0);
    report.failures = failures.into_iter().map(|f| f.1).collect();
    report
}

/// Betti numbers `β_{i,b}` of an ideal, `i` = homological degree
/// (`β_{0,b}` counts minimal generators).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub multi: BTreeMap<(usize, Monomial), usize>,
}

impl BettiTable {
    /// Ranks of a minimal resolution of `R/J`: level `q + 1` carries `β_q`.
    pub fn from_complex(complex: &FreeComplex) -> Self {
        let mut multi = BTreeMap::new();
        for (q, level) in complex.levels.iter().enumerate().skip(1) {
            for e in level {
                *multi.entry((q - 1, e.degree.clone())).or_insert(0) += 1;
            }
        }
        BettiTable { multi }
    }

    /// `β_{i,j}` with `j` the total degree.
    pub fn graded(&self) -> BTreeMap<(usize, u32), usize> {
        let mut out = BTreeMap::new();
        for ((i, b), v) in &self.multi {
            *out.entry((*i, b.degree())).or_insert(0) += v;
        }
        out
    }

    /// `β_i = Σ_b β_{i,b}`, indexed by `i`.
    pub fn totals(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for ((i, _), v) in &self.multi {
            if out.len() <= *i {
                out.resize(i + 1, 0);
            }
            out[*i] += v;
        }
        out
    }

    /// Text table with rows `j - i` and columns `i`, in the usual layout.
    pub fn render(&self) -> String {
        let g = self.graded();
        let len = self.totals().len();
        if len == 0 {
            return "zero ideal\n".into();
        }
        let shifts: Vec<u32> = g.keys().map(|(i, j)| j - *i as u32).collect();
        let (lo, hi) = (*shifts.iter().min().unwrap(), *shifts.iter().max().unwrap());
        let mut s = format!("{:>6}", "");
        for i in 0..len {
            s.push_str(&format!("{i:>6}"));
        }
        s.push('\n');
        for r in lo..=hi {
            s.push_str(&format!("{:>5}:", r));
            for i in 0..len {
                match g.get(&(i, r + i as u32)) {
                    Some(v) => s.push_str(&format!("{v:>6}")),
                    None => s.push_str(&format!("{:>6}", ".")),
                }
            }
            s.push('\n');
        }
        s.push_str(&format!("{:>5}:", "total"));
        for v in self.totals() {
            s.push_str(&format!("{v:>6}"));
        }
        s.push('\n');
        s
    }
}

/// Taylor resolution of `R/J`; level `q` is spanned by `q`-subsets of `G(J)`.
pub fn taylor_complex(ideal: &MonomialIdeal, max_gens: usize) -> Result<FreeComplex> {
    let t = ideal.len();
    if t > max_gens || t > 24 {
        return Err(Error::SizeLimit(format!(
            "Taylor complex of {t} generators exceeds the bound {}",
            max_gens.min(24)
        )));
    }
    let gens = ideal.gens();
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); t + 1];
    for mask in 0u32..1 << t {
        by_size[mask.count_ones() as usize].push(mask);
    }
    let lcm_mask = |mask: u32| lcm_of((0..t).filter(|k| mask >> k & 1 == 1).map(|k| &gens[k]));
    let mut complex = FreeComplex::new(ideal.ring());
    let mut index: HashMap<u32, usize> = HashMap::from([(0, 0)]);
    for masks in &by_size[1..] {
        let basis: Vec<BasisElement> = masks
            .iter()
            .map(|&mask| BasisElement { label: mask_label(mask as u64, t), degree: lcm_mask(mask) })
            .collect();
        let diff = masks
            .iter()
            .zip(&basis)
            .map(|(&mask, e)| {
                (0..t)
                    .filter(|k| mask >> k & 1 == 1)
                    .enumerate()
                    .map(|(pos, k)| {
                        let face = mask & !(1 << k);
                        Term {
                            row: index[&face],
                            coeff: if pos % 2 == 0 { 1 } else { -1 },
                            monomial: e.degree.div_exact(&lcm_mask(face)).expect("lcm of a face divides"),
                        }
                    })
                    .collect()
            })
            .collect();
        index = masks.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        complex.push_level(basis, diff);
    }
    Ok(complex)
}

fn mask_label(mask: u64, t: usize) -> String {
    let parts: Vec<String> = (0..t).filter(|k| mask >> k & 1 == 1).map(|k| k.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Cells of the Lyubeznik complex for the generator order of `G(J)`: sets
/// `σ` such that no `m_q` with `q` below the smallest index of a suffix of
/// `σ` divides the lcm of that suffix. Returned with their lcm.
pub fn lyubeznik_cells(ideal: &MonomialIdeal, max_cells: usize) -> Result<Vec<(u64, Monomial)>> {
    let gens = ideal.gens();
    if gens.len() > 64 {
        return Err(Error::SizeLimit(format!("{} generators exceed 64", gens.len())));
    }
    fn grow(
        gens: &[Monomial],
        mask: u64,
        min: usize,
        lcm: Monomial,
        out: &mut Vec<(u64, Monomial)>,
        max_cells: usize,
    ) -> Result<()> {
        for i in 0..min {
            let l = lcm.lcm(&gens[i]);
            if gens[..i].iter().all(|g| !g.divides(&l)) {
                grow(gens, mask | 1 << i, i, l, out, max_cells)?;
            }
        }
        if out.len() >= max_cells {
            return Err(Error::SizeLimit(format!("more than {max_cells} Lyubeznik cells")));
        }
        out.push((mask, lcm));
        Ok(())
    }
    let mut out = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        grow(gens, 1 << j, j, g.clone(), &mut out, max_cells)?;
    }
    Ok(out)
}

/// `β_{i,b}` from the cells of a simplicial resolution: in degree `b`, the
/// complex of cells with `lcm = b` and Taylor signs among them.
fn betti_from_cells(cells: Vec<(u64, Monomial)>, field: Field) -> BettiTable {
    let mut groups: HashMap<Monomial, Vec<u64>> = HashMap::new();
    for (mask, lcm) in cells {
        groups.entry(lcm).or_default().push(mask);
    }
    let mut groups: Vec<(Monomial, Vec<u64>)> = groups.into_iter().collect();
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    let entries: Vec<Vec<((usize, Monomial), usize)>> = groups
        .par_iter()
        .map(|(b, masks)| {
            let top = masks.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
            let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
            for &m in masks {
                by_size[m.count_ones() as usize].push(m);
            }
            let index: HashMap<u64, usize> =
                by_size.iter().flat_map(|l| l.iter().enumerate().map(|(k, &m)| (m, k))).collect();
            // Level s - 1 of the strand holds the cells of size s.
            let dims: Vec<usize> = by_size[1..].iter().map(Vec::len).collect();
            let maps: Vec<SparseMatrix> = (2..=top)
                .map(|s| {
                    let cols = by_size[s]
                        .iter()
                        .map(|&m| {
                            (0..64)
                                .filter(|k| m >> k & 1 == 1)
                                .enumerate()
                                .filter_map(|(pos, k)| {
                                    let face = m & !(1u64 << k);
                                    index
                                        .get(&face)
                                        .filter(|_| by_size[s - 1].get(index[&face]) == Some(&face))
                                        .map(|&r| (r, if pos % 2 == 0 { 1 } else { -1 }))
                                })
                                .collect()
                        })
                        .collect();
                    SparseMatrix::new(by_size[s - 1].len(), cols)
                })
                .collect();
            Strand { dims, maps }
                .homology(field)
                .into_iter()
                .enumerate()
                .filter(|(_, h)| *h > 0)
                .map(|(i, h)| ((i, b.clone()), h))
                .collect()
        })
        .collect();
    BettiTable { multi: entries.into_iter().flatten().collect() }
}

/// Default bound on the number of Lyubeznik cells.
pub const ORACLE_MAX_CELLS: usize = 20_000_000;

/// Multigraded Betti numbers of `J` computed from the Lyubeznik resolution.
pub fn betti_oracle(ideal: &MonomialIdeal, field: Field) -> Result<BettiTable> {
    Ok(betti_from_cells(lyubeznik_cells(ideal, ORACLE_MAX_CELLS)?, field))
}

/// The same numbers from the full Taylor complex; only for small ideals.
pub fn betti_oracle_taylor(ideal: &MonomialIdeal, field: Field, max_gens: usize) -> Result<BettiTable> {
    let t = ideal.len();
    if t > max_gens || t > 24 {
        return Err(Error::SizeLimit(format!("Taylor oracle on {t} generators")));
    }
    let gens = ideal.gens();
    let cells =
        (1u64..1 << t).map(|mask| (mask, lcm_of((0..t).filter(|k| mask >> k & 1 == 1).map(|k| &gens[k])))).collect();
    Ok(betti_from_cells(cells, field))
}

/// Whether two ideals have the same `Z`-graded Betti table.
pub fn betti_equal_ideals(a: &MonomialIdeal, b: &MonomialIdeal, field: Field) -> Result<bool> {
    Ok(betti_oracle(a, field)?.graded() == betti_oracle(b, field)?.graded())
}

/// Polarization certificate: `I` and `b-pol(I)` share their graded Betti table.
pub fn betti_equal(ideal: &crate::borel::BorelIdeal, field: Field) -> Result<bool> {
    betti_equal_ideals(ideal.ideal(), &crate::polarize::bpol_ideal(ideal), field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::RingSpec;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn ideal(gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::from_gens(gens.iter().map(|s| m(s)).collect()).unwrap()
    }

    #[test]
    fn strands_of_a_taylor_complex() {
        let j = ideal(&["x1^2", "x1*x2", "x2^2"]);
        let t = taylor_complex(&j, 10).unwrap();
        let s0 = strand(&t, &Monomial::one());
        assert_eq!(s0.dims, vec![1, 0, 0, 0]);
        assert_eq!(s0.homology(Field::default()), vec![1, 0, 0, 0]);
        let s1 = strand(&t, &m("x1^2"));
        assert_eq!(s1.homology(Field::default())[0], 0);
        let s2 = strand(&t, &m("x2"));
        assert_eq!(s2.homology(Field::default()), vec![1, 0, 0, 0]);
    }

    #[test]
    fn taylor_certifies_but_is_not_minimal() {
        let j = ideal(&["x1^2", "x1*x2", "x2^2"]);
        let t = taylor_complex(&j, 10).unwrap();
        let r = certify_resolution(&t, &j, Field::default());
        assert!(r.is_resolution(), "{}", r.summary());
        assert!(!r.is_minimal_resolution());
        assert_eq!(t.ranks(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn certification_rejects_corruption() {
        let j = ideal(&["x1^2", "x1*x2", "x2^2"]);
        let mut t = taylor_complex(&j, 10).unwrap();
        t.flip_sign(2, 0, 0);
        let r = certify_resolution(&t, &j, Field::default());
        assert!(!r.square_zero);
        assert!(!r.is_resolution());

        let other = ideal(&["x1^2", "x2^2"]);
        let t = taylor_complex(&j, 10).unwrap();
        let r = certify_resolution(&t, &other.with_ring(RingSpec::single(2)).unwrap(), Field::default());
        assert!(!r.is_resolution());
    }

    #[test]
    fn oracle_examples() {
        let j = ideal(&["x1^3", "x1^2*x2", "x1*x2^2", "x2^3"]);
        assert_eq!(betti_oracle(&j, Field::default()).unwrap().totals(), vec![4, 3]);
        let p = ideal(&["x1*x2^2"]);
        assert_eq!(betti_oracle(&p, Field::default()).unwrap().totals(), vec![1]);
        let e = ideal(&["x1^2", "x1*x2", "x1*x3", "x1*x4", "x2^2", "x2*x3", "x2*x4"]);
        assert_eq!(betti_oracle(&e, Field::default()).unwrap().totals(), vec![7, 12, 8, 2]);
    }

    #[test]
    fn lyubeznik_agrees_with_taylor() {
        for gens in [
            vec!["x1^2", "x1*x2", "x1*x3", "x2^3", "x2*x3^2"],
            vec!["x1*x2", "x2*x3", "x3*x4", "x1*x4"],
            vec!["x1^2*x2", "x1*x2^2", "x1*x3", "x2*x3", "x3^2", "x1^3"],
        ] {
            let j = ideal(&gens);
            for field in [Field::default(), Field::Rational, Field::Prime(2)] {
                assert_eq!(
                    betti_oracle(&j, field).unwrap(),
                    betti_oracle_taylor(&j, field, 16).unwrap(),
                    "{j} over {field}"
                );
            }
        }
    }

    #[test]
    fn lyubeznik_cells_form_a_complex_that_resolves() {
        let j = ideal(&["x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"]);
        let cells = lyubeznik_cells(&j, 1000).unwrap();
        assert!(cells.len() < (1 << j.len()) - 1);
        let masks: std::collections::HashSet<u64> = cells.iter().map(|c| c.0).collect();
        for &mask in &masks {
            for k in 0..64 {
                let face = mask & !(1u64 << k);
                if mask >> k & 1 == 1 && face != 0 {
                    assert!(masks.contains(&face));
                }
            }
        }
        assert!(lyubeznik_cells(&j, 3).is_err());
    }

    #[test]
    fn betti_render() {
        let j = ideal(&["x1^2", "x1*x2", "x2^2"]);
        let b = betti_oracle(&j, Field::default()).unwrap();
        let text = b.render();
        assert!(text.contains("total"));
        assert_eq!(b.graded().get(&(1, 3)), Some(&2));
    }
}
