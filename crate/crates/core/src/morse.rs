//! The acyclic matching on the Taylor simplex of `Ĩ = b-pol(I)`, its
//! critical cells and gradient paths, and the induced Morse complex.
//!
//! Subsets of `G(Ĩ)` are bitmasks: bit `k` is the `k`-th generator in the
//! order `⊏`, which lists `G(Ĩ)` as `b-pol` of the descending lex list of
//! `G(I)`. Squarefree multidegrees are bitmasks over the variables of `S̃`.
//!
//! Membership of a subset in an edge of `A` depends on that subset alone, so
//! everything except the global matching and acyclicity checks also works
//! without enumerating the simplex ([`Morse::local`]).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::complex::{normalize_terms, BasisElement, FreeComplex, Term};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, Var};
use crate::resolution::Resolution;

pub const DEFAULT_MAX_GENS: usize = 16;

/// Hard ceiling for exhaustive enumeration of subsets.
const MAX_EXHAUSTIVE: usize = 26;

/// Searches producing more paths than this from one cell are aborted.
const PATH_LIMIT: usize = 10_000;

/// A nonempty subset of `G(Ĩ)`.
pub type Cell = u64;

/// A directed walk in the graph with the matching edges reversed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientPath {
    pub steps: Vec<Cell>,
    /// `m(𝒫)`.
    pub sign: i64,
}

#[derive(Clone, Debug)]
struct Tables {
    /// `up[σ] = σ ∪ {n_σ}` when `σ ∪ {n_σ} → σ` is in `A`, else 0.
    up: Vec<Cell>,
    /// `down[τ] = σ` when `τ → σ` is in `A`, else 0.
    down: Vec<Cell>,
}

/// The matching `A` and everything derived from it.
#[derive(Clone, Debug)]
pub struct Morse<'a> {
    res: &'a Resolution,
    t: usize,
    gens: Vec<Monomial>,
    vars: Vec<Var>,
    gen_bits: Vec<u128>,
    /// `(m_g)_<i>` as generator indices, `i = 1..ν(m_g) - 1`.
    brackets: Vec<Vec<usize>>,
    tables: Option<Tables>,
    /// Subsets lying in more than one edge of `A` (exhaustive mode only).
    pub matching_violations: Vec<Cell>,
    /// `cells[s]`: critical subsets of size `s + 1`, in the order of the
    /// admissible pairs they correspond to.
    cells: Vec<Vec<Cell>>,
    cell_pos: HashMap<Cell, (usize, usize)>,
}

fn bits(mut mask: Cell) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            k
        })
    })
}

fn top(sigma: Cell) -> usize {
    63 - sigma.leading_zeros() as usize
}

/// `[σ : σ \ {k}] = (-1)^r`, `r` the 1-based position of `k` in `⊏`-sorted `σ`.
pub fn facet_sign(sigma: Cell, k: usize) -> i64 {
    let r = (sigma & ((1u64 << k) - 1)).count_ones() + 1;
    if r.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl<'a> Morse<'a> {
    /// Enumerates the whole simplex; refuses more than `max_gens` generators.
    pub fn new(res: &'a Resolution, max_gens: usize) -> Result<Self> {
        let bound = max_gens.min(MAX_EXHAUSTIVE);
        let t = res.pairs()[0].len();
        if t > bound {
            return Err(Error::SizeLimit(format!("{t} generators exceed the subset enumeration bound {bound}")));
        }
        let mut morse = Self::skeleton(res)?;
        morse.build_tables();
        morse.classify_exhaustive()?;
        Ok(morse)
    }

    /// Evaluates the matching on demand only; critical cells are taken from
    /// the admissible pairs and checked to be unmatched.
    pub fn local(res: &'a Resolution) -> Result<Self> {
        let mut morse = Self::skeleton(res)?;
        morse.classify_local()?;
        Ok(morse)
    }

    fn skeleton(res: &'a Resolution) -> Result<Self> {
        let gens: Vec<Monomial> = res.pairs()[0].iter().map(|p| p.mt.clone()).collect();
        let t = gens.len();
        if t > 64 {
            return Err(Error::SizeLimit(format!("{t} generators exceed 64")));
        }
        let vars = res.bpol().ring().variables();
        if vars.len() > 128 {
            return Err(Error::SizeLimit(format!("{} variables exceed 128", vars.len())));
        }
        let var_pos: HashMap<Var, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let gen_bits = gens.iter().map(|m| m.support().fold(0u128, |acc, v| acc | 1 << var_pos[&v])).collect();
        let brackets = res.pairs()[0]
            .iter()
            .map(|p| {
                let nu = p.m.nu().expect("generators are not units");
                (1..nu).map(|i| res.bracket(p.gen, i)).collect()
            })
            .collect();
        Ok(Morse {
            res,
            t,
            gens,
            vars,
            gen_bits,
            brackets,
            tables: None,
            matching_violations: Vec::new(),
            cells: Vec::new(),
            cell_pos: HashMap::new(),
        })
    }

    /// Whether the whole simplex was enumerated.
    pub fn is_exhaustive(&self) -> bool {
        self.tables.is_some()
    }

    pub fn num_gens(&self) -> usize {
        self.t
    }

    /// `G(Ĩ)` in the order `⊏`.
    pub fn sqsubset_order(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn lcm_bits(&self, sigma: Cell) -> u128 {
        bits(sigma).fold(0, |acc, k| acc | self.gen_bits[k])
    }

    pub fn bits_to_monomial(&self, b: u128) -> Monomial {
        Monomial::from_pairs((0..self.vars.len()).filter(|k| b >> k & 1 == 1).map(|k| (self.vars[k], 1)))
    }

    pub fn lcm_monomial(&self, sigma: Cell) -> Monomial {
        self.bits_to_monomial(self.lcm_bits(sigma))
    }

    /// Subset of the listed generators; unknown monomials are rejected.
    pub fn subset(&self, members: &[Monomial]) -> Result<Cell> {
        members.iter().try_fold(0, |acc, m| {
            self.gens
                .iter()
                .position(|g| g == m)
                .map(|k| acc | 1 << k)
                .ok_or_else(|| Error::NotGenerator(m.to_string()))
        })
    }

    pub fn members(&self, sigma: Cell) -> Vec<Monomial> {
        bits(sigma).map(|k| self.gens[k].clone()).collect()
    }

    /// Canonical id: the sorted generator indices.
    pub fn cell_id(sigma: Cell) -> String {
        let parts: Vec<String> = bits(sigma).map(|k| k.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    fn divides_lcm(&self, g: usize, l: u128) -> bool {
        self.gen_bits[g] & !l == 0
    }

    /// `N_σ` as a bitmask.
    pub fn n_set(&self, sigma: Cell) -> Cell {
        let l = self.lcm_bits(sigma);
        self.brackets[top(sigma)].iter().filter(|&&b| self.divides_lcm(b, l)).fold(0, |acc, &b| acc | 1 << b)
    }

    /// Position of every generator in `≺_σ`.
    pub fn prec_ranks(&self, sigma: Cell) -> Vec<usize> {
        let n = self.n_set(sigma);
        let in_n = n.count_ones() as usize;
        let (mut a, mut b) = (0, in_n);
        let ranks = (0..self.t)
            .map(|k| {
                let slot = if n >> k & 1 == 1 { &mut a } else { &mut b };
                *slot += 1;
                *slot - 1
            })
            .collect();
        assert!(a == in_n && b == self.t, "ranks of ≺_σ collide");
        ranks
    }

    /// `G(Ĩ)` listed in the order `≺_σ`.
    pub fn prec_sigma(&self, sigma: Cell) -> Vec<usize> {
        let ranks = self.prec_ranks(sigma);
        let mut order: Vec<usize> = (0..self.t).collect();
        order.sort_by_key(|&k| ranks[k]);
        order
    }

    /// `(u(σ), n_σ)`, or `None` when `u(σ) = -∞`.
    pub fn u_and_n(&self, sigma: Cell) -> Option<(usize, usize)> {
        let ranks = self.prec_ranks(sigma);
        let mut members: Vec<usize> = bits(sigma).collect();
        members.sort_by_key(|&k| ranks[k]);
        let k = members.len();
        for l in (1..k).rev() {
            let tail = &members[k - l - 1..];
            let lcm = tail.iter().fold(0u128, |acc, &g| acc | self.gen_bits[g]);
            let pivot = ranks[members[k - l - 1]];
            if (0..self.t).any(|g| ranks[g] < pivot && self.divides_lcm(g, lcm)) {
                let n = (0..self.t)
                    .filter(|&g| self.divides_lcm(g, lcm))
                    .min_by_key(|&g| ranks[g])
                    .expect("the tail divides its own lcm");
                return Some((l, n));
            }
        }
        None
    }

    fn compute_up(&self, sigma: Cell) -> Option<Cell> {
        let (_, n) = self.u_and_n(sigma)?;
        (sigma >> n & 1 == 0).then_some(sigma | 1 << n)
    }

    /// `σ ∪ {n_σ}` when `σ` is the lower end of an edge of `A`.
    pub fn up_of(&self, sigma: Cell) -> Option<Cell> {
        match &self.tables {
            Some(tb) => Some(tb.up[sigma as usize]).filter(|&c| c != 0),
            None => self.compute_up(sigma),
        }
    }

    /// The lower end of the edge of `A` whose upper end is `tau`.
    pub fn down_of(&self, tau: Cell) -> Option<Cell> {
        match &self.tables {
            Some(tb) => Some(tb.down[tau as usize]).filter(|&c| c != 0),
            None => bits(tau).map(|k| tau & !(1 << k)).find(|&f| f != 0 && self.compute_up(f) == Some(tau)),
        }
    }

    pub fn is_matched(&self, sigma: Cell) -> bool {
        self.up_of(sigma).is_some() || self.down_of(sigma).is_some()
    }

    fn build_tables(&mut self) {
        let size = 1usize << self.t;
        let edges: Vec<(Cell, Cell)> = (1..size as Cell)
            .into_par_iter()
            .filter_map(|sigma| self.compute_up(sigma).map(|upper| (upper, sigma)))
            .collect();
        let mut tables = Tables { up: vec![0; size], down: vec![0; size] };
        let mut used = vec![false; size];
        for (upper, lower) in edges {
            for v in [upper, lower] {
                if used[v as usize] {
                    self.matching_violations.push(v);
                }
                used[v as usize] = true;
            }
            tables.up[lower as usize] = upper;
            tables.down[upper as usize] = lower;
        }
        self.tables = Some(tables);
    }

    fn require_tables(&self) -> Result<&Tables> {
        self.tables.as_ref().ok_or_else(|| Error::SizeLimit("the simplex was not enumerated".into()))
    }

    /// `σ ∪ {n_σ} → σ` for every edge of `A`, ordered by `σ`.
    pub fn matching(&self) -> Result<Vec<(Cell, Cell)>> {
        let tb = self.require_tables()?;
        Ok((1..tb.up.len()).filter(|&s| tb.up[s] != 0).map(|s| (tb.up[s], s as Cell)).collect())
    }

    /// Out-neighbours in the graph with the edges of `A` reversed.
    fn successors(&self, sigma: Cell) -> Vec<Cell> {
        let mut out: Vec<Cell> = Vec::new();
        if sigma.count_ones() > 1 {
            let matched_down = self.down_of(sigma);
            out.extend(bits(sigma).map(|k| sigma & !(1 << k)).filter(|&f| Some(f) != matched_down));
        }
        out.extend(self.up_of(sigma));
        out
    }

    /// A directed cycle in the modified graph, if any.
    pub fn find_cycle(&self) -> Result<Option<Vec<Cell>>> {
        let size = self.require_tables()?.up.len();
        let mut color = vec![0u8; size];
        for start in 1..size as Cell {
            if color[start as usize] != 0 {
                continue;
            }
            let mut stack: Vec<(Cell, Vec<Cell>, usize)> = vec![(start, self.successors(start), 0)];
            color[start as usize] = 1;
            while let Some((v, succ, next)) = stack.last_mut() {
                if *next < succ.len() {
                    let w = succ[*next];
                    *next += 1;
                    match color[w as usize] {
                        0 => {
                            color[w as usize] = 1;
                            let s = self.successors(w);
                            stack.push((w, s, 0));
                        }
                        1 => {
                            let pos = stack.iter().position(|f| f.0 == w).expect("grey vertex on stack");
                            return Ok(Some(stack[pos..].iter().map(|f| f.0).collect()));
                        }
                        _ => {}
                    }
                } else {
                    color[*v as usize] = 2;
                    stack.pop();
                }
            }
        }
        Ok(None)
    }

    /// Decomposes `σ` as `{(m̃_σ)_<i_r>} ∪ {m̃_σ}`.
    fn shape(&self, sigma: Cell) -> Option<(usize, Vec<u32>)> {
        let g = top(sigma);
        let mut is: Vec<u32> = Vec::new();
        for k in bits(sigma & !(1 << g)) {
            let i = self.brackets[g].iter().position(|&b| b == k)?;
            is.push(i as u32 + 1);
        }
        is.sort_unstable();
        Some((g, is))
    }

    /// The subset `{m̃} ∪ {m̃_<i_r>}` attached to an admissible pair.
    pub fn cell_of_pair(&self, q: usize, k: usize) -> Cell {
        let p = &self.res.pairs()[q][k];
        p.f.iter().fold(1 << p.gen, |acc, &(i, _)| acc | 1 << self.res.bracket(p.gen, i))
    }

    fn place(&mut self, sigma: Cell, q: usize, idx: usize) -> Result<()> {
        if let Some(prev) = self.cell_pos.insert(sigma, (q, idx)) {
            return Err(Error::Internal(format!(
                "pairs {} and {} share the cell {}",
                self.res.pairs()[prev.0][prev.1],
                self.res.pairs()[q][idx],
                Self::cell_id(sigma)
            )));
        }
        Ok(())
    }

    fn classify_exhaustive(&mut self) -> Result<()> {
        let pairs = self.res.pairs();
        let mut cells: Vec<Vec<Cell>> = pairs.iter().map(|l| vec![0; l.len()]).collect();
        for sigma in 1..1 << self.t {
            if self.is_matched(sigma) {
                continue;
            }
            let (g, is) = self.shape(sigma).ok_or_else(|| {
                Error::Internal(format!("critical cell {} is not of bracket shape", Self::cell_id(sigma)))
            })?;
            let m = &pairs[0][g].m;
            let f: Vec<(u32, u32)> = is.iter().map(|&i| (i, crate::resolution::forced_column(m, i))).collect();
            let idx = self.res.find(g, &f).ok_or_else(|| {
                Error::Internal(format!("critical cell {} gives a non-admissible pair", Self::cell_id(sigma)))
            })?;
            self.place(sigma, f.len(), idx)?;
            cells[f.len()][idx] = sigma;
        }
        for (q, level) in cells.iter().enumerate() {
            if let Some(k) = level.iter().position(|&c| c == 0) {
                return Err(Error::Internal(format!("admissible pair {} has no critical cell", pairs[q][k])));
            }
        }
        self.cells = cells;
        Ok(())
    }

    fn classify_local(&mut self) -> Result<()> {
        let mut cells: Vec<Vec<Cell>> = Vec::new();
        for (q, level) in self.res.pairs().iter().enumerate() {
            let mut row = Vec::with_capacity(level.len());
            for (k, pair) in level.iter().enumerate() {
                let sigma = self.cell_of_pair(q, k);
                if sigma.count_ones() as usize != q + 1 || self.is_matched(sigma) {
                    return Err(Error::Internal(format!(
                        "the cell {} of {} is not critical",
                        Self::cell_id(sigma),
                        pair
                    )));
                }
                self.place(sigma, q, k)?;
                row.push(sigma);
            }
            cells.push(row);
        }
        self.cells = cells;
        Ok(())
    }

    /// Critical cells by size, aligned with the admissible pairs.
    pub fn critical_cells(&self) -> &[Vec<Cell>] {
        &self.cells
    }

    /// `(q, index)` of the admissible pair matching a critical cell.
    pub fn pair_of(&self, sigma: Cell) -> Option<(usize, usize)> {
        self.cell_pos.get(&sigma).copied()
    }

    /// f-vector of the Morse complex: critical cells per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    fn is_critical(&self, sigma: Cell) -> bool {
        !self.is_matched(sigma)
    }

    fn critical_position(&self, sigma: Cell) -> Result<(usize, usize)> {
        self.pair_of(sigma)
            .ok_or_else(|| Error::Internal(format!("critical cell {} has no admissible pair", Self::cell_id(sigma))))
    }

    /// Signed counts of gradient paths from `rho` (size `q`) to critical
    /// cells of size `q`, restricted to sizes `q` and `q + 1`.
    fn path_weights(&self, rho: Cell, memo: &mut HashMap<Cell, Vec<(Cell, i64)>>) -> Vec<(Cell, i64)> {
        if let Some(w) = memo.get(&rho) {
            return w.clone();
        }
        let result = if self.is_critical(rho) {
            vec![(rho, 1)]
        } else if let Some(upper) = self.up_of(rho) {
            let k_in = (upper & !rho).trailing_zeros() as usize;
            let up_sign = -facet_sign(upper, k_in);
            let mut acc: HashMap<Cell, i64> = HashMap::new();
            for k in bits(upper).filter(|&k| k != k_in) {
                let s = up_sign * facet_sign(upper, k);
                for (tau, w) in self.path_weights(upper & !(1 << k), memo) {
                    *acc.entry(tau).or_default() += s * w;
                }
            }
            let mut v: Vec<(Cell, i64)> = acc.into_iter().filter(|e| e.1 != 0).collect();
            v.sort_unstable();
            v
        } else {
            Vec::new()
        };
        memo.insert(rho, result.clone());
        result
    }

    /// All gradient paths from `rho` to critical cells of the same size.
    pub fn paths_from(&self, rho: Cell) -> Result<Vec<GradientPath>> {
        let mut out = Vec::new();
        let mut walk = vec![rho];
        self.extend_paths(&mut walk, 1, &mut out)?;
        Ok(out)
    }

    fn extend_paths(&self, walk: &mut Vec<Cell>, sign: i64, out: &mut Vec<GradientPath>) -> Result<()> {
        let rho = *walk.last().expect("walk is nonempty");
        if self.is_critical(rho) {
            self.critical_position(rho)?;
            if out.len() >= PATH_LIMIT {
                return Err(Error::SizeLimit(format!("more than {PATH_LIMIT} gradient paths")));
            }
            out.push(GradientPath { steps: walk.clone(), sign });
            return Ok(());
        }
        let Some(upper) = self.up_of(rho) else { return Ok(()) };
        if walk.len() > 4 * self.t * self.t {
            return Err(Error::Internal(format!("gradient walk from {} does not terminate", Self::cell_id(walk[0]))));
        }
        let k_in = (upper & !rho).trailing_zeros() as usize;
        let up_sign = -facet_sign(upper, k_in);
        walk.push(upper);
        for k in bits(upper).filter(|&k| k != k_in) {
            walk.push(upper & !(1 << k));
            self.extend_paths(walk, sign * up_sign * facet_sign(upper, k), out)?;
            walk.pop();
        }
        walk.pop();
        Ok(())
    }

    /// Gradient paths from `σ \ {m̃_σ}` to `τ`.
    pub fn gradient_paths(&self, sigma: Cell, tau: Cell) -> Result<Vec<GradientPath>> {
        if sigma.count_ones() < 2 {
            return Ok(Vec::new());
        }
        Ok(self.paths_from(sigma & !(1 << top(sigma)))?.into_iter().filter(|p| p.steps.last() == Some(&tau)).collect())
    }

    /// `m(𝒫)` recomputed from the steps of a path.
    pub fn path_sign(&self, steps: &[Cell]) -> i64 {
        steps
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                if b.count_ones() < a.count_ones() {
                    facet_sign(a, (a & !b).trailing_zeros() as usize)
                } else {
                    -facet_sign(b, (b & !a).trailing_zeros() as usize)
                }
            })
            .product()
    }

    /// Whether every step of a walk is an edge of the modified graph.
    pub fn is_gradient_walk(&self, steps: &[Cell]) -> bool {
        steps.windows(2).all(|w| self.successors(w[0]).contains(&w[1]))
    }

    /// The Morse complex: level `s` holds the critical cells of size `s`,
    /// indexed like the admissible pairs; level 1 maps to the ring by `m̃`.
    pub fn build_q(&self) -> Result<FreeComplex> {
        let mut q_complex = FreeComplex::new(self.res.bpol().ring());
        let mut memo: HashMap<Cell, Vec<(Cell, i64)>> = HashMap::new();
        for (s, level) in self.cells.iter().enumerate() {
            let basis: Vec<BasisElement> =
                level.iter().map(|&c| BasisElement { label: Self::cell_id(c), degree: self.lcm_monomial(c) }).collect();
            let diff: Vec<Vec<Term>> = level
                .iter()
                .map(|&sigma| {
                    if s == 0 {
                        return Ok(vec![Term { row: 0, coeff: 1, monomial: self.lcm_monomial(sigma) }]);
                    }
                    let mut terms = Vec::new();
                    for k in bits(sigma) {
                        let fs = facet_sign(sigma, k);
                        for (tau, w) in self.path_weights(sigma & !(1 << k), &mut memo) {
                            let quotient = self.lcm_bits(sigma) & !self.lcm_bits(tau);
                            terms.push(Term {
                                row: self.critical_position(tau)?.1,
                                coeff: fs * w,
                                monomial: self.bits_to_monomial(quotient),
                            });
                        }
                    }
                    Ok(normalize_terms(terms))
                })
                .collect::<Result<_>>()?;
            q_complex.push_level(basis, diff);
        }
        Ok(q_complex)
    }
}

/// Entrywise comparison of two complexes on levels `>= 2`, where the Morse
/// complex and the truncation of the explicit resolution must agree.
pub fn compare_q_p(q: &FreeComplex, p: &FreeComplex) -> std::result::Result<(), String> {
    if q.ranks() != p.ranks() {
        return Err(format!("ranks differ: {:?} vs {:?}", q.ranks(), p.ranks()));
    }
    for level in 1..q.levels.len() {
        for (c, (a, b)) in q.diffs[level - 1].iter().zip(&p.diffs[level - 1]).enumerate() {
            if a != b {
                return Err(format!("level {level}, column {c} ({}): {:?} vs {:?}", p.levels[level][c].label, a, b));
            }
        }
    }
    Ok(())
}

/// Outcome of the full battery of checks on the matching. The global
/// matching and acyclicity checks are `None` when the simplex was not
/// enumerated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorseReport {
    pub num_gens: usize,
    pub matching_edges: Option<usize>,
    pub matching_ok: Option<bool>,
    pub acyclic: Option<bool>,
    pub f_vector: Vec<usize>,
    pub lcm_matches_pairs: bool,
    /// Path exists from `σ \ {m̃_σ}` to `τ` iff `τ` is `((F_σ)_r, (m̃_σ)_<i_r>)` with `r ∈ B`.
    pub paths_match_b: bool,
    pub paths_unique: bool,
    pub path_signs_ok: bool,
    pub lcm_monotone: bool,
    pub q_equals_p: bool,
    pub diamond_ok: bool,
    pub incidence_ok: bool,
    pub failures: Vec<String>,
}

impl MorseReport {
    pub fn all_ok(&self) -> bool {
        self.matching_ok != Some(false)
            && self.acyclic != Some(false)
            && self.lcm_matches_pairs
            && self.paths_match_b
            && self.paths_unique
            && self.path_signs_ok
            && self.lcm_monotone
            && self.q_equals_p
            && self.diamond_ok
            && self.incidence_ok
    }

    /// `all_ok` with the global checks actually performed.
    pub fn all_ok_exhaustive(&self) -> bool {
        self.all_ok() && self.matching_ok.is_some() && self.acyclic.is_some()
    }

    pub fn render(&self) -> String {
        let flag = |b: bool| if b { "ok" } else { "FAILED" };
        let opt = |b: Option<bool>| b.map_or("not enumerated", flag);
        let edges = self.matching_edges.map_or("not enumerated".to_string(), |e| e.to_string());
        let rows = [
            ("generators", self.num_gens.to_string()),
            ("matching edges", edges),
            ("matching", opt(self.matching_ok).into()),
            ("acyclic", opt(self.acyclic).into()),
            ("f-vector", format!("{:?}", self.f_vector)),
            ("cells vs pairs", flag(self.lcm_matches_pairs).into()),
            ("paths iff r in B", flag(self.paths_match_b).into()),
            ("paths unique", flag(self.paths_unique).into()),
            ("path signs", flag(self.path_signs_ok).into()),
            ("lcm monotone", flag(self.lcm_monotone).into()),
            ("Q = P", flag(self.q_equals_p).into()),
            ("diamond property", flag(self.diamond_ok).into()),
            ("incidence in 0,+-1", flag(self.incidence_ok).into()),
        ];
        let mut s: String = rows.iter().map(|(k, v)| format!("{k:<20}{v}\n")).collect();
        for f in self.failures.iter().take(10) {
            s.push_str(&format!("failure: {f}\n"));
        }
        s
    }
}

/// Face poset of the Morse complex: critical cells with their lower covers
/// (gradient-path reachability one dimension down) and incidence numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    pub cells: Vec<Cell>,
    pub dims: Vec<usize>,
    pub covers: Vec<Vec<(usize, i64)>>,
}

impl FacePoset {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph cells {\n  rankdir=BT;\n");
        for (v, &c) in self.cells.iter().enumerate() {
            s.push_str(&format!("  c{v} [label=\"{}\"];\n", Morse::cell_id(c)));
        }
        for (v, cs) in self.covers.iter().enumerate() {
            for (w, inc) in cs {
                s.push_str(&format!("  c{w} -> c{v} [label=\"{inc}\"];\n"));
            }
        }
        s.push_str("}\n");
        s
    }

    /// Pairs `(σ, ρ)` two dimensions apart with `ρ` in the closure of `σ`
    /// but not exactly two cells between them.
    pub fn diamond_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (v, cs) in self.covers.iter().enumerate() {
            let mut through: HashMap<usize, usize> = HashMap::new();
            for &(w, _) in cs {
                for &(x, _) in &self.covers[w] {
                    *through.entry(x).or_default() += 1;
                }
            }
            let mut bad: Vec<(usize, usize, usize)> =
                through.into_iter().filter(|e| e.1 != 2).map(|(x, n)| (v, x, n)).collect();
            bad.sort_unstable();
            out.extend(bad);
        }
        out
    }
}

impl Morse<'_> {
    pub fn face_poset(&self) -> Result<FacePoset> {
        let mut cells = Vec::new();
        let mut dims = Vec::new();
        let mut id: HashMap<Cell, usize> = HashMap::new();
        for (s, level) in self.cells.iter().enumerate() {
            for &c in level {
                id.insert(c, cells.len());
                cells.push(c);
                dims.push(s);
            }
        }
        let covers = cells
            .par_iter()
            .map(|&sigma| {
                if sigma.count_ones() == 1 {
                    return Ok(Vec::new());
                }
                let mut acc: HashMap<Cell, i64> = HashMap::new();
                for k in bits(sigma) {
                    for p in self.paths_from(sigma & !(1 << k))? {
                        *acc.entry(*p.steps.last().expect("nonempty")).or_default() += facet_sign(sigma, k) * p.sign;
                    }
                }
                let mut v: Vec<(usize, i64)> = acc.into_iter().map(|(tau, inc)| (id[&tau], inc)).collect();
                v.sort_unstable();
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FacePoset { cells, dims, covers })
    }

    /// Runs every check on the matching, the paths and the Morse complex.
    pub fn verify(&self) -> Result<MorseReport> {
        let mut r = MorseReport { num_gens: self.t, f_vector: self.f_vector(), ..Default::default() };
        if self.is_exhaustive() {
            r.matching_edges = Some(self.matching()?.len());
            r.matching_ok = Some(self.matching_violations.is_empty());
            let cycle = self.find_cycle()?;
            if let Some(c) = &cycle {
                r.failures.push(format!("directed cycle through {}", Self::cell_id(c[0])));
            }
            r.acyclic = Some(cycle.is_none());
        }
        let pairs = self.res.pairs();
        r.lcm_matches_pairs = self
            .cells
            .iter()
            .enumerate()
            .all(|(q, level)| level.iter().enumerate().all(|(k, &c)| self.lcm_monomial(c) == pairs[q][k].x_of()));
        r.paths_match_b = true;
        r.paths_unique = true;
        r.path_signs_ok = true;
        r.lcm_monotone = true;
        for (q, level) in self.cells.iter().enumerate().skip(1) {
            for (k, &sigma) in level.iter().enumerate() {
                let pair = &pairs[q][k];
                let paths = self.paths_from(sigma & !(1 << top(sigma)))?;
                for p in &paths {
                    let monotone = p.steps.iter().all(|&s| self.lcm_bits(s) & !self.lcm_bits(sigma) == 0)
                        && p.steps.windows(2).all(|w| self.lcm_bits(w[1]) & !self.lcm_bits(w[0]) == 0);
                    if !monotone {
                        r.lcm_monotone = false;
                        r.failures.push(format!("lcm grows along a path from {pair}"));
                    }
                    if self.path_sign(&p.steps) != p.sign || !self.is_gradient_walk(&p.steps) {
                        r.path_signs_ok = false;
                        r.failures.push(format!("inconsistent walk from {pair}"));
                    }
                }
                let b = self.res.b_set(pair);
                let mut expected: Vec<(Cell, usize)> = b
                    .iter()
                    .map(|&rr| {
                        let g2 = self.res.bracket(pair.gen, pair.f[rr - 1].0);
                        let idx = self.res.find(g2, &pair.without(rr)).expect("r lies in B");
                        (self.cells[q - 1][idx], rr)
                    })
                    .collect();
                expected.sort_unstable();
                let mut reached: Vec<Cell> = paths.iter().map(|p| *p.steps.last().expect("nonempty")).collect();
                reached.sort_unstable();
                let mut distinct = reached.clone();
                distinct.dedup();
                if distinct != expected.iter().map(|e| e.0).collect::<Vec<_>>() {
                    r.paths_match_b = false;
                    r.failures.push(format!("path targets of {pair} differ from B = {b:?}"));
                }
                if distinct.len() != reached.len() {
                    r.paths_unique = false;
                    r.failures.push(format!("several paths start at {pair}"));
                }
                for p in &paths {
                    if let Some(&(_, rr)) = expected.iter().find(|e| Some(&e.0) == p.steps.last()) {
                        let lhs = if q % 2 == 0 { p.sign } else { -p.sign };
                        let rhs = if rr % 2 == 0 { 1 } else { -1 };
                        if lhs != rhs {
                            r.path_signs_ok = false;
                            r.failures.push(format!("(-1)^q m(P) != (-1)^r for {pair}, r = {rr}"));
                        }
                    }
                }
            }
        }
        match compare_q_p(&self.build_q()?, self.res.complex()) {
            Ok(()) => r.q_equals_p = true,
            Err(e) => r.failures.push(format!("Morse complex differs: {e}")),
        }
        let poset = self.face_poset()?;
        r.incidence_ok = poset.covers.iter().flatten().all(|(_, inc)| (-1..=1).contains(inc));
        if !r.incidence_ok {
            r.failures.push("incidence outside {-1, 0, 1}".into());
        }
        let bad = poset.diamond_violations();
        r.diamond_ok = bad.is_empty();
        for (v, x, n) in bad.into_iter().take(5) {
            r.failures.push(format!(
                "{n} cells between {} and {}",
                Self::cell_id(poset.cells[v]),
                Self::cell_id(poset.cells[x])
            ));
        }
        Ok(r)
    }
}
