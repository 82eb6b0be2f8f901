//! The poset of admissible pairs, ordered by the support of the differential.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::monomial::Monomial;
use crate::resolution::{rmv, rmv_blocks, Resolution};

/// Node `k` is the pair `res.pairs()[q][idx]` for `nodes[k] = (q, idx)`.
/// `(F, m̃)` covers `(F', m̃')` when `e(F', m̃')` occurs in `∂ e(F, m̃)`.
#[derive(Clone, Debug)]
pub struct PairPoset {
    pub nodes: Vec<(usize, usize)>,
    /// Lower covers of each node.
    pub covers: Vec<Vec<usize>>,
    below: Vec<Vec<u64>>,
}

impl PairPoset {
    pub fn new(res: &Resolution) -> Self {
        let mut nodes = Vec::new();
        let mut id: HashMap<(usize, usize), usize> = HashMap::new();
        for (q, level) in res.pairs().iter().enumerate() {
            for k in 0..level.len() {
                id.insert((q, k), nodes.len());
                nodes.push((q, k));
            }
        }
        let c = res.complex();
        let covers: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&(q, k)| {
                if q == 0 {
                    return Vec::new();
                }
                let mut v: Vec<usize> = c.diffs[q][k].iter().map(|t| id[&(q - 1, t.row)]).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let words = nodes.len().div_ceil(64);
        let mut below: Vec<Vec<u64>> = vec![vec![0; words]; nodes.len()];
        // Nodes are listed level by level, so lower covers come first.
        for v in 0..nodes.len() {
            below[v][v / 64] |= 1 << (v % 64);
            for &w in &covers[v] {
                let (lo, hi) = below.split_at_mut(v);
                for (a, b) in hi[0].iter_mut().zip(&lo[w]) {
                    *a |= *b;
                }
            }
        }
        PairPoset { nodes, covers, below }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_of(&self, q: usize, idx: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == (q, idx))
    }

    /// `a <= b` in the reflexive-transitive closure of the cover relation.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b][a / 64] >> (a % 64) & 1 == 1
    }

    /// The principal order ideal `{ w | w <= v }`, sorted.
    pub fn down_set(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&w| self.leq(w, v)).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !(0..self.len()).any(|w| w != v && self.leq(v, w))).collect()
    }

    /// Graph description with one node per pair and one edge per cover.
    pub fn to_dot(&self, res: &Resolution) -> String {
        let mut s = String::from("digraph pairs {\n  rankdir=BT;\n");
        for (v, &(q, k)) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{v} [label=\"{}\"];", res.pairs()[q][k]);
        }
        for (v, cs) in self.covers.iter().enumerate() {
            for w in cs {
                let _ = writeln!(s, "  n{w} -> n{v};");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Checks, for one node of a one-degree ideal, that covers are exactly the
/// removals of a single square of `rmv`, and that the principal order ideal
/// is the product `∏ (2^{R_l} \ {∅})`: the elements below `(F, m̃)` are the
/// `x(F, m̃) / ∏_{R} x_{i,j}` for `R ⊆ rmv` containing no block, with the
/// order reversed to inclusion of `R`.
pub fn check_rmv_structure(res: &Resolution, poset: &PairPoset, v: usize) -> Result<(), String> {
    let by_x: HashMap<_, usize> =
        poset.nodes.iter().enumerate().map(|(w, &(q, k))| (res.pairs()[q][k].x_of(), w)).collect();
    let (q, k) = poset.nodes[v];
    let pair = &res.pairs()[q][k];
    let x = pair.x_of();
    let positions = rmv(pair);
    let blocks = rmv_blocks(pair);
    if blocks.iter().any(|b| b.len() < 2) {
        return Err(format!("{pair} has a block with fewer than two squares"));
    }
    if positions.len() > 24 {
        return Err(format!("rmv of {pair} is too large to enumerate"));
    }
    let mut expected_covers: Vec<usize> = positions
        .iter()
        .filter_map(|&p| by_x.get(&x.div_exact(&Monomial::from_positions([p])).ok()?).copied())
        .collect();
    expected_covers.sort_unstable();
    if expected_covers != poset.covers[v] {
        return Err(format!("covers of {pair} are {:?}, single removals give {:?}", poset.covers[v], expected_covers));
    }
    let mut image: Vec<(u32, usize)> = Vec::new();
    for mask in 0u32..1 << positions.len() {
        let r: Vec<(u32, u32)> = (0..positions.len()).filter(|b| mask >> b & 1 == 1).map(|b| positions[b]).collect();
        if blocks.iter().any(|b| b.iter().all(|p| r.contains(p))) {
            continue;
        }
        let target = x.div_exact(&Monomial::from_positions(r.iter().copied())).map_err(|e| e.to_string())?;
        match by_x.get(&target) {
            Some(&w) => image.push((mask, w)),
            None => return Err(format!("{pair} minus {r:?} is not an admissible pair")),
        }
    }
    let product: usize = blocks.iter().map(|b| (1usize << b.len()) - 1).product();
    let mut targets: Vec<usize> = image.iter().map(|x| x.1).collect();
    targets.sort_unstable();
    if targets != poset.down_set(v) || image.len() != product {
        return Err(format!(
            "order ideal of {pair} has {} elements, the block product predicts {product}",
            poset.down_set(v).len()
        ));
    }
    for &(ma, a) in &image {
        for &(mb, b) in &image {
            if poset.leq(a, b) != (ma & mb == mb) {
                return Err(format!("order ideal of {pair} is not ordered by reverse inclusion"));
            }
        }
    }
    Ok(())
}
