//! Exact rank computation for sparse integer matrices, over a prime field or
//! over the rationals.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field for homology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Prime(u32),
    Rational,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(32003)
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" || s == "qq" || s == "rational" {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("gf")
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown field '{s}'")))?;
        if p < 2 || (2..).take_while(|k| k * k <= p).any(|k| p % k == 0) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if p > 1 << 31 {
            return Err(Error::InvalidArgument(format!("prime {p} is too large")));
        }
        Ok(Field::Prime(p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "gf{p}"),
            Field::Rational => write!(f, "q"),
        }
    }
}

/// A matrix stored by columns; each column is a list of `(row, value)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        debug_assert!(cols.iter().flatten().all(|(r, _)| *r < nrows));
        SparseMatrix { nrows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn rank(&self, field: Field) -> usize {
        match field {
            Field::Prime(p) => rank_mod_p(self, p),
            Field::Rational => rank_rational(self),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols.len()]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                d[r][c] += v;
            }
        }
        d
    }
}

/// Columns sorted by row with duplicates merged, shortest first.
fn prepared<T>(
    m: &SparseMatrix,
    conv: impl Fn(i64) -> T,
    is_zero: impl Fn(&T) -> bool,
    add: impl Fn(&T, &T) -> T,
) -> Vec<Vec<(usize, T)>> {
    let mut out: Vec<Vec<(usize, T)>> = m
        .cols
        .iter()
        .map(|col| {
            let mut c: Vec<(usize, i64)> = col.clone();
            c.sort_by_key(|e| e.0);
            let mut v: Vec<(usize, T)> = Vec::with_capacity(c.len());
            for (r, x) in c {
                let x = conv(x);
                match v.last_mut() {
                    Some((lr, lx)) if *lr == r => *lx = add(lx, &x),
                    _ => v.push((r, x)),
                }
            }
            v.retain(|(_, x)| !is_zero(x));
            v
        })
        .filter(|v| !v.is_empty())
        .collect();
    out.sort_by_key(Vec::len);
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// `v - factor · w` over `GF(p)`, both sorted by index.
fn axpy_mod(v: &[(usize, u64)], factor: u64, w: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    let neg = (p - factor) % p;
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i]);
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, neg * w[j].1 % p));
            j += 1;
        } else {
            let x = (v[i].1 + neg * w[j].1) % p;
            if x != 0 {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental echelon form: each column is reduced against stored pivots
/// keyed by their leading row until it vanishes or yields a new pivot.
fn rank_mod_p(m: &SparseMatrix, p: u32) -> usize {
    let p = p as u64;
    let cols = prepared(m, |x| x.rem_euclid(p as i64) as u64, |x| *x == 0, |a, b| (a + b) % p);
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for mut v in cols {
        while let Some(&(lead, x)) = v.first() {
            match pivots.get(&lead) {
                Some(piv) => v = axpy_mod(&v, x, piv, p),
                None => {
                    let inv = inv_mod(x, p);
                    for e in v.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `a · v - b · w` over the integers, divided by the content.
fn combine_int(a: &BigInt, v: &[(usize, BigInt)], b: &BigInt, w: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push((v[i].0, a * &v[i].1));
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, -(b * &w[j].1)));
            j += 1;
        } else {
            let x = a * &v[i].1 - b * &w[j].1;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for e in out.iter_mut() {
            e.1 /= &g;
        }
    }
    out
}

/// Fraction-free elimination over the integers; the rank equals the rank
/// over the rationals.
fn rank_rational(m: &SparseMatrix) -> usize {
    let cols = prepared(m, BigInt::from, |x| x.is_zero(), |a, b| a + b);
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    for mut v in cols {
        while let Some((lead, x)) = v.first().cloned() {
            match pivots.get(&lead) {
                Some(piv) => {
                    let y = &piv[0].1;
                    let g = x.gcd(y);
                    v = combine_int(&(y / &g), &v, &(&x / &g), piv);
                }
                None => {
                    if x.is_negative() {
                        for e in v.iter_mut() {
                            e.1 = -e.1.clone();
                        }
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    /// Textbook Gaussian elimination over the rationals.
    fn dense_rank(d: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> =
            d.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    let pivot = a[rank].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn dense_rank_mod(d: &[Vec<i64>], p: i64) -> usize {
        let mut a: Vec<Vec<i64>> = d.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
        let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = inv_mod(a[rank][c] as u64, p as u64) as i64;
            for r in 0..rows {
                if r != rank && a[r][c] != 0 {
                    let f = a[r][c] * inv % p;
                    let pivot = a[rank].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot) {
                        *x = (*x - f * y).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn from_dense(d: &[Vec<i64>]) -> SparseMatrix {
        let cols = d.first().map_or(0, Vec::len);
        SparseMatrix::new(
            d.len(),
            (0..cols).map(|c| (0..d.len()).filter(|&r| d[r][c] != 0).map(|r| (r, d[r][c])).collect()).collect(),
        )
    }

    #[test]
    fn small_ranks() {
        let m = from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(Field::Rational), 1);
        assert_eq!(m.rank(Field::default()), 1);
        let id = from_dense(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.rank(Field::Prime(2)), 2);
        assert_eq!(SparseMatrix::new(3, vec![]).rank(Field::Rational), 0);
    }

    #[test]
    fn characteristic_matters() {
        let m = from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.rank(Field::Prime(2)), 1);
        assert_eq!(m.rank(Field::Prime(3)), 1);
        assert_eq!(m.rank(Field::Rational), 2);
    }

    #[test]
    fn duplicate_entries_accumulate() {
        let m = SparseMatrix::new(1, vec![vec![(0, 1), (0, -1)]]);
        assert_eq!(m.rank(Field::Rational), 0);
        assert_eq!(m.rank(Field::default()), 0);
    }

    #[test]
    fn field_parsing() {
        assert_eq!("gf32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert!("gf32004".parse::<Field>().is_err());
        assert!("r".parse::<Field>().is_err());
        assert_eq!(Field::default().to_string(), "gf32003");
    }

    fn arb_dense() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(prop_oneof![6 => Just(0i64), 2 => -2i64..=2, 1 => -40i64..40], c),
                r,
            )
        })
    }

    fn arb_low_rank() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..50, 1usize..50, 1usize..6).prop_flat_map(|(r, c, k)| {
            (
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, k), r),
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), k),
            )
                .prop_map(move |(a, b)| {
                    (0..r).map(|i| (0..c).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
                })
        })
    }

    proptest! {
        #[test]
        fn matches_dense_elimination(d in arb_dense()) {
            let m = from_dense(&d);
            prop_assert_eq!(m.rank(Field::Rational), dense_rank(&d));
            prop_assert_eq!(m.rank(Field::Prime(32003)), dense_rank_mod(&d, 32003));
            prop_assert_eq!(m.rank(Field::Prime(3)), dense_rank_mod(&d, 3));
        }

        #[test]
        fn matches_dense_on_low_rank_products(d in arb_low_rank()) {
            let m = from_dense(&d);
            prop_assert_eq!(m.rank(Field::Rational), dense_rank(&d));
            prop_assert_eq!(m.rank(Field::Prime(32003)), dense_rank_mod(&d, 32003));
        }
    }
}
