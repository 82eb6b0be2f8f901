//! Combinatorial lemmas about Borel moves, brackets and admissible pairs,
//! checked on every ideal of the default corpus.

use std::collections::HashSet;

use bpol_core::borel::{colon_ideal, fb, has_linear_quotients, is_borel_fixed, is_sq_strongly_stable, BorelIdeal};
use bpol_core::corpus::default_corpus;
use bpol_core::polarize::{
    bpol_ideal, bpol_monomial, gamma_ideal, gamma_monomial, specialize_monomial, sq_ideal, GammaSequence,
    SpecializationMap,
};
use bpol_core::poset::{check_rmv_structure, PairPoset};
use bpol_core::resolution::{forced_column, is_admissible_positions, rank_formula, AdmissiblePair, Resolution};
use bpol_core::{Monomial, MonomialIdeal, Var};

/// All monomials of degree `1..=deg` in `x_1..x_n`.
fn monomials_up_to(n: u32, deg: u32) -> Vec<Monomial> {
    let mut layer = vec![Monomial::one()];
    let mut out = Vec::new();
    for _ in 0..deg {
        let mut next: HashSet<Monomial> = HashSet::new();
        for m in &layer {
            for i in 1..=n {
                next.insert(m.mul(&Monomial::var(Var::Single(i))));
            }
        }
        layer = next.into_iter().collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn smallest_index(m: &Monomial) -> u32 {
    m.support().map(|v| v.row()).min().expect("non-unit")
}

#[test]
fn ek_split_is_unique() {
    for i in default_corpus() {
        for m in monomials_up_to(i.n(), i.maxdeg() + 1) {
            if !i.contains(&m) {
                continue;
            }
            // Independent scan: generators g | m with m/g = 1 or nu(g) <= mu(m/g).
            let candidates: Vec<&Monomial> = i
                .gens()
                .iter()
                .filter(|g| g.divides(&m))
                .filter(|g| {
                    let rest = m.div_exact(g).unwrap();
                    rest.is_one() || g.nu().unwrap() <= smallest_index(&rest)
                })
                .collect();
            assert_eq!(candidates.len(), 1, "{m} in {}", i.ideal());
            assert_eq!(&i.ek_g(&m).unwrap(), candidates[0]);
        }
    }
}

#[test]
fn closure_is_idempotent_and_prefixes_are_borel() {
    for i in default_corpus() {
        let again = bpol_core::borel::borel_closure_in(i.ring(), i.gens()).unwrap();
        assert_eq!(again, i);
        for part in i.lex_filtration().unwrap() {
            assert!(is_borel_fixed(&part));
        }
    }
}

#[test]
fn brackets_agree_with_the_move_below_i() {
    for i in default_corpus() {
        for m in i.gens() {
            let nu = m.nu().unwrap();
            for k in 1..nu {
                let moved = fb(m, k).unwrap();
                let b = i.m_bracket(m, k).unwrap();
                assert!(i.index_of(&b).is_some());
                for l in 1..=k {
                    assert_eq!(b.exp(l), moved.exp(l), "{m}, i = {k}");
                }
                assert!(b.nu().unwrap() >= k);
            }
            assert_eq!(&i.m_bracket(m, nu).unwrap(), m);
        }
    }
}

fn admissible_pairs(res: &Resolution) -> impl Iterator<Item = &AdmissiblePair> {
    res.pairs().iter().flatten()
}

#[test]
fn polarized_moves() {
    for i in default_corpus() {
        let d = i.maxdeg();
        let res = Resolution::build(&i).unwrap();
        for p in admissible_pairs(&res) {
            let mt = bpol_monomial(&p.m, d).unwrap();
            for w in p.f.windows(2) {
                assert!(w[0].1 <= w[1].1);
            }
            for &(ir, jr) in &p.f {
                let k = p.m.support().map(|v| v.row()).find(|&l| l > ir).unwrap();
                let lhs = Monomial::from_positions([(k, jr)]).mul(&bpol_monomial(&fb(&p.m, ir).unwrap(), d).unwrap());
                let rhs = Monomial::from_positions([(ir, jr)]).mul(&mt);
                assert_eq!(lhs, rhs, "{p}");
                let bracket = bpol_monomial(&i.m_bracket(&p.m, ir).unwrap(), d).unwrap();
                assert!(bracket.divides(&rhs));
            }
        }
    }
}

#[test]
fn moves_commute_or_collapse() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        for p in admissible_pairs(&res) {
            for r in 0..p.f.len() {
                for s in r + 1..p.f.len() {
                    let ((ir, jr), (is, js)) = (p.f[r], p.f[s]);
                    let after_s = fb(&p.m, is).unwrap();
                    if jr < js {
                        let a = fb(&after_s, ir).unwrap();
                        let b = fb(&fb(&p.m, ir).unwrap(), is).unwrap();
                        assert_eq!(a, b, "{p}");
                        let ms = i.m_bracket(&p.m, is).unwrap();
                        let mr = i.m_bracket(&p.m, ir).unwrap();
                        assert_eq!(i.m_bracket(&ms, ir).unwrap(), i.m_bracket(&mr, is).unwrap(), "{p}");
                    } else {
                        assert_eq!(fb(&p.m, ir).unwrap(), fb(&after_s, ir).unwrap(), "{p}");
                        let ms = i.m_bracket(&p.m, is).unwrap();
                        assert_eq!(i.m_bracket(&p.m, ir).unwrap(), i.m_bracket(&ms, ir).unwrap(), "{p}");
                    }
                }
            }
        }
    }
}

#[test]
fn b_sets() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let one_degree = i.ideal().is_equigenerated();
        for p in admissible_pairs(&res) {
            let q = p.q();
            let b = res.b_set(p);
            if q > 0 {
                assert!(b.contains(&q), "{p}");
            }
            for r in 1..=q {
                assert!(is_admissible_positions(&p.without(r), &p.m));
                let target = i.m_bracket(&p.m, p.f[r - 1].0).unwrap();
                let nu = target.nu().unwrap();
                let condition_a = p.without(r).iter().all(|&(row, _)| row < nu);
                let staircase = r == q || p.f[r - 1].1 < p.f[r].1;
                if condition_a {
                    assert_eq!(b.contains(&r), staircase, "{p}, r = {r}");
                }
                if one_degree {
                    assert_eq!(b.contains(&r), staircase, "{p}, r = {r}");
                }
            }
        }
    }
}

#[test]
fn pair_counts_and_multidegrees() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let counts: Vec<usize> = res.pairs().iter().map(Vec::len).collect();
        // Independent count: subsets of {1, ..., nu(m) - 1}.
        let mut expected: Vec<usize> = Vec::new();
        for m in i.gens() {
            let free = m.nu().unwrap() - 1;
            for mask in 0u32..1 << free {
                let q = mask.count_ones() as usize;
                if expected.len() <= q {
                    expected.resize(q + 1, 0);
                }
                expected[q] += 1;
            }
        }
        assert_eq!(counts, expected);
        assert_eq!(rank_formula(&i), expected);
        let mut seen = HashSet::new();
        for p in admissible_pairs(&res) {
            assert!(seen.insert(p.x_of()), "x_of repeats at {p}");
            for &(row, col) in &p.f {
                assert_eq!(col, forced_column(&p.m, row));
            }
        }
    }
}

#[test]
fn colons_of_the_polarized_filtration() {
    for i in default_corpus() {
        let big = bpol_ideal(&i);
        let d = i.maxdeg();
        for (r, m) in i.gens().iter().enumerate().skip(1) {
            let prefix: Vec<Monomial> = i.gens()[..r].iter().map(|g| bpol_monomial(g, d).unwrap()).collect();
            let prefix = MonomialIdeal::new(big.ring(), prefix).unwrap();
            let colon = colon_ideal(&prefix, &bpol_monomial(m, d).unwrap());
            let lambda = m.nu().unwrap() - 1;
            let closed_form: Vec<Monomial> =
                (1..=lambda).map(|k| Monomial::from_positions([(k, forced_column(m, k))])).collect();
            let closed_form = MonomialIdeal::new(big.ring(), closed_form).unwrap();
            assert_eq!(colon, closed_form, "r = {}, m = {m}", r + 1);
        }
        let order: Vec<Monomial> = i.gens().iter().map(|g| bpol_monomial(g, d).unwrap()).collect();
        assert!(has_linear_quotients(&big, &order).unwrap());
    }
}

#[test]
fn polarization_maps() {
    for i in default_corpus() {
        let d = i.maxdeg();
        let sq = GammaSequence::squarefree(d as usize);
        let sequences = [
            sq.clone(),
            GammaSequence::new((0..d).map(|k| k / 2).collect()).unwrap(),
            GammaSequence::new((0..d).map(|k| k + k / 2).collect()).unwrap(),
        ];
        for m in monomials_up_to(i.n(), d) {
            let t = bpol_monomial(&m, d).unwrap();
            assert!(t.is_squarefree() && t.degree() == m.degree());
            assert_eq!(specialize_monomial(&t, &SpecializationMap::Theta).unwrap(), m);
            for a in &sequences {
                let via = specialize_monomial(&t, &SpecializationMap::theta_a(a.clone())).unwrap();
                assert_eq!(via, gamma_monomial(&m, a).unwrap());
            }
        }
        let sq_i = sq_ideal(i.ideal()).unwrap();
        assert_eq!(gamma_ideal(i.ideal(), &sq).unwrap(), sq_i);
        assert!(is_sq_strongly_stable(&sq_i).unwrap());
        assert_eq!(bpol_ideal(&i).len(), i.gens().len());
    }
}

#[test]
fn borel_ideal_rejects_non_borel_input() {
    let six: Vec<Monomial> =
        ["x1^2", "x1*x2", "x1*x3", "x1*x4", "x2^2", "x2*x4"].iter().map(|s| s.parse().unwrap()).collect();
    let ideal = MonomialIdeal::from_gens(six).unwrap();
    assert!(!is_borel_fixed(&ideal));
    assert!(BorelIdeal::new(ideal).is_err());
}

#[test]
fn rmv_structure_of_one_degree_ideals() {
    let mut checked = 0;
    for i in default_corpus().into_iter().filter(|i| i.ideal().is_equigenerated()) {
        let res = Resolution::build(&i).unwrap();
        let poset = PairPoset::new(&res);
        for v in 0..poset.len() {
            check_rmv_structure(&res, &poset, v).unwrap_or_else(|e| panic!("{}: {e}", i.ideal()));
        }
        checked += 1;
    }
    assert!(checked >= 5, "{checked}");
}
