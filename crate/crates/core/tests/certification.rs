//! The explicit resolution and its specializations against independent
//! homology and Betti oracles, over the default corpus.

use bpol_core::complex::FreeComplex;
use bpol_core::corpus::default_corpus;
use bpol_core::homology::{betti_oracle, betti_oracle_taylor, certify_resolution, BettiTable};
use bpol_core::linalg::Field;
use bpol_core::polarize::{gamma_ideal, sq_ideal, GammaSequence, SpecializationMap};
use bpol_core::resolution::{rank_formula, Resolution};

const GF: Field = Field::Prime(32003);

#[test]
fn resolution_of_the_polarization() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let c = res.complex();
        assert!(c.square_witnesses().is_empty(), "{}", i.ideal());
        assert!(c.unit_entries().is_empty());
        let report = certify_resolution(c, res.bpol(), GF);
        assert!(report.is_minimal_resolution(), "{}: {}", i.ideal(), report.summary());
        let mut ranks = c.ranks();
        ranks.remove(0);
        assert_eq!(ranks, rank_formula(&i));
    }
}

#[test]
fn split_differential_recombines() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let (delta, delta_prime) = res.split_differential().unwrap();
        let c = res.complex();
        for (level, cols) in c.diffs.iter().enumerate() {
            for (col, terms) in cols.iter().enumerate() {
                let mut combined = delta.diffs[level][col].clone();
                combined.extend(delta_prime.diffs[level][col].iter().map(|t| {
                    let mut t = t.clone();
                    t.coeff = -t.coeff;
                    t
                }));
                assert_eq!(&bpol_core::complex::normalize_terms(combined), terms);
            }
        }
    }
}

fn certify_specialization(c: &FreeComplex, phi: SpecializationMap, ideal: &bpol_core::MonomialIdeal) {
    let s = c.specialize(&phi).unwrap();
    assert_eq!(s.ring, ideal.ring());
    let report = certify_resolution(&s, ideal, GF);
    assert!(report.is_minimal_resolution(), "{ideal}: {}", report.summary());
}

#[test]
fn specializations_resolve_the_originals() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let d = i.maxdeg() as usize;
        certify_specialization(res.complex(), SpecializationMap::Theta, i.ideal());
        let sequences = [
            GammaSequence::squarefree(d),
            GammaSequence::new((0..d as u32).map(|k| k / 2).collect()).unwrap(),
            GammaSequence::new((0..d as u32).map(|k| k + k / 2).collect()).unwrap(),
            GammaSequence::zero(d),
        ];
        for a in sequences {
            let target = gamma_ideal(i.ideal(), &a).unwrap();
            certify_specialization(res.complex(), SpecializationMap::theta_a(a), &target);
        }
    }
}

#[test]
fn betti_numbers_agree() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let from_p = res.betti_table();
        let up = betti_oracle(res.bpol(), GF).unwrap();
        assert_eq!(from_p, up, "{}", i.ideal());
        let down = betti_oracle(i.ideal(), GF).unwrap();
        assert_eq!(down.graded(), up.graded());
        let sq = betti_oracle(&sq_ideal(i.ideal()).unwrap(), GF).unwrap();
        assert_eq!(sq.graded(), up.graded());
        assert_eq!(up.totals(), rank_formula(&i));
        let specialized = BettiTable::from_complex(&res.complex().specialize(&SpecializationMap::Theta).unwrap());
        assert_eq!(specialized, down);
    }
}

#[test]
fn oracles_are_characteristic_free_on_the_corpus() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let q = betti_oracle(res.bpol(), Field::Rational).unwrap();
        assert_eq!(q, betti_oracle(res.bpol(), GF).unwrap());
        assert_eq!(q, betti_oracle(res.bpol(), Field::Prime(2)).unwrap());
        if i.gens().len() <= 12 {
            assert_eq!(q, betti_oracle_taylor(res.bpol(), GF, 12).unwrap());
        }
    }
}

#[test]
fn rational_certification_of_small_ideals() {
    for i in default_corpus().into_iter().filter(|i| i.gens().len() <= 10) {
        let res = Resolution::build(&i).unwrap();
        let report = certify_resolution(res.complex(), res.bpol(), Field::Rational);
        assert!(report.is_minimal_resolution(), "{}", report.summary());
    }
}
