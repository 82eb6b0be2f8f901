//! The acyclic matching and its Morse complex on the default corpus.

use std::collections::HashSet;

use bpol_core::corpus::default_corpus;
use bpol_core::morse::{compare_q_p, facet_sign, Morse, DEFAULT_MAX_GENS};
use bpol_core::resolution::Resolution;

#[test]
fn full_report_on_the_corpus() {
    let mut checked = 0;
    for i in default_corpus().into_iter().filter(|i| i.gens().len() <= DEFAULT_MAX_GENS) {
        let res = Resolution::build(&i).unwrap();
        let morse = Morse::new(&res, DEFAULT_MAX_GENS).unwrap();
        let report = morse.verify().unwrap();
        assert!(report.all_ok_exhaustive(), "{}\n{}", i.ideal(), report.render());
        let counts: Vec<usize> = res.pairs().iter().map(Vec::len).collect();
        assert_eq!(report.f_vector, counts);
        checked += 1;
    }
    assert!(checked >= 50);
}

/// Larger ideals: paths, Morse complex and face poset without enumerating the simplex.
#[test]
fn local_report_on_the_whole_corpus() {
    for i in default_corpus() {
        let res = Resolution::build(&i).unwrap();
        let morse = Morse::local(&res).unwrap();
        let report = morse.verify().unwrap();
        assert!(report.all_ok(), "{}\n{}", i.ideal(), report.render());
    }
}

/// Brute-force matching check: every subset is critical or lies in exactly one edge.
#[test]
fn matching_partitions_the_simplex() {
    for i in default_corpus().into_iter().filter(|i| i.gens().len() <= 10) {
        let res = Resolution::build(&i).unwrap();
        let morse = Morse::new(&res, 10).unwrap();
        let t = morse.num_gens();
        let mut seen: HashSet<u64> = HashSet::new();
        for (upper, lower) in morse.matching().unwrap() {
            assert_eq!(upper.count_ones(), lower.count_ones() + 1);
            assert_eq!(upper & lower, lower);
            assert_eq!(morse.lcm_bits(upper), morse.lcm_bits(lower));
            assert!(seen.insert(upper) && seen.insert(lower));
        }
        let critical: usize = morse.critical_cells().iter().map(Vec::len).sum();
        assert_eq!(seen.len() + critical, (1usize << t) - 1);
        assert!(morse.find_cycle().unwrap().is_none());
    }
}

#[test]
fn ranks_of_prec_sigma_are_a_permutation() {
    for i in default_corpus().into_iter().filter(|i| i.gens().len() <= 8) {
        let res = Resolution::build(&i).unwrap();
        let morse = Morse::new(&res, 8).unwrap();
        let t = morse.num_gens();
        for sigma in 1u64..1 << t {
            let mut ranks = morse.prec_ranks(sigma);
            ranks.sort_unstable();
            assert_eq!(ranks, (0..t).collect::<Vec<_>>());
        }
    }
}

#[test]
fn corrupted_morse_complex_is_caught() {
    let i = default_corpus().into_iter().find(|i| i.gens().len() >= 5).unwrap();
    let res = Resolution::build(&i).unwrap();
    let morse = Morse::new(&res, 16).unwrap();
    let mut q = morse.build_q().unwrap();
    let level = q.levels.len() - 1;
    assert!(level >= 2);
    q.flip_sign(level, 0, 0);
    assert!(compare_q_p(&q, res.complex()).is_err());
}

#[test]
fn facet_signs_alternate() {
    let sigma = 0b1011u64;
    assert_eq!(facet_sign(sigma, 0), -1);
    assert_eq!(facet_sign(sigma, 1), 1);
    assert_eq!(facet_sign(sigma, 3), -1);
}
