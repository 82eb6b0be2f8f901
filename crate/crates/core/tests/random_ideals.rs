//! Property tests on Borel closures of arbitrary small seed sets.

use proptest::prelude::*;

use bpol_core::borel::{borel_closure_in, is_borel_fixed};
use bpol_core::homology::{betti_oracle, certify_resolution};
use bpol_core::io::{complex_from_json, complex_to_json, ideal_to_text, parse_ideal};
use bpol_core::linalg::Field;
use bpol_core::morse::Morse;
use bpol_core::resolution::Resolution;
use bpol_core::{Monomial, RingSpec, Var};

fn seeds() -> impl Strategy<Value = (u32, Vec<Monomial>)> {
    (1u32..=4).prop_flat_map(|n| {
        let mono = proptest::collection::vec(1..=n, 1..=4)
            .prop_map(|idx| Monomial::from_pairs(idx.into_iter().map(|i| (Var::Single(i), 1))));
        (Just(n), proptest::collection::vec(mono, 1..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closures_resolve((n, gens) in seeds()) {
        let i = borel_closure_in(RingSpec::single(n), &gens).unwrap();
        prop_assert!(is_borel_fixed(i.ideal()));
        prop_assert!(gens.iter().all(|g| i.contains(g)));
        let res = Resolution::build(&i).unwrap();
        let report = certify_resolution(res.complex(), res.bpol(), Field::default());
        prop_assert!(report.is_minimal_resolution(), "{}", report.summary());
        prop_assert_eq!(res.betti_table(), betti_oracle(res.bpol(), Field::default()).unwrap());
        if i.gens().len() <= 12 {
            let morse = Morse::new(&res, 12).unwrap();
            let r = morse.verify().unwrap();
            prop_assert!(r.all_ok(), "{}", r.render());
        }
    }

    #[test]
    fn documents_round_trip((n, gens) in seeds()) {
        let i = borel_closure_in(RingSpec::single(n), &gens).unwrap();
        let parsed = parse_ideal(&ideal_to_text(i.ideal())).unwrap();
        prop_assert_eq!(parsed.gens(), i.gens());
        let c = Resolution::build(&i).unwrap().into_complex();
        prop_assert_eq!(complex_from_json(&complex_to_json(&c, Default::default())).unwrap(), c);
    }
}
