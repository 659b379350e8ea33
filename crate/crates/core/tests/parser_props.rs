//! Property tests for the spec grammar and the element indexing.

use ksl_core::ring::{parse_ring_spec, GaloisSpec, Ring, RingSpec};
use proptest::prelude::*;

fn leaf_spec() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        (2u64..=32).prop_map(|n| RingSpec::zmod(n).unwrap()),
        prop_oneof![
            Just((2u64, 1u32)),
            Just((2, 2)),
            Just((2, 3)),
            Just((3, 1)),
            Just((3, 2)),
            Just((5, 1)),
            Just((7, 1)),
        ]
        .prop_map(|(p, k)| RingSpec::Galois(GaloisSpec::new(p, k).unwrap())),
        prop_oneof![Just((1u32, 2u64)), Just((1, 3)), Just((2, 2)), Just((2, 3))]
            .prop_map(|(dim, q)| {
                let (p, k) = ksl_core::ring::poly::prime_power(q).unwrap();
                RingSpec::matrix(dim, GaloisSpec::new(p, k).unwrap()).unwrap()
            }),
    ]
}

fn spec_strategy() -> impl Strategy<Value = RingSpec> {
    prop::collection::vec(leaf_spec(), 1..4)
        .prop_map(|fs| RingSpec::product(fs).unwrap())
        .prop_filter("size under guard", |s| s.size().is_some_and(|n| n <= 4096))
}

proptest! {
    #[test]
    fn display_parse_roundtrip(spec in spec_strategy()) {
        let printed = spec.to_string();
        let reparsed = parse_ring_spec(&printed).unwrap();
        prop_assert_eq!(reparsed, spec);
    }

    #[test]
    fn indexing_is_bijective(spec in spec_strategy()) {
        let ring = Ring::new(spec).unwrap();
        let step = (ring.size() / 64).max(1);
        for i in (0..ring.size()).step_by(step as usize) {
            let elem = ring.decode(i);
            prop_assert_eq!(ring.encode(&elem.components).unwrap(), i);
        }
    }

    #[test]
    fn sampled_ring_axioms(spec in spec_strategy(), seed in 0u64..1 << 16) {
        let ring = Ring::new(spec).unwrap();
        let n = ring.size();
        let a = seed % n;
        let b = (seed / 7) % n;
        let c = (seed / 49) % n;
        prop_assert_eq!(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c)));
        prop_assert_eq!(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c)));
        prop_assert_eq!(ring.add(a, ring.neg(a)), 0);
        prop_assert_eq!(ring.mul(a, ring.one()), a);
        prop_assert_eq!(ring.mul(ring.one(), a), a);
    }
}
