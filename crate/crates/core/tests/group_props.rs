use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpplab::{Group, GroupSpec};

const FAMILIES: [&str; 8] = [
    "cyc(7)",
    "cyc(4)^3",
    "sym(5)",
    "cyc(3) x sym(3)",
    "cyc(2) wr sym(3)",
    "cyc(3)^3 wr sym(2)",
    "tri(3)",
    "(cyc(2) x sym(3)) wr sym(2)",
];

fn groups() -> Vec<Arc<Group>> {
    FAMILIES.iter().map(|s| Group::parse(s).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn group_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in groups() {
            let (a, b, c) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
            prop_assert_eq!(g.op(&g.op(&a, &b), &c), g.op(&a, &g.op(&b, &c)));
            prop_assert_eq!(&g.op(&a, g.identity()), &a);
            prop_assert_eq!(&g.op(g.identity(), &a), &a);
            prop_assert_eq!(&g.op(&a, &g.op_inv(&a)), g.identity());
            prop_assert_eq!(&g.op(&g.op_inv(&a), &a), g.identity());
            prop_assert!(g.contains(&g.op(&a, &b)));
        }
    }

    #[test]
    fn element_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in groups() {
            let a = g.random_element(&mut rng);
            let text = g.format_element(&a);
            prop_assert_eq!(g.parse_element(&text).unwrap(), a);
        }
    }
}

#[test]
fn spec_text_round_trips() {
    for s in FAMILIES {
        let spec = GroupSpec::parse(s).unwrap();
        assert_eq!(GroupSpec::parse(&spec.to_string()).unwrap(), spec, "{s}");
    }
}

#[test]
fn enumeration_matches_order() {
    for s in ["cyc(4)", "cyc(2) wr sym(2)", "sym(4)", "cyc(2) x cyc(3) x sym(3)", "tri(2)"] {
        let g = Group::parse(s).unwrap();
        let els = g.enumerate(10_000).unwrap();
        assert_eq!(els.len() as u64, g.order_u64().unwrap(), "{s}");
        assert!(els.windows(2).all(|w| w[0] < w[1]), "{s} not strictly increasing");
    }
    let w = Group::parse("cyc(2) wr sym(2)").unwrap();
    assert_eq!(w.enumerate(100).unwrap().len(), 8);
    let big = Group::parse("cyc(41)^3 wr sym(2)").unwrap();
    assert_eq!(big.order().to_string(), (68921u64 * 68921 * 2).to_string());
    assert!(big.enumerate(1_000_000).is_err());
}

#[test]
fn parse_errors_carry_positions() {
    match GroupSpec::parse("cyc(3) x foo") {
        Err(tpplab::Error::Parse { pos, .. }) => assert_eq!(pos, 9),
        other => panic!("unexpected {other:?}"),
    }
    assert!(GroupSpec::parse("sym(").is_err());
    assert!(GroupSpec::parse("cyc(0)").is_err());
}
