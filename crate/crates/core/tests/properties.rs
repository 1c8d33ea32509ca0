mod common;

use hyp2mzv::basetable::BaseTable;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rewrite_steps_preserve_value(seed in any::<u64>()) {
        let s = common::random_reducible(&mut seeded(seed));
        let r = common::check_rewrites(&s, &BaseTable::builtin());
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn telescoping_measure_drops(seed in any::<u64>()) {
        let s = common::random_reducible(&mut seeded(seed));
        let r = common::check_measure(&s, &BaseTable::builtin());
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn text_roundtrips(seed in any::<u64>()) {
        let r = common::check_roundtrips(&mut seeded(seed));
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let r = common::check_ring(&mut seeded(seed));
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

#[test]
fn rewrites_are_actually_exercised() {
    let table = BaseTable::builtin();
    let mut rng = common::rng(8);
    let (mut values, mut measures) = (0, 0);
    for _ in 0..40 {
        let s = common::random_reducible(&mut rng);
        values += common::check_rewrites(&s, &table).unwrap();
        measures += common::check_measure(&s, &table).unwrap();
    }
    assert!(values > 40 && measures > 20, "{values} value checks, {measures} measure checks");
}
