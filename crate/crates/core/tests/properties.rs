use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use kanex::certify::bundle::example_bundles;
use kanex::certify::{cayley_probe, load, save, ProbeConfig};
use kanex::encat::examples::group_algebra;
use kanex::groups::{FiniteGroup, FiniteMonoid};
use kanex::kancoend::coyoneda_expand;
use kanex::rng::task_rng;
use kanex::vbase::field::parse_rational;
use kanex::vbase::matrix::{kernel, rank};
use kanex::vbase::random::{random_epi, random_map, random_mono};
use kanex::vbase::{classify_map, is_iso, BaseCtx, Field, VObj};

fn base() -> impl Strategy<Value = BaseCtx> {
    prop_oneof![
        Just(BaseCtx::FinSet),
        Just(BaseCtx::FinVect(Field::Rationals)),
        Just(BaseCtx::FinVect(Field::prime(2).unwrap())),
        Just(BaseCtx::FinVect(Field::prime(5).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curry_uncurry_inverse(v in base(), z in 0usize..4, x in 0usize..4, y in 0usize..4, seed in any::<u64>()) {
        let mut rng = task_rng(seed, "curry");
        let (z, x, y) = (VObj(z), VObj(x), VObj(y));
        if let Ok(f) = random_map(v, v.tensor_obj(z, x), y, &mut rng) {
            let g = v.curry(&f, z, x).unwrap();
            prop_assert_eq!(v.uncurry(&g, x, y).unwrap(), f);
        }
    }

    #[test]
    fn tensor_is_functorial(v in base(), a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3, seed in any::<u64>()) {
        let mut rng = task_rng(seed, "tensor");
        let (a, b, c, d) = (VObj(a), VObj(b), VObj(c), VObj(d));
        let maps = (random_map(v, a, b, &mut rng), random_map(v, b, c, &mut rng), random_map(v, d, d, &mut rng));
        if let (Ok(f), Ok(g), Ok(h)) = maps {
            let lhs = v.tensor(&v.compose(&g, &f).unwrap(), &h).unwrap();
            let rhs = v.compose(&v.tensor(&g, &v.identity(d)).unwrap(), &v.tensor(&f, &h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn regular_mono_witnesses_verify(v in base(), d in 0usize..5, extra in 0usize..3, seed in any::<u64>()) {
        let mut rng = task_rng(seed, "mono");
        let m = random_mono(v, VObj(d), VObj(d + extra), &mut rng).unwrap();
        let class = classify_map(v, &m).unwrap();
        prop_assert!(class.mono && class.regular_mono);
        prop_assert!(class.verify(v, &m).unwrap());
    }

    #[test]
    fn epis_classified(v in base(), c in 1usize..5, extra in 0usize..3, seed in any::<u64>()) {
        let mut rng = task_rng(seed, "epi");
        let e = random_epi(v, VObj(c + extra), VObj(c), &mut rng).unwrap();
        let class = classify_map(v, &e).unwrap();
        prop_assert!(class.epi);
        prop_assert_eq!(class.iso, extra == 0);
        prop_assert_eq!(is_iso(v, &e), extra == 0);
    }

    #[test]
    fn rank_nullity(p in prop_oneof![Just(0u64), Just(2), Just(3), Just(7)], r in 0usize..5, c in 0usize..5, seed in any::<u64>()) {
        let field = if p == 0 { Field::Rationals } else { Field::prime(p).unwrap() };
        let v = BaseCtx::FinVect(field);
        let m = random_map(v, VObj(c), VObj(r), &mut task_rng(seed, "rank")).unwrap();
        let mat = m.matrix().unwrap();
        prop_assert_eq!(rank(field, mat) + kernel(field, mat).ncols(), c);
    }

    #[test]
    fn rational_text_round_trip(n in any::<i64>(), d in 1i64..1_000_000) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        let text = format!("{}/{}", r.numer(), r.denom());
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
    }

    #[test]
    fn zero_denominator_rejected(n in any::<i64>()) {
        let text = format!("{}/0", n);
        prop_assert!(parse_rational(&text).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn coyoneda_is_inverse_on_battery(order in 1usize..4, seed in any::<u64>()) {
        let a = Arc::new(group_algebra(&FiniteGroup::cyclic(order), Field::Rationals).unwrap());
        let cfg = ProbeConfig { seed, ..ProbeConfig::default() };
        let v = a.ctx();
        for (_, f) in cfg.battery(&a).unwrap() {
            let c = coyoneda_expand(&f, 0).unwrap();
            prop_assert_eq!(v.compose(&c.from_coend, &c.to_coend).unwrap(), v.identity(f.val(0)));
        }
    }

    #[test]
    fn reports_depend_only_on_seed(seed in any::<u64>()) {
        let cfg = ProbeConfig { seed, samples: 2, min_probes: 20, ..ProbeConfig::default() };
        let m = FiniteMonoid::cyclic(2);
        prop_assert_eq!(cayley_probe(&m, &cfg).unwrap().to_json(), cayley_probe(&m, &cfg).unwrap().to_json());
    }
}

#[test]
fn bundles_survive_disk_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, b) in example_bundles().unwrap() {
        let path = dir.path().join(format!("{name}.json"));
        save(&b, &path).unwrap();
        assert_eq!(load(&path).unwrap().to_json(), b.to_json(), "{name}");
    }
}
