//! Property tests for invariants that hold for every seed and input.

use nalgebra::DVector;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use catransport::associated::{normalize_class, Representation};
use catransport::bundle::{right_translate, PathConnection};
use catransport::checks::{run_checks, write_report, Grid};
use catransport::crossed::{CrossedModule, Sampling};
use catransport::finite::{crossed_roundtrip, ReducedWord};
use catransport::fixtures;
use catransport::group::{CayleyTable, GroupModel};
use catransport::path::{compose_paths, erase_backtrack, insert_backtrack, reverse_path, BundlePoint};
use catransport::scenario::scenario;

fn letters() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..12)
}

fn word(l: &[i32]) -> ReducedWord {
    ReducedWord::new(l).expect("no zero letters")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reduced_words_form_a_group(a in letters(), b in letters(), c in letters()) {
        let (a, b, c) = (word(&a), word(&b), word(&c));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_empty());
        prop_assert!(a.letters().windows(2).all(|w| w[0] != -w[1]));
        prop_assert_eq!(ReducedWord::identity().compose(&a), a.clone());
    }

    #[test]
    fn lie_crossed_modules_satisfy_their_axioms(seed in any::<u64>()) {
        let samples = Sampling::Random { samples: 10, seed };
        for cm in [CrossedModule::conjugation(GroupModel::so(3).unwrap()), CrossedModule::abelian(3).unwrap()] {
            prop_assert!(cm.check_peiffer(samples).unwrap() < 1e-10);
            prop_assert!(cm.check_exchange_law(samples).unwrap() < 1e-10);
            prop_assert!(cm.check_compose_associativity(samples).unwrap() < 1e-10);
        }
    }

    #[test]
    fn so3_exp_inverts_log_near_identity(seed in any::<u64>(), scale in 0.01f64..1.0) {
        let so3 = GroupModel::so(3).unwrap();
        let x = so3.sample_algebra(&mut ChaCha8Rng::seed_from_u64(seed), scale);
        let back = so3.log_near_identity(&so3.exp(&x).unwrap()).unwrap();
        prop_assert!(back.distance(&x) < 1e-12);
    }

    #[test]
    fn horizontal_lifts_are_right_equivariant(seed in any::<u64>(), n in 8usize..60) {
        let conn = PathConnection::from_scenario(&scenario("so3_conj").unwrap());
        let g = conn.g();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g0, h) = (g.sample(&mut rng), g.sample(&mut rng));
        let gamma = fixtures::curve(n).unwrap();
        let moved = right_translate(g, &conn.lift_from(&gamma, &g0).unwrap(), &h).unwrap();
        let direct = conn.lift_from(&gamma, &g.multiply(&g0, &h).unwrap()).unwrap();
        prop_assert!(moved.max_diff(&direct) < 1e-13);
    }

    #[test]
    fn spur_insertion_then_erasure_is_the_identity(n in 8usize..40, at_frac in 0.0f64..1.0, cells in 1usize..8) {
        let gamma = fixtures::curve(n).unwrap();
        let at = ((n as f64) * at_frac) as usize;
        let spur = fixtures::spur(&gamma.points()[at], cells, gamma.step()).unwrap();
        let (with, window) = insert_backtrack(&gamma, at, &spur).unwrap();
        prop_assert_eq!(with.cells(), n + 2 * cells);
        let erased = erase_backtrack(&with, window).unwrap();
        prop_assert_eq!(erased.points(), gamma.points());
    }

    #[test]
    fn reversing_a_composite_composes_the_reverses(n in 8usize..40) {
        let (a, b) = fixtures::split_curve(n).unwrap();
        let ab = compose_paths(&a, &b).unwrap();
        let rev = compose_paths(&reverse_path(&b), &reverse_path(&a)).unwrap();
        let reversed = reverse_path(&ab);
        prop_assert_eq!(reversed.points(), rev.points());
    }

    #[test]
    fn associated_classes_ignore_the_representative(seed in any::<u64>(), v in prop::array::uniform2(-1.0f64..1.0)) {
        let so2 = GroupModel::so(2).unwrap();
        let rep = Representation::defining(so2.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, a) = (so2.sample(&mut rng), so2.sample(&mut rng));
        let v = DVector::from_vec(v.to_vec());
        let p = BundlePoint { x: DVector::from_vec(vec![0.3, -0.2]), g };
        let pa = BundlePoint { x: p.x.clone(), g: so2.multiply(&p.g, &a).unwrap() };
        let va = rep.rho_obj(&so2.inverse(&a).unwrap(), &v).unwrap();
        let d = normalize_class(&p, &v, &rep).unwrap().distance(&normalize_class(&pa, &va, &rep).unwrap());
        prop_assert!(d < 1e-14);
    }

    #[test]
    fn grids_parse_what_they_print(n in 8usize..1000, m in 8usize..1000) {
        prop_assert_eq!(Grid::parse(&format!("{n}x{m}")).unwrap(), Grid::new(n, m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cyclic_conjugation_modules_round_trip(n in 2usize..8) {
        let cm = CrossedModule::conjugation(GroupModel::finite("Zn", CayleyTable::cyclic(n)));
        prop_assert!(crossed_roundtrip(&cm).unwrap().passed());
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let render = || {
            let rows = run_checks("so3_conj", Grid::new(16, 8).unwrap(), seed, &["peiffer", "backtrack", "functorial", "phi"]).unwrap();
            let mut buf = Vec::new();
            write_report(&rows, &mut buf).unwrap();
            buf
        };
        prop_assert_eq!(render(), render());
    }
}
