use proptest::prelude::*;
use rigidgerb::battery::{random_norm_kernel_element, real_torus_battery, rng};
use rigidgerb::realgerb::{
    alpha_transition, boundary_square_check, cocycle_from_strong_form, strong_form_from_cocycle, z_lambda, RealLevel,
    RootOfUnity, StrongRealForm,
};
use rigidgerb::rigidcoh::TorusDatum;
use rigidgerb::QZ;

fn even_level() -> impl Strategy<Value = i64> {
    (1i64..=6).prop_map(|k| 2 * k)
}

fn real_torus() -> impl Strategy<Value = TorusDatum> {
    any::<u64>().prop_map(|s| real_torus_battery(s, 1).remove(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weil_groups_are_groups(n in even_level()) {
        let rep = RealLevel::new(n).unwrap().report();
        prop_assert!(rep.passed(), "{}", rep);
    }

    #[test]
    fn roots_are_compatible(a in -30i64..=30, b in 1i64..=12, n in 1i64..=6, k in 1i64..=4) {
        let x = RootOfUnity::new(QZ::new(a, b));
        let m = n * k;
        prop_assert_eq!(x.root(m).pow(k), x.root(n));
        prop_assert_eq!(x.root(n).pow(n), x);
    }

    #[test]
    fn alpha_transitions(n in even_level(), k in 1i64..=3) {
        let rep = alpha_transition(n * k, n).unwrap().report();
        prop_assert!(rep.passed(), "{}", rep);
    }

    #[test]
    fn z_is_additive(t in real_torus(), seed in any::<u64>(), n in proptest::sample::select(vec![2i64, 4, 8])) {
        let mut r = rng(seed);
        let (a, b) = (random_norm_kernel_element(&mut r, &t), random_norm_kernel_element(&mut r, &t));
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let za = z_lambda(&t, &a, n).unwrap();
        let zb = z_lambda(&t, &b, n).unwrap();
        let zs = z_lambda(&t, &sum, n).unwrap();
        let added = za.add(&zb).unwrap();
        for w in zs.level().w_elements() {
            prop_assert_eq!(zs.value(&w), added.value(&w));
        }
        prop_assert!(za.cocycle_report().passed());
        prop_assert!(boundary_square_check(&t, &a, n).unwrap().passed());
    }

    /// `z_{(σ-1)μ}` is a coboundary for `μ ∈ Y`.
    #[test]
    fn augmentation_is_killed(t in real_torus(), mu in proptest::collection::vec(-3i64..=3, 3), n in proptest::sample::select(vec![2i64, 4])) {
        let mu = t.y_to_ybar(&mu[..t.rank()]);
        let moved = t.rho_bar(1).mul_vec(&mu);
        let lambda: Vec<i64> = moved.iter().zip(&mu).map(|(x, y)| x - y).collect();
        let z = z_lambda(&t, &lambda, n).unwrap();
        prop_assert!(z.find_coboundary(2 * n * t.index()).is_some());
    }
}

#[test]
fn sl2_round_trips() {
    for n in [2, 4, 6, 8] {
        for delta in [StrongRealForm::split(), StrongRealForm::compact()] {
            let z = cocycle_from_strong_form(&delta, n).unwrap();
            assert!(z.cocycle_report().passed());
            assert_eq!(strong_form_from_cocycle(&z).unwrap(), delta);
        }
    }
}
