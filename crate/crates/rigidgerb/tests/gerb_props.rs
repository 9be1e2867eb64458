use proptest::prelude::*;
use rigidgerb::gerb::{build_u, pairing_is_perfect, transition_p, LevelDatum};
use rigidgerb::FiniteGroup;

fn level(k: usize, n: i64, real: bool) -> LevelDatum {
    if real && k == 2 {
        LevelDatum::real(n)
    } else {
        LevelDatum::trivial_action(FiniteGroup::cyclic(k), n)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_of_u(k in 1usize..=6, n in 1i64..=12, real in any::<bool>()) {
        let u = build_u(&level(k, n, real));
        prop_assert_eq!(u.order(), (n as u128).pow(k as u32 - 1));
    }

    #[test]
    fn characters_pair_perfectly(k in 1usize..=4, n in 1i64..=8, real in any::<bool>()) {
        prop_assume!((n as u128).pow(k as u32 - 1) <= 64);
        prop_assert!(pairing_is_perfect(&level(k, n, real)));
    }

    #[test]
    fn transitions_compose(k in 1usize..=3, n in 1i64..=4, a in 1i64..=3, b in 1i64..=3, real in any::<bool>()) {
        let (m, l) = (n * a, n * a * b);
        let id: Vec<usize> = (0..k).collect();
        let lm = transition_p(&level(k, l, real), &level(k, m, real), &id).unwrap();
        let mn = transition_p(&level(k, m, real), &level(k, n, real), &id).unwrap();
        let ln = transition_p(&level(k, l, real), &level(k, n, real), &id).unwrap();
        prop_assert!(lm.is_surjective() && mn.is_surjective() && ln.is_surjective());
        prop_assert!(lm.hom().then(&mn.hom()).unwrap().equals(&ln.hom()));
    }
}

#[test]
fn transition_along_a_quotient_of_groups() {
    let fine = LevelDatum::trivial_action(FiniteGroup::cyclic(4), 4);
    let coarse = LevelDatum::trivial_action(FiniteGroup::cyclic(2), 2);
    let t = transition_p(&fine, &coarse, &[0, 1, 0, 1]).unwrap();
    assert!(t.is_surjective());
    assert!(t.res_surjective());
}
