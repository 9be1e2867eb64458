use proptest::prelude::*;
use rigidgerb::battery::{random_torus, rng};
use rigidgerb::gerb::LevelDatum;
use rigidgerb::rigidcoh::{
    morphism_report, pairing_report, y_exact_sequence, y_plus_tor_reductive, y_plus_tor_torus, Mode, ReductiveDatum,
    TorusMorphism,
};
use rigidgerb::IntMatrix;

fn order_k() -> impl Strategy<Value = usize> {
    proptest::sample::select(vec![2usize, 3, 4, 6])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trivial_center_gives_coinvariant_torsion(k in order_k(), seed in any::<u64>()) {
        let t = random_torus(&mut rng(seed), k, 3, 1);
        let s = y_exact_sequence(&t).unwrap();
        prop_assert!(y_plus_tor_torus(&t).group().is_isomorphic(&s.coinvariants_tor));
    }

    #[test]
    fn stabilized_contains_fixed(k in order_k(), seed in any::<u64>()) {
        let rd = ReductiveDatum::from_torus(random_torus(&mut rng(seed), k, 3, 6));
        let fixed = y_plus_tor_reductive(&rd, Mode::Fixed);
        let stab = y_plus_tor_reductive(&rd, Mode::Stabilized);
        for a in fixed.elements() {
            prop_assert!(stab.contains(&fixed.lift(&a)));
        }
        let (fo, so) = (fixed.group().order().unwrap(), stab.group().order().unwrap());
        prop_assert_eq!(so % fo, 0);
        let nb = rd.torus().norm_bar();
        if nb.data().iter().all(|&x| x == 0) {
            prop_assert_eq!(fo, so);
        }
    }

    #[test]
    fn pairing_on_random_tori(k in order_k(), seed in any::<u64>()) {
        let rd = ReductiveDatum::from_torus(random_torus(&mut rng(seed), k, 3, 6));
        let rep = pairing_report(&rd);
        prop_assert!(rep.passed(), "{}", rep);
    }

    #[test]
    fn scalar_morphisms_are_natural(k in order_k(), seed in any::<u64>(), a in 1i64..=3, b in 1i64..=3) {
        let t = random_torus(&mut rng(seed), k, 2, 4);
        let r = t.rank();
        let f = TorusMorphism::new(&t, &t, IntMatrix::identity(r).scale(a)).unwrap();
        let g = TorusMorphism::new(&t, &t, IntMatrix::identity(r).scale(b)).unwrap();
        let fg = f.then(&g).unwrap();
        let level = LevelDatum::trivial_action(t.group().clone(), 2 * t.index());
        for h in [&f, &g, &fg] {
            let rep = morphism_report(h, &level).unwrap();
            prop_assert!(rep.passed(), "{}", rep);
        }
        prop_assert!(fg.on_y_plus_tor().equals(&f.on_y_plus_tor().then(&g.on_y_plus_tor()).unwrap()));
    }
}
