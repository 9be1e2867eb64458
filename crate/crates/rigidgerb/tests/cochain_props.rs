use proptest::prelude::*;
use rand::Rng;
use rigidgerb::battery::{leibniz_battery, leibniz_surjections, random_leibniz_instance, rng};
use rigidgerb::cochain::{leibniz_check, unbalanced_cup, GroupSurjection, LevelCochain, ThetaLattice};
use rigidgerb::{FiniteGroup, QZ};

fn surjection() -> impl Strategy<Value = GroupSurjection> {
    proptest::sample::select(leibniz_surjections())
}

fn add_vecs(a: &[QZ], b: &[QZ]) -> Vec<QZ> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_rule(s in surjection(), seed in any::<u64>()) {
        let inst = random_leibniz_instance(&mut rng(seed), &s);
        let o = leibniz_check(&inst.surjection, &inst.coefficients, &inst.cochain, &inst.lattice, &inst.lambda).unwrap();
        prop_assert!(o.holds);
    }

    #[test]
    fn cup_is_biadditive(s in surjection(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_leibniz_instance(&mut r, &s);
        let c = &a.coefficients;
        let (i, j) = (a.cochain.degree(), a.cochain.level());
        let other: Vec<QZ> = a.cochain.values().iter().map(|_| QZ::new(r.gen_range(0..12), 12)).collect();
        let f2 = LevelCochain::new(&s, i, j, other).unwrap();
        let lam2: Vec<i64> = a.lambda.iter().map(|_| r.gen_range(-3..=3)).collect();
        let cup = |f: &LevelCochain<QZ>, l: &[i64]| unbalanced_cup(&s, c, f, &a.lattice, l).unwrap();

        let left = cup(&a.cochain.add(c, &f2), &a.lambda);
        let (x, y) = (cup(&a.cochain, &a.lambda), cup(&f2, &a.lambda));
        for k in 0..left.values().len() {
            prop_assert_eq!(&left.values()[k], &add_vecs(&x.values()[k], &y.values()[k]));
        }
        let sum: Vec<i64> = a.lambda.iter().zip(&lam2).map(|(p, q)| p + q).collect();
        let right = cup(&a.cochain, &sum);
        let z = cup(&a.cochain, &lam2);
        for k in 0..right.values().len() {
            prop_assert_eq!(&right.values()[k], &add_vecs(&x.values()[k], &z.values()[k]));
        }
        prop_assert_eq!(left.degree(), i - 1);
        prop_assert_eq!(left.level(), j - 1);
        prop_assert!(LevelCochain::new(&s, i - 1, j - 1, left.values().to_vec()).is_ok());
    }

    /// With `Δ = Θ` the unbalanced cup is the classical cup with a (-1)-cochain:
    /// `(f ⊔ λ)(g) = Σ_a f(g, a) ⊗ (g_1⋯g_k a) λ`.
    #[test]
    fn classical_cup_when_balanced(k in 1usize..=4, i in 1usize..=3, seed in any::<u64>()) {
        let theta = FiniteGroup::cyclic(k);
        let s = GroupSurjection::identity(theta.clone());
        let mut r = rng(seed);
        let lat = if k % 2 == 0 {
            let sign: Vec<_> = theta.elements().map(|g| rigidgerb::IntMatrix::from_rows(&[vec![if g % 2 == 1 { -1 } else { 1 }]])).collect();
            ThetaLattice::new(&theta, sign).unwrap()
        } else {
            ThetaLattice::trivial(&theta, 1)
        };
        let units = rigidgerb::cochain::RootsOfUnity::trivial(k);
        let f = LevelCochain::from_fn(&s, i, i, |_| QZ::zero()).unwrap();
        let values: Vec<QZ> = f.values().iter().map(|_| QZ::new(r.gen_range(0..6), 6)).collect();
        let f = LevelCochain::new(&s, i, i, values).unwrap();
        let lambda = vec![r.gen_range(-4..=4)];
        let cup = unbalanced_cup(&s, &units, &f, &lat, &lambda).unwrap();
        for idx in 0..theta.tuple_count(i - 1) {
            let g = theta.tuple_of(idx, i - 1);
            let mut expect = QZ::zero();
            for a in theta.elements() {
                let mut full = g.clone();
                full.push(a);
                let mu = lat.act(theta.mul(theta.product_of(&g), a), &lambda);
                expect = expect + f.eval(&s, &full).mul_int(mu[0]);
            }
            prop_assert_eq!(cup.eval(&s, &g), vec![expect]);
        }
    }
}

#[test]
fn two_hundred_instances() {
    assert!(leibniz_battery(42, 200).passed());
}
