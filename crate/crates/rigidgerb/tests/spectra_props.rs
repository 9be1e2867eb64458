use proptest::prelude::*;
use rigidgerb::spectra::{center, central_character, character_table, quaternion_generators, Mat2, MatrixGroup};
use rigidgerb::QZ;

/// Generator families with finite closures.
fn families() -> Vec<Vec<Mat2>> {
    let [a, b] = quaternion_generators();
    let minus = Mat2::identity().neg();
    vec![
        vec![a, b, minus],
        vec![
            Mat2::from_ints([(0, 0), (-1, 0), (1, 0), (-1, 0)]),
            Mat2::from_ints([(0, 0), (1, 0), (1, 0), (0, 0)]),
        ],
        vec![Mat2::from_ints([(0, 1), (0, 0), (0, 0), (1, 0)]), minus, Mat2::from_ints([(-1, 0), (0, 0), (0, 0), (1, 0)])],
        vec![a, Mat2::from_ints([(0, 0), (1, 0), (-1, 0), (0, 0)])],
    ]
}

fn generator_sets() -> impl Strategy<Value = Vec<Mat2>> {
    proptest::sample::select(families()).prop_flat_map(|f| {
        let n = f.len();
        proptest::sample::subsequence(f, 1..=n).prop_shuffle()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_ignores_generator_order(gens in generator_sets()) {
        let g = MatrixGroup::generate(&gens, 200, false).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        rev.push(gens[0]);
        let h = MatrixGroup::generate(&rev, 200, false).unwrap();
        prop_assert!(g.same_elements(&h));
    }

    #[test]
    fn tables_are_orthogonal(gens in generator_sets()) {
        let g = MatrixGroup::generate(&gens, 200, false).unwrap();
        if let Ok(t) = character_table(g.group()) {
            let rep = t.verify();
            prop_assert!(rep.passed(), "{}", rep);
            let sq: i64 = t.degrees().iter().map(|d| d * d).sum();
            prop_assert_eq!(sq as usize, g.order());
        }
    }

    #[test]
    fn central_characters_are_multiplicative(gens in generator_sets()) {
        let m = MatrixGroup::generate(&gens, 200, false).unwrap();
        let g = m.group();
        if let Ok(t) = character_table(g) {
            let z = center(g);
            for chi in 0..t.degrees().len() {
                for &a in &z {
                    for &b in &z {
                        let w = |x| central_character(&t, g, chi, x).unwrap();
                        prop_assert_eq!(w(g.mul(a, b)), w(a) + w(b));
                    }
                }
                prop_assert_eq!(central_character(&t, g, chi, g.identity()).unwrap(), QZ::zero());
            }
        }
    }
}

#[test]
fn quaternion_identification() {
    let q = MatrixGroup::generate(&quaternion_generators(), 20, false).unwrap();
    let g = q.group();
    assert!(!g.is_abelian());
    assert_eq!(g.elements().filter(|&x| g.element_order(x) == 2).count(), 1);
}
