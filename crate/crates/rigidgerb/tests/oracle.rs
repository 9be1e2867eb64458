mod common;

use common::{brute, shape_of};
use rigidgerb::battery::{random_finite_module, rng, SmallGroup};
use rigidgerb::{FinAb, FiniteGroup, GammaModule};

fn agree(m: &GammaModule) {
    for d in -1..=2 {
        let fast = shape_of(m.cohomology(d).unwrap().group());
        let slow = brute(m, d);
        assert_eq!(fast, slow, "degree {} of {:?}", d, m);
    }
}

#[test]
fn sign_and_trivial_modules() {
    let c2 = FiniteGroup::cyclic(2);
    agree(&GammaModule::character(c2.clone(), 4, &[1, -1]).unwrap());
    agree(&GammaModule::trivial_action(c2, &FinAb::from_invariants(&[2, 4])));
    agree(&GammaModule::regular(FiniteGroup::klein(), 2));
    agree(&GammaModule::regular(FiniteGroup::s3(), 2));
}

#[test]
fn random_modules_agree() {
    let mut r = rng(11);
    for g in SmallGroup::all() {
        for _ in 0..3 {
            agree(&random_finite_module(&mut r, g, 64));
        }
    }
}
