use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use rigidgerb::battery::{random_finite_module, real_torus_battery, rng, torus_battery, SmallGroup};
use rigidgerb::gerb::LevelDatum;
use rigidgerb::realgerb::{RootOfUnity, StrongRealForm};
use rigidgerb::rigidcoh::ReductiveDatum;
use rigidgerb::spectra::{quaternion_generators, GaussianScalar, Mat2};
use rigidgerb::{FiniteGroup, QZ};
use rigidgerb_cli::commands;
use rigidgerb_cli::input::{
    format_mat2, format_root, parse_mat2, parse_root, GammaModuleDoc, InputDocument, LevelDoc, MatrixGroupDoc,
    ReductiveDoc, StrongFormDoc, TorusSpec,
};
use rigidgerb_cli::output::Document;

fn reparse(doc: &InputDocument) -> InputDocument {
    let text = doc.to_toml();
    InputDocument::parse(&text).unwrap_or_else(|e| panic!("{}\n{}", e, text))
}

#[test]
fn example_documents_reparse() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/inputs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let doc = InputDocument::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(reparse(&doc), doc, "{}", path.display());
        count += 1;
    }
    assert!(count >= 10);
}

#[test]
fn named_data_reparse() {
    for rd in [ReductiveDatum::sl2_real(), ReductiveDatum::pgl2_real(), ReductiveDatum::a1xa1_swap()] {
        let doc = InputDocument::Reductive(ReductiveDoc::from_datum(&rd));
        let InputDocument::Reductive(back) = reparse(&doc) else { panic!("kind changed") };
        assert_eq!(back.build().unwrap(), rd);
    }
    for form in [StrongRealForm::split(), StrongRealForm::compact()] {
        let doc = InputDocument::StrongForm(StrongFormDoc::from_sl2(&form, Some(4)));
        assert_eq!(reparse(&doc), doc);
    }
    let gens = quaternion_generators();
    let doc = InputDocument::MatrixGroup(MatrixGroupDoc::from_generators(&gens, 64, false));
    let InputDocument::MatrixGroup(back) = reparse(&doc) else { panic!("kind changed") };
    assert_eq!(back.build().unwrap().order(), 8);
    for g in [FiniteGroup::s3(), FiniteGroup::klein(), FiniteGroup::cyclic(6)] {
        let level = LevelDatum::trivial_action(g, 6);
        let doc = InputDocument::Level(LevelDoc::from_level(&level));
        let InputDocument::Level(back) = reparse(&doc) else { panic!("kind changed") };
        assert_eq!(back.build().unwrap(), level);
    }
    assert_eq!(
        LevelDoc::from_level(&LevelDatum::real(8)).build().unwrap(),
        LevelDatum::real(8)
    );
}

#[test]
fn report_document_reparses() {
    let reports = commands::sl2demo(None, 4).unwrap();
    let doc = Document::new(String::from("sl2demo --level 4"), Vec::new(), &reports);
    assert_eq!(Document::from_machine(&doc.to_machine()).unwrap(), doc);
}

fn gaussian() -> impl Strategy<Value = GaussianScalar> {
    (-20i64..20, 1i64..12, -20i64..20, 1i64..12).prop_map(|(a, b, c, d)| {
        GaussianScalar::new(num_rational::Ratio::new(a, b), num_rational::Ratio::new(c, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tori_reparse(seed in any::<u64>()) {
        for t in torus_battery(seed, 2).into_iter().chain(real_torus_battery(seed, 1)) {
            let doc = InputDocument::Torus(TorusSpec::from_torus(&t));
            let InputDocument::Torus(back) = reparse(&doc) else { panic!("kind changed") };
            prop_assert_eq!(back.build().unwrap(), t);
        }
    }

    #[test]
    fn modules_reparse(seed in any::<u64>(), which in 0usize..8) {
        let g = SmallGroup::all()[which];
        let m = random_finite_module(&mut rng(seed), g, 36);
        let doc = InputDocument::GammaModule(GammaModuleDoc::from_module(&m));
        let InputDocument::GammaModule(back) = reparse(&doc) else { panic!("kind changed") };
        prop_assert_eq!(back.build().unwrap(), m);
    }

    #[test]
    fn matrices_reparse(e in prop::array::uniform4(gaussian())) {
        let m = Mat2::new(e[0], e[1], e[2], e[3]);
        prop_assert_eq!(parse_mat2(&format_mat2(&m)).unwrap(), m);
    }

    #[test]
    fn roots_reparse(a in -50i64..50, b in 1i64..40) {
        let r = RootOfUnity::new(QZ::new(a, b));
        prop_assert_eq!(parse_root(&format_root(&r)).unwrap(), r);
    }
}
