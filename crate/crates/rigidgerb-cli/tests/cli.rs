use std::path::PathBuf;
use std::process::{Command, Output};

use rigidgerb_cli::output::Document;

fn inputs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/inputs")
}

fn input(name: &str) -> String {
    inputs().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidgerb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn machine(args: &[&str]) -> (Document, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let doc = Document::from_machine(&text).unwrap_or_else(|e| panic!("{}: {}", e, text));
    (doc, out.status.code().expect("exit code"))
}

fn value<'a>(doc: &'a Document, name: &str) -> &'a str {
    doc.sections
        .iter()
        .flat_map(|s| &s.values)
        .find(|v| v.name == name)
        .map(|v| v.value.as_str())
        .unwrap_or_else(|| panic!("no value {}", name))
}

#[test]
fn sign_module_minus_one() {
    let (doc, code) = machine(&["tate", "--input", &input("sign_module.toml"), "--degree", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "Ĥ^-1"), "Z/2");
}

#[test]
fn trivial_and_regular_modules() {
    let (doc, code) = machine(&["tate", "--input", &input("trivial_z.toml")]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "Ĥ^-1"), "0");
    let (doc, code) = machine(&["tate", "--input", &input("regular_c3.toml"), "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "H^2"), "0");
}

#[test]
fn yplustor_examples() {
    let (doc, code) = machine(&["yplustor", "--input", &input("split_torus.toml")]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "Ȳ_+,tor"), "0");
    for name in ["norm_one.toml", "norm_one_center.toml"] {
        let (doc, code) = machine(&["yplustor", "--input", &input(name), "--mode", "fixed"]);
        assert_eq!(code, 0);
        assert_eq!(value(&doc, "Ȳ_+,tor"), "Z/4");
    }
    let (doc, code) = machine(&["yplustor", "--input", &input("sl2.toml")]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "Ȳ_+,tor"), "Z/2");
    assert_eq!(value(&doc, "pairing [1]"), "[0, 1/2]");
}

#[test]
fn gerb_default_and_custom_group() {
    let (doc, code) = machine(&["gerb"]);
    assert_eq!(code, 0);
    assert_eq!(doc.command, "gerb --n 2,3,4,5,6,7,8,9,10,11,12");
    for n in 2..=12 {
        let want = if n % 2 == 0 { "Z/2" } else { "0" };
        assert_eq!(value(&doc, &format!("H0(Γ, X*(u_{}))", n)), want);
        let check = doc.sections[0]
            .checks
            .iter()
            .find(|c| c.name.starts_with(&format!("H2(u_{}) =", n)))
            .expect("H2 check");
        assert_eq!(check.detail, want);
    }
    let (doc, code) = machine(&["gerb", "--input", &input("c3.toml"), "--level", "6"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "H0(Γ, X*(u_6))"), "Z/3");
}

#[test]
fn cocycle_and_strong_forms() {
    let (doc, code) = machine(&["cocycle", "--input", &input("norm_one.toml"), "--level", "4"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "z(σ)"), "[1/4]");
    let (doc, code) = machine(&["strongform", "--input", &input("compact_form.toml")]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "class"), "same restriction as the compact form");
    let (_, code) = machine(&["strongform", "--input", &input("torus_form.toml")]);
    assert_eq!(code, 0);
}

#[test]
fn sl2demo_runs() {
    let (doc, code) = machine(&["sl2demo"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "packet size"), "5");
    let (doc, code) = machine(&["sl2demo", "--input", &input("quaternion_mod_center.toml")]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "order"), "4");
}

#[test]
fn verify_suites() {
    let (doc, code) = machine(&["verify", "all", "--seed", "0"]);
    assert_eq!(code, 0, "{:?}", doc.summary);
    assert_eq!(doc.sections.len(), 7);
    let (doc, code) = machine(&["verify", "cochain", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc.sections.len(), 1);
    // The directory holds the wreath product, whose character table is out of reach.
    let out = run(&["verify", "--input", &inputs().display().to_string()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn machine_output_is_deterministic() {
    for args in [
        vec!["verify", "all", "--seed", "7", "--format", "machine"],
        vec!["yplustor", "--input", "IN", "--format", "machine"],
    ] {
        let sl2 = input("sl2.toml");
        let args: Vec<&str> = args.iter().map(|a| if *a == "IN" { sl2.as_str() } else { a }).collect();
        let a = run(&args).stdout;
        let b = run(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("rigidgerb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let unknown = dir.join("unknown.toml");
    std::fs::write(&unknown, "kind = \"group\"\nbogus = 1\n[group]\ncyclic = 2\n").unwrap();
    assert_eq!(run(&["gerb", "--input", &unknown.display().to_string()]).status.code(), Some(2));
    let wrong_kind = run(&["tate", "--input", &input("sl2.toml")]);
    assert_eq!(wrong_kind.status.code(), Some(2));
    let bad_action = dir.join("bad_action.toml");
    std::fs::write(
        &bad_action,
        "kind = \"gamma-module\"\ninvariants = [0]\n[group]\ncyclic = 3\n[[actions]]\nelement = 1\nmatrix = { rows = 1, cols = 1, entries = [-1] }\n",
    )
    .unwrap();
    assert_eq!(run(&["tate", "--input", &bad_action.display().to_string()]).status.code(), Some(2));
    assert_eq!(run(&["sl2demo", "--input", &input("wreath.toml")]).status.code(), Some(3));
    assert_eq!(run(&["tate", "--input", &input("sign_module.toml"), "--degree", "3"]).status.code(), Some(3));
    // A torus element whose square is not central is a failed check, not a schema error.
    let doctored = dir.join("doctored.toml");
    let text = std::fs::read_to_string(inputs().join("torus_form.toml")).unwrap().replace("1/4", "1/8");
    std::fs::write(&doctored, text).unwrap();
    let (doc, code) = machine(&["strongform", "--input", &doctored.display().to_string()]);
    assert_eq!(code, 1);
    assert_eq!(doc.status, "fail");
    std::fs::remove_dir_all(&dir).unwrap();
}
