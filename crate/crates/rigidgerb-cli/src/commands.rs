//! One function per subcommand. Each returns the reports to render; errors
//! found while computing become failed checks, errors in the input abort.

use rigidgerb::gerb::{build_u, invariants_of_u_characters, pairing_is_perfect, real_tower_checks, LevelDatum};
use rigidgerb::lattice::gcd;
use rigidgerb::realgerb::{
    boundary_square_check, classical_comparison, cocycle_from_strong_form, inflation_stability_check,
    sl2_strong_form_report, strong_form_from_cocycle, torus_cocycle_from_strong_form,
    torus_strong_form_from_cocycle, z_lambda, RealRigidCocycle, StrongRealForm, TorusStrongForm,
};
use rigidgerb::rigidcoh::{
    pairing_report, pi0_dual_center, pizza_check, real_image_characterization, tn_pairing, weyl_triviality_check,
    y_exact_sequence_check, y_plus_tor_reductive, Mode, ReductiveDatum, TorusDatum,
};
use rigidgerb::spectra::{
    abelianization, center, central_character, character_table, conjugacy_classes, exponent, sl2_packet_report,
    MatrixGroup, SpectraError,
};
use rigidgerb::{FinAb, FiniteGroup, GammaModule, Report};

use crate::input::{format_root, InputDocument, StrongForm};
use crate::CliError;

pub const DEFAULT_LEVEL: i64 = 4;

fn wrong_kind(command: &str, doc: &InputDocument, expected: &str) -> CliError {
    CliError::Schema(format!("{} expects {}, got a {} document", command, expected, doc.kind()))
}

fn degree_name(d: i32) -> &'static str {
    match d {
        -1 => "Ĥ^-1",
        0 => "Ĥ^0",
        1 => "H^1",
        _ => "H^2",
    }
}

/// Cohomology of a module in the requested degree, or in all of `-1..=2`.
pub fn tate(doc: &InputDocument, degree: Option<i32>) -> Result<Vec<Report>, CliError> {
    let m = match doc {
        InputDocument::GammaModule(d) => d.build()?,
        other => return Err(wrong_kind("tate", other, "a gamma-module")),
    };
    let degrees: Vec<i32> = match degree {
        Some(d) if (-1..=2).contains(&d) => vec![d],
        Some(d) => return Err(CliError::Unsupported(format!("degree {} (supported: -1, 0, 1, 2)", d))),
        None => vec![-1, 0, 1, 2],
    };
    Ok(vec![tate_report(&m, &degrees)])
}

pub fn tate_report(m: &GammaModule, degrees: &[i32]) -> Report {
    let g = m.group();
    let mut r = Report::new(format!("cohomology of a module over a group of order {}", g.order()));
    r.value("module", m.module().describe());
    let mut orders = [None; 4];
    for &d in degrees {
        let h = match m.cohomology(d) {
            Ok(h) => h,
            Err(e) => {
                r.check(format!("{} computed", degree_name(d)), false, e.to_string());
                continue;
            }
        };
        let grp = h.group();
        r.value(degree_name(d), grp.describe());
        orders[(d + 1) as usize] = grp.order();
        let killed = grp.exponent().map_or(false, |e| g.order() as i64 % e == 0);
        r.check(
            format!("|Γ| kills {}", degree_name(d)),
            killed,
            format!(
                "exponent {}, |Γ| = {}",
                grp.exponent().map_or_else(|| String::from("infinite"), |e| e.to_string()),
                g.order()
            ),
        );
    }
    if g.generators().len() == 1 {
        for (a, b) in [(-1, 1), (0, 2)] {
            let name = format!("periodicity {} = {}", degree_name(a), degree_name(b));
            match (orders[(a + 1) as usize], orders[(b + 1) as usize]) {
                (Some(x), Some(y)) => {
                    r.check(name, x == y, format!("{} vs {}", x, y));
                }
                _ => r.skip(name, "needs both degrees"),
            }
        }
    }
    r
}

fn reductive_of(command: &str, doc: &InputDocument) -> Result<ReductiveDatum, CliError> {
    match doc {
        InputDocument::Torus(t) => Ok(ReductiveDatum::from_torus(t.build()?)),
        InputDocument::Reductive(d) => d.build(),
        other => Err(wrong_kind(command, other, "a torus or reductive datum")),
    }
}

/// `Ȳ_{+,tor}`, its exact sequence, the precondition audits and the
/// pairing table against `π_0` of the dual center.
pub fn yplustor(doc: &InputDocument, mode: Mode) -> Result<Vec<Report>, CliError> {
    let rd = reductive_of("yplustor", doc)?;
    Ok(yplustor_reports(&rd, mode))
}

pub fn yplustor_reports(rd: &ReductiveDatum, mode: Mode) -> Vec<Report> {
    let mut out = Vec::new();
    let ypt = y_plus_tor_reductive(rd, mode);
    let center = pi0_dual_center(rd);
    let mut main = Report::new(format!("Ȳ_+,tor ({})", mode.as_str()));
    main.value("Ȳ_+,tor", ypt.group().describe());
    main.value("π0 of the dual center", center.torsion().describe());
    let chars = center.dual().group().canon_elements().unwrap_or_default();
    let mut torsion = true;
    for class in ypt.elements() {
        let row: Vec<String> = chars
            .iter()
            .map(|c| match tn_pairing(&center, &ypt, &class, c) {
                Ok(q) => q.to_string(),
                Err(_) => {
                    torsion = false;
                    String::from("?")
                }
            })
            .collect();
        main.value(format!("pairing {:?}", class), format!("[{}]", row.join(", ")));
    }
    main.check("classes pair with π0 of the dual center", torsion, format!("{} characters", chars.len()));
    out.push(main);
    out.push(y_exact_sequence_check(rd.torus()));
    out.push(weyl_triviality_check(rd));
    if !rd.coroots().is_empty() {
        out.push(pizza_check(rd));
    }
    out.push(pairing_report(rd));
    if rd.torus().group().order() == 2 {
        match real_image_characterization(rd) {
            Ok(r) => out.push(r),
            Err(e) => {
                let mut r = Report::new("image of Ȳ_+,tor in M_tor");
                r.check("computed", false, e.to_string());
                out.push(r);
            }
        }
    }
    out
}

fn invariants_row(r: &mut Report, level: &LevelDatum, expect: Option<i64>) {
    let inv = invariants_of_u_characters(level);
    let n = level.n();
    r.value(format!("H0(Γ, X*(u_{}))", n), inv.describe());
    match expect {
        Some(e) => {
            let ok = inv.order() == Some(e as u128) && inv.torsion_invariants().len() <= 1 && inv.free_rank() == 0;
            r.check(
                format!("H0(Γ, X*(u_{})) = {}", n, FinAb::cyclic(e).describe()),
                ok,
                inv.describe(),
            );
        }
        None => r.skip(format!("H0(Γ, X*(u_{})) formula", n), "the formula is stated for cyclic groups"),
    }
}

/// Without input: the real tower and the invariants table for `C/R`.
/// With a group: the invariants table with trivial action on `μ_n`. With a
/// level: the defining sequence and duality of that single level.
pub fn gerb(doc: Option<&InputDocument>, ns: &[i64]) -> Result<Vec<Report>, CliError> {
    if ns.iter().any(|&n| n <= 0) {
        return Err(CliError::Schema(String::from("levels must be positive")));
    }
    match doc {
        None => {
            let mut table = Report::new("invariants of X*(u_n) for C/R");
            for &n in ns {
                invariants_row(&mut table, &LevelDatum::real(n), Some(gcd(n as i128, 2) as i64));
            }
            Ok(vec![real_tower_checks(ns), table])
        }
        Some(InputDocument::Group(d)) => {
            let g = d.group.build()?;
            Ok(vec![group_invariants_table(&g, ns)])
        }
        Some(InputDocument::Level(d)) => {
            let level = d.build()?;
            Ok(vec![level_report(&level)])
        }
        Some(other) => Err(wrong_kind("gerb", other, "a group or level document")),
    }
}

pub fn group_invariants_table(g: &FiniteGroup, ns: &[i64]) -> Report {
    let mut r = Report::new(format!("invariants of X*(u_n) for a group of order {}", g.order()));
    let cyclic = g.generators().len() <= 1;
    for &n in ns {
        let level = LevelDatum::trivial_action(g.clone(), n);
        let expect = cyclic.then(|| gcd(n as i128, g.order() as i128) as i64);
        invariants_row(&mut r, &level, expect);
    }
    r
}

const PAIRING_LIMIT: u128 = 4096;

pub fn level_report(level: &LevelDatum) -> Report {
    let u = build_u(level);
    let mut r = u.defining_sequence_report();
    r.value("u", u.module().module().describe());
    let k = level.group().order() as i64;
    let cyclic = level.group().generators().len() <= 1;
    invariants_row(&mut r, level, cyclic.then(|| gcd(level.n() as i128, k as i128) as i64));
    if u.order() <= PAIRING_LIMIT {
        r.check("pairing of u with X*(u) is perfect", pairing_is_perfect(level), "");
    } else {
        r.skip("pairing of u with X*(u) is perfect", format!("|u| = {} is too large", u.order()));
    }
    r
}

fn torus_of(command: &str, doc: &InputDocument) -> Result<(TorusDatum, Vec<i64>), CliError> {
    match doc {
        InputDocument::Torus(spec) => {
            let t = spec.build()?;
            let l = spec.lambda(&t)?;
            Ok((t, l))
        }
        InputDocument::Reductive(d) => {
            let t = d.torus.build()?;
            let l = d.torus.lambda(&t)?;
            Ok((t, l))
        }
        other => Err(wrong_kind(command, other, "a torus")),
    }
}

fn show(v: &[rigidgerb::QZ]) -> String {
    let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// `z_{λ̄,n}` for the torus of the document with its `lambda`.
pub fn cocycle(doc: &InputDocument, n: i64) -> Result<Vec<Report>, CliError> {
    let (t, lambda) = torus_of("cocycle", doc)?;
    Ok(cocycle_reports(&t, &lambda, n))
}

pub fn cocycle_reports(t: &TorusDatum, lambda: &[i64], n: i64) -> Vec<Report> {
    let mut head = Report::new(format!("z for λ̄ = {:?} at level {}", lambda, n));
    let z = match z_lambda(t, lambda, n) {
        Ok(z) => z,
        Err(e) => {
            head.check("construction", false, e.to_string());
            return vec![head];
        }
    };
    let expected = t.quotient_y().canon(lambda);
    head.value("Ȳ/Y", t.quotient_y().describe());
    head.value("restriction to u", format!("{:?}", z.restriction()));
    head.value("z(σ)", show(z.sigma_value()));
    head.check("restriction is the class of λ̄ in Ȳ/Y", z.restriction() == &expected, format!("{:?}", expected));
    let mut out = vec![head, z.cocycle_report()];
    let mut push = |label: &str, r: Result<Report, rigidgerb::realgerb::RealGerbError>| match r {
        Ok(r) => out.push(r),
        Err(e) => {
            let mut r = Report::new(label);
            r.check("computed", false, e.to_string());
            out.push(r);
        }
    };
    push("boundary square", boundary_square_check(t, lambda, n));
    push("inflation", inflation_stability_check(t, lambda, n, 2 * n * n));
    if t.ybar_to_y(lambda).is_some() {
        push("classical comparison", classical_comparison(t, lambda, n, 2 * n));
    } else {
        let mut r = Report::new("integral λ̄ against c ∪ λ̄");
        r.skip("classical comparison", "λ̄ is not in Y");
        out.push(r);
    }
    out
}

fn same_values(a: &RealRigidCocycle, b: &RealRigidCocycle) -> bool {
    a.level().w_elements().iter().all(|w| a.value(w) == b.value(w))
}

/// The strong form to cocycle dictionary in both directions.
pub fn strongform(doc: Option<&InputDocument>, n: i64) -> Result<Vec<Report>, CliError> {
    let form = match doc {
        None => return Ok(vec![dictionary_failure(sl2_strong_form_report(n), "strong forms of SL2")]),
        Some(InputDocument::StrongForm(d)) => d.build()?,
        Some(other) => return Err(wrong_kind("strongform", other, "a strong-form document")),
    };
    Ok(vec![match form {
        StrongForm::Sl2(delta) => sl2_form_report(&delta, n),
        StrongForm::Torus(t, delta) => torus_form_report(&t, &delta, n),
    }])
}

fn dictionary_failure(r: Result<Report, rigidgerb::realgerb::RealGerbError>, title: &str) -> Report {
    r.unwrap_or_else(|e| {
        let mut r = Report::new(title);
        r.check("computed", false, e.to_string());
        r
    })
}

pub fn sl2_form_report(delta: &StrongRealForm, n: i64) -> Report {
    let mut r = Report::new(format!("strong form of SL2 at level {}", n));
    r.value("g", delta.matrix().to_string());
    r.value("δ²", delta.square().to_string());
    let z = match cocycle_from_strong_form(delta, n) {
        Ok(z) => z,
        Err(e) => {
            r.check("cocycle z_δ", false, e.to_string());
            return r;
        }
    };
    r.absorb("z_δ", z.cocycle_report());
    r.value("restriction to u", format!("{:?}", z.phi_value()));
    match strong_form_from_cocycle(&z) {
        Ok(back) => {
            r.check("δ ↦ z_δ ↦ δ", back == *delta, back.matrix().to_string());
            match cocycle_from_strong_form(&back, n) {
                Ok(again) => {
                    let same = z.level().w_elements().iter().all(|w| z.value(w) == again.value(w));
                    r.check("z ↦ δ_z ↦ z", same, "");
                }
                Err(e) => {
                    r.check("z ↦ δ_z ↦ z", false, e.to_string());
                }
            }
        }
        Err(e) => {
            r.check("δ ↦ z_δ ↦ δ", false, e.to_string());
        }
    }
    for (name, known) in [("split", StrongRealForm::split()), ("compact", StrongRealForm::compact())] {
        if let Ok(k) = cocycle_from_strong_form(&known, n) {
            if k.phi_value() == z.phi_value() {
                r.value("class", format!("same restriction as the {} form", name));
            }
        }
    }
    r
}

pub fn torus_form_report(t: &TorusDatum, delta: &TorusStrongForm, n: i64) -> Report {
    let mut r = Report::new(format!("strong form of a torus at level {}", n));
    let angles: Vec<String> = delta.t.iter().map(|a| format_root(&rigidgerb::realgerb::RootOfUnity::new(*a))).collect();
    r.value("t", format!("[{}]", angles.join(", ")));
    r.value("δ²", show(&delta.square(t)));
    let z = match torus_cocycle_from_strong_form(t, delta, n) {
        Ok(z) => z,
        Err(e) => {
            r.check("cocycle z_δ", false, e.to_string());
            return r;
        }
    };
    r.absorb("z_δ", z.cocycle_report());
    r.value("restriction to u", format!("{:?}", z.restriction()));
    match torus_strong_form_from_cocycle(&z) {
        Ok(back) => {
            r.check("δ ↦ z_δ ↦ δ", back == *delta, show(&back.t));
            match torus_cocycle_from_strong_form(t, &back, n) {
                Ok(again) => {
                    r.check("z ↦ δ_z ↦ z", same_values(&z, &again), "");
                }
                Err(e) => {
                    r.check("z ↦ δ_z ↦ z", false, e.to_string());
                }
            }
        }
        Err(e) => {
            r.check("δ ↦ z_δ ↦ δ", false, e.to_string());
        }
    }
    r
}

/// The `SL_2(R)` pipeline, or the structure of a given matrix group.
pub fn sl2demo(doc: Option<&InputDocument>, n: i64) -> Result<Vec<Report>, CliError> {
    match doc {
        None => {
            let rd = ReductiveDatum::sl2_real();
            let mut classes = Report::new("Ȳ_+,tor of SL2 over R");
            let ypt = y_plus_tor_reductive(&rd, Mode::Stabilized);
            classes.value("Ȳ_+,tor", ypt.group().describe());
            classes.check("two classes", ypt.group().order() == Some(2), ypt.group().describe());
            Ok(vec![
                sl2_packet_report(),
                classes,
                pairing_report(&rd),
                pizza_check(&rd),
                dictionary_failure(sl2_strong_form_report(n), "strong forms of SL2"),
            ])
        }
        Some(InputDocument::MatrixGroup(d)) => {
            let g = d.build()?;
            Ok(vec![matrix_group_report(&g)?])
        }
        Some(other) => Err(wrong_kind("sl2demo", other, "a matrix-group document")),
    }
}

pub fn matrix_group_report(mg: &MatrixGroup) -> Result<Report, CliError> {
    let g = mg.group();
    let mut r = Report::new(if mg.mod_center() {
        "matrix group modulo scalars"
    } else {
        "matrix group"
    });
    let z = center(g);
    r.value("order", g.order().to_string());
    r.value("classes", conjugacy_classes(g).len().to_string());
    r.value("center", z.len().to_string());
    r.value("exponent", exponent(g).to_string());
    r.value("abelianization", abelianization(g).group.describe());
    let table = match character_table(g) {
        Ok(t) => t,
        Err(SpectraError::UnsupportedGroupShape(m)) => return Err(CliError::Unsupported(m)),
        Err(e) => return Err(CliError::Failure(e.to_string())),
    };
    r.value("degrees", format!("{:?}", table.degrees()));
    r.absorb("", table.verify());
    for &c in z.iter().filter(|&&c| c != g.identity()) {
        let omegas: Result<Vec<String>, _> = (0..table.degrees().len())
            .map(|k| central_character(&table, g, k, c).map(|q| q.to_string()))
            .collect();
        match omegas {
            Ok(w) => r.value(format!("central characters at {}", mg.element(c)), format!("[{}]", w.join(", "))),
            Err(e) => {
                r.check(format!("central characters at {}", mg.element(c)), false, e.to_string());
            }
        }
    }
    Ok(r)
}
