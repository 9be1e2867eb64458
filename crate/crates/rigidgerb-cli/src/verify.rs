//! Seeded invariant suites, one per library module.

use std::thread;

use rand::Rng;
use rigidgerb::battery::{
    leibniz_battery, random_finite_module, random_norm_kernel_element, real_torus_battery, rng, torus_battery,
    SmallGroup,
};
use rigidgerb::gerb::{pairing_is_perfect, real_tower_checks, LevelDatum};
use rigidgerb::realgerb::{
    alpha_transition, boundary_square_check, sl2_strong_form_report, xi_pushforward_check, z_lambda, RealLevel,
};
use rigidgerb::rigidcoh::{
    pairing_report, pizza_check, weyl_triviality_check, y_exact_sequence_check, ReductiveDatum, TorusDatum,
};
use rigidgerb::spectra::{character_table, sl2_packet_report};
use rigidgerb::{smith_normal_form, FinAb, FiniteGroup, GammaModule, IntMatrix, Report};

use crate::commands::group_invariants_table;
use crate::CliError;

pub const MODULES: [&str; 7] = ["abgroup", "gmodule", "cochain", "gerb", "rigidcoh", "realgerb", "spectra"];

/// Runs the selected suites concurrently; the output order is that of
/// [`MODULES`] regardless of completion order.
pub fn run(target: &str, seed: u64) -> Result<Vec<Report>, CliError> {
    let selected: Vec<&str> = if target == "all" {
        MODULES.to_vec()
    } else if MODULES.contains(&target) {
        vec![target]
    } else {
        return Err(CliError::Schema(format!(
            "unknown suite {:?}; expected all or one of {}",
            target,
            MODULES.join(", ")
        )));
    };
    let reports = thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|&m| s.spawn(move || suite(m, seed))).collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| CliError::Failure(String::from("a suite panicked"))))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(reports)
}

pub fn suite(module: &str, seed: u64) -> Report {
    let mut r = Report::new(format!("{} suite, seed {}", module, seed));
    match module {
        "abgroup" => abgroup_suite(&mut r, seed),
        "gmodule" => gmodule_suite(&mut r, seed),
        "cochain" => r.absorb("", leibniz_battery(seed, 40)),
        "gerb" => gerb_suite(&mut r),
        "rigidcoh" => rigidcoh_suite(&mut r, seed),
        "realgerb" => realgerb_suite(&mut r, seed),
        "spectra" => spectra_suite(&mut r),
        _ => unreachable!("suite names are validated"),
    }
    r
}

fn random_matrix<R: Rng>(rng: &mut R) -> IntMatrix {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let data = (0..rows * cols).map(|_| rng.gen_range(-6..=6)).collect();
    IntMatrix::new(rows, cols, data).expect("dimensions match")
}

fn abgroup_suite(r: &mut Report, seed: u64) {
    let mut rng = rng(seed);
    let (mut identity, mut chain, mut unimodular, mut orders) = (0, 0, 0, 0);
    const COUNT: usize = 60;
    for _ in 0..COUNT {
        let m = random_matrix(&mut rng);
        let s = smith_normal_form(&m);
        identity += (s.u.mul(&m).mul(&s.v) == s.d && s.d.is_diagonal()) as usize;
        let diag = s.diagonal();
        chain += diag
            .windows(2)
            .all(|w| w[0] >= 0 && w[1] >= 0 && (w[0] == 0 && w[1] == 0 || w[0] != 0 && w[1] % w[0] == 0))
            as usize;
        unimodular += (s.u.det().abs() == 1 && s.v.det().abs() == 1) as usize;
        let ok = if m.rows() == m.cols() && m.det() != 0 {
            FinAb::new(m.rows(), m.clone()).map_or(false, |a| a.order() == Some(m.det().unsigned_abs() as u128))
        } else {
            true
        };
        orders += ok as usize;
    }
    for (name, k) in [
        ("u m v = d with d diagonal", identity),
        ("invariant factors form a divisibility chain", chain),
        ("u and v are unimodular", unimodular),
        ("order of a square presentation is |det|", orders),
    ] {
        r.check(name, k == COUNT, format!("{} of {}", k, COUNT));
    }
}

fn gmodule_suite(r: &mut Report, seed: u64) {
    let mut rng = rng(seed.wrapping_add(1));
    for sg in SmallGroup::all() {
        let g = sg.group();
        let mut norm_ok = true;
        let mut periodic = true;
        for _ in 0..3 {
            let m = random_finite_module(&mut rng, sg, 48);
            let elems = m.elements().unwrap_or_default();
            for x in &elems {
                for gen in g.generators() {
                    let d = m.sub(&m.act(gen, x), x);
                    norm_ok &= m.reduce(&m.norm(&d)) == m.zero();
                }
            }
            if g.generators().len() <= 1 {
                periodic &= same_order(&m, -1, 1) && same_order(&m, 0, 2);
            }
        }
        let name = format!("{:?}", sg);
        r.check(format!("{}: N (γ - 1) = 0", name), norm_ok, "");
        if g.generators().len() <= 1 {
            r.check(format!("{}: cohomology is 2-periodic", name), periodic, "");
        }
        let reg = GammaModule::regular(g.clone(), 2);
        let acyclic = (-1..=2).all(|d| reg.cohomology(d).map_or(false, |h| h.group().is_trivial()));
        r.check(format!("{}: regular module is acyclic", name), acyclic, "");
    }
}

fn same_order(m: &GammaModule, a: i32, b: i32) -> bool {
    match (m.cohomology(a), m.cohomology(b)) {
        (Ok(x), Ok(y)) => x.group().order() == y.group().order(),
        _ => false,
    }
}

fn gerb_suite(r: &mut Report) {
    r.absorb("", real_tower_checks(&[2, 3, 4, 6]));
    for k in [2usize, 3, 4, 6] {
        r.absorb("", group_invariants_table(&FiniteGroup::cyclic(k), &[2, 3, 4, 6]));
    }
    for level in [LevelDatum::real(2), LevelDatum::real(4), LevelDatum::trivial_action(FiniteGroup::cyclic(3), 3)] {
        r.check(
            format!("pairing perfect for n = {}, |Γ| = {}", level.n(), level.group().order()),
            pairing_is_perfect(&level),
            "",
        );
    }
}

fn rigidcoh_suite(r: &mut Report, seed: u64) {
    for (i, t) in torus_battery(seed, 8).iter().enumerate() {
        r.absorb(&format!("torus {}", i), y_exact_sequence_check(t));
        r.absorb(&format!("torus {}", i), pairing_report(&ReductiveDatum::from_torus(t.clone())));
    }
    for (name, rd) in [
        ("SL2", ReductiveDatum::sl2_real()),
        ("PGL2", ReductiveDatum::pgl2_real()),
        ("A1xA1", ReductiveDatum::a1xa1_swap()),
    ] {
        r.absorb(name, weyl_triviality_check(&rd));
        r.absorb(name, pairing_report(&rd));
        if name != "PGL2" {
            r.absorb(name, pizza_check(&rd));
        }
    }
}

fn realgerb_suite(r: &mut Report, seed: u64) {
    for n in [2, 4] {
        match RealLevel::new(n) {
            Ok(l) => r.absorb("", l.report()),
            Err(e) => {
                r.check(format!("real level {}", n), false, e.to_string());
            }
        }
    }
    match alpha_transition(4, 2) {
        Ok(t) => r.absorb("", t.report()),
        Err(e) => {
            r.check("transition W_4 -> W_2", false, e.to_string());
        }
    }
    let mut rng = rng(seed.wrapping_add(2));
    let mut tori = vec![TorusDatum::norm_one_real()];
    tori.extend(real_torus_battery(seed, 3));
    for (i, t) in tori.iter().enumerate() {
        let l = random_norm_kernel_element(&mut rng, t);
        let prefix = format!("torus {}", i);
        match z_lambda(t, &l, 4) {
            Ok(z) => r.absorb(&prefix, z.cocycle_report()),
            Err(e) => {
                r.check(format!("{}: z", prefix), false, e.to_string());
            }
        }
        match boundary_square_check(t, &l, 4) {
            Ok(b) => r.absorb(&prefix, b),
            Err(e) => {
                r.check(format!("{}: boundary square", prefix), false, e.to_string());
            }
        }
    }
    for (label, rep) in [("", sl2_strong_form_report(4)), ("", xi_pushforward_check(4))] {
        match rep {
            Ok(x) => r.absorb(label, x),
            Err(e) => {
                r.check("SL2 at level 4", false, e.to_string());
            }
        }
    }
}

fn spectra_suite(r: &mut Report) {
    r.absorb("", sl2_packet_report());
    for (name, g) in [
        ("Z/4", FiniteGroup::cyclic(4)),
        ("Klein", FiniteGroup::klein()),
        ("S3", FiniteGroup::s3()),
    ] {
        match character_table(&g) {
            Ok(t) => r.absorb(name, t.verify()),
            Err(e) => {
                r.check(format!("{}: character table", name), false, e.to_string());
            }
        }
    }
}
