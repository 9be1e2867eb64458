//! Finite groups of 2x2 matrices over the Gaussian rationals and their
//! character tables.
//!
//! Groups may be taken modulo scalars, which realizes subgroups of
//! `PGL_2(C)`. Character values live in a cyclotomic field whose conductor
//! is the exponent of the group.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use thiserror::Error;

use crate::abgroup::{dual_finite, AbError, FinAb, IntMatrix, QZ};
use crate::cyclo::Cyclo;
use crate::gmodule::{FiniteGroup, GModError};
use crate::report::Report;
use crate::rigidcoh::{self, Mode, ReductiveDatum};

type Rat = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("generator is not invertible")]
    Singular,
    #[error("closure exceeds the bound of {0} elements")]
    BoundExceeded(usize),
    #[error("unsupported group shape: {0}")]
    UnsupportedGroupShape(String),
    #[error("element is not central")]
    NotCentral,
    #[error("value is not a root of unity in the available field")]
    NotRootOfUnity,
    #[error("index {0} out of range")]
    Index(usize),
    #[error(transparent)]
    Group(#[from] GModError),
    #[error(transparent)]
    Ab(#[from] AbError),
}

/// `re + im·i` with rational parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianScalar {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianScalar {
    pub fn new(re: Rat, im: Rat) -> GaussianScalar {
        GaussianScalar { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> GaussianScalar {
        GaussianScalar::new(Rat::from_integer(re), Rat::from_integer(im))
    }

    pub fn zero() -> GaussianScalar {
        GaussianScalar::from_ints(0, 0)
    }

    pub fn one() -> GaussianScalar {
        GaussianScalar::from_ints(1, 0)
    }

    pub fn i() -> GaussianScalar {
        GaussianScalar::from_ints(0, 1)
    }

    /// `e^{2πiθ}` for `θ` with denominator dividing 4.
    pub fn root_of_unity(theta: QZ) -> Option<GaussianScalar> {
        if 4 % theta.denom() != 0 {
            return None;
        }
        Some(match theta.numer() * (4 / theta.denom()) {
            0 => GaussianScalar::from_ints(1, 0),
            1 => GaussianScalar::from_ints(0, 1),
            2 => GaussianScalar::from_ints(-1, 0),
            _ => GaussianScalar::from_ints(0, -1),
        })
    }

    /// The angle of a root of unity of order dividing 4.
    pub fn angle(&self) -> Option<QZ> {
        (0..4).map(|k| QZ::new(k, 4)).find(|&t| GaussianScalar::root_of_unity(t) == Some(*self))
    }

    pub fn conj(&self) -> GaussianScalar {
        GaussianScalar::new(self.re, -self.im)
    }

    pub fn is_zero(&self) -> bool {
        *self == GaussianScalar::zero()
    }

    pub fn norm(&self) -> Rat {
        self.re * self.re + self.im * self.im
    }

    pub fn inv(&self) -> Option<GaussianScalar> {
        let n = self.norm();
        if n == Rat::from_integer(0) {
            return None;
        }
        Some(GaussianScalar::new(self.re / n, -self.im / n))
    }

    /// The same number in `Q(ζ_m)`, `4 | m`.
    pub fn to_cyclo(&self, m: usize) -> Cyclo {
        let i = Cyclo::zeta_pow(m, m as i64 / 4);
        Cyclo::from_rational(m, self.re).add(&i.scale(self.im))
    }
}

impl Add for GaussianScalar {
    type Output = GaussianScalar;
    fn add(self, o: GaussianScalar) -> GaussianScalar {
        GaussianScalar::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianScalar {
    type Output = GaussianScalar;
    fn sub(self, o: GaussianScalar) -> GaussianScalar {
        GaussianScalar::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianScalar {
    type Output = GaussianScalar;
    fn neg(self) -> GaussianScalar {
        GaussianScalar::new(-self.re, -self.im)
    }
}

impl Mul for GaussianScalar {
    type Output = GaussianScalar;
    fn mul(self, o: GaussianScalar) -> GaussianScalar {
        GaussianScalar::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl fmt::Display for GaussianScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = Rat::from_integer(0);
        match (self.re == zero, self.im == zero) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im < zero => write!(f, "{}-{}i", self.re, -self.im),
            _ => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

/// `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: GaussianScalar,
    pub b: GaussianScalar,
    pub c: GaussianScalar,
    pub d: GaussianScalar,
}

impl Mat2 {
    pub fn new(a: GaussianScalar, b: GaussianScalar, c: GaussianScalar, d: GaussianScalar) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    /// Entries given as `(re, im)` integer pairs.
    pub fn from_ints(e: [(i64, i64); 4]) -> Mat2 {
        let g = |(r, i): (i64, i64)| GaussianScalar::from_ints(r, i);
        Mat2::new(g(e[0]), g(e[1]), g(e[2]), g(e[3]))
    }

    pub fn identity() -> Mat2 {
        Mat2::scalar(GaussianScalar::one())
    }

    pub fn scalar(s: GaussianScalar) -> Mat2 {
        Mat2::new(s, GaussianScalar::zero(), GaussianScalar::zero(), s)
    }

    pub fn det(&self) -> GaussianScalar {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> GaussianScalar {
        self.a + self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn scale(&self, s: GaussianScalar) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn inv(&self) -> Option<Mat2> {
        let di = self.det().inv()?;
        Some(Mat2::new(self.d, -self.b, -self.c, self.a).scale(di))
    }

    /// Entrywise complex conjugation.
    pub fn conj(&self) -> Mat2 {
        Mat2::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    pub fn neg(&self) -> Mat2 {
        self.scale(-GaussianScalar::one())
    }

    pub fn scalar_value(&self) -> Option<GaussianScalar> {
        if self.b.is_zero() && self.c.is_zero() && self.a == self.d {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn entries(&self) -> [GaussianScalar; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Representative of the class modulo scalars: the first nonzero entry
    /// is scaled to 1.
    pub fn projective_canonical(&self) -> Mat2 {
        match self.entries().iter().find(|e| !e.is_zero()).and_then(|e| e.inv()) {
            Some(s) => self.scale(s),
            None => *self,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A finite matrix group, possibly modulo scalars, with its multiplication
/// table.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    gens: Vec<Mat2>,
    mod_center: bool,
    elements: Vec<Mat2>,
    index: BTreeMap<Mat2, usize>,
    group: FiniteGroup,
}

impl MatrixGroup {
    pub fn generate(gens: &[Mat2], bound: usize, mod_center: bool) -> Result<MatrixGroup, SpectraError> {
        assert!(bound >= 1, "bound must be positive");
        if gens.iter().any(|g| g.det().is_zero()) {
            return Err(SpectraError::Singular);
        }
        let canon = |m: Mat2| if mod_center { m.projective_canonical() } else { m };
        let gens_c: Vec<Mat2> = gens.iter().map(|&g| canon(g)).collect();
        let mut elements = vec![canon(Mat2::identity())];
        let mut index = BTreeMap::new();
        index.insert(elements[0], 0usize);
        let mut next = 0;
        while next < elements.len() {
            let x = elements[next];
            next += 1;
            for g in &gens_c {
                let y = canon(x.mul(g));
                if !index.contains_key(&y) {
                    if elements.len() == bound {
                        return Err(SpectraError::BoundExceeded(bound));
                    }
                    index.insert(y, elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for x in &elements {
            for y in &elements {
                table.push(index[&canon(x.mul(y))]);
            }
        }
        let group = FiniteGroup::from_table(n, table)?;
        Ok(MatrixGroup {
            gens: gens.to_vec(),
            mod_center,
            elements,
            index,
            group,
        })
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.gens
    }

    pub fn mod_center(&self) -> bool {
        self.mod_center
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Mat2 {
        self.elements[i]
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        let m = if self.mod_center { m.projective_canonical() } else { *m };
        self.index.get(&m).copied()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.index_of(m).is_some()
    }

    /// Same underlying set of elements.
    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.mod_center == other.mod_center && self.order() == other.order() && self.elements.iter().all(|m| other.contains(m))
    }
}

/// Conjugacy classes: identity first, then by element order, then by first
/// appearance.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut cl: Vec<usize> = (0..n).map(|h| g.mul(g.mul(h, x), g.inv(h))).collect();
        cl.sort_unstable();
        cl.dedup();
        for &y in &cl {
            seen[y] = true;
        }
        classes.push(cl);
    }
    let e = g.identity();
    classes.sort_by_key(|cl| (cl[0] != e && !cl.contains(&e), g.element_order(cl[0])));
    classes
}

pub fn center(g: &FiniteGroup) -> Vec<usize> {
    g.elements().filter(|&z| g.elements().all(|h| g.mul(z, h) == g.mul(h, z))).collect()
}

pub fn commutator_subgroup(g: &FiniteGroup) -> Vec<usize> {
    let mut comms = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            comms.push(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    let mut h = g.generated(&comms);
    h.sort_unstable();
    h
}

/// `G^{ab}` with the quotient map into its canonical coordinates.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub group: FinAb,
    pub map: Vec<Vec<i64>>,
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    let comm = commutator_subgroup(g);
    let n = g.order();
    // Cosets of the commutator subgroup.
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] == usize::MAX {
            for &c in &comm {
                coset[g.mul(x, c)] = reps.len();
            }
            reps.push(x);
        }
    }
    let k = reps.len();
    // Z^k modulo e_a + e_b - e_{ab}.
    let mut rels = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let mut r = vec![0i64; k];
            r[a] += 1;
            r[b] += 1;
            r[coset[g.mul(reps[a], reps[b])]] -= 1;
            rels.push(r);
        }
    }
    let group = FinAb::new(k, IntMatrix::from_cols(k, &rels)).expect("relations sized to generators");
    let map = (0..n)
        .map(|x| {
            let mut e = vec![0i64; k];
            e[coset[x]] = 1;
            group.canon(&e)
        })
        .collect();
    Abelianization { group, map }
}

pub fn exponent(g: &FiniteGroup) -> usize {
    g.elements().map(|x| g.element_order(x)).fold(1, num_integer::lcm)
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub representative: usize,
    pub size: usize,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    conductor: usize,
    order: usize,
    classes: Vec<ClassInfo>,
    class_of: Vec<usize>,
    characters: Vec<Vec<Cyclo>>,
}

impl CharacterTable {
    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn characters(&self) -> &[Vec<Cyclo>] {
        &self.characters
    }

    /// Character values lie in `Q(ζ_m)` for this `m`.
    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.characters
            .iter()
            .map(|c| c[0].to_rational().map(|r| r.to_integer()).unwrap_or(0))
            .collect()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn value(&self, chi: usize, g: usize) -> &Cyclo {
        &self.characters[chi][self.class_of[g]]
    }

    /// `(1/|G|) Σ_g χ(g) conj(ψ(g))`.
    pub fn inner_product(&self, chi: &[Cyclo], psi: &[Cyclo]) -> Cyclo {
        let m = self.conductor;
        let mut acc = Cyclo::zero(m);
        for (k, cl) in self.classes.iter().enumerate() {
            acc = acc.add(&chi[k].mul(&psi[k].conj()).scale(Rat::from_integer(cl.size as i64)));
        }
        acc.scale(Rat::new(1, self.order as i64))
    }

    /// Row and column orthogonality and the degree sum, all exact.
    pub fn verify(&self) -> Report {
        let m = self.conductor;
        let mut rep = Report::new("character table");
        let k = self.characters.len();
        let mut rows = true;
        for a in 0..k {
            for b in 0..k {
                let want = Cyclo::from_int(m, (a == b) as i64);
                rows &= self.inner_product(&self.characters[a], &self.characters[b]) == want;
            }
        }
        rep.check("row orthogonality", rows, format!("{} characters", k));
        let mut cols = true;
        for (x, cx) in self.classes.iter().enumerate() {
            for (y, _) in self.classes.iter().enumerate() {
                let mut acc = Cyclo::zero(m);
                for chi in &self.characters {
                    acc = acc.add(&chi[x].mul(&chi[y].conj()));
                }
                let want = if x == y {
                    Cyclo::from_int(m, (self.order / cx.size) as i64)
                } else {
                    Cyclo::zero(m)
                };
                cols &= acc == want;
            }
        }
        rep.check("column orthogonality", cols, format!("{} classes", self.classes.len()));
        let sum: i64 = self.degrees().iter().map(|d| d * d).sum();
        rep.check("sum of squared degrees", sum == self.order as i64, format!("{} vs {}", sum, self.order));
        rep.check("square table", k == self.classes.len(), format!("{} x {}", k, self.classes.len()));
        rep
    }
}

/// Linear characters come from the abelianization; at most one further
/// irreducible is recovered from the regular character.
pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, SpectraError> {
    let classes_raw = conjugacy_classes(g);
    let n = g.order();
    let mut class_of = vec![0usize; n];
    for (k, cl) in classes_raw.iter().enumerate() {
        for &x in cl {
            class_of[x] = k;
        }
    }
    let classes: Vec<ClassInfo> = classes_raw
        .iter()
        .map(|cl| ClassInfo {
            representative: cl[0],
            size: cl.len(),
            elements: cl.clone(),
        })
        .collect();
    let ex = exponent(g);
    let m = if ex % 4 == 0 { ex } else { num_integer::lcm(ex, 4) };
    let ab = abelianization(g);
    let dual = dual_finite(&FinAb::from_invariants(ab.group.torsion_invariants()))?;
    let mut characters: Vec<Vec<Cyclo>> = Vec::new();
    for c in dual.group().canon_elements()? {
        let row = classes
            .iter()
            .map(|cl| {
                let theta = dual.eval(&c, &ab.map[cl.representative]);
                Cyclo::root_of_unity(m, theta).expect("character values have order dividing the exponent")
            })
            .collect();
        characters.push(row);
    }
    let linear = characters.len();
    if linear < classes.len() {
        if classes.len() != linear + 1 {
            return Err(SpectraError::UnsupportedGroupShape(format!(
                "{} classes but {} linear characters",
                classes.len(),
                linear
            )));
        }
        let rest = n - linear;
        let d = (1..=rest).find(|d| d * d >= rest).unwrap_or(1);
        if d * d != rest {
            return Err(SpectraError::UnsupportedGroupShape(format!("{} is not a square", rest)));
        }
        let row = classes
            .iter()
            .enumerate()
            .map(|(k, cl)| {
                let reg = if cl.representative == g.identity() { n as i64 } else { 0 };
                let mut v = Cyclo::from_int(m, reg);
                for chi in &characters {
                    v = v.sub(&chi[k]);
                }
                v.scale(Rat::new(1, d as i64))
            })
            .collect();
        characters.push(row);
    }
    Ok(CharacterTable {
        conductor: m,
        order: n,
        classes,
        class_of,
        characters,
    })
}

/// `χ(z)/χ(1)` for central `z`.
pub fn central_character(table: &CharacterTable, g: &FiniteGroup, chi: usize, z: usize) -> Result<QZ, SpectraError> {
    if chi >= table.characters.len() {
        return Err(SpectraError::Index(chi));
    }
    if z >= g.order() {
        return Err(SpectraError::Index(z));
    }
    if g.elements().any(|h| g.mul(z, h) != g.mul(h, z)) {
        return Err(SpectraError::NotCentral);
    }
    let deg = table.characters[chi][0].to_rational().expect("degrees are rational");
    table
        .value(chi, z)
        .scale(deg.recip())
        .as_root_of_unity()
        .ok_or(SpectraError::NotRootOfUnity)
}

/// The eight elements `±1, ±diag(-i,i), ±[[0,i],[i,0]], ±[[0,1],[-1,0]]`.
pub fn s_phi_plus_listed() -> Vec<Mat2> {
    let base = [
        Mat2::identity(),
        Mat2::from_ints([(0, -1), (0, 0), (0, 0), (0, 1)]),
        Mat2::from_ints([(0, 0), (0, 1), (0, 1), (0, 0)]),
        Mat2::from_ints([(0, 0), (1, 0), (-1, 0), (0, 0)]),
    ];
    base.iter().flat_map(|m| [*m, m.neg()]).collect()
}

/// The four classes `1, diag(-1,1), [[0,1],[1,0]], [[0,1],[-1,0]]` in `PGL_2`.
pub fn s_phi_listed() -> Vec<Mat2> {
    vec![
        Mat2::identity(),
        Mat2::from_ints([(-1, 0), (0, 0), (0, 0), (1, 0)]),
        Mat2::from_ints([(0, 0), (1, 0), (1, 0), (0, 0)]),
        Mat2::from_ints([(0, 0), (1, 0), (-1, 0), (0, 0)]),
    ]
}

pub fn quaternion_generators() -> [Mat2; 2] {
    [
        Mat2::from_ints([(0, 1), (0, 0), (0, 0), (0, -1)]),
        Mat2::from_ints([(0, 0), (0, 1), (0, 1), (0, 0)]),
    ]
}

/// Builds `S_φ`, `S_φ^+` and `Z^+ = {±1}` for the quaternionic parameter of
/// `SL_2` over R and checks the packet predictions.
pub fn sl2_packet_report() -> Report {
    let mut rep = Report::new("SL2 compound packet");
    let gens = quaternion_generators();
    let plus = MatrixGroup::generate(&gens, 64, false).expect("quaternion group is finite");
    let s_phi = MatrixGroup::generate(&gens, 64, true).expect("its image mod center is finite");
    let g = plus.group();

    rep.value("|S_φ^+|", format!("{}", plus.order()));
    rep.value("|S_φ|", format!("{}", s_phi.order()));
    let listed_plus = s_phi_plus_listed();
    rep.check(
        "S_φ^+ equals the listed eight matrices",
        plus.order() == 8 && listed_plus.iter().all(|m| plus.contains(m)),
        format!("order {}", plus.order()),
    );
    rep.check(
        "S_φ equals the listed four classes",
        s_phi.order() == 4 && s_phi_listed().iter().all(|m| s_phi.contains(m)),
        format!("order {}", s_phi.order()),
    );
    let elementary = s_phi.group().elements().all(|x| s_phi.group().mul(x, x) == s_phi.group().identity())
        && s_phi.group().is_abelian();
    rep.check("S_φ is elementary abelian", elementary, "");
    let involutions: Vec<usize> = g.elements().filter(|&x| g.element_order(x) == 2).collect();
    rep.check(
        "S_φ^+ is quaternion",
        !g.is_abelian() && involutions.len() == 1,
        format!("{} elements of order 2", involutions.len()),
    );

    let minus_one = plus.index_of(&Mat2::identity().neg()).expect("-1 lies in S_φ^+");
    let central = center(g);
    rep.check(
        "Z^+ = {±1} maps injectively to S_φ^+",
        central.len() == 2 && central.contains(&minus_one) && central.contains(&g.identity()),
        format!("center of order {}", central.len()),
    );
    rep.value("kernel of π0(Z^+) -> π0(S_φ^+)", "trivial");

    let table = match character_table(g) {
        Ok(t) => t,
        Err(e) => {
            rep.check("character table", false, format!("{}", e));
            return rep;
        }
    };
    rep.absorb("", table.verify());
    let degrees = table.degrees();
    rep.value("degrees", format!("{:?}", degrees));
    rep.check("five irreducibles of degrees 1,1,1,1,2", degrees == [1, 1, 1, 1, 2], format!("{:?}", degrees));

    let omegas: Vec<QZ> = (0..degrees.len())
        .map(|k| central_character(&table, g, k, minus_one).expect("-1 is central"))
        .collect();
    let split = omegas.iter().filter(|w| w.is_zero()).count();
    let nonsplit = omegas.len() - split;
    rep.value("packet size", format!("{}", omegas.len()));
    rep.check(
        "four members over the split class and one over the nonsplit class",
        split == 4 && nonsplit == 1,
        format!("{} + {}", split, nonsplit),
    );
    let rho5 = degrees.iter().position(|&d| d == 2).unwrap_or(0);
    rep.check("central character of ρ5 sends -1 to -1", omegas[rho5] == QZ::new(1, 2), format!("{}", omegas[rho5]));

    let m = table.conductor();
    let trace_zero = g
        .elements()
        .filter(|&x| !central.contains(&x))
        .all(|x| table.value(rho5, x).is_zero());
    rep.check("tr ρ5 vanishes on lifts of nontrivial s", trace_zero, "");
    let at_one = table.value(rho5, g.identity()).clone();
    let at_minus = table.value(rho5, minus_one).clone();
    rep.check(
        "tr ρ5 on the two lifts of 1 differs by a sign",
        at_one == Cyclo::from_int(m, 2) && at_minus == Cyclo::from_int(m, -2),
        format!("{} and {}", at_one, at_minus),
    );
    // Characters of the matrices themselves agree with ρ5.
    let traces = g.elements().all(|x| plus.element(x).trace().to_cyclo(m) == *table.value(rho5, x));
    rep.check("ρ5 is the defining representation", traces, "");

    let y = rigidcoh::y_plus_tor_reductive(&ReductiveDatum::sl2_real(), Mode::Stabilized);
    let order = y.group().order().unwrap_or(0);
    let mut distinct = omegas.clone();
    distinct.sort();
    distinct.dedup();
    rep.check(
        "central characters match the rigid classes of SL2",
        order == distinct.len() as u128,
        format!("{} rigid classes, {} central characters", order, distinct.len()),
    );
    rep
}
