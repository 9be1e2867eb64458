//! The finite groups `Ȳ_{+,tor}` attached to tori and reductive data with a
//! finite central subgroup `Z`, the dual-center group and the pairing between
//! them.
//!
//! `Z` never appears directly: a datum carries the lattices `Y ⊆ Ȳ`, and `Z`
//! is recovered as `Ȳ/Y ⊗ μ_n`. All computations on `Ȳ` use coordinates in
//! the chosen basis of `Ȳ`; the columns of `C = B^{-1}` give `Y` inside it.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use thiserror::Error;

use crate::abgroup::{
    self, dual_finite, AbElement, AbError, AbHom, FinAb, FiniteDual, IntMatrix, Subquotient, QZ,
};
use crate::gerb::{hom_u_z, GerbError, HomUZ, LevelDatum};
use crate::gmodule::{FiniteGroup, GModError, GammaModule};
use crate::lattice::{self, narrow, widen, Constraint, Echelon};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RigidError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("basis matrix is singular")]
    Singular,
    #[error("{0}")]
    NotIntegral(String),
    #[error("index {index} does not divide level {n}")]
    Divisibility { index: i64, n: i64 },
    #[error("invalid root datum: {0}")]
    RootDatum(String),
    #[error("operation needs a group of order 2, got order {0}")]
    WrongGroup(usize),
    #[error("class does not map to a torsion element")]
    NotTorsion,
    #[error(transparent)]
    Module(#[from] GModError),
    #[error(transparent)]
    Gerb(#[from] GerbError),
    #[error(transparent)]
    Ab(#[from] AbError),
}

type Rat = Ratio<i128>;

fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<Rat>>> {
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = m.row(r).iter().map(|&x| Rat::from_integer(x as i128)).collect();
            row.extend((0..n).map(|c| Rat::from_integer(if c == r { 1 } else { 0 })));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| a[r][col] != Rat::from_integer(0))?;
        a.swap(col, p);
        let inv = Rat::from_integer(1) / a[col][col];
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && a[r][col] != Rat::from_integer(0) {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn rat_mul_int(a: &[Vec<Rat>], b: &IntMatrix) -> Vec<Vec<Rat>> {
    a.iter()
        .map(|row| {
            (0..b.cols())
                .map(|c| {
                    row.iter()
                        .enumerate()
                        .fold(Rat::from_integer(0), |s, (k, &x)| s + x * Rat::from_integer(b.get(k, c) as i128))
                })
                .collect()
        })
        .collect()
}

fn integral(a: &[Vec<Rat>], cols: usize) -> Option<IntMatrix> {
    let mut data = Vec::with_capacity(a.len() * cols);
    for row in a {
        for x in row {
            if !x.is_integer() {
                return None;
            }
            data.push(lattice::to_i64(x.to_integer()));
        }
    }
    IntMatrix::new(a.len(), cols, data).ok()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    lattice::to_i64(a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum())
}

/// Kernel of `v ↦ m v` from a group with moduli `src` to one with moduli
/// `dst`, constraints taken only on the rows selected by `rows`.
fn matrix_kernel(src: &[i64], dst: &[i64], m: &IntMatrix, rows: impl Fn(usize) -> bool) -> Echelon {
    let cons: Vec<Constraint> = (0..m.rows())
        .filter(|&r| rows(r))
        .map(|r| Constraint {
            terms: (0..m.cols())
                .map(|c| (c, m.get(r, c)))
                .filter(|&(_, x)| x != 0)
                .collect(),
            modulus: dst[r],
        })
        .collect();
    lattice::kernel(src, cons)
}

/// A torus `S` with a finite subgroup `Z`, through `Y = X_*(S)` and
/// `Ȳ = X_*(S/Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDatum {
    group: FiniteGroup,
    rank: usize,
    rho: Vec<IntMatrix>,
    basis_num: IntMatrix,
    basis_den: i64,
    rho_bar: Vec<IntMatrix>,
    c: IntMatrix,
}

impl TorusDatum {
    /// `rho[g]` acts on `Y = Z^r`; the columns of `basis_num / basis_den`
    /// form a basis of `Ȳ` inside `Y ⊗ Q`.
    pub fn new(
        group: FiniteGroup,
        rho: Vec<IntMatrix>,
        basis_num: IntMatrix,
        basis_den: i64,
    ) -> Result<TorusDatum, RigidError> {
        let r = basis_num.rows();
        if basis_num.cols() != r {
            return Err(RigidError::Shape(String::from("basis matrix must be square")));
        }
        if basis_den <= 0 {
            return Err(RigidError::Shape(String::from("basis denominator must be positive")));
        }
        if rho.len() != group.order() || rho.iter().any(|a| a.rows() != r || a.cols() != r) {
            return Err(RigidError::Shape(format!("need {} action matrices of size {}", group.order(), r)));
        }
        // Validates the action itself.
        GammaModule::lattice(group.clone(), rho.clone())?;
        let inv = rational_inverse(&basis_num).ok_or(RigidError::Singular)?;
        let scaled: Vec<Vec<Rat>> = inv
            .iter()
            .map(|row| row.iter().map(|&x| x * Rat::from_integer(basis_den as i128)).collect())
            .collect();
        let c = integral(&scaled, r)
            .ok_or_else(|| RigidError::NotIntegral(String::from("Y is not contained in the given lattice")))?;
        let mut rho_bar = Vec::with_capacity(rho.len());
        for a in &rho {
            let m = rat_mul_int(&rat_mul_int(&inv, a), &basis_num);
            rho_bar.push(
                integral(&m, r)
                    .ok_or_else(|| RigidError::NotIntegral(String::from("the action does not preserve the lattice")))?,
            );
        }
        Ok(TorusDatum {
            group,
            rank: r,
            rho,
            basis_num,
            basis_den,
            rho_bar,
            c,
        })
    }

    /// Same as [`TorusDatum::new`] with the action given on generators.
    pub fn from_generators(
        group: FiniteGroup,
        gens: &[(usize, IntMatrix)],
        basis_num: IntMatrix,
        basis_den: i64,
    ) -> Result<TorusDatum, RigidError> {
        let r = basis_num.rows();
        let m = GammaModule::from_generator_actions(group.clone(), &FinAb::free(r), gens)?;
        let rho = group.elements().map(|g| m.action(g).clone()).collect();
        TorusDatum::new(group, rho, basis_num, basis_den)
    }

    /// Trivial action, `Ȳ = Y`.
    pub fn split(group: FiniteGroup, rank: usize) -> TorusDatum {
        let rho = vec![IntMatrix::identity(rank); group.order()];
        TorusDatum::new(group, rho, IntMatrix::identity(rank), 1).expect("split torus")
    }

    /// The norm-one torus of `C/R` with `Z = μ_2`: `Y = Z`, `σ = -1`, `Ȳ = ½Z`.
    pub fn norm_one_real() -> TorusDatum {
        let rho = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])];
        TorusDatum::new(FiniteGroup::cyclic(2), rho, IntMatrix::identity(1), 2).expect("norm-one torus")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rho(&self, g: usize) -> &IntMatrix {
        &self.rho[g]
    }

    /// The action in `Ȳ` coordinates.
    pub fn rho_bar(&self, g: usize) -> &IntMatrix {
        &self.rho_bar[g]
    }

    pub fn basis(&self) -> (&IntMatrix, i64) {
        (&self.basis_num, self.basis_den)
    }

    /// `Y` inside `Ȳ`: column `k` is `e_k ∈ Y` in `Ȳ` coordinates.
    pub fn y_in_ybar(&self) -> &IntMatrix {
        &self.c
    }

    /// `[Ȳ : Y]`.
    pub fn index(&self) -> i64 {
        self.c.det().abs()
    }

    pub fn y_module(&self) -> GammaModule {
        GammaModule::lattice(self.group.clone(), self.rho.clone()).expect("validated")
    }

    pub fn ybar_module(&self) -> GammaModule {
        GammaModule::lattice(self.group.clone(), self.rho_bar.clone()).expect("validated")
    }

    pub fn norm_bar(&self) -> IntMatrix {
        self.rho_bar
            .iter()
            .fold(IntMatrix::zeros(self.rank, self.rank), |acc, a| acc.add(a))
    }

    pub fn y_to_ybar(&self, y: &[i64]) -> Vec<i64> {
        self.c.mul_vec(y)
    }

    /// `Y` coordinates of a point of `Ȳ`, if it lies in `Y`.
    pub fn ybar_to_y(&self, v: &[i64]) -> Option<Vec<i64>> {
        let w = self.basis_num.mul_vec(v);
        if w.iter().all(|x| x % self.basis_den == 0) {
            Some(w.iter().map(|x| x / self.basis_den).collect())
        } else {
            None
        }
    }

    /// Generators of `IY` in `Ȳ` coordinates.
    pub fn augmentation_in_ybar(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for g in self.group.non_identity() {
            for k in 0..self.rank {
                let v: Vec<i64> = self
                    .y_to_ybar(&self.rho[g].col(k))
                    .iter()
                    .zip(self.c.col(k))
                    .map(|(a, b)| a - b)
                    .collect();
                if v.iter().any(|&x| x != 0) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// `Ȳ/Y` with generators the `Ȳ` basis.
    pub fn quotient_y(&self) -> FinAb {
        FinAb::new(self.rank, self.c.clone()).expect("square relation matrix")
    }

    /// `Z = Ȳ/Y ⊗ μ_n`: the group `Ȳ/Y` with `σ` acting by `χ(σ) ρ̄(σ)`.
    pub fn z_module(&self, level: &LevelDatum) -> Result<GammaModule, RigidError> {
        if level.group() != &self.group {
            return Err(RigidError::Shape(String::from("level datum is over a different group")));
        }
        let acts = self
            .group
            .elements()
            .map(|g| self.rho_bar[g].scale(level.chi(g)))
            .collect();
        Ok(GammaModule::new(self.group.clone(), &self.quotient_y(), acts)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Norm kernel at the level of the given splitting group.
    Fixed,
    /// Elements whose norm is torsion: the union over all splitting fields.
    Stabilized,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Fixed => "fixed",
            Mode::Stabilized => "stabilized",
        }
    }
}

/// `Ȳ_{+,tor}` as a subquotient of `Ȳ` (tori) or of `Ȳ/Q^∨` (reductive).
#[derive(Clone, Debug)]
pub struct YPlusTor {
    mode: Mode,
    sq: Subquotient,
    quotient: Option<FinAb>,
}

impl YPlusTor {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn group(&self) -> &FinAb {
        self.sq.group()
    }

    /// A representative in `Ȳ` coordinates.
    pub fn lift(&self, class: &[i64]) -> Vec<i64> {
        let v = self.sq.lift(class);
        match &self.quotient {
            None => v,
            Some(p) => p.lift_canon(&v),
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        match &self.quotient {
            None => self.sq.contains(v),
            Some(p) => self.sq.contains(&p.canon(v)),
        }
    }

    /// The class of a point of `Ȳ` satisfying the norm condition.
    pub fn reduce(&self, v: &[i64]) -> Result<AbElement, AbError> {
        match &self.quotient {
            None => self.sq.reduce(v),
            Some(p) => self.sq.reduce(&p.canon(v)),
        }
    }

    pub fn elements(&self) -> Vec<AbElement> {
        self.group().canon_elements().expect("finite")
    }

    /// The map to another `Ȳ_{+,tor}` induced by a linear map on `Ȳ`
    /// coordinates.
    pub fn induced<F>(&self, target: &YPlusTor, f: F) -> Result<AbHom, AbError>
    where
        F: Fn(&[i64]) -> Vec<i64>,
    {
        let n = self.group().generator_count();
        let cols = (0..n)
            .map(|i| target.reduce(&f(&self.lift(&self.group().generator(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        AbHom::new(
            self.group().clone(),
            target.group().clone(),
            IntMatrix::from_cols(target.group().generator_count(), &cols),
        )
    }
}

/// `Ȳ^N / IY`.
pub fn y_plus_tor_torus(t: &TorusDatum) -> YPlusTor {
    let r = t.rank;
    let moduli = vec![0; r];
    let num = matrix_kernel(&moduli, &moduli, &t.norm_bar(), |_| true);
    let sq = Subquotient::from_echelon(moduli, num, t.augmentation_in_ybar().into_iter());
    YPlusTor {
        mode: Mode::Fixed,
        sq,
        quotient: None,
    }
}

/// The four groups and three maps of
/// `0 -> Y_{Γ,tor} -> Ȳ_{+,tor} -> [Ȳ/Y]^N -> Y^Γ/N(Y)`.
#[derive(Clone, Debug)]
pub struct ExactSequence {
    pub coinvariants_tor: FinAb,
    pub y_plus_tor: FinAb,
    pub quotient_norm_kernel: FinAb,
    pub tate_zero: FinAb,
    pub first: AbHom,
    pub second: AbHom,
    pub third: AbHom,
}

pub fn y_exact_sequence(t: &TorusDatum) -> Result<ExactSequence, RigidError> {
    let r = t.rank;
    let zeros = vec![0i64; r];
    let y = t.y_module();
    let ny = y.norm_matrix();

    let a = Subquotient::from_echelon(
        zeros.clone(),
        matrix_kernel(&zeros, &zeros, &ny, |_| true),
        y.augmentation_generators().into_iter(),
    );
    let b = y_plus_tor_torus(t);

    let q = t.quotient_y();
    let tn = q.to_canon_matrix().mul(&t.norm_bar());
    let qm = q.canon_moduli();
    let c = Subquotient::from_echelon(
        zeros.clone(),
        matrix_kernel(&zeros, &qm, &tn, |_| true),
        t.c.columns().into_iter(),
    );

    let inv = y.invariants();
    let inv_gens: Vec<Vec<i64>> = (0..inv.0.generator_count())
        .map(|i| inv.1.apply(&inv.0.generator(i)))
        .collect();
    let d = Subquotient::new(zeros.clone(), inv_gens, ny.columns())?;

    let first = a.induced(&b.sq, |v| t.y_to_ybar(v))?;
    let second = b.sq.induced(&c, |v| v.to_vec())?;
    let nb = t.norm_bar();
    let third = c.induced(&d, |v| {
        t.ybar_to_y(&nb.mul_vec(v))
            .expect("norm of an element of [Ȳ/Y]^N lies in Y")
    })?;
    Ok(ExactSequence {
        coinvariants_tor: a.group().clone(),
        y_plus_tor: b.group().clone(),
        quotient_norm_kernel: c.group().clone(),
        tate_zero: d.group().clone(),
        first,
        second,
        third,
    })
}

fn order(a: &FinAb) -> u128 {
    a.order().expect("finite group")
}

pub fn y_exact_sequence_check(t: &TorusDatum) -> Report {
    let mut rep = Report::new("torus exact sequence");
    let s = match y_exact_sequence(t) {
        Ok(s) => s,
        Err(e) => {
            rep.check("construction", false, format!("{}", e));
            return rep;
        }
    };
    rep.value("Y_Γ,tor", s.coinvariants_tor.describe());
    rep.value("Ȳ_+,tor", s.y_plus_tor.describe());
    rep.value("[Ȳ/Y]^N", s.quotient_norm_kernel.describe());
    rep.value("Y^Γ/N(Y)", s.tate_zero.describe());
    rep.check("first map injective", s.first.is_injective(), "");
    let c1 = s.first.then(&s.second).map(|h| h.is_zero_map()).unwrap_or(false);
    let c2 = s.second.then(&s.third).map(|h| h.is_zero_map()).unwrap_or(false);
    rep.check("composites vanish at Ȳ_+,tor", c1, "");
    rep.check("composites vanish at [Ȳ/Y]^N", c2, "");
    let k2 = order(&abgroup::kernel(&s.second).0);
    let i1 = order(&abgroup::image(&s.first).0);
    rep.check("exact at Ȳ_+,tor", c1 && k2 == i1, format!("|ker| = {}, |im| = {}", k2, i1));
    let k3 = order(&abgroup::kernel(&s.third).0);
    let i2 = order(&abgroup::image(&s.second).0);
    rep.check("exact at [Ȳ/Y]^N", c2 && k3 == i2, format!("|ker| = {}, |im| = {}", k3, i2));
    rep
}

/// The element of `Hom(μ_n, Z)^N` attached to a class of `Ȳ_{+,tor}`.
#[derive(Clone, Debug)]
pub struct HomElement {
    pub hom: HomUZ,
    pub class: AbElement,
    /// `φ(ζ_n) ∈ Z`, canonical coordinates of the coefficient module.
    pub value: Vec<i64>,
}

/// `λ̄ ↦ (x ↦ x^{nλ̄})`: the value at `ζ_n` is the class of `λ̄` in `Ȳ/Y`.
pub fn to_hom_uz(
    t: &TorusDatum,
    ypt: &YPlusTor,
    class: &[i64],
    level: &LevelDatum,
) -> Result<HomElement, RigidError> {
    let index = t.index();
    if level.n() % index != 0 {
        return Err(RigidError::Divisibility { index, n: level.n() });
    }
    let z = t.z_module(level)?;
    let hom = hom_u_z(level, &z)?;
    let lam = ypt.lift(class);
    let value = z.reduce(&t.quotient_y().canon(&lam));
    let class = hom.class_of_value(&value)?;
    Ok(HomElement { hom, class, value })
}

/// A torus datum together with simple roots and coroots.
#[derive(Clone, Debug)]
pub struct ReductiveDatum {
    torus: TorusDatum,
    coroots: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    coroot_orbit: Vec<Vec<i64>>,
    q: Echelon,
    quotient: FinAb,
    module: GammaModule,
}

impl PartialEq for ReductiveDatum {
    fn eq(&self, other: &ReductiveDatum) -> bool {
        self.torus == other.torus && self.coroots == other.coroots && self.roots == other.roots
    }
}

impl Eq for ReductiveDatum {}

const WEYL_ORBIT_LIMIT: usize = 20_000;

impl ReductiveDatum {
    /// `coroots[i] ∈ Y` and `roots[i]`, a functional on `Y`, form the simple
    /// pairs.
    pub fn new(torus: TorusDatum, coroots: Vec<Vec<i64>>, roots: Vec<Vec<i64>>) -> Result<ReductiveDatum, RigidError> {
        let r = torus.rank;
        if coroots.len() != roots.len() {
            return Err(RigidError::RootDatum(String::from("need as many roots as coroots")));
        }
        if coroots.iter().chain(&roots).any(|v| v.len() != r) {
            return Err(RigidError::RootDatum(format!("roots and coroots must have length {}", r)));
        }
        for (i, (a, c)) in roots.iter().zip(&coroots).enumerate() {
            if dot(a, c) != 2 {
                return Err(RigidError::RootDatum(format!("<α_{0}, α_{0}^∨> = {1}, expected 2", i, dot(a, c))));
            }
        }
        let mut orbit: Vec<Vec<i64>> = Vec::new();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        for c in &coroots {
            if seen.insert(c.clone()) {
                orbit.push(c.clone());
            }
        }
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head].clone();
            head += 1;
            for (a, c) in roots.iter().zip(&coroots) {
                let p = dot(a, &y);
                let s: Vec<i64> = y.iter().zip(c).map(|(&u, &v)| u - p * v).collect();
                if seen.insert(s.clone()) {
                    orbit.push(s);
                    if orbit.len() > WEYL_ORBIT_LIMIT {
                        return Err(RigidError::RootDatum(String::from("the generated Weyl group is infinite")));
                    }
                }
            }
        }
        let q = Echelon::new(r, &vec![0; r], orbit.iter().map(|v| widen(v)));
        for g in torus.group.elements() {
            for v in q.basis() {
                let w = torus.rho[g].mul_vec(&narrow(v));
                if !q.contains(&widen(&w)) {
                    return Err(RigidError::RootDatum(String::from("the Galois action does not preserve Q^∨")));
                }
            }
        }
        let rel: Vec<Vec<i64>> = q.basis().map(|v| torus.y_to_ybar(&narrow(v))).collect();
        let rel = if rel.is_empty() {
            IntMatrix::zeros(r, 0)
        } else {
            IntMatrix::from_cols(r, &rel)
        };
        let quotient = FinAb::new(r, rel)?;
        let module = GammaModule::new(torus.group.clone(), &quotient, torus.rho_bar.clone())?;
        Ok(ReductiveDatum {
            torus,
            coroots,
            roots,
            coroot_orbit: orbit,
            q,
            quotient,
            module,
        })
    }

    /// A torus viewed as a reductive datum without roots.
    pub fn from_torus(torus: TorusDatum) -> ReductiveDatum {
        ReductiveDatum::new(torus, Vec::new(), Vec::new()).expect("no roots")
    }

    /// Anisotropic maximal torus of `SL_2` over `R` with `Z = μ_2`.
    pub fn sl2_real() -> ReductiveDatum {
        ReductiveDatum::new(TorusDatum::norm_one_real(), vec![vec![1]], vec![vec![2]]).expect("SL_2 datum")
    }

    /// Anisotropic maximal torus of `PGL_2` over `R`, `Z = 1`.
    pub fn pgl2_real() -> ReductiveDatum {
        let rho = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])];
        let t = TorusDatum::new(FiniteGroup::cyclic(2), rho, IntMatrix::identity(1), 1).expect("torus");
        ReductiveDatum::new(t, vec![vec![2]], vec![vec![1]]).expect("PGL_2 datum")
    }

    /// `SL_2 × SL_2` where `σ` swaps the factors and negates, with `Z` the
    /// diagonal `μ_2`.
    pub fn a1xa1_swap() -> ReductiveDatum {
        ReductiveDatum::a1xa1_swap_with(IntMatrix::from_rows(&[vec![1, 0], vec![1, 2]]))
    }

    /// The same group with `Z = μ_2 × μ_2`.
    pub fn a1xa1_swap_full_center() -> ReductiveDatum {
        ReductiveDatum::a1xa1_swap_with(IntMatrix::identity(2))
    }

    fn a1xa1_swap_with(basis_num: IntMatrix) -> ReductiveDatum {
        let swap = IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]]);
        let t = TorusDatum::new(FiniteGroup::cyclic(2), vec![IntMatrix::identity(2), swap], basis_num, 2)
            .expect("torus");
        ReductiveDatum::new(t, vec![vec![1, 0], vec![0, 1]], vec![vec![2, 0], vec![0, 2]]).expect("A1xA1 datum")
    }

    pub fn torus(&self) -> &TorusDatum {
        &self.torus
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// All coroots reached from the simple ones by simple reflections.
    pub fn coroot_orbit(&self) -> &[Vec<i64>] {
        &self.coroot_orbit
    }

    /// A basis of `Q^∨` in `Y` coordinates.
    pub fn coroot_basis(&self) -> Vec<Vec<i64>> {
        self.q.basis().map(narrow).collect()
    }

    pub fn in_coroot_lattice(&self, y: &[i64]) -> bool {
        self.q.contains(&widen(y))
    }

    /// `Ȳ/Q^∨` as a Γ-module (canonical coordinates).
    pub fn quotient_module(&self) -> &GammaModule {
        &self.module
    }

    /// `Ȳ/Q^∨` with generators the `Ȳ` basis.
    pub fn quotient(&self) -> &FinAb {
        &self.quotient
    }

    /// `Q^∨` as a lattice with Γ-action, in the coordinates of
    /// [`ReductiveDatum::coroot_basis`].
    pub fn coroot_module(&self) -> GammaModule {
        let basis: Vec<Vec<i128>> = self.q.basis().map(|v| v.to_vec()).collect();
        let s = basis.len();
        let acts = self
            .torus
            .group
            .elements()
            .map(|g| {
                let cols: Vec<Vec<i64>> = basis
                    .iter()
                    .map(|v| {
                        let w = self.torus.rho[g].mul_vec(&narrow(v));
                        narrow(&self.q.solve(&widen(&w)).expect("Q^∨ is stable"))
                    })
                    .collect();
                if s == 0 {
                    IntMatrix::zeros(0, 0)
                } else {
                    IntMatrix::from_cols(s, &cols)
                }
            })
            .collect();
        GammaModule::lattice(self.torus.group.clone(), acts).expect("restricted action")
    }
}

impl From<TorusDatum> for ReductiveDatum {
    fn from(t: TorusDatum) -> ReductiveDatum {
        ReductiveDatum::from_torus(t)
    }
}

/// `[Ȳ/Q^∨]^N / I(Y/Q^∨)` in the requested mode.
pub fn y_plus_tor_reductive(rd: &ReductiveDatum, mode: Mode) -> YPlusTor {
    let m = &rd.module;
    let moduli = m.moduli().to_vec();
    let nm = m.norm_matrix();
    let num = match mode {
        Mode::Fixed => matrix_kernel(&moduli, &moduli, &nm, |_| true),
        Mode::Stabilized => matrix_kernel(&moduli, &moduli, &nm, |r| moduli[r] == 0),
    };
    let den: Vec<Vec<i64>> = rd
        .torus
        .augmentation_in_ybar()
        .iter()
        .map(|v| m.reduce(&rd.quotient.canon(v)))
        .collect();
    YPlusTor {
        mode,
        sq: Subquotient::from_echelon(moduli, num, den.into_iter()),
        quotient: Some(rd.quotient.clone()),
    }
}

/// Each simple reflection moves every `Ȳ` basis vector by an element of
/// `Q^∨`.
pub fn weyl_triviality_check(rd: &ReductiveDatum) -> Report {
    let mut rep = Report::new("Weyl group acts trivially on Ȳ/Q^∨");
    let (num, den) = rd.torus.basis();
    let mut ok = true;
    let mut detail = String::new();
    for (i, (a, c)) in rd.roots.iter().zip(&rd.coroots).enumerate() {
        for k in 0..rd.torus.rank {
            let col = num.col(k);
            // ȳ = col / den in Y ⊗ Q; s(ȳ) - ȳ = -<α, ȳ> α^∨.
            let p = dot(a, &col);
            if p % den != 0 {
                ok = false;
                detail = format!("<α_{}, ȳ_{}> = {}/{} is not integral", i, k, p, den);
                continue;
            }
            let diff: Vec<i64> = c.iter().map(|&x| -(p / den) * x).collect();
            if !rd.in_coroot_lattice(&diff) {
                ok = false;
                detail = format!("s_{}(ȳ_{}) - ȳ_{} is not in Q^∨", i, k, k);
            }
        }
    }
    rep.value("reflections", format!("{}", rd.roots.len()));
    rep.value("coroots in orbit", format!("{}", rd.coroot_orbit.len()));
    rep.check("s(ȳ) - ȳ ∈ Q^∨", ok, detail);
    rep
}
/// Compares `Ȳ_{+,tor}(torus) / im((Q^∨)^N / IQ^∨)` with the reductive
/// group when `Ĥ^0(Γ, Q^∨) = 0`.
///
/// The fixed-level comparison is always made. The stabilized group is
/// compared as well when it coincides with the fixed-level one, or when
/// `(Q^∨)^Γ = 0`; otherwise the Tate groups of larger splitting groups need
/// not vanish and the comparison is skipped.
pub fn pizza_check(rd: &ReductiveDatum) -> Report {
    let mut rep = Report::new("coroot quotient model");
    let qmod = rd.coroot_module();
    let h0 = qmod.tate_zero();
    rep.value("Ĥ^0(Γ, Q^∨)", h0.group().describe());
    if !h0.group().is_trivial() {
        rep.value("condition", "not met");
        rep.skip("quotient model", "condition not met");
        return rep;
    }
    rep.value("condition", "met");
    let torus = y_plus_tor_torus(&rd.torus);
    let s = qmod.dim();
    let zeros = vec![0i64; s];
    let hm1 = Subquotient::from_echelon(
        zeros.clone(),
        matrix_kernel(&zeros, &zeros, &qmod.norm_matrix(), |_| true),
        qmod.augmentation_generators().into_iter(),
    );
    let basis = rd.coroot_basis();
    let to_ybar = |c: &[i64]| -> Vec<i64> {
        let mut y = vec![0i64; rd.torus.rank];
        for (k, b) in basis.iter().enumerate() {
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi += c[k] * bi;
            }
        }
        rd.torus.y_to_ybar(&y)
    };
    let g = match hm1.induced(&torus.sq, to_ybar) {
        Ok(g) => g,
        Err(e) => {
            rep.check("coroot map", false, format!("{}", e));
            return rep;
        }
    };
    let im = order(&abgroup::image(&g).0);
    rep.value("Ȳ_+,tor(torus)", torus.group().describe());
    rep.value("image of (Q^∨)^N/IQ^∨", format!("order {}", im));

    let fixed = y_plus_tor_reductive(rd, Mode::Fixed);
    let stab = y_plus_tor_reductive(rd, Mode::Stabilized);
    rep.value("Ȳ_+,tor(reductive, fixed)", fixed.group().describe());
    rep.value("Ȳ_+,tor(reductive, stabilized)", stab.group().describe());
    compare_quotient(&mut rep, "fixed", &torus, &fixed, &g, im);
    let q_invariants = qmod.invariants().0;
    if order(fixed.group()) == order(stab.group()) || q_invariants.is_trivial() {
        compare_quotient(&mut rep, "stabilized", &torus, &stab, &g, im);
    } else {
        rep.skip(
            "stabilized",
            "stabilized group exceeds the fixed level and (Q^∨)^Γ is nonzero",
        );
    }
    rep
}

fn compare_quotient(rep: &mut Report, label: &str, torus: &YPlusTor, target: &YPlusTor, g: &AbHom, im: u128) {
    let f = match torus.induced(target, |v| v.to_vec()) {
        Ok(f) => f,
        Err(e) => {
            rep.check(format!("{}: projection", label), false, format!("{}", e));
            return;
        }
    };
    rep.check(format!("{}: projection surjective", label), f.is_surjective(), "");
    let comp = g.then(&f).map(|h| h.is_zero_map()).unwrap_or(false);
    let k = order(&abgroup::kernel(&f).0);
    rep.check(
        format!("{}: kernel equals coroot image", label),
        comp && k == im,
        format!("|ker| = {}, |im| = {}", k, im),
    );
}


/// `M = Ȳ/(IY + Q^∨)`, its torsion subgroup and the dual of the latter.
#[derive(Clone, Debug)]
pub struct DualCenter {
    m: FinAb,
    torsion: FinAb,
    dual: FiniteDual,
}

impl DualCenter {
    pub fn m(&self) -> &FinAb {
        &self.m
    }

    pub fn torsion(&self) -> &FinAb {
        &self.torsion
    }

    pub fn dual(&self) -> &FiniteDual {
        &self.dual
    }

    /// Canonical coordinates in `M` of a point of `Ȳ`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        self.m.canon(v)
    }

    pub fn to_torsion(&self, v: &[i64]) -> Option<AbElement> {
        let c = self.m.canon(v);
        let t = self.m.torsion_invariants().len();
        if c[t..].iter().all(|&x| x == 0) {
            Some(c[..t].to_vec())
        } else {
            None
        }
    }

    /// A point of `Ȳ` representing an element of `M_tor`.
    pub fn lift_torsion(&self, x: &[i64]) -> Vec<i64> {
        let mut c = self.torsion.canon(x);
        c.resize(self.m.canon_dim(), 0);
        self.m.lift_canon(&c)
    }
}

pub fn pi0_dual_center(rd: &ReductiveDatum) -> DualCenter {
    let r = rd.torus.rank;
    let mut rels = rd.torus.augmentation_in_ybar();
    rels.extend(rd.q.basis().map(|v| rd.torus.y_to_ybar(&narrow(v))));
    let rel = if rels.is_empty() {
        IntMatrix::zeros(r, 0)
    } else {
        IntMatrix::from_cols(r, &rels)
    };
    let m = FinAb::new(r, rel).expect("relations");
    let (torsion, _) = abgroup::torsion_subgroup(&m);
    let dual = dual_finite(&torsion).expect("torsion is finite");
    DualCenter { m, torsion, dual }
}

/// `<λ̄, χ>`: evaluation of `χ ∈ M_tor^*` at the image of `λ̄`.
pub fn tn_pairing(center: &DualCenter, ypt: &YPlusTor, class: &[i64], chi: &[i64]) -> Result<QZ, RigidError> {
    let x = center.to_torsion(&ypt.lift(class)).ok_or(RigidError::NotTorsion)?;
    Ok(center.dual.eval(chi, &x))
}

/// Bilinearity and kernels of the pairing in both modes.
pub fn pairing_report(rd: &ReductiveDatum) -> Report {
    let mut rep = Report::new("Tate-Nakayama pairing");
    let center = pi0_dual_center(rd);
    let chars = center.dual.group().canon_elements().expect("finite");
    let dg = center.dual.group().clone();
    rep.value("M_tor", center.torsion.describe());
    for mode in [Mode::Fixed, Mode::Stabilized] {
        let ypt = y_plus_tor_reductive(rd, mode);
        let g = ypt.group().clone();
        rep.value(format!("Ȳ_+,tor ({})", mode.as_str()), g.describe());
        let elems = ypt.elements();
        let table: Option<Vec<Vec<QZ>>> = elems
            .iter()
            .map(|a| chars.iter().map(|c| tn_pairing(&center, &ypt, a, c).ok()).collect())
            .collect();
        let table = match table {
            Some(t) => t,
            None => {
                rep.check(format!("{}: image is torsion", mode.as_str()), false, "");
                continue;
            }
        };
        let index = |e: &[i64]| elems.iter().position(|x| x.as_slice() == g.canon(e)).expect("element");
        let cindex = |e: &[i64]| chars.iter().position(|x| x.as_slice() == dg.canon(e)).expect("character");
        let mut bilinear = true;
        for i in 0..g.generator_count() {
            let gen = g.generator(i);
            for (ai, a) in elems.iter().enumerate() {
                let s = index(&g.add(a, &gen));
                for ci in 0..chars.len() {
                    bilinear &= table[s][ci] == table[ai][ci] + table[index(&gen)][ci];
                }
            }
        }
        for j in 0..dg.generator_count() {
            let gen = dg.generator(j);
            let gj = cindex(&gen);
            for (ci, c) in chars.iter().enumerate() {
                let s = cindex(&dg.add(c, &gen));
                for ai in 0..elems.len() {
                    bilinear &= table[ai][s] == table[ai][ci] + table[ai][gj];
                }
            }
        }
        rep.check(format!("{}: bilinear", mode.as_str()), bilinear, "");
        let left = elems
            .iter()
            .enumerate()
            .all(|(ai, a)| g.is_zero(a) || table[ai].iter().any(|v| !v.is_zero()));
        rep.check(format!("{}: left kernel trivial", mode.as_str()), left, "");
        if mode == Mode::Stabilized {
            let right = chars
                .iter()
                .enumerate()
                .all(|(ci, c)| dg.is_zero(c) || table.iter().any(|row| !row[ci].is_zero()));
            rep.check("stabilized: right kernel trivial", right, "");
        }
    }
    rep
}

/// For `|Γ| = 2`: the image of the fixed-level group in `M_tor` is the set
/// of elements killed by the norm `M -> Ȳ/Q^∨`.
pub fn real_image_characterization(rd: &ReductiveDatum) -> Result<Report, RigidError> {
    let order_g = rd.torus.group.order();
    if order_g != 2 {
        return Err(RigidError::WrongGroup(order_g));
    }
    let mut rep = Report::new("image of Ȳ_+,tor in M_tor");
    let center = pi0_dual_center(rd);
    let ypt = y_plus_tor_reductive(rd, Mode::Fixed);
    let mut image = BTreeSet::new();
    for a in ypt.elements() {
        let x = center.to_torsion(&ypt.lift(&a)).ok_or(RigidError::NotTorsion)?;
        image.insert(x);
    }
    let nb = rd.torus.norm_bar();
    let mut kernel = BTreeSet::new();
    for x in center.torsion.canon_elements()? {
        let v = nb.mul_vec(&center.lift_torsion(&x));
        if rd.quotient.is_zero(&v) {
            kernel.insert(x);
        }
    }
    rep.value("image", format!("{} elements", image.len()));
    rep.value("norm kernel", format!("{} elements", kernel.len()));
    rep.check("image equals norm kernel", image == kernel, "");
    Ok(rep)
}

/// An equivariant map `Y_1 -> Y_2` carrying `Ȳ_1` into `Ȳ_2`.
#[derive(Clone, Debug)]
pub struct TorusMorphism {
    source: TorusDatum,
    target: TorusDatum,
    matrix: IntMatrix,
    bar: IntMatrix,
}

impl TorusMorphism {
    pub fn new(source: &TorusDatum, target: &TorusDatum, matrix: IntMatrix) -> Result<TorusMorphism, RigidError> {
        if source.group != target.group {
            return Err(RigidError::Shape(String::from("tori over different groups")));
        }
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(RigidError::Shape(String::from("morphism matrix has wrong shape")));
        }
        for g in source.group.elements() {
            if target.rho[g].mul(&matrix) != matrix.mul(&source.rho[g]) {
                return Err(RigidError::Module(GModError::NotEquivariant));
            }
        }
        // f̄ = C_2 f B_1.
        let (num, den) = source.basis();
        let m = target.c.mul(&matrix).mul(num);
        if m.data().iter().any(|x| x % den != 0) {
            return Err(RigidError::NotIntegral(String::from("the map does not carry Ȳ_1 into Ȳ_2")));
        }
        let bar = IntMatrix::new(m.rows(), m.cols(), m.data().iter().map(|x| x / den).collect())
            .expect("shape");
        Ok(TorusMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix,
            bar,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// The map in `Ȳ` coordinates.
    pub fn bar(&self) -> &IntMatrix {
        &self.bar
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TorusMorphism) -> Result<TorusMorphism, RigidError> {
        TorusMorphism::new(&self.source, &next.target, next.matrix.mul(&self.matrix))
    }

    pub fn on_y_plus_tor(&self) -> AbHom {
        y_plus_tor_torus(&self.source)
            .induced(&y_plus_tor_torus(&self.target), |v| self.bar.mul_vec(v))
            .expect("functoriality")
    }

    /// The map `M_1 -> M_2` on dual-center character groups.
    pub fn on_m(&self, c1: &DualCenter, c2: &DualCenter) -> AbHom {
        AbHom::new(c1.m.clone(), c2.m.clone(), self.bar.clone()).expect("IY and Q^∨ are preserved")
    }
}

/// Checks that the map on `Ȳ_{+,tor}` is compatible with the maps to
/// `Hom(u, Z)` at the given level and with the pairing.
pub fn morphism_report(f: &TorusMorphism, level: &LevelDatum) -> Result<Report, RigidError> {
    let mut rep = Report::new("torus morphism");
    let (t1, t2) = (&f.source, &f.target);
    let y1 = y_plus_tor_torus(t1);
    let y2 = y_plus_tor_torus(t2);
    let fy = f.on_y_plus_tor();
    let q1 = t1.quotient_y();
    let q2 = t2.quotient_y();
    let z2 = t2.z_module(level)?;
    let mut hom_ok = true;
    for a in y1.elements() {
        let h1 = to_hom_uz(t1, &y1, &a, level)?;
        let h2 = to_hom_uz(t2, &y2, &fy.apply(&a), level)?;
        let z1_lift = h1.hom.coefficients().module().lift_canon(&h1.value);
        let pushed = z2.reduce(&q2.canon(&f.bar.mul_vec(&q1.lift_canon(&z1_lift))));
        hom_ok &= pushed == h2.value;
    }
    rep.check("Hom(u, Z) square commutes", hom_ok, "");

    let c1 = pi0_dual_center(&ReductiveDatum::from_torus(t1.clone()));
    let c2 = pi0_dual_center(&ReductiveDatum::from_torus(t2.clone()));
    let fm = f.on_m(&c1, &c2);
    let gens1: Vec<Vec<i64>> = (0..c1.torsion.generator_count())
        .map(|i| c1.lift_torsion(&c1.torsion.generator(i)))
        .collect();
    let mut pair_ok = true;
    for chi in c2.dual.group().canon_elements()? {
        let values: Vec<QZ> = gens1
            .iter()
            .map(|v| {
                let x = c2.to_torsion(&fm.apply(v)).expect("torsion maps to torsion");
                c2.dual.eval(&chi, &x)
            })
            .collect();
        let pulled = match c1.dual.character_from_values(&values) {
            Some(p) => p,
            None => {
                pair_ok = false;
                continue;
            }
        };
        for a in y1.elements() {
            let lhs = tn_pairing(&c2, &y2, &fy.apply(&a), &chi)?;
            let rhs = tn_pairing(&c1, &y1, &a, &pulled)?;
            pair_ok &= lhs == rhs;
        }
    }
    rep.check("pairing is natural", pair_ok, "");
    Ok(rep)
}
