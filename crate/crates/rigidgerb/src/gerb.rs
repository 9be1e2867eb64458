//! The finite groups `u_{E/F,n}`, their characters and transition maps.
//!
//! Roots of unity in `μ_n` are written additively as residues mod `n`, so a
//! point of `Res μ_n` is a function `Γ -> Z/n` and `u_n` is the quotient by
//! constant functions. The Galois action on `μ_n` is multiplication by a
//! unit `χ(σ)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::abgroup::{AbElement, AbError, AbHom, FinAb, IntMatrix, Subquotient};
use crate::gmodule::{induced_map, FiniteGroup, GModError, GammaHom, GammaModule};
use crate::lattice::{self, Constraint};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GerbError {
    #[error("invalid cyclotomic action: {0}")]
    Action(String),
    #[error("{coarse} does not divide {fine}")]
    Divisibility { fine: i64, coarse: i64 },
    #[error("projection is not a surjective homomorphism")]
    NotSurjection,
    #[error("cyclotomic actions are incompatible with the projection")]
    Incompatible,
    #[error("coefficient module is infinite")]
    InfiniteCoefficients,
    #[error(transparent)]
    Module(#[from] GModError),
    #[error(transparent)]
    Ab(#[from] AbError),
}

/// `Γ`, the level `n`, and the action of `Γ` on `μ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDatum {
    group: FiniteGroup,
    n: i64,
    chi: Vec<i64>,
}

impl LevelDatum {
    pub fn new(group: FiniteGroup, n: i64, chi: Vec<i64>) -> Result<LevelDatum, GerbError> {
        if n < 1 {
            return Err(GerbError::Action(String::from("level must be positive")));
        }
        if chi.len() != group.order() {
            return Err(GerbError::Action(String::from("one unit per group element required")));
        }
        let chi: Vec<i64> = chi.iter().map(|c| c.rem_euclid(n)).collect();
        for (g, &c) in chi.iter().enumerate() {
            if lattice::gcd(c as i128, n as i128) != 1 {
                return Err(GerbError::Action(format!("χ({}) = {} is not a unit mod {}", g, c, n)));
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                if chi[group.mul(a, b)] != (chi[a] * chi[b]).rem_euclid(n) {
                    return Err(GerbError::Action(String::from("not a homomorphism")));
                }
            }
        }
        Ok(LevelDatum { group, n, chi })
    }

    /// Extends a unit per generator to the whole group.
    pub fn from_generators(group: FiniteGroup, n: i64, gens: &[(usize, i64)]) -> Result<LevelDatum, GerbError> {
        let mut chi: Vec<Option<i64>> = vec![None; group.order()];
        chi[group.identity()] = Some(1 % n.max(1));
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            for &(g, u) in gens {
                let y = group.mul(g, x);
                let v = (u * chi[x].expect("visited")).rem_euclid(n);
                match chi[y] {
                    None => {
                        chi[y] = Some(v);
                        frontier.push(y);
                    }
                    Some(w) if w != v => {
                        return Err(GerbError::Action(String::from("generator units are inconsistent")))
                    }
                    _ => {}
                }
            }
        }
        let chi = chi
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GerbError::Action(String::from("generators do not generate the group")))?;
        LevelDatum::new(group, n, chi)
    }

    /// `Γ = Z/2` acting on `μ_n` by inversion (the case `C/R`).
    pub fn real(n: i64) -> LevelDatum {
        LevelDatum::new(FiniteGroup::cyclic(2), n, vec![1, -1]).expect("inversion is a unit action")
    }

    /// Trivial action on `μ_n`.
    pub fn trivial_action(group: FiniteGroup, n: i64) -> LevelDatum {
        let k = group.order();
        LevelDatum::new(group, n, vec![1; k]).expect("trivial action")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn chi(&self, g: usize) -> i64 {
        self.chi[g]
    }

    pub fn chi_inverse(&self, g: usize) -> i64 {
        self.chi[self.group.inv(g)]
    }

    /// `μ_n` as a module.
    pub fn mu(&self) -> GammaModule {
        GammaModule::character(self.group.clone(), self.n, &self.chi).expect("unit action")
    }

    /// `Res μ_n = Maps(Γ, μ_n)` with `(σf)(στ) = χ(σ) f(τ)`.
    pub fn res_mu(&self) -> GammaModule {
        GammaModule::new(self.group.clone(), &self.res_presentation(), self.point_actions()).expect("induced module")
    }

    fn res_presentation(&self) -> FinAb {
        FinAb::from_invariants(&vec![self.n; self.group.order()])
    }

    fn point_actions(&self) -> Vec<IntMatrix> {
        let k = self.group.order();
        self.group
            .elements()
            .map(|s| {
                let mut m = IntMatrix::zeros(k, k);
                for t in self.group.elements() {
                    m.set(self.group.mul(s, t), t, self.chi[s]);
                }
                m
            })
            .collect()
    }
}

/// `u_n = Res μ_n / μ_n` with its quotient map.
#[derive(Clone, Debug)]
pub struct UPoints {
    level: LevelDatum,
    presentation: FinAb,
    module: GammaModule,
}

impl UPoints {
    pub fn level(&self) -> &LevelDatum {
        &self.level
    }

    pub fn module(&self) -> &GammaModule {
        &self.module
    }

    pub fn order(&self) -> u128 {
        self.module.module().order().expect("finite")
    }

    /// Class of a function `Γ -> Z/n`.
    pub fn class_of(&self, f: &[i64]) -> AbElement {
        self.presentation.canon(f)
    }

    /// A function `Γ -> Z/n` representing a class.
    pub fn representative(&self, x: &[i64]) -> Vec<i64> {
        self.presentation
            .lift_canon(x)
            .iter()
            .map(|v| v.rem_euclid(self.level.n))
            .collect()
    }

    /// `δ_e(a)`: the function with value `a` at the identity.
    pub fn delta_e(&self, a: i64) -> AbElement {
        let mut f = vec![0; self.level.group.order()];
        f[self.level.group.identity()] = a;
        self.class_of(&f)
    }

    /// The quotient map `Res μ_n -> u_n` in canonical coordinates.
    pub fn quotient_map(&self) -> AbHom {
        let res = self.level.res_mu();
        let cols: Vec<Vec<i64>> = (0..res.dim())
            .map(|j| self.class_of(&res.module().lift_canon(&unit(res.dim(), j))))
            .collect();
        AbHom::new(
            res.module().clone(),
            self.module.module().clone(),
            IntMatrix::from_cols(self.module.dim(), &cols),
        )
        .expect("quotient map")
    }

    /// Exactness of `1 -> μ_n -> Res μ_n -> u_n -> 1`, plus the order formula.
    pub fn defining_sequence_report(&self) -> Report {
        let mut r = Report::new(format!("defining sequence of u at level {}", self.level.n));
        let k = self.level.group.order() as u32;
        let expect = (self.level.n as u128).pow(k - 1);
        r.check("order", self.order() == expect, format!("|u| = {}, n^(|Γ|-1) = {}", self.order(), expect));
        let res = self.level.res_mu();
        let diag = vec![1; self.level.group.order()];
        let incl = AbHom::new(
            self.level.mu().module().clone(),
            res.module().clone(),
            IntMatrix::from_cols(res.dim(), &[res.module().canon(&diag)]),
        );
        match incl {
            Ok(incl) => {
                let q = self.quotient_map();
                r.check("injective", incl.is_injective(), "");
                r.check("surjective", q.is_surjective(), "");
                let comp = incl.then(&q).expect("composable");
                let (ker, _) = crate::abgroup::kernel(&q);
                let (img, _) = crate::abgroup::image(&incl);
                r.check(
                    "exact in the middle",
                    comp.is_zero_map() && ker.order() == img.order(),
                    format!("|ker q| = {:?}, |im i| = {:?}", ker.order(), img.order()),
                );
            }
            Err(e) => {
                r.check("injective", false, format!("{}", e));
            }
        }
        r
    }
}

fn unit(dim: usize, j: usize) -> Vec<i64> {
    let mut e = vec![0; dim];
    e[j] = 1;
    e
}

pub fn build_u(level: &LevelDatum) -> UPoints {
    let k = level.group.order();
    let n = level.n;
    let mut rel = IntMatrix::zeros(k, k + 1);
    for t in 0..k {
        rel.set(t, t, n);
        rel.set(t, k, 1);
    }
    let presentation = FinAb::new(k, rel).expect("presentation");
    let module = GammaModule::new(level.group.clone(), &presentation, level.point_actions()).expect("u is a module");
    UPoints {
        level: level.clone(),
        presentation,
        module,
    }
}

/// `X^*(u_n) = (Z/n)[Γ]_0` with left multiplication, in the basis
/// `b_τ = [τ] - [e]` for `τ ≠ e`.
#[derive(Clone, Debug)]
pub struct UCharacters {
    level: LevelDatum,
    module: GammaModule,
    others: Vec<usize>,
}

impl UCharacters {
    pub fn module(&self) -> &GammaModule {
        &self.module
    }

    /// Coefficients `a_τ` of a character (sum zero).
    pub fn to_group_ring(&self, x: &[i64]) -> Vec<i64> {
        let g = &self.level.group;
        let n = self.level.n;
        let mut a = vec![0i64; g.order()];
        for (c, &t) in x.iter().zip(&self.others) {
            a[t] = (a[t] + c).rem_euclid(n);
            a[g.identity()] = (a[g.identity()] - c).rem_euclid(n);
        }
        a
    }

    /// Character with given group-ring coefficients (must sum to zero).
    pub fn from_group_ring(&self, a: &[i64]) -> Option<AbElement> {
        let n = self.level.n;
        if a.iter().sum::<i64>().rem_euclid(n) != 0 {
            return None;
        }
        Some(self.others.iter().map(|&t| a[t].rem_euclid(n)).collect())
    }

    /// `⟨a, f⟩ = Σ a_τ f(τ) ∈ Z/n` for a point `f` of `u_n`.
    pub fn pair(&self, u: &UPoints, a: &[i64], x: &[i64]) -> i64 {
        let f = u.representative(x);
        let coeffs = self.to_group_ring(a);
        let s: i128 = coeffs.iter().zip(&f).map(|(&p, &q)| p as i128 * q as i128).sum();
        s.rem_euclid(self.level.n as i128) as i64
    }
}

pub fn build_u_characters(level: &LevelDatum) -> UCharacters {
    let g = &level.group;
    let others = g.non_identity();
    let k = others.len();
    let pos = |t: usize| others.iter().position(|&x| x == t);
    let acts: Vec<IntMatrix> = g
        .elements()
        .map(|s| {
            let mut m = IntMatrix::zeros(k, k);
            for (j, &t) in others.iter().enumerate() {
                // s b_t = b_{st} - b_s
                if let Some(p) = pos(g.mul(s, t)) {
                    m.set(p, j, m.get(p, j) + 1);
                }
                if let Some(p) = pos(s) {
                    m.set(p, j, m.get(p, j) - 1);
                }
            }
            m
        })
        .collect();
    let module = GammaModule::new(g.clone(), &FinAb::from_invariants(&vec![level.n; k]), acts).expect("character module");
    UCharacters {
        level: level.clone(),
        module,
        others,
    }
}

/// `H^0(Γ, X^*(u_n))`.
pub fn invariants_of_u_characters(level: &LevelDatum) -> FinAb {
    build_u_characters(level).module().invariants().0
}

/// Whether the pairing `X^*(u) × u -> Z/n` is perfect (exhaustive).
pub fn pairing_is_perfect(level: &LevelDatum) -> bool {
    let u = build_u(level);
    let x = build_u_characters(level);
    let (Ok(points), Ok(chars)) = (u.module().elements(), x.module().elements()) else {
        return false;
    };
    if points.len() != chars.len() {
        return false;
    }
    let left = chars
        .iter()
        .all(|a| a.iter().all(|&c| c == 0) || points.iter().any(|p| x.pair(&u, a, p) != 0));
    let right = points
        .iter()
        .all(|p| p.iter().all(|&c| c == 0) || chars.iter().any(|a| x.pair(&u, a, p) != 0));
    left && right
}

/// The transition `p: u_m -> u_n` along `Γ -> Γ'`: with roots of unity
/// written additively it sums over fibres and reduces mod `n`.
#[derive(Clone, Debug)]
pub struct Transition {
    pub fine: UPoints,
    pub coarse: UPoints,
    proj: Vec<usize>,
    matrix: IntMatrix,
    res_matrix: IntMatrix,
}

impl Transition {
    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    /// The map on canonical coordinates of `u`.
    pub fn hom(&self) -> AbHom {
        AbHom::new(
            self.fine.module().module().clone(),
            self.coarse.module().module().clone(),
            self.matrix.clone(),
        )
        .expect("well defined")
    }

    pub fn apply(&self, x: &[i64]) -> AbElement {
        self.coarse.module().reduce(&self.matrix.mul_vec(x))
    }

    /// The map on functions `Γ -> Z/m`.
    pub fn apply_res(&self, f: &[i64]) -> Vec<i64> {
        let n = self.coarse.level.n;
        self.res_matrix.mul_vec(f).iter().map(|v| v.rem_euclid(n)).collect()
    }

    /// Surjectivity on points of `Res μ`.
    pub fn res_surjective(&self) -> bool {
        let fine = self.fine.level.res_mu();
        let coarse = self.coarse.level.res_mu();
        let m = fine.module();
        let cols: Vec<Vec<i64>> = (0..m.generator_count())
            .map(|j| coarse.module().canon(&self.apply_res(&m.lift_canon(&unit(m.generator_count(), j)))))
            .collect();
        AbHom::new(m.clone(), coarse.module().clone(), IntMatrix::from_cols(coarse.dim(), &cols))
            .map(|h| h.is_surjective())
            .unwrap_or(false)
    }

    pub fn is_surjective(&self) -> bool {
        self.hom().is_surjective()
    }

    /// The dual map `X^*(u_n) -> X^*(u_m)`: `a ↦ a ∘ p`.
    pub fn dual(&self, chars_coarse: &UCharacters, chars_fine: &UCharacters, a: &[i64]) -> AbElement {
        let m = self.fine.level.n;
        let n = self.coarse.level.n;
        let coarse = chars_coarse.to_group_ring(a);
        let fine: Vec<i64> = self
            .proj
            .iter()
            .map(|&t| (coarse[t] * (m / n)).rem_euclid(m))
            .collect();
        chars_fine.from_group_ring(&fine).expect("sum zero")
    }

    /// `H^i(p)`, with both modules viewed over the finer group.
    pub fn on_cohomology(&self, degree: i32) -> Result<AbHom, GerbError> {
        let src = self.fine.module().cohomology(degree)?;
        let pulled = self.coarse.module().pullback(self.fine.level.group(), &self.proj)?;
        let dst = pulled.cohomology(degree)?;
        Ok(induced_map(&src, &dst, None, |x| self.apply(x))?)
    }
}

pub fn transition_p(fine: &LevelDatum, coarse: &LevelDatum, proj: &[usize]) -> Result<Transition, GerbError> {
    let (m, n) = (fine.n, coarse.n);
    if m % n != 0 {
        return Err(GerbError::Divisibility { fine: m, coarse: n });
    }
    if !fine.group.is_surjection(&coarse.group, proj) {
        return Err(GerbError::NotSurjection);
    }
    for s in fine.group.elements() {
        if (fine.chi[s] - coarse.chi[proj[s]]).rem_euclid(n) != 0 {
            return Err(GerbError::Incompatible);
        }
    }
    let fu = build_u(fine);
    let cu = build_u(coarse);
    let (k, kc) = (fine.group.order(), coarse.group.order());
    let mut res_matrix = IntMatrix::zeros(kc, k);
    for b in 0..k {
        res_matrix.set(proj[b], b, 1);
    }
    let matrix_cols: Vec<Vec<i64>> = (0..fu.module().dim())
        .map(|j| {
            let f = fu.representative(&unit(fu.module().dim(), j));
            cu.class_of(&res_matrix.mul_vec(&f))
        })
        .collect();
    let matrix = IntMatrix::from_cols(cu.module().dim(), &matrix_cols);
    let t = Transition {
        fine: fu,
        coarse: cu,
        proj: proj.to_vec(),
        matrix,
        res_matrix,
    };
    // Equivariance through the pulled-back coarse module.
    let pulled = t.coarse.module().pullback(fine.group(), proj)?;
    GammaHom::new(t.fine.module().clone(), pulled, t.matrix.clone())?;
    Ok(t)
}

/// `Hom(μ_n, Z)^{N}`: elements `z ∈ Z[n]` with `Σ_τ χ(τ)^{-1} τ z = 0`.
#[derive(Clone, Debug)]
pub struct HomUZ {
    level: LevelDatum,
    coefficients: GammaModule,
    sq: Subquotient,
}

impl HomUZ {
    pub fn group(&self) -> &FinAb {
        self.sq.group()
    }

    /// The value `z = φ(ζ_n)` of the homomorphism `μ_n -> Z` for a class.
    pub fn value(&self, class: &[i64]) -> Vec<i64> {
        self.coefficients.reduce(&self.sq.lift(class))
    }

    pub fn class_of_value(&self, z: &[i64]) -> Result<AbElement, GerbError> {
        Ok(self.sq.reduce(&self.coefficients.reduce(z))?)
    }

    /// The homomorphism `u_n -> Z`, `f ↦ Σ_τ f(τ) χ(τ)^{-1} τ z`.
    pub fn realize(&self, u: &UPoints, class: &[i64]) -> AbHom {
        let z = self.value(class);
        self.realize_value(u, &z)
    }

    pub fn realize_value(&self, u: &UPoints, z: &[i64]) -> AbHom {
        let cols: Vec<Vec<i64>> = (0..u.module().dim())
            .map(|j| self.evaluate(u, z, &u.representative(&unit(u.module().dim(), j))))
            .collect();
        AbHom::new(
            u.module().module().clone(),
            self.coefficients.module().clone(),
            IntMatrix::from_cols(self.coefficients.dim(), &cols),
        )
        .expect("realization is well defined")
    }

    /// Value on a function `f: Γ -> Z/n`.
    pub fn evaluate(&self, _u: &UPoints, z: &[i64], f: &[i64]) -> Vec<i64> {
        let m = &self.coefficients;
        let mut acc = m.zero();
        for t in self.level.group.elements() {
            let k = (f[t] * self.level.chi_inverse(t)).rem_euclid(self.level.n);
            acc = m.add(&acc, &m.scale(&m.act(t, z), k));
        }
        acc
    }

    pub fn coefficients(&self) -> &GammaModule {
        &self.coefficients
    }
}

pub fn hom_u_z(level: &LevelDatum, z: &GammaModule) -> Result<HomUZ, GerbError> {
    if !z.is_finite() {
        return Err(GerbError::InfiniteCoefficients);
    }
    if z.group() != level.group() {
        return Err(GerbError::Module(GModError::BadAction(String::from("different groups"))));
    }
    let dim = z.dim();
    let n = level.n;
    let mut twisted = IntMatrix::zeros(dim, dim);
    for t in level.group.elements() {
        twisted = twisted.add(&z.action(t).scale(level.chi_inverse(t)));
    }
    let mut cons = Vec::new();
    for r in 0..dim {
        cons.push(Constraint {
            terms: vec![(r, n)],
            modulus: z.moduli()[r],
        });
        cons.push(Constraint {
            terms: (0..dim)
                .map(|c| (c, twisted.get(r, c)))
                .filter(|&(_, x)| x != 0)
                .collect(),
            modulus: z.moduli()[r],
        });
    }
    // Both constraint families are Z-linear on Z, so they vanish on its moduli.
    let ker = lattice::kernel(z.moduli(), cons);
    let sq = Subquotient::from_echelon(z.moduli().to_vec(), ker, core::iter::empty());
    Ok(HomUZ {
        level: level.clone(),
        coefficients: z.clone(),
        sq,
    })
}

/// `H^i(Γ, u_n)` for the real datum and the maps `H^1(u_{2n^2}) -> H^1(u_n)`.
pub fn real_tower_checks(ns: &[i64]) -> Report {
    let mut r = Report::new("real tower");
    for &n in ns {
        let u = build_u(&LevelDatum::real(n));
        let h2 = u.module().cohomology(2).expect("degree 2");
        let expect = lattice::gcd(n as i128, 2) as u128;
        r.check(
            format!("H2(u_{}) = {}", n, FinAb::cyclic(expect as i64).describe()),
            h2.group().order() == Some(expect) && h2.group().torsion_invariants().len() <= 1,
            h2.group().describe(),
        );
        let m = 2 * n * n;
        match transition_p(&LevelDatum::real(m), &LevelDatum::real(n), &[0, 1]) {
            Ok(t) => {
                let h1 = t.on_cohomology(1).expect("degree 1");
                r.check(
                    format!("H1(p): u_{} -> u_{} vanishes", m, n),
                    h1.is_zero_map(),
                    format!("{} -> {}", h1.source().describe(), h1.target().describe()),
                );
            }
            Err(e) => {
                r.check(format!("H1(p): u_{} -> u_{} vanishes", m, n), false, format!("{}", e));
            }
        }
    }
    r
}
