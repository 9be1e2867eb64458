//! The gerb of `C/R` at finite level, written out completely.
//!
//! `Γ = {1, σ}` is `FiniteGroup::cyclic(2)` with `σ = 1`. Roots of unity are
//! angles in `Q/Z`. Points of a torus `S` are vectors of angles in `Y`
//! coordinates, so `σ` acts on them by `v ↦ -ρ(σ) v`. Elements of `u_n`
//! are canonical coordinates of [`UPoints::module`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::abgroup::{AbElement, AbError, IntMatrix, QZ};
use crate::cochain::{
    differential, unbalanced_cup, CochainError, GroupSurjection, LevelCochain, RootsOfUnity, ThetaLattice,
};
use crate::gerb::{build_u, hom_u_z, transition_p, GerbError, HomUZ, LevelDatum, Transition, UPoints};
use crate::gmodule::{FiniteGroup, GModError, GammaModule};
use crate::report::Report;
use crate::rigidcoh::{self, Mode, ReductiveDatum, RigidError, TorusDatum};
use crate::spectra::{GaussianScalar, Mat2};

const E: usize = 0;
const SIGMA: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RealGerbError {
    #[error("level {0} must be even and positive")]
    Level(i64),
    #[error("{coarse} does not divide {fine}")]
    Divisibility { fine: i64, coarse: i64 },
    #[error("λ̄ is not killed by the norm")]
    NotNormKilled,
    #[error("expected {expected} coordinates, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("value {0} is not a Gaussian root of unity")]
    NotGaussian(QZ),
    #[error("square of the strong form is not central: {0}")]
    NotCentral(String),
    #[error("matrix is not in SL2")]
    NotSpecialLinear,
    #[error("cocycle condition fails: {0}")]
    NotCocycle(String),
    #[error("order of the square does not divide the level {0}")]
    Order(i64),
    #[error("point {0:?} is not of order dividing the level")]
    NotTorsion(Vec<QZ>),
    #[error(transparent)]
    Rigid(#[from] RigidError),
    #[error(transparent)]
    Gerb(#[from] GerbError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Module(#[from] GModError),
    #[error(transparent)]
    Ab(#[from] AbError),
}

/// `e^{2πiθ}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity(QZ);

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e(2πi·{})", self.0)
    }
}

impl RootOfUnity {
    pub fn new(theta: QZ) -> RootOfUnity {
        RootOfUnity(theta)
    }

    pub fn from_fraction(a: i64, b: i64) -> RootOfUnity {
        RootOfUnity(QZ::new(a, b))
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity(QZ::zero())
    }

    pub fn angle(&self) -> QZ {
        self.0
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        RootOfUnity(self.0 + other.0)
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity(-self.0)
    }

    pub fn conj(&self) -> RootOfUnity {
        self.inv()
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        RootOfUnity(self.0.mul_int(k))
    }

    /// `k_n`: the root with angle `θ/n`, `θ ∈ [0, 1)`.
    pub fn root(&self, n: i64) -> RootOfUnity {
        assert!(n > 0, "root index must be positive");
        RootOfUnity(QZ::from_ratio(self.0.ratio() / n))
    }
}

/// A point of `Res_{C/R} G_m` given by angles at `e` and `σ`.
fn angles_to_u(u: &UPoints, n: i64, v: &[QZ]) -> Result<AbElement, RealGerbError> {
    let mut f = Vec::with_capacity(v.len());
    for t in v {
        let k = t.ratio() * n;
        if !k.is_integer() {
            return Err(RealGerbError::NotTorsion(v.to_vec()));
        }
        f.push(k.to_integer());
    }
    Ok(u.class_of(&f))
}

fn gamma() -> FiniteGroup {
    let g = FiniteGroup::cyclic(2);
    debug_assert_eq!(g.identity(), E);
    g
}

fn regular_lattice() -> ThetaLattice {
    let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    ThetaLattice::new(&gamma(), vec![IntMatrix::identity(2), swap]).expect("regular representation")
}

fn conjugation() -> RootsOfUnity {
    RootsOfUnity::new(vec![1, -1])
}

/// One level `n` of the real gerb: `c`, `l∘c`, `ξ` and the group `W_n`.
#[derive(Clone, Debug)]
pub struct RealLevel {
    n: i64,
    level: LevelDatum,
    u: UPoints,
    u_elements: Vec<AbElement>,
    lc: LevelCochain<QZ>,
    dlc: LevelCochain<QZ>,
    xi: Vec<AbElement>,
}

/// `(x, γ) ∈ W_n = u_n ⊠_ξ Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WElement {
    pub x: AbElement,
    pub gamma: usize,
}

impl RealLevel {
    pub fn new(n: i64) -> Result<RealLevel, RealGerbError> {
        if n < 2 || n % 2 != 0 {
            return Err(RealGerbError::Level(n));
        }
        let level = LevelDatum::real(n);
        let u = build_u(&level);
        let u_elements = u.module().elements()?;
        let s = GroupSurjection::identity(gamma());
        let roots = conjugation();
        let half = RootOfUnity::from_fraction(1, 2);
        let lc = LevelCochain::from_fn(&s, 2, 2, |a| {
            if a == [SIGMA, SIGMA] {
                half.root(n).angle()
            } else {
                QZ::zero()
            }
        })?;
        let dlc = differential(&s, &roots, &lc);
        let cup = unbalanced_cup(&s, &roots, &dlc, &regular_lattice(), &[1, 0])?;
        let mut xi = Vec::with_capacity(4);
        for g in [E, SIGMA] {
            for h in [E, SIGMA] {
                xi.push(angles_to_u(&u, n, cup.get(&s, &[g, h]))?);
            }
        }
        Ok(RealLevel {
            n,
            level,
            u,
            u_elements,
            lc,
            dlc,
            xi,
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn level(&self) -> &LevelDatum {
        &self.level
    }

    pub fn u(&self) -> &UPoints {
        &self.u
    }

    pub fn u_elements(&self) -> &[AbElement] {
        &self.u_elements
    }

    /// The 2-cocycle `c` with `c(σ,σ) = -1`.
    pub fn c(&self, g: usize, h: usize) -> RootOfUnity {
        if g == SIGMA && h == SIGMA {
            RootOfUnity::from_fraction(1, 2)
        } else {
            RootOfUnity::one()
        }
    }

    pub fn lc(&self, g: usize, h: usize) -> RootOfUnity {
        let s = GroupSurjection::identity(gamma());
        RootOfUnity(*self.lc.get(&s, &[g, h]))
    }

    /// `d(l∘c)`, a 3-cochain with values in `μ_n`.
    pub fn dlc(&self, g: usize, h: usize, k: usize) -> RootOfUnity {
        let s = GroupSurjection::identity(gamma());
        RootOfUnity(*self.dlc.get(&s, &[g, h, k]))
    }

    pub fn xi(&self, g: usize, h: usize) -> &AbElement {
        &self.xi[2 * g + h]
    }

    /// `ξ` as a cochain table over `Γ²`.
    pub fn xi_table(&self) -> Vec<Vec<i64>> {
        self.xi.clone()
    }

    pub fn xi_class_nontrivial(&self) -> Result<bool, RealGerbError> {
        Ok(!self.u.module().cohomology(2)?.is_trivial_class(&self.xi)?)
    }

    fn u_add(&self, a: &[i64], b: &[i64]) -> AbElement {
        self.u.module().add(a, b)
    }

    fn u_act(&self, g: usize, a: &[i64]) -> AbElement {
        self.u.module().act(g, a)
    }

    pub fn w_identity(&self) -> WElement {
        WElement {
            x: self.u.module().zero(),
            gamma: E,
        }
    }

    pub fn w_mul(&self, a: &WElement, b: &WElement) -> WElement {
        let x = self.u_add(&self.u_add(&a.x, &self.u_act(a.gamma, &b.x)), self.xi(a.gamma, b.gamma));
        WElement {
            x,
            gamma: a.gamma ^ b.gamma,
        }
    }

    pub fn w_inverse(&self, a: &WElement) -> WElement {
        let s = self.u_add(&a.x, self.xi(a.gamma, a.gamma));
        WElement {
            x: self.u.module().neg(&self.u_act(a.gamma, &s)),
            gamma: a.gamma,
        }
    }

    pub fn w_elements(&self) -> Vec<WElement> {
        let mut out = Vec::with_capacity(2 * self.u_elements.len());
        for gamma in [E, SIGMA] {
            for x in &self.u_elements {
                out.push(WElement { x: x.clone(), gamma });
            }
        }
        out
    }

    pub fn w_order(&self) -> usize {
        2 * self.u_elements.len()
    }

    /// `γ ↦ (1, γ)`.
    pub fn section(&self, gamma: usize) -> WElement {
        WElement {
            x: self.u.module().zero(),
            gamma,
        }
    }

    pub fn embed(&self, x: &[i64]) -> WElement {
        WElement {
            x: self.u.module().reduce(x),
            gamma: E,
        }
    }

    /// Exhaustive group axioms for `W_n` and the cocycle properties of `c`
    /// and `ξ`.
    pub fn report(&self) -> Report {
        let mut r = Report::new(format!("real gerb at level {}", self.n));
        let s = GroupSurjection::identity(gamma());
        let roots = conjugation();
        let c = LevelCochain::from_fn(&s, 2, 2, |a| self.c(a[0], a[1]).angle()).expect("degree 2");
        r.check("c is a cocycle", differential(&s, &roots, &c).is_zero(&roots), "");
        let lc_root = self.lc(SIGMA, SIGMA);
        r.check(
            "l∘c is an n-th root of c",
            lc_root.pow(self.n) == self.c(SIGMA, SIGMA),
            format!("l∘c(σ,σ) = {}", lc_root.angle()),
        );
        let m = self.u.module();
        let normalized = [(E, E), (E, SIGMA), (SIGMA, E)].iter().all(|&(g, h)| m.reduce(self.xi(g, h)) == m.zero());
        r.check("ξ is normalized", normalized, "");
        r.check("ξ is a cocycle", m.cohomology(2).map(|h| h.module().is_cocycle(2, &self.xi)).unwrap_or(false), "");
        match self.xi_class_nontrivial() {
            Ok(b) => {
                r.check("ξ has nontrivial class", b, "");
            }
            Err(e) => {
                r.check("ξ has nontrivial class", false, format!("{}", e));
            }
        }
        let expected = self.u.delta_e(1);
        let expected = self.u_act(SIGMA, &expected);
        r.check(
            "ξ(σ,σ) = σ(δ_e(ζ_n))",
            m.reduce(self.xi(SIGMA, SIGMA)) == m.reduce(&expected),
            format!("{:?}", self.u.representative(self.xi(SIGMA, SIGMA))),
        );

        let ws = self.w_elements();
        r.check("|W| = 2n", ws.len() as i64 == 2 * self.n, format!("{}", ws.len()));
        let mut assoc = true;
        for a in &ws {
            for b in &ws {
                let ab = self.w_mul(a, b);
                for c in &ws {
                    assoc &= self.w_mul(&ab, c) == self.w_mul(a, &self.w_mul(b, c));
                }
            }
        }
        r.check("associativity", assoc, format!("{} triples", ws.len().pow(3)));
        let e = self.w_identity();
        r.check("identity", ws.iter().all(|a| self.w_mul(&e, a) == *a && self.w_mul(a, &e) == *a), "");
        r.check(
            "inverses",
            ws.iter().all(|a| {
                let b = self.w_inverse(a);
                self.w_mul(a, &b) == e && self.w_mul(&b, a) == e
            }),
            "",
        );
        let incl = self.u_elements.iter().all(|x| {
            self.u_elements
                .iter()
                .all(|y| self.w_mul(&self.embed(x), &self.embed(y)) == self.embed(&self.u_add(x, y)))
        });
        r.check("u_n -> W_n is a homomorphism", incl, "");
        r.check(
            "W_n -> Γ is a homomorphism",
            ws.iter().all(|a| ws.iter().all(|b| self.w_mul(a, b).gamma == a.gamma ^ b.gamma)),
            "",
        );
        r
    }
}

/// `α` and the map `W_m -> W_n`, `(x, γ) ↦ (p(x) α(γ), γ)`.
#[derive(Clone, Debug)]
pub struct AlphaTransition {
    fine: RealLevel,
    coarse: RealLevel,
    p: Transition,
    alpha: Vec<AbElement>,
}

/// `α(γ) = -(l_n c ⊔ δ_e)(γ) + p((l_m c ⊔ δ_e)(γ))`.
pub fn alpha_transition(m: i64, n: i64) -> Result<AlphaTransition, RealGerbError> {
    if n <= 0 || m % n != 0 {
        return Err(RealGerbError::Divisibility { fine: m, coarse: n });
    }
    let fine = RealLevel::new(m)?;
    let coarse = RealLevel::new(n)?;
    let p = transition_p(&fine.level, &coarse.level, &[E, SIGMA])?;
    let s = GroupSurjection::identity(gamma());
    let roots = conjugation();
    let lat = regular_lattice();
    let cup_n = unbalanced_cup(&s, &roots, &coarse.lc, &lat, &[1, 0])?;
    let cup_m = unbalanced_cup(&s, &roots, &fine.lc, &lat, &[1, 0])?;
    let mut alpha = Vec::with_capacity(2);
    for g in [E, SIGMA] {
        // p raises points of Res G_m to the power m/n.
        let v: Vec<QZ> = cup_n
            .get(&s, &[g])
            .iter()
            .zip(cup_m.get(&s, &[g]))
            .map(|(a, b)| b.mul_int(m / n) - *a)
            .collect();
        alpha.push(angles_to_u(&coarse.u, n, &v)?);
    }
    Ok(AlphaTransition {
        fine,
        coarse,
        p,
        alpha,
    })
}

impl AlphaTransition {
    pub fn fine(&self) -> &RealLevel {
        &self.fine
    }

    pub fn coarse(&self) -> &RealLevel {
        &self.coarse
    }

    pub fn alpha(&self, g: usize) -> &AbElement {
        &self.alpha[g]
    }

    pub fn p(&self, x: &[i64]) -> AbElement {
        self.p.apply(x)
    }

    pub fn map(&self, w: &WElement) -> WElement {
        let u = self.coarse.u.module();
        WElement {
            x: u.add(&self.p(&w.x), &self.alpha[w.gamma]),
            gamma: w.gamma,
        }
    }

    pub fn report(&self) -> Report {
        let (m, n) = (self.fine.n, self.coarse.n);
        let mut r = Report::new(format!("transition W_{} -> W_{}", m, n));
        let u = self.coarse.u.module();
        r.check("α is trivial", self.alpha.iter().all(|a| u.reduce(a) == u.zero()), format!("{:?}", self.alpha));
        let mut ok = true;
        for g in [E, SIGMA] {
            for h in [E, SIGMA] {
                let d_alpha = u.add(&u.sub(&u.act(g, &self.alpha[h]), &self.alpha[g ^ h]), &self.alpha[g]);
                let rhs = u.sub(&self.p(self.fine.xi(g, h)), self.coarse.xi(g, h));
                ok &= u.reduce(&d_alpha) == u.reduce(&rhs);
            }
        }
        r.check("dα = p(ξ_m) - ξ_n", ok, "");
        let ws = self.fine.w_elements();
        let hom = ws.iter().all(|a| {
            ws.iter()
                .all(|b| self.map(&self.fine.w_mul(a, b)) == self.coarse.w_mul(&self.map(a), &self.map(b)))
        });
        r.check("W_m -> W_n is a homomorphism", hom, format!("{} pairs", ws.len() * ws.len()));
        let mut image: Vec<WElement> = ws.iter().map(|w| self.map(w)).collect();
        image.sort();
        image.dedup();
        r.check(
            "W_m -> W_n is surjective",
            image.len() == self.coarse.w_order(),
            format!("{} of {}", image.len(), self.coarse.w_order()),
        );
        r
    }
}

/// Galois action on points of `S`: `σ v = -ρ(σ) v`.
pub fn galois_on_s(t: &TorusDatum, g: usize, v: &[QZ]) -> Vec<QZ> {
    let rho = t.rho(g);
    let unit = if g == E { 1 } else { -1 };
    (0..t.rank())
        .map(|l| {
            (0..t.rank()).fold(QZ::zero(), |acc, k| acc + v[k].mul_int(unit * rho.get(l, k)))
        })
        .collect()
}

fn s_add(a: &[QZ], b: &[QZ]) -> Vec<QZ> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

fn s_sub(a: &[QZ], b: &[QZ]) -> Vec<QZ> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

/// `e^{2πiλ̄}` for `λ̄` in `Ȳ` coordinates: a point of `Z ⊂ S`.
pub fn exp_ybar(t: &TorusDatum, lambda: &[i64]) -> Vec<QZ> {
    let (num, den) = t.basis();
    num.mul_vec(lambda).iter().map(|&a| QZ::new(a, den)).collect()
}

/// The class in `Ȳ/Y` (canonical coordinates) of a point of `S` lying in `Z`.
pub fn s_point_in_z(t: &TorusDatum, v: &[QZ]) -> Option<AbElement> {
    // λ̄ = C ṽ must be integral for a lift ṽ.
    let c = t.y_in_ybar();
    let mut lam = Vec::with_capacity(t.rank());
    for r in 0..t.rank() {
        let x = v
            .iter()
            .enumerate()
            .fold(Ratio::from_integer(0i64), |acc, (k, q)| acc + q.ratio() * c.get(r, k));
        if !x.is_integer() {
            return None;
        }
        lam.push(x.to_integer());
    }
    Some(t.quotient_y().canon(&lam))
}

fn z_to_s(t: &TorusDatum, zc: &[i64]) -> Vec<QZ> {
    exp_ybar(t, &t.quotient_y().lift_canon(zc))
}

/// A cocycle `W_n -> S(C)` given by its restriction to `u_n` (the value
/// `φ(ζ_n) ∈ Z ≅ Ȳ/Y`) and its value at `1 ⊠ σ`.
#[derive(Clone, Debug)]
pub struct RealRigidCocycle {
    torus: TorusDatum,
    level: RealLevel,
    hom: HomUZ,
    restriction: AbElement,
    sigma_value: Vec<QZ>,
}

fn check_real_torus(t: &TorusDatum, n: i64) -> Result<(), RealGerbError> {
    if t.group().order() != 2 {
        return Err(RigidError::WrongGroup(t.group().order()).into());
    }
    if n % t.index() != 0 {
        return Err(RigidError::Divisibility { index: t.index(), n }.into());
    }
    Ok(())
}

impl RealRigidCocycle {
    /// Validates the key identity `t + σ t = φ(ξ(σ,σ))`, which together with
    /// the equivariance of `φ` is the cocycle condition.
    pub fn from_parts(
        torus: &TorusDatum,
        n: i64,
        restriction: &[i64],
        sigma_value: &[QZ],
    ) -> Result<RealRigidCocycle, RealGerbError> {
        check_real_torus(torus, n)?;
        if sigma_value.len() != torus.rank() {
            return Err(RealGerbError::Shape {
                expected: torus.rank(),
                got: sigma_value.len(),
            });
        }
        let level = RealLevel::new(n)?;
        let zm = torus.z_module(&level.level)?;
        let hom = hom_u_z(&level.level, &zm)?;
        let restriction = zm.reduce(restriction);
        hom.class_of_value(&restriction)?;
        let z = RealRigidCocycle {
            torus: torus.clone(),
            level,
            hom,
            restriction,
            sigma_value: sigma_value.to_vec(),
        };
        let lhs = s_add(&z.sigma_value, &galois_on_s(torus, SIGMA, &z.sigma_value));
        let rhs = z.phi(z.level.xi(SIGMA, SIGMA));
        if lhs != rhs {
            return Err(RealGerbError::NotCocycle(format!("t + σt = {:?}, φ(ξ(σ,σ)) = {:?}", lhs, rhs)));
        }
        Ok(z)
    }

    pub fn torus(&self) -> &TorusDatum {
        &self.torus
    }

    pub fn level(&self) -> &RealLevel {
        &self.level
    }

    /// `φ(ζ_n)` in canonical coordinates of `Ȳ/Y`.
    pub fn restriction(&self) -> &AbElement {
        &self.restriction
    }

    pub fn sigma_value(&self) -> &[QZ] {
        &self.sigma_value
    }

    /// `φ(x)` as a point of `S`.
    pub fn phi(&self, x: &[i64]) -> Vec<QZ> {
        let f = self.level.u.representative(x);
        z_to_s(&self.torus, &self.hom.evaluate(&self.level.u, &self.restriction, &f))
    }

    pub fn value(&self, w: &WElement) -> Vec<QZ> {
        let p = self.phi(&w.x);
        if w.gamma == SIGMA {
            s_add(&p, &self.sigma_value)
        } else {
            p
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.level.w_elements().iter().all(|w| self.value(w).iter().all(|q| q.is_zero()))
    }

    /// The cocycle identity on all pairs of `W_n`.
    pub fn cocycle_report(&self) -> Report {
        let mut r = Report::new(format!("cocycle at level {}", self.level.n));
        let ws = self.level.w_elements();
        let mut bad = 0usize;
        for a in &ws {
            for b in &ws {
                let lhs = self.value(&self.level.w_mul(a, b));
                let rhs = s_add(&self.value(a), &galois_on_s(&self.torus, a.gamma, &self.value(b)));
                if lhs != rhs {
                    bad += 1;
                }
            }
        }
        r.check("cocycle identity", bad == 0, format!("{} of {} pairs fail", bad, ws.len() * ws.len()));
        let zeta = self.phi(&self.level.u.delta_e(1));
        r.check(
            "restriction to u sends δ_e(ζ_n) to φ(ζ_n)",
            zeta == z_to_s(&self.torus, &self.restriction),
            format!("{:?}", zeta),
        );
        let equivariant = self.level.u_elements.iter().all(|x| {
            self.phi(&self.level.u_act(SIGMA, x)) == galois_on_s(&self.torus, SIGMA, &self.phi(x))
        });
        r.check("restriction to u is Galois equivariant", equivariant, "");
        r
    }

    /// A point `s` with `z(w) = w·s - s` for all `w`, among points whose
    /// angles have denominators dividing `bound`.
    pub fn find_coboundary(&self, bound: i64) -> Option<Vec<QZ>> {
        let ws = self.level.w_elements();
        enumerate_points(self.torus.rank(), bound).find(|s| {
            ws.iter().all(|w| {
                self.value(w) == s_sub(&galois_on_s(&self.torus, w.gamma, s), s)
            })
        })
    }

    pub fn add(&self, other: &RealRigidCocycle) -> Result<RealRigidCocycle, RealGerbError> {
        let zm = self.torus.z_module(&self.level.level)?;
        RealRigidCocycle::from_parts(
            &self.torus,
            self.level.n,
            &zm.add(&self.restriction, &other.restriction),
            &s_add(&self.sigma_value, &other.sigma_value),
        )
    }
}

fn enumerate_points(rank: usize, bound: i64) -> impl Iterator<Item = Vec<QZ>> {
    let total = (bound as u64).pow(rank as u32);
    (0..total).map(move |mut idx| {
        let mut v = Vec::with_capacity(rank);
        for _ in 0..rank {
            v.push(QZ::new((idx % bound as u64) as i64, bound));
            idx /= bound as u64;
        }
        v
    })
}

/// `λ̄` in `Ȳ` coordinates as a rational vector in `Y ⊗ Q`, scaled by `n`.
fn n_lambda_in_y(t: &TorusDatum, lambda: &[i64], n: i64) -> Vec<i64> {
    let (num, den) = t.basis();
    num.mul_vec(lambda).iter().map(|&a| a * n / den).collect()
}

/// `z_{λ̄}(x ⊠ γ) = φ_{λ̄}(x) + (l∘c ⊔ nλ̄)(γ)`.
pub fn z_lambda(t: &TorusDatum, lambda: &[i64], n: i64) -> Result<RealRigidCocycle, RealGerbError> {
    check_real_torus(t, n)?;
    if lambda.len() != t.rank() {
        return Err(RealGerbError::Shape {
            expected: t.rank(),
            got: lambda.len(),
        });
    }
    if t.norm_bar().mul_vec(lambda).iter().any(|&x| x != 0) {
        return Err(RealGerbError::NotNormKilled);
    }
    let level = RealLevel::new(n)?;
    let s = GroupSurjection::identity(gamma());
    let ylat = ThetaLattice::new(&gamma(), vec![t.rho(E).clone(), t.rho(SIGMA).clone()])?;
    let cup = unbalanced_cup(&s, &conjugation(), &level.lc, &ylat, &n_lambda_in_y(t, lambda, n))?;
    let restriction = t.quotient_y().canon(lambda);
    RealRigidCocycle::from_parts(t, n, &restriction, cup.get(&s, &[SIGMA]))
}

/// The classical `(c ∪ λ)(γ) = Σ_a c(γ, a) ⊗ γaλ` for `λ ∈ Y`.
pub fn classical_cup(t: &TorusDatum, lambda_y: &[i64]) -> Result<Vec<Vec<QZ>>, RealGerbError> {
    let s = GroupSurjection::identity(gamma());
    let c = LevelCochain::from_fn(&s, 2, 2, |a| {
        if a == [SIGMA, SIGMA] {
            QZ::new(1, 2)
        } else {
            QZ::zero()
        }
    })?;
    let ylat = ThetaLattice::new(&gamma(), vec![t.rho(E).clone(), t.rho(SIGMA).clone()])?;
    let cup = unbalanced_cup(&s, &conjugation(), &c, &ylat, lambda_y)?;
    Ok([E, SIGMA].iter().map(|&g| cup.get(&s, &[g]).clone()).collect())
}

/// For `λ̄ ∈ Y`: `z_{λ̄}` is trivial on `u` and its values on the section
/// differ from `c ∪ λ̄` by a coboundary.
pub fn classical_comparison(t: &TorusDatum, lambda: &[i64], n: i64, bound: i64) -> Result<Report, RealGerbError> {
    let mut r = Report::new("integral λ̄ against c ∪ λ̄");
    let lambda_y = t
        .ybar_to_y(lambda)
        .ok_or_else(|| RigidError::NotIntegral(String::from("λ̄ is not in Y")))?;
    let z = z_lambda(t, lambda, n)?;
    r.check(
        "trivial on u",
        z.level.u_elements.iter().all(|x| z.phi(x).iter().all(|q| q.is_zero())),
        "",
    );
    let cl = classical_cup(t, &lambda_y)?;
    let diff: Vec<Vec<QZ>> = [E, SIGMA]
        .iter()
        .map(|&g| s_sub(&z.value(&z.level.section(g)), &cl[g]))
        .collect();
    let found = enumerate_points(t.rank(), bound)
        .find(|s| [E, SIGMA].iter().all(|&g| diff[g] == s_sub(&galois_on_s(t, g, s), s)));
    r.check(
        "difference is a coboundary",
        found.is_some(),
        match &found {
            Some(s) => format!("s = {:?}", s),
            None => format!("none with denominator {}", bound),
        },
    );
    Ok(r)
}

/// The inflation of `z_{λ̄}` at level `n` along `W_m -> W_n` against
/// `z_{λ̄}` at level `m`.
pub fn inflation_stability_check(t: &TorusDatum, lambda: &[i64], n: i64, m: i64) -> Result<Report, RealGerbError> {
    let mut r = Report::new(format!("inflation from level {} to level {}", n, m));
    let tr = alpha_transition(m, n)?;
    let zn = z_lambda(t, lambda, n)?;
    let zm = z_lambda(t, lambda, m)?;
    let ws = tr.fine.w_elements();
    let bad = ws.iter().filter(|w| zn.value(&tr.map(w)) != zm.value(w)).count();
    r.check("pointwise equality", bad == 0, format!("{} of {} elements differ", bad, ws.len()));
    Ok(r)
}

/// `dc(σ,τ) = z(ξ(σ,τ))` for `c(γ) = z(s(γ))`, for the standard section
/// and for a perturbed one.
pub fn boundary_square_check(t: &TorusDatum, lambda: &[i64], n: i64) -> Result<Report, RealGerbError> {
    let mut r = Report::new(format!("boundary square at level {}", n));
    let z = z_lambda(t, lambda, n)?;
    let lv = &z.level;
    let perturbed = [lv.u.module().zero(), lv.u.delta_e(1)];
    for (label, offsets) in [("standard section", [lv.u.module().zero(), lv.u.module().zero()]), ("perturbed section", perturbed)] {
        let sec: Vec<WElement> = [E, SIGMA]
            .iter()
            .map(|&g| WElement {
                x: offsets[g].clone(),
                gamma: g,
            })
            .collect();
        let c: Vec<Vec<QZ>> = sec.iter().map(|w| z.value(w)).collect();
        let mut ok = true;
        for g in [E, SIGMA] {
            for h in [E, SIGMA] {
                let dc = s_sub(&s_add(&c[g], &galois_on_s(t, g, &c[h])), &c[g ^ h]);
                let prod = lv.w_mul(&lv.w_mul(&sec[g], &sec[h]), &lv.w_inverse(&sec[g ^ h]));
                ok &= prod.gamma == E && dc == z.phi(&prod.x);
                if label == "standard section" {
                    ok &= lv.u.module().reduce(&prod.x) == lv.u.module().reduce(lv.xi(g, h));
                }
            }
        }
        r.check(label, ok, "");
    }
    Ok(r)
}

/// `δ = g σ` with `g ∈ SL_2` over the Gaussian rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrongRealForm {
    g: Mat2,
}

impl StrongRealForm {
    pub fn new(g: Mat2) -> Result<StrongRealForm, RealGerbError> {
        if g.det() != GaussianScalar::one() {
            return Err(RealGerbError::NotSpecialLinear);
        }
        let sq = g.mul(&g.conj());
        match sq.scalar_value().and_then(|s| s.angle()) {
            Some(_) => Ok(StrongRealForm { g }),
            None => Err(RealGerbError::NotCentral(format!("{}", sq))),
        }
    }

    pub fn split() -> StrongRealForm {
        StrongRealForm { g: Mat2::identity() }
    }

    /// `[[0,1],[-1,0]] σ`, the compact form.
    pub fn compact() -> StrongRealForm {
        StrongRealForm {
            g: Mat2::from_ints([(0, 0), (1, 0), (-1, 0), (0, 0)]),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.g
    }

    /// `δ² = g σ(g)`.
    pub fn square(&self) -> Mat2 {
        self.g.mul(&self.g.conj())
    }

    pub fn square_angle(&self) -> QZ {
        self.square()
            .scalar_value()
            .and_then(|s| s.angle())
            .expect("validated on construction")
    }
}

/// A cocycle `W_n -> SL_2(C)` with values `φ(x) g_γ`, `g_1 = 1`, `g_σ = g`,
/// and `φ: u_n -> μ_2` central.
#[derive(Clone, Debug)]
pub struct Sl2Cocycle {
    level: RealLevel,
    hom: HomUZ,
    phi_value: AbElement,
    g: Mat2,
}

fn mu2_module() -> GammaModule {
    GammaModule::character(gamma(), 2, &[1, 1]).expect("trivial action")
}

impl Sl2Cocycle {
    pub fn new(n: i64, phi_value: &[i64], g: Mat2) -> Result<Sl2Cocycle, RealGerbError> {
        let level = RealLevel::new(n)?;
        let hom = hom_u_z(&level.level, &mu2_module())?;
        let phi_value = mu2_module().reduce(phi_value);
        hom.class_of_value(&phi_value)?;
        let z = Sl2Cocycle {
            level,
            hom,
            phi_value,
            g,
        };
        let key = z.g.mul(&z.g.conj());
        let rhs = z.phi(z.level.xi(SIGMA, SIGMA));
        if key != rhs {
            return Err(RealGerbError::NotCocycle(format!("g σ(g) = {}, φ(ξ(σ,σ)) = {}", key, rhs)));
        }
        Ok(z)
    }

    pub fn level(&self) -> &RealLevel {
        &self.level
    }

    /// `φ(ζ_n) ∈ μ_2`, as an element of `Z/2`.
    pub fn phi_value(&self) -> &AbElement {
        &self.phi_value
    }

    pub fn phi(&self, x: &[i64]) -> Mat2 {
        let f = self.level.u.representative(x);
        let v = self.hom.evaluate(&self.level.u, &self.phi_value, &f);
        let s = if v[0] == 0 { GaussianScalar::one() } else { -GaussianScalar::one() };
        Mat2::scalar(s)
    }

    pub fn value(&self, w: &WElement) -> Mat2 {
        let p = self.phi(&w.x);
        if w.gamma == SIGMA {
            p.mul(&self.g)
        } else {
            p
        }
    }

    pub fn cocycle_report(&self) -> Report {
        let mut r = Report::new(format!("SL2 cocycle at level {}", self.level.n));
        let ws = self.level.w_elements();
        let act = |g: usize, m: &Mat2| if g == SIGMA { m.conj() } else { *m };
        let bad = ws
            .iter()
            .flat_map(|a| ws.iter().map(move |b| (a, b)))
            .filter(|(a, b)| self.value(&self.level.w_mul(a, b)) != self.value(a).mul(&act(a.gamma, &self.value(b))))
            .count();
        r.check("cocycle identity", bad == 0, format!("{} of {} pairs fail", bad, ws.len() * ws.len()));
        r
    }
}

/// `δ_z = z(1 ⊠ σ) σ`, with `δ_z² = z(ξ(σ,σ))` checked.
pub fn strong_form_from_cocycle(z: &Sl2Cocycle) -> Result<StrongRealForm, RealGerbError> {
    let delta = StrongRealForm::new(z.value(&z.level.section(SIGMA)))?;
    let xi = z.value(&z.level.embed(z.level.xi(SIGMA, SIGMA)));
    if delta.square() != xi {
        return Err(RealGerbError::NotCocycle(format!("δ² = {}, z(ξ(σ,σ)) = {}", delta.square(), xi)));
    }
    Ok(delta)
}

/// `z_δ(x ⊠ 1) = φ_δ(x)`, `z_δ(1 ⊠ σ) = δσ^{-1}`, with `φ_δ(ζ_n) = δ²`.
pub fn cocycle_from_strong_form(delta: &StrongRealForm, n: i64) -> Result<Sl2Cocycle, RealGerbError> {
    let theta = delta.square_angle();
    if n % 2 != 0 || n % theta.order() != 0 {
        return Err(RealGerbError::Order(n));
    }
    // The center of SL_2 is μ_2.
    if theta.order() > 2 {
        return Err(RealGerbError::NotCentral(format!("{}", delta.square())));
    }
    Sl2Cocycle::new(n, &[theta.numer()], delta.g)
}

/// `δ = t σ` in `S(C) ⋊ Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusStrongForm {
    pub t: Vec<QZ>,
}

impl TorusStrongForm {
    pub fn square(&self, torus: &TorusDatum) -> Vec<QZ> {
        s_add(&self.t, &galois_on_s(torus, SIGMA, &self.t))
    }
}

pub fn torus_strong_form_from_cocycle(z: &RealRigidCocycle) -> Result<TorusStrongForm, RealGerbError> {
    let delta = TorusStrongForm {
        t: z.value(&z.level.section(SIGMA)),
    };
    let xi = z.value(&z.level.embed(z.level.xi(SIGMA, SIGMA)));
    if delta.square(&z.torus) != xi {
        return Err(RealGerbError::NotCocycle(String::from("δ² differs from z(ξ(σ,σ))")));
    }
    Ok(delta)
}

pub fn torus_cocycle_from_strong_form(
    torus: &TorusDatum,
    delta: &TorusStrongForm,
    n: i64,
) -> Result<RealRigidCocycle, RealGerbError> {
    let sq = delta.square(torus);
    let class = s_point_in_z(torus, &sq).ok_or_else(|| RealGerbError::NotCentral(format!("{:?}", sq)))?;
    RealRigidCocycle::from_parts(torus, n, &class, &delta.t)
}

/// Both strong forms of `SL_2` with `Z = μ_2`: their cocycles, round trips,
/// and the count against `Ȳ_{+,tor}`.
pub fn sl2_strong_form_report(n: i64) -> Result<Report, RealGerbError> {
    let mut r = Report::new(format!("strong forms of SL2 at level {}", n));
    let forms = [("split", StrongRealForm::split()), ("compact", StrongRealForm::compact())];
    let mut restrictions = Vec::new();
    for (name, delta) in &forms {
        let z = cocycle_from_strong_form(delta, n)?;
        r.absorb(name, z.cocycle_report());
        let back = strong_form_from_cocycle(&z)?;
        r.check(format!("{}: δ ↦ z_δ ↦ δ", name), back == *delta, format!("{}", back.matrix()));
        let again = cocycle_from_strong_form(&back, n)?;
        let same = z.level.w_elements().iter().all(|w| z.value(w) == again.value(w));
        r.check(format!("{}: z ↦ δ_z ↦ z", name), same, "");
        r.value(format!("{}: δ²", name), format!("{}", delta.square()));
        restrictions.push(z.phi_value.clone());
    }
    r.check(
        "restrictions to u differ, so the classes are distinct",
        restrictions[0] != restrictions[1],
        format!("{:?}", restrictions),
    );
    let y = rigidcoh::y_plus_tor_reductive(&ReductiveDatum::sl2_real(), Mode::Stabilized);
    let order = y.group().order().unwrap_or(0);
    r.check(
        "two classes, matching Ȳ_{+,tor} of SL2",
        order == forms.len() as u128,
        format!("|Ȳ_+,tor| = {}", order),
    );
    Ok(r)
}

/// For every `φ ∈ Hom(u_n, μ_2)^Γ`: `φ(ξ) = d(l∘c) ⊔ φ∘δ_e`, and the map
/// `φ ↦ [φ(ξ)] ∈ H²(Γ, μ_2)` is surjective.
pub fn xi_pushforward_check(n: i64) -> Result<Report, RealGerbError> {
    let mut r = Report::new(format!("φ(ξ) at level {}", n));
    let lv = RealLevel::new(n)?;
    let z = mu2_module();
    let hom = hom_u_z(&lv.level, &z)?;
    let h2 = z.cohomology(2)?;
    let mut classes = Vec::new();
    for phi in hom.group().canon_elements()? {
        let zv = hom.value(&phi);
        let lhs = phi_of_xi(&lv, &hom, &zv);
        let rhs = dlc_cup(&lv, &z, &zv);
        r.check(format!("φ = {:?}: two evaluations agree", zv), lhs == rhs, format!("{:?} vs {:?}", lhs, rhs));
        let class = h2.reduce(&lhs)?;
        r.value(format!("ξ*({:?})", zv), format!("{:?}", class));
        classes.push(class);
    }
    classes.sort();
    classes.dedup();
    let target = h2.group().order().unwrap_or(0);
    r.check(
        "ξ* is surjective",
        classes.len() as u128 == target,
        format!("{} of {} classes hit", classes.len(), target),
    );
    Ok(r)
}

fn phi_of_xi(lv: &RealLevel, hom: &HomUZ, zv: &[i64]) -> Vec<Vec<i64>> {
    lv.xi
        .iter()
        .map(|x| hom.evaluate(&lv.u, zv, &lv.u.representative(x)))
        .collect()
}

/// `(d(l∘c) ⊔ ψ)(g, h) = Σ_a k_a χ(b)^{-1} b·z`, `b = gha`, where
/// `d(l∘c)(g,h,a) = k_a/n` and `ψ(ζ_n) = z`.
fn dlc_cup(lv: &RealLevel, zm: &GammaModule, zv: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(4);
    for g in [E, SIGMA] {
        for h in [E, SIGMA] {
            let mut acc = zm.zero();
            for a in [E, SIGMA] {
                let theta = lv.dlc(g, h, a).angle();
                let k = (theta.ratio() * lv.n).to_integer();
                let b = g ^ h ^ a;
                let coeff = k * lv.level.chi_inverse(b);
                acc = zm.add(&acc, &zm.scale(&zm.act(b, zv), coeff));
            }
            out.push(acc);
        }
    }
    out
}

/// `φ_m = φ_n ∘ p` has `φ_m(ξ_m) = φ_n(ξ_n)` pointwise.
pub fn xi_pushforward_consistency(n: i64, m: i64) -> Result<Report, RealGerbError> {
    let mut r = Report::new(format!("φ(ξ) at levels {} and {}", n, m));
    let tr = alpha_transition(m, n)?;
    let z = mu2_module();
    let hn = hom_u_z(&tr.coarse.level, &z)?;
    let hm = hom_u_z(&tr.fine.level, &z)?;
    for phi in hn.group().canon_elements()? {
        let zv = hn.value(&phi);
        // φ_n ∘ p evaluated at δ_e(ζ_m).
        let zm_value = hn.evaluate(
            &tr.coarse.u,
            &zv,
            &tr.coarse.u.representative(&tr.p(&tr.fine.u.delta_e(1))),
        );
        let pulled_ok = tr.fine.u_elements.iter().all(|x| {
            hm.evaluate(&tr.fine.u, &zm_value, &tr.fine.u.representative(x))
                == hn.evaluate(&tr.coarse.u, &zv, &tr.coarse.u.representative(&tr.p(x)))
        });
        r.check(format!("φ = {:?}: pullback is φ_n ∘ p", zv), pulled_ok, "");
        let a = phi_of_xi(&tr.coarse, &hn, &zv);
        let b = phi_of_xi(&tr.fine, &hm, &zm_value);
        r.check(format!("φ = {:?}: tables agree", zv), a == b, format!("{:?} vs {:?}", a, b));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Vec<i64> {
        vec![1]
    }

    #[test]
    fn roots_and_compatibility() {
        let x = RootOfUnity::from_fraction(3, 7);
        for n in 1..=24 {
            assert_eq!(x.root(n).pow(n), x);
            for m in (n..=24).filter(|m| m % n == 0) {
                assert_eq!(x.root(m).pow(m / n), x.root(n));
            }
        }
        assert_eq!(RootOfUnity::from_fraction(1, 2).root(4).angle(), QZ::new(1, 8));
        assert_eq!(x.mul(&x.inv()), RootOfUnity::one());
    }

    #[test]
    fn levels_are_groups() {
        for n in [2, 4, 6, 8] {
            let lv = RealLevel::new(n).unwrap();
            let rep = lv.report();
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
            assert_eq!(lv.w_order() as i64, 2 * n);
        }
        assert_eq!(RealLevel::new(3).unwrap_err(), RealGerbError::Level(3));
    }

    #[test]
    fn xi_at_sigma_sigma() {
        let lv = RealLevel::new(4).unwrap();
        assert_eq!(lv.dlc(SIGMA, SIGMA, SIGMA).angle(), QZ::new(3, 4));
        let f = lv.u().representative(lv.xi(SIGMA, SIGMA));
        let g = vec![0, 3];
        assert_eq!(lv.u().class_of(&f), lv.u().class_of(&g));
    }

    #[test]
    fn transitions() {
        for (m, n) in [(4, 4), (8, 4), (12, 6), (12, 4), (6, 2)] {
            let tr = alpha_transition(m, n).unwrap();
            let rep = tr.report();
            assert!(rep.passed(), "{} {}: {:?}", m, n, rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn norm_one_cocycle() {
        let t = TorusDatum::norm_one_real();
        let z = z_lambda(&t, &half(), 4).unwrap();
        assert!(z.cocycle_report().passed());
        assert_eq!(z.level().w_order(), 8);
        assert_eq!(z.sigma_value(), &[QZ::new(1, 4)]);
        assert!(z_lambda(&t, &[0], 4).unwrap().is_trivial());
        assert!(matches!(
            z_lambda(&t, &half(), 2),
            Ok(_)
        ));
        assert!(z_lambda(&t, &half(), 3).is_err());
    }

    #[test]
    fn additivity_and_iy() {
        let t = TorusDatum::norm_one_real();
        let a = z_lambda(&t, &[1], 4).unwrap();
        let b = z_lambda(&t, &[3], 4).unwrap();
        let sum = z_lambda(&t, &[4], 4).unwrap();
        let ab = a.add(&b).unwrap();
        for w in a.level().w_elements() {
            assert_eq!(ab.value(&w), sum.value(&w));
        }
        // (σ - 1)μ for μ = 1 ∈ Y is -2 in Y, i.e. -4 in Ȳ coordinates.
        let iy = z_lambda(&t, &[-4], 4).unwrap();
        assert!(iy.find_coboundary(16).is_some());
        assert!(a.find_coboundary(16).is_none());
    }

    #[test]
    fn classical_and_inflation() {
        let t = TorusDatum::norm_one_real();
        assert!(classical_comparison(&t, &[2], 4, 16).unwrap().passed());
        for lam in [[0], [1], [2], [3]] {
            assert!(inflation_stability_check(&t, &lam, 4, 8).unwrap().passed());
            assert!(boundary_square_check(&t, &lam, 4).unwrap().passed());
        }
    }

    #[test]
    fn strong_forms() {
        let rep = sl2_strong_form_report(4).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        let trivial = cocycle_from_strong_form(&StrongRealForm::split(), 2).unwrap();
        assert_eq!(trivial.phi_value(), &vec![0]);
        let c = cocycle_from_strong_form(&StrongRealForm::compact(), 4).unwrap();
        assert_eq!(c.phi_value(), &vec![1]);
        let d = StrongRealForm::new(Mat2::from_ints([(0, 1), (0, 0), (0, 0), (0, -1)])).unwrap();
        assert_eq!(d.square(), Mat2::identity());
        assert!(StrongRealForm::new(Mat2::from_ints([(2, 0), (0, 0), (0, 0), (1, 0)])).is_err());
    }

    #[test]
    fn torus_dictionary() {
        let t = TorusDatum::norm_one_real();
        let z = z_lambda(&t, &half(), 4).unwrap();
        let delta = torus_strong_form_from_cocycle(&z).unwrap();
        let back = torus_cocycle_from_strong_form(&t, &delta, 4).unwrap();
        for w in z.level().w_elements() {
            assert_eq!(back.value(&w), z.value(&w));
        }
        assert_eq!(torus_strong_form_from_cocycle(&back).unwrap(), delta);
    }

    #[test]
    fn xi_pushforward() {
        for n in [2, 4, 6] {
            let r = xi_pushforward_check(n).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
        assert!(xi_pushforward_consistency(2, 4).unwrap().passed());
    }
}
