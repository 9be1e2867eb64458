//! Level cochains of a surjection `Δ -> Θ` and the unbalanced cup product.
//!
//! A cochain of degree `i` and level `j` is stored as a table over
//! `Δ^{i-j} × Θ^j`: its value on a tuple of `Δ` only depends on the images
//! in `Θ` of the last `j` arguments. Differentials are computed by lifting
//! the `Θ` arguments through a fixed section and applying the usual
//! inhomogeneous formula.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use thiserror::Error;

use crate::abgroup::{IntMatrix, QZ};
use crate::gmodule::{FiniteGroup, GammaModule};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("projection is not a surjective homomorphism")]
    NotSurjection,
    #[error("level {level} is not allowed in degree {degree}")]
    Level { degree: usize, level: usize },
    #[error("table has {got} values, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("lattice action is not a group action: {0}")]
    BadLattice(String),
}

/// An abelian group with an action of `Δ`, used as cochain values.
pub trait Coefficients {
    type Elem: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Action of an element of `Δ`.
    fn act(&self, g: usize, a: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn scale(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        let mut base = if k < 0 { self.neg(a) } else { a.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }
}

impl Coefficients for GammaModule {
    type Elem = Vec<i64>;
    fn zero(&self) -> Vec<i64> {
        GammaModule::zero(self)
    }
    fn add(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        GammaModule::add(self, a, b)
    }
    fn neg(&self, a: &Vec<i64>) -> Vec<i64> {
        GammaModule::neg(self, a)
    }
    fn act(&self, g: usize, a: &Vec<i64>) -> Vec<i64> {
        GammaModule::act(self, g, a)
    }
    fn scale(&self, a: &Vec<i64>, k: i64) -> Vec<i64> {
        GammaModule::scale(self, a, k)
    }
}

/// Roots of unity `e^{2πiθ}`, written additively as `θ ∈ Q/Z`, with `g`
/// acting as `θ ↦ units[g] θ` (complex conjugation is `-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootsOfUnity {
    units: Vec<i64>,
}

impl RootsOfUnity {
    pub fn new(units: Vec<i64>) -> RootsOfUnity {
        RootsOfUnity { units }
    }

    /// Trivial action of a group of the given order.
    pub fn trivial(order: usize) -> RootsOfUnity {
        RootsOfUnity { units: vec![1; order] }
    }

    pub fn units(&self) -> &[i64] {
        &self.units
    }
}

impl Coefficients for RootsOfUnity {
    type Elem = QZ;
    fn zero(&self) -> QZ {
        QZ::zero()
    }
    fn add(&self, a: &QZ, b: &QZ) -> QZ {
        *a + *b
    }
    fn neg(&self, a: &QZ) -> QZ {
        -*a
    }
    fn act(&self, g: usize, a: &QZ) -> QZ {
        a.mul_int(self.units[g])
    }
    fn scale(&self, a: &QZ, k: i64) -> QZ {
        a.mul_int(k)
    }
}

/// A surjection `Δ -> Θ` with a fixed set-theoretic section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSurjection {
    delta: FiniteGroup,
    theta: FiniteGroup,
    proj: Vec<usize>,
    section: Vec<usize>,
}

impl GroupSurjection {
    pub fn new(delta: FiniteGroup, theta: FiniteGroup, proj: Vec<usize>) -> Result<GroupSurjection, CochainError> {
        if !delta.is_surjection(&theta, &proj) {
            return Err(CochainError::NotSurjection);
        }
        let mut section = vec![usize::MAX; theta.order()];
        for g in delta.elements() {
            if section[proj[g]] == usize::MAX {
                section[proj[g]] = g;
            }
        }
        section[theta.identity()] = delta.identity();
        Ok(GroupSurjection {
            delta,
            theta,
            proj,
            section,
        })
    }

    /// `Δ = Θ` with the identity map.
    pub fn identity(group: FiniteGroup) -> GroupSurjection {
        let proj: Vec<usize> = group.elements().collect();
        GroupSurjection::new(group.clone(), group, proj).expect("identity map")
    }

    pub fn delta(&self) -> &FiniteGroup {
        &self.delta
    }

    pub fn theta(&self) -> &FiniteGroup {
        &self.theta
    }

    pub fn proj(&self, g: usize) -> usize {
        self.proj[g]
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    pub fn lift(&self, t: usize) -> usize {
        self.section[t]
    }

    /// Number of entries of a level cochain table.
    pub fn table_len(&self, degree: usize, level: usize) -> usize {
        self.delta.tuple_count(degree - level) * self.theta.tuple_count(level)
    }

    /// Mixed-radix index of `(δ-args, θ-args)`.
    fn index(&self, args: &[usize], level: usize) -> usize {
        let split = args.len() - level;
        let mut idx = 0;
        for &g in &args[..split] {
            idx = idx * self.delta.order() + g;
        }
        for &t in &args[split..] {
            idx = idx * self.theta.order() + t;
        }
        idx
    }

    fn args_of(&self, mut idx: usize, degree: usize, level: usize) -> Vec<usize> {
        let mut out = vec![0; degree];
        for k in (0..degree).rev() {
            let base = if k >= degree - level {
                self.theta.order()
            } else {
                self.delta.order()
            };
            out[k] = idx % base;
            idx /= base;
        }
        out
    }
}

/// A free `Θ`-lattice `Z^r` with a basis and integer action matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaLattice {
    rank: usize,
    actions: Vec<IntMatrix>,
}

impl ThetaLattice {
    pub fn new(theta: &FiniteGroup, actions: Vec<IntMatrix>) -> Result<ThetaLattice, CochainError> {
        if actions.len() != theta.order() {
            return Err(CochainError::BadLattice(String::from("one matrix per element required")));
        }
        let rank = actions[0].rows();
        if actions.iter().any(|a| a.rows() != rank || a.cols() != rank) {
            return Err(CochainError::BadLattice(String::from("matrices must be square of equal size")));
        }
        if actions[theta.identity()] != IntMatrix::identity(rank) {
            return Err(CochainError::BadLattice(String::from("identity must act trivially")));
        }
        for a in theta.elements() {
            for b in theta.elements() {
                if actions[a].mul(&actions[b]) != actions[theta.mul(a, b)] {
                    return Err(CochainError::BadLattice(String::from("not multiplicative")));
                }
            }
        }
        Ok(ThetaLattice { rank, actions })
    }

    pub fn trivial(theta: &FiniteGroup, rank: usize) -> ThetaLattice {
        ThetaLattice {
            rank,
            actions: vec![IntMatrix::identity(rank); theta.order()],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, t: usize) -> &IntMatrix {
        &self.actions[t]
    }

    pub fn act(&self, t: usize, v: &[i64]) -> Vec<i64> {
        self.actions[t].mul_vec(v)
    }

    pub fn norm(&self, v: &[i64]) -> Vec<i64> {
        let mut acc = vec![0; self.rank];
        for a in &self.actions {
            for (x, y) in acc.iter_mut().zip(a.mul_vec(v)) {
                *x += y;
            }
        }
        acc
    }
}

/// `A ⊗ B` for a `Δ`-module `A` and a free `Θ`-lattice `B`, stored as
/// `B`-coordinate tuples of `A`-elements with the diagonal action.
#[derive(Clone, Debug)]
pub struct LatticeTensor<'a, A: Coefficients> {
    base: &'a A,
    lattice: &'a ThetaLattice,
    surjection: &'a GroupSurjection,
}

impl<'a, A: Coefficients> LatticeTensor<'a, A> {
    pub fn new(base: &'a A, lattice: &'a ThetaLattice, surjection: &'a GroupSurjection) -> Self {
        LatticeTensor {
            base,
            lattice,
            surjection,
        }
    }

    /// `a ⊗ μ`.
    pub fn pure(&self, a: &A::Elem, mu: &[i64]) -> Vec<A::Elem> {
        mu.iter().map(|&m| self.base.scale(a, m)).collect()
    }
}

impl<A: Coefficients> Coefficients for LatticeTensor<'_, A> {
    type Elem = Vec<A::Elem>;
    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.lattice.rank]
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn act(&self, g: usize, a: &Self::Elem) -> Self::Elem {
        let m = self.lattice.action(self.surjection.proj(g));
        let moved: Vec<A::Elem> = a.iter().map(|x| self.base.act(g, x)).collect();
        (0..self.lattice.rank)
            .map(|l| {
                let mut acc = self.base.zero();
                for (k, x) in moved.iter().enumerate() {
                    let c = m.get(l, k);
                    if c != 0 {
                        acc = self.base.add(&acc, &self.base.scale(x, c));
                    }
                }
                acc
            })
            .collect()
    }
}

/// A cochain of degree `i` and level `j` (see the module docs).
#[derive(Clone, Debug, PartialEq)]
pub struct LevelCochain<E> {
    degree: usize,
    level: usize,
    values: Vec<E>,
}

impl<E: Clone + PartialEq + Debug> LevelCochain<E> {
    pub fn new(s: &GroupSurjection, degree: usize, level: usize, values: Vec<E>) -> Result<Self, CochainError> {
        if level > degree {
            return Err(CochainError::Level { degree, level });
        }
        let expected = s.table_len(degree, level);
        if values.len() != expected {
            return Err(CochainError::TableSize {
                got: values.len(),
                expected,
            });
        }
        Ok(LevelCochain { degree, level, values })
    }

    /// Builds the table from a function of `(Δ-args, Θ-args)` concatenated.
    pub fn from_fn<F>(s: &GroupSurjection, degree: usize, level: usize, f: F) -> Result<Self, CochainError>
    where
        F: Fn(&[usize]) -> E,
    {
        if level > degree {
            return Err(CochainError::Level { degree, level });
        }
        let values = (0..s.table_len(degree, level))
            .map(|idx| f(&s.args_of(idx, degree, level)))
            .collect();
        Ok(LevelCochain { degree, level, values })
    }

    pub fn zero<A: Coefficients<Elem = E>>(s: &GroupSurjection, coeffs: &A, degree: usize, level: usize) -> Self {
        LevelCochain {
            degree,
            level,
            values: vec![coeffs.zero(); s.table_len(degree, level)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    /// Value at a table point (last `level` arguments in `Θ`).
    pub fn get(&self, s: &GroupSurjection, args: &[usize]) -> &E {
        assert_eq!(args.len(), self.degree);
        &self.values[s.index(args, self.level)]
    }

    /// Value on a tuple of `Δ`.
    pub fn eval(&self, s: &GroupSurjection, args: &[usize]) -> E {
        assert_eq!(args.len(), self.degree);
        let split = self.degree - self.level;
        let mut key = args.to_vec();
        for k in split..self.degree {
            key[k] = s.proj(args[k]);
        }
        self.values[s.index(&key, self.level)].clone()
    }

    /// The same function viewed at a lower level.
    pub fn relevel(&self, s: &GroupSurjection, level: usize) -> Result<Self, CochainError> {
        if level > self.level {
            return Err(CochainError::Level {
                degree: self.degree,
                level,
            });
        }
        LevelCochain::from_fn(s, self.degree, level, |args| self.eval(s, &lift_args(s, args, level)))
    }

    pub fn add<A: Coefficients<Elem = E>>(&self, coeffs: &A, other: &Self) -> Self {
        assert_eq!((self.degree, self.level), (other.degree, other.level));
        LevelCochain {
            degree: self.degree,
            level: self.level,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| coeffs.add(a, b))
                .collect(),
        }
    }

    pub fn neg<A: Coefficients<Elem = E>>(&self, coeffs: &A) -> Self {
        LevelCochain {
            degree: self.degree,
            level: self.level,
            values: self.values.iter().map(|a| coeffs.neg(a)).collect(),
        }
    }

    pub fn is_zero<A: Coefficients<Elem = E>>(&self, coeffs: &A) -> bool {
        let z = coeffs.zero();
        self.values.iter().all(|v| *v == z)
    }
}

fn lift_args(s: &GroupSurjection, args: &[usize], level: usize) -> Vec<usize> {
    let split = args.len() - level;
    args.iter()
        .enumerate()
        .map(|(k, &a)| if k >= split { s.lift(a) } else { a })
        .collect()
}

/// `df` by the inhomogeneous formula; the level is preserved.
pub fn differential<A: Coefficients>(
    s: &GroupSurjection,
    coeffs: &A,
    f: &LevelCochain<A::Elem>,
) -> LevelCochain<A::Elem> {
    let i = f.degree;
    let d = &s.delta;
    LevelCochain::from_fn(s, i + 1, f.level, |args| {
        let g = lift_args(s, args, f.level);
        let mut acc = coeffs.act(g[0], &f.eval(s, &g[1..]));
        for k in 1..=i {
            let mut merged = Vec::with_capacity(i);
            merged.extend_from_slice(&g[..k - 1]);
            merged.push(d.mul(g[k - 1], g[k]));
            merged.extend_from_slice(&g[k + 1..]);
            let v = f.eval(s, &merged);
            acc = if k % 2 == 1 { coeffs.sub(&acc, &v) } else { coeffs.add(&acc, &v) };
        }
        let v = f.eval(s, &g[..i]);
        if (i + 1) % 2 == 1 {
            coeffs.sub(&acc, &v)
        } else {
            coeffs.add(&acc, &v)
        }
    })
    .expect("level fits")
}

/// The differential of a degree -1 cochain: the constant `N_Θ λ`.
pub fn differential_neg1(lattice: &ThetaLattice, lambda: &[i64]) -> Vec<i64> {
    lattice.norm(lambda)
}

/// `(f ⊔ λ)(g_1..g_{i-1}) = Σ_{a∈Θ} f(g_1..g_{i-1}, a) ⊗ (g_1⋯g_{i-1} a) λ`.
pub fn unbalanced_cup<A: Coefficients>(
    s: &GroupSurjection,
    coeffs: &A,
    f: &LevelCochain<A::Elem>,
    lattice: &ThetaLattice,
    lambda: &[i64],
) -> Result<LevelCochain<Vec<A::Elem>>, CochainError> {
    if f.level == 0 {
        return Err(CochainError::Level {
            degree: f.degree,
            level: 0,
        });
    }
    let tensor = LatticeTensor::new(coeffs, lattice, s);
    let theta = &s.theta;
    LevelCochain::from_fn(s, f.degree - 1, f.level - 1, |args| {
        let g = lift_args(s, args, f.level - 1);
        let prefix = s.proj(s.delta.product_of(&g));
        let mut acc = tensor.zero();
        let mut full = args.to_vec();
        full.push(0);
        for a in theta.elements() {
            *full.last_mut().expect("nonempty") = a;
            let val = f.get(s, &full);
            let mu = lattice.act(theta.mul(prefix, a), lambda);
            acc = tensor.add(&acc, &tensor.pure(val, &mu));
        }
        acc
    })
}

/// `(f ∪ b)(g_1..g_i) = f(g_1..g_i) ⊗ (g_1⋯g_i) b` for a degree-0 cochain `b`.
pub fn cup_degree0<A: Coefficients>(
    s: &GroupSurjection,
    coeffs: &A,
    f: &LevelCochain<A::Elem>,
    lattice: &ThetaLattice,
    b: &[i64],
) -> LevelCochain<Vec<A::Elem>> {
    let tensor = LatticeTensor::new(coeffs, lattice, s);
    LevelCochain::from_fn(s, f.degree, f.level, |args| {
        let g = lift_args(s, args, f.level);
        let mu = lattice.act(s.proj(s.delta.product_of(&g)), b);
        tensor.pure(f.get(s, args), &mu)
    })
    .expect("level fits")
}

/// Both sides of `d(f ⊔ λ) = df ⊔ λ + (-1)^i f ⊔ dλ`, at level `j - 1`.
#[derive(Clone, Debug)]
pub struct LeibnizOutcome<E> {
    pub lhs: LevelCochain<Vec<E>>,
    pub rhs: LevelCochain<Vec<E>>,
    pub holds: bool,
}

pub fn leibniz_check<A: Coefficients>(
    s: &GroupSurjection,
    coeffs: &A,
    f: &LevelCochain<A::Elem>,
    lattice: &ThetaLattice,
    lambda: &[i64],
) -> Result<LeibnizOutcome<A::Elem>, CochainError> {
    let tensor = LatticeTensor::new(coeffs, lattice, s);
    let lhs = differential(s, &tensor, &unbalanced_cup(s, coeffs, f, lattice, lambda)?);
    let first = unbalanced_cup(s, coeffs, &differential(s, coeffs, f), lattice, lambda)?;
    let mut second = cup_degree0(s, coeffs, f, lattice, &differential_neg1(lattice, lambda)).relevel(s, f.level - 1)?;
    if f.degree % 2 == 1 {
        second = second.neg(&tensor);
    }
    let rhs = first.add(&tensor, &second);
    let holds = lhs == rhs;
    Ok(LeibnizOutcome { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_z() -> GammaModule {
        GammaModule::character(FiniteGroup::cyclic(2), 0, &[1, -1]).unwrap()
    }

    #[test]
    fn differential_of_invariant_constant_vanishes() {
        let s = GroupSurjection::identity(FiniteGroup::cyclic(3));
        let m = GammaModule::trivial_action(FiniteGroup::cyclic(3), &crate::FinAb::cyclic(5));
        let f = LevelCochain::from_fn(&s, 0, 0, |_| vec![2]).unwrap();
        assert!(differential(&s, &m, &f).is_zero(&m));
    }

    #[test]
    fn differential_sign_module() {
        let s = GroupSurjection::identity(FiniteGroup::cyclic(2));
        let m = sign_z();
        let f = LevelCochain::from_fn(&s, 1, 0, |a| vec![if a[0] == 1 { 3 } else { 0 }]).unwrap();
        let df = differential(&s, &m, &f);
        // dz(σ,σ) = σ z(σ) - z(1) + z(σ) = -3 + 3
        assert_eq!(df.get(&s, &[1, 1]), &vec![0]);
    }

    #[test]
    fn neg1_differential_is_norm() {
        let g = FiniteGroup::cyclic(3);
        assert_eq!(differential_neg1(&ThetaLattice::trivial(&g, 1), &[1]), vec![3]);
        let sign = ThetaLattice::new(
            &FiniteGroup::cyclic(2),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        assert_eq!(differential_neg1(&sign, &[1]), vec![0]);
    }

    #[test]
    fn level_zero_cup_rejected() {
        let s = GroupSurjection::identity(FiniteGroup::cyclic(2));
        let m = sign_z();
        let f = LevelCochain::zero(&s, &m, 1, 0);
        assert!(unbalanced_cup(&s, &m, &f, &ThetaLattice::trivial(s.theta(), 1), &[1]).is_err());
    }

    #[test]
    fn cup_with_trivial_lattice_sums_last_slot() {
        let s = GroupSurjection::new(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]).unwrap();
        let q = RootsOfUnity::trivial(4);
        let f = LevelCochain::from_fn(&s, 2, 1, |a| QZ::new((a[0] * 3 + a[1]) as i64, 8)).unwrap();
        let lat = ThetaLattice::trivial(s.theta(), 1);
        let c = unbalanced_cup(&s, &q, &f, &lat, &[1]).unwrap();
        for g in 0..4 {
            let expect = QZ::new((g * 3) as i64, 8) + QZ::new((g * 3 + 1) as i64, 8);
            assert_eq!(c.get(&s, &[g]), &vec![expect]);
        }
    }

    #[test]
    fn leibniz_small_case() {
        let s = GroupSurjection::new(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]).unwrap();
        let q = RootsOfUnity::new(vec![1, -1, 1, -1]);
        let lat = ThetaLattice::new(
            s.theta(),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let f = LevelCochain::from_fn(&s, 2, 1, |a| QZ::new((a[0] * 5 + a[1] * 2 + 1) as i64, 12)).unwrap();
        assert!(leibniz_check(&s, &q, &f, &lat, &[1]).unwrap().holds);
    }
}
