//! Finite groups given by multiplication tables, modules over them, and
//! cohomology in degrees -1 through 2.
//!
//! Module elements are always written in the canonical coordinates of the
//! underlying [`FinAb`] (torsion coordinates reduced, free coordinates last).
//! Cochains of degree `i` are tables over `Γ^i`, indexed with the first
//! argument most significant; degrees -1 and 0 use a table of length one.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::abgroup::{self, AbElement, AbError, AbHom, FinAb, IntMatrix, Subquotient};
use crate::lattice::{self, Constraint};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GModError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("action is not a group action: {0}")]
    BadAction(String),
    #[error("map is not equivariant")]
    NotEquivariant,
    #[error("map is not a surjective homomorphism")]
    NotSurjection,
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("unsupported degree {0}")]
    Degree(i32),
    #[error(transparent)]
    Ab(#[from] AbError),
}

/// A finite group on the indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table exhaustively (closure, associativity, identity,
    /// inverses).
    pub fn from_table(n: usize, table: Vec<usize>) -> Result<FiniteGroup, GModError> {
        if n == 0 || table.len() != n * n {
            return Err(GModError::NotAGroup(String::from("table must be n x n with n >= 1")));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(GModError::NotAGroup(String::from("entry out of range")));
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| GModError::NotAGroup(String::from("no identity")))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| GModError::NotAGroup(format!("element {} has no inverse", a)))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(GModError::NotAGroup(format!("not associative at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            n,
            table,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        FiniteGroup {
            n,
            table,
            identity: 0,
            inverse: (0..n).map(|a| (n - a) % n).collect(),
        }
    }

    /// Direct product; `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (p, q) = (self.n, other.n);
        let n = p * q;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let a = self.mul(x / q, y / q);
                let b = other.mul(x % q, y % q);
                table[x * n + y] = a * q + b;
            }
        }
        FiniteGroup {
            n,
            table,
            identity: self.identity * q + other.identity,
            inverse: (0..n)
                .map(|x| self.inv(x / q) * q + other.inv(x % q))
                .collect(),
        }
    }

    pub fn klein() -> FiniteGroup {
        FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2))
    }

    /// The symmetric group on three letters; element 0 is the identity and
    /// the sign homomorphism is [`FiniteGroup::s3_sign`].
    pub fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]])
            .expect("permutations")
            .0
    }

    /// Parity of each element of [`FiniteGroup::s3`] (0 even, 1 odd).
    pub fn s3_sign() -> Vec<usize> {
        let (_, perms) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).expect("permutations");
        perms.iter().map(|p| permutation_parity(p)).collect()
    }

    /// Closure of permutation generators (each a permutation of `0..d`).
    /// Composition is `(p q)(x) = p(q(x))`. Also returns the permutations in
    /// element order; element 0 is the identity.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<(FiniteGroup, Vec<Vec<usize>>), GModError> {
        let d = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut seen = vec![false; d];
            if g.len() != d {
                return Err(GModError::NotAGroup(String::from("permutations of different degrees")));
            }
            for &x in g {
                if x >= d || seen[x] {
                    return Err(GModError::NotAGroup(String::from("not a permutation")));
                }
                seen[x] = true;
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let mut elems: Vec<Vec<usize>> = vec![(0..d).collect()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let h = compose(g, &elems[i]);
                if !elems.contains(&h) {
                    elems.push(h);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = compose(&elems[a], &elems[b]);
                table[a * n + b] = elems.iter().position(|e| *e == c).expect("closed");
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("inverse"))
            .collect();
        Ok((
            FiniteGroup {
                n,
                table,
                identity: 0,
                inverse,
            },
            elems,
        ))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.n
    }

    /// Elements other than the identity, in index order.
    pub fn non_identity(&self) -> Vec<usize> {
        (0..self.n).filter(|&g| g != self.identity).collect()
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut x = self.identity;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Product `g_1 g_2 ... g_k` (identity for the empty list).
    pub fn product_of(&self, gs: &[usize]) -> usize {
        gs.iter().fold(self.identity, |acc, &g| self.mul(acc, g))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[self.identity] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![self.identity];
        for g in 0..self.n {
            if sub.binary_search(&g).is_err() {
                gens.push(g);
                sub = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.n
            && map.iter().all(|&x| x < target.n)
            && (0..self.n).all(|a| (0..self.n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }

    pub fn is_surjection(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        if !self.is_homomorphism(target, map) {
            return false;
        }
        let mut hit = vec![false; target.n];
        for &x in map {
            hit[x] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// Index of the tuple `gs` among `Γ^k` (first argument most significant).
    pub fn tuple_index(&self, gs: &[usize]) -> usize {
        gs.iter().fold(0, |acc, &g| acc * self.n + g)
    }

    /// Inverse of [`FiniteGroup::tuple_index`].
    pub fn tuple_of(&self, mut idx: usize, k: usize) -> Vec<usize> {
        let mut out = vec![0; k];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn tuple_count(&self, k: usize) -> usize {
        self.n.pow(k as u32)
    }
}

fn permutation_parity(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut parity = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        parity += len - 1;
    }
    parity % 2
}

/// A cochain table: one module element per tuple in `Γ^i`.
pub type CochainTable = Vec<Vec<i64>>;

/// A finitely generated abelian group with an action of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaModule {
    group: FiniteGroup,
    module: FinAb,
    moduli: Vec<i64>,
    actions: Vec<IntMatrix>,
}

impl GammaModule {
    /// `actions[g]` acts on generator coordinates of `module`; they are
    /// converted to canonical coordinates and checked.
    pub fn new(group: FiniteGroup, module: &FinAb, actions: Vec<IntMatrix>) -> Result<GammaModule, GModError> {
        if actions.len() != group.order() {
            return Err(GModError::BadAction(String::from("one matrix per group element required")));
        }
        let (canon, iso) = module.simplified();
        let back = module.from_canon_matrix();
        let mut cm = Vec::with_capacity(actions.len());
        for a in &actions {
            AbHom::new(module.clone(), module.clone(), a.clone())?;
            cm.push(iso.matrix().mul(a).mul(back));
        }
        GammaModule::from_canonical(group, canon, cm)
    }

    /// Same as [`GammaModule::new`] for a module already in invariant-factor
    /// form, with matrices on canonical coordinates.
    pub fn from_canonical(group: FiniteGroup, module: FinAb, actions: Vec<IntMatrix>) -> Result<GammaModule, GModError> {
        let moduli = module.canon_moduli();
        if module.generator_count() != moduli.len() || module.invariants() != moduli {
            return Err(GModError::BadAction(String::from("module must be in invariant-factor form")));
        }
        let dim = moduli.len();
        let mut reduced = Vec::with_capacity(actions.len());
        for a in actions {
            if a.rows() != dim || a.cols() != dim {
                return Err(GModError::BadAction(String::from("action matrix has wrong shape")));
            }
            let hom = AbHom::new(module.clone(), module.clone(), a)?;
            reduced.push(hom.canon_matrix());
        }
        let m = GammaModule {
            group,
            module,
            moduli,
            actions: reduced,
        };
        m.validate()?;
        Ok(m)
    }

    /// Extends actions of generators to the whole group, checking that the
    /// result is well defined.
    pub fn from_generator_actions(
        group: FiniteGroup,
        module: &FinAb,
        gens: &[(usize, IntMatrix)],
    ) -> Result<GammaModule, GModError> {
        let (canon, iso) = module.simplified();
        let back = module.from_canon_matrix().clone();
        let dim = canon.generator_count();
        let conv: Vec<(usize, IntMatrix)> = gens
            .iter()
            .map(|(g, a)| {
                AbHom::new(module.clone(), module.clone(), a.clone())?;
                let h = AbHom::new(canon.clone(), canon.clone(), iso.matrix().mul(a).mul(&back))?;
                Ok((*g, h.canon_matrix()))
            })
            .collect::<Result<_, GModError>>()?;
        let moduli = canon.canon_moduli();
        let mut actions: Vec<Option<IntMatrix>> = vec![None; group.order()];
        actions[group.identity()] = Some(IntMatrix::identity(dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (g, a) in &conv {
                let y = group.mul(*g, x);
                let m = reduce_matrix(&a.mul(actions[x].as_ref().expect("visited")), &moduli);
                match &actions[y] {
                    None => {
                        actions[y] = Some(m);
                        queue.push_back(y);
                    }
                    Some(existing) => {
                        if *existing != m {
                            return Err(GModError::BadAction(format!(
                                "generator actions are inconsistent at element {}",
                                y
                            )));
                        }
                    }
                }
            }
        }
        let actions: Vec<IntMatrix> = actions
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| GModError::BadAction(String::from("generators do not generate the group")))?;
        GammaModule::from_canonical(group, canon, actions)
    }

    pub fn trivial_action(group: FiniteGroup, module: &FinAb) -> GammaModule {
        let n = group.order();
        let dim = module.generator_count();
        GammaModule::new(group, module, vec![IntMatrix::identity(dim); n]).expect("trivial action")
    }

    /// `Z^r` with the given integer matrices (one per element).
    pub fn lattice(group: FiniteGroup, actions: Vec<IntMatrix>) -> Result<GammaModule, GModError> {
        let r = actions.first().map_or(0, |a| a.rows());
        GammaModule::from_canonical(group, FinAb::free(r), actions)
    }

    /// `Z/d` (or `Z` for `d = 0`) where `g` acts by multiplication by `units[g]`.
    pub fn character(group: FiniteGroup, d: i64, units: &[i64]) -> Result<GammaModule, GModError> {
        let acts = units.iter().map(|&u| IntMatrix::from_rows(&[vec![u]])).collect();
        GammaModule::new(group, &FinAb::from_invariants(&[d]), acts)
    }

    /// `(Z/d)[Γ]` (or `Z[Γ]` for `d = 0`) with left multiplication.
    pub fn regular(group: FiniteGroup, d: i64) -> GammaModule {
        GammaModule::permutation(group.clone(), d, &[group.identity()])
            .expect("regular module")
    }

    /// `(Z/d)[Γ/H]` for the subgroup `H` (sorted element list), with the left
    /// cosets in order of their smallest element.
    pub fn permutation(group: FiniteGroup, d: i64, subgroup: &[usize]) -> Result<GammaModule, GModError> {
        let cosets = left_cosets(&group, subgroup);
        let k = cosets.len();
        let coset_of = |x: usize| cosets.iter().position(|c| c.contains(&x)).expect("coset");
        let acts: Vec<IntMatrix> = group
            .elements()
            .map(|g| {
                let mut m = IntMatrix::zeros(k, k);
                for (j, c) in cosets.iter().enumerate() {
                    m.set(coset_of(group.mul(g, c[0])), j, 1);
                }
                m
            })
            .collect();
        GammaModule::new(group, &FinAb::from_invariants(&vec![d; k]), acts)
    }

    pub fn direct_sum(&self, other: &GammaModule) -> Result<GammaModule, GModError> {
        if self.group != other.group {
            return Err(GModError::BadAction(String::from("modules over different groups")));
        }
        let (a, b) = (self.dim(), other.dim());
        let mut inv = self.moduli.clone();
        inv.extend_from_slice(&other.moduli);
        let acts = self
            .group
            .elements()
            .map(|g| {
                let mut m = IntMatrix::zeros(a + b, a + b);
                for r in 0..a {
                    for c in 0..a {
                        m.set(r, c, self.actions[g].get(r, c));
                    }
                }
                for r in 0..b {
                    for c in 0..b {
                        m.set(a + r, a + c, other.actions[g].get(r, c));
                    }
                }
                m
            })
            .collect();
        let diag = FinAb::new(a + b, IntMatrix::diagonal(&inv))?;
        GammaModule::new(self.group.clone(), &diag, acts)
    }

    /// The module over a larger group acting through `proj`.
    pub fn pullback(&self, bigger: &FiniteGroup, proj: &[usize]) -> Result<GammaModule, GModError> {
        if !bigger.is_surjection(&self.group, proj) {
            return Err(GModError::NotSurjection);
        }
        let acts = bigger.elements().map(|g| self.actions[proj[g]].clone()).collect();
        GammaModule::from_canonical(bigger.clone(), self.module.clone(), acts)
    }

    fn validate(&self) -> Result<(), GModError> {
        let g = &self.group;
        if self.actions[g.identity()] != IntMatrix::identity(self.dim()) {
            return Err(GModError::BadAction(String::from("identity does not act trivially")));
        }
        for a in g.elements() {
            for b in g.elements() {
                let prod = reduce_matrix(&self.actions[a].mul(&self.actions[b]), &self.moduli);
                if prod != self.actions[g.mul(a, b)] {
                    return Err(GModError::BadAction(format!("action(g h) != action(g) action(h) for ({}, {})", a, b)));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The underlying group in invariant-factor form.
    pub fn module(&self) -> &FinAb {
        &self.module
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.actions[g]
    }

    pub fn action_hom(&self, g: usize) -> AbHom {
        AbHom::new_unchecked(self.module.clone(), self.module.clone(), self.actions[g].clone())
    }

    pub fn is_finite(&self) -> bool {
        self.module.is_finite()
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| if m > 0 { x.rem_euclid(m) } else { x })
            .collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        let s: Vec<i64> = a.iter().map(|x| x * k).collect();
        self.reduce(&s)
    }

    pub fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        self.reduce(&self.actions[g].mul_vec(v))
    }

    /// All elements (finite modules only).
    pub fn elements(&self) -> Result<Vec<Vec<i64>>, GModError> {
        Ok(self.module.canon_elements()?)
    }

    /// Matrix of `sum_g g`.
    pub fn norm_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.dim(), self.dim());
        for a in &self.actions {
            m = m.add(a);
        }
        reduce_matrix(&m, &self.moduli)
    }

    pub fn norm_map(&self) -> AbHom {
        AbHom::new_unchecked(self.module.clone(), self.module.clone(), self.norm_matrix())
    }

    pub fn norm(&self, v: &[i64]) -> Vec<i64> {
        self.reduce(&self.norm_matrix().mul_vec(v))
    }

    /// Generators `(g - 1) e_k` of the augmentation submodule `IM`.
    pub fn augmentation_generators(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for g in self.group.non_identity() {
            for k in 0..self.dim() {
                let mut e = self.zero();
                e[k] = 1;
                let v = self.sub(&self.act(g, &e), &e);
                if v.iter().any(|&x| x != 0) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// `IM` with its inclusion into `M`.
    pub fn augmentation_submodule(&self) -> (FinAb, AbHom) {
        let sq = Subquotient::new(self.moduli.clone(), self.augmentation_generators(), core::iter::empty())
            .expect("generated subgroup");
        subgroup_inclusion(&self.module, &sq)
    }

    /// `M^Γ` as a lattice in canonical coordinates.
    fn invariants_lattice(&self) -> lattice::Echelon {
        let mut cons = Vec::new();
        for g in self.group.non_identity() {
            let a = &self.actions[g];
            for r in 0..self.dim() {
                let terms = (0..self.dim())
                    .map(|c| (c, a.get(r, c) - if r == c { 1 } else { 0 }))
                    .filter(|&(_, x)| x != 0)
                    .collect();
                cons.push(Constraint {
                    terms,
                    modulus: self.moduli[r],
                });
            }
        }
        lattice::kernel(&self.moduli, cons)
    }

    fn norm_kernel_lattice(&self) -> lattice::Echelon {
        let nm = self.norm_matrix();
        let cons = (0..self.dim()).map(|r| Constraint {
            terms: (0..self.dim())
                .map(|c| (c, nm.get(r, c)))
                .filter(|&(_, x)| x != 0)
                .collect(),
            modulus: self.moduli[r],
        });
        lattice::kernel(&self.moduli, cons)
    }

    /// `M^Γ` with its inclusion.
    pub fn invariants(&self) -> (FinAb, AbHom) {
        let sq = Subquotient::from_echelon(self.moduli.clone(), self.invariants_lattice(), core::iter::empty());
        subgroup_inclusion(&self.module, &sq)
    }

    /// `M_Γ = M / IM` with the projection.
    pub fn coinvariants(&self) -> (FinAb, AbHom) {
        let gens = self.augmentation_generators();
        let inc = AbHom::new_unchecked(
            FinAb::free(gens.len()),
            self.module.clone(),
            IntMatrix::from_cols(self.dim(), &gens),
        );
        abgroup::cokernel(&inc)
    }

    /// `Ĥ^{-1} = ker N / IM`.
    pub fn tate_minus1(&self) -> TateClassGroup {
        let sq = Subquotient::from_echelon(
            self.moduli.clone(),
            self.norm_kernel_lattice(),
            self.augmentation_generators().into_iter(),
        );
        TateClassGroup::build(self.clone(), -1, sq)
    }

    /// `Ĥ^0 = M^Γ / NM`.
    pub fn tate_zero(&self) -> TateClassGroup {
        let nm = self.norm_matrix();
        let den: Vec<Vec<i64>> = nm.columns().into_iter().map(|c| self.reduce(&c)).collect();
        let sq = Subquotient::from_echelon(self.moduli.clone(), self.invariants_lattice(), den.into_iter());
        TateClassGroup::build(self.clone(), 0, sq)
    }

    /// Ordinary `H^0 = M^Γ` as a class group (no norm quotient).
    pub fn h0(&self) -> TateClassGroup {
        let sq = Subquotient::from_echelon(self.moduli.clone(), self.invariants_lattice(), core::iter::empty());
        TateClassGroup::build(self.clone(), 0, sq)
    }

    /// Tate cohomology for degrees -1 and 0, ordinary cohomology for 1 and 2.
    pub fn cohomology(&self, degree: i32) -> Result<TateClassGroup, GModError> {
        match degree {
            -1 => Ok(self.tate_minus1()),
            0 => Ok(self.tate_zero()),
            1 | 2 => Ok(self.bar_cohomology(degree as usize)),
            d => Err(GModError::Degree(d)),
        }
    }

    /// Coordinates of the normalized cochain complex in degree `i`: blocks of
    /// `dim` coordinates, one per tuple of non-identity elements.
    fn normalized_tuples(&self, i: usize) -> Vec<Vec<usize>> {
        let ne = self.group.non_identity();
        let mut out = vec![Vec::new()];
        for _ in 0..i {
            let mut next = Vec::with_capacity(out.len() * ne.len());
            for t in &out {
                for &g in &ne {
                    let mut u = t.clone();
                    u.push(g);
                    next.push(u);
                }
            }
            out = next;
        }
        out
    }

    fn normalized_position(&self, tuple: &[usize]) -> Option<usize> {
        let e = self.group.identity();
        let mut idx = 0;
        for &g in tuple {
            if g == e {
                return None;
            }
            let k = if g < e { g } else { g - 1 };
            idx = idx * (self.group.order() - 1) + k;
        }
        Some(idx)
    }

    /// Sparse terms of `(d f)(tuple)` coordinate `r` in the normalized
    /// coordinates of `f` (degree `tuple.len() - 1`).
    fn differential_terms(&self, tuple: &[usize], r: usize) -> Vec<(usize, i64)> {
        let g = &self.group;
        let i = tuple.len() - 1;
        let dim = self.dim();
        let mut terms: Vec<(usize, i64)> = Vec::new();
        if let Some(p) = self.normalized_position(&tuple[1..]) {
            let a = &self.actions[tuple[0]];
            for c in 0..dim {
                let x = a.get(r, c);
                if x != 0 {
                    terms.push((p * dim + c, x));
                }
            }
        }
        for k in 1..=i {
            let mut merged: Vec<usize> = Vec::with_capacity(i);
            merged.extend_from_slice(&tuple[..k - 1]);
            merged.push(g.mul(tuple[k - 1], tuple[k]));
            merged.extend_from_slice(&tuple[k + 1..]);
            if let Some(p) = self.normalized_position(&merged) {
                terms.push((p * dim + r, if k % 2 == 1 { -1 } else { 1 }));
            }
        }
        if let Some(p) = self.normalized_position(&tuple[..i]) {
            terms.push((p * dim + r, if (i + 1) % 2 == 1 { -1 } else { 1 }));
        }
        terms.sort_unstable();
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for (c, x) in terms {
            match merged.last_mut() {
                Some((lc, lx)) if *lc == c => *lx += x,
                _ => merged.push((c, x)),
            }
        }
        merged.retain(|&(_, x)| x != 0);
        merged
    }

    fn bar_cohomology(&self, i: usize) -> TateClassGroup {
        let dim = self.dim();
        let src = self.normalized_tuples(i);
        let ambient: Vec<i64> = src.iter().flat_map(|_| self.moduli.iter().copied()).collect();
        let out_tuples = self.normalized_tuples(i + 1);
        let constraints = out_tuples.iter().flat_map(|t| {
            (0..dim).map(move |r| Constraint {
                terms: self.differential_terms(t, r),
                modulus: self.moduli[r],
            })
        });
        let z = lattice::kernel(&ambient, constraints);
        // Coboundaries: images of normalized (i-1)-cochains.
        let prev = self.normalized_tuples(i - 1);
        let mut den = Vec::with_capacity(prev.len() * dim);
        for (pi, _) in prev.iter().enumerate() {
            for c in 0..dim {
                let mut v = vec![0i64; ambient.len()];
                for (ti, t) in src.iter().enumerate() {
                    for r in 0..dim {
                        let x: i64 = self
                            .differential_terms(t, r)
                            .iter()
                            .filter(|&&(col, _)| col == pi * dim + c)
                            .map(|&(_, x)| x)
                            .sum();
                        v[ti * dim + r] = x;
                    }
                }
                den.push(
                    v.iter()
                        .zip(&ambient)
                        .map(|(&x, &m)| if m > 0 { x.rem_euclid(m) } else { x })
                        .collect(),
                );
            }
        }
        let sq = Subquotient::from_echelon(ambient, z, den.into_iter());
        TateClassGroup::build(self.clone(), i as i32, sq)
    }

    /// Inhomogeneous differential of a degree-`i` cochain table.
    pub fn differential(&self, i: usize, f: &[Vec<i64>]) -> CochainTable {
        let g = &self.group;
        assert_eq!(f.len(), g.tuple_count(i), "cochain table length");
        (0..g.tuple_count(i + 1))
            .map(|idx| {
                let t = g.tuple_of(idx, i + 1);
                let mut acc = self.act(t[0], &f[g.tuple_index(&t[1..])]);
                for k in 1..=i {
                    let mut merged: Vec<usize> = Vec::with_capacity(i);
                    merged.extend_from_slice(&t[..k - 1]);
                    merged.push(g.mul(t[k - 1], t[k]));
                    merged.extend_from_slice(&t[k + 1..]);
                    let v = &f[g.tuple_index(&merged)];
                    acc = if k % 2 == 1 { self.sub(&acc, v) } else { self.add(&acc, v) };
                }
                let v = &f[g.tuple_index(&t[..i])];
                if (i + 1) % 2 == 1 {
                    self.sub(&acc, v)
                } else {
                    self.add(&acc, v)
                }
            })
            .collect()
    }

    pub fn is_cocycle(&self, i: usize, f: &[Vec<i64>]) -> bool {
        self.differential(i, f).iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn zero_cochain(&self, i: usize) -> CochainTable {
        vec![self.zero(); self.group.tuple_count(i)]
    }
}

fn reduce_matrix(m: &IntMatrix, moduli: &[i64]) -> IntMatrix {
    let mut out = m.clone();
    for r in 0..m.rows() {
        let d = moduli[r];
        if d > 0 {
            for c in 0..m.cols() {
                out.set(r, c, m.get(r, c).rem_euclid(d));
            }
        }
    }
    out
}

fn left_cosets(group: &FiniteGroup, subgroup: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for g in group.elements() {
        if seen[g] {
            continue;
        }
        let mut c: Vec<usize> = subgroup.iter().map(|&h| group.mul(g, h)).collect();
        c.sort_unstable();
        for &x in &c {
            seen[x] = true;
        }
        out.push(c);
    }
    out
}

fn subgroup_inclusion(ambient: &FinAb, sq: &Subquotient) -> (FinAb, AbHom) {
    let g = sq.group().clone();
    let cols: Vec<Vec<i64>> = (0..g.generator_count())
        .map(|i| sq.lift(&g.generator(i)))
        .collect();
    let incl = AbHom::new_unchecked(g.clone(), ambient.clone(), IntMatrix::from_cols(ambient.generator_count(), &cols));
    (g, incl)
}

/// An equivariant homomorphism of modules over the same group, as a matrix
/// on canonical coordinates.
#[derive(Clone, Debug)]
pub struct GammaHom {
    source: GammaModule,
    target: GammaModule,
    matrix: IntMatrix,
}

impl GammaHom {
    pub fn new(source: GammaModule, target: GammaModule, matrix: IntMatrix) -> Result<GammaHom, GModError> {
        if source.group() != target.group() {
            return Err(GModError::BadAction(String::from("modules over different groups")));
        }
        let hom = AbHom::new(source.module().clone(), target.module().clone(), matrix)?;
        for g in source.group().elements() {
            let lhs = hom.then(&target.action_hom(g))?;
            let rhs = source.action_hom(g).then(&hom)?;
            if !lhs.equals(&rhs) {
                return Err(GModError::NotEquivariant);
            }
        }
        Ok(GammaHom {
            source,
            target,
            matrix: hom.matrix().clone(),
        })
    }

    pub fn source(&self) -> &GammaModule {
        &self.source
    }

    pub fn target(&self) -> &GammaModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.target.reduce(&self.matrix.mul_vec(v))
    }

    /// Induced map on the cohomology groups `src -> dst` of the same degree.
    pub fn induced(&self, src: &TateClassGroup, dst: &TateClassGroup) -> Result<AbHom, GModError> {
        induced_map(src, dst, None, |v| self.apply(v))
    }
}

/// A cohomology group together with cocycle representatives and reduction.
#[derive(Clone, Debug)]
pub struct TateClassGroup {
    module: GammaModule,
    degree: i32,
    sq: Subquotient,
}

impl TateClassGroup {
    fn build(module: GammaModule, degree: i32, sq: Subquotient) -> TateClassGroup {
        TateClassGroup { module, degree, sq }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn module(&self) -> &GammaModule {
        &self.module
    }

    pub fn group(&self) -> &FinAb {
        self.sq.group()
    }

    fn table_degree(&self) -> usize {
        self.degree.max(0) as usize
    }

    /// A normalized cocycle table representing `class`.
    pub fn representative(&self, class: &[i64]) -> CochainTable {
        let v = self.sq.lift(class);
        let m = &self.module;
        let dim = m.dim();
        let i = self.table_degree();
        if i == 0 {
            return vec![m.reduce(&v)];
        }
        let g = m.group();
        (0..g.tuple_count(i))
            .map(|idx| {
                let t = g.tuple_of(idx, i);
                match m.normalized_position(&t) {
                    Some(p) => m.reduce(&v[p * dim..(p + 1) * dim]),
                    None => m.zero(),
                }
            })
            .collect()
    }

    /// The class of a cocycle table (length one for degrees -1 and 0).
    pub fn reduce(&self, table: &[Vec<i64>]) -> Result<AbElement, GModError> {
        let m = &self.module;
        match self.degree {
            -1 | 0 => {
                if table.len() != 1 {
                    return Err(GModError::Degree(self.degree));
                }
                self.sq.reduce(&m.reduce(&table[0])).map_err(|_| GModError::NotCocycle)
            }
            _ => {
                let i = self.table_degree();
                let g = m.group();
                if table.len() != g.tuple_count(i) {
                    return Err(GModError::Degree(self.degree));
                }
                let table: Vec<Vec<i64>> = table.iter().map(|v| m.reduce(v)).collect();
                if !m.is_cocycle(i, &table) {
                    return Err(GModError::NotCocycle);
                }
                let normalized = if i == 2 {
                    let c = table[g.tuple_index(&[g.identity(), g.identity()])].clone();
                    (0..table.len())
                        .map(|idx| {
                            let t = g.tuple_of(idx, 2);
                            m.sub(&table[idx], &m.act(t[0], &c))
                        })
                        .collect()
                } else {
                    table
                };
                let tuples = m.normalized_tuples(i);
                let v: Vec<i64> = tuples
                    .iter()
                    .flat_map(|t| normalized[g.tuple_index(t)].iter().copied())
                    .collect();
                self.sq.reduce(&v).map_err(|_| GModError::NotCocycle)
            }
        }
    }

    /// Whether a cocycle table is a coboundary.
    pub fn is_trivial_class(&self, table: &[Vec<i64>]) -> Result<bool, GModError> {
        Ok(self.reduce(table)?.iter().all(|&x| x == 0))
    }
}

/// Map on cohomology induced by a coefficient map `f` and, optionally, an
/// inflation along `proj: dst group -> src group`.
pub fn induced_map<F>(
    src: &TateClassGroup,
    dst: &TateClassGroup,
    proj: Option<&[usize]>,
    f: F,
) -> Result<AbHom, GModError>
where
    F: Fn(&[i64]) -> Vec<i64>,
{
    if src.degree != dst.degree {
        return Err(GModError::Degree(dst.degree));
    }
    let i = src.table_degree();
    let sg = src.module.group();
    let dg = dst.module.group();
    if let Some(p) = proj {
        if src.degree < 1 {
            return Err(GModError::Degree(src.degree));
        }
        if !dg.is_surjection(sg, p) {
            return Err(GModError::NotSurjection);
        }
    } else if sg != dg {
        return Err(GModError::NotSurjection);
    }
    let n = src.group().generator_count();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let rep = src.representative(&src.group().generator(k));
        let table: CochainTable = (0..dg.tuple_count(i))
            .map(|idx| {
                let t = dg.tuple_of(idx, i);
                let st: Vec<usize> = match proj {
                    Some(p) => t.iter().map(|&x| p[x]).collect(),
                    None => t,
                };
                f(&rep[sg.tuple_index(&st)])
            })
            .collect();
        cols.push(dst.reduce(&table)?);
    }
    Ok(AbHom::new(
        src.group().clone(),
        dst.group().clone(),
        IntMatrix::from_cols(dst.group().generator_count(), &cols),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_z() -> GammaModule {
        GammaModule::character(FiniteGroup::cyclic(2), 0, &[1, -1]).unwrap()
    }

    #[test]
    fn group_tables_validate() {
        for g in [FiniteGroup::cyclic(5), FiniteGroup::klein(), FiniteGroup::s3()] {
            FiniteGroup::from_table(g.order(), g.table().to_vec()).unwrap();
        }
        assert_eq!(FiniteGroup::s3().order(), 6);
        assert!(!FiniteGroup::s3().is_abelian());
        assert!(FiniteGroup::from_table(2, vec![0, 0, 0, 0]).is_err());
    }

    #[test]
    fn s3_sign_is_a_homomorphism() {
        let s = FiniteGroup::s3_sign();
        assert!(FiniteGroup::s3().is_surjection(&FiniteGroup::cyclic(2), &s));
    }

    #[test]
    fn norm_of_sign_module_vanishes() {
        let m = sign_z();
        assert!(m.norm_map().is_zero_map());
        let t = GammaModule::trivial_action(FiniteGroup::cyclic(2), &FinAb::free(1));
        assert_eq!(t.norm_matrix(), IntMatrix::from_rows(&[vec![2]]));
    }

    #[test]
    fn tate_groups_of_sign_module() {
        let m = sign_z();
        assert_eq!(m.tate_minus1().group().torsion_invariants(), &[2]);
        assert!(m.tate_zero().group().is_trivial());
        assert_eq!(m.cohomology(1).unwrap().group().torsion_invariants(), &[2]);
        assert!(m.cohomology(2).unwrap().group().is_trivial());
    }

    #[test]
    fn trivial_z_over_z2() {
        let m = GammaModule::trivial_action(FiniteGroup::cyclic(2), &FinAb::free(1));
        assert!(m.tate_minus1().group().is_trivial());
        assert_eq!(m.tate_zero().group().torsion_invariants(), &[2]);
        assert!(m.cohomology(1).unwrap().group().is_trivial());
        assert_eq!(m.cohomology(2).unwrap().group().torsion_invariants(), &[2]);
    }

    #[test]
    fn h1_cyclic_trivial() {
        for n in 1..=12 {
            let m = GammaModule::trivial_action(FiniteGroup::cyclic(2), &FinAb::cyclic(n));
            let h = m.cohomology(1).unwrap();
            let expect = lattice::gcd(2, n as i128) as u128;
            assert_eq!(h.group().order(), Some(expect), "n = {}", n);
        }
    }

    #[test]
    fn representatives_reduce_to_themselves() {
        let m = GammaModule::regular(FiniteGroup::cyclic(2), 4).direct_sum(&sign_z()).unwrap();
        for d in [-1, 0, 1, 2] {
            let h = m.cohomology(d).unwrap();
            for c in h.group().canon_elements().unwrap() {
                let rep = h.representative(&c);
                assert_eq!(h.reduce(&rep).unwrap(), c);
            }
        }
    }

    #[test]
    fn h2_reducer_normalizes() {
        let m = GammaModule::trivial_action(FiniteGroup::cyclic(2), &FinAb::cyclic(4));
        let h = m.cohomology(2).unwrap();
        // constant cochain 1 is the coboundary of the constant 1-cochain 1.
        let c = vec![vec![1]; 4];
        assert!(m.is_cocycle(2, &c));
        assert!(h.is_trivial_class(&c).unwrap());
    }

    #[test]
    fn multiplication_by_two_on_h1() {
        let m = GammaModule::trivial_action(FiniteGroup::cyclic(2), &FinAb::cyclic(4));
        let h = m.cohomology(1).unwrap();
        let f = GammaHom::new(m.clone(), m.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(f.induced(&h, &h).unwrap().is_zero_map());
        let id = GammaHom::new(m.clone(), m, IntMatrix::identity(1)).unwrap();
        assert!(id.induced(&h, &h).unwrap().equals(&AbHom::identity(h.group())));
    }

    #[test]
    fn non_equivariant_rejected() {
        let a = GammaModule::trivial_action(FiniteGroup::cyclic(2), &FinAb::free(1));
        let b = sign_z();
        assert_eq!(
            GammaHom::new(a, b, IntMatrix::identity(1)).unwrap_err(),
            GModError::NotEquivariant
        );
    }

    #[test]
    fn regular_module_is_acyclic() {
        for n in 1..=4 {
            let m = GammaModule::regular(FiniteGroup::cyclic(n), 0);
            assert!(m.tate_minus1().group().is_trivial());
            assert!(m.tate_zero().group().is_trivial());
            assert!(m.cohomology(2).unwrap().group().is_trivial());
        }
    }
}
