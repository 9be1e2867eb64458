//! Seeded random instances for the property suites.
//!
//! Every generator takes an explicit RNG; [`rng`] builds the ChaCha stream
//! used throughout, so a seed determines the whole battery.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{smith_normal_form, FinAb, IntMatrix, QZ};
use crate::cochain::{leibniz_check, GroupSurjection, LevelCochain, RootsOfUnity, ThetaLattice};
use crate::gmodule::{FiniteGroup, GammaModule};
use crate::lattice::{self, Constraint};
use crate::report::Report;
use crate::rigidcoh::TorusDatum;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A product of random elementary matrices with small entries.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(r);
    let mut inv = IntMatrix::identity(r);
    if r < 2 {
        return (u, inv);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..r);
        let j = (i + rng.gen_range(1..r)) % r;
        let k = rng.gen_range(-1i64..=1);
        let mut e = IntMatrix::identity(r);
        e.set(i, j, k);
        let mut e_inv = IntMatrix::identity(r);
        e_inv.set(i, j, -k);
        u = u.mul(&e);
        inv = e_inv.mul(&inv);
    }
    (u, inv)
}

fn block_diag(blocks: &[IntMatrix]) -> IntMatrix {
    let r: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut m = IntMatrix::zeros(r, r);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.rows();
    }
    m
}

/// Integral matrices of order dividing `k`, used as building blocks for the
/// action of a generator of `Z/k`.
pub fn cyclic_blocks(k: usize) -> Vec<IntMatrix> {
    let mut out = vec![IntMatrix::identity(1)];
    if k % 2 == 0 {
        out.push(IntMatrix::from_rows(&[vec![-1]]));
        out.push(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
    }
    if k % 3 == 0 {
        out.push(IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]));
        out.push(IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]));
    }
    if k % 4 == 0 {
        out.push(IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]));
    }
    if k == 6 {
        out.push(IntMatrix::from_rows(&[vec![0, -1], vec![1, 1]]));
    }
    out
}

/// A random action of a generator of `Z/k` on `Z^r`, `r <= max_rank`.
pub fn random_cyclic_action<R: Rng>(rng: &mut R, k: usize, max_rank: usize) -> IntMatrix {
    let blocks = cyclic_blocks(k);
    let target = rng.gen_range(1..=max_rank);
    let mut chosen = Vec::new();
    let mut rank = 0;
    while rank < target {
        let fitting: Vec<&IntMatrix> = blocks.iter().filter(|b| rank + b.rows() <= target).collect();
        let b = (*fitting.choose(rng).expect("rank one block always fits")).clone();
        rank += b.rows();
        chosen.push(b);
    }
    let (u, u_inv) = random_unimodular(rng, rank);
    u.mul(&block_diag(&chosen)).mul(&u_inv)
}

/// `Y + Z·v/d` as `(basis_num, d)`.
fn superlattice(v: &[i64], d: i64) -> IntMatrix {
    let r = v.len();
    let mut cols: Vec<Vec<i64>> = (0..r)
        .map(|j| {
            let mut e = vec![0; r];
            e[j] = d;
            e
        })
        .collect();
    cols.push(v.to_vec());
    let m = IntMatrix::from_cols(r, &cols);
    let s = smith_normal_form(&m);
    let diag = s.diagonal();
    s.u_inv.mul(&IntMatrix::diagonal(&diag[..r]))
}

/// A torus over `Z/k` of rank at most `max_rank` with `[Ȳ:Y] <= max_index`.
pub fn random_torus<R: Rng>(rng: &mut R, k: usize, max_rank: usize, max_index: i64) -> TorusDatum {
    let group = FiniteGroup::cyclic(k);
    loop {
        let a = random_cyclic_action(rng, k, max_rank);
        let r = a.rows();
        let d = rng.gen_range(1..=max_index.max(1));
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-3i64..=3)).collect();
        let num = superlattice(&v, d);
        let gens = [(1usize.min(k - 1), a)];
        if let Ok(t) = TorusDatum::from_generators(group.clone(), &gens[..(k > 1) as usize], num, d) {
            if t.index() <= max_index {
                return t;
            }
        }
    }
}

/// At least `count` tori cycling through `|Γ| ∈ {2, 3, 4, 6}`, rank at most
/// 3 and index at most 6.
pub fn torus_battery(seed: u64, count: usize) -> Vec<TorusDatum> {
    let mut r = rng(seed);
    (0..count).map(|i| random_torus(&mut r, [2, 3, 4, 6][i % 4], 3, 6)).collect()
}

/// Real tori (`Γ = Z/2`) with at least one anisotropic factor and
/// `[Ȳ:Y] | 2`.
pub fn real_torus_battery(seed: u64, count: usize) -> Vec<TorusDatum> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = random_torus(&mut r, 2, 3, 2);
        let anisotropic = norm_kernel_basis(&t).iter().any(|v| v.iter().any(|&x| x != 0));
        if anisotropic && 2 % t.index() == 0 {
            out.push(t);
        }
    }
    out
}

/// A basis of `Ȳ^N = ker(N: Ȳ -> Ȳ)`.
pub fn norm_kernel_basis(t: &TorusDatum) -> Vec<Vec<i64>> {
    let n = t.norm_bar();
    let r = t.rank();
    let cons = (0..r).map(|row| Constraint {
        terms: (0..r).map(|c| (c, n.get(row, c))).filter(|&(_, x)| x != 0).collect(),
        modulus: 0,
    });
    lattice::kernel(&vec![0; r], cons)
        .basis()
        .map(|v| v.iter().map(|&x| lattice::to_i64(x)).collect())
        .collect()
}

/// A random element of `Ȳ^N` with small coefficients.
pub fn random_norm_kernel_element<R: Rng>(rng: &mut R, t: &TorusDatum) -> Vec<i64> {
    let mut out = vec![0; t.rank()];
    for b in norm_kernel_basis(t) {
        let c = rng.gen_range(-2i64..=2);
        for (o, x) in out.iter_mut().zip(&b) {
            *o += c * x;
        }
    }
    out
}

/// The group surjections of the Leibniz suite.
pub fn leibniz_surjections() -> Vec<GroupSurjection> {
    let c2 = FiniteGroup::cyclic(2);
    let c4 = FiniteGroup::cyclic(4);
    vec![
        GroupSurjection::identity(c2.clone()),
        GroupSurjection::identity(c4.clone()),
        GroupSurjection::new(c4, c2.clone(), vec![0, 1, 0, 1]).expect("reduction mod 2"),
        GroupSurjection::new(FiniteGroup::s3(), c2, FiniteGroup::s3_sign()).expect("sign"),
    ]
}

/// `f ∈ C^{i,j}(Δ, Θ, Q/Z)` with `Δ` acting through `±1`, a random
/// `Θ`-lattice of rank at most 2, and `λ` in it.
#[derive(Clone, Debug)]
pub struct LeibnizInstance {
    pub surjection: GroupSurjection,
    pub coefficients: RootsOfUnity,
    pub cochain: LevelCochain<QZ>,
    pub lattice: ThetaLattice,
    pub lambda: Vec<i64>,
}

pub fn random_leibniz_instance<R: Rng>(rng: &mut R, s: &GroupSurjection) -> LeibnizInstance {
    let delta = s.delta();
    let theta = s.theta();
    // Δ acts on Q/Z through Θ by a character into ±1 when Θ has even order.
    let twist = theta.order() % 2 == 0 && rng.gen_bool(0.5);
    let units: Vec<i64> = delta
        .elements()
        .map(|g| if twist && s.proj(g) % 2 == 1 { -1 } else { 1 })
        .collect();
    let coefficients = RootsOfUnity::new(units);
    let i = rng.gen_range(1..=3usize);
    let j = rng.gen_range(1..=i);
    let den = [2i64, 3, 4, 6, 12][rng.gen_range(0..5)];
    let values: Vec<QZ> = (0..s.table_len(i, j)).map(|_| QZ::new(rng.gen_range(0..den), den)).collect();
    let cochain = LevelCochain::new(s, i, j, values).expect("level fits");
    let lattice = random_theta_lattice(rng, theta);
    let lambda = (0..lattice.rank()).map(|_| rng.gen_range(-3i64..=3)).collect();
    LeibnizInstance {
        surjection: s.clone(),
        coefficients,
        cochain,
        lattice,
        lambda,
    }
}

/// A lattice with an action of a cyclic group, using the generator `1`.
fn random_theta_lattice<R: Rng>(rng: &mut R, theta: &FiniteGroup) -> ThetaLattice {
    let k = theta.order();
    let a = random_cyclic_action(rng, k, 2);
    let actions = theta.elements().map(|g| matrix_pow(&a, g)).collect();
    ThetaLattice::new(theta, actions).expect("powers of an element of finite order")
}

fn matrix_pow(a: &IntMatrix, e: usize) -> IntMatrix {
    (0..e).fold(IntMatrix::identity(a.rows()), |acc, _| acc.mul(a))
}

/// Runs the Leibniz identity on `count` instances spread over the
/// surjections of [`leibniz_surjections`].
pub fn leibniz_battery(seed: u64, count: usize) -> Report {
    let mut r = rng(seed);
    let surj = leibniz_surjections();
    let mut rep = Report::new("Leibniz rule");
    let mut fails = 0usize;
    let mut errors = 0usize;
    for k in 0..count {
        let inst = random_leibniz_instance(&mut r, &surj[k % surj.len()]);
        match leibniz_check(&inst.surjection, &inst.coefficients, &inst.cochain, &inst.lattice, &inst.lambda) {
            Ok(o) if o.holds => {}
            Ok(_) => fails += 1,
            Err(_) => errors += 1,
        }
    }
    rep.value("instances", format!("{}", count));
    rep.check(
        "d(f ⊔ λ) = df ⊔ λ + (-1)^i f ⊔ dλ",
        fails == 0 && errors == 0,
        format!("{} failures, {} errors", fails, errors),
    );
    rep
}

/// Small groups of order at most 6 with generators and a compatible
/// integral representation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallGroup {
    Cyclic(usize),
    Klein,
    S3,
}

impl SmallGroup {
    pub fn all() -> Vec<SmallGroup> {
        vec![
            SmallGroup::Cyclic(1),
            SmallGroup::Cyclic(2),
            SmallGroup::Cyclic(3),
            SmallGroup::Cyclic(4),
            SmallGroup::Klein,
            SmallGroup::Cyclic(5),
            SmallGroup::Cyclic(6),
            SmallGroup::S3,
        ]
    }

    pub fn group(&self) -> FiniteGroup {
        match self {
            SmallGroup::Cyclic(k) => FiniteGroup::cyclic(*k),
            SmallGroup::Klein => FiniteGroup::klein(),
            SmallGroup::S3 => FiniteGroup::s3(),
        }
    }

    /// Generator indices in [`SmallGroup::group`].
    pub fn generators(&self) -> Vec<usize> {
        match self {
            SmallGroup::Cyclic(1) => vec![],
            SmallGroup::Cyclic(_) => vec![1],
            SmallGroup::Klein => vec![2, 1],
            // The transposition and the 3-cycle, in closure order.
            SmallGroup::S3 => vec![1, 2],
        }
    }

    /// Candidate integral matrices for the generators; callers validate.
    fn candidate_actions<R: Rng>(&self, rng: &mut R, rank: usize) -> Vec<IntMatrix> {
        match self {
            SmallGroup::Cyclic(1) => vec![],
            SmallGroup::Cyclic(k) => vec![random_cyclic_block_sum(rng, *k, rank)],
            SmallGroup::Klein => {
                let a = diag_signs(rng, rank);
                let b = diag_signs(rng, rank);
                vec![a, b]
            }
            SmallGroup::S3 => {
                let sign = rng.gen_bool(0.5);
                let s = if sign { -1 } else { 1 };
                let (t, c) = match rank {
                    1 => (IntMatrix::from_rows(&[vec![s]]), IntMatrix::identity(1)),
                    2 => (
                        IntMatrix::from_rows(&[vec![0, s], vec![s, 0]]),
                        IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]),
                    ),
                    _ => (
                        IntMatrix::from_rows(&[vec![0, s, 0], vec![s, 0, 0], vec![0, 0, s]]),
                        IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
                    ),
                };
                vec![t, c]
            }
        }
    }
}

fn diag_signs<R: Rng>(rng: &mut R, rank: usize) -> IntMatrix {
    let d: Vec<i64> = (0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    IntMatrix::diagonal(&d)
}

fn random_cyclic_block_sum<R: Rng>(rng: &mut R, k: usize, rank: usize) -> IntMatrix {
    let blocks = cyclic_blocks(k);
    let mut chosen = Vec::new();
    let mut r = 0;
    while r < rank {
        let fitting: Vec<&IntMatrix> = blocks.iter().filter(|b| r + b.rows() <= rank).collect();
        let b = (*fitting.choose(rng).expect("rank one block fits")).clone();
        r += b.rows();
        chosen.push(b);
    }
    block_diag(&chosen)
}

/// `(Z/d)^r` with `d^r <= max_order` and an action reduced from an integral
/// representation, optionally twisted by a unit of order dividing `|Γ|`.
pub fn random_finite_module<R: Rng>(rng: &mut R, g: SmallGroup, max_order: u64) -> GammaModule {
    let group = g.group();
    loop {
        let d = rng.gen_range(2i64..=8);
        let mut rank = 1;
        while (d as u64).pow(rank as u32 + 1) <= max_order && rank < 3 && rng.gen_bool(0.5) {
            rank += 1;
        }
        if (d as u64).pow(rank as u32) > max_order {
            continue;
        }
        let mut acts = g.candidate_actions(rng, rank);
        // Twist a cyclic generator by a unit u with u^k = 1 mod d.
        if let SmallGroup::Cyclic(k) = g {
            if k > 1 && rng.gen_bool(0.5) {
                let units: Vec<i64> = (1..d)
                    .filter(|&u| lattice::gcd(u as i128, d as i128) == 1 && pow_mod(u, k as u64, d) == 1)
                    .collect();
                let u = *units.choose(rng).expect("1 is a unit");
                acts[0] = acts[0].scale(u);
            }
        }
        let module = FinAb::from_invariants(&vec![d; rank]);
        let gens: Vec<(usize, IntMatrix)> = g.generators().into_iter().zip(acts).collect();
        if let Ok(m) = GammaModule::from_generator_actions(group.clone(), &module, &gens) {
            return m;
        }
    }
}

fn pow_mod(base: i64, mut e: u64, m: i64) -> i64 {
    let mut acc = 1i64 % m;
    let mut b = base.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}
