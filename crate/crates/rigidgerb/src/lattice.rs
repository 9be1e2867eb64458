//! Integer lattices inside `Z^n`, optionally enlarged by `m_i * e_i` for a
//! list of coordinate moduli.
//!
//! These routines sit under every subgroup and subquotient computation. All
//! intermediate arithmetic is done in `i128`, and entries in coordinates with
//! a positive modulus are kept reduced, so sizes stay bounded for finite
//! ambient groups.

use alloc::vec;
use alloc::vec::Vec;

/// `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Least nonnegative residue; `m == 0` leaves `x` alone.
#[inline]
pub fn reduce(x: i128, m: i128) -> i128 {
    if m == 0 {
        x
    } else {
        x.rem_euclid(m)
    }
}

pub(crate) fn to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in exact arithmetic")
}

pub(crate) fn widen(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

pub(crate) fn narrow(v: &[i128]) -> Vec<i64> {
    v.iter().map(|&x| to_i64(x)).collect()
}

fn reduce_vec(v: &mut [i128], moduli: &[i64], from: usize) {
    for i in from..v.len() {
        let m = moduli[i] as i128;
        if m > 0 {
            v[i] = v[i].rem_euclid(m);
        }
    }
}

fn is_zero(v: &[i128]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// `x*a + y*b` entrywise.
fn combine(a: &[i128], x: i128, b: &[i128], y: i128) -> Vec<i128> {
    a.iter()
        .zip(b)
        .map(|(&p, &q)| {
            p.checked_mul(x)
                .and_then(|u| q.checked_mul(y).and_then(|w| u.checked_add(w)))
                .expect("integer overflow in exact arithmetic")
        })
        .collect()
}

/// Lower echelon basis of `span(gens) + sum_i moduli[i] * Z e_i`.
///
/// Each basis vector has a pivot row; the pivot rows are strictly increasing
/// and every basis vector vanishes above its pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    moduli: Vec<i64>,
    basis: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    pub fn new<I>(dim: usize, moduli: &[i64], gens: I) -> Echelon
    where
        I: IntoIterator<Item = Vec<i128>>,
    {
        assert_eq!(moduli.len(), dim);
        let mut work: Vec<Vec<i128>> = gens
            .into_iter()
            .map(|mut g| {
                assert_eq!(g.len(), dim);
                reduce_vec(&mut g, moduli, 0);
                g
            })
            .filter(|g| !is_zero(g))
            .collect();
        let mut basis = Vec::new();
        for r in 0..dim {
            let mut pivot: Option<Vec<i128>> = None;
            let mut rest = Vec::with_capacity(work.len());
            for g in work.drain(..) {
                if g[r] == 0 {
                    rest.push(g);
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some(g),
                    Some(p) => {
                        let (d, x, y) = ext_gcd(p[r], g[r]);
                        let mut np = combine(&p, x, &g, y);
                        let mut ng = combine(&p, g[r] / d, &g, -(p[r] / d));
                        reduce_vec(&mut np, moduli, r + 1);
                        reduce_vec(&mut ng, moduli, r + 1);
                        if !is_zero(&ng) {
                            rest.push(ng);
                        }
                        pivot = Some(np);
                    }
                }
            }
            let m = moduli[r] as i128;
            if m > 0 {
                let p = match pivot {
                    None => {
                        let mut e = vec![0i128; dim];
                        e[r] = m;
                        e
                    }
                    Some(p) => {
                        let pv = p[r];
                        let (d, x, _) = ext_gcd(pv, m);
                        let mut np: Vec<i128> = p.iter().map(|&t| t * x).collect();
                        np[r] = d;
                        reduce_vec(&mut np, moduli, r + 1);
                        let mut extra: Vec<i128> = p.iter().map(|&t| t * (m / d)).collect();
                        extra[r] = 0;
                        reduce_vec(&mut extra, moduli, r + 1);
                        if !is_zero(&extra) {
                            rest.push(extra);
                        }
                        np
                    }
                };
                basis.push((r, p));
            } else if let Some(mut p) = pivot {
                if p[r] < 0 {
                    for t in p.iter_mut() {
                        *t = -*t;
                    }
                }
                basis.push((r, p));
            }
            work = rest;
        }
        Echelon {
            dim,
            moduli: moduli.to_vec(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_vector(&self, k: usize) -> &[i128] {
        &self.basis[k].1
    }

    pub fn basis(&self) -> impl Iterator<Item = &[i128]> {
        self.basis.iter().map(|(_, v)| v.as_slice())
    }

    /// Coefficients of `v` in the basis, if `v` lies in the lattice.
    pub fn solve(&self, v: &[i128]) -> Option<Vec<i128>> {
        assert_eq!(v.len(), self.dim);
        let mut rem = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        let mut next_row = 0;
        for (r, p) in &self.basis {
            if rem[next_row..*r].iter().any(|&x| x != 0) {
                return None;
            }
            let pv = p[*r];
            if rem[*r] % pv != 0 {
                return None;
            }
            let c = rem[*r] / pv;
            if c != 0 {
                for i in *r..self.dim {
                    rem[i] = rem[i]
                        .checked_sub(c.checked_mul(p[i]).expect("integer overflow in exact arithmetic"))
                        .expect("integer overflow in exact arithmetic");
                }
            }
            coeffs.push(c);
            next_row = r + 1;
        }
        if rem[next_row..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.solve(v).is_some()
    }

    /// `sum_k coeffs[k] * basis_k`, reduced by the moduli.
    pub fn combination(&self, coeffs: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; self.dim];
        for ((_, p), &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for i in 0..self.dim {
                out[i] += c * p[i];
            }
        }
        reduce_vec(&mut out, &self.moduli, 0);
        out
    }
}

/// A sparse linear constraint `sum coeff * y[col] == 0 (mod modulus)`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub terms: Vec<(usize, i64)>,
    pub modulus: i64,
}

/// Solutions `y` of all constraints, as an echelon lattice that also contains
/// `src_moduli[j] * e_j`. Every constraint must vanish on those vectors.
pub fn kernel<I>(src_moduli: &[i64], constraints: I) -> Echelon
where
    I: IntoIterator<Item = Constraint>,
{
    let k = src_moduli.len();
    let mut gens: Vec<Vec<i128>> = (0..k)
        .filter(|&j| src_moduli[j] != 1)
        .map(|j| {
            let mut e = vec![0i128; k];
            e[j] = 1;
            e
        })
        .collect();
    for c in constraints {
        let t = c.modulus as i128;
        let value = |g: &[i128]| -> i128 {
            let mut s: i128 = 0;
            for &(col, a) in &c.terms {
                s += g[col] * a as i128;
            }
            reduce(s, t)
        };
        let mut pivot: Option<(Vec<i128>, i128)> = None;
        let mut next = Vec::with_capacity(gens.len() + 1);
        for g in gens.drain(..) {
            let v = value(&g);
            if v == 0 {
                next.push(g);
                continue;
            }
            match pivot.take() {
                None => pivot = Some((g, v)),
                Some((p, pv)) => {
                    let (d, x, y) = ext_gcd(pv, v);
                    let mut np = combine(&p, x, &g, y);
                    let mut ng = combine(&p, v / d, &g, -(pv / d));
                    reduce_vec(&mut np, src_moduli, 0);
                    reduce_vec(&mut ng, src_moduli, 0);
                    if !is_zero(&ng) {
                        next.push(ng);
                    }
                    pivot = Some((np, reduce(d, t)));
                }
            }
        }
        if let Some((p, pv)) = pivot {
            if t > 0 && pv != 0 {
                let q = t / gcd(pv, t);
                let mut np: Vec<i128> = p.iter().map(|&x| x * q).collect();
                reduce_vec(&mut np, src_moduli, 0);
                if !is_zero(&np) {
                    next.push(np);
                }
            } else if t > 0 {
                next.push(p);
            }
        }
        gens = next;
        if gens.len() > 2 * k + 8 {
            let ech = Echelon::new(k, src_moduli, gens.drain(..));
            gens = ech.basis().map(|v| v.to_vec()).collect();
        }
    }
    Echelon::new(k, src_moduli, gens)
}

/// Exact rational solution helper: integer `x` with `a x = b`, where `a` is
/// given by columns. Returns `None` if there is no integral solution.
pub fn solve_columns(dim: usize, columns: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    // Solve by finding the kernel of [A | -b] with last coordinate 1.
    let n = columns.len();
    let moduli = vec![0i64; n + 1];
    let constraints = (0..dim).map(|r| {
        let mut terms: Vec<(usize, i64)> = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c[r] != 0)
            .map(|(j, c)| (j, c[r]))
            .collect();
        if b[r] != 0 {
            terms.push((n, -b[r]));
        }
        Constraint { terms, modulus: 0 }
    });
    let ker = kernel(&moduli, constraints);
    // Vectors of the kernel, looking at the last coordinate.
    let mut best: Option<(i128, Vec<i128>)> = None;
    for v in ker.basis() {
        let last = v[n];
        if last == 0 {
            continue;
        }
        best = Some(match best {
            None => (last, v.to_vec()),
            Some((bl, bv)) => {
                let (d, x, y) = ext_gcd(bl, last);
                (d, combine(&bv, x, v, y))
            }
        });
    }
    let (last, v) = best?;
    if last.abs() != 1 {
        return None;
    }
    Some(v[..n].iter().map(|&x| to_i64(x * last)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(12, 18), (-12, 18), (0, 5), (7, 0), (-3, -9)] {
            let (g, x, y) = ext_gcd(a, b);
            assert!(g >= 0);
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    fn echelon_with_moduli() {
        // span{(1,1)} + 2Z e_0 + 4Z e_1 inside Z/2 x Z/4
        let e = Echelon::new(2, &[2, 4], vec![vec![1, 1]]);
        assert!(e.contains(&[1, 1]));
        assert!(e.contains(&[0, 2]));
        assert!(!e.contains(&[1, 0]));
        assert!(!e.contains(&[0, 1]));
    }

    #[test]
    fn kernel_mod_two() {
        // y0 + y1 = 0 mod 2 on Z^2
        let ker = kernel(
            &[0, 0],
            [Constraint {
                terms: vec![(0, 1), (1, 1)],
                modulus: 2,
            }],
        );
        assert!(ker.contains(&[1, 1]));
        assert!(ker.contains(&[2, 0]));
        assert!(!ker.contains(&[1, 0]));
    }

    #[test]
    fn solve_small_system() {
        let cols = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(solve_columns(2, &cols, &[4, 9]), Some(vec![2, 3]));
        assert_eq!(solve_columns(2, &cols, &[1, 0]), None);
    }
}
