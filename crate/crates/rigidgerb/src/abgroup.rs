//! Finitely generated abelian groups.
//!
//! A [`FinAb`] is given by generators and an integer relation matrix whose
//! columns are relations. Its canonical form (free rank plus invariant
//! factors `d_1 | d_2 | ...`, each `>= 2`) is computed once through the Smith
//! normal form and cached together with the change of coordinates, so element
//! equality reduces to comparing canonical coordinates.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::lattice::{self, narrow, to_i64, widen, Constraint, Echelon};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AbError {
    #[error("matrix has {got} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("homomorphism is not well defined on relation {0}")]
    IllDefined(usize),
    #[error("group is infinite")]
    Infinite,
    #[error("element is not in the subgroup")]
    NotInSubgroup,
}

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<IntMatrix, AbError> {
        if data.len() != rows * cols {
            return Err(AbError::Shape {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> IntMatrix {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_cols(rows: usize, cols: &[Vec<i64>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut s: i128 = 0;
                for k in 0..self.cols {
                    s += self.get(r, k) as i128 * other.get(k, c) as i128;
                }
                out.set(r, c, to_i64(s));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let s: i128 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                to_i64(s)
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.checked_add(*b).expect("integer overflow in exact arithmetic"))
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| to_i64(a as i128 * k as i128)).collect(),
        }
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c) == 0))
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n).map(|r| widen(self.row(r))).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        to_i64(sign * a[n - 1][n - 1])
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

struct SnfWork {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

fn ck(x: Option<i128>) -> i128 {
    x.expect("integer overflow in exact arithmetic")
}

impl SnfWork {
    // row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        let (ri, rj) = two_rows(&mut self.a, i, j);
        for (x, &y) in ri.iter_mut().zip(rj.iter()) {
            *x = ck(x.checked_add(ck(q.checked_mul(y))));
        }
        let (ui, uj) = two_rows(&mut self.u, i, j);
        for (x, &y) in ui.iter_mut().zip(uj.iter()) {
            *x = ck(x.checked_add(ck(q.checked_mul(y))));
        }
        for row in self.u_inv.iter_mut() {
            row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[i]))));
        }
    }

    // col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        for row in self.a.iter_mut() {
            row[i] = ck(row[i].checked_add(ck(q.checked_mul(row[j]))));
        }
        for row in self.v.iter_mut() {
            row[i] = ck(row[i].checked_add(ck(q.checked_mul(row[j]))));
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -row[i];
        }
    }
}

fn two_rows<T>(m: &mut [Vec<T>], i: usize, j: usize) -> (&mut Vec<T>, &Vec<T>) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

/// Rounded quotient, so the remainder has absolute value at most `|b|/2`.
fn near_div(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        if b > 0 {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn identity_rows(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0i128; n];
            r[i] = 1;
            r
        })
        .collect()
}

fn to_matrix(rows: &[Vec<i128>], cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            m.set(r, c, to_i64(x));
        }
    }
    m
}

/// Smith normal form with the smallest-absolute-value pivot rule.
///
/// Returns unimodular `u`, `v` (and `u^{-1}`) with `u * m * v == d`, where `d`
/// is diagonal with nonnegative entries forming a divisibility chain.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = SnfWork {
        a: (0..rows).map(|r| widen(m.row(r))).collect(),
        u: identity_rows(rows),
        u_inv: identity_rows(rows),
        v: identity_rows(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block.
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = w.a[i][j].abs();
                if x != 0 && best.map_or(true, |(_, _, b)| x < b) {
                    best = Some((i, j, x));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let p = w.a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[i][t] != 0 {
                    let q = near_div(w.a[i][t], p);
                    w.add_row(i, t, -q);
                    if w.a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if w.a[t][j] != 0 {
                    let q = near_div(w.a[t][j], p);
                    w.add_col(j, t, -q);
                    if w.a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                // Move the smallest leftover of row t / column t to the pivot.
                let mut best = (t, t, w.a[t][t].abs());
                for i in t + 1..rows {
                    let x = w.a[i][t].abs();
                    if x != 0 && x < best.2 {
                        best = (i, t, x);
                    }
                }
                for j in t + 1..cols {
                    let x = w.a[t][j].abs();
                    if x != 0 && x < best.2 {
                        best = (t, j, x);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if w.a[i][j] % p != 0 {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => w.add_row(t, i, 1),
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    Smith {
        u: to_matrix(&w.u, rows),
        u_inv: to_matrix(&w.u_inv, rows),
        d: to_matrix(&w.a, cols),
        v: to_matrix(&w.v, cols),
    }
}

/// An element of `Q/Z`, stored as a fraction in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZ(Ratio<i64>);

impl fmt::Debug for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.numer() == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl QZ {
    pub fn new(num: i64, den: i64) -> QZ {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        QZ(Ratio::new(num.rem_euclid(den), den))
    }

    pub fn zero() -> QZ {
        QZ(Ratio::new(0, 1))
    }

    pub fn from_ratio(r: Ratio<i64>) -> QZ {
        QZ::new(*r.numer(), *r.denom())
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn add(self, other: QZ) -> QZ {
        QZ::from_ratio(self.0 + other.0)
    }

    pub fn sub(self, other: QZ) -> QZ {
        QZ::from_ratio(self.0 - other.0)
    }

    pub fn neg(self) -> QZ {
        QZ::from_ratio(-self.0)
    }

    pub fn mul_int(self, k: i64) -> QZ {
        let num = (self.numer() as i128 * k as i128).rem_euclid(self.denom() as i128);
        QZ::new(num as i64, self.denom())
    }

    /// Order of the element in `Q/Z`.
    pub fn order(&self) -> i64 {
        self.denom()
    }
}

impl core::ops::Add for QZ {
    type Output = QZ;
    fn add(self, o: QZ) -> QZ {
        QZ::add(self, o)
    }
}

impl core::ops::Sub for QZ {
    type Output = QZ;
    fn sub(self, o: QZ) -> QZ {
        QZ::sub(self, o)
    }
}

impl core::ops::Neg for QZ {
    type Output = QZ;
    fn neg(self) -> QZ {
        QZ::neg(self)
    }
}

/// Coordinates of an element with respect to the generators of its group.
pub type AbElement = Vec<i64>;

/// A finitely generated abelian group `Z^gens / (column span of relations)`.
#[derive(Clone)]
pub struct FinAb {
    gens: usize,
    relations: IntMatrix,
    torsion: Vec<i64>,
    free_rank: usize,
    to_canon: IntMatrix,
    from_canon: IntMatrix,
}

impl fmt::Debug for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAb({})", self.describe())
    }
}

impl PartialEq for FinAb {
    /// Same presentation (not merely isomorphic).
    fn eq(&self, other: &FinAb) -> bool {
        self.gens == other.gens && self.relations == other.relations
    }
}

impl Eq for FinAb {}

impl FinAb {
    pub fn new(gens: usize, relations: IntMatrix) -> Result<FinAb, AbError> {
        if relations.rows() != gens {
            return Err(AbError::Dimension(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                gens
            )));
        }
        let (torsion, free_rank, to_canon, from_canon) = if relations.is_diagonal() && diagonal_is_chain(&relations) {
            canonical_from_chain(gens, &relations)
        } else {
            canonical_from_snf(gens, &relations)
        };
        Ok(FinAb {
            gens,
            relations,
            torsion,
            free_rank,
            to_canon,
            from_canon,
        })
    }

    /// `Z/d_1 x ... x Z/d_k`, with `0` standing for a copy of `Z`.
    pub fn from_invariants(ds: &[i64]) -> FinAb {
        let ds: Vec<i64> = ds.iter().map(|d| d.abs()).collect();
        FinAb::new(ds.len(), IntMatrix::diagonal(&ds)).expect("square diagonal presentation")
    }

    pub fn cyclic(n: i64) -> FinAb {
        FinAb::from_invariants(&[n])
    }

    pub fn free(rank: usize) -> FinAb {
        FinAb::new(rank, IntMatrix::zeros(rank, 0)).expect("free presentation")
    }

    pub fn trivial() -> FinAb {
        FinAb::free(0)
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Invariant factors `d_1 | d_2 | ...`, all at least 2.
    pub fn torsion_invariants(&self) -> &[i64] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Invariant factors followed by one `0` per free summand.
    pub fn invariants(&self) -> Vec<i64> {
        let mut v = self.torsion.clone();
        v.extend(core::iter::repeat(0).take(self.free_rank));
        v
    }

    /// Moduli of the canonical coordinates (same as [`FinAb::invariants`]).
    pub fn canon_moduli(&self) -> Vec<i64> {
        self.invariants()
    }

    pub fn canon_dim(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        Some(self.torsion.iter().map(|&d| d as u128).product())
    }

    pub fn exponent(&self) -> Option<i64> {
        if !self.is_finite() {
            return None;
        }
        Some(self.torsion.last().copied().unwrap_or(1))
    }

    pub fn is_isomorphic(&self, other: &FinAb) -> bool {
        self.torsion == other.torsion && self.free_rank == other.free_rank
    }

    /// Human-readable invariant-factor form, e.g. `Z/2 + Z/4 + Z^1`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{}", d)).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }

    fn check_len(&self, x: &[i64]) {
        assert_eq!(x.len(), self.gens, "element has wrong number of coordinates");
    }

    /// Canonical coordinates: torsion coordinates reduced into `[0, d)`.
    pub fn canon(&self, x: &[i64]) -> Vec<i64> {
        self.check_len(x);
        let mut y = self.to_canon.mul_vec(x);
        for (i, d) in self.torsion.iter().enumerate() {
            y[i] = y[i].rem_euclid(*d);
        }
        y
    }

    /// Canonical coordinates of an `i128` vector.
    pub(crate) fn canon_wide(&self, x: &[i128]) -> Vec<i64> {
        let mut y = Vec::with_capacity(self.canon_dim());
        for r in 0..self.canon_dim() {
            let mut s: i128 = 0;
            for (k, &a) in self.to_canon.row(r).iter().enumerate() {
                s += a as i128 * x[k];
            }
            if r < self.torsion.len() {
                s = s.rem_euclid(self.torsion[r] as i128);
            }
            y.push(to_i64(s));
        }
        y
    }

    /// A representative (generator coordinates) of canonical coordinates.
    pub fn lift_canon(&self, y: &[i64]) -> AbElement {
        assert_eq!(y.len(), self.canon_dim());
        self.from_canon.mul_vec(y)
    }

    pub fn to_canon_matrix(&self) -> &IntMatrix {
        &self.to_canon
    }

    pub fn from_canon_matrix(&self) -> &IntMatrix {
        &self.from_canon
    }

    pub fn zero(&self) -> AbElement {
        vec![0; self.gens]
    }

    pub fn generator(&self, i: usize) -> AbElement {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.canon(x).iter().all(|&c| c == 0)
    }

    pub fn eq_elements(&self, a: &[i64], b: &[i64]) -> bool {
        self.canon(a) == self.canon(b)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> AbElement {
        self.check_len(a);
        self.check_len(b);
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> AbElement {
        self.check_len(a);
        self.check_len(b);
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[i64]) -> AbElement {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, a: &[i64], k: i64) -> AbElement {
        a.iter().map(|x| x * k).collect()
    }

    /// Order of an element, `None` if it has infinite order.
    pub fn element_order(&self, a: &[i64]) -> Option<i64> {
        let y = self.canon(a);
        if y[self.torsion.len()..].iter().any(|&c| c != 0) {
            return None;
        }
        let mut ord = 1i128;
        for (i, &d) in self.torsion.iter().enumerate() {
            let o = d as i128 / lattice::gcd(y[i] as i128, d as i128);
            ord = lattice::lcm(ord, o);
        }
        Some(to_i64(ord))
    }

    /// All elements in canonical coordinates (finite groups only).
    pub fn canon_elements(&self) -> Result<Vec<Vec<i64>>, AbError> {
        if !self.is_finite() {
            return Err(AbError::Infinite);
        }
        let mut out = vec![Vec::new()];
        for &d in &self.torsion {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                for k in 0..d {
                    let mut w = v.clone();
                    w.push(k);
                    next.push(w);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// All elements as generator-coordinate representatives.
    pub fn elements(&self) -> Result<Vec<AbElement>, AbError> {
        Ok(self
            .canon_elements()?
            .iter()
            .map(|y| self.lift_canon(y))
            .collect())
    }

    /// The same group presented by its invariant factors, with the
    /// isomorphism from `self` to it.
    pub fn simplified(&self) -> (FinAb, AbHom) {
        let target = FinAb::from_invariants(&self.invariants());
        let map = AbHom {
            source: self.clone(),
            target: target.clone(),
            matrix: self.to_canon.clone(),
        };
        (target, map)
    }
}

fn diagonal_is_chain(rel: &IntMatrix) -> bool {
    // Diagonal with entries d_1 | d_2 | ... (ones and zeros allowed in order).
    let n = rel.rows().min(rel.cols());
    let diag: Vec<i64> = (0..n).map(|i| rel.get(i, i)).collect();
    if diag.iter().any(|&d| d < 0) {
        return false;
    }
    diag.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        if a == 0 {
            b == 0
        } else {
            b % a == 0
        }
    })
}

fn canonical_from_chain(gens: usize, rel: &IntMatrix) -> (Vec<i64>, usize, IntMatrix, IntMatrix) {
    let n = rel.rows().min(rel.cols());
    let mut kept = Vec::new();
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for i in 0..gens {
        let d = if i < n { rel.get(i, i) } else { 0 };
        if d == 1 {
            continue;
        }
        if d == 0 {
            free.push(i);
        } else {
            torsion.push(d);
            kept.push(i);
        }
    }
    let free_rank = free.len();
    kept.extend(free);
    let s = kept.len();
    let mut to = IntMatrix::zeros(s, gens);
    let mut from = IntMatrix::zeros(gens, s);
    for (k, &i) in kept.iter().enumerate() {
        to.set(k, i, 1);
        from.set(i, k, 1);
    }
    (torsion, free_rank, to, from)
}

fn canonical_from_snf(gens: usize, rel: &IntMatrix) -> (Vec<i64>, usize, IntMatrix, IntMatrix) {
    let snf = smith_normal_form(rel);
    let diag = snf.diagonal();
    let mut torsion = Vec::new();
    let mut tors_idx = Vec::new();
    let mut free_idx = Vec::new();
    for i in 0..gens {
        let d = diag.get(i).copied().unwrap_or(0);
        if d == 1 {
            continue;
        }
        if d == 0 {
            free_idx.push(i);
        } else {
            torsion.push(d);
            tors_idx.push(i);
        }
    }
    let free_rank = free_idx.len();
    let kept: Vec<usize> = tors_idx.iter().chain(free_idx.iter()).copied().collect();
    let s = kept.len();
    let mut to = IntMatrix::zeros(s, gens);
    let mut from = IntMatrix::zeros(gens, s);
    for (k, &i) in kept.iter().enumerate() {
        let d = if k < torsion.len() { torsion[k] } else { 0 };
        for c in 0..gens {
            let mut x = snf.u.get(i, c);
            if d > 0 {
                x = x.rem_euclid(d);
            }
            to.set(k, c, x);
            from.set(c, k, snf.u_inv.get(c, i));
        }
    }
    (torsion, free_rank, to, from)
}

/// A homomorphism of finitely generated abelian groups. The matrix maps
/// source generator coordinates to target generator coordinates.
#[derive(Clone, Debug)]
pub struct AbHom {
    source: FinAb,
    target: FinAb,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks that every source relation lands in the target relation lattice.
    pub fn new(source: FinAb, target: FinAb, matrix: IntMatrix) -> Result<AbHom, AbError> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(AbError::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generator_count(),
                source.generator_count()
            )));
        }
        for c in 0..source.relations().cols() {
            let img = matrix.mul_vec(&source.relations().col(c));
            if !target.is_zero(&img) {
                return Err(AbError::IllDefined(c));
            }
        }
        Ok(AbHom {
            source,
            target,
            matrix,
        })
    }

    pub(crate) fn new_unchecked(source: FinAb, target: FinAb, matrix: IntMatrix) -> AbHom {
        AbHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(a: &FinAb) -> AbHom {
        AbHom::new_unchecked(a.clone(), a.clone(), IntMatrix::identity(a.generator_count()))
    }

    pub fn zero(source: &FinAb, target: &FinAb) -> AbHom {
        AbHom::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.generator_count(), source.generator_count()),
        )
    }

    pub fn source(&self) -> &FinAb {
        &self.source
    }

    pub fn target(&self) -> &FinAb {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> AbElement {
        self.matrix.mul_vec(x)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AbHom) -> Result<AbHom, AbError> {
        if self.target != next.source {
            return Err(AbError::Dimension(String::from("composition of incompatible maps")));
        }
        Ok(AbHom::new_unchecked(
            self.source.clone(),
            next.target.clone(),
            next.matrix.mul(&self.matrix),
        ))
    }

    /// Matrix between canonical coordinates (target rows reduced).
    pub fn canon_matrix(&self) -> IntMatrix {
        let s = self.source.canon_dim();
        let cols: Vec<Vec<i64>> = (0..s)
            .map(|j| {
                let mut e = vec![0; s];
                e[j] = 1;
                let x = self.source.lift_canon(&e);
                self.target.canon(&self.apply(&x))
            })
            .collect();
        IntMatrix::from_cols(self.target.canon_dim(), &cols)
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.source.generator_count()).all(|j| self.target.is_zero(&self.matrix.col(j)))
    }

    /// Equality as maps (on every generator).
    pub fn equals(&self, other: &AbHom) -> bool {
        self.source.generator_count() == other.source.generator_count()
            && self.target.generator_count() == other.target.generator_count()
            && (0..self.source.generator_count())
                .all(|j| self.target.eq_elements(&self.matrix.col(j), &other.matrix.col(j)))
    }

    fn kernel_lattice(&self) -> Echelon {
        let cm = self.canon_matrix();
        let tmod = self.target.canon_moduli();
        let constraints = (0..cm.rows()).map(|r| Constraint {
            terms: cm
                .row(r)
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| (j, a))
                .collect(),
            modulus: tmod[r],
        });
        lattice::kernel(&self.source.canon_moduli(), constraints)
    }

    pub fn is_injective(&self) -> bool {
        let ker = self.kernel_lattice();
        let sq = Subquotient::from_echelon(self.source.canon_moduli(), ker, core::iter::empty());
        sq.group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).0.is_trivial()
    }
}

/// `X / Y` for lattices `Y ⊆ X` inside an ambient group given in diagonal
/// coordinates with fixed moduli.
///
/// The quotient is exposed in invariant-factor form; class coordinates are
/// its canonical coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    moduli: Vec<i64>,
    numerator: Echelon,
    presentation: FinAb,
    group: FinAb,
}

impl Subquotient {
    /// `num_gens` and `den_gens` are vectors in the ambient coordinates. The
    /// denominator must lie in the numerator.
    pub fn new<I, J>(moduli: Vec<i64>, num_gens: I, den_gens: J) -> Result<Subquotient, AbError>
    where
        I: IntoIterator<Item = Vec<i64>>,
        J: IntoIterator<Item = Vec<i64>>,
    {
        let dim = moduli.len();
        let num = Echelon::new(dim, &moduli, num_gens.into_iter().map(|v| widen(&v)));
        let den: Vec<Vec<i64>> = den_gens.into_iter().collect();
        for d in &den {
            if !num.contains(&widen(d)) {
                return Err(AbError::NotInSubgroup);
            }
        }
        Ok(Subquotient::from_echelon(moduli, num, den.into_iter()))
    }

    pub(crate) fn from_echelon<J>(moduli: Vec<i64>, num: Echelon, den_gens: J) -> Subquotient
    where
        J: Iterator<Item = Vec<i64>>,
    {
        let k = num.rank();
        let mut rel_cols: Vec<Vec<i64>> = Vec::new();
        // The moduli vectors are zero in the ambient group.
        for (i, &m) in moduli.iter().enumerate() {
            if m > 0 {
                let mut e = vec![0i128; moduli.len()];
                e[i] = m as i128;
                let c = num.solve(&e).expect("moduli lie in the numerator");
                rel_cols.push(narrow(&c));
            }
        }
        let den_lattice = Echelon::new(moduli.len(), &moduli, den_gens.map(|v| widen(&v)));
        for v in den_lattice.basis() {
            let c = num.solve(v).expect("denominator lies in the numerator");
            rel_cols.push(narrow(&c));
        }
        let presentation = FinAb::new(k, IntMatrix::from_cols(k, &rel_cols)).expect("presentation");
        let group = FinAb::from_invariants(&presentation.invariants());
        Subquotient {
            moduli,
            numerator: num,
            presentation,
            group,
        }
    }

    pub fn group(&self) -> &FinAb {
        &self.group
    }

    pub fn ambient_moduli(&self) -> &[i64] {
        &self.moduli
    }

    /// Whether an ambient vector lies in the numerator.
    pub fn contains(&self, v: &[i64]) -> bool {
        self.numerator.contains(&self.reduce_ambient(v))
    }

    fn reduce_ambient(&self, v: &[i64]) -> Vec<i128> {
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| lattice::reduce(x as i128, m as i128))
            .collect()
    }

    /// Class of an ambient vector lying in the numerator.
    pub fn reduce(&self, v: &[i64]) -> Result<AbElement, AbError> {
        assert_eq!(v.len(), self.moduli.len(), "ambient vector length");
        let c = self
            .numerator
            .solve(&self.reduce_ambient(v))
            .ok_or(AbError::NotInSubgroup)?;
        Ok(self.presentation.canon_wide(&c))
    }

    /// Representative in the ambient coordinates of a class.
    pub fn lift(&self, class: &[i64]) -> Vec<i64> {
        let c = self.presentation.lift_canon(&self.group.canon(class));
        narrow(&self.numerator.combination(&widen(&c)))
    }

    /// Induced map `self -> target` from an ambient map `f`.
    pub fn induced<F>(&self, target: &Subquotient, f: F) -> Result<AbHom, AbError>
    where
        F: Fn(&[i64]) -> Vec<i64>,
    {
        let n = self.group.generator_count();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let v = self.lift(&self.group.generator(i));
            cols.push(target.reduce(&f(&v))?);
        }
        AbHom::new(
            self.group.clone(),
            target.group.clone(),
            IntMatrix::from_cols(target.group.generator_count(), &cols),
        )
    }
}

/// `target / image(f)` with the canonical projection.
pub fn cokernel(f: &AbHom) -> (FinAb, AbHom) {
    let t = f.target();
    let rel = t.relations().hstack(f.matrix());
    let q = FinAb::new(t.generator_count(), rel).expect("cokernel presentation");
    let proj = AbHom::new_unchecked(t.clone(), q.clone(), IntMatrix::identity(t.generator_count()));
    (q, proj)
}

/// The subgroup of source elements mapping to zero, with its inclusion.
pub fn kernel(f: &AbHom) -> (FinAb, AbHom) {
    let sm = f.source().canon_moduli();
    let sq = Subquotient::from_echelon(sm, f.kernel_lattice(), core::iter::empty());
    subgroup_with_inclusion(f.source(), &sq)
}

/// The image of `f` as a subgroup of the target, with its inclusion.
pub fn image(f: &AbHom) -> (FinAb, AbHom) {
    let t = f.target();
    let gens: Vec<Vec<i64>> = (0..f.source().generator_count())
        .map(|j| t.canon(&f.matrix().col(j)))
        .collect();
    let sq = Subquotient::new(t.canon_moduli(), gens, core::iter::empty()).expect("image");
    subgroup_with_inclusion(t, &sq)
}

fn subgroup_with_inclusion(ambient: &FinAb, sq: &Subquotient) -> (FinAb, AbHom) {
    let g = sq.group().clone();
    let cols: Vec<Vec<i64>> = (0..g.generator_count())
        .map(|i| ambient.lift_canon(&sq.lift(&g.generator(i))))
        .collect();
    let incl = AbHom::new_unchecked(
        g.clone(),
        ambient.clone(),
        IntMatrix::from_cols(ambient.generator_count(), &cols),
    );
    (g, incl)
}

/// The torsion subgroup with its inclusion.
pub fn torsion_subgroup(a: &FinAb) -> (FinAb, AbHom) {
    let t = FinAb::from_invariants(a.torsion_invariants());
    let cols: Vec<Vec<i64>> = (0..t.generator_count())
        .map(|i| a.from_canon_matrix().col(i))
        .collect();
    let incl = AbHom::new_unchecked(
        t.clone(),
        a.clone(),
        IntMatrix::from_cols(a.generator_count(), &cols),
    );
    (t, incl)
}

/// `Hom(A, Q/Z)` for a finite group `A`.
///
/// A character is given by coordinates `c` in the invariant-factor
/// presentation of the dual; it sends `a` to `sum_i c_i y_i / d_i` where `y`
/// are the canonical coordinates of `a`.
#[derive(Clone, Debug)]
pub struct FiniteDual {
    base: FinAb,
    group: FinAb,
}

impl FiniteDual {
    pub fn group(&self) -> &FinAb {
        &self.group
    }

    pub fn base(&self) -> &FinAb {
        &self.base
    }

    pub fn eval(&self, chi: &[i64], a: &[i64]) -> QZ {
        let c = self.group.canon(chi);
        let y = self.base.canon(a);
        let mut acc = QZ::zero();
        for (i, &d) in self.base.torsion_invariants().iter().enumerate() {
            acc = acc + QZ::new(((c[i] as i128 * y[i] as i128) % d as i128) as i64, d);
        }
        acc
    }

    /// The character with the given values on the canonical generators of the
    /// base group, if those values are compatible with the orders.
    pub fn character_from_values(&self, values: &[QZ]) -> Option<AbElement> {
        let ds = self.base.torsion_invariants();
        if values.len() != ds.len() {
            return None;
        }
        let mut c = Vec::with_capacity(ds.len());
        for (v, &d) in values.iter().zip(ds) {
            // v must be k/d
            let num = v.numer() as i128 * d as i128;
            if num % v.denom() as i128 != 0 {
                return None;
            }
            c.push(to_i64(num / v.denom() as i128));
        }
        Some(c)
    }
}

pub fn dual_finite(a: &FinAb) -> Result<FiniteDual, AbError> {
    if !a.is_finite() {
        return Err(AbError::Infinite);
    }
    Ok(FiniteDual {
        base: a.clone(),
        group: FinAb::from_invariants(a.torsion_invariants()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        let d = s.diagonal();
        for w in d.windows(2) {
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        assert!(d.iter().all(|&x| x >= 0));
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
    }

    #[test]
    fn snf_identity() {
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        check_snf(&IntMatrix::identity(3));
    }

    #[test]
    fn snf_two_by_two() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![2, 4]);
        check_snf(&m);
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12]]));
        check_snf(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 3], vec![5, 0]]));
        check_snf(&IntMatrix::zeros(2, 3));
    }

    #[test]
    fn canonical_form_of_cokernel() {
        let a = FinAb::new(2, IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]])).unwrap();
        assert_eq!(a.torsion_invariants(), &[4]);
        assert_eq!(a.free_rank(), 0);
        let b = FinAb::from_invariants(&[2, 3]);
        assert_eq!(b.torsion_invariants(), &[6]);
        assert_eq!(b.order(), Some(6));
    }

    #[test]
    fn equality_and_order() {
        let a = FinAb::cyclic(6);
        assert!(a.eq_elements(&[7], &[1]));
        assert_eq!(a.element_order(&[4]), Some(3));
        let z = FinAb::free(1);
        assert_eq!(z.element_order(&[2]), None);
    }

    #[test]
    fn kernel_examples() {
        let z6 = FinAb::cyclic(6);
        let id = AbHom::identity(&z6);
        assert!(kernel(&id).0.is_trivial());
        let two = AbHom::new(z6.clone(), z6.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let (k, incl) = kernel(&two);
        assert_eq!(k.torsion_invariants(), &[2]);
        assert!(z6.eq_elements(&incl.apply(&[1]), &[3]));
        let z4 = FinAb::cyclic(4);
        let (k0, _) = kernel(&AbHom::zero(&z4, &z4));
        assert_eq!(k0.torsion_invariants(), &[4]);
    }

    #[test]
    fn cokernel_examples() {
        let z = FinAb::free(1);
        let (c, _) = cokernel(&AbHom::zero(&z, &z));
        assert_eq!(c.free_rank(), 1);
        let (c5, _) = cokernel(&AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![5]])).unwrap());
        assert_eq!(c5.torsion_invariants(), &[5]);
        let z2 = FinAb::free(2);
        let inc = AbHom::new(z2.clone(), z2, IntMatrix::diagonal(&[2, 3])).unwrap();
        assert_eq!(cokernel(&inc).0.torsion_invariants(), &[6]);
    }

    #[test]
    fn ill_defined_hom_rejected() {
        let z4 = FinAb::cyclic(4);
        let z3 = FinAb::cyclic(3);
        assert_eq!(
            AbHom::new(z4, z3, IntMatrix::from_rows(&[vec![1]])).unwrap_err(),
            AbError::IllDefined(0)
        );
    }

    #[test]
    fn torsion_examples() {
        let a = FinAb::from_invariants(&[0, 4]);
        let (t, incl) = torsion_subgroup(&a);
        assert_eq!(t.torsion_invariants(), &[4]);
        assert_eq!(a.element_order(&incl.apply(&[1])), Some(4));
        assert!(torsion_subgroup(&FinAb::free(2)).0.is_trivial());
    }

    #[test]
    fn dual_cyclic_pairing() {
        let a = FinAb::cyclic(5);
        let d = dual_finite(&a).unwrap();
        assert_eq!(d.eval(&[2], &[3]), QZ::new(6, 5));
        assert!(dual_finite(&FinAb::free(1)).is_err());
    }

    #[test]
    fn subquotient_roundtrip() {
        // (2Z + 4Z/8) inside Z/8: numerator <2>, denominator <4> -> Z/2
        let sq = Subquotient::new(vec![8], vec![vec![2]], vec![vec![4]]).unwrap();
        assert_eq!(sq.group().torsion_invariants(), &[2]);
        let c = sq.reduce(&[6]).unwrap();
        assert_eq!(c, vec![1]);
        let l = sq.lift(&[1]);
        assert_eq!(sq.reduce(&l).unwrap(), vec![1]);
        assert!(sq.reduce(&[1]).is_err());
    }

    #[test]
    fn qz_arithmetic() {
        let a = QZ::new(3, 4);
        let b = QZ::new(1, 2);
        assert_eq!(a + b, QZ::new(1, 4));
        assert_eq!(-a, QZ::new(1, 4));
        assert_eq!(a.mul_int(2), QZ::new(1, 2));
        assert_eq!(QZ::new(-1, 3), QZ::new(2, 3));
    }
}
