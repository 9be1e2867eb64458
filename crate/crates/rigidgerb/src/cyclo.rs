//! Elements of cyclotomic fields `Q(ζ_m)` with exact rational coefficients.
//!
//! An element is a polynomial in `ζ_m` of degree below `φ(m)`, reduced
//! modulo the cyclotomic polynomial `Φ_m`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::abgroup::QZ;

type Rat = Ratio<i64>;

/// Integer coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic index must be positive");
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = exact_divide(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd] / lead;
        q[k] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[k + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

#[derive(Clone, PartialEq, Eq)]
pub struct Cyclo {
    m: usize,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Rat::from_integer(0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*z{}", c, self.m)?,
                _ => write!(f, "{}*z{}^{}", c, self.m, k)?,
            }
        }
        Ok(())
    }
}

impl Cyclo {
    fn reduce(m: usize, mut coeffs: Vec<Rat>) -> Cyclo {
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        // Φ_m is monic.
        for k in (deg..coeffs.len()).rev() {
            let c = coeffs[k];
            if c != Rat::from_integer(0) {
                for (j, &b) in phi.iter().enumerate() {
                    coeffs[k - deg + j] -= c * Rat::from_integer(b);
                }
            }
        }
        coeffs.truncate(deg);
        coeffs.resize(deg, Rat::from_integer(0));
        Cyclo { m, coeffs }
    }

    pub fn zero(m: usize) -> Cyclo {
        Cyclo::reduce(m, Vec::new())
    }

    pub fn from_rational(m: usize, r: Rat) -> Cyclo {
        Cyclo::reduce(m, vec![r])
    }

    pub fn from_int(m: usize, k: i64) -> Cyclo {
        Cyclo::from_rational(m, Rat::from_integer(k))
    }

    /// `ζ_m^k`.
    pub fn zeta_pow(m: usize, k: i64) -> Cyclo {
        let e = k.rem_euclid(m as i64) as usize;
        let mut c = vec![Rat::from_integer(0); e + 1];
        c[e] = Rat::from_integer(1);
        Cyclo::reduce(m, c)
    }

    /// `e^{2πiθ}`, which must lie in `Q(ζ_m)`.
    pub fn root_of_unity(m: usize, theta: QZ) -> Option<Cyclo> {
        let d = theta.denom();
        if m as i64 % d != 0 {
            return None;
        }
        Some(Cyclo::zeta_pow(m, theta.numer() * (m as i64 / d)))
    }

    pub fn conductor(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    fn check(&self, other: &Cyclo) {
        assert_eq!(self.m, other.m, "cyclotomic fields differ");
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        self.check(other);
        Cyclo {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        self.check(other);
        let n = self.coeffs.len();
        let mut out = vec![Rat::from_integer(0); 2 * n.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Cyclo::reduce(self.m, out)
    }

    pub fn scale(&self, r: Rat) -> Cyclo {
        Cyclo {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclo {
        let m = self.m;
        let mut out = vec![Rat::from_integer(0); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[(m - k) % m] += c;
        }
        Cyclo::reduce(m, out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Rat::from_integer(0))
    }

    pub fn to_rational(&self) -> Option<Rat> {
        if self.coeffs.iter().skip(1).all(|c| *c == Rat::from_integer(0)) {
            Some(self.coeffs.first().copied().unwrap_or_else(|| Rat::from_integer(0)))
        } else {
            None
        }
    }

    /// The angle `θ` with `self = e^{2πiθ}`, if `self` is a root of unity of
    /// order dividing `2m`.
    pub fn as_root_of_unity(&self) -> Option<QZ> {
        let two_m = 2 * self.m as i64;
        (0..two_m).map(|k| QZ::new(k, two_m)).find(|&t| {
            Cyclo::root_of_unity(2 * self.m, t)
                .map(|c| c == self.lift(2 * self.m))
                .unwrap_or(false)
        })
    }

    /// The same element viewed in `Q(ζ_{m'})` for a multiple `m'` of `m`.
    pub fn lift(&self, m2: usize) -> Cyclo {
        assert_eq!(m2 % self.m, 0, "target field does not contain the source");
        let step = m2 / self.m;
        let mut out = vec![Rat::from_integer(0); self.coeffs.len() * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * step] += c;
        }
        Cyclo::reduce(m2, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in [3usize, 4, 5, 6, 8, 12] {
            let mut s = Cyclo::zero(m);
            for k in 0..m as i64 {
                s = s.add(&Cyclo::zeta_pow(m, k));
            }
            assert!(s.is_zero(), "m = {}", m);
        }
    }

    #[test]
    fn conjugation_and_products() {
        let i = Cyclo::zeta_pow(4, 1);
        assert_eq!(i.mul(&i), Cyclo::from_int(4, -1));
        assert_eq!(i.conj(), Cyclo::zeta_pow(4, 3));
        assert_eq!(i.mul(&i.conj()), Cyclo::from_int(4, 1));
        let w = Cyclo::zeta_pow(3, 1);
        assert_eq!(w.add(&w.conj()), Cyclo::from_int(3, -1));
        assert_eq!(i.as_root_of_unity(), Some(QZ::new(1, 4)));
        assert_eq!(Cyclo::from_int(4, -1).as_root_of_unity(), Some(QZ::new(1, 2)));
        assert_eq!(Cyclo::from_int(4, 2).as_root_of_unity(), None);
        assert_eq!(i.lift(8).mul(&i.lift(8)), Cyclo::from_int(8, -1));
    }
}
