//! Dense univariate polynomials over ℚ, ascending coefficient order.

use super::gaussian::GaussRat;
use super::rational::{fmt_rat, Rat};
use crate::error::{Error, Result};
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial with rational coefficients; the zero polynomial is the empty
/// coefficient vector, otherwise the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    /// x - r
    pub fn linear_root(r: &Rat) -> Self {
        Poly::from_coeffs(vec![-r.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from_integer((i as i64 + 1).into()))
                .collect(),
        )
    }

    /// Horner evaluation, exact.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a Gaussian rational, exact.
    pub fn eval_gauss(&self, z: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::real(Rat::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&GaussRat::real(c.clone()));
        }
        acc
    }

    /// Euclidean division: self = q·b + r with deg r < deg b.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::ZeroPolynomialDivisor);
        }
        let db = b.degree().unwrap();
        let lead = b.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(db)];
        while rem.len() > db {
            let k = rem.len() - 1 - db;
            let factor = rem.last().unwrap() / lead;
            if !factor.is_zero() {
                for i in 0..db {
                    let t = &b.coeffs[i] * &factor;
                    rem[k + i] = &rem[k + i] - t;
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// self^e for small exponents.
    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of coefficient magnitudes.
    pub fn coeff_abs_sum(&self) -> Rat {
        self.coeffs
            .iter()
            .fold(Rat::zero(), |acc, c| acc + c.abs())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", fmt_rat(c))?,
                1 => write!(f, "({})x", fmt_rat(c))?,
                _ => write!(f, "({})x^{}", fmt_rat(c), i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat_from_i64;

    fn p(coeffs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&(n, d)| rat_from_i64(n, d)).collect())
    }

    #[test]
    fn add_examples() {
        // (z) + (-z) = 0
        assert!((&Poly::x() + &(-&Poly::x())).is_zero());
        // (3/2)z + (1/6)z = (5/3)z
        let a = p(&[(0, 1), (3, 2)]);
        let b = p(&[(0, 1), (1, 6)]);
        assert_eq!(&a + &b, p(&[(0, 1), (5, 3)]));
    }

    #[test]
    fn mul_examples() {
        // z * (z - 1) = z^2 - z
        let z = Poly::x();
        let zm1 = p(&[(-1, 1), (1, 1)]);
        assert_eq!(&z * &zm1, p(&[(0, 1), (-1, 1), (1, 1)]));
        // z^2 * (z - 1) = z^3 - z^2
        let z2 = z.pow(2);
        assert_eq!(&z2 * &zm1, p(&[(0, 1), (0, 1), (-1, 1), (1, 1)]));
    }

    #[test]
    fn scale_examples() {
        let z = Poly::x();
        assert_eq!(z.scale(&rat_from_i64(1, 2)), p(&[(0, 1), (1, 2)]));
        assert!(z.scale(&Rat::zero()).is_zero());
        assert_eq!(z.scale(&Rat::one()), z);
    }

    #[test]
    fn derivative_examples() {
        // d/dz (z^3 - z^2) = 3z^2 - 2z
        let q = p(&[(0, 1), (0, 1), (-1, 1), (1, 1)]);
        assert_eq!(q.derivative(), p(&[(0, 1), (-2, 1), (3, 1)]));
        assert!(Poly::constant(rat_from_i64(5, 1)).derivative().is_zero());
    }

    #[test]
    fn eval_examples() {
        // f0 = (3/2)z at 1 -> 3/2
        let f0 = p(&[(0, 1), (3, 2)]);
        assert_eq!(f0.eval(&Rat::one()), rat_from_i64(3, 2));
        // eval at 0 is the constant term
        let q = p(&[(7, 3), (1, 1), (4, 1)]);
        assert_eq!(q.eval(&Rat::zero()), rat_from_i64(7, 3));
    }

    #[test]
    fn eval_gauss_matches_real_on_real_points() {
        let q = p(&[(1, 2), (-3, 1), (2, 7)]);
        let x = rat_from_i64(5, 3);
        let z = GaussRat::real(x.clone());
        let v = q.eval_gauss(&z);
        assert!(v.is_real());
        assert_eq!(v.re, q.eval(&x));
    }

    #[test]
    fn divrem_examples() {
        // (z^2 - 1) / (z - 1) = (z + 1, 0)
        let a = p(&[(-1, 1), (0, 1), (1, 1)]);
        let b = p(&[(-1, 1), (1, 1)]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, p(&[(1, 1), (1, 1)]));
        assert!(r.is_zero());
        // a / a = (1, 0)
        let (q, r) = a.divrem(&a).unwrap();
        assert_eq!(q, Poly::one());
        assert!(r.is_zero());
        assert!(a.divrem(&Poly::zero()).is_err());
    }

    #[test]
    fn zero_normalization() {
        let q = p(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(q.degree(), Some(0));
        assert_eq!(Poly::zero().degree(), None);
    }
}
