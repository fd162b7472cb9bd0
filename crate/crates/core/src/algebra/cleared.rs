//! Cleared polynomial forms: integer coefficient vectors, optionally over a
//! single positive denominator.
//!
//! The public [`Poly`](super::Poly) type keeps every coefficient reduced,
//! which is the right contract at the API boundary but far too slow inside
//! the kernels once coefficients reach hundreds of kilobits (every reduced
//! operation pays a gcd). The kernels therefore work on `PolyZ`/`PolyQ` and
//! reduce once at the serialization boundary.

use super::poly::Poly;
use super::rational::{rat_from_pair, Rat};
use crate::bigx;
use num::{BigInt, Integer, One, Signed, Zero};
use std::cmp::Ordering;

/// Integer-coefficient polynomial, ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyZ {
    pub coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    pub fn zero() -> Self {
        PolyZ { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyZ {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> PolyZ {
        if self.coeffs.len() <= 1 {
            return PolyZ::zero();
        }
        PolyZ::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as i64 + 1))
                .collect(),
        )
    }

    pub fn neg(&self) -> PolyZ {
        PolyZ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &PolyZ) -> PolyZ {
        if self.is_zero() || rhs.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZ::from_coeffs(out)
    }

    /// Multiply in place by the linear factor (q·x - p).
    pub fn mul_linear(&mut self, p: &BigInt, q: &BigInt) {
        if self.is_zero() {
            return;
        }
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(-(p * &self.coeffs[0]));
        for k in 1..n {
            out.push(q * &self.coeffs[k - 1] - p * &self.coeffs[k]);
        }
        out.push(q * &self.coeffs[n - 1]);
        *self = PolyZ::from_coeffs(out);
    }

    pub fn scale(&self, s: &BigInt) -> PolyZ {
        if s.is_zero() {
            return PolyZ::zero();
        }
        PolyZ {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Exact integer Horner.
    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Homogeneous evaluation: Σ c_k a^k b^(d-k). For b > 0 this has the
    /// sign of p(a/b).
    pub fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let mut acc = self.coeffs.last().unwrap().clone();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev().skip(1) {
            bpow *= b;
            acc = acc * a + c * &bpow;
        }
        acc
    }

    /// Sign of p at the rational point x (denominator positive).
    pub fn sign_at(&self, x: &Rat) -> Ordering {
        debug_assert!(x.denom().is_positive());
        self.eval_homogeneous(x.numer(), x.denom())
            .cmp(&BigInt::zero())
    }

    /// gcd of all coefficients (zero polynomial -> 0).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            if !c.is_zero() {
                g = bigx::gcd_big(&g, c);
            }
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide all coefficients by an exact common divisor.
    pub fn div_exact(&self, d: &BigInt) -> PolyZ {
        debug_assert!(!d.is_zero());
        PolyZ {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero(), "inexact division in div_exact");
                    q
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().bits())
            .max()
            .unwrap_or(0)
    }
}

/// Rational polynomial in cleared form: `num / den` with den > 0. Not kept
/// reduced; arithmetic is pure integer work.
#[derive(Clone, Debug)]
pub struct PolyQ {
    pub num: PolyZ,
    pub den: BigInt,
}

impl PolyQ {
    pub fn new(num: PolyZ, den: BigInt) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        PolyQ { num, den }
    }

    pub fn from_int(num: PolyZ) -> Self {
        PolyQ {
            num,
            den: BigInt::one(),
        }
    }

    /// Clear a reduced-coefficient polynomial over the lcm of its
    /// denominators. Intended for small polynomials; large stage
    /// polynomials are built in cleared form from the start.
    pub fn from_poly(p: &Poly) -> Self {
        let mut den = BigInt::one();
        for c in p.coeffs() {
            let g = bigx::gcd_big(&den, c.denom());
            den = &den / g * c.denom();
        }
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        PolyQ {
            num: PolyZ::from_coeffs(coeffs),
            den,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.num.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// self + (sn/sd) · (h / hd), all integer multiplications.
    pub fn add_scaled(&self, sn: &BigInt, sd: &BigInt, h: &PolyZ, hd: &BigInt) -> PolyQ {
        assert!(sd.is_positive() && hd.is_positive());
        let scale_self = sd * hd;
        let scale_h = sn * &self.den;
        let n = self.num.coeffs.len().max(h.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self
                .num
                .coeffs
                .get(i)
                .map(|c| c * &scale_self)
                .unwrap_or_else(BigInt::zero);
            let b = h
                .coeffs
                .get(i)
                .map(|c| c * &scale_h)
                .unwrap_or_else(BigInt::zero);
            out.push(a + b);
        }
        PolyQ {
            num: PolyZ::from_coeffs(out),
            den: &self.den * scale_self,
        }
    }

    pub fn derivative(&self) -> PolyQ {
        PolyQ {
            num: self.num.derivative(),
            den: self.den.clone(),
        }
    }

    /// Exact value at a rational point, as an unreduced fraction with a
    /// positive denominator.
    pub fn eval_parts(&self, x: &Rat) -> (BigInt, BigInt) {
        let d = self.num.degree().unwrap_or(0) as u32;
        let num = self.num.eval_homogeneous(x.numer(), x.denom());
        let den = &self.den * x.denom().pow(d);
        (num, den)
    }

    /// Exact reduced value at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let (n, d) = self.eval_parts(x);
        rat_from_pair(n, d)
    }

    /// Exact comparison of self(x) with y without reducing anything.
    pub fn eval_cmp(&self, x: &Rat, y: &Rat) -> Ordering {
        let (n, d) = self.eval_parts(x);
        // n/d vs y.num/y.den  <=>  n*y.den vs y.num*d   (d > 0, y.den > 0)
        (n * y.denom()).cmp(&(y.numer() * d))
    }

    /// Exact value at a Gaussian rational, reduced.
    pub fn eval_gauss(&self, z: &super::gaussian::GaussRat) -> super::gaussian::GaussRat {
        // z = (A + Bi)/C over a common denominator C > 0.
        let g = bigx::gcd_big(z.re.denom(), z.im.denom());
        let c = z.re.denom() / &g * z.im.denom();
        let a = z.re.numer() * (&c / z.re.denom());
        let b = z.im.numer() * (&c / z.im.denom());
        let d = self.num.degree().unwrap_or(0) as u32;
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        let mut cpow = BigInt::one();
        // Horner: acc = acc*(A+Bi) + coeff*C^(d-k), homogenized by C.
        for (i, k) in self.num.coeffs.iter().rev().enumerate() {
            if i > 0 {
                cpow *= &c;
                let nre = &re * &a - &im * &b;
                let nim = &re * &b + &im * &a;
                re = nre;
                im = nim;
            }
            re += k * &cpow;
        }
        let den = &self.den * c.pow(d);
        super::gaussian::GaussRat::new(
            rat_from_pair(re, den.clone()),
            rat_from_pair(im, den),
        )
    }

    /// Reduce every coefficient (Lehmer gcd) into a canonical `Poly`.
    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(
            self.num
                .coeffs
                .iter()
                .map(|c| rat_from_pair(c.clone(), self.den.clone()))
                .collect(),
        )
    }

    pub fn max_bits(&self) -> u64 {
        self.num.max_coeff_bits().max(self.den.magnitude().bits())
    }
}
