//! Exact dyadic interval arithmetic.
//!
//! A [`Dyadic`] is m·2^e with a big-integer mantissa; sums and products are
//! exact, so a [`DInt`] interval only widens where an input was rounded
//! (rational → dyadic conversion). This gives certified sign tests and range
//! bounds on polynomials whose exact coefficients are hundreds of kilobits,
//! at a tiny fraction of the exact-arithmetic cost: coefficients are rounded
//! once to a working precision and everything after that is cheap.

use crate::algebra::Rat;
use crate::bigx;
use num::{BigInt, One, Signed, Zero};
use std::cmp::Ordering;

/// m · 2^e, normalized so that m is odd or zero.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub m: BigInt,
    pub e: i64,
}

impl Dyadic {
    pub fn new(mut m: BigInt, mut e: i64) -> Self {
        if m.is_zero() {
            return Dyadic {
                m,
                e: 0,
            };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            m >>= tz;
            e += tz as i64;
        }
        Dyadic { m, e }
    }

    pub fn zero() -> Self {
        Dyadic {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    pub fn one() -> Self {
        Dyadic {
            m: BigInt::one(),
            e: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        self.m.cmp(&BigInt::zero())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.m.is_zero() {
            return o.clone();
        }
        if o.m.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        if self.m.is_zero() || o.m.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd; no renormalization needed
        Dyadic {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.m.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    /// floor(log2 |x|) for nonzero x.
    pub fn mag_exp(&self) -> i64 {
        debug_assert!(!self.m.is_zero());
        self.m.magnitude().bits() as i64 - 1 + self.e
    }

    pub fn cmp_val(&self, o: &Dyadic) -> Ordering {
        let s = self.sign();
        let t = o.sign();
        if s != t {
            return s.cmp(&t);
        }
        if s == Ordering::Equal {
            return Ordering::Equal;
        }
        // same nonzero sign: decide by magnitude exponent first to avoid
        // gigantic alignment shifts
        let (ea, eb) = (self.mag_exp(), o.mag_exp());
        if ea != eb {
            let mag = ea.cmp(&eb);
            return if s == Ordering::Greater { mag } else { mag.reverse() };
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        a.cmp(&b)
    }

    pub fn to_rat(&self) -> Rat {
        if self.e >= 0 {
            Rat::from_integer(&self.m << self.e as u64)
        } else {
            crate::algebra::rat_from_pair(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    /// Round toward -inf to `prec` mantissa bits; second result says whether
    /// rounding discarded anything.
    fn floor_prec(&self, prec: u64) -> (Dyadic, bool) {
        let bits = self.m.magnitude().bits();
        if bits <= prec {
            return (self.clone(), false);
        }
        let drop = (bits - prec) as i64;
        let shifted = &self.m >> drop as u64; // arithmetic shift: floor
        let exact = (&shifted << drop as u64) == self.m;
        (Dyadic::new(shifted, self.e + drop), !exact)
    }
}

/// Closed interval [lo, hi] of dyadics.
#[derive(Clone, Debug)]
pub struct DInt {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DInt {
    pub fn point(d: Dyadic) -> Self {
        DInt {
            lo: d.clone(),
            hi: d,
        }
    }

    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_val(&hi) != Ordering::Greater);
        DInt { lo, hi }
    }

    pub fn zero() -> Self {
        DInt::point(Dyadic::zero())
    }

    /// Enclose a rational to roughly `prec` significant bits. Exact (a point)
    /// when the value is itself a small dyadic.
    pub fn from_rat(r: &Rat, prec: u64) -> Self {
        if r.numer().is_zero() {
            return DInt::zero();
        }
        let neg = r.numer().is_negative();
        let num = r.numer().magnitude();
        let den = r.denom().magnitude();
        // small inputs: one exact division decides everything
        let (lo, hi) = if num.bits() <= prec + 64 && den.bits() <= prec + 64 {
            let e = bigx::floor_log2_ratio(num, den) - prec as i64;
            // mantissa = floor(num / den * 2^-e), e <= log2 - prec
            let scaled = if e <= 0 {
                (num << (-e) as u64) / den
            } else {
                num / (den << e as u64)
            };
            let m = BigInt::from(scaled.clone());
            let exact = if e <= 0 {
                (num << (-e) as u64) == &scaled * den
            } else {
                false
            };
            if exact {
                let d = Dyadic::new(m, e);
                (d.clone(), d)
            } else {
                (
                    Dyadic::new(m.clone(), e),
                    Dyadic::new(m + 1, e),
                )
            }
        } else {
            // top-bits approximation: num in [n'*2^a, (n'+1)*2^a),
            // den in [d'*2^b, (d'+1)*2^b)
            let keep = prec + 64;
            let a = num.bits().saturating_sub(keep);
            let b = den.bits().saturating_sub(keep);
            let np = num >> a;
            let dp = den >> b;
            let e = a as i64 - b as i64 - prec as i64;
            let lo_m = BigInt::from((&np << prec) / (&dp + 1u32));
            let hi_num = (&np + 1u32) << prec;
            let hi_m = BigInt::from((&hi_num + &dp - 1u32) / &dp); // ceil
            (Dyadic::new(lo_m, e), Dyadic::new(hi_m, e))
        };
        if neg {
            DInt::new(hi.neg(), lo.neg())
        } else {
            DInt::new(lo, hi)
        }
    }

    /// Enclose an integer at `prec` mantissa bits (outward).
    pub fn from_int_prec(n: &BigInt, prec: u64) -> Self {
        let d = Dyadic::from_int(n);
        let (lo, dropped) = d.floor_prec(prec);
        if !dropped {
            return DInt::point(lo);
        }
        let hi = Dyadic::new(&lo.m + 1, lo.e);
        DInt::new(lo, hi)
    }

    pub fn neg(&self) -> DInt {
        DInt {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, o: &DInt) -> DInt {
        DInt {
            lo: self.lo.add(&o.lo),
            hi: self.hi.add(&o.hi),
        }
    }

    pub fn mul(&self, o: &DInt) -> DInt {
        let cands = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_val(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp_val(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        DInt { lo, hi }
    }

    /// Definite sign of every point in the interval, when certain.
    pub fn sign_certain(&self) -> Option<Ordering> {
        if self.lo.sign() == Ordering::Greater {
            return Some(Ordering::Greater);
        }
        if self.hi.sign() == Ordering::Less {
            return Some(Ordering::Less);
        }
        if self.lo.is_zero() && self.hi.is_zero() {
            return Some(Ordering::Equal);
        }
        None
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }
}

/// Round the coefficients of an integer polynomial once; reuse across many
/// cheap interval evaluations.
pub fn round_coeffs(coeffs: &[BigInt], prec: u64) -> Vec<DInt> {
    coeffs.iter().map(|c| DInt::from_int_prec(c, prec)).collect()
}

/// Interval Horner evaluation.
pub fn eval_interval(coeffs: &[DInt], x: &DInt) -> DInt {
    let mut acc = DInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}
