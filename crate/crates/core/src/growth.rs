//! The growth majorant and the per-stage scaling certificate.
//!
//! The construction needs a continuous positive majorant p(t) that outgrows
//! every polynomial; the shipped choice is e^t, certified from below by its
//! Taylor partial sums (valid term-by-term for t >= 0) and from above by a
//! partial sum plus a geometric remainder bound (valid for t < K+2).
//!
//! A stage correction h is admissible once scaled by an alpha with
//!   alpha * (t^m + c)  <=  2^-n * p(t)    for all t >= 0, and
//!   alpha * inf h'     >=  -2^-n,
//! where (m, c) is an envelope with |h(z)| <= |z|^m + c on all of ℂ. The
//! certificate below pins every ingredient to exact rational data.

use crate::algebra::{pow2, Poly, Rat};
use crate::bigx;
use crate::error::{Error, Result};
use crate::roots::{cert_nonneg_on_ray, global_min_lower_bound, DEFAULT_SLACK};
use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The growth majorant. Only the exponential is shipped; the certification
/// depth is the Taylor truncation order used for rational bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthFn {
    pub kind: GrowthKind,
    /// Taylor truncation order for certification (raised internally when an
    /// envelope needs more).
    pub taylor_terms: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthKind {
    Exp,
}

impl Default for GrowthFn {
    fn default() -> Self {
        GrowthFn {
            kind: GrowthKind::Exp,
            taylor_terms: 8,
        }
    }
}

/// Taylor partial sum of e^t: sum_{i<=k} t^i / i!.
pub fn taylor_poly(k: u32) -> Poly {
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    let mut fact = BigInt::one();
    for i in 0..=k {
        if i > 0 {
            fact *= BigInt::from(i);
        }
        coeffs.push(Rat::new(BigInt::one(), fact.clone()));
    }
    Poly::from_coeffs(coeffs)
}

/// Rational lower bound of e^t for t >= 0; increasing in k.
pub fn exp_lower(t: &Rat, k: u32) -> Result<Rat> {
    if t.is_negative() {
        return Err(Error::NegativeArgument(format!("exp_lower({t})")));
    }
    Ok(taylor_poly(k).eval(t))
}

/// Rational upper bound of e^t, valid for 0 <= t < k+2: partial sum plus the
/// geometric remainder  t^(k+1)/(k+1)! * (k+2)/(k+2-t).
pub fn exp_upper(t: &Rat, k: u32) -> Result<Rat> {
    if t.is_negative() {
        return Err(Error::NegativeArgument(format!("exp_upper({t})")));
    }
    let kp2 = Rat::from_integer(BigInt::from(k + 2));
    if *t >= kp2 {
        return Err(Error::TaylorDepth {
            t: t.to_string(),
            k,
        });
    }
    let sum = taylor_poly(k).eval(t);
    let mut fact = BigInt::one();
    for i in 2..=(k as u64 + 1) {
        fact *= BigInt::from(i);
    }
    let tail_first = t.pow((k + 1) as i32) / Rat::from_integer(fact);
    let geom = &kp2 / (&kp2 - t);
    Ok(sum + tail_first * geom)
}

/// An (m, c) with |h(z)| <= |z|^m + c for every complex z:
/// m = deg h + 1 and c = S^m for S = max(1, sum of |coefficients|).
///
/// For |z| >= S:  |h(z)| <= S·|z|^deg <= |z|^(deg+1); for |z| < S:
/// |h(z)| <= S·S^deg = c. Very large exact sums are rounded up to a short
/// dyadic before powering so the envelope stays a small certificate; this
/// only loosens c, never invalidates it.
pub fn polynomial_envelope(h: &Poly) -> Result<(u32, Rat)> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = h.degree().unwrap() as u32 + 1;
    let mut s = std::cmp::max(Rat::one(), h.coeff_abs_sum());
    if crate::algebra::rat_bits(&s) > 128 {
        s = dyadic_round_up(&s, 64);
    }
    Ok((m, s.pow(m as i32)))
}

/// Smallest-ish dyadic with `prec` mantissa bits that is >= r (r > 0).
fn dyadic_round_up(r: &Rat, prec: u64) -> Rat {
    let e = bigx::floor_log2_ratio(r.numer().magnitude(), r.denom().magnitude());
    let shift = prec as i64 - 1 - e;
    // ceil(r * 2^shift) / 2^shift
    let scaled = if shift >= 0 {
        (r.numer() << shift as u64) .div_ceil(r.denom())
    } else {
        r.numer().div_ceil(&(r.denom() << (-shift) as u64))
    };
    Rat::from_integer(scaled) * pow2(-shift)
}

/// Certificate that `alpha` scales a correction polynomial h into the stage
/// budget: all inequalities below re-check from the recorded fields alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphaCertificate {
    /// Stage index n (the budget is 2^-n).
    pub stage: usize,
    /// Envelope exponent m.
    pub env_m: u32,
    /// Envelope constant c (serialized as a rational string).
    #[serde(with = "crate::records::rat_string")]
    pub env_c: Rat,
    /// Certified lower bound of h' over ℝ.
    #[serde(with = "crate::records::rat_string")]
    pub deriv_floor: Rat,
    /// Certified dyadic lower bound of inf_{t>=0} T_K(t) / (t^m + c).
    #[serde(with = "crate::records::rat_string")]
    pub min_ratio_lower_bound: Rat,
    /// The chosen scaling, a power of two.
    #[serde(with = "crate::records::rat_string")]
    pub alpha: Rat,
    /// Taylor depth K used by the ratio certificate.
    pub taylor_terms: u32,
}

impl AlphaCertificate {
    /// Effective Taylor depth for an envelope exponent under a configured
    /// base depth: at least m+2 so the certified ratio diverges.
    pub fn effective_k(base: u32, m: u32) -> u32 {
        base.max(m + 2)
    }
}

/// Choose the stage scaling alpha for the correction h at stage n: the
/// largest power of two satisfying
///   alpha <= 2^-n,
///   alpha <= 2^-n * minRatio   (growth budget via the envelope), and
///   alpha * derivFloor >= -2^-n (derivative budget).
pub fn select_alpha(h: &Poly, n: usize, growth: &GrowthFn) -> Result<AlphaCertificate> {
    let GrowthKind::Exp = growth.kind;
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, c) = polynomial_envelope(h)?;
    let deriv_floor = if h.degree().unwrap() == 0 {
        Rat::zero()
    } else {
        global_min_lower_bound(&h.derivative(), &DEFAULT_SLACK())?
    };
    let k = AlphaCertificate::effective_k(growth.taylor_terms, m);
    let min_ratio = certified_ratio_floor(m, &c, k)?;

    let budget = pow2(-(n as i64));
    let mut bound = &budget * &min_ratio;
    if bound > budget {
        bound = budget.clone();
    }
    if deriv_floor.is_negative() {
        let cap = &budget / -&deriv_floor;
        if cap < bound {
            bound = cap;
        }
    }
    debug_assert!(bound.is_positive());
    let alpha = largest_pow2_le(&bound);
    Ok(AlphaCertificate {
        stage: n,
        env_m: m,
        env_c: c,
        deriv_floor,
        min_ratio_lower_bound: min_ratio,
        alpha,
        taylor_terms: k,
    })
}

/// Largest power of two <= b (b > 0), exact.
pub fn largest_pow2_le(b: &Rat) -> Rat {
    let e = bigx::floor_log2_ratio(b.numer().magnitude(), b.denom().magnitude());
    pow2(e)
}

/// Largest lambda = 2^-j with T_K(t) - lambda*(t^m + c) >= 0 certified for
/// all t >= 0. Monotone in K: raising the depth never shrinks the result.
pub fn certified_ratio_floor(m: u32, c: &Rat, k: u32) -> Result<Rat> {
    assert!(k > m, "taylor depth must exceed the envelope exponent");
    assert!(*c >= Rat::one(), "envelope constant below 1");
    let envelope = envelope_poly(m, c);
    let taylor = taylor_poly(k);
    let ok = |j: i64| -> bool {
        let q = &taylor - &envelope.scale(&pow2(-j));
        cert_nonneg_on_ray(&q)
    };
    // lambda <= T(0)/c = 1/c pins the search start near log2(c)
    let mut j = bigx::floor_log2_ratio(c.numer().magnitude(), c.denom().magnitude()).max(0);
    if !ok(j) {
        // walk up exponentially, then binary search the threshold
        let mut step = 1i64;
        let mut lo = j; // known-bad
        loop {
            let cand = lo + step;
            if ok(cand) {
                let mut bad = lo;
                let mut good = cand;
                while good - bad > 1 {
                    let mid = (good + bad) / 2;
                    if ok(mid) {
                        good = mid;
                    } else {
                        bad = mid;
                    }
                }
                j = good;
                break;
            }
            lo = cand;
            step *= 2;
            if step > (1 << 24) {
                return Err(Error::Construction {
                    stage: 0,
                    msg: "growth ratio certificate search diverged".into(),
                });
            }
        }
    } else {
        // largest certifiable lambda may be a step or two above the seed
        while j > 0 && ok(j - 1) {
            j -= 1;
        }
    }
    Ok(pow2(-j))
}

/// t^m + c.
fn envelope_poly(m: u32, c: &Rat) -> Poly {
    let mut coeffs = vec![Rat::zero(); m as usize + 1];
    coeffs[0] = c.clone();
    coeffs[m as usize] = Rat::one();
    Poly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from_i64;

    #[test]
    fn exp_lower_examples() {
        // t=0: first term only
        assert_eq!(exp_lower(&Rat::zero(), 5).unwrap(), Rat::one());
        // t=2, K=3: 1 + 2 + 2 + 4/3 = 19/3
        assert_eq!(
            exp_lower(&rat_from_i64(2, 1), 3).unwrap(),
            rat_from_i64(19, 3)
        );
        // t=1, K=10 inside (2.71827, e)
        let v = exp_lower(&Rat::one(), 10).unwrap();
        assert!(v > rat_from_i64(271827, 100000));
        assert!(v < rat_from_i64(2718282, 1000000));
        assert!(exp_lower(&rat_from_i64(-1, 1), 3).is_err());
    }

    #[test]
    fn exp_upper_examples() {
        assert_eq!(exp_upper(&Rat::zero(), 4).unwrap(), Rat::one());
        let v = exp_upper(&Rat::one(), 10).unwrap();
        // inside (e, 2.71829)
        assert!(v > rat_from_i64(2718281, 1000000));
        assert!(v < rat_from_i64(271829, 100000));
        assert!(exp_upper(&rat_from_i64(12, 1), 8).is_err());
    }

    #[test]
    fn sandwich_on_samples() {
        for (n, d) in [(0i64, 1i64), (1, 2), (1, 1), (7, 3), (9, 2)] {
            let t = rat_from_i64(n, d);
            let lo = exp_lower(&t, 6).unwrap();
            let hi = exp_upper(&t, 9).unwrap();
            assert!(lo <= hi, "t={t}");
        }
    }

    #[test]
    fn envelope_examples() {
        // h = z: S=1, m=2, c=1
        let z = Poly::x();
        assert_eq!(polynomial_envelope(&z).unwrap(), (2, Rat::one()));
        // h = z^3 - z^2: S=2, m=4, c=16
        let h = Poly::from_coeffs(vec![
            Rat::zero(),
            Rat::zero(),
            rat_from_i64(-1, 1),
            Rat::one(),
        ]);
        assert_eq!(polynomial_envelope(&h).unwrap(), (4, rat_from_i64(16, 1)));
        // constant 3: m=1, c=3
        let c3 = Poly::constant(rat_from_i64(3, 1));
        assert_eq!(polynomial_envelope(&c3).unwrap(), (1, rat_from_i64(3, 1)));
        assert!(polynomial_envelope(&Poly::zero()).is_err());
    }

    #[test]
    fn envelope_bound_holds_on_samples() {
        let h = Poly::from_coeffs(vec![
            rat_from_i64(3, 2),
            rat_from_i64(-5, 1),
            rat_from_i64(7, 4),
        ]);
        let (m, c) = polynomial_envelope(&h).unwrap();
        for i in -30..30 {
            let x = rat_from_i64(i, 3);
            let bound = x.abs().pow(m as i32) + &c;
            assert!(h.eval(&x).abs() <= bound, "x={x}");
        }
    }

    #[test]
    fn ratio_floor_for_unit_envelope() {
        // inf T_K(t)/(t^2+1) = 1 at t=0 for K >= 3: floor is exactly 1
        let r = certified_ratio_floor(2, &Rat::one(), 8).unwrap();
        assert_eq!(r, Rat::one());
        // m=4, c=16: inf e^t/(t^4+16) = 1/16 at t=0; dyadic floor is 1/16
        let r = certified_ratio_floor(4, &rat_from_i64(16, 1), 8).unwrap();
        assert_eq!(r, rat_from_i64(1, 16));
    }

    #[test]
    fn ratio_floor_monotone_in_k() {
        let c = rat_from_i64(37, 2);
        let mut prev = Rat::zero();
        for k in [6u32, 8, 12, 16, 24] {
            let r = certified_ratio_floor(4, &c, k).unwrap();
            assert!(r >= prev, "k={k}");
            prev = r;
        }
    }

    #[test]
    fn select_alpha_stage_one() {
        // h = z at stage 1: m=2, c=1, ratio floor 1, deriv floor 1 >= 0;
        // alpha = 1/2
        let cert = select_alpha(&Poly::x(), 1, &GrowthFn::default()).unwrap();
        assert_eq!(cert.alpha, rat_from_i64(1, 2));
        assert_eq!(cert.env_m, 2);
        assert_eq!(cert.env_c, Rat::one());
        assert!(cert.deriv_floor >= Rat::zero());
    }

    #[test]
    fn select_alpha_certificate_inequalities() {
        // h = z^3 - z^2 at stage 2
        let h = Poly::from_coeffs(vec![
            Rat::zero(),
            Rat::zero(),
            rat_from_i64(-1, 1),
            Rat::one(),
        ]);
        let cert = select_alpha(&h, 2, &GrowthFn::default()).unwrap();
        let budget = pow2(-2);
        assert!(cert.alpha <= budget);
        assert!(cert.alpha <= &budget * &cert.min_ratio_lower_bound);
        // (iii): alpha * derivFloor >= -2^-n; true floor here is -1/3
        assert!(cert.deriv_floor <= rat_from_i64(-1, 3));
        assert!(&cert.alpha * &cert.deriv_floor >= -&budget);
        // sample check of the growth inequality at rational points
        let k = cert.taylor_terms;
        for i in 0..40 {
            let t = rat_from_i64(i, 3);
            let lhs = &cert.alpha * (t.pow(cert.env_m as i32) + &cert.env_c);
            let rhs = &budget * exp_lower(&t, k).unwrap();
            assert!(lhs <= rhs, "t={t}");
        }
    }

    #[test]
    fn select_alpha_rejects_bad_parity() {
        // even-degree h with the (iii) constraint active: h' unbounded below
        let h = Poly::from_coeffs(vec![Rat::zero(), Rat::zero(), Rat::one()]); // z^2
        assert!(select_alpha(&h, 1, &GrowthFn::default()).is_err());
    }
}
