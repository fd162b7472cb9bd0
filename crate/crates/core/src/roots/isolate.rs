//! Root isolation by Sturm-count bisection.

use super::chain::SturmChain;
use crate::algebra::{rat_from_i64, Poly, PolyQ, PolyZ, Rat, RatInterval};
use crate::error::{Error, Result};
use num::{Signed, Zero};
use std::cmp::Ordering;

/// An interval certified to contain exactly one real root of a polynomial.
/// A degenerate (point) interval means the root is known exactly.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub interval: RatInterval,
    /// The enclosed root is simple in the squarefree part used for
    /// certification.
    pub multiplicity_free: bool,
}

impl RootEnclosure {
    pub fn exact_root(&self) -> Option<&Rat> {
        if self.interval.is_point() {
            Some(self.interval.lo())
        } else {
            None
        }
    }
}

/// Cauchy bound: every real root lies strictly inside (-B, B),
/// B = 1 + max|a_i| / |a_d|, exact.
pub fn cauchy_root_bound(p: &Poly) -> Result<Rat> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lead = p.leading().unwrap().abs();
    let mx = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rat::zero);
    Ok(Rat::one() + mx / lead)
}

pub(crate) fn cauchy_root_bound_z(p: &PolyZ) -> Rat {
    let lead = Rat::from_integer(p.leading().unwrap().abs());
    let mx = p
        .coeffs
        .iter()
        .take(p.coeffs.len() - 1)
        .map(|c| Rat::from_integer(c.abs()))
        .max()
        .unwrap_or_else(Rat::zero);
    Rat::one() + mx / lead
}

use num::One;

/// Exact count of distinct real roots of `p` in (lo, hi].
pub fn sturm_count(p: &Poly, interval: &RatInterval) -> Result<usize> {
    let z = PolyQ::from_poly(p).num;
    let chain = SturmChain::new(&z)?;
    Ok(chain.count_halfopen(interval.lo(), interval.hi()))
}

/// Pairwise-disjoint enclosures of width <= eps jointly containing every
/// real root of `p` (each enclosure holds exactly one).
pub fn isolate_real_roots(p: &Poly, eps: &Rat) -> Result<Vec<RootEnclosure>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    assert!(eps.is_positive(), "eps must be positive");
    let z = PolyQ::from_poly(p).num;
    isolate_real_roots_z(&z, eps)
}

pub(crate) fn isolate_real_roots_z(z: &PolyZ, eps: &Rat) -> Result<Vec<RootEnclosure>> {
    if z.degree().unwrap_or(0) == 0 {
        return Ok(vec![]);
    }
    let chain = SturmChain::new(z)?;
    // Cauchy bound rounded up to a power of two: bisection endpoints then
    // stay on the dyadic grid (small and cheap to evaluate at).
    let bound = {
        let b = cauchy_root_bound_z(z);
        let e = crate::bigx::floor_log2_ratio(b.numer().magnitude(), b.denom().magnitude());
        crate::algebra::pow2(e + 1)
    };
    let lo = -&bound;
    let hi = bound;
    let total = chain.count_halfopen(&lo, &hi);
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(lo, hi, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(refine_halfopen(&chain, lo, hi, eps)),
            _ => {
                let mid = (&lo + &hi) / rat_from_i64(2, 1);
                let left = chain.count_halfopen(&lo, &mid);
                stack.push((lo, mid.clone(), left));
                stack.push((mid, hi, count - left));
            }
        }
    }
    out.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
    Ok(out)
}

/// Shrink a one-root half-open interval (lo, hi] to width <= eps, detecting
/// exact rational roots hit by bisection.
fn refine_halfopen(chain: &SturmChain, mut lo: Rat, mut hi: Rat, eps: &Rat) -> RootEnclosure {
    let sf = chain.polys().next().expect("nonempty chain");
    // root exactly at the right endpoint
    if sf.sign_at(&hi) == Ordering::Equal {
        return RootEnclosure {
            interval: RatInterval::point(hi),
            multiplicity_free: true,
        };
    }
    while &hi - &lo > *eps {
        let mid = (&lo + &hi) / rat_from_i64(2, 1);
        match sf.sign_at(&mid) {
            Ordering::Equal => {
                return RootEnclosure {
                    interval: RatInterval::point(mid),
                    multiplicity_free: true,
                }
            }
            _ => {
                if chain.count_halfopen(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
    }
    RootEnclosure {
        interval: RatInterval::new(lo, hi),
        multiplicity_free: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from_i64;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat_from_i64(c, 1)).collect())
    }

    #[test]
    fn sturm_count_examples() {
        // z^2 - 2 on (0, 2): one root
        let q = p(&[-2, 0, 1]);
        assert_eq!(
            sturm_count(&q, &RatInterval::new(rat_from_i64(0, 1), rat_from_i64(2, 1))).unwrap(),
            1
        );
        assert_eq!(
            sturm_count(&q, &RatInterval::new(rat_from_i64(-2, 1), rat_from_i64(2, 1))).unwrap(),
            2
        );
        // z^2 + 1 on (-10, 10): none
        let r = p(&[1, 0, 1]);
        assert_eq!(
            sturm_count(&r, &RatInterval::new(rat_from_i64(-10, 1), rat_from_i64(10, 1))).unwrap(),
            0
        );
        assert!(sturm_count(&Poly::zero(), &RatInterval::new(rat_from_i64(0, 1), rat_from_i64(1, 1))).is_err());
    }

    #[test]
    fn isolate_simple_roots() {
        // z(z-1): enclosures around 0 and 1
        let q = p(&[0, 1]).pow(1);
        let zq = &q * &p(&[-1, 1]);
        let encs = isolate_real_roots(&zq, &rat_from_i64(1, 8)).unwrap();
        assert_eq!(encs.len(), 2);
        assert!(encs[0].interval.contains(&rat_from_i64(0, 1)));
        assert!(encs[1].interval.contains(&rat_from_i64(1, 1)));
        // constant: no roots
        assert!(isolate_real_roots(&p(&[7]), &rat_from_i64(1, 8)).unwrap().is_empty());
    }

    #[test]
    fn isolate_sqrt2_tightly() {
        let q = p(&[-2, 0, 1]);
        let eps = rat_from_i64(1, 64);
        let encs = isolate_real_roots(&q, &eps).unwrap();
        assert_eq!(encs.len(), 2);
        let pos = &encs[1];
        assert!(pos.interval.width() <= eps);
        // sqrt(2) = 1.41421...: 1 < lo < hi < 2
        assert!(*pos.interval.lo() > rat_from_i64(1, 1));
        assert!(*pos.interval.hi() < rat_from_i64(2, 1));
        // endpoints straddle the root: p(lo) < 0 < p(hi)
        assert!(q.eval(pos.interval.lo()) < Rat::zero());
        assert!(q.eval(pos.interval.hi()) > Rat::zero());
    }

    #[test]
    fn isolate_detects_exact_roots() {
        // roots 1/2 and 3 of (2z-1)(z-3); bisection endpoints are dyadic so
        // 1/2 is hit exactly
        let q = &p(&[-1, 2]) * &p(&[-3, 1]);
        let encs = isolate_real_roots(&q, &rat_from_i64(1, 1024)).unwrap();
        assert_eq!(encs.len(), 2);
        assert_eq!(encs[0].exact_root(), Some(&rat_from_i64(1, 2)));
        assert!(encs[1].interval.contains(&rat_from_i64(3, 1)));
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        let q = p(&[-6, 11, -6, 1]); // roots 1, 2, 3
        let b = cauchy_root_bound(&q).unwrap();
        assert!(b > rat_from_i64(3, 1));
    }
}
