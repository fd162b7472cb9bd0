//! Certified global lower bounds for polynomials over ℝ.
//!
//! Two strategies behind one contract (the returned value never exceeds the
//! true infimum):
//! - critical points: isolate the roots of p' and evaluate p over the
//!   enclosures with exact rational interval arithmetic, refining until the
//!   bound is within the requested slack of the infimum;
//! - subdivision: dyadic interval branch-and-bound plus a coefficient
//!   dominance bound outside a finite range. Used when coefficients are too
//!   large for Sturm chains to be economical.

use super::isolate::{cauchy_root_bound_z, isolate_real_roots_z, RootEnclosure};
use crate::algebra::{rat_from_i64, Poly, PolyQ, PolyZ, Rat, RatInterval};
use crate::dyadic::{eval_interval, round_coeffs, DInt, Dyadic};
use crate::error::{Error, Result};
use num::{BigInt, One, Signed, Zero};
use std::cmp::Ordering;

/// Default relative slack 2^-20.
pub fn default_slack() -> Rat {
    crate::algebra::pow2(-20)
}

pub const DEFAULT_SLACK: fn() -> Rat = default_slack;

/// Bit threshold above which the subdivision strategy takes over.
const SUBDIV_BITS: u64 = 24_000;

/// A certified L with L <= p(x) for all real x, within `slack` (relative to
/// max(1, |min|)) of the true infimum when the critical-point strategy runs.
///
/// Errors with [`Error::UnboundedBelow`] for odd degree or a negative
/// leading coefficient.
pub fn global_min_lower_bound(p: &Poly, slack: &Rat) -> Result<Rat> {
    let cleared = PolyQ::from_poly(p);
    global_min_lower_bound_cleared(&cleared, slack)
}

pub fn global_min_lower_bound_cleared(p: &PolyQ, slack: &Rat) -> Result<Rat> {
    match p.degree() {
        None => Ok(Rat::zero()),
        Some(0) => Ok(Rat::from_integer(p.num.coeffs[0].clone()) / Rat::from_integer(p.den.clone())),
        Some(d) if d % 2 == 1 => Err(Error::UnboundedBelow),
        Some(_) if p.num.leading().unwrap().is_negative() => Err(Error::UnboundedBelow),
        Some(_) => {
            let bound_num = if p.max_bits() <= SUBDIV_BITS {
                critical_point_bound(&p.num, slack)?
            } else {
                subdivision_bound(&p.num, slack)
            };
            Ok(bound_num / Rat::from_integer(p.den.clone()))
        }
    }
}

/// Exact interval Horner over rational endpoints.
fn eval_range_exact(p: &PolyZ, iv: &RatInterval) -> (Rat, Rat) {
    let (mut lo, mut hi) = (Rat::zero(), Rat::zero());
    for c in p.coeffs.iter().rev() {
        let c = Rat::from_integer(c.clone());
        // [lo,hi] * [x.lo,x.hi] + c
        let cands = [
            &lo * iv.lo(),
            &lo * iv.hi(),
            &hi * iv.lo(),
            &hi * iv.hi(),
        ];
        let mut nlo = cands[0].clone();
        let mut nhi = cands[0].clone();
        for v in &cands[1..] {
            if *v < nlo {
                nlo = v.clone();
            }
            if *v > nhi {
                nhi = v.clone();
            }
        }
        lo = nlo + &c;
        hi = nhi + c;
    }
    (lo, hi)
}

fn critical_point_bound(p: &PolyZ, slack: &Rat) -> Result<Rat> {
    let dp = p.derivative();
    let mut encs: Vec<RootEnclosure> = isolate_real_roots_z(&dp, &rat_from_i64(1, 16))?;
    debug_assert!(!encs.is_empty(), "even-degree derivative without real roots");
    let sf = super::chain::squarefree_part(&dp);
    loop {
        let mut lower: Option<Rat> = None;
        let mut upper: Option<Rat> = None;
        for e in &encs {
            if let Some(r) = e.exact_root() {
                let v = eval_rat_int(p, r);
                min_in(&mut lower, &v);
                min_in(&mut upper, &v);
            } else {
                let (lo, _) = eval_range_exact(p, &e.interval);
                min_in(&mut lower, &lo);
                let mid_v = eval_rat_int(p, &e.interval.midpoint());
                min_in(&mut upper, &mid_v);
            }
        }
        let (lower, upper) = (lower.unwrap(), upper.unwrap());
        let tol = slack * std::cmp::max(Rat::one(), upper.abs());
        if &upper - &lower <= tol {
            return Ok(lower);
        }
        // halve every non-point enclosure and retry
        encs = encs
            .into_iter()
            .map(|e| {
                if e.exact_root().is_some() {
                    e
                } else {
                    bisect_enclosure(&sf, e)
                }
            })
            .collect();
    }
}

fn eval_rat_int(p: &PolyZ, x: &Rat) -> Rat {
    let num = p.eval_homogeneous(x.numer(), x.denom());
    let den = x.denom().pow(p.degree().unwrap_or(0) as u32);
    crate::algebra::rat_from_pair(num, den)
}

fn min_in(slot: &mut Option<Rat>, v: &Rat) {
    match slot {
        Some(cur) if &*cur <= v => {}
        _ => *slot = Some(v.clone()),
    }
}

/// One sign-bisection step on an enclosure of a simple root of `sf`.
fn bisect_enclosure(sf: &PolyZ, e: RootEnclosure) -> RootEnclosure {
    let lo = e.interval.lo().clone();
    let hi = e.interval.hi().clone();
    let mid = e.interval.midpoint();
    let sm = sf.sign_at(&mid);
    if sm == Ordering::Equal {
        return RootEnclosure {
            interval: RatInterval::point(mid),
            multiplicity_free: true,
        };
    }
    let sl = sf.sign_at(&lo);
    let interval = if sl != Ordering::Equal && sl != sm {
        RatInterval::new(lo, mid)
    } else {
        RatInterval::new(mid, hi)
    };
    RootEnclosure {
        interval,
        multiplicity_free: true,
    }
}

/// Dyadic branch-and-bound lower bound for huge-coefficient polynomials.
fn subdivision_bound(p: &PolyZ, slack: &Rat) -> Rat {
    let d = p.degree().unwrap();
    let prec: u64 = 192;
    let coeffs = round_coeffs(&p.coeffs, prec);
    // R = 2^k with R >= 1 and R >= 2 * sum|a_i| / a_d; outside [-R, R] the
    // leading term dominates: p(x) >= a_d * R^d / 2 > 0.
    let sum_bits = {
        let mut s = num::BigUint::zero();
        for c in &p.coeffs {
            s += c.magnitude();
        }
        s.bits()
    };
    let lead_bits = p.leading().unwrap().magnitude().bits();
    let r_exp = (sum_bits as i64 - lead_bits as i64 + 3).max(1);
    let r = Dyadic::new(BigInt::one(), r_exp);
    // initial slack scale: refined against the live upper bound below
    let slack_d = DInt::from_rat(slack, 64).lo;
    let mut best_upper: Option<Dyadic> = None;
    let mut settled_lo: Option<Dyadic> = None;
    let mut queue = vec![DInt::new(r.neg(), r.clone())];
    let mut budget = 200_000usize;
    while let Some(iv) = queue.pop() {
        budget = budget.saturating_sub(1);
        let v = eval_interval(&coeffs, &iv);
        // sample the midpoint for an upper bound on the minimum
        let mid = iv.lo.add(&iv.hi).mul_pow2(-1);
        let vm = eval_interval(&coeffs, &DInt::point(mid));
        if best_upper.as_ref().is_none_or(|b| vm.hi.cmp_val(b) == Ordering::Less) {
            best_upper = Some(vm.hi.clone());
        }
        let bu = best_upper.as_ref().unwrap();
        let cutoff = bu.sub(&slack_d.mul(&max_dyadic(&Dyadic::one(), &abs_dyadic(bu))));
        let width_tiny = iv
            .width()
            .cmp_val(&Dyadic::new(BigInt::one(), -(prec as i64) / 2))
            == Ordering::Less;
        if v.lo.cmp_val(&cutoff) != Ordering::Less || width_tiny || budget == 0 {
            // accept this box's lower bound as settled
            if settled_lo.as_ref().is_none_or(|s| v.lo.cmp_val(s) == Ordering::Less) {
                settled_lo = Some(v.lo);
            }
        } else {
            let mid = iv.lo.add(&iv.hi).mul_pow2(-1);
            queue.push(DInt::new(iv.lo.clone(), mid.clone()));
            queue.push(DInt::new(mid, iv.hi.clone()));
        }
    }
    let inside = settled_lo.expect("nonempty initial box");
    // For |x| > R the dominance bound gives p(x) >= 2^(lead_bits + d*r_exp - 2).
    let outside = Dyadic::new(BigInt::one(), lead_bits as i64 + d as i64 * r_exp - 2);
    if outside.cmp_val(&inside) == Ordering::Less {
        outside.to_rat()
    } else {
        inside.to_rat()
    }
}

fn abs_dyadic(d: &Dyadic) -> Dyadic {
    if d.sign() == Ordering::Less {
        d.neg()
    } else {
        d.clone()
    }
}

fn max_dyadic(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.cmp_val(b) == Ordering::Less {
        b.clone()
    } else {
        a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&(n, d)| rat_from_i64(n, d)).collect())
    }

    #[test]
    fn quadratic_exact_minimum() {
        // 3z^2 - 2z: minimum -1/3 at z = 1/3
        let q = p(&[(0, 1), (-2, 1), (3, 1)]);
        let slack = default_slack();
        let l = global_min_lower_bound(&q, &slack).unwrap();
        assert!(l <= rat_from_i64(-1, 3));
        assert!(l >= rat_from_i64(-1, 3) - slack);
    }

    #[test]
    fn constant_and_unbounded() {
        let five = p(&[(5, 1)]);
        assert_eq!(
            global_min_lower_bound(&five, &default_slack()).unwrap(),
            rat_from_i64(5, 1)
        );
        let z = p(&[(0, 1), (1, 1)]);
        assert!(matches!(
            global_min_lower_bound(&z, &default_slack()),
            Err(Error::UnboundedBelow)
        ));
        let negq = p(&[(0, 1), (0, 1), (-1, 1)]);
        assert!(matches!(
            global_min_lower_bound(&negq, &default_slack()),
            Err(Error::UnboundedBelow)
        ));
    }

    #[test]
    fn bound_below_samples_quartic() {
        // (z^2-1)^2 + z/7: wiggly quartic
        let q = &(&p(&[(-1, 1), (0, 1), (1, 1)]) * &p(&[(-1, 1), (0, 1), (1, 1)]))
            + &p(&[(0, 1), (1, 7)]);
        let l = global_min_lower_bound(&q, &default_slack()).unwrap();
        for i in -40..=40 {
            let x = rat_from_i64(i, 7);
            assert!(q.eval(&x) >= l, "x={x}");
        }
    }

    #[test]
    fn subdivision_route_agrees() {
        // same quartic, forced through the subdivision path
        let q = &(&p(&[(-1, 1), (0, 1), (1, 1)]) * &p(&[(-1, 1), (0, 1), (1, 1)]))
            + &p(&[(0, 1), (1, 7)]);
        let cleared = PolyQ::from_poly(&q);
        let sub = subdivision_bound(&cleared.num, &default_slack());
        let crit = critical_point_bound(&cleared.num, &default_slack()).unwrap();
        // both certified lower bounds of the same minimum
        for i in -60..=60 {
            let x = rat_from_i64(i, 11);
            let v = q.eval(&x);
            assert!(v >= sub && v >= crit, "x={x}");
        }
        // subdivision should land within slack-ish of the critical bound
        assert!((&crit - &sub).abs() < rat_from_i64(1, 100));
    }
}
