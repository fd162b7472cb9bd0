//! The deterministic interval pick for the dyadic-valuation partition.
//!
//! Given a color i and an open interval, return the class-i rational that is
//! minimal under (odd part of the denominator, |numerator|, positive before
//! negative). Wide intervals are handled by a direct scan over small odd
//! parts; narrow intervals (the construction produces gaps far below 2^-1000)
//! switch to a Stern-Brocot enumeration that reaches the minimal admissible
//! denominator in logarithmic time instead of scanning to it.

use super::ColorIndex;
use crate::algebra::{rat_from_i64, Rat, RatInterval};
use crate::bigx;
use num::{BigInt, Integer, One, Signed, Zero};

/// Odd parts up to this bound are scanned directly.
const SCAN_LIMIT: u64 = 999;
/// Endpoints larger than this are pre-shrunk to dyadics (deterministically).
const ENDPOINT_BITS_LIMIT: u64 = 16_384;

pub fn pick_dyadic_class(color: ColorIndex, interval: &RatInterval) -> Rat {
    assert!(
        interval.lo() < interval.hi(),
        "pick requires a nonempty open interval"
    );
    let (lo, hi) = shrink_endpoints(interval.lo(), interval.hi());
    if let Some(r) = scan_small_odd_parts(color, &lo, &hi) {
        debug_assert!(interval.contains_open(&r));
        return r;
    }
    let r = stern_brocot_search(color, &lo, &hi);
    debug_assert!(interval.contains_open(&r));
    r
}

/// Deterministically shrink huge exact endpoints inward to dyadics carrying
/// 128 guard bits beyond the interval width; every class member found inside
/// the shrunk interval lies inside the original one.
fn shrink_endpoints(lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let bits = crate::algebra::rat_bits(lo).max(crate::algebra::rat_bits(hi));
    if bits <= ENDPOINT_BITS_LIMIT {
        return (lo.clone(), hi.clone());
    }
    // width = hi - lo without reduction
    let wnum = hi.numer() * lo.denom() - lo.numer() * hi.denom();
    let wden = hi.denom() * lo.denom();
    let wexp = bigx::floor_log2_ratio(wnum.magnitude(), wden.magnitude());
    let prec = (-wexp).max(0) as u64 + 128;
    let lo2 = crate::dyadic::DInt::from_rat(lo, prec).hi.to_rat();
    let hi2 = crate::dyadic::DInt::from_rat(hi, prec).lo.to_rat();
    debug_assert!(lo2 < hi2);
    (lo2, hi2)
}

/// Phase 1: try odd parts 1, 3, 5, ... up to SCAN_LIMIT in order; for each,
/// the numerator search runs outward from zero, so the first hit realizes
/// the (m, |a|, sign) minimum for that m.
fn scan_small_odd_parts(color: ColorIndex, lo: &Rat, hi: &Rat) -> Option<Rat> {
    let mut m = 1u64;
    while m <= SCAN_LIMIT {
        let den = BigInt::from(m) << color as u64;
        // integer numerators strictly inside (lo*den, hi*den)
        let a_lo = floor_mul(lo, &den) + 1;
        let a_hi = ceil_mul(hi, &den) - 1;
        if a_lo <= a_hi {
            if let Some(a) = best_numerator(&a_lo, &a_hi, m, color) {
                return Some(Rat::new_raw(a, den));
            }
        }
        m += 2;
    }
    None
}

/// floor(r * den) for positive den, exact.
fn floor_mul(r: &Rat, den: &BigInt) -> BigInt {
    (r.numer() * den).div_floor(r.denom())
}

/// ceil(r * den) for positive den, exact.
fn ceil_mul(r: &Rat, den: &BigInt) -> BigInt {
    (r.numer() * den).div_ceil(r.denom())
}

/// Minimal-|a| valid numerator in [a_lo, a_hi]: coprime to m, odd when the
/// color is positive. Returns None if the (finite) search window has none.
fn best_numerator(a_lo: &BigInt, a_hi: &BigInt, m: u64, color: ColorIndex) -> Option<BigInt> {
    let valid = |a: &BigInt| -> bool {
        if color > 0 && a.is_even() {
            return false;
        }
        if a.is_zero() {
            return m == 1;
        }
        let am = (a % BigInt::from(m)).magnitude().to_u64_digits();
        let am = am.first().copied().unwrap_or(0);
        gcd_u64(am, m) == 1
    };
    // any window of 2m consecutive integers on one side contains a valid
    // numerator when one exists at all for this m, so 4m+16 tries suffice
    let budget = 4 * m as i64 + 16;
    let zero = BigInt::zero();
    let mut tried = 0i64;
    if a_lo <= &zero && &zero <= a_hi {
        let mut k = BigInt::zero();
        loop {
            let pos = &k;
            if pos <= a_hi && valid(pos) {
                return Some(pos.clone());
            }
            let neg = -&k;
            if &neg >= a_lo && !k.is_zero() && valid(&neg) {
                return Some(neg);
            }
            if pos > a_hi && -&k < *a_lo {
                return None;
            }
            k += 1;
            tried += 2;
            if tried > budget {
                return None;
            }
        }
    }
    let (start, step): (BigInt, i64) = if a_lo > &zero {
        (a_lo.clone(), 1)
    } else {
        (a_hi.clone(), -1)
    };
    let mut a = start;
    loop {
        if &a < a_lo || &a > a_hi {
            return None;
        }
        if valid(&a) {
            return Some(a);
        }
        a += step;
        tried += 1;
        if tried > budget {
            return None;
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Phase 2: minimal odd denominator beyond the scan limit, via Stern-Brocot.
///
/// In the transformed coordinates r = d * 2^color, class members are the
/// reduced fractions a/m with m odd (and a odd when color > 0). The first
/// tree node inside the target interval is found with batched descent; its
/// subtree is then enumerated in (denominator, numerator) order by a heap,
/// which visits only O(1)-ish nodes per denominator level.
fn stern_brocot_search(color: ColorIndex, lo: &Rat, hi: &Rat) -> Rat {
    let two_i = BigInt::one() << color as u64;
    // transformed open interval (LO, HI)
    let lo_t = Rat::new_raw(lo.numer() * &two_i, lo.denom().clone());
    let hi_t = Rat::new_raw(hi.numer() * &two_i, hi.denom().clone());
    let needs_odd_num = color > 0;

    let mut best: Option<(BigInt, BigInt, bool)> = None; // (den, |num|, positive)
    if hi_t > Rat::zero() {
        let x = if lo_t > Rat::zero() { lo_t.clone() } else { Rat::zero() };
        if x < hi_t {
            if let Some((num, den)) = side_search(&x, &hi_t, needs_odd_num) {
                best = Some((den, num, true));
            }
        }
    }
    if lo_t < Rat::zero() {
        let x = if hi_t < Rat::zero() { -&hi_t } else { Rat::zero() };
        let y = -&lo_t;
        if x < y {
            if let Some((num, den)) = side_search(&x, &y, needs_odd_num) {
                let better = match &best {
                    None => true,
                    Some((bd, bn, _)) => match den.cmp(bd) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => num < *bn,
                    },
                };
                if better {
                    best = Some((den, num, false));
                }
            }
        }
    }
    let (den, num, positive) = best.expect("dense class member must exist in an open interval");
    let num = if positive { num } else { -num };
    Rat::new_raw(num, den << color as u64)
}

/// Search (x, y) with 0 <= x < y for the reduced fraction with minimal
/// (odd denominator, numerator); numerator must be odd when `odd_num`.
fn side_search(x: &Rat, y: &Rat, odd_num: bool) -> Option<(BigInt, BigInt)> {
    // batched descent to the first node inside (x, y)
    let mut l = (BigInt::zero(), BigInt::one()); // 0/1 <= x
    let mut r = (BigInt::one(), BigInt::zero()); // 1/0 (infinity)
    let (mut fnum, mut fden);
    loop {
        fnum = &l.0 + &r.0;
        fden = &l.1 + &r.1;
        if le_frac(&fnum, &fden, x) {
            // step right k+1 times where k = floor((x*den_l - num_l)/(num_r - x*den_r))
            let k = batch_steps(x, &l, &r);
            l = (&l.0 + (&r.0 * &k), &l.1 + (&r.1 * &k));
        } else if ge_frac(&fnum, &fden, y) {
            let k = batch_steps_left(y, &l, &r);
            r = ((&l.0 * &k) + &r.0, (&l.1 * &k) + &r.1);
        } else {
            break;
        }
    }
    // heap enumeration of the subtree rooted at f = mediant(l, r)
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Key(BigInt, BigInt); // (den, num)
    let mut heap: BinaryHeap<Reverse<(Key, (BigInt, BigInt), (BigInt, BigInt))>> = BinaryHeap::new();
    heap.push(Reverse((Key(fden.clone(), fnum.clone()), l, r)));
    let mut pops = 0usize;
    while let Some(Reverse((Key(den, num), l, r))) = heap.pop() {
        pops += 1;
        assert!(pops < 1_000_000, "pick enumeration budget exhausted");
        let inside_lo = !le_frac(&num, &den, x);
        let inside_hi = !ge_frac(&num, &den, y);
        if inside_lo && inside_hi {
            if den.is_odd() && (!odd_num || num.is_odd()) {
                return Some((num, den));
            }
            // both children stay candidates
            let f = (num, den);
            let cl = (&l.0 + &f.0, &l.1 + &f.1);
            heap.push(Reverse((Key(cl.1.clone(), cl.0.clone()), l.clone(), f.clone())));
            let cr = (&f.0 + &r.0, &f.1 + &r.1);
            heap.push(Reverse((Key(cr.1.clone(), cr.0.clone()), f, r)));
        } else if !inside_lo {
            // too small: only the right subtree can reach the interval
            let f = (num, den);
            let cr = (&f.0 + &r.0, &f.1 + &r.1);
            heap.push(Reverse((Key(cr.1.clone(), cr.0.clone()), f, r)));
        } else {
            let f = (num, den);
            let cl = (&l.0 + &f.0, &l.1 + &f.1);
            heap.push(Reverse((Key(cl.1.clone(), cl.0.clone()), l, f)));
        }
    }
    None
}

/// num/den <= x (den >= 0; den = 0 means +infinity).
fn le_frac(num: &BigInt, den: &BigInt, x: &Rat) -> bool {
    if den.is_zero() {
        return false;
    }
    num * x.denom() <= x.numer() * den
}

/// num/den >= y.
fn ge_frac(num: &BigInt, den: &BigInt, y: &Rat) -> bool {
    if den.is_zero() {
        return true;
    }
    num * y.denom() >= y.numer() * den
}

/// Largest k >= 1 with (l + k*r) still <= x (as a mediant walk to the right).
fn batch_steps(x: &Rat, l: &(BigInt, BigInt), r: &(BigInt, BigInt)) -> BigInt {
    // (l0 + k r0)/(l1 + k r1) <= x  <=>  k (r0 x.den - r1 x.num) <= x.num l1 - x.den l0
    let a = &r.0 * x.denom() - &r.1 * x.numer(); // > 0 since r > x
    let b = x.numer() * &l.1 - x.denom() * &l.0; // >= 0 since l <= x
    debug_assert!(a.is_positive());
    let k = b.div_floor(&a);
    if k.is_positive() {
        k
    } else {
        BigInt::one()
    }
}

/// Largest k >= 1 with (k*l + r) still >= y (mediant walk to the left).
fn batch_steps_left(y: &Rat, l: &(BigInt, BigInt), r: &(BigInt, BigInt)) -> BigInt {
    // (k l0 + r0)/(k l1 + r1) >= y  <=>  k (y.den l0 - y.num l1) >= y.num r1 - y.den r0
    let a = y.denom() * &l.0 - y.numer() * &l.1; // < 0 since l < y  -> careful
    let b = y.numer() * &r.1 - y.denom() * &r.0;
    // l < y so a < 0; r >= y so b <= 0: k <= b/a
    debug_assert!(a.is_negative());
    let k = b.div_floor(&a);
    if k.is_positive() {
        k
    } else {
        BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{DensePartition, DyadicValuation};

    fn iv(lo: Rat, hi: Rat) -> RatInterval {
        RatInterval::new(lo, hi)
    }

    #[test]
    fn pick_examples() {
        let p = DyadicValuation;
        // class 0 in (3/2, 2): no integer strictly inside; denominator 3 gives 5/3
        assert_eq!(
            p.pick(0, &iv(rat_from_i64(3, 2), rat_from_i64(2, 1))),
            rat_from_i64(5, 3)
        );
        // class 1 in (0, 1): 1/2
        assert_eq!(
            p.pick(1, &iv(rat_from_i64(0, 1), rat_from_i64(1, 1))),
            rat_from_i64(1, 2)
        );
        // integer q inside (q-1, q+1) for class 0
        for q in [-3i64, 0, 7] {
            assert_eq!(
                p.pick(0, &iv(rat_from_i64(q - 1, 1), rat_from_i64(q + 1, 1))),
                rat_from_i64(q, 1)
            );
        }
    }

    #[test]
    fn pick_prefers_positive_on_ties() {
        let p = DyadicValuation;
        // class 1 in (-3/2, 3/2): candidates ±1/2; positive wins
        assert_eq!(
            p.pick(1, &iv(rat_from_i64(-3, 2), rat_from_i64(3, 2))),
            rat_from_i64(1, 2)
        );
    }

    #[test]
    fn pick_narrow_interval_uses_minimal_denominator() {
        let p = DyadicValuation;
        // interval just around 5/3 shifted so 5/3 itself is excluded
        let lo = rat_from_i64(5, 3) + rat_from_i64(1, 1_000_000);
        let hi = rat_from_i64(5, 3) + rat_from_i64(3, 1_000_000);
        let got = p.pick(0, &iv(lo.clone(), hi.clone()));
        assert!(got > lo && got < hi);
        assert_eq!(p.color(&got), 0);
        // brute-force: no valid smaller denominator
        let m_got = got.denom().clone();
        let mut m = BigInt::one();
        while m < m_got {
            let a_lo = floor_mul(&lo, &m) + BigInt::one();
            let a_hi = ceil_mul(&hi, &m) - BigInt::one();
            let mut a = a_lo.clone();
            while a <= a_hi {
                assert!(
                    !bigx::gcd_big(&a, &m).is_one(),
                    "missed candidate {a}/{m}"
                );
                a += 1;
            }
            m += 2;
        }
    }

    #[test]
    fn pick_matches_brute_force_on_random_intervals() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let p = DyadicValuation;
        for _ in 0..300 {
            let a: i64 = rng.gen_range(-200..200);
            let d: i64 = rng.gen_range(1..60);
            let w: i64 = rng.gen_range(1..50);
            let lo = rat_from_i64(a, d);
            let hi = &lo + rat_from_i64(w, d * rng.gen_range(1..8));
            let color = rng.gen_range(0..5) as ColorIndex;
            let got = p.pick(color, &iv(lo.clone(), hi.clone()));
            assert!(got > lo && got < hi, "membership");
            assert_eq!(p.color(&got), color, "class");
            let want = brute_force_pick(color, &lo, &hi);
            assert_eq!(got, want, "lo={lo} hi={hi} color={color}");
        }
    }

    /// Reference implementation: scan odd parts in order, numerators by
    /// |a| with positive preferred.
    fn brute_force_pick(color: ColorIndex, lo: &Rat, hi: &Rat) -> Rat {
        let mut m = 1i64;
        loop {
            let den = BigInt::from(m) << color as u64;
            let a_lo = floor_mul(lo, &den) + BigInt::one();
            let a_hi = ceil_mul(hi, &den) - BigInt::one();
            let mut cands: Vec<BigInt> = vec![];
            let mut a = a_lo.clone();
            while a <= a_hi {
                let ok_parity = color == 0 || a.is_odd();
                let red = if a.is_zero() {
                    m == 1
                } else {
                    bigx::gcd_big(&a, &BigInt::from(m)).is_one()
                };
                if ok_parity && red {
                    cands.push(a.clone());
                }
                a += 1;
            }
            if let Some(best) = cands.into_iter().min_by(|a, b| {
                (a.magnitude().clone(), a.is_negative()).cmp(&(b.magnitude().clone(), b.is_negative()))
            }) {
                return Rat::new_raw(best, den);
            }
            m += 2;
        }
    }

    #[test]
    fn pick_stability_under_shrinking() {
        let p = DyadicValuation;
        let lo = rat_from_i64(3, 2);
        let hi = rat_from_i64(2, 1);
        let first = p.pick(0, &iv(lo.clone(), hi.clone()));
        // shrink while keeping the previous result inside
        let lo2 = rat_from_i64(8, 5);
        let hi2 = rat_from_i64(7, 4);
        assert!(first > lo2 && first < hi2);
        assert_eq!(p.pick(0, &iv(lo2, hi2)), first);
    }

    #[test]
    fn pick_huge_endpoints_and_tiny_width() {
        let p = DyadicValuation;
        // interval of width 2^-700 around an awkward rational
        let center = rat_from_i64(614889782588491410, 1000000007);
        let eps = crate::algebra::pow2(-700);
        let lo = &center - &eps;
        let hi = &center + &eps;
        for color in [0u32, 1, 3] {
            let got = p.pick(color, &iv(lo.clone(), hi.clone()));
            assert!(got > lo && got < hi);
            assert_eq!(p.color(&got), color);
            // denominator must be near-minimal: about 1/width
            assert!(got.denom().magnitude().bits() < 760, "color={color}");
        }
    }
}
