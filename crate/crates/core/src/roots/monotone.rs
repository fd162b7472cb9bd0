//! Certified inversion of strictly increasing polynomials by bisection.
//!
//! The solver brackets the unique solution of p(x) = y using a certified
//! positive floor on p' (so |root| <= |y - p(0)| / floor), then bisects with
//! certified sign tests. On large-coefficient polynomials the sign tests run
//! in dyadic interval arithmetic at adaptive precision with an exact integer
//! fallback, which keeps thousand-step refinements cheap.

use super::global_min::{default_slack, global_min_lower_bound_cleared};
use super::isolate::RootEnclosure;
use crate::algebra::{rat_from_pair, Poly, PolyQ, Rat, RatInterval};
use crate::bigx;
use crate::dyadic::{eval_interval, round_coeffs, DInt};
use crate::error::{Error, Result};
use num::{BigInt, One, Signed, Zero};
use std::cmp::Ordering;

/// Enclose the unique real solution of p(x) = y to width <= eps.
///
/// The precondition (p strictly increasing on ℝ) is certified here via
/// `global_min_lower_bound(p') > 0`; use [`MonotoneSolver`] directly when a
/// floor is already certified by other means.
pub fn monotone_solve(p: &Poly, y: &Rat, eps: &Rat) -> Result<RootEnclosure> {
    let cleared = PolyQ::from_poly(p);
    let floor = global_min_lower_bound_cleared(&cleared.derivative(), &default_slack())
        .map_err(|e| Error::DerivativeFloor(e.to_string()))?;
    if !floor.is_positive() {
        return Err(Error::DerivativeFloor(format!(
            "certified derivative lower bound {floor} is not positive"
        )));
    }
    let mut solver = MonotoneSolver::new(&cleared, y.clone(), &floor)?;
    solver.refine_to(eps);
    Ok(solver.enclosure())
}

/// Stateful bisection on a strictly increasing polynomial; the caller
/// supplies a certified positive lower bound for p' on ℝ.
pub struct MonotoneSolver<'a> {
    p: &'a PolyQ,
    y: Rat,
    lo: Rat,
    hi: Rat,
    exact: Option<Rat>,
    oracle: SignOracle<'a>,
}

impl<'a> MonotoneSolver<'a> {
    pub fn new(p: &'a PolyQ, y: Rat, deriv_floor: &Rat) -> Result<MonotoneSolver<'a>> {
        assert!(deriv_floor.is_positive());
        let deg = p
            .degree()
            .ok_or_else(|| Error::DerivativeFloor("constant polynomial".into()))?;
        let mut oracle = SignOracle::new(p, y.clone());
        // linear case: exact root (y*den - c0) / c1
        if deg == 1 {
            let root = rat_from_pair(
                y.numer() * &p.den - &p.num.coeffs[0] * y.denom(),
                y.denom() * &p.num.coeffs[1],
            );
            return Ok(MonotoneSolver {
                p,
                y,
                lo: root.clone(),
                hi: root.clone(),
                exact: Some(root),
                oracle,
            });
        }
        // |root| <= |y - p(0)| / floor, rounded up to a power of two
        let p0 = rat_from_pair(p.num.coeffs.first().cloned().unwrap_or_default(), p.den.clone());
        let spread = (&y - p0).abs() / deriv_floor + Rat::one();
        let exp = bigx::floor_log2_ratio(spread.numer().magnitude(), spread.denom().magnitude()) + 1;
        let mut b = crate::algebra::pow2(exp);
        // defensive: widen until the bracket provably straddles
        let mut rounds = 0;
        loop {
            let slo = oracle.sign_at(&-&b);
            let shi = oracle.sign_at(&b);
            match (slo, shi) {
                (Ordering::Less, Ordering::Greater) => break,
                (Ordering::Equal, _) | (_, Ordering::Equal) => break,
                _ => b = &b * Rat::from_integer(BigInt::from(2)),
            }
            rounds += 1;
            assert!(rounds < 128, "bracket failure: polynomial not increasing?");
        }
        let (lo, hi) = (-&b, b.clone());
        let mut solver = MonotoneSolver {
            p,
            y,
            lo,
            hi,
            exact: None,
            oracle,
        };
        // catch an exact hit at the bracket edge
        if solver.oracle.sign_at(&solver.lo) == Ordering::Equal {
            solver.exact = Some(solver.lo.clone());
        } else if solver.oracle.sign_at(&solver.hi) == Ordering::Equal {
            solver.exact = Some(solver.hi.clone());
        }
        Ok(solver)
    }

    /// Bisect until the enclosure width is <= eps (no-op once exact).
    pub fn refine_to(&mut self, eps: &Rat) {
        if self.exact.is_some() {
            return;
        }
        while self.width() > *eps {
            let mid = (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2));
            match self.oracle.sign_at(&mid) {
                Ordering::Equal => {
                    self.exact = Some(mid);
                    return;
                }
                Ordering::Less => self.lo = mid,
                Ordering::Greater => self.hi = mid,
            }
        }
    }

    pub fn width(&self) -> Rat {
        if self.exact.is_some() {
            Rat::zero()
        } else {
            &self.hi - &self.lo
        }
    }

    pub fn enclosure(&self) -> RootEnclosure {
        let interval = match &self.exact {
            Some(r) => RatInterval::point(r.clone()),
            None => RatInterval::new(self.lo.clone(), self.hi.clone()),
        };
        RootEnclosure {
            interval,
            multiplicity_free: true,
        }
    }

    pub fn target(&self) -> &Rat {
        &self.y
    }

    pub fn poly(&self) -> &PolyQ {
        self.p
    }
}

/// Certified sign of p(x) - y, dyadic-first with exact fallback.
struct SignOracle<'a> {
    p: &'a PolyQ,
    y: Rat,
    /// (precision, rounded coefficients of p.num, rounded y * den)
    cache: Vec<(u64, Vec<DInt>, DInt)>,
}

/// Coefficient size under which exact evaluation is always used.
const EXACT_BITS: u64 = 8_192;

impl<'a> SignOracle<'a> {
    fn new(p: &'a PolyQ, y: Rat) -> Self {
        SignOracle {
            p,
            y,
            cache: Vec::new(),
        }
    }

    /// sign(p(x) - y) = sign(num(x) - y*den) since den > 0.
    fn sign_at(&mut self, x: &Rat) -> Ordering {
        if self.p.max_bits() <= EXACT_BITS {
            return self.p.eval_cmp(x, &self.y);
        }
        let xbits = crate::algebra::rat_bits(x);
        let mut prec = 96u64.max(xbits / 8);
        let limit = xbits + 192;
        while prec <= limit {
            let level = self.level_for(prec);
            let (_, coeffs, target) = &self.cache[level];
            let xi = DInt::from_rat(x, prec);
            let v = eval_interval(coeffs, &xi);
            let diff = v.add(&target.neg());
            if let Some(s) = diff.sign_certain() {
                return s;
            }
            prec *= 2;
        }
        self.p.eval_cmp(x, &self.y)
    }

    fn level_for(&mut self, prec: u64) -> usize {
        if let Some(i) = self.cache.iter().position(|(p, _, _)| *p == prec) {
            return i;
        }
        let coeffs = round_coeffs(&self.p.num.coeffs, prec);
        let target = {
            let t = &self.y * Rat::from_integer(self.p.den.clone());
            DInt::from_rat(&t, prec)
        };
        self.cache.push((prec, coeffs, target));
        self.cache.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from_i64;

    fn p(coeffs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&(n, d)| rat_from_i64(n, d)).collect())
    }

    #[test]
    fn linear_exact() {
        // (5/3)x = 1 -> 3/5
        let f = p(&[(0, 1), (5, 3)]);
        let enc = monotone_solve(&f, &Rat::one(), &rat_from_i64(1, 1024)).unwrap();
        assert_eq!(enc.exact_root(), Some(&rat_from_i64(3, 5)));
    }

    #[test]
    fn identity() {
        let f = p(&[(0, 1), (1, 1)]);
        let q = rat_from_i64(-17, 13);
        let enc = monotone_solve(&f, &q, &rat_from_i64(1, 65536)).unwrap();
        assert_eq!(enc.exact_root(), Some(&q));
    }

    #[test]
    fn cubic_exact_hit() {
        // x^3 + x = 2 at x = 1 (hit exactly by bisection on dyadics? 1 is
        // dyadic, bracket is a power of two, so yes)
        let f = p(&[(0, 1), (1, 1), (0, 1), (1, 1)]);
        let enc = monotone_solve(&f, &rat_from_i64(2, 1), &rat_from_i64(1, 1 << 20)).unwrap();
        assert_eq!(enc.exact_root(), Some(&Rat::one()));
    }

    #[test]
    fn irrational_root_brackets_sign_change() {
        // x^3 + x = 1: root ~0.6823
        let f = p(&[(0, 1), (1, 1), (0, 1), (1, 1)]);
        let eps = crate::algebra::pow2(-40);
        let enc = monotone_solve(&f, &Rat::one(), &eps).unwrap();
        assert!(enc.exact_root().is_none());
        assert!(enc.interval.width() <= eps);
        let at = |x: &Rat| f.eval(x) - Rat::one();
        assert!(at(enc.interval.lo()).is_negative());
        assert!(at(enc.interval.hi()).is_positive());
    }

    #[test]
    fn rejects_non_monotone() {
        let f = p(&[(0, 1), (0, 1), (1, 1)]); // x^2
        assert!(matches!(
            monotone_solve(&f, &Rat::one(), &rat_from_i64(1, 16)),
            Err(Error::DerivativeFloor(_))
        ));
    }

    #[test]
    fn refinement_nested() {
        let f = p(&[(0, 1), (1, 1), (0, 1), (1, 1)]);
        let c = PolyQ::from_poly(&f);
        let floor = Rat::one();
        let mut solver = MonotoneSolver::new(&c, Rat::one(), &floor).unwrap();
        solver.refine_to(&rat_from_i64(1, 256));
        let e1 = solver.enclosure();
        solver.refine_to(&rat_from_i64(1, 65536));
        let e2 = solver.enclosure();
        assert!(e1.interval.lo() <= e2.interval.lo());
        assert!(e2.interval.hi() <= e1.interval.hi());
    }
}
