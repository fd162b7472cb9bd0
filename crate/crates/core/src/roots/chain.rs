//! Sturm chains over ℤ via the subresultant polynomial remainder sequence.
//!
//! The textbook Sturm chain (rational remainders) squares coefficient sizes
//! and pays one gcd per reduced operation. The subresultant PRS computes
//! integer polynomials that are positive-constant multiples of the Sturm
//! elements up to a tracked sign, with exact divisions only, so the chain
//! stays at determinant-bounded coefficient size with no gcd cost. Sign
//! variation counts are then identical to the classical chain's.

use crate::algebra::{PolyZ, Rat};
use crate::error::{Error, Result};
use num::{BigInt, One, Signed, Zero};
use std::cmp::Ordering;

/// A signed Sturm chain for a squarefree polynomial.
///
/// `elems[i]` is a positive multiple of ±(the i-th classical Sturm element);
/// the stored sign restores the classical sign for variation counting.
pub struct SturmChain {
    elems: Vec<(PolyZ, i8)>,
}

impl SturmChain {
    /// Chain of the squarefree part of `p` (root sets agree).
    pub fn new(p: &PolyZ) -> Result<SturmChain> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let sf = squarefree_part(p);
        Ok(SturmChain::new_squarefree(&sf))
    }

    /// Chain for `p` assumed squarefree (gcd(p, p') constant).
    pub fn new_squarefree(p: &PolyZ) -> SturmChain {
        let mut elems: Vec<(PolyZ, i8)> = vec![(p.clone(), 1)];
        if p.degree().unwrap_or(0) == 0 {
            return SturmChain { elems };
        }
        elems.push((p.derivative(), 1));
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let (prev, s_prev) = elems[elems.len() - 2].clone();
            let (cur, s_cur) = elems[elems.len() - 1].clone();
            let _ = s_cur;
            if cur.degree().is_none() {
                break;
            }
            let dp = prev.degree().unwrap();
            let dc = cur.degree().unwrap();
            if dc == 0 {
                break;
            }
            let delta = (dp - dc) as u32;
            let rem = pseudo_rem(&prev, &cur, delta);
            if rem.is_zero() {
                break;
            }
            let divisor = &g * pow_big(&h, delta);
            let next = rem.div_exact(&divisor);
            // sign of the true Sturm element relative to `next`:
            // s_next = -s_prev * sign(divisor) * sign(lc(cur))^(delta+1)
            let lc = cur.leading().unwrap();
            let mut sign = -elems[elems.len() - 2].1;
            if divisor.is_negative() {
                sign = -sign;
            }
            if lc.is_negative() && (delta + 1) % 2 == 1 {
                sign = -sign;
            }
            elems.push((next, sign));
            // subresultant state update
            g = cur.leading().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                pow_big(&g, delta).div_exact_int(&pow_big(&h, delta - 1))
            };
        }
        SturmChain { elems }
    }

    pub fn polys(&self) -> impl Iterator<Item = &PolyZ> {
        self.elems.iter().map(|(p, _)| p)
    }

    /// Sign variations at a finite point (zeros skipped).
    pub fn variations_at(&self, x: &Rat) -> usize {
        count_variations(self.elems.iter().map(|(p, s)| {
            let sg = p.sign_at(x);
            apply_sign(sg, *s)
        }))
    }

    /// Sign variations at +inf / -inf.
    pub fn variations_at_inf(&self, positive: bool) -> usize {
        count_variations(self.elems.iter().map(|(p, s)| {
            let lc = match p.leading() {
                Some(c) => c.cmp(&BigInt::zero()),
                None => Ordering::Equal,
            };
            let deg_odd = p.degree().unwrap_or(0) % 2 == 1;
            let sg = if positive || !deg_odd { lc } else { lc.reverse() };
            apply_sign(sg, *s)
        }))
    }

    /// Exact count of distinct real roots in the half-open interval (lo, hi].
    /// Endpoint roots behave per that convention; lo <= hi required.
    pub fn count_halfopen(&self, lo: &Rat, hi: &Rat) -> usize {
        assert!(lo <= hi);
        self.variations_at(lo) - self.variations_at(hi)
    }

    /// Exact count of distinct real roots on all of ℝ.
    pub fn count_all(&self) -> usize {
        self.variations_at_inf(false) - self.variations_at_inf(true)
    }
}

fn apply_sign(o: Ordering, s: i8) -> Ordering {
    if s >= 0 {
        o
    } else {
        o.reverse()
    }
}

fn count_variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
    let mut last: Option<Ordering> = None;
    let mut count = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Pseudo-remainder with multiplier lc(b)^(delta+1), delta = deg a - deg b.
fn pseudo_rem(a: &PolyZ, b: &PolyZ, delta: u32) -> PolyZ {
    let db = b.degree().unwrap();
    let lc = b.leading().unwrap().clone();
    let mut r = a.coeffs.clone();
    let mut scale_left = delta as i64 + 1;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let top = r.last().unwrap().clone();
        // r = lc*r - top * x^k * b
        for c in r.iter_mut() {
            *c *= &lc;
        }
        for i in 0..=db {
            let t = &b.coeffs[i] * &top;
            r[k + i] -= t;
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        while r.last().is_some_and(Zero::is_zero) && r.len() > db {
            r.pop();
        }
        scale_left -= 1;
    }
    let mut out = PolyZ::from_coeffs(r);
    // make the total multiplier exactly lc^(delta+1)
    while scale_left > 0 {
        out = out.scale(&lc);
        scale_left -= 1;
    }
    out
}

fn pow_big(b: &BigInt, e: u32) -> BigInt {
    b.pow(e)
}

trait DivExactInt {
    fn div_exact_int(&self, d: &BigInt) -> BigInt;
}

impl DivExactInt for BigInt {
    fn div_exact_int(&self, d: &BigInt) -> BigInt {
        use num::Integer;
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }
}

/// Squarefree part p / gcd(p, p'), primitive over ℤ (sign of the leading
/// coefficient preserved).
pub fn squarefree_part(p: &PolyZ) -> PolyZ {
    if p.degree().unwrap_or(0) <= 1 {
        return p.clone();
    }
    let g = poly_gcd(p, &p.derivative());
    if g.degree() == Some(0) {
        return p.clone();
    }
    // exact over Q: pseudo-division then primitive part
    let delta = (p.degree().unwrap() - g.degree().unwrap()) as u32;
    let q = pseudo_quo(p, &g, delta);
    let content = q.content();
    let mut out = q.div_exact(&content);
    if out.leading().unwrap().is_negative() != p.leading().unwrap().is_negative() {
        out = out.neg();
    }
    out
}

/// Polynomial gcd over ℚ represented primitively over ℤ (subresultant PRS).
pub fn poly_gcd(a: &PolyZ, b: &PolyZ) -> PolyZ {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (mut prev, mut cur) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let dp = prev.degree().unwrap();
        let dc = match cur.degree() {
            None => {
                let content = prev.content();
                return positive_lead(prev.div_exact(&content));
            }
            Some(0) => return PolyZ::one(),
            Some(d) => d,
        };
        let delta = (dp - dc) as u32;
        let rem = pseudo_rem(&prev, &cur, delta);
        if rem.is_zero() {
            let content = cur.content();
            return positive_lead(cur.div_exact(&content));
        }
        let divisor = &g * pow_big(&h, delta);
        let next = rem.div_exact(&divisor);
        g = cur.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            pow_big(&g, delta).div_exact_int(&pow_big(&h, delta - 1))
        };
        prev = cur;
        cur = next;
    }
}

fn positive_lead(p: PolyZ) -> PolyZ {
    if p.leading().is_some_and(|c| c.is_negative()) {
        p.neg()
    } else {
        p
    }
}

/// Pseudo-quotient of a by b with multiplier lc(b)^(delta+1).
fn pseudo_quo(a: &PolyZ, b: &PolyZ, delta: u32) -> PolyZ {
    let db = b.degree().unwrap();
    let lc = b.leading().unwrap().clone();
    let mut r = a.coeffs.clone();
    let mut q = vec![BigInt::zero(); a.coeffs.len() - db];
    let mut scale_left = delta as i64 + 1;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let top = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        for c in q.iter_mut() {
            *c *= &lc;
        }
        q[k] += &top;
        for i in 0..=db {
            let t = &b.coeffs[i] * &top;
            r[k + i] -= t;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) && r.len() > db {
            r.pop();
        }
        scale_left -= 1;
    }
    let mut out = PolyZ::from_coeffs(q);
    while scale_left > 0 {
        out = out.scale(&lc);
        scale_left -= 1;
    }
    out
}

/// Exact certificate that q(t) >= 0 for all t >= 0: q(0) >= 0, the leading
/// coefficient is positive, and q has no roots in (0, B] for a root bound B.
/// Conservative: an interior even-multiplicity root makes it return false.
pub fn cert_nonneg_on_ray(q: &crate::algebra::Poly) -> bool {
    use crate::algebra::PolyQ;
    if q.is_zero() {
        return true;
    }
    let c = PolyQ::from_poly(q);
    let z = PolyZ::from_coeffs(c.num.coeffs.clone());
    if z.coeffs[0].is_negative() {
        return false;
    }
    if z.degree() == Some(0) {
        return true;
    }
    if z.leading().unwrap().is_negative() {
        return false;
    }
    let chain = match SturmChain::new(&z) {
        Ok(ch) => ch,
        Err(_) => return false,
    };
    let bound = super::isolate::cauchy_root_bound_z(&z);
    chain.count_halfopen(&Rat::zero(), &bound) == 0
}
