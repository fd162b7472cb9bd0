//! Intervals with rational endpoints, the enclosure currency of the kernels.

use super::rational::Rat;

/// A closed interval [lo, hi] with lo <= hi. Root enclosures interpret a
/// degenerate interval (lo == hi) as an exactly known point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rat,
    hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(p: Rat) -> Self {
        RatInterval {
            lo: p.clone(),
            hi: p,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_open(&self, x: &Rat) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Strict separation: every point of self lies below every point of `o`.
    pub fn strictly_below(&self, o: &RatInterval) -> bool {
        self.hi < o.lo
    }
}
