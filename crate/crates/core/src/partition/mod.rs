//! Computable partition of ℚ into countably many dense classes, plus the
//! deterministic pick of a class member inside an open interval.
//!
//! The shipped partition colors a reduced rational by the 2-adic valuation
//! of its denominator: class i holds the fractions with denominator 2^i·odd.
//! Every class is dense in ℝ, classes are pairwise disjoint and cover ℚ, so
//! membership transfers exactly the way the construction needs it to.

mod pick;

use crate::algebra::{Rat, RatInterval};
use std::sync::Arc;

/// Index of a dense class.
pub type ColorIndex = u32;

/// A partition of ℚ into dense classes with a deterministic interval pick.
pub trait DensePartition: Send + Sync {
    /// Stable name used in run configurations.
    fn name(&self) -> &'static str;

    /// The class of q. Total on ℚ; classes are disjoint by construction.
    fn color(&self, q: &Rat) -> ColorIndex;

    /// A member of class `color` strictly inside the open interval
    /// (interval.lo, interval.hi), which must be nonempty. Deterministic:
    /// minimal under (odd part of denominator, |numerator|, positive first).
    fn pick(&self, color: ColorIndex, interval: &RatInterval) -> Rat;
}

/// The 2-adic valuation partition.
#[derive(Debug, Default)]
pub struct DyadicValuation;

impl DensePartition for DyadicValuation {
    fn name(&self) -> &'static str {
        "dyadic-valuation"
    }

    fn color(&self, q: &Rat) -> ColorIndex {
        debug_assert!(
            crate::algebra::rat_is_reduced(q),
            "color requires a reduced rational"
        );
        q.denom().trailing_zeros().unwrap_or(0) as ColorIndex
    }

    fn pick(&self, color: ColorIndex, interval: &RatInterval) -> Rat {
        pick::pick_dyadic_class(color, interval)
    }
}

/// Look up a partition implementation by configuration name.
pub fn by_name(name: &str) -> Option<Arc<dyn DensePartition>> {
    match name {
        "dyadic-valuation" => Some(Arc::new(DyadicValuation)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from_i64;

    #[test]
    fn color_examples() {
        let p = DyadicValuation;
        assert_eq!(p.color(&rat_from_i64(1, 1)), 0);
        assert_eq!(p.color(&rat_from_i64(3, 4)), 2);
        assert_eq!(p.color(&rat_from_i64(5, 6)), 1);
        assert_eq!(p.color(&rat_from_i64(0, 1)), 0);
        assert_eq!(p.color(&rat_from_i64(-7, 8)), 3);
    }

    #[test]
    fn registry_lookup() {
        assert!(by_name("dyadic-valuation").is_some());
        assert!(by_name("nope").is_none());
    }
}
