//! Certified real-root machinery: Sturm chains (signed subresultant
//! sequences over ℤ), root counting and isolation, certified global lower
//! bounds over ℝ, and monotone inversion by bisection.
//!
//! Everything here produces exact certificates: counts are exact, every
//! enclosure comes with a sign change (or an exact rational root), and every
//! returned bound is a true bound regardless of how tight it is.

mod chain;
mod global_min;
mod isolate;
mod monotone;

pub use chain::{cert_nonneg_on_ray, SturmChain};
pub use global_min::{global_min_lower_bound, global_min_lower_bound_cleared, DEFAULT_SLACK};
pub use isolate::{cauchy_root_bound, isolate_real_roots, sturm_count, RootEnclosure};
pub use monotone::{monotone_solve, MonotoneSolver};
