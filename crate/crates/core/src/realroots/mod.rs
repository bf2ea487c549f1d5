//! Certified real-root isolation and exact solution sets of
//! one-variable polynomial inequalities.

mod isolate;
pub mod prefilter;
mod solve;

pub use isolate::{isolate_roots, real_roots, roots_in, sturm_count, sturm_sequence, Root, RootList};
pub use solve::{min_abs_on, solve_abs_cmp, solve_abs_lt, solve_band, solve_threshold, MinAbs, MAX_CLEARED_DEGREE};
