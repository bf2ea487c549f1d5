use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numkit::{Interval, IntervalUnion};
use crate::polynomials::FamilySpec;

/// Shards per family; fixed so results never depend on the worker count.
const SHARDS: usize = 64;

/// Execution limits for family-wide computations.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub workers: usize,
    /// Largest number of polynomials a single computation may enumerate.
    pub budget: u128,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: 5_000_000,
        }
    }
}

impl RunOptions {
    pub fn with_workers(workers: usize) -> Self {
        RunOptions { workers, ..Default::default() }
    }

    pub(crate) fn check_budget(&self, what: &str, count: u128) -> Result<()> {
        if count > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "{what} enumerates {count} polynomials, above the budget of {}",
                self.budget
            )));
        }
        Ok(())
    }

    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// Maps every member of `spec` through `f` and concatenates the outputs in
/// enumeration order.
pub(crate) fn map_family<T: Send>(
    spec: &FamilySpec,
    opts: &RunOptions,
    f: impl Fn(&[i64]) -> Result<Vec<T>> + Sync,
) -> Result<Vec<T>> {
    let shards = spec.shards(SHARDS);
    let parts: Vec<Result<Vec<T>>> = opts.install(|| {
        shards
            .into_par_iter()
            .map(|r| {
                let mut out = Vec::new();
                for c in spec.shard(r) {
                    out.extend(f(&c)?);
                }
                Ok(out)
            })
            .collect()
    })?;
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Union of `f(P)` over the family, with the number of members whose set
/// is nonempty.
pub(crate) fn union_family(
    spec: &FamilySpec,
    opts: &RunOptions,
    f: impl Fn(&[i64]) -> Result<IntervalUnion> + Sync,
) -> Result<(IntervalUnion, u64)> {
    let sets = map_family(spec, opts, |c| {
        let s = f(c)?;
        Ok(if s.is_empty() { Vec::new() } else { vec![s.into_parts()] })
    })?;
    let count = sets.len() as u64;
    let parts: Vec<Interval> = sets.into_iter().flatten().collect();
    Ok((IntervalUnion::from_intervals(parts)?, count))
}
