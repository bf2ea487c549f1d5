use std::ops::RangeInclusive;

use super::parallel::{map_family, RunOptions};
use crate::casework::PsiSpec;
use crate::error::Result;
use crate::polynomials::{is_primitive_irreducible, FamilySpec};

#[derive(Clone, Debug)]
pub struct CountRow {
    pub h: u64,
    /// `#P_n(H)`, enumerated.
    pub total: u128,
    /// `#P_n(H, k)` for `k = 0..=n`, enumerated.
    pub per_k: Vec<u128>,
    /// `#P*_n(H)`.
    pub primitive_irreducible: u64,
    /// `#P*_n(H) / H^n`.
    pub ratio: f64,
    /// `#P*_n(H) Ψ(H) / H`.
    pub term: f64,
    /// Running sum of `term`.
    pub partial_sum: f64,
}

/// Exact family counts for each height in `hs`.
pub fn count_sweep(n: usize, hs: RangeInclusive<u64>, psi: &PsiSpec, opts: &RunOptions) -> Result<Vec<CountRow>> {
    let mut rows = Vec::new();
    let mut acc = 0.0;
    for h in hs {
        let spec = FamilySpec::full(n, h);
        opts.check_budget(&format!("P_{n}({h})"), spec.count())?;
        let irreducible = map_family(&spec, opts, |c| {
            Ok(if is_primitive_irreducible(c, n)? { vec![()] } else { Vec::new() })
        })?
        .len() as u64;
        let total = spec.iter().count() as u128;
        let per_k = (0..=n)
            .map(|k| Ok(FamilySpec::zeroed(n, h, &[k])?.iter().count() as u128))
            .collect::<Result<Vec<_>>>()?;
        let term = irreducible as f64 * psi.eval_or_zero(h)?.to_f64() / h as f64;
        acc += term;
        rows.push(CountRow {
            h,
            total,
            per_k,
            primitive_irreducible: irreducible,
            ratio: irreducible as f64 / (h as f64).powi(n as i32),
            term,
            partial_sum: acc,
        });
    }
    Ok(rows)
}
