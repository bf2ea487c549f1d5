//! Height-exact polynomial families and their lexicographic enumeration.
//!
//! A family is described by a degree bound `n`, a height `H`, a set of
//! *zeroed* coefficient indices and an optional residual `R`:
//!
//! * without a residual, members are all `P` of degree at most `n` with
//!   `H(P) = H` whose zeroed coefficients vanish;
//! * with a residual, members are `R + sum a_i x^i` over the zeroed indices
//!   `i`, again with `H(P) = H`.
//!
//! Enumeration runs over the *free* coefficients in lexicographic order of
//! the coefficient vector `(a_n, ..., a_0)`. The last free coefficient is
//! split off; every other combination is a *prefix*, and prefix index
//! ranges are the unit of sharding.

use std::ops::Range;

use num_traits::{ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub n: usize,
    pub height: u64,
    pub zeroed: Vec<usize>,
    pub residual: Option<IntPoly>,
}

impl FamilySpec {
    /// `P_n(H)`.
    pub fn full(n: usize, height: u64) -> Self {
        FamilySpec { n, height, zeroed: Vec::new(), residual: None }
    }

    /// Height-`H` polynomials with the given coefficients equal to zero.
    pub fn zeroed(n: usize, height: u64, zeroed: &[usize]) -> Result<Self> {
        let s = FamilySpec { n, height, zeroed: zeroed.to_vec(), residual: None };
        s.validate()?;
        Ok(s)
    }

    /// `{R + sum a_i x^i : i zeroed}` restricted to height exactly `H`.
    pub fn with_residual(n: usize, height: u64, zeroed: &[usize], residual: IntPoly) -> Result<Self> {
        let s = FamilySpec { n, height, zeroed: zeroed.to_vec(), residual: Some(residual) };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.height == 0 {
            return Err(Error::InvalidConfig("family needs n >= 1 and H >= 1".into()));
        }
        if self.height > i64::MAX as u64 / 4 {
            return Err(Error::InvalidConfig(format!("height {} too large", self.height)));
        }
        let mut z = self.zeroed.clone();
        z.sort_unstable();
        z.dedup();
        if z.len() != self.zeroed.len() || z.iter().any(|&i| i > self.n) {
            return Err(Error::InvalidConfig(format!(
                "zeroed indices {:?} must be distinct and at most n = {}",
                self.zeroed, self.n
            )));
        }
        if let Some(r) = &self.residual {
            if r.degree().is_some_and(|d| d > self.n) {
                return Err(Error::InvalidConfig(format!("residual {r} has degree above {}", self.n)));
            }
            if r.height() > self.height.into() {
                return Err(Error::InvalidConfig(format!("residual {r} has height above {}", self.height)));
            }
            if let Some(&i) = self.zeroed.iter().find(|&&i| !r.coeff(i).is_zero()) {
                return Err(Error::InvalidConfig(format!("residual {r} has nonzero coefficient at zeroed index {i}")));
            }
        }
        Ok(())
    }

    /// Fixed coefficient values, lowest degree first.
    fn fixed(&self) -> Vec<i64> {
        let mut base = vec![0i64; self.n + 1];
        if let Some(r) = &self.residual {
            for (i, c) in r.coeffs().iter().enumerate() {
                base[i] = c.to_i64().expect("residual coefficient bounded by height");
            }
        }
        base
    }

    /// Free indices, most significant (highest) first.
    fn free(&self) -> Vec<usize> {
        let mut f: Vec<usize> = match &self.residual {
            Some(_) => self.zeroed.clone(),
            None => (0..=self.n).filter(|i| !self.zeroed.contains(i)).collect(),
        };
        f.sort_unstable_by(|a, b| b.cmp(a));
        f
    }

    /// Number of prefixes; shards are sub-ranges of `0..prefix_count()`.
    pub fn prefix_count(&self) -> u64 {
        let f = self.free().len();
        (2 * self.height + 1).pow(f.saturating_sub(1) as u32)
    }

    /// Exact number of members.
    pub fn count(&self) -> u128 {
        let f = self.free().len() as u32;
        let h = self.height as u128;
        let fixed_max = self.fixed().iter().map(|c| c.unsigned_abs() as u128).max().unwrap_or(0);
        if fixed_max == h {
            (2 * h + 1).pow(f)
        } else {
            (2 * h + 1).pow(f) - (2 * h - 1).pow(f)
        }
    }

    pub fn iter(&self) -> FamilyIter {
        self.shard(0..self.prefix_count())
    }

    /// Members whose prefix index lies in `range`, in lexicographic order.
    pub fn shard(&self, range: Range<u64>) -> FamilyIter {
        FamilyIter::new(self, range)
    }

    /// Splits the prefix range into at most `parts` contiguous pieces of
    /// near-equal size.
    pub fn shards(&self, parts: usize) -> Vec<Range<u64>> {
        split_range(self.prefix_count(), parts)
    }
}

pub(crate) fn split_range(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(total.max(1));
    (0..parts).map(|i| (total * i / parts)..(total * (i + 1) / parts)).collect()
}

/// Iterator over coefficient vectors `a_0..=a_n` of family members.
pub struct FamilyIter {
    coeffs: Vec<i64>,
    free: Vec<usize>,
    h: i64,
    fixed_hits: bool,
    prefix_hits: bool,
    next_prefix: u64,
    end: u64,
    last: i64,
    loaded: bool,
}

impl FamilyIter {
    fn new(spec: &FamilySpec, range: Range<u64>) -> Self {
        let h = spec.height as i64;
        let coeffs = spec.fixed();
        let fixed_hits = coeffs.iter().any(|c| c.abs() == h);
        FamilyIter {
            coeffs,
            free: spec.free(),
            h,
            fixed_hits,
            prefix_hits: false,
            next_prefix: range.start,
            end: range.end.min(spec.prefix_count()),
            last: -h,
            loaded: false,
        }
    }

    fn prefix_slots(&self) -> &[usize] {
        &self.free[..self.free.len().saturating_sub(1)]
    }

    fn load_prefix(&mut self) {
        let radix = (2 * self.h + 1) as u64;
        let mut idx = self.next_prefix;
        let slots: Vec<usize> = self.prefix_slots().to_vec();
        for &i in slots.iter().rev() {
            self.coeffs[i] = (idx % radix) as i64 - self.h;
            idx /= radix;
        }
        self.prefix_hits = self.fixed_hits || slots.iter().any(|&i| self.coeffs[i].abs() == self.h);
        self.last = -self.h;
        self.loaded = true;
    }

    fn advance_prefix(&mut self) {
        self.next_prefix += 1;
        self.loaded = false;
    }
}

impl Iterator for FamilyIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            if self.next_prefix >= self.end {
                return None;
            }
            if !self.loaded {
                self.load_prefix();
            }
            let Some(&li) = self.free.last() else {
                self.advance_prefix();
                if self.fixed_hits {
                    return Some(self.coeffs.clone());
                }
                continue;
            };
            if self.last > self.h {
                self.advance_prefix();
                continue;
            }
            let v = self.last;
            // without a height-H coefficient elsewhere only +-H qualify
            self.last = if self.prefix_hits || v == self.h { v + 1 } else { self.h };
            self.coeffs[li] = v;
            return Some(self.coeffs.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form(n: u32, h: u128) -> u128 {
        (2 * h + 1).pow(n + 1) - (2 * h - 1).pow(n + 1)
    }

    #[test]
    fn small_family_counts() {
        assert_eq!(FamilySpec::full(1, 1).iter().count(), 8);
        assert_eq!(FamilySpec::full(2, 2).iter().count(), 98);
        assert_eq!(FamilySpec::zeroed(2, 2, &[1]).unwrap().iter().count(), 16);
        for n in 1..=3 {
            for h in 1..=5u64 {
                let s = FamilySpec::full(n, h);
                assert_eq!(s.iter().count() as u128, closed_form(n as u32, h as u128));
                assert_eq!(s.count(), closed_form(n as u32, h as u128));
            }
        }
    }

    #[test]
    fn members_have_exact_height_and_lex_order() {
        let s = FamilySpec::full(2, 3);
        let all: Vec<Vec<i64>> = s.iter().collect();
        for c in &all {
            assert_eq!(c.iter().map(|x| x.abs()).max(), Some(3));
        }
        for w in all.windows(2) {
            let key = |c: &Vec<i64>| c.iter().rev().copied().collect::<Vec<_>>();
            assert!(key(&w[0]) < key(&w[1]));
        }
    }

    #[test]
    fn shards_concatenate_to_whole() {
        let s = FamilySpec::full(3, 2);
        let whole: Vec<_> = s.iter().collect();
        for parts in [1, 2, 3, 7, 1000] {
            let joined: Vec<_> = s.shards(parts).into_iter().flat_map(|r| s.shard(r)).collect();
            assert_eq!(joined, whole);
        }
    }

    #[test]
    fn residual_families() {
        // R = x^2 with a_0 free at H = 1: x^2 - 1, x^2, x^2 + 1
        let s = FamilySpec::with_residual(2, 1, &[0], IntPoly::from_i64s(&[0, 0, 1])).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![vec![-1, 0, 1], vec![0, 0, 1], vec![1, 0, 1]]);
        // R = x^2 at H = 2 with a_1 free: only a_1 = +-2
        let s = FamilySpec::with_residual(2, 2, &[1], IntPoly::from_i64s(&[0, 0, 1])).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![vec![0, -2, 1], vec![0, 2, 1]]);
        assert_eq!(s.count(), 2);
        assert!(FamilySpec::with_residual(2, 1, &[0], IntPoly::from_i64s(&[1, 0, 1])).is_err());
        assert!(FamilySpec::with_residual(2, 1, &[0], IntPoly::from_i64s(&[0, 0, 2])).is_err());
    }

    #[test]
    fn fixed_k_decomposition_partitions() {
        // For fixed k, every member of P_n(H) lies in exactly one family
        // R + a_k x^k with R_k = 0 and H(R) <= H.
        let (n, h) = (2usize, 2u64);
        for k in 0..=n {
            let mut total = 0u128;
            for hr in 0..=h {
                let residuals: Vec<Vec<i64>> = if hr == 0 {
                    vec![vec![0; n + 1]]
                } else {
                    FamilySpec::zeroed(n, hr, &[k]).unwrap().iter().collect()
                };
                for r in residuals {
                    let spec = FamilySpec::with_residual(n, h, &[k], IntPoly::from_i64s(&r)).unwrap();
                    total += spec.iter().count() as u128;
                }
            }
            assert_eq!(total, closed_form(n as u32, h as u128));
        }
    }
}
