//! Finite unions of intervals with exact endpoints.
//!
//! A normalized union keeps its parts sorted, pairwise disjoint, and
//! non-adjacent: two parts sharing an endpoint that belongs to either of
//! them are merged.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{Dyadic, DyadicEnclosure, Endpoint, Interval, Rational};
use crate::error::Result;

/// Which end of a radius enclosure a dilation uses.
///
/// `Outer` produces a set containing the true one, `Inner` a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Outer,
    Inner,
}

/// Lebesgue measure of a union: a dyadic enclosure, plus the exact value
/// when every endpoint is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    pub enclosure: DyadicEnclosure,
    pub exact: Option<Rational>,
}

impl Measure {
    pub fn zero() -> Self {
        Measure { enclosure: DyadicEnclosure::zero(), exact: Some(Rational::zero()) }
    }

    pub fn lo(&self) -> Rational {
        self.enclosure.lo.to_rational()
    }

    pub fn hi(&self) -> Rational {
        self.enclosure.hi.to_rational()
    }

    pub fn mid_f64(&self) -> f64 {
        self.enclosure.midpoint_f64()
    }
}

#[derive(Clone, Debug, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

/// Merge sort with a fallible comparator; stable.
pub(crate) fn sort_exact<T: Clone>(v: Vec<T>, cmp: &impl Fn(&T, &T) -> Result<Ordering>) -> Result<Vec<T>> {
    if v.len() <= 1 {
        return Ok(v);
    }
    let mut v = v;
    let right = v.split_off(v.len() / 2);
    let left = sort_exact(v, cmp)?;
    let right = sort_exact(right, cmp)?;
    merge_exact(left, right, cmp)
}

fn merge_exact<T>(left: Vec<T>, right: Vec<T>, cmp: &impl Fn(&T, &T) -> Result<Ordering>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut l = left.into_iter().peekable();
    let mut r = right.into_iter().peekable();
    while let (Some(a), Some(b)) = (l.peek(), r.peek()) {
        if cmp(b, a)? == Ordering::Less {
            out.push(r.next().unwrap());
        } else {
            out.push(l.next().unwrap());
        }
    }
    out.extend(l);
    out.extend(r);
    Ok(out)
}

fn cmp_lower(a: &Interval, b: &Interval) -> Result<Ordering> {
    Ok(match a.lo.cmp_exact(&b.lo)? {
        Ordering::Equal => b.lo_closed.cmp(&a.lo_closed),
        o => o,
    })
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalUnion { parts: vec![i] }
    }

    pub fn from_intervals(parts: Vec<Interval>) -> Result<Self> {
        let sorted = sort_exact(parts, &cmp_lower)?;
        Ok(IntervalUnion { parts: sweep(sorted)? })
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Interval> {
        self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn union(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        let merged = merge_exact(self.parts.clone(), other.parts.clone(), &cmp_lower)?;
        Ok(IntervalUnion { parts: sweep(merged)? })
    }

    pub fn intersect(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        let (a, b) = (&self.parts, &other.parts);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let (x, y) = (&a[i], &b[j]);
            let (lo, lo_closed) = match x.lo.cmp_exact(&y.lo)? {
                Ordering::Less => (y.lo.clone(), y.lo_closed),
                Ordering::Greater => (x.lo.clone(), x.lo_closed),
                Ordering::Equal => (x.lo.clone(), x.lo_closed && y.lo_closed),
            };
            let (hi, hi_closed, step) = match x.hi.cmp_exact(&y.hi)? {
                Ordering::Less => (x.hi.clone(), x.hi_closed, (1, 0)),
                Ordering::Greater => (y.hi.clone(), y.hi_closed, (0, 1)),
                Ordering::Equal => (x.hi.clone(), x.hi_closed && y.hi_closed, (1, 1)),
            };
            if let Some(iv) = Interval::try_new(lo, hi, lo_closed, hi_closed)? {
                out.push(iv);
            }
            i += step.0;
            j += step.1;
        }
        Ok(IntervalUnion { parts: sweep(out)? })
    }

    pub fn intersect_interval(&self, clip: &Interval) -> Result<IntervalUnion> {
        self.intersect(&IntervalUnion::from_interval(clip.clone()))
    }

    /// `self \ other`.
    pub fn difference(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        if self.is_empty() || other.is_empty() {
            return Ok(self.clone());
        }
        let first = &self.parts[0];
        let last = &self.parts[self.parts.len() - 1];
        let mut gaps = Vec::new();
        let mut prev = (first.lo.clone(), true);
        for b in &other.parts {
            if let Some(g) = Interval::try_new(prev.0.clone(), b.lo.clone(), prev.1, !b.lo_closed)? {
                gaps.push(g);
            }
            prev = (b.hi.clone(), !b.hi_closed);
        }
        if let Some(g) = Interval::try_new(prev.0, last.hi.clone(), prev.1, true)? {
            gaps.push(g);
        }
        self.intersect(&IntervalUnion { parts: gaps })
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn contains(&self, x: &Endpoint) -> Result<bool> {
        for p in &self.parts {
            if p.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `{x in clip : dist(x, self) < r}` for an exact dyadic radius.
    pub fn dilate(&self, r: &Dyadic, clip: &Interval) -> Result<IntervalUnion> {
        if self.is_empty() || r.mantissa().is_negative() || r.is_zero() {
            return Ok(IntervalUnion::empty());
        }
        let neg = -r;
        let grown: Vec<Interval> = self
            .parts
            .iter()
            .map(|p| Interval {
                lo: p.lo.shifted(&neg),
                hi: p.hi.shifted(r),
                lo_closed: false,
                hi_closed: false,
            })
            .collect();
        IntervalUnion::from_intervals(grown)?.intersect_interval(clip)
    }

    /// Dilation by an enclosed radius, taking `hi` for [`Direction::Outer`]
    /// and `lo` for [`Direction::Inner`].
    pub fn dilate_enclosure(&self, r: &DyadicEnclosure, dir: Direction, clip: &Interval) -> Result<IntervalUnion> {
        match dir {
            Direction::Outer => self.dilate(&r.hi, clip),
            Direction::Inner => self.dilate(&r.lo, clip),
        }
    }

    /// Measure enclosure of width at most `tol`. The enclosure depends only
    /// on the set and `tol`, not on how far endpoints were refined before.
    pub fn measure(&self, tol: &Rational) -> Result<Measure> {
        if self.parts.is_empty() {
            return Ok(Measure::zero());
        }
        let bits = bits_for(tol, 2 * self.parts.len());
        let exact = self
            .parts
            .iter()
            .map(|p| p.rational_bounds().map(|(a, b)| b - a))
            .try_fold(Rational::zero(), |acc, l| l.map(|l| acc + l));
        if let Some(e) = exact {
            return Ok(Measure { enclosure: DyadicEnclosure::from_rational(&e, bits), exact: Some(e) });
        }
        let (mut lo_sum, mut hi_sum) = (BigInt::zero(), BigInt::zero());
        for p in &self.parts {
            let (ll, lh) = p.lo.grid_enclosure(bits);
            let (hl, hh) = p.hi.grid_enclosure(bits);
            let lo = &hl - &lh;
            if lo.is_positive() {
                lo_sum += lo;
            }
            hi_sum += hh - ll;
        }
        Ok(Measure {
            enclosure: DyadicEnclosure::new(Dyadic::from_scaled(lo_sum, bits), Dyadic::from_scaled(hi_sum, bits)),
            exact: None,
        })
    }
}

/// Smallest `b` with `count / 2^b <= tol`.
pub(crate) fn bits_for(tol: &Rational, count: usize) -> u32 {
    assert!(tol.is_positive(), "tolerance must be positive");
    let need = (BigInt::from(count) * tol.denom()).div_ceil(tol.numer());
    let mut b = need.bits() as u32;
    if b > 0 && (BigInt::from(1) << (b - 1) as usize) >= need {
        b -= 1;
    }
    b
}

fn sweep(sorted: Vec<Interval>) -> Result<Vec<Interval>> {
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        let merge = match out.last() {
            None => false,
            Some(cur) => match cur.hi.cmp_exact(&iv.lo)? {
                Ordering::Less => false,
                Ordering::Equal => cur.hi_closed || iv.lo_closed,
                Ordering::Greater => true,
            },
        };
        if !merge {
            out.push(iv);
            continue;
        }
        let cur = out.last_mut().unwrap();
        match cur.hi.cmp_exact(&iv.hi)? {
            Ordering::Less => {
                cur.hi = iv.hi;
                cur.hi_closed = iv.hi_closed;
            }
            Ordering::Equal => cur.hi_closed |= iv.hi_closed,
            Ordering::Greater => {}
        }
    }
    Ok(out)
}
