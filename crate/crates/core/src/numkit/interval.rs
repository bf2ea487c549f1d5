use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{Endpoint, Rational};
use crate::error::{Error, Result};

/// A nonempty real interval with exact endpoints and closedness flags.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// `None` when the described set is empty.
    pub fn try_new(lo: Endpoint, hi: Endpoint, lo_closed: bool, hi_closed: bool) -> Result<Option<Self>> {
        let nonempty = match lo.cmp_exact(&hi)? {
            Ordering::Less => true,
            Ordering::Equal => lo_closed && hi_closed,
            Ordering::Greater => false,
        };
        Ok(nonempty.then_some(Interval { lo, hi, lo_closed, hi_closed }))
    }

    pub fn new(lo: Endpoint, hi: Endpoint, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        Self::try_new(lo, hi, lo_closed, hi_closed)?
            .ok_or_else(|| Error::InvalidInterval("empty interval".into()))
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo.into(), hi.into(), true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo.into(), hi.into(), false, false)
    }

    pub fn point(x: Endpoint) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    /// Closed interval with small integer-ratio endpoints, for tests and
    /// literals.
    pub fn closed_ratio(a: (i64, i64), b: (i64, i64)) -> Self {
        Self::closed(
            Rational::new(a.0.into(), a.1.into()),
            Rational::new(b.0.into(), b.1.into()),
        )
        .expect("nonempty literal interval")
    }

    pub fn rational_bounds(&self) -> Option<(Rational, Rational)> {
        Some((self.lo.as_rational()?, self.hi.as_rational()?))
    }

    pub fn is_point(&self) -> Result<bool> {
        Ok(self.lo.cmp_exact(&self.hi)? == Ordering::Equal)
    }

    pub fn contains(&self, x: &Endpoint) -> Result<bool> {
        let lo_ok = match self.lo.cmp_exact(x)? {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        if !lo_ok {
            return Ok(false);
        }
        Ok(match x.cmp_exact(&self.hi)? {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        })
    }

    /// `c0(I) = inf{|x| : x in I}`.
    pub fn c0(&self) -> Result<Endpoint> {
        let zero = Endpoint::Rational(Rational::zero());
        if self.lo.cmp_exact(&zero)? != Ordering::Less {
            Ok(self.lo.clone())
        } else if self.hi.cmp_exact(&zero)? != Ordering::Greater {
            Ok(self.hi.negated())
        } else {
            Ok(zero)
        }
    }

    /// `c1(I) = sup{|x| : x in I}`.
    pub fn c1(&self) -> Result<Endpoint> {
        self.lo.negated().max_exact(&self.hi)
    }

    /// Length of a rational interval.
    pub fn rational_length(&self) -> Option<Rational> {
        let (a, b) = self.rational_bounds()?;
        Some(b - a)
    }

    /// Rejects intervals with `c0 = 0` (those touching or containing the
    /// origin) and unbounded or degenerate ones.
    pub fn check_away_from_zero(&self) -> Result<()> {
        if self.is_point()? {
            return Err(Error::InvalidInterval("degenerate interval".into()));
        }
        let c0 = self.c0()?;
        let zero = Endpoint::Rational(Rational::zero());
        let zero_is_inf = c0.cmp_exact(&zero)? == Ordering::Equal;
        if zero_is_inf {
            return Err(Error::InvalidInterval(format!(
                "{self} violates 0 < c0(I) = inf |x| over I"
            )));
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.lo.as_rational().is_some_and(|r| r.is_positive())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}
