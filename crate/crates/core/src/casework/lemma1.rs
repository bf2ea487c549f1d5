//! Windows cut out by bounds on a polynomial and its derivatives, with the
//! component-count and component-length certificate.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numkit::{rational_to_f64, Interval, IntervalUnion, Rational, Threshold};
use crate::polynomials::IntPoly;
use crate::realroots::{solve_abs_cmp, solve_abs_lt};

/// `{x in (a, b) : |f| <= α_0, β_j <= |f^(j)| <= α_j for 0 < j < k}`,
/// with `inf |f^(k)| >= β_k` on `(a, b)`.
#[derive(Clone, Debug)]
pub struct CkWindow {
    pub f: IntPoly,
    pub k: usize,
    /// `α_0 .. α_{k-1}`; `None` is `+inf`.
    pub alpha: Vec<Option<Rational>>,
    /// `β_1 .. β_k`.
    pub beta: Vec<Rational>,
    pub a: Rational,
    pub b: Rational,
}

#[derive(Clone, Debug)]
pub struct CkCertificate {
    pub components: usize,
    /// `k(k+1)/2 + 1`.
    pub max_components: usize,
    /// Upper bound of the longest component length.
    pub max_length: f64,
    /// `min 3^((j-i+1)/2) (α_i/β_j)^(1/(j-i))` over `0 <= i < j <= k`.
    pub length_bound: f64,
}

impl CkCertificate {
    pub fn count_ok(&self) -> bool {
        self.components <= self.max_components
    }

    pub fn length_ok(&self) -> bool {
        self.max_length <= self.length_bound * (1.0 + 1e-12)
    }

    pub fn pass(&self) -> bool {
        self.count_ok() && self.length_ok()
    }
}

impl CkWindow {
    fn alpha(&self, i: usize) -> Option<&Rational> {
        self.alpha[i].as_ref()
    }

    fn beta(&self, j: usize) -> &Rational {
        &self.beta[j - 1]
    }

    fn validate(&self) -> Result<Interval> {
        let k = self.k;
        if k == 0 || self.alpha.len() != k || self.beta.len() != k {
            return Err(Error::InvalidConfig(format!(
                "k = {k} needs {k} upper bounds α_0..α_(k-1) and {k} lower bounds β_1..β_k"
            )));
        }
        if self.alpha(0).is_some_and(|a| !a.is_positive()) {
            return Err(Error::Precondition("α_0 must be positive".into()));
        }
        for j in 1..k {
            let b = self.beta(j);
            if b.is_negative() || self.alpha(j).is_some_and(|a| a <= b) {
                return Err(Error::Precondition(format!("need α_{j} > β_{j} >= 0")));
            }
        }
        if !self.beta(k).is_positive() {
            return Err(Error::Precondition("β_k must be positive".into()));
        }
        let ab = Interval::open(self.a.clone(), self.b.clone())?;
        let fk = self.f.nth_derivative(k);
        if !solve_abs_lt(&fk, self.beta(k), &ab)?.is_empty() {
            return Err(Error::Precondition(format!(
                "inf |f^({k})| on ({}, {}) is below β_{k} = {}",
                self.a,
                self.b,
                self.beta(k)
            )));
        }
        Ok(ab)
    }

    /// The exact window and its certificate.
    pub fn solve(&self, tol: &Rational) -> Result<(IntervalUnion, CkCertificate)> {
        let ab = self.validate()?;
        let bound = |a: Option<&Rational>| a.map_or(Threshold::Infinite, |a| Threshold::rational(a.clone()));
        let mut set = solve_abs_cmp(&self.f, &bound(self.alpha(0)), false, &ab)?;
        for j in 1..self.k {
            if set.is_empty() {
                break;
            }
            let fj = self.f.nth_derivative(j);
            let mut band = solve_abs_cmp(&fj, &bound(self.alpha(j)), false, &ab)?;
            if !self.beta(j).is_zero() {
                band = band.difference(&solve_abs_lt(&fj, self.beta(j), &ab)?)?;
            }
            set = set.intersect(&band)?;
        }
        let mut max_length = 0.0f64;
        for c in set.parts() {
            let m = IntervalUnion::from_interval(c.clone()).measure(tol)?;
            max_length = max_length.max(rational_to_f64(&m.hi()));
        }
        let cert = CkCertificate {
            components: set.len(),
            max_components: self.k * (self.k + 1) / 2 + 1,
            max_length,
            length_bound: self.length_bound(),
        };
        Ok((set, cert))
    }

    pub fn length_bound(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.k {
            let Some(a) = self.alpha(i) else { continue };
            for j in (i + 1)..=self.k {
                let b = self.beta(j);
                if b.is_zero() {
                    continue;
                }
                let d = (j - i) as f64;
                let ratio = (a / b).to_f64().unwrap_or(f64::INFINITY);
                best = best.min(3f64.powf((d + 1.0) / 2.0) * ratio.powf(1.0 / d));
            }
        }
        best
    }
}

/// See [`CkWindow::solve`].
pub fn ck_window(w: &CkWindow, tol: &Rational) -> Result<(IntervalUnion, CkCertificate)> {
    w.solve(tol)
}
