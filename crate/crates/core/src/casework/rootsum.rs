//! Sums of `|R̃'(α)|^-1` over anchored roots of a one-parameter family
//! `R + a x^k`, where `R̃ = x^-k R`.
//!
//! At a root `α` of `P = R + a x^k` one has `R̃'(α) = α^-k P'(α)`, so each
//! term is `|α|^k / |P'(α)|`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::sigma::{eval_tol, z_set};
use super::CaseConfig;
use crate::error::{Error, Result};
use crate::numkit::{sort_exact, Endpoint, RatInterval, Rational, DEFAULT_BITS};
use crate::polynomials::{FamilySpec, IntPoly};
use crate::realroots::roots_in;

#[derive(Clone, Debug)]
pub struct RootSumPiece {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub roots: usize,
    pub sum: RatInterval,
}

#[derive(Clone, Debug)]
pub struct RootSum {
    /// `w_0 < ... < w_s`, the ends of `I` included.
    pub breakpoints: Vec<Endpoint>,
    pub pieces: Vec<RootSumPiece>,
}

impl RootSum {
    pub fn total(&self) -> RatInterval {
        self.pieces
            .iter()
            .fold(RatInterval::point(Rational::zero()), |acc, p| acc.add(&p.sum))
    }
}

/// Numerators of `R̃'` and `R̃''` after clearing powers of `x`.
pub fn tilde_numerators(r: &IntPoly, k: usize) -> (IntPoly, IntPoly) {
    let x = IntPoly::monomial(1);
    let n1 = &(&x * &r.derivative()) - &r.scale(&BigInt::from(k));
    let n2 = &(&x * &n1.derivative()) - &n1.scale(&BigInt::from(k + 1));
    (n1, n2)
}

fn pow_enclosure(x: &RatInterval, k: usize) -> RatInterval {
    (0..k).fold(RatInterval::point(Rational::one()), |acc, _| acc.mul(x))
}

pub fn root_sum_diagnostic(k: usize, r: &IntPoly, cfg: &CaseConfig, h: u64) -> Result<RootSum> {
    if k > cfg.n {
        return Err(Error::InvalidConfig(format!("k = {k} exceeds n = {}", cfg.n)));
    }
    let family = FamilySpec::with_residual(cfg.n, h, &[k], r.clone())?;
    let i = &cfg.interval;

    let (n1, n2) = tilde_numerators(r, k);
    let mut inner = Vec::new();
    for q in [&n1, &n2] {
        if !q.is_zero() {
            inner.extend(roots_in(q, i)?);
        }
    }
    let inner = sort_exact(inner, &|a: &Endpoint, b: &Endpoint| a.cmp_exact(b))?;
    let mut breakpoints = vec![i.lo.clone()];
    for w in inner {
        let last = breakpoints.last().expect("nonempty");
        if w.cmp_exact(last)? == Ordering::Greater && w.cmp_exact(&i.hi)? == Ordering::Less {
            breakpoints.push(w);
        }
    }
    breakpoints.push(i.hi.clone());
    let mut pieces: Vec<RootSumPiece> = breakpoints
        .windows(2)
        .map(|w| RootSumPiece {
            lo: w[0].clone(),
            hi: w[1].clone(),
            roots: 0,
            sum: RatInterval::point(Rational::zero()),
        })
        .collect();

    let tol = eval_tol(DEFAULT_BITS);
    for c in family.iter() {
        let p = IntPoly::from_i64s(&c);
        let dp = p.derivative();
        for root in z_set(&p, i)?.roots {
            let a = &root.point;
            let ak = pow_enclosure(&a.enclosure(DEFAULT_BITS).abs(), k);
            let d = a.eval_enclosure(&dp, &tol)?.abs();
            let term = ak.mul(&d.recip().expect("|P'(α)| >= 1/2 on Z"));
            // piece j holds [w_j, w_{j+1}), the last one also w_s
            let mut j = 0;
            while j + 1 < pieces.len() && a.cmp_exact(&pieces[j].hi)? != Ordering::Less {
                j += 1;
            }
            pieces[j].roots += 1;
            pieces[j].sum = pieces[j].sum.add(&term);
        }
    }
    Ok(RootSum { breakpoints, pieces })
}
