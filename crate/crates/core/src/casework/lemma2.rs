//! Certification of the root-anchoring estimate for large derivatives.

use super::sigma::{edge_strips, eval_tol, sigma_alpha, sigma_case_with, z_set};
use super::{Case, CaseConfig};
use crate::error::Result;
use crate::numkit::{Endpoint, IntervalUnion, RatInterval, Rational, Threshold, DEFAULT_BITS};
use crate::polynomials::IntPoly;
use crate::realroots::isolate_roots;

const DECIDE_BITS: u32 = 1024;

#[derive(Clone, Debug)]
pub struct Lemma2Point {
    pub x0: Endpoint,
    /// The first root of `P` in `I` satisfying both inequalities.
    pub alpha: Option<Endpoint>,
}

impl Lemma2Point {
    pub fn pass(&self) -> bool {
        self.alpha.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct Lemma2Report {
    pub poly: IntPoly,
    pub height: u64,
    pub points: Vec<Lemma2Point>,
}

impl Lemma2Report {
    /// Vacuously true when no point was tested.
    pub fn pass(&self) -> bool {
        self.points.iter().all(Lemma2Point::pass)
    }
}

/// `lhs < rhs` certified by refinement; `false` if undecided.
fn certified_less(f: impl Fn(u32) -> Result<(RatInterval, RatInterval)>) -> Result<bool> {
    let mut bits = DEFAULT_BITS;
    loop {
        let (l, r) = f(bits)?;
        if l.hi < r.lo {
            return Ok(true);
        }
        if l.lo >= r.hi || bits >= DECIDE_BITS {
            return Ok(false);
        }
        bits *= 2;
    }
}

/// Whether `α` satisfies `|P'(α)| > |P'(x0)| / 2` and
/// `|x0 - α| |P'(α)| < 2Ψ`.
pub fn anchors(p: &IntPoly, x0: &Endpoint, alpha: &Endpoint, psi: &Threshold) -> Result<bool> {
    let dp = p.derivative();
    let half = Rational::new(1.into(), 2.into());
    let two = Rational::from_integer(2.into());
    let first = certified_less(|bits| {
        let tol = eval_tol(bits);
        let d0 = x0.eval_enclosure(&dp, &tol)?.abs().scale(&half);
        let da = alpha.eval_enclosure(&dp, &tol)?.abs();
        Ok((d0, da))
    })?;
    if !first {
        return Ok(false);
    }
    certified_less(|bits| {
        let tol = eval_tol(bits);
        let dist = x0.enclosure(bits).sub(&alpha.enclosure(bits)).abs();
        let da = alpha.eval_enclosure(&dp, &tol)?.abs();
        let rhs = psi.enclosure(bits).expect("Ψ is finite").scale(&two);
        Ok((dist.mul(&da), rhs))
    })
}

/// Tests each component of `σ(P) ∩ I'` at both ends and an interior point.
pub fn lemma2_certify(p: &IntPoly, cfg: &CaseConfig, h: u64) -> Result<Lemma2Report> {
    let psi = cfg.psi.eval_or_zero(h)?;
    let big = sigma_case_with(p, cfg, Case::Big, h, &psi)?;
    let mut report = Lemma2Report { poly: p.clone(), height: h, points: Vec::new() };
    if big.set.is_empty() {
        return Ok(report);
    }
    let region = big.set.intersect(&edge_strips(&cfg.interval, &psi)?.inner)?;
    if region.is_empty() {
        return Ok(report);
    }
    let roots: Vec<Endpoint> = isolate_roots(p, &cfg.interval)?.roots.into_iter().map(|r| r.point).collect();
    for c in region.parts() {
        let mut xs = vec![c.lo.clone()];
        if !c.is_point()? {
            xs.push(Endpoint::Rational(c.lo.rational_between(&c.hi)?));
            xs.push(c.hi.clone());
        }
        for x0 in xs {
            let mut alpha = None;
            for a in &roots {
                if anchors(p, &x0, a, &psi)? {
                    alpha = Some(a.clone());
                    break;
                }
            }
            report.points.push(Lemma2Point { x0, alpha });
        }
    }
    Ok(report)
}

/// `∪ σ(P;α)` over `α` in `Z_I(P)`.
pub fn alpha_cover(p: &IntPoly, cfg: &CaseConfig, h: u64) -> Result<IntervalUnion> {
    let psi = cfg.psi.eval_or_zero(h)?;
    let mut out = IntervalUnion::empty();
    for r in z_set(p, &cfg.interval)?.roots {
        out = out.union(&sigma_alpha(p, &r.point, &psi, &cfg.interval)?)?;
    }
    Ok(out)
}
