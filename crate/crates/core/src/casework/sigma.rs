//! Derivative-stratified solution sets and the sets built around them.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed};

use super::{Case, CaseConfig};
use crate::error::{Error, Result};
use crate::numkit::{
    Direction, DyadicEnclosure, Endpoint, Interval, IntervalUnion, RatInterval, Rational, Threshold,
    DEFAULT_BITS, MAX_BITS,
};
use crate::polynomials::IntPoly;
use crate::realroots::prefilter::{may_satisfy, AbsBand};
use crate::realroots::{isolate_roots, min_abs_on, solve_band, solve_threshold, RootList};

/// Minimizer of `|P'|` on one component.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub point: Endpoint,
    /// Enclosure of `|P'(γ)|`.
    pub deriv_abs: RatInterval,
}

#[derive(Clone, Debug)]
pub struct StratifiedSet {
    pub poly: IntPoly,
    pub height: u64,
    pub case: Case,
    pub set: IntervalUnion,
    /// One entry per component of `set`, filled for [`Case::Medium`].
    pub gammas: Vec<Gamma>,
}

pub(crate) fn eval_tol(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Derivative band `lo <= |P'| < hi` for a case.
pub fn case_band(cfg: &CaseConfig, case: Case, h: u64) -> (Threshold, Threshold) {
    let one = Threshold::rational(Rational::one());
    match case {
        Case::Big => (one, Threshold::Infinite),
        Case::Medium => (cfg.h_pow_neg_delta(h), one),
        Case::Small => (Threshold::Zero, cfg.h_pow_neg_delta(h)),
    }
}

/// Float hull of an interval, widened so it encloses the exact one.
pub(crate) fn float_hull(i: &Interval) -> (f64, f64) {
    let (a, b) = (i.lo.to_f64(), i.hi.to_f64());
    (a - 1e-12 * (a.abs() + 1.0), b + 1e-12 * (b.abs() + 1.0))
}

/// `false` only when the set of `sigma_case` is certainly empty.
pub fn may_be_nonempty(p: &IntPoly, psi: &Threshold, band: &(Threshold, Threshold), i: &Interval) -> bool {
    if matches!(psi, Threshold::Zero) {
        return false;
    }
    let dp = p.derivative();
    let bands = [
        AbsBand::new(p.to_f64_coeffs(), 0.0, psi.upper_f64()),
        AbsBand::new(dp.to_f64_coeffs(), band.0.lower_f64(), band.1.upper_f64()),
    ];
    let (a, b) = float_hull(i);
    may_satisfy(&bands, a, b, 10)
}

/// `{x in I : |P(x)| < Ψ(H)}` intersected with the derivative condition of
/// `case`.
pub fn sigma_case(p: &IntPoly, cfg: &CaseConfig, case: Case, h: u64) -> Result<StratifiedSet> {
    let psi = cfg.psi.eval_or_zero(h)?;
    sigma_case_with(p, cfg, case, h, &psi)
}

pub(crate) fn sigma_case_with(
    p: &IntPoly,
    cfg: &CaseConfig,
    case: Case,
    h: u64,
    psi: &Threshold,
) -> Result<StratifiedSet> {
    let base = solve_threshold(p, psi, &cfg.interval)?;
    let dp = p.derivative();
    let set = if base.is_empty() {
        base
    } else {
        let (lo, hi) = case_band(cfg, case, h);
        let band = solve_band(&dp, &lo, &hi, &cfg.interval)?;
        base.intersect(&band)?
    };
    let gammas = if case == Case::Medium { gammas_of(&dp, &set)? } else { Vec::new() };
    Ok(StratifiedSet { poly: p.clone(), height: h, case, set, gammas })
}

fn gammas_of(dp: &IntPoly, set: &IntervalUnion) -> Result<Vec<Gamma>> {
    let tol = eval_tol(DEFAULT_BITS);
    set.parts()
        .iter()
        .map(|c| {
            let m = min_abs_on(dp, c, &tol)?;
            let deriv_abs = m.witness.eval_enclosure(dp, &tol)?.abs();
            Ok(Gamma { point: m.witness, deriv_abs })
        })
        .collect()
}

/// `σ₁` and `σ₂` of one component.
#[derive(Clone, Debug)]
pub struct ComponentExpansion {
    pub component: Interval,
    /// Enclosure of `(H |P'(γ)|)^-1`.
    pub r1: DyadicEnclosure,
    /// Outer `σ₁`.
    pub sigma1: IntervalUnion,
    /// Inner `σ₂`.
    pub sigma2: IntervalUnion,
}

#[derive(Clone, Debug, Default)]
pub struct Expansions {
    pub parts: Vec<ComponentExpansion>,
    pub sigma1: IntervalUnion,
    pub sigma2: IntervalUnion,
}

/// Enclosure of `1 / (H |P'(γ)|)`.
pub(crate) fn sigma1_radius(h: u64, deriv_abs: &RatInterval, bits: u32) -> Result<DyadicEnclosure> {
    if !deriv_abs.lo.is_positive() {
        return Err(Error::Certification(format!("|P'(γ)| enclosure {deriv_abs:?} does not exclude 0")));
    }
    let hq = Rational::from_integer(h.into());
    let lo = (&hq * &deriv_abs.hi).recip();
    let hi = (&hq * &deriv_abs.lo).recip();
    Ok(DyadicEnclosure::outward(&lo, &hi, bits))
}

/// Builds `σ₁` (outer) and `σ₂` (inner) per component and certifies
/// `σ₁ ⊆ σ₂`.
pub fn gamma_and_expansions(s: &StratifiedSet, cfg: &CaseConfig) -> Result<Expansions> {
    if s.case != Case::Medium {
        return Err(Error::Precondition(format!("expansions need a medium set, got {}", s.case)));
    }
    if s.gammas.len() != s.set.len() {
        return Err(Error::Precondition("medium set without γ per component".into()));
    }
    let dp = s.poly.derivative();
    let r2_exp = &cfg.delta * Rational::from_integer(2.into()) - Rational::one();
    let r2 = cfg.h_pow(s.height, r2_exp);
    let mut out = Expansions::default();
    for (c, g) in s.set.parts().iter().zip(&s.gammas) {
        let single = IntervalUnion::from_interval(c.clone());
        let mut bits = DEFAULT_BITS;
        let (r1, r2e) = loop {
            let d = g.point.eval_enclosure(&dp, &eval_tol(bits))?.abs();
            let r1 = sigma1_radius(s.height, &d, bits)?;
            let r2e = r2.enclosure(bits).expect("finite radius");
            let r2e = DyadicEnclosure::outward(&r2e.lo, &r2e.hi, bits);
            if r1.hi <= r2e.lo {
                break (r1, r2e);
            }
            if bits >= MAX_BITS {
                return Err(Error::Certification(format!(
                    "σ₁ ⊆ σ₂ undecided for {} on {c}: radius {} vs {}",
                    s.poly,
                    r1.hi,
                    r2e.lo
                )));
            }
            bits *= 2;
        };
        let sigma1 = single.dilate_enclosure(&r1, Direction::Outer, &cfg.interval)?;
        let sigma2 = single.dilate_enclosure(&r2e, Direction::Inner, &cfg.interval)?;
        out.sigma1 = out.sigma1.union(&sigma1)?;
        out.sigma2 = out.sigma2.union(&sigma2)?;
        out.parts.push(ComponentExpansion { component: c.clone(), r1, sigma1, sigma2 });
    }
    Ok(out)
}

/// `I'` and the edge strips `I''` of width `4Ψ`.
#[derive(Clone, Debug)]
pub struct EdgeStrips {
    pub inner: IntervalUnion,
    pub strips: IntervalUnion,
}

pub fn edge_strips(i: &Interval, psi: &Threshold) -> Result<EdgeStrips> {
    let whole = IntervalUnion::from_interval(i.clone());
    let (a, b) = i
        .rational_bounds()
        .ok_or_else(|| Error::Precondition("edge strips need rational interval ends".into()))?;
    let w = match psi {
        Threshold::Zero => return Ok(EdgeStrips { inner: whole, strips: IntervalUnion::empty() }),
        Threshold::Infinite => return Ok(EdgeStrips { inner: IntervalUnion::empty(), strips: whole }),
        Threshold::Finite(r) => r * Rational::from_integer(4.into()),
        Threshold::Power(p) => p.enclosure(DEFAULT_BITS).hi.to_rational() * Rational::from_integer(4.into()),
    };
    let left = Interval::closed(a.clone(), (&a + &w).min(b.clone()))?;
    let right = Interval::closed((&b - &w).max(a.clone()), b.clone())?;
    let strips = IntervalUnion::from_intervals(vec![left, right])?.intersect_interval(i)?;
    let inner = whole.difference(&strips)?;
    Ok(EdgeStrips { inner, strips })
}

/// Roots `α` of `P` in `I` with `|P'(α)| >= 1/2`.
pub fn z_set(p: &IntPoly, i: &Interval) -> Result<RootList> {
    let dp = p.derivative();
    // 4 P'^2 - 1 >= 0
    let test = &(&dp * &dp).scale(&BigInt::from(4)) - &IntPoly::constant(BigInt::one());
    let mut out = RootList::default();
    for r in isolate_roots(p, i)?.roots {
        if r.point.sign_of(&test)? != Sign::Minus {
            out.roots.push(r);
        }
    }
    Ok(out)
}

/// Enclosure of `2Ψ / |P'(α)|` with width at most about `2^-bits`.
pub(crate) fn alpha_radius(p: &IntPoly, alpha: &Endpoint, psi: &Threshold, bits: u32) -> Result<DyadicEnclosure> {
    let dp = p.derivative();
    if alpha.sign_of(&dp)? == Sign::NoSign {
        return Err(Error::Precondition(format!("P'(α) = 0 for {p} at {alpha}")));
    }
    let psi = psi
        .enclosure(bits + 4)
        .ok_or_else(|| Error::Precondition("σ(P;α) needs finite Ψ".into()))?;
    let mut b = bits;
    loop {
        let d = alpha.eval_enclosure(&dp, &eval_tol(b))?.abs();
        if d.lo.is_positive() {
            let two = Rational::from_integer(2.into());
            let lo = &two * &psi.lo / &d.hi;
            let hi = &two * &psi.hi / &d.lo;
            return Ok(DyadicEnclosure::outward(&lo, &hi, bits));
        }
        if b >= MAX_BITS {
            return Err(Error::RefinementBudget { bits: b });
        }
        b *= 2;
    }
}

/// `σ(P;α) = {x in I : |x - α| < 2Ψ / |P'(α)|}` with the outer radius.
pub fn sigma_alpha(p: &IntPoly, alpha: &Endpoint, psi: &Threshold, i: &Interval) -> Result<IntervalUnion> {
    let r = alpha_radius(p, alpha, psi, DEFAULT_BITS)?;
    if r.hi.is_zero() {
        return Ok(IntervalUnion::empty());
    }
    IntervalUnion::from_interval(Interval::point(alpha.clone())).dilate(&r.hi, i)
}
