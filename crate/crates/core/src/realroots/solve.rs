//! Exact solution sets of `|P(x)| < θ`, `|P(x)| <= θ` and bands
//! `lo <= |P(x)| < hi` on an interval.

use std::cmp::Ordering;

use num_bigint::Sign;
use num_traits::{Signed, Zero};

use super::isolate::roots_in;
use crate::error::{Error, Result};
use crate::numkit::{sort_exact, DyadicEnclosure, Endpoint, Interval, IntervalUnion, RatInterval, Rational, Threshold};
use crate::polynomials::IntPoly;

/// Cleared degrees above this are refused.
pub const MAX_CLEARED_DEGREE: usize = 64;

/// `|q(x)| < u / v` as the pair of sign conditions `A < 0 < B` with
/// `A = v q - u`, `B = v q + u`.
struct Cleared {
    a: IntPoly,
    b: IntPoly,
}

impl Cleared {
    fn new(q: &IntPoly, t: &Rational) -> Self {
        let vq = q.scale(t.denom());
        let u = IntPoly::constant(t.numer().clone());
        Cleared { a: &vq - &u, b: &vq + &u }
    }

    fn inside_at(&self, x: &Endpoint) -> Result<bool> {
        Ok(x.sign_of(&self.a)? == Sign::Minus && x.sign_of(&self.b)? == Sign::Plus)
    }
}

/// Reduces `|P| < θ` to `|Q| < T` with rational `T > 0`.
fn clear(p: &IntPoly, theta: &Threshold) -> Result<Option<(IntPoly, Rational)>> {
    Ok(match theta {
        Threshold::Finite(t) => Some((p.clone(), t.clone())),
        Threshold::Power(pt) => {
            let (q, t) = pt.cleared();
            let deg = p.degree().unwrap_or(0) * q as usize;
            if deg > MAX_CLEARED_DEGREE {
                return Err(Error::IncomparableThreshold(format!(
                    "clearing |{p}| against {pt} needs degree {deg} > {MAX_CLEARED_DEGREE}"
                )));
            }
            Some((p.pow(q), t))
        }
        Threshold::Zero | Threshold::Infinite => None,
    })
}

/// `{x in I : |P(x)| < θ}` (strict) or `{x in I : |P(x)| <= θ}`.
pub fn solve_abs_cmp(p: &IntPoly, theta: &Threshold, strict: bool, i: &Interval) -> Result<IntervalUnion> {
    let whole = || IntervalUnion::from_interval(i.clone());
    match theta {
        Threshold::Infinite => return Ok(whole()),
        Threshold::Zero => {
            if strict {
                return Ok(IntervalUnion::empty());
            }
            if p.is_zero() {
                return Ok(whole());
            }
            let pts = roots_in(p, i)?.into_iter().map(Interval::point).collect();
            return IntervalUnion::from_intervals(pts);
        }
        _ => {}
    }
    let theta = theta.clone().simplified();
    let Some((q, t)) = clear(p, &theta)? else {
        return solve_abs_cmp(p, &theta, strict, i);
    };
    if q.is_constant() {
        let c = Rational::from_integer(q.coeff(0).abs());
        let inside = match c.cmp(&t) {
            Ordering::Less => true,
            Ordering::Equal => !strict,
            Ordering::Greater => false,
        };
        return Ok(if inside { whole() } else { IntervalUnion::empty() });
    }
    let cl = Cleared::new(&q, &t);

    // breakpoints: roots of A and B inside I, then the ends of I
    let mut pts: Vec<(Endpoint, bool)> = Vec::new();
    for r in roots_in(&cl.a, i)?.into_iter().chain(roots_in(&cl.b, i)?) {
        pts.push((r, true));
    }
    pts.push((i.lo.clone(), false));
    pts.push((i.hi.clone(), false));
    let sorted = sort_exact(pts, &|x: &(Endpoint, bool), y: &(Endpoint, bool)| x.0.cmp_exact(&y.0))?;
    let mut pts: Vec<(Endpoint, bool)> = Vec::with_capacity(sorted.len());
    for (x, is_root) in sorted {
        match pts.last_mut() {
            Some(last) if last.0.cmp_exact(&x)? == Ordering::Equal => last.1 |= is_root,
            _ => pts.push((x, is_root)),
        }
    }

    let mut point_in = Vec::with_capacity(pts.len());
    for (idx, (x, is_root)) in pts.iter().enumerate() {
        let in_i = (idx > 0 || i.lo_closed) && (idx + 1 < pts.len() || i.hi_closed);
        let inside = if *is_root { !strict } else { cl.inside_at(x)? };
        point_in.push(in_i && inside);
    }
    let mut parts = Vec::new();
    for w in 0..pts.len().saturating_sub(1) {
        let (x, y) = (&pts[w].0, &pts[w + 1].0);
        let mid = Endpoint::Rational(x.rational_between(y)?);
        if cl.inside_at(&mid)? {
            parts.push(Interval::new(x.clone(), y.clone(), point_in[w], point_in[w + 1])?);
        }
    }
    for (idx, (x, _)) in pts.iter().enumerate() {
        if point_in[idx] {
            parts.push(Interval::point(x.clone()));
        }
    }
    IntervalUnion::from_intervals(parts)
}

/// `{x in I : |P(x)| < θ}`.
pub fn solve_abs_lt(p: &IntPoly, theta: &Rational, i: &Interval) -> Result<IntervalUnion> {
    solve_abs_cmp(p, &Threshold::rational(theta.clone()), true, i)
}

/// `{x in I : |P(x)| < θ}` for any threshold.
pub fn solve_threshold(p: &IntPoly, theta: &Threshold, i: &Interval) -> Result<IntervalUnion> {
    solve_abs_cmp(p, theta, true, i)
}

/// `{x in I : lo <= |P(x)| < hi}`.
pub fn solve_band(p: &IntPoly, lo: &Threshold, hi: &Threshold, i: &Interval) -> Result<IntervalUnion> {
    if lo.cmp_exact(hi) != Ordering::Less {
        return Ok(IntervalUnion::empty());
    }
    let upper = solve_abs_cmp(p, hi, true, i)?;
    if upper.is_empty() || matches!(lo, Threshold::Zero) {
        return Ok(upper);
    }
    let below = solve_abs_cmp(p, lo, true, i)?;
    upper.difference(&below)
}

/// Minimum of `|P|` over an interval.
#[derive(Clone, Debug)]
pub struct MinAbs {
    /// Enclosure of `min |P|` over the closure of `J`.
    pub value: RatInterval,
    /// A point of the closure of `J` where `|P|` is at most `value.hi`.
    pub witness: Endpoint,
}

impl MinAbs {
    pub fn enclosure(&self, bits: u32) -> DyadicEnclosure {
        self.value.to_enclosure(bits)
    }
}

/// `min |P|` over the closure of `J`, attained at an end of `J`, a root of
/// `P` or a root of `P'`.
pub fn min_abs_on(p: &IntPoly, j: &Interval, tol: &Rational) -> Result<MinAbs> {
    let closure = Interval::new(j.lo.clone(), j.hi.clone(), true, true)?;
    if let Some(r) = roots_in(p, &closure)?.into_iter().next() {
        return Ok(MinAbs { value: RatInterval::point(Rational::zero()), witness: r });
    }
    let mut candidates = vec![j.lo.clone(), j.hi.clone()];
    candidates.extend(roots_in(&p.derivative(), &closure)?);
    let mut best: Option<(RatInterval, Endpoint)> = None;
    let mut lo_min: Option<Rational> = None;
    for c in candidates {
        let v = c.eval_enclosure(p, tol)?.abs();
        lo_min = Some(match lo_min {
            Some(m) if m <= v.lo => m,
            _ => v.lo.clone(),
        });
        if best.as_ref().map_or(true, |(b, _)| v.hi < b.hi) {
            best = Some((v, c));
        }
    }
    let (b, witness) = best.expect("interval has two ends");
    Ok(MinAbs { value: RatInterval::new(lo_min.unwrap(), b.hi), witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::PowerThreshold;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn tol() -> Rational {
        q(1, 1_000_000_000)
    }

    #[test]
    fn linear_and_empty() {
        let s = solve_abs_lt(&p(&[0, 1]), &q(1, 10), &Interval::closed_ratio((-1, 1), (1, 1))).unwrap();
        assert_eq!(s.len(), 1);
        assert!(!s.parts()[0].lo_closed && !s.parts()[0].hi_closed);
        assert_eq!(s.measure(&tol()).unwrap().exact, Some(q(1, 5)));
        let e = solve_abs_lt(&p(&[1, 0, 1]), &q(1, 2), &Interval::closed_ratio((-1, 1), (1, 1))).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn quadratic_band_around_sqrt2() {
        let s = solve_abs_lt(&p(&[-2, 0, 1]), &q(1, 10), &Interval::closed_ratio((1, 1), (2, 1))).unwrap();
        assert_eq!(s.len(), 1);
        let m = s.measure(&tol()).unwrap();
        let expect = 2.1f64.sqrt() - 1.9f64.sqrt();
        assert!((m.mid_f64() - expect).abs() < 1e-9);
        assert!(m.enclosure.width().to_rational() <= tol());
    }

    #[test]
    fn non_strict_keeps_boundary() {
        let s = solve_abs_cmp(&p(&[0, 1]), &Threshold::rational(q(1, 2)), false, &Interval::closed_ratio((0, 1), (2, 1)))
            .unwrap();
        assert!(s.parts()[0].hi_closed);
        assert!(s.contains(&Endpoint::ratio(1, 2)).unwrap());
        let z = solve_abs_cmp(&p(&[-1, 0, 1]), &Threshold::Zero, false, &Interval::closed_ratio((-2, 1), (2, 1))).unwrap();
        assert_eq!(z.len(), 2);
    }

    #[test]
    fn band_examples() {
        let two_x = p(&[0, 2]);
        let i12 = Interval::closed_ratio((1, 1), (2, 1));
        let one = Threshold::rational(q(1, 1));
        assert!(solve_band(&two_x, &Threshold::Zero, &one, &i12).unwrap().is_empty());
        let all = solve_band(&two_x, &one, &Threshold::Infinite, &i12).unwrap();
        assert_eq!(all.measure(&tol()).unwrap().exact, Some(q(1, 1)));
        assert!(all.parts()[0].lo_closed && all.parts()[0].hi_closed);
        // 4^(-1/2) <= |x| < 1 on [0, 2]
        let lo = Threshold::power(PowerThreshold::pow(4, q(-1, 2)));
        let s = solve_band(&p(&[0, 1]), &lo, &one, &Interval::closed_ratio((0, 1), (2, 1))).unwrap();
        assert_eq!(s.len(), 1);
        let c = &s.parts()[0];
        assert_eq!(c.lo.as_rational(), Some(q(1, 2)));
        assert_eq!(c.hi.as_rational(), Some(q(1, 1)));
        assert!(c.lo_closed && !c.hi_closed);
    }

    #[test]
    fn irrational_power_threshold() {
        // |x| < 2^(-1/10) on [0, 1]  <=>  x^10 < 1/2
        let t = Threshold::power(PowerThreshold::pow(2, q(-1, 10)));
        let s = solve_threshold(&p(&[0, 1]), &t, &Interval::closed_ratio((0, 1), (1, 1))).unwrap();
        let m = s.measure(&tol()).unwrap();
        assert!((m.mid_f64() - 2f64.powf(-0.1)).abs() < 1e-9);
    }

    #[test]
    fn minimum_of_abs() {
        let i12 = Interval::closed_ratio((1, 1), (2, 1));
        let m = min_abs_on(&p(&[0, 2]), &i12, &tol()).unwrap();
        assert_eq!(m.value, RatInterval::point(q(2, 1)));
        assert_eq!(m.witness.as_rational(), Some(q(1, 1)));
        let m = min_abs_on(&p(&[-2, 0, 1]), &i12, &tol()).unwrap();
        assert_eq!(m.value.hi, Rational::zero());
        assert!((m.witness.to_f64() - 2f64.sqrt()).abs() < 1e-12);
        let m = min_abs_on(&p(&[-1, 0, 3]), &Interval::closed_ratio((0, 1), (1, 1)), &tol()).unwrap();
        assert_eq!(m.value.hi, Rational::zero());
        assert!((m.witness.to_f64() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        // interior critical point: |x^2 - 2x + 2| has min 1 at x = 1
        let m = min_abs_on(&p(&[2, -2, 1]), &Interval::closed_ratio((0, 1), (3, 1)), &tol()).unwrap();
        assert_eq!(m.value, RatInterval::point(q(1, 1)));
    }
}
