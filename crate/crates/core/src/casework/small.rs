//! The small-derivative blocks `τ_m`.


use super::sigma::float_hull;
use super::CaseConfig;
use crate::error::{Error, Result};
use crate::numkit::{IntervalUnion, Rational, Threshold};
use crate::polynomials::{FamilySpec, IntPoly};
use crate::realroots::prefilter::{may_satisfy, AbsBand};
use crate::realroots::solve_threshold;

/// `min(δ, n-1) / ((n+1)(2n-1))`.
pub fn delta_prime(n: usize, delta: &Rational) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidConfig("δ' needs n >= 2".into()));
    }
    let nm1 = Rational::from_integer((n as i64 - 1).into());
    let m = if delta < &nm1 { delta.clone() } else { nm1 };
    Ok(m / Rational::from_integer((((n + 1) * (2 * n - 1)) as i64).into()))
}

/// Heights `2^(m-1) < H <= 2^m`.
pub fn block_heights(m: u32) -> Result<std::ops::RangeInclusive<u64>> {
    if m == 0 || m > 40 {
        return Err(Error::InvalidConfig(format!("block index m = {m} outside 1..=40")));
    }
    Ok((1u64 << (m - 1)) + 1..=(1u64 << m))
}

/// `{x in I : |P(x)| < H^(-n+1), |P'(x)| < H^-δ}`.
pub fn tau_poly_set(p: &IntPoly, cfg: &CaseConfig, h: u64) -> Result<IntervalUnion> {
    let t0 = Threshold::rational(
        Rational::from_integer(h.into()).pow(-(cfg.n as i32 - 1)),
    );
    let t1 = cfg.h_pow_neg_delta(h);
    let dp = p.derivative();
    let (a, b) = float_hull(&cfg.interval);
    let bands = [
        AbsBand::new(p.to_f64_coeffs(), 0.0, t0.upper_f64()),
        AbsBand::new(dp.to_f64_coeffs(), 0.0, t1.upper_f64()),
    ];
    if !may_satisfy(&bands, a, b, 10) {
        return Ok(IntervalUnion::empty());
    }
    let s = solve_threshold(p, &t0, &cfg.interval)?;
    if s.is_empty() {
        return Ok(s);
    }
    s.intersect(&solve_threshold(&dp, &t1, &cfg.interval)?)
}

/// `τ_m`, serially; see the experiments module for the parallel version.
pub fn tau_set(m: u32, cfg: &CaseConfig) -> Result<IntervalUnion> {
    let mut parts = Vec::new();
    for h in block_heights(m)? {
        for c in FamilySpec::full(cfg.n, h).iter() {
            parts.extend(tau_poly_set(&IntPoly::from_i64s(&c), cfg, h)?.into_parts());
        }
    }
    IntervalUnion::from_intervals(parts)
}
