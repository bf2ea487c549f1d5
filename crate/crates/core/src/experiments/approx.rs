use std::fmt;

use num_bigint::Sign;
use num_traits::{Signed, Zero};

use super::parallel::RunOptions;
use crate::error::{Error, Result};
use crate::numkit::{rational_to_f64, AlgebraicEndpoint, Endpoint, RatInterval, Rational, DEFAULT_BITS, MAX_BITS};
use crate::polynomials::{lex_cmp, IntPoly};

/// A point to approximate.
#[derive(Clone, Debug)]
pub enum Target {
    Rational(Rational),
    Algebraic(AlgebraicEndpoint),
    /// Known only to lie in `[value - radius, value + radius]`.
    Decimal { value: Rational, radius: Rational },
}

impl Target {
    /// A decimal literal such as `1.2599210498948732`, accurate to half a
    /// unit in its last digit.
    pub fn decimal(s: &str) -> Result<Self> {
        let value = crate::numkit::parse_rational(s)
            .ok_or_else(|| Error::InvalidConfig(format!("malformed decimal '{s}'")))?;
        let mant = s.split(['e', 'E']).next().unwrap_or(s);
        let digits = mant.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
        let exp: i32 = s.split_once(['e', 'E']).map_or(Ok(0), |(_, e)| e.parse()).map_err(|_| {
            Error::InvalidConfig(format!("malformed exponent in '{s}'"))
        })?;
        let ten = Rational::from_integer(10.into());
        let radius = ten.pow(exp - digits) / Rational::from_integer(2.into());
        Ok(Target::Decimal { value, radius })
    }

    fn to_f64(&self) -> f64 {
        match self {
            Target::Rational(r) => rational_to_f64(r),
            Target::Algebraic(a) => a.to_f64(),
            Target::Decimal { value, .. } => rational_to_f64(value),
        }
    }

    /// Enclosure of `|P(x)|`.
    fn abs_value(&self, p: &IntPoly, bits: u32) -> Result<RatInterval> {
        Ok(match self {
            Target::Rational(r) => RatInterval::point(p.eval(r).abs()),
            Target::Algebraic(a) => {
                if a.sign_of(p)? == Sign::NoSign {
                    RatInterval::point(Rational::zero())
                } else {
                    Endpoint::Algebraic(a.clone()).eval_enclosure(p, &&tol_bits(bits))?.abs()
                }
            }
            Target::Decimal { value, radius } => {
                let (lo, hi) = p.eval_range(&(value - radius), &(value + radius));
                RatInterval::new(lo, hi).abs()
            }
        })
    }

    /// Whether `|P(x)| = |Q(x)|` is known exactly.
    fn equal_abs(&self, p: &IntPoly, q: &IntPoly) -> Result<bool> {
        Ok(match self {
            Target::Rational(r) => p.eval(r).abs() == q.eval(r).abs(),
            Target::Algebraic(a) => a.sign_of(&(p - q))? == Sign::NoSign || a.sign_of(&(p + q))? == Sign::NoSign,
            Target::Decimal { .. } => false,
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Rational(r) => write!(f, "{r}"),
            Target::Algebraic(a) => write!(f, "root of {} near {:.12}", a.poly(), a.to_f64()),
            Target::Decimal { value, radius } => write!(f, "{value} +- {radius}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxRecord {
    pub target: String,
    pub n: usize,
    pub h: u64,
    /// Enclosure of `min |P(x)|`.
    pub best: RatInterval,
    pub argmin: IntPoly,
}

impl ApproxRecord {
    /// `-log |P(x)| / log H`, the exponent realised at this height.
    pub fn exponent(&self) -> Option<f64> {
        let v = rational_to_f64(&self.best.hi);
        (v > 0.0 && self.h > 1).then(|| -v.ln() / (self.h as f64).ln())
    }
}

fn horner(c: &[i64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
}

/// Minimum of `|P(x)|` over nonzero `P` of degree at most `n` and height
/// at most `H`. `P` and `-P` are the same candidate; for each choice of
/// `a_n..a_1` only the constant terms nearest to `-(a_n x^n + ... + a_1 x)`
/// can be optimal.
pub fn best_approx(x: &Target, n: usize, h: u64, opts: &RunOptions) -> Result<ApproxRecord> {
    if n == 0 || h == 0 {
        return Err(Error::InvalidConfig("best approximation needs n >= 1 and H >= 1".into()));
    }
    let hi = h as i64;
    let prefixes = (2 * h as u128 + 1).pow(n as u32);
    opts.check_budget(&format!("prefixes of height <= {h}"), prefixes)?;
    let xf = x.to_f64();
    let scale = (0..=n).map(|i| xf.abs().powi(i as i32)).sum::<f64>() * h as f64;
    let margin = 1e-12 * scale + 1e-300;

    let mut cands: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut best = f64::INFINITY;
    let mut c = vec![0i64; n + 1];
    for idx in 0..prefixes {
        let mut r = idx;
        for j in 1..=n {
            c[j] = (r % (2 * h as u128 + 1)) as i64 - hi;
            r /= 2 * h as u128 + 1;
        }
        // first nonzero of a_n..a_1 positive, or all zero
        match c[1..].iter().rev().find(|a| **a != 0) {
            Some(a) if *a < 0 => continue,
            _ => {}
        }
        let prefix_zero = c[1..].iter().all(|a| *a == 0);
        c[0] = 0;
        let t = horner(&c, xf);
        let mid = (-t).round().clamp(-hi as f64, hi as f64) as i64;
        for a0 in [mid - 1, mid, mid + 1] {
            if a0.abs() > hi || (prefix_zero && a0 <= 0) {
                continue;
            }
            c[0] = a0;
            let v = horner(&c, xf).abs();
            if v <= best + margin {
                best = best.min(v);
                cands.push((v, c.clone()));
            }
        }
    }
    let mut polys: Vec<IntPoly> =
        cands.into_iter().filter(|(v, _)| *v <= best + margin).map(|(_, c)| IntPoly::from_i64s(&c)).collect();
    // smallest height first, then lexicographic, for exact ties
    polys.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| lex_cmp(a, b, n)));
    polys.dedup();

    let mut bits = DEFAULT_BITS;
    loop {
        let vals: Vec<RatInterval> = polys.iter().map(|p| x.abs_value(p, bits)).collect::<Result<_>>()?;
        let mut winner = 0;
        for i in 1..polys.len() {
            if vals[i].hi < vals[winner].hi {
                winner = i;
            }
        }
        let mut decided = true;
        for i in 0..polys.len() {
            if i == winner || vals[winner].hi < vals[i].lo {
                continue;
            }
            let tied = x.equal_abs(&polys[i], &polys[winner])?;
            // an earlier candidate with an equal value wins the tie
            if tied && i < winner {
                winner = i;
            } else if !tied {
                decided = false;
            }
        }
        if decided {
            return Ok(ApproxRecord {
                target: x.to_string(),
                n,
                h,
                best: vals[winner].clone(),
                argmin: polys[winner].clone(),
            });
        }
        if let Target::Decimal { .. } = x {
            return Err(Error::InsufficientPrecision(format!(
                "{x} does not separate {} from the other candidates at H = {h}; give more digits",
                polys[winner]
            )));
        }
        if bits >= MAX_BITS {
            return Err(Error::RefinementBudget { bits });
        }
        bits *= 2;
    }
}

/// [`best_approx`] for several heights.
pub fn wn_table(x: &Target, n: usize, hs: &[u64], opts: &RunOptions) -> Result<Vec<ApproxRecord>> {
    hs.iter().map(|&h| best_approx(x, n, h, opts)).collect()
}


fn tol_bits(bits: u32) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1) << bits as usize)
}
