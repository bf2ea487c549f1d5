use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::{Dyadic, DyadicEnclosure, RatInterval, Rational};
use crate::error::{Error, Result};

/// `coeff * base^exp` with a positive rational `coeff`, a positive integer
/// `base` and a rational `exp`.
///
/// Comparisons `|x| < θ` clear to `|x|^q < coeff^q * base^p` where
/// `exp = p/q`, so they stay exact for rational and polynomial `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerThreshold {
    coeff: Rational,
    base: BigInt,
    exp: Rational,
}

impl PowerThreshold {
    pub fn new(coeff: Rational, base: BigInt, exp: Rational) -> Result<Self> {
        if !coeff.is_positive() || !base.is_positive() {
            return Err(Error::InvalidConfig(format!(
                "power threshold needs positive coefficient and base, got {coeff} * {base}^{exp}"
            )));
        }
        Ok(PowerThreshold { coeff, base, exp })
    }

    /// `base^exp`.
    pub fn pow(base: u64, exp: Rational) -> Self {
        Self::new(Rational::one(), base.into(), exp).expect("positive base")
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    pub fn exponent(&self) -> &Rational {
        &self.exp
    }

    /// Root index `q` of the exponent.
    pub fn root_index(&self) -> u32 {
        self.exp.denom().to_u32().expect("exponent denominator fits u32")
    }

    /// `(q, T)` with `|x| < θ` iff `|x|^q < T`.
    pub fn cleared(&self) -> (u32, Rational) {
        let q = self.root_index();
        let p = self.exp.numer();
        let hp = rational_pow_int(&Rational::from_integer(self.base.clone()), p);
        (q, num_traits::pow(self.coeff.clone(), q as usize) * hp)
    }

    /// The exact value when `base^exp` is rational.
    pub fn exact(&self) -> Option<Rational> {
        let q = self.root_index();
        let p = self.exp.numer();
        let a = num_traits::pow(self.base.clone(), p.abs().to_usize()?);
        let r = a.nth_root(q);
        if num_traits::pow(r.clone(), q as usize) != a {
            return None;
        }
        let v = if p.is_negative() { Rational::new(BigInt::one(), r) } else { Rational::from_integer(r) };
        Some(&self.coeff * v)
    }

    fn rat_enclosure_at(&self, b: u32) -> RatInterval {
        if let Some(v) = self.exact() {
            return RatInterval::point(v);
        }
        let q = self.root_index();
        let p = self.exp.numer();
        let a = num_traits::pow(self.base.clone(), p.abs().to_usize().expect("exponent fits"));
        let f = (a << (b as usize * q as usize)).nth_root(q);
        let den = BigInt::one() << b as usize;
        let lo = Rational::new(f.clone(), den.clone());
        let hi = Rational::new(f + 1, den);
        let root = if p.is_negative() {
            RatInterval::new(hi.recip(), lo.recip())
        } else {
            RatInterval::new(lo, hi)
        };
        root.scale(&self.coeff)
    }

    /// Dyadic enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> DyadicEnclosure {
        if let Some(v) = self.exact() {
            if let Some(d) = exact_dyadic(&v) {
                return DyadicEnclosure::exact(d);
            }
        }
        let target = Rational::new(BigInt::one(), BigInt::one() << (bits as usize + 1));
        let mut b = bits + 8;
        loop {
            let r = self.rat_enclosure_at(b);
            if r.width() <= target {
                return r.to_enclosure(bits + 2);
            }
            b += b / 2 + 8;
        }
    }

    /// Exact order of `θ` against `r`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if !r.is_positive() {
            return Ordering::Greater;
        }
        let (q, t) = self.cleared();
        t.cmp(&num_traits::pow(r.clone(), q as usize))
    }

    pub fn to_f64(&self) -> f64 {
        let e = self.enclosure(60);
        e.midpoint_f64()
    }
}

/// `x^e` for an integer exponent of either sign.
pub(crate) fn rational_pow_int(x: &Rational, e: &BigInt) -> Rational {
    let n = e.abs().to_usize().expect("exponent fits usize");
    let v = num_traits::pow(x.clone(), n);
    if e.is_negative() { v.recip() } else { v }
}

fn exact_dyadic(v: &Rational) -> Option<Dyadic> {
    let d = v.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    if (d >> tz as usize).is_one() {
        Some(Dyadic::from_scaled(v.numer().clone(), tz as u32))
    } else {
        None
    }
}

impl fmt::Display for PowerThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.coeff.is_one() {
            write!(f, "{}*", self.coeff)?;
        }
        write!(f, "{}^({})", self.base, self.exp)
    }
}

/// Right-hand side of a comparison `|P(x)| < θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Zero,
    Finite(Rational),
    Power(PowerThreshold),
    Infinite,
}

impl Threshold {
    pub fn rational(r: Rational) -> Self {
        Threshold::Finite(r).simplified()
    }

    pub fn power(t: PowerThreshold) -> Self {
        Threshold::Power(t).simplified()
    }

    /// Rewrites rational powers as `Finite` and nonpositive values as `Zero`.
    pub fn simplified(self) -> Self {
        match self {
            Threshold::Finite(r) if !r.is_positive() => Threshold::Zero,
            Threshold::Power(p) => match p.exact() {
                Some(v) => Threshold::Finite(v),
                None => Threshold::Power(p),
            },
            t => t,
        }
    }

    /// Exact order of the two thresholds.
    pub fn cmp_exact(&self, other: &Threshold) -> Ordering {
        use Threshold::*;
        let rank = |t: &Threshold| match t {
            Zero => 0,
            Finite(_) | Power(_) => 1,
            Infinite => 2,
        };
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Power(a), Finite(b)) => a.cmp_rational(b),
            (Finite(a), Power(b)) => b.cmp_rational(a).reverse(),
            (Power(a), Power(b)) => {
                let (qa, ta) = a.cleared();
                let (qb, tb) = b.cleared();
                let l = qa.lcm(&qb);
                let ea = num_traits::pow(ta, (l / qa) as usize);
                let eb = num_traits::pow(tb, (l / qb) as usize);
                ea.cmp(&eb)
            }
            _ => rank(self).cmp(&rank(other)),
        }
    }

    /// Rational enclosure of width at most `2^-bits`; `None` for `Infinite`.
    pub fn enclosure(&self, bits: u32) -> Option<RatInterval> {
        match self {
            Threshold::Zero => Some(RatInterval::point(Rational::from_integer(0.into()))),
            Threshold::Finite(r) => Some(RatInterval::point(r.clone())),
            Threshold::Power(p) => {
                let e = p.enclosure(bits);
                Some(RatInterval::new(e.lo.to_rational(), e.hi.to_rational()))
            }
            Threshold::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Threshold::Zero => 0.0,
            Threshold::Finite(r) => super::rational_to_f64(r),
            Threshold::Power(p) => p.to_f64(),
            Threshold::Infinite => f64::INFINITY,
        }
    }

    /// Upper bound usable for conservative floating-point filtering.
    pub fn upper_f64(&self) -> f64 {
        match self {
            Threshold::Power(p) => p.enclosure(60).hi.to_f64() * (1.0 + 1e-12),
            t => t.to_f64() * (1.0 + 1e-12),
        }
    }

    /// Lower bound usable for conservative floating-point filtering.
    pub fn lower_f64(&self) -> f64 {
        match self {
            Threshold::Power(p) => p.enclosure(60).lo.to_f64() * (1.0 - 1e-12),
            t => t.to_f64() * (1.0 - 1e-12),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Zero => write!(f, "0"),
            Threshold::Finite(r) => write!(f, "{r}"),
            Threshold::Power(p) => write!(f, "{p}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exact_powers() {
        let t = PowerThreshold::pow(1024, q(-4, 5));
        assert_eq!(t.exact(), Some(q(1, 256)));
        assert!(t.enclosure(64).is_exact());
        assert_eq!(PowerThreshold::pow(4, q(-1, 2)).exact(), Some(q(1, 2)));
        assert_eq!(PowerThreshold::pow(2, q(-1, 10)).exact(), None);
    }

    #[test]
    fn irrational_enclosure() {
        let t = PowerThreshold::pow(2, q(-1, 10));
        let e = t.enclosure(40);
        assert!(e.width().to_rational() <= q(1, 1 << 40));
        let v = 2f64.powf(-0.1);
        assert!(e.lo.to_f64() <= v && v <= e.hi.to_f64());
        assert_eq!(t.cleared(), (10, q(1, 2)));
        assert_eq!(t.cmp_rational(&q(93, 100)), Ordering::Greater);
        assert_eq!(t.cmp_rational(&q(94, 100)), Ordering::Less);
    }

    #[test]
    fn threshold_order() {
        let a = Threshold::power(PowerThreshold::pow(8, q(-1, 10)));
        let b = Threshold::rational(q(1, 1));
        assert_eq!(a.cmp_exact(&b), Ordering::Less);
        assert_eq!(Threshold::Zero.cmp_exact(&a), Ordering::Less);
        assert_eq!(Threshold::Infinite.cmp_exact(&b), Ordering::Greater);
        let c = Threshold::power(PowerThreshold::pow(2, q(-3, 10)));
        assert_eq!(a.cmp_exact(&c), Ordering::Equal);
    }
}
