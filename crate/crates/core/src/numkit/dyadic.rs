use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::Rational;

/// `mant * 2^exp`, normalized so that `mant` is odd (or the value is zero
/// with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// `num / 2^k`.
    pub fn from_scaled(num: BigInt, k: u32) -> Self {
        Self::new(num, -(k as i64))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// `floor(r * 2^bits) / 2^bits`.
    pub fn floor_of(r: &Rational, bits: u32) -> Self {
        let scaled = r.numer() << bits as usize;
        Self::from_scaled(scaled.div_floor(r.denom()), bits)
    }

    /// `ceil(r * 2^bits) / 2^bits`.
    pub fn ceil_of(r: &Rational, bits: u32) -> Self {
        let scaled = r.numer() << bits as usize;
        Self::from_scaled(num_integer::Integer::div_ceil(&scaled, r.denom()), bits)
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let bits = self.mant.bits() as i64;
        // keep the mantissa within f64 range before scaling
        let drop = (bits - 60).max(0);
        let m = (&self.mant >> drop as usize).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + drop;
        m * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.mant << (self.exp - e) as usize,
            &other.mant << (other.exp - e) as usize,
            e,
        )
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Closed dyadic interval `[lo, hi]` certified to contain some real quantity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct DyadicEnclosure {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicEnclosure {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        DyadicEnclosure { lo, hi }
    }

    pub fn exact(v: Dyadic) -> Self {
        DyadicEnclosure { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    /// Outward rounding of a rational interval to `bits` fractional bits.
    pub fn outward(lo: &Rational, hi: &Rational, bits: u32) -> Self {
        Self::new(Dyadic::floor_of(lo, bits), Dyadic::ceil_of(hi, bits))
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        Self::outward(r, r, bits)
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn add(&self, other: &DyadicEnclosure) -> DyadicEnclosure {
        DyadicEnclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }
}

impl fmt::Display for DyadicEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Closed rational interval used for certification arithmetic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = (-&self.lo).max(self.hi.clone());
            RatInterval::new(Rational::zero(), m)
        } else if self.hi.is_positive() || self.hi.is_zero() && !self.lo.is_negative() {
            self.clone()
        } else {
            RatInterval::new(-&self.hi, -&self.lo)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        RatInterval::new(
            p.iter().min().unwrap().clone(),
            p.iter().max().unwrap().clone(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul(&RatInterval::point(c.clone()))
    }

    /// Reciprocal of an interval not containing zero.
    pub fn recip(&self) -> Option<Self> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(RatInterval::new(self.hi.recip(), self.lo.recip()))
        } else {
            None
        }
    }

    pub fn to_enclosure(&self, bits: u32) -> DyadicEnclosure {
        DyadicEnclosure::outward(&self.lo, &self.hi, bits)
    }
}
