//! Real root isolation by Descartes bisection on the square-free part.
//!
//! Work happens on `q(x) = P(A + 2^e x)` over `[0, 1]`. A node
//! `[c, c + 1] / 2^k` carries the scaled polynomial `2^(kd) q((c + x) / 2^k)`
//! (up to a positive constant); its children are `2^d q(x / 2)` and that
//! polynomial shifted by one. The sign-variation count of
//! `(x + 1)^d q(1 / (x + 1))` bounds the roots in the open node, exactly
//! when it is 0 or 1.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::numkit::{sort_exact, AlgebraicEndpoint, Endpoint, Interval, Rational};
use crate::polynomials::IntPoly;

/// A real root together with the sign of the derivative there.
#[derive(Clone, Debug)]
pub struct Root {
    pub point: Endpoint,
    pub deriv_sign: Sign,
}

/// Distinct real roots in increasing order.
#[derive(Clone, Debug, Default)]
pub struct RootList {
    pub roots: Vec<Root>,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Endpoint> {
        self.roots.iter().map(|r| &r.point)
    }
}

/// All distinct real roots of `p` in `i`, each with the sign of `p'`.
pub fn isolate_roots(p: &IntPoly, i: &Interval) -> Result<RootList> {
    let dp = p.derivative();
    let roots = roots_in(p, i)?
        .into_iter()
        .map(|point| Ok(Root { deriv_sign: point.sign_of(&dp)?, point }))
        .collect::<Result<Vec<_>>>()?;
    Ok(RootList { roots })
}

/// Distinct real roots of `p` in `i`, increasing.
pub fn roots_in(p: &IntPoly, i: &Interval) -> Result<Vec<Endpoint>> {
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let lo = i.lo.enclosure(32).lo;
    let hi = i.hi.enclosure(32).hi;
    let a = lo.floor().to_integer();
    let span = (hi.ceil().to_integer() - &a).max(BigInt::one());
    let e = bits_ceil(&span);
    let mut out = Vec::new();
    for r in roots_in_bracket(p, &a, e) {
        if i.contains(&r)? {
            out.push(r);
        }
    }
    sort_exact(out, &|x: &Endpoint, y: &Endpoint| x.cmp_exact(y))
}

/// All distinct real roots of `p`, increasing.
pub fn real_roots(p: &IntPoly) -> Result<Vec<Endpoint>> {
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let q = p.square_free_part();
    // Cauchy bound 1 + max |a_i / a_n|
    let lead = q.leading().abs();
    let max = q.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    let bound = Integer::div_ceil(&max, &lead) + 1;
    let e = bits_ceil(&bound);
    let a = -(BigInt::one() << e as usize);
    let out = roots_in_bracket(&q, &a, e + 1);
    sort_exact(out, &|x: &Endpoint, y: &Endpoint| x.cmp_exact(y))
}

/// Smallest `e` with `2^e >= v` for `v >= 1`.
fn bits_ceil(v: &BigInt) -> u32 {
    let b = v.bits() as u32;
    if b > 0 && (BigInt::one() << (b - 1) as usize) == *v {
        b - 1
    } else {
        b
    }
}

/// Roots of `p` in `[a, a + 2^e]`, unordered.
fn roots_in_bracket(p: &IntPoly, a: &BigInt, e: u32) -> Vec<Endpoint> {
    let sqf = p.square_free_part();
    let d = sqf.degree().unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    let q0: Vec<BigInt> = sqf.taylor_shift(a).scale_var_pow2(e).coeffs().to_vec();
    let mut q0 = q0;
    q0.resize(d + 1, BigInt::zero());
    let frame = Frame { a: a.clone(), e, poly: sqf };
    let mut out = Vec::new();
    if q0[0].is_zero() {
        out.push(frame.exact(&BigInt::zero(), 0));
    }
    if q0.iter().sum::<BigInt>().is_zero() {
        out.push(frame.exact(&BigInt::one(), 0));
    }
    let mut stack = vec![(q0, BigInt::zero(), 0u32)];
    while let Some((q, c, k)) = stack.pop() {
        let v = descartes(&q);
        if v == 0 {
            continue;
        }
        if v == 1 && !q[0].is_zero() && !q.iter().sum::<BigInt>().is_zero() {
            out.push(frame.isolated(&c, k));
            continue;
        }
        let mut left = halve(&q);
        reduce(&mut left);
        let right = shift_one(&left);
        let c2 = &c << 1;
        if right[0].is_zero() {
            out.push(frame.exact(&(&c2 + 1), k + 1));
        }
        stack.push((right, &c2 + 1, k + 1));
        stack.push((left, c2, k + 1));
    }
    out
}

struct Frame {
    a: BigInt,
    e: u32,
    poly: IntPoly,
}

impl Frame {
    /// Numerator over `2^k` of the point `c / 2^k` of the unit frame.
    fn numer(&self, c: &BigInt, k: u32) -> BigInt {
        (&self.a << k as usize) + (c << self.e as usize)
    }

    fn exact(&self, c: &BigInt, k: u32) -> Endpoint {
        Endpoint::Rational(Rational::new(self.numer(c, k), BigInt::one() << k as usize))
    }

    fn isolated(&self, c: &BigInt, k: u32) -> Endpoint {
        if self.poly.degree() == Some(1) {
            return Endpoint::Rational(Rational::new(-self.poly.coeff(0), self.poly.leading()));
        }
        let lo = self.numer(c, k);
        let hi = self.numer(&(c + 1), k);
        let alg = AlgebraicEndpoint::new(self.poly.clone(), lo, hi, k)
            .expect("Descartes node with one sign change and nonzero ends isolates a root");
        Endpoint::Algebraic(alg)
    }
}

/// Sign variations of `(x + 1)^d q(1 / (x + 1))`, capped at 2.
fn descartes(q: &[BigInt]) -> u32 {
    let mut r: Vec<BigInt> = q.iter().rev().cloned().collect();
    let n = r.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = r[j + 1].clone();
            r[j] += t;
        }
    }
    let mut count = 0;
    let mut last = Sign::NoSign;
    for c in &r {
        let s = c.sign();
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
            if count >= 2 {
                return 2;
            }
        }
        last = s;
    }
    count
}

/// `2^d q(x / 2)`.
fn halve(q: &[BigInt]) -> Vec<BigInt> {
    let d = q.len() - 1;
    q.iter().enumerate().map(|(i, c)| c << (d - i)).collect()
}

/// `q(x + 1)`.
fn shift_one(q: &[BigInt]) -> Vec<BigInt> {
    let mut a = q.to_vec();
    let n = a.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
    a
}

fn reduce(q: &mut [BigInt]) {
    let g = q.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g > BigInt::one() {
        for c in q.iter_mut() {
            *c /= &g;
        }
    }
}

/// Sturm sequence of the square-free part of `p`.
pub fn sturm_sequence(p: &IntPoly) -> Vec<IntPoly> {
    let p0 = p.square_free_part();
    if p0.is_constant() {
        return vec![p0];
    }
    let mut seq = vec![p0.clone(), p0.derivative()];
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        // prem = lc(b)^(da - db + 1) * rem, so fix the sign afterwards
        let delta = a.degree().unwrap() - b.degree().unwrap() + 1;
        let mut r = a.pseudo_rem(b);
        if b.leading().is_negative() && delta % 2 == 1 {
            r = -&r;
        }
        if r.is_zero() {
            break;
        }
        let g = r.content();
        let r = IntPoly::new(r.coeffs().iter().map(|c| -(c / &g)).collect());
        let done = r.is_constant();
        seq.push(r);
        if done {
            break;
        }
    }
    seq
}

fn variations_at(seq: &[IntPoly], x: &Rational) -> usize {
    let signs: Vec<Sign> = seq.iter().map(|p| p.sign_at(x)).filter(|s| *s != Sign::NoSign).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in `(a, b]`.
pub fn sturm_count(p: &IntPoly, a: &Rational, b: &Rational) -> usize {
    if p.is_constant() {
        return 0;
    }
    let seq = sturm_sequence(p);
    variations_at(&seq, a) - variations_at(&seq, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_on_unit_bracket() {
        let r = isolate_roots(&p(&[-2, 0, 1]), &Interval::closed_ratio((1, 1), (2, 1))).unwrap();
        assert_eq!(r.len(), 1);
        let v = r.roots[0].point.to_f64();
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.roots[0].deriv_sign, Sign::Plus);
    }

    #[test]
    fn no_real_roots() {
        let r = isolate_roots(&p(&[1, 0, 1]), &Interval::closed_ratio((-10, 1), (10, 1))).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn repeated_roots_reduce_to_distinct() {
        // (x - 1)^2 (x - 2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-2, 1]);
        let r = isolate_roots(&f, &Interval::closed_ratio((0, 1), (3, 1))).unwrap();
        let vals: Vec<Option<Rational>> = r.points().map(|e| e.as_rational()).collect();
        assert_eq!(vals, vec![Some(q(1, 1)), Some(q(2, 1))]);
        assert_eq!(r.roots[0].deriv_sign, Sign::NoSign);
        assert_eq!(r.roots[1].deriv_sign, Sign::Plus);
    }

    #[test]
    fn close_roots_and_negative_brackets() {
        // (x - 1/2)(x - 1/2 - 2^-20) and a root at -3/4
        let f = &(&p(&[-1, 2]) * &p(&[-(1 << 20) - 2, 1 << 21])) * &p(&[3, 4]);
        let all = real_roots(&f).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(all[0].as_rational(), Some(q(-3, 4)));
        assert_eq!(all[1].as_rational(), Some(q(1, 2)));
        let r = roots_in(&f, &Interval::closed_ratio((-1, 1), (0, 1))).unwrap();
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn interval_ends_are_included_exactly() {
        let f = p(&[-1, 0, 1]);
        let closed = roots_in(&f, &Interval::closed_ratio((1, 1), (2, 1))).unwrap();
        assert_eq!(closed.len(), 1);
        let open = roots_in(&f, &Interval::open(q(1, 1), q(2, 1)).unwrap()).unwrap();
        assert!(open.is_empty());
    }

    #[test]
    fn sturm_matches_descartes() {
        let f = p(&[-6, 11, -6, 1]); // roots 1, 2, 3
        assert_eq!(sturm_count(&f, &q(0, 1), &q(4, 1)), 3);
        assert_eq!(sturm_count(&f, &q(1, 1), &q(3, 1)), 2);
        let g = p(&[1, -3, 0, 1]); // three irrational roots
        assert_eq!(sturm_count(&g, &q(-10, 1), &q(10, 1)), real_roots(&g).unwrap().len());
    }
}
