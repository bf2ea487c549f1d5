//! Essential and non-essential medium-case components within the
//! two-parameter families `R + a_m x^m + a_k x^k`.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use super::sigma::{eval_tol, may_be_nonempty, case_band, sigma1_radius, sigma_case_with, Gamma};
use super::{Case, CaseConfig};
use crate::error::{Error, Result};
use crate::numkit::{Direction, DyadicEnclosure, Endpoint, Interval, IntervalUnion, RatInterval, Rational, DEFAULT_BITS, MAX_BITS};
use crate::polynomials::{lex_cmp, FamilySpec, IntPoly};

/// One component of a medium-case set together with its `γ`.
#[derive(Clone, Debug)]
pub struct MediumComponent {
    pub coeffs: Vec<i64>,
    pub component: Interval,
    pub gamma: Gamma,
    /// Radius of `σ₁` at the default precision.
    pub r1: DyadicEnclosure,
    pub height: u64,
}

impl MediumComponent {
    pub fn poly(&self) -> IntPoly {
        IntPoly::from_i64s(&self.coeffs)
    }

    fn r1_at(&self, bits: u32) -> Result<DyadicEnclosure> {
        if bits <= DEFAULT_BITS {
            return Ok(self.r1.clone());
        }
        let dp = self.poly().derivative();
        let d = self.gamma.point.eval_enclosure(&dp, &eval_tol(bits))?.abs();
        sigma1_radius(self.height, &d, bits)
    }

    /// Outer `σ₁` of this component.
    pub fn sigma1(&self, clip: &Interval) -> Result<IntervalUnion> {
        IntervalUnion::from_interval(self.component.clone()).dilate_enclosure(&self.r1, Direction::Outer, clip)
    }
}

/// Medium-case components of `P` at height `H`.
pub fn medium_components(coeffs: &[i64], cfg: &CaseConfig, h: u64, psi: &crate::numkit::Threshold) -> Result<Vec<MediumComponent>> {
    let p = IntPoly::from_i64s(coeffs);
    if !may_be_nonempty(&p, psi, &case_band(cfg, Case::Medium, h), &cfg.interval) {
        return Ok(Vec::new());
    }
    let s = sigma_case_with(&p, cfg, Case::Medium, h, psi)?;
    s.set
        .parts()
        .iter()
        .zip(s.gammas)
        .map(|(c, g)| {
            let r1 = sigma1_radius(h, &g.deriv_abs, DEFAULT_BITS)?;
            Ok(MediumComponent { coeffs: coeffs.to_vec(), component: c.clone(), gamma: g, r1, height: h })
        })
        .collect()
}

/// Whether the open dilations of two components intersect.
pub fn sigma1_overlap(a: &MediumComponent, b: &MediumComponent) -> Result<bool> {
    let (first, second) = if a.component.lo.cmp_exact(&b.component.lo)? == Ordering::Greater { (b, a) } else { (a, b) };
    if second.component.lo.cmp_exact(&first.component.hi)? != Ordering::Greater {
        return Ok(true);
    }
    // cheap rejection with a margin far above float error
    let gap_f = second.component.lo.to_f64() - first.component.hi.to_f64();
    let reach_f = first.r1.hi.to_f64() + second.r1.hi.to_f64();
    if gap_f > reach_f + 1e-9 * (1.0 + gap_f.abs()) {
        return Ok(false);
    }
    let mut bits = DEFAULT_BITS;
    loop {
        let gap = second.component.lo.enclosure(bits).sub(&first.component.hi.enclosure(bits));
        let (ra, rb) = (first.r1_at(bits)?, second.r1_at(bits)?);
        let reach = RatInterval::new(
            ra.lo.to_rational() + rb.lo.to_rational(),
            ra.hi.to_rational() + rb.hi.to_rational(),
        );
        if gap.hi < reach.lo {
            return Ok(true);
        }
        if gap.lo >= reach.hi {
            return Ok(false);
        }
        if bits >= MAX_BITS {
            return Err(Error::Certification(format!(
                "σ₁ overlap of {} and {} undecided",
                a.poly(),
                b.poly()
            )));
        }
        bits *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Disjoint from `σ₁` of every other member; `sibling_overlap` notes
    /// overlaps with other components of the same polynomial.
    Essential { sibling_overlap: bool },
    /// `partner` is the lexicographically smallest overlapping member.
    NonEssential { partner: Vec<i64>, partner_component: usize, b_m: i64, b_k: i64 },
}

impl Verdict {
    pub fn is_essential(&self) -> bool {
        matches!(self, Verdict::Essential { .. })
    }
}

/// Verdicts for the components of one family, aligned with `members`.
pub fn classify_family(members: &[MediumComponent], k: usize, m: usize) -> Result<Vec<Verdict>> {
    let n = members.iter().map(|c| c.coeffs.len()).max().unwrap_or(1) - 1;
    let mut out = Vec::with_capacity(members.len());
    for (i, a) in members.iter().enumerate() {
        let mut sibling = false;
        let mut partner: Option<usize> = None;
        for (j, b) in members.iter().enumerate() {
            if i == j {
                continue;
            }
            let same = a.coeffs == b.coeffs;
            if same && sibling {
                continue;
            }
            if !same {
                if let Some(p) = partner {
                    let keep = lex_cmp(&members[p].poly(), &b.poly(), n) != Ordering::Greater;
                    if keep {
                        continue;
                    }
                }
            }
            if sigma1_overlap(a, b)? {
                if same {
                    sibling = true;
                } else {
                    partner = Some(j);
                }
            }
        }
        out.push(match partner {
            None => Verdict::Essential { sibling_overlap: sibling },
            Some(j) => {
                let q = &members[j];
                let partner_component = members[..j].iter().filter(|c| c.coeffs == q.coeffs).count();
                Verdict::NonEssential {
                    partner: q.coeffs.clone(),
                    partner_component,
                    b_m: a.coeffs[m] - q.coeffs[m],
                    b_k: a.coeffs[k] - q.coeffs[k],
                }
            }
        });
    }
    Ok(out)
}

/// Identifies `P_n(H, k, m, R)`: the coefficients of `P` with those at
/// `k` and `m` set to zero.
pub fn family_key(coeffs: &[i64], k: usize, m: usize) -> Vec<i64> {
    let mut r = coeffs.to_vec();
    r[k] = 0;
    r[m] = 0;
    r
}

#[derive(Clone, Debug)]
pub struct ComponentVerdict {
    pub member: MediumComponent,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct EssentialVerdict {
    pub k: usize,
    pub m: usize,
    pub residual: IntPoly,
    pub verdicts: Vec<ComponentVerdict>,
}

impl EssentialVerdict {
    /// Enclosure of the summed length of essential components.
    pub fn essential_length(&self, tol: &Rational) -> Result<RatInterval> {
        let mut acc = RatInterval::point(Rational::zero());
        for v in self.verdicts.iter().filter(|v| v.verdict.is_essential()) {
            let m = IntervalUnion::from_interval(v.member.component.clone()).measure(tol)?;
            acc = acc.add(&RatInterval::new(m.lo(), m.hi()));
        }
        Ok(acc)
    }

    pub fn nonessential_count(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.verdict.is_essential()).count()
    }
}

fn check_pair(k: usize, m: usize, n: usize) -> Result<()> {
    if k >= m || m > n {
        return Err(Error::InvalidConfig(format!("need 0 <= k < m <= n, got k={k}, m={m}, n={n}")));
    }
    Ok(())
}

/// Classifies every medium component of `P_n(H, k, m, R)`.
pub fn classify_essential(k: usize, m: usize, r: &IntPoly, h: u64, cfg: &CaseConfig) -> Result<EssentialVerdict> {
    check_pair(k, m, cfg.n)?;
    let family = FamilySpec::with_residual(cfg.n, h, &[k, m], r.clone())?;
    let psi = cfg.psi.eval_or_zero(h)?;
    let mut members = Vec::new();
    for c in family.iter() {
        members.extend(medium_components(&c, cfg, h, &psi)?);
    }
    let verdicts = classify_family(&members, k, m)?;
    Ok(EssentialVerdict {
        k,
        m,
        residual: r.clone(),
        verdicts: members.into_iter().zip(verdicts).map(|(member, verdict)| ComponentVerdict { member, verdict }).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct DiffPoint {
    pub x: f64,
    /// `max(|P(x)|, |Q(x)|) / H^(-1+4δ)`.
    pub c0: f64,
    /// `max(|P'(x)|, |Q'(x)|) / H^(2δ)`.
    pub c1: f64,
    /// `|x^(m-k) + b_k/b_m| |b_m| H^(1-4δ)`, absent when `b_m = 0`.
    pub quantity: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct DiffPairReport {
    pub b_m: BigInt,
    pub b_k: BigInt,
    pub points: Vec<DiffPoint>,
}

impl DiffPairReport {
    pub fn b_m_nonzero(&self) -> bool {
        !self.b_m.is_zero()
    }

    pub fn c0(&self) -> f64 {
        self.points.iter().map(|p| p.c0).fold(0.0, f64::max)
    }

    pub fn c1(&self) -> f64 {
        self.points.iter().map(|p| p.c1).fold(0.0, f64::max)
    }

    /// `max(|b_m|, |b_k|)`.
    pub fn b_max(&self) -> BigInt {
        self.b_m.abs().max(self.b_k.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.c0.is_finite() && p.c1.is_finite() && p.quantity.map_or(true, f64::is_finite))
    }
}

fn abs_hi(x: &Endpoint, p: &IntPoly) -> Result<f64> {
    let v = x.eval_enclosure(p, &eval_tol(DEFAULT_BITS))?.abs();
    Ok(crate::numkit::rational_to_f64(&v.hi))
}

/// Evaluates the difference-polynomial estimates on sampled points of the
/// overlap of `σ₁(P)` and `σ₁(Q)`.
pub fn diff_pair_check(
    p: &IntPoly,
    q: &IntPoly,
    k: usize,
    m: usize,
    cfg: &CaseConfig,
    h: u64,
    overlap: &IntervalUnion,
) -> Result<DiffPairReport> {
    check_pair(k, m, cfg.n)?;
    let d = p - q;
    if d.is_zero() {
        return Err(Error::Precondition("P - Q = 0".into()));
    }
    if d.coeffs().iter().enumerate().any(|(i, c)| i != k && i != m && !c.is_zero()) {
        return Err(Error::Precondition(format!("P - Q = {d} is not of the form b_m x^m + b_k x^k")));
    }
    if overlap.is_empty() {
        return Err(Error::Precondition("empty overlap".into()));
    }
    let (b_m, b_k) = (d.coeff(m), d.coeff(k));
    let hf = h as f64;
    let df = cfg.delta.to_f64().unwrap_or(f64::NAN);
    let s0 = hf.powf(-1.0 + 4.0 * df);
    let s1 = hf.powf(2.0 * df);
    let (dp, dq) = (p.derivative(), q.derivative());
    // b_m x^(m-k) + b_k
    let mut lin = vec![BigInt::zero(); m - k + 1];
    lin[0] = b_k.clone();
    lin[m - k] = b_m.clone();
    let lin = IntPoly::new(lin);
    let mut points = Vec::new();
    for c in overlap.parts() {
        let mut xs = vec![c.lo.clone()];
        if !c.is_point()? {
            xs.push(Endpoint::Rational(c.lo.rational_between(&c.hi)?));
            xs.push(c.hi.clone());
        }
        for x in xs {
            let c0 = abs_hi(&x, p)?.max(abs_hi(&x, q)?) / s0;
            let c1 = abs_hi(&x, &dp)?.max(abs_hi(&x, &dq)?) / s1;
            let quantity = if b_m.is_zero() {
                None
            } else if x.sign_of(&lin)? == Sign::NoSign {
                Some(0.0)
            } else {
                Some(abs_hi(&x, &lin)? / s0)
            };
            points.push(DiffPoint { x: x.to_f64(), c0, c1, quantity });
        }
    }
    Ok(DiffPairReport { b_m, b_k, points })
}
