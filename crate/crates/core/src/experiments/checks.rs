use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::measure::{medium_census, MediumCensus};
use super::parallel::{map_family, RunOptions};
use crate::casework::{
    case_band, ck_window, diff_pair_check, lemma2_certify, may_be_nonempty, Case, CaseConfig, CkCertificate,
    CkWindow, DiffPairReport, Verdict,
};
use crate::error::{Error, Result};
use crate::numkit::{rational_to_f64, Interval, RatInterval, Rational};
use crate::polynomials::{FamilySpec, IntPoly};
use crate::realroots::min_abs_on;

#[derive(Clone, Debug)]
pub struct Lemma2Row {
    pub h: u64,
    /// Polynomials with at least one test point.
    pub polys: u64,
    pub points: u64,
    pub failures: u64,
    /// Up to five failing `(P, x0)`.
    pub examples: Vec<(Vec<i64>, f64)>,
}

#[derive(Clone, Debug)]
pub struct Lemma2Sweep {
    pub rows: Vec<Lemma2Row>,
    /// Smallest listed height from which every listed height passes.
    pub h0: Option<u64>,
}

pub fn lemma2_sweep(cfg: &CaseConfig, heights: &[u64], opts: &RunOptions) -> Result<Lemma2Sweep> {
    let mut rows = Vec::new();
    for &h in heights {
        let spec = FamilySpec::full(cfg.n, h);
        opts.check_budget(&format!("P_{}({h})", cfg.n), spec.count())?;
        let psi = cfg.psi.eval_or_zero(h)?;
        let band = case_band(cfg, Case::Big, h);
        let reports = map_family(&spec, opts, |c| {
            let p = IntPoly::from_i64s(c);
            if !may_be_nonempty(&p, &psi, &band, &cfg.interval) {
                return Ok(Vec::new());
            }
            let r = lemma2_certify(&p, cfg, h)?;
            Ok(if r.points.is_empty() { Vec::new() } else { vec![(c.to_vec(), r)] })
        })?;
        let mut row = Lemma2Row { h, polys: reports.len() as u64, points: 0, failures: 0, examples: Vec::new() };
        for (c, r) in &reports {
            row.points += r.points.len() as u64;
            for pt in r.points.iter().filter(|p| !p.pass()) {
                row.failures += 1;
                if row.examples.len() < 5 {
                    row.examples.push((c.clone(), pt.x0.to_f64()));
                }
            }
        }
        rows.push(row);
    }
    let mut h0 = None;
    for r in rows.iter().rev() {
        if r.failures > 0 {
            break;
        }
        h0 = Some(r.h);
    }
    Ok(Lemma2Sweep { rows, h0 })
}

#[derive(Clone, Debug)]
pub struct CkTrial {
    pub window: CkWindow,
    pub certificate: CkCertificate,
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

fn random_window(rng: &mut ChaCha8Rng) -> Result<CkWindow> {
    let d = rng.gen_range(1..=4usize);
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-6..=6)).collect();
    while c[d] == 0 {
        c[d] = rng.gen_range(-6..=6);
    }
    let f = IntPoly::from_i64s(&c);
    let a = rat(rng.gen_range(-12..=12), 4);
    let b = &a + rat(rng.gen_range(1..=12), 4);
    let mut k = rng.gen_range(1..=d);
    let scale = rat(rng.gen_range(1..=4), 4);
    let beta_k = loop {
        if k == d {
            break Rational::from_integer((factorial(d) * c[d]).abs().into()) * &scale;
        }
        let j = Interval::closed(a.clone(), b.clone())?;
        let m = min_abs_on(&f.nth_derivative(k), &j, &rat(1, 1 << 20))?;
        if m.value.lo.is_positive() {
            break m.value.lo * &scale;
        }
        k = d;
    };
    // bounds are drawn around the values at x0, which mostly keeps x0 inside
    let x0 = &a + (&b - &a) * rat(rng.gen_range(1..=15), 16);
    let slack = |rng: &mut ChaCha8Rng| rat(rng.gen_range(0..=8), 8);
    let at = |j: usize| f.nth_derivative(j).eval(&x0).abs();
    let mut alpha = vec![Some(at(0) * (rat(1, 1) + slack(rng)) + rat(rng.gen_range(1..=8), 64))];
    let mut beta = Vec::new();
    for j in 1..k {
        let v = at(j);
        let up = if rng.gen_bool(1.0 / 3.0) { None } else { Some(&v * (rat(1, 1) + slack(rng)) + rat(1, 8)) };
        let lo = if rng.gen_bool(0.5) { Rational::zero() } else { &v * rat(rng.gen_range(0..=8), 8) };
        alpha.push(up);
        beta.push(lo);
    }
    beta.push(beta_k);
    Ok(CkWindow { f, k, alpha, beta, a, b })
}

/// Random windows of degree at most four, reproducible from `seed`.
pub fn lemma1_trials(count: usize, seed: u64) -> Result<Vec<CkTrial>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = rat(1, 1 << 40);
    (0..count)
        .map(|_| {
            let window = random_window(&mut rng)?;
            let (_, certificate) = ck_window(&window, &tol)?;
            Ok(CkTrial { window, certificate })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub k: usize,
    pub m: usize,
    pub residual: Vec<i64>,
    pub components: usize,
    pub nonessential: usize,
    pub essential_length: RatInterval,
}

#[derive(Clone, Debug)]
pub struct PairRow {
    pub k: usize,
    pub m: usize,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    pub report: DiffPairReport,
}

#[derive(Clone, Debug)]
pub struct EssentialReport {
    pub h: u64,
    pub families: Vec<FamilyRow>,
    pub pairs: Vec<PairRow>,
    /// `H Ψ(H) |I|`.
    pub h_psi_len: f64,
}

impl EssentialReport {
    pub fn max_essential_length(&self) -> f64 {
        self.families.iter().map(|f| rational_to_f64(&f.essential_length.hi)).fold(0.0, f64::max)
    }

    pub fn max_b(&self) -> Option<BigInt> {
        self.pairs.iter().map(|p| p.report.b_max()).max()
    }
}

pub fn essential_report(cfg: &CaseConfig, h: u64, opts: &RunOptions) -> Result<EssentialReport> {
    let census: MediumCensus = medium_census(cfg, h, opts)?;
    let mut families = Vec::new();
    let mut pairs = Vec::new();
    for f in &census.families {
        for (&i, v) in f.members.iter().zip(&f.verdicts) {
            let Verdict::NonEssential { partner, partner_component, .. } = v else { continue };
            let a = &census.components[i];
            let b = census
                .components
                .iter()
                .filter(|c| &c.coeffs == partner)
                .nth(*partner_component)
                .ok_or_else(|| Error::Precondition("partner component missing".into()))?;
            let overlap = a.sigma1(&cfg.interval)?.intersect(&b.sigma1(&cfg.interval)?)?;
            let report = diff_pair_check(&a.poly(), &b.poly(), f.k, f.m, cfg, h, &overlap)?;
            pairs.push(PairRow { k: f.k, m: f.m, p: a.coeffs.clone(), q: partner.clone(), report });
        }
        families.push(FamilyRow {
            k: f.k,
            m: f.m,
            residual: f.residual.clone(),
            components: f.members.len(),
            nonessential: f.verdicts.iter().filter(|v| !v.is_essential()).count(),
            essential_length: f.essential_length(&census, &cfg.tol)?,
        });
    }
    let len = cfg
        .interval
        .rational_length()
        .map(|l| rational_to_f64(&l))
        .unwrap_or_else(|| cfg.interval.hi.to_f64() - cfg.interval.lo.to_f64());
    let psi = cfg.psi.eval_or_zero(h)?.to_f64();
    Ok(EssentialReport { h, families, pairs, h_psi_len: h as f64 * psi * len })
}
