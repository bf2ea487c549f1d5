use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use super::parallel::{map_family, union_family, RunOptions};
use crate::casework::{
    block_heights, case_band, classify_family, family_key, may_be_nonempty, medium_components, sigma_case, tau_poly_set,
    Case, CaseConfig, MediumComponent, Verdict,
};
use crate::error::Result;
use crate::numkit::{IntervalUnion, Measure, RatInterval, Rational};
use crate::polynomials::{FamilySpec, IntPoly};

/// One measured union.
#[derive(Clone, Debug)]
pub struct MeasureRow {
    /// `big`, `medium`, `small` or `tau`.
    pub case: String,
    pub n: usize,
    /// Height, or `2^m` for a `tau` block.
    pub h: u64,
    pub psi: String,
    pub delta: Rational,
    pub interval: String,
    pub measure: Measure,
    /// Members whose set is nonempty.
    pub poly_count: u64,
    pub essential_count: Option<u64>,
    pub nonessential_count: Option<u64>,
    /// Summed length of essential components (medium case).
    pub essential_measure: Option<RatInterval>,
    pub wall_ms: u128,
}

impl MeasureRow {
    fn new(cfg: &CaseConfig, case: String, h: u64, set: &IntervalUnion, poly_count: u64, start: Instant) -> Result<Self> {
        Ok(MeasureRow {
            case,
            n: cfg.n,
            h,
            psi: cfg.psi.id(),
            delta: cfg.delta.clone(),
            interval: cfg.interval_id(),
            measure: set.measure(&cfg.tol)?,
            poly_count,
            essential_count: None,
            nonessential_count: None,
            essential_measure: None,
            wall_ms: start.elapsed().as_millis(),
        })
    }
}

/// The union over `P_n(H)` of the stratified sets of `case`.
pub fn case_union(cfg: &CaseConfig, case: Case, h: u64, opts: &RunOptions) -> Result<(IntervalUnion, u64)> {
    let spec = FamilySpec::full(cfg.n, h);
    opts.check_budget(&format!("P_{}({h})", cfg.n), spec.count())?;
    let psi = cfg.psi.eval_or_zero(h)?;
    let band = case_band(cfg, case, h);
    union_family(&spec, opts, |c| {
        let p = IntPoly::from_i64s(c);
        if !may_be_nonempty(&p, &psi, &band, &cfg.interval) {
            return Ok(IntervalUnion::empty());
        }
        Ok(sigma_case(&p, cfg, case, h)?.set)
    })
}

/// Medium-case components of `P_n(H)` grouped into every family
/// `P_n(H, k, m, R)`.
#[derive(Clone, Debug)]
pub struct MediumCensus {
    pub components: Vec<MediumComponent>,
    pub families: Vec<FamilyVerdicts>,
}

#[derive(Clone, Debug)]
pub struct FamilyVerdicts {
    pub k: usize,
    pub m: usize,
    /// Coefficients of `R`, lowest first.
    pub residual: Vec<i64>,
    /// Indices into [`MediumCensus::components`].
    pub members: Vec<usize>,
    pub verdicts: Vec<Verdict>,
}

impl FamilyVerdicts {
    /// Enclosure of the summed length of the essential components.
    pub fn essential_length(&self, census: &MediumCensus, tol: &Rational) -> Result<RatInterval> {
        let mut acc = RatInterval::point(Rational::zero());
        for (&i, v) in self.members.iter().zip(&self.verdicts) {
            if v.is_essential() {
                let m = IntervalUnion::from_interval(census.components[i].component.clone()).measure(tol)?;
                acc = acc.add(&RatInterval::new(m.lo(), m.hi()));
            }
        }
        Ok(acc)
    }
}

impl MediumCensus {
    /// A component is essential when no family containing it finds an
    /// overlapping partner.
    pub fn essential_flags(&self) -> Vec<bool> {
        let mut ok = vec![true; self.components.len()];
        for f in &self.families {
            for (&i, v) in f.members.iter().zip(&f.verdicts) {
                if !v.is_essential() {
                    ok[i] = false;
                }
            }
        }
        ok
    }
}

pub fn medium_census(cfg: &CaseConfig, h: u64, opts: &RunOptions) -> Result<MediumCensus> {
    let spec = FamilySpec::full(cfg.n, h);
    opts.check_budget(&format!("P_{}({h})", cfg.n), spec.count())?;
    let psi = cfg.psi.eval_or_zero(h)?;
    let components = map_family(&spec, opts, |c| medium_components(c, cfg, h, &psi))?;
    let mut groups: Vec<(usize, usize, Vec<i64>, Vec<usize>)> = Vec::new();
    for k in 0..cfg.n {
        for m in k + 1..=cfg.n {
            let mut by_key: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
            for (i, c) in components.iter().enumerate() {
                by_key.entry(family_key(&c.coeffs, k, m)).or_default().push(i);
            }
            groups.extend(by_key.into_iter().map(|(key, idx)| (k, m, key, idx)));
        }
    }
    let results: Vec<Result<FamilyVerdicts>> = opts.install(|| {
        groups
            .into_par_iter()
            .map(|(k, m, residual, members)| {
                let list: Vec<MediumComponent> = members.iter().map(|&i| components[i].clone()).collect();
                let verdicts = classify_family(&list, k, m)?;
                Ok(FamilyVerdicts { k, m, residual, members, verdicts })
            })
            .collect()
    })?;
    let families = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MediumCensus { components, families })
}

/// Measure of the union of `case` sets over `P_n(H)`.
pub fn measure_case(cfg: &CaseConfig, case: Case, h: u64, opts: &RunOptions) -> Result<MeasureRow> {
    let start = Instant::now();
    if case != Case::Medium {
        let (set, count) = case_union(cfg, case, h, opts)?;
        return MeasureRow::new(cfg, case.to_string(), h, &set, count, start);
    }
    let census = medium_census(cfg, h, opts)?;
    let set = IntervalUnion::from_intervals(census.components.iter().map(|c| c.component.clone()).collect())?;
    let mut polys: Vec<&Vec<i64>> = census.components.iter().map(|c| &c.coeffs).collect();
    polys.dedup();
    let flags = census.essential_flags();
    let mut essential = RatInterval::point(Rational::zero());
    for (c, _) in census.components.iter().zip(&flags).filter(|(_, f)| **f) {
        let m = IntervalUnion::from_interval(c.component.clone()).measure(&cfg.tol)?;
        essential = essential.add(&RatInterval::new(m.lo(), m.hi()));
    }
    let mut row = MeasureRow::new(cfg, case.to_string(), h, &set, polys.len() as u64, start)?;
    let ess = flags.iter().filter(|f| **f).count() as u64;
    row.essential_count = Some(ess);
    row.nonessential_count = Some(flags.len() as u64 - ess);
    row.essential_measure = Some(essential);
    row.wall_ms = start.elapsed().as_millis();
    Ok(row)
}

/// `τ_m` as a union over the height block `2^(m-1) < H <= 2^m`.
pub fn tau_union(cfg: &CaseConfig, m: u32, opts: &RunOptions) -> Result<(IntervalUnion, u64)> {
    let heights = block_heights(m)?;
    let total: u128 = heights.clone().map(|h| FamilySpec::full(cfg.n, h).count()).sum();
    opts.check_budget(&format!("block m = {m}"), total)?;
    let mut parts = Vec::new();
    let mut count = 0;
    for h in heights {
        let (u, c) = union_family(&FamilySpec::full(cfg.n, h), opts, |co| {
            tau_poly_set(&IntPoly::from_i64s(co), cfg, h)
        })?;
        parts.extend(u.into_parts());
        count += c;
    }
    Ok((IntervalUnion::from_intervals(parts)?, count))
}

pub fn measure_tau(cfg: &CaseConfig, m: u32, opts: &RunOptions) -> Result<MeasureRow> {
    let start = Instant::now();
    let (set, count) = tau_union(cfg, m, opts)?;
    MeasureRow::new(cfg, "tau".into(), 1u64 << m, &set, count, start)
}
