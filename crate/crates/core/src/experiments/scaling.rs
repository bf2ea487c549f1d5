use super::measure::{measure_case, measure_tau, MeasureRow};
use super::parallel::RunOptions;
use crate::casework::{delta_prime, Case, CaseConfig};
use crate::error::{Error, Result};
use crate::numkit::{rational_to_f64, DyadicEnclosure};

/// Least-squares line through `(x, y)`: `(slope, rms residual)`.
pub fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    Some((slope, (rss / n).sqrt()))
}

/// Ratio of a measure to a reference value, from the enclosure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
}

impl Ratio {
    fn of(m: &DyadicEnclosure, reference: f64) -> Self {
        Ratio {
            lo: m.lo.to_f64() / reference,
            mid: m.midpoint_f64() / reference,
            hi: m.hi.to_f64() / reference,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub rows: Vec<MeasureRow>,
    /// Name of the reference curve, e.g. `H^(n-1)*Psi(H)`.
    pub reference: String,
    pub reference_values: Vec<f64>,
    pub ratios: Vec<Ratio>,
    /// Slope of `log measure` against `log H` over rows with positive
    /// measure, with its rms residual.
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    /// `sum_{H' <= H} measure` over the listed heights.
    pub partial_sums: Vec<DyadicEnclosure>,
}

/// `H^(n-1) Ψ(H)` in floating point.
pub fn reference_value(cfg: &CaseConfig, h: u64) -> Result<f64> {
    let psi = cfg.psi.eval_or_zero(h)?.to_f64();
    Ok((h as f64).powi(cfg.n as i32 - 1) * psi)
}

fn assemble(rows: Vec<MeasureRow>, reference: String, reference_values: Vec<f64>, log_x: impl Fn(&MeasureRow) -> f64) -> ScalingReport {
    let ratios = rows.iter().zip(&reference_values).map(|(r, v)| Ratio::of(&r.measure.enclosure, *v)).collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.measure.mid_f64() > 0.0)
        .map(|r| (log_x(r), r.measure.mid_f64().ln()))
        .collect();
    let fit = fit_line(&pts);
    let mut partial_sums = Vec::with_capacity(rows.len());
    let mut acc = DyadicEnclosure::zero();
    for r in &rows {
        acc = acc.add(&r.measure.enclosure);
        partial_sums.push(acc.clone());
    }
    ScalingReport {
        rows,
        reference,
        reference_values,
        ratios,
        slope: fit.map(|f| f.0),
        residual: fit.map(|f| f.1),
        partial_sums,
    }
}

/// Measures at each height with ratios against `H^(n-1) Ψ(H)`.
pub fn scaling_sweep(cfg: &CaseConfig, case: Case, heights: &[u64], opts: &RunOptions) -> Result<ScalingReport> {
    if heights.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("heights must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(heights.len());
    let mut refs = Vec::with_capacity(heights.len());
    for &h in heights {
        rows.push(measure_case(cfg, case, h, opts)?);
        refs.push(reference_value(cfg, h)?);
    }
    Ok(assemble(rows, "H^(n-1)*Psi(H)".into(), refs, |r| (r.h as f64).ln()))
}

/// `|τ_m|` per block against `2^(-m δ')`; the slope is in `log2 |τ_m|`
/// per unit of `m`.
pub fn tau_sweep(cfg: &CaseConfig, blocks: &[u32], opts: &RunOptions) -> Result<ScalingReport> {
    if blocks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("blocks must be strictly increasing".into()));
    }
    let dp = rational_to_f64(&delta_prime(cfg.n, &cfg.delta)?);
    let mut rows = Vec::new();
    let mut refs = Vec::new();
    for &m in blocks {
        rows.push(measure_tau(cfg, m, opts)?);
        refs.push(2f64.powf(-(m as f64) * dp));
    }
    let mut rep = assemble(rows, "2^(-m*delta')".into(), refs, |r| (r.h as f64).log2());
    // natural log of the measure over log2 H: rescale to log2 per block
    rep.slope = rep.slope.map(|s| s / std::f64::consts::LN_2);
    rep.residual = rep.residual.map(|s| s / std::f64::consts::LN_2);
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct BcRow {
    pub h: u64,
    pub increment: DyadicEnclosure,
    pub partial_sum: DyadicEnclosure,
    /// `H^(n-1) Ψ(H)`.
    pub term: f64,
}

#[derive(Clone, Debug)]
pub struct BcSeries {
    pub case: Case,
    pub rows: Vec<BcRow>,
    /// Slope of `log increment` against `log H` over the upper half.
    pub increment_slope: Option<f64>,
    /// Slope of `log term` against `log H` over the upper half.
    pub term_slope: Option<f64>,
}

/// Partial sums `sum_{H <= N} |union of case sets at H|` for `N <= n_max`.
pub fn bc_partial_sums(cfg: &CaseConfig, case: Case, n_max: u64, opts: &RunOptions) -> Result<BcSeries> {
    let mut rows = Vec::new();
    let mut acc = DyadicEnclosure::zero();
    for h in 1..=n_max {
        let inc = measure_case(cfg, case, h, opts)?.measure.enclosure;
        acc = acc.add(&inc);
        rows.push(BcRow { h, increment: inc, partial_sum: acc.clone(), term: reference_value(cfg, h)? });
    }
    let tail: Vec<&BcRow> = rows.iter().filter(|r| r.h > n_max / 2).collect();
    let inc_pts: Vec<(f64, f64)> = tail
        .iter()
        .filter(|r| r.increment.midpoint_f64() > 0.0)
        .map(|r| ((r.h as f64).ln(), r.increment.midpoint_f64().ln()))
        .collect();
    let term_pts: Vec<(f64, f64)> = tail
        .iter()
        .filter(|r| r.term > 0.0)
        .map(|r| ((r.h as f64).ln(), r.term.ln()))
        .collect();
    Ok(BcSeries {
        case,
        rows,
        increment_slope: fit_line(&inc_pts).map(|f| f.0),
        term_slope: fit_line(&term_pts).map(|f| f.0),
    })
}

/// `δ'` in floating point, for reports.
pub fn delta_prime_f64(cfg: &CaseConfig) -> Result<f64> {
    Ok(rational_to_f64(&delta_prime(cfg.n, &cfg.delta)?))
}

