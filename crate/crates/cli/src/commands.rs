//! One function per subcommand, each producing a [`Table`].

use std::time::Instant;

use dioph_core::casework::{delta_prime, CaseConfig};
use dioph_core::experiments::{
    bc_partial_sums, count_sweep, essential_report, lemma1_trials, lemma2_sweep, measure_case, scaling_sweep,
    tau_sweep, wn_table, MeasureRow, RunOptions, ScalingReport, Target,
};
use dioph_core::polynomials::FamilySpec;
use dioph_core::{AlgebraicEndpoint, IntPoly, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::{Command, RunConfig};
use crate::report::{enclosure_cells, interval_cells, measure_cells, Cell, Table, MEASURE_COLUMNS};
use crate::CliError;

pub fn execute(rc: &RunConfig) -> Result<Table, CliError> {
    let cfg = rc.case_config()?;
    let opts = RunOptions { workers: rc.workers, budget: rc.budget };
    match rc.command {
        Command::Enum => enumerate(rc),
        Command::Count => count(rc, &opts),
        Command::Measure => measure(rc, &cfg, &opts),
        Command::Scaling => {
            let rep = scaling_sweep(&cfg, rc.case, rc.heights_required()?, &opts)?;
            Ok(scaling_table("scaling", rc, &rep))
        }
        Command::Tau => tau(rc, &cfg, &opts),
        Command::BcSum => bc_sum(rc, &cfg, &opts),
        Command::Lemma1Check => lemma1(rc),
        Command::Lemma2Check => lemma2(rc, &cfg, &opts),
        Command::Essential => essential(rc, &cfg, &opts),
        Command::Wn => wn(rc, &opts),
    }
}

fn coeff_string(c: &[i64]) -> String {
    c.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn poly_string(p: &IntPoly) -> String {
    p.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")
}

fn measure_row(rc: &RunConfig, r: &MeasureRow) -> Vec<Cell> {
    let [lo, hi, rat] = measure_cells(&r.measure);
    vec![
        r.case.clone().into(),
        r.n.into(),
        r.h.into(),
        r.psi.clone().into(),
        r.delta.to_string().into(),
        r.interval.clone().into(),
        lo,
        hi,
        rat,
        r.poly_count.into(),
        r.essential_count.into(),
        r.nonessential_count.into(),
        if rc.timing { Cell::from(r.wall_ms) } else { Cell::Null },
    ]
}

fn enumerate(rc: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new("enum", &["n", "H", "coeffs"]);
    for &h in rc.heights_required()? {
        let spec = if rc.zero.is_empty() {
            FamilySpec::full(rc.n, h)
        } else {
            FamilySpec::zeroed(rc.n, h, &rc.zero)?
        };
        if spec.count() > rc.budget {
            return Err(dioph_core::Error::BudgetExceeded(format!(
                "enumerating {} polynomials exceeds the budget of {}",
                spec.count(),
                rc.budget
            ))
            .into());
        }
        for c in spec.iter() {
            t.push(vec![rc.n.into(), h.into(), coeff_string(&c).into()]);
        }
    }
    t.note("rows", t.rows.len());
    Ok(t)
}

fn count(rc: &RunConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let hs = rc.heights_required()?;
    if hs.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(CliError::Config("count needs consecutive heights (use --heights A:B)".into()));
    }
    let rows = count_sweep(rc.n, hs[0]..=hs[hs.len() - 1], &rc.psi, opts)?;
    let mut t = Table::new(
        "count",
        &["n", "H", "total", "per_k", "primitive_irreducible", "ratio", "term", "partial_sum"],
    );
    for r in rows {
        let per_k = r.per_k.iter().map(u128::to_string).collect::<Vec<_>>().join(" ");
        t.push(vec![
            rc.n.into(),
            r.h.into(),
            r.total.into(),
            per_k.into(),
            r.primitive_irreducible.into(),
            r.ratio.into(),
            r.term.into(),
            r.partial_sum.into(),
        ]);
    }
    Ok(t)
}

fn measure(rc: &RunConfig, cfg: &CaseConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let mut t = Table::new("measure", MEASURE_COLUMNS);
    for &h in rc.heights_required()? {
        t.push(measure_row(rc, &measure_case(cfg, rc.case, h, opts)?));
    }
    Ok(t)
}

fn scaling_table(report: &'static str, rc: &RunConfig, rep: &ScalingReport) -> Table {
    let mut cols = MEASURE_COLUMNS.to_vec();
    cols.extend(["reference", "ratio_lo", "ratio", "ratio_hi", "partial_sum_lo", "partial_sum_hi"]);
    let mut t = Table::new(report, &cols);
    for (((row, reference), ratio), sum) in rep.rows.iter().zip(&rep.reference_values).zip(&rep.ratios).zip(&rep.partial_sums) {
        let mut cells = measure_row(rc, row);
        let [slo, shi] = enclosure_cells(sum);
        cells.extend([(*reference).into(), ratio.lo.into(), ratio.mid.into(), ratio.hi.into(), slo, shi]);
        t.push(cells);
    }
    t.note("reference", rep.reference.clone());
    t.note("slope", rep.slope);
    t.note("residual", rep.residual);
    t
}

fn tau(rc: &RunConfig, cfg: &CaseConfig, opts: &RunOptions) -> Result<Table, CliError> {
    if rc.blocks.is_empty() {
        return Err(CliError::Config("tau needs --blocks".into()));
    }
    let rep = tau_sweep(cfg, &rc.blocks, opts)?;
    let mut t = scaling_table("tau", rc, &rep);
    let dp = delta_prime(cfg.n, &cfg.delta)?;
    let nonincreasing = rep.rows.windows(2).all(|w| w[1].measure.lo() <= w[0].measure.hi());
    t.note("delta_prime", dp.to_string());
    t.note("nonincreasing", nonincreasing);
    Ok(t)
}

fn bc_sum(rc: &RunConfig, cfg: &CaseConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let n_max = *rc.heights_required()?.iter().max().expect("nonempty");
    let s = bc_partial_sums(cfg, rc.case, n_max, opts)?;
    let mut t = Table::new(
        "bc-sum",
        &["case", "n", "H", "psi", "increment_lo", "increment_hi", "partial_sum_lo", "partial_sum_hi", "term"],
    );
    for r in &s.rows {
        let [ilo, ihi] = enclosure_cells(&r.increment);
        let [slo, shi] = enclosure_cells(&r.partial_sum);
        t.push(vec![
            rc.case.to_string().into(),
            rc.n.into(),
            r.h.into(),
            cfg.psi.id().into(),
            ilo,
            ihi,
            slo,
            shi,
            r.term.into(),
        ]);
    }
    t.note("increment_slope", s.increment_slope);
    t.note("term_slope", s.term_slope);
    Ok(t)
}

fn rat_list(v: &[Rational]) -> String {
    v.iter().map(Rational::to_string).collect::<Vec<_>>().join(" ")
}

fn lemma1(rc: &RunConfig) -> Result<Table, CliError> {
    let trials = lemma1_trials(rc.trials, rc.seed)?;
    let mut t = Table::new(
        "lemma1-check",
        &[
            "trial",
            "f",
            "k",
            "a",
            "b",
            "alpha",
            "beta",
            "components",
            "max_components",
            "max_length",
            "length_bound",
            "pass",
        ],
    );
    let mut passed = 0;
    for (i, tr) in trials.iter().enumerate() {
        let w = &tr.window;
        let c = &tr.certificate;
        let alpha = w
            .alpha
            .iter()
            .map(|a| a.as_ref().map_or("inf".to_string(), Rational::to_string))
            .collect::<Vec<_>>()
            .join(" ");
        passed += c.pass() as usize;
        t.push(vec![
            i.into(),
            poly_string(&w.f).into(),
            w.k.into(),
            w.a.to_string().into(),
            w.b.to_string().into(),
            alpha.into(),
            rat_list(&w.beta).into(),
            c.components.into(),
            c.max_components.into(),
            c.max_length.into(),
            c.length_bound.into(),
            c.pass().into(),
        ]);
    }
    t.note("trials", trials.len());
    t.note("passed", passed);
    Ok(t)
}

fn lemma2(rc: &RunConfig, cfg: &CaseConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let s = lemma2_sweep(cfg, rc.heights_required()?, opts)?;
    let mut t = Table::new("lemma2-check", &["H", "polys", "points", "failures", "example"]);
    for r in &s.rows {
        let example = r.examples.first().map(|(c, d)| format!("{} @ {d:e}", coeff_string(c)));
        t.push(vec![r.h.into(), r.polys.into(), r.points.into(), r.failures.into(), example.into()]);
    }
    t.note("h0", s.h0);
    Ok(t)
}

fn essential(rc: &RunConfig, cfg: &CaseConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let mut t = Table::new(
        "essential",
        &[
            "H",
            "kind",
            "k",
            "m",
            "residual",
            "p",
            "q",
            "components",
            "nonessential",
            "essential_lo",
            "essential_hi",
            "bound",
            "b_m",
            "b_k",
            "c0",
            "c1",
            "finite",
        ],
    );
    let two_delta = 2.0 * cfg.delta.to_f64().unwrap_or(0.0);
    let mut fitted: Option<f64> = None;
    let mut worst_ratio: f64 = 0.0;
    for &h in rc.heights_required()? {
        let r = essential_report(cfg, h, opts)?;
        for f in &r.families {
            let [lo, hi] = interval_cells(&f.essential_length);
            t.push(vec![
                h.into(),
                "family".into(),
                f.k.into(),
                f.m.into(),
                coeff_string(&f.residual).into(),
                Cell::Null,
                Cell::Null,
                f.components.into(),
                f.nonessential.into(),
                lo,
                hi,
                (2.0 * r.h_psi_len).into(),
                Cell::Null,
                Cell::Null,
                Cell::Null,
                Cell::Null,
                Cell::Null,
            ]);
        }
        for p in &r.pairs {
            let rep = &p.report;
            t.push(vec![
                h.into(),
                "pair".into(),
                p.k.into(),
                p.m.into(),
                Cell::Null,
                coeff_string(&p.p).into(),
                coeff_string(&p.q).into(),
                Cell::Null,
                Cell::Null,
                Cell::Null,
                Cell::Null,
                Cell::Null,
                rep.b_m.to_string().into(),
                rep.b_k.to_string().into(),
                rep.c0().into(),
                rep.c1().into(),
                rep.is_finite().into(),
            ]);
        }
        if let Some(b) = r.max_b().and_then(|b| b.to_f64()) {
            let c = b / (h as f64).powf(two_delta);
            if fitted.is_none() {
                fitted = Some(c);
            }
            worst_ratio = worst_ratio.max(c);
        }
    }
    t.note("fitted_c", fitted);
    t.note("max_b_over_h_2delta", (fitted.is_some()).then_some(worst_ratio));
    Ok(t)
}

/// `p/q`, `dec:DIGITS`, or `alg:c0,c1,..@lo:hi` with dyadic `lo`, `hi`
/// isolating a simple root.
pub fn parse_target(s: &str) -> Result<Target, CliError> {
    let bad = || CliError::Config(format!("malformed target {s:?}"));
    if let Some(d) = s.strip_prefix("dec:") {
        return Ok(Target::decimal(d)?);
    }
    if let Some(rest) = s.strip_prefix("alg:") {
        let (coeffs, iso) = rest.split_once('@').ok_or_else(bad)?;
        let c: Vec<i64> = coeffs.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let (lo, hi) = iso.split_once(':').ok_or_else(bad)?;
        let lo = dioph_core::numkit::parse_rational(lo).ok_or_else(bad)?;
        let hi = dioph_core::numkit::parse_rational(hi).ok_or_else(bad)?;
        let k = [&lo, &hi]
            .iter()
            .map(|r| dyadic_exponent(r.denom()).ok_or_else(|| CliError::Config(format!("isolator end {r} is not dyadic"))))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let scale = Rational::from_integer(BigInt::one() << k as usize);
        let (lo, hi) = ((lo * &scale).to_integer(), (hi * &scale).to_integer());
        return Ok(Target::Algebraic(AlgebraicEndpoint::new(IntPoly::from_i64s(&c), lo, hi, k)?));
    }
    dioph_core::numkit::parse_rational(s).map(Target::Rational).ok_or_else(bad)
}

fn dyadic_exponent(d: &BigInt) -> Option<u32> {
    let tz = d.trailing_zeros().unwrap_or(0);
    ((d >> tz as usize).is_one() && !d.is_zero()).then_some(tz as u32)
}

fn wn(rc: &RunConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let spec = rc.target.as_deref().ok_or_else(|| CliError::Config("wn needs --target".into()))?;
    let x = parse_target(spec)?;
    let start = Instant::now();
    let recs = wn_table(&x, rc.n, rc.heights_required()?, opts)?;
    let mut t = Table::new("wn", &["target", "n", "H", "best_lo", "best_hi", "exponent", "argmin"]);
    for r in &recs {
        let [lo, hi] = interval_cells(&r.best);
        t.push(vec![r.target.clone().into(), r.n.into(), r.h.into(), lo, hi, r.exponent().into(), poly_string(&r.argmin).into()]);
    }
    if rc.timing {
        t.note("wall_ms", start.elapsed().as_millis());
    }
    Ok(t)
}
