//! Family-wide computations: measured unions, scaling fits, partial sums,
//! counts, best approximations and the certificate sweeps.

mod approx;
mod checks;
mod counting;
mod measure;
mod parallel;
mod scaling;

pub use approx::{best_approx, wn_table, ApproxRecord, Target};
pub use checks::{
    essential_report, lemma1_trials, lemma2_sweep, CkTrial, EssentialReport, FamilyRow, Lemma2Row, Lemma2Sweep,
    PairRow,
};
pub use counting::{count_sweep, CountRow};
pub use measure::{
    case_union, measure_case, measure_tau, medium_census, tau_union, FamilyVerdicts, MeasureRow, MediumCensus,
};
pub use parallel::RunOptions;
pub use scaling::{
    bc_partial_sums, delta_prime_f64, fit_line, reference_value, scaling_sweep, tau_sweep, BcRow, BcSeries, Ratio,
    ScalingReport,
};
