//! Per-polynomial and per-family constructions: the three derivative
//! regimes, anchoring roots, expansions of medium-case sets, essential
//! classification, derivative windows and the small-derivative blocks.

mod config;
mod essential;
mod lemma1;
mod lemma2;
mod rootsum;
mod sigma;
mod small;

pub use config::{parse_psi_table, Case, CaseConfig, PsiSpec};
pub use essential::{
    classify_essential, classify_family, diff_pair_check, family_key, medium_components, sigma1_overlap,
    ComponentVerdict, DiffPairReport, DiffPoint, EssentialVerdict, MediumComponent, Verdict,
};
pub use lemma1::{ck_window, CkCertificate, CkWindow};
pub use lemma2::{alpha_cover, anchors, lemma2_certify, Lemma2Point, Lemma2Report};
pub use rootsum::{root_sum_diagnostic, tilde_numerators, RootSum, RootSumPiece};
pub use sigma::{
    case_band, edge_strips, gamma_and_expansions, may_be_nonempty, sigma_alpha, sigma_case, z_set,
    ComponentExpansion, EdgeStrips, Expansions, Gamma, StratifiedSet,
};
pub use small::{block_heights, delta_prime, tau_poly_set, tau_set};

/// `psi_eval` under its conventional name.
pub fn psi_eval(psi: &PsiSpec, h: u64) -> crate::Result<crate::Threshold> {
    psi.eval(h)
}
