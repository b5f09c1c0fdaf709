//! Cohering and decohering powers of channels.
//!
//! Each power is a supremum. The reported `value` is attained by
//! `optimal_input` and is therefore a lower bound; `upper_bound` is the
//! analytic bound that applies to the quantity. Claims of equality are
//! checked as the two one-sided statements.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{c_l1, c_rel_entropy, coherence, CoherenceMeasure};
use crate::error::{Error, Result};
use crate::optimizer::{maximize_with_starts, refine, OptimizationOutcome, OptimizerConfig, StateParameterization};
use crate::quantum::{
    partial_trace, tensor, von_neumann_entropy, DensityMatrix, ExtendedReal, KrausChannel, PureState,
};
use crate::random::derive_seed;
use crate::zoo;

/// Slack admitted between a reported value and its finite upper bound.
pub const UPPER_BOUND_SLACK: f64 = 1e-6;
/// Maximum excess of complete over generalized cohering power (C_r).
pub const COMPLETE_COHERING_SLACK: f64 = 1e-5;
/// Slack on the dimension bounds for complete decohering power.
pub const DECOHERING_BOUND_SLACK: f64 = 1e-5;
/// The interior search over incoherent inputs may not beat the best basis
/// state by more than this.
pub const CROSS_CHECK_SLACK: f64 = 1e-7;
/// Final feasibility gate `c_l1(Phi[rho]) <= FEASIBILITY_TOL`.
pub const FEASIBILITY_TOL: f64 = 1e-6;
/// Penalty weights for the decohering-power continuation.
pub const PENALTY_SCHEDULE: [f64; 4] = [1e1, 1e2, 1e3, 1e4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerKind {
    Cohering,
    GeneralizedCohering,
    CompleteCohering,
    Decohering,
    GeneralizedDecohering,
    CompleteDecohering,
    SeparableCompleteDecohering,
}

impl PowerKind {
    pub const ALL: [PowerKind; 7] = [
        PowerKind::Cohering,
        PowerKind::GeneralizedCohering,
        PowerKind::CompleteCohering,
        PowerKind::Decohering,
        PowerKind::GeneralizedDecohering,
        PowerKind::CompleteDecohering,
        PowerKind::SeparableCompleteDecohering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PowerKind::Cohering => "cohering",
            PowerKind::GeneralizedCohering => "generalized-cohering",
            PowerKind::CompleteCohering => "complete-cohering",
            PowerKind::Decohering => "decohering",
            PowerKind::GeneralizedDecohering => "generalized-decohering",
            PowerKind::CompleteDecohering => "complete-decohering",
            PowerKind::SeparableCompleteDecohering => "separable-complete-decohering",
        }
    }

    /// Whether the power is swept over ancilla dimensions.
    pub fn uses_ancilla(self) -> bool {
        matches!(
            self,
            PowerKind::CompleteCohering | PowerKind::CompleteDecohering | PowerKind::SeparableCompleteDecohering
        )
    }
}

impl std::str::FromStr for PowerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PowerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown power kind {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerReport {
    pub kind: PowerKind,
    pub measure: CoherenceMeasure,
    /// Ancilla dimension `k` of `Phi ⊗ 1_k`; 0 for single-system powers.
    pub ancilla_dim: usize,
    pub value: f64,
    pub upper_bound: ExtendedReal,
    /// Family whose optimum is reported.
    pub family: String,
    pub optimal_input: DensityMatrix,
    pub config: OptimizerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    pub diagnostics: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
}

impl PowerReport {
    fn new(
        kind: PowerKind,
        measure: CoherenceMeasure,
        ancilla_dim: usize,
        upper_bound: ExtendedReal,
        best: Candidate,
        cfg: &OptimizerConfig,
    ) -> Self {
        let mut report = Self {
            kind,
            measure,
            ancilla_dim,
            value: best.value,
            upper_bound,
            family: best.family.to_string(),
            optimal_input: best.state,
            config: cfg.clone(),
            feasible: None,
            diagnostics: BTreeMap::new(),
            checks: BTreeMap::new(),
        };
        report.checks.insert("within_upper_bound".into(), upper_bound.admits(report.value, UPPER_BOUND_SLACK));
        report
    }

    fn diag(&mut self, key: &str, v: f64) {
        self.diagnostics.insert(key.to_string(), v);
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_string(), ok);
    }

    /// All recorded checks hold.
    pub fn passed(&self) -> bool {
        self.checks.values().all(|ok| *ok)
    }
}

/// A candidate optimum together with the family that produced it.
struct Candidate {
    value: f64,
    state: DensityMatrix,
    family: &'static str,
}

impl Candidate {
    fn from_outcome(out: &OptimizationOutcome, family: &StateParameterization) -> Self {
        Self { value: out.best_value, state: out.best_state.clone(), family: family.label() }
    }
}

/// Largest value; ties go to the earlier candidate.
fn best_of(cands: Vec<Candidate>) -> Candidate {
    cands.into_iter().reduce(|best, c| if c.value > best.value { c } else { best }).expect("at least one candidate")
}

fn square_dim(phi: &KrausChannel) -> Result<usize> {
    if phi.dim_in() != phi.dim_out() {
        return Err(Error::Dimension(format!(
            "powers are computed for dimension-preserving channels, got {} -> {}",
            phi.dim_in(),
            phi.dim_out()
        )));
    }
    Ok(phi.dim_in())
}

fn check_range(ks: &RangeInclusive<usize>) -> Result<()> {
    if *ks.start() == 0 || ks.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "ancilla range {}..={} must be nonempty and start at 1 or more",
            ks.start(),
            ks.end()
        )));
    }
    Ok(())
}

fn check_kmax(k_max: usize) -> Result<()> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    Ok(())
}

fn seed_tag(cfg: &OptimizerConfig, kind: PowerKind, k: usize, family: u64) -> OptimizerConfig {
    let t = derive_seed(derive_seed(kind as u64 + 1, k as u64), family);
    cfg.derived(t)
}

/// Largest-weight eigenvector, used to seed pure families from a mixed optimum.
fn principal_vector(rho: &DensityMatrix) -> PureState {
    let eig = rho.matrix().clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().enumerate().fold(0, |b, (i, v)| if *v > eig.eigenvalues[b] { i } else { b });
    let v = eig.eigenvectors.column(top).into_owned();
    PureState::normalized(rho.dims().to_vec(), v).expect("eigenvectors are normalized")
}

/// `C(Phi[rho]) - C(rho)`.
pub fn cohering_gain(phi: &KrausChannel, measure: CoherenceMeasure, rho: &DensityMatrix) -> Result<f64> {
    Ok(coherence(measure, &phi.apply(rho)?) - coherence(measure, rho))
}

/// `C(Phi ⊗ 1 [rho_ab]) - C(rho_ab)` for a bipartite input.
pub fn extended_cohering_gain(phi: &KrausChannel, measure: CoherenceMeasure, rho_ab: &DensityMatrix) -> Result<f64> {
    Ok(coherence(measure, &phi.apply_on_first(rho_ab)?) - coherence(measure, rho_ab))
}

/// Optimizes over a pair of families, seeding each with the given starts.
fn optimize_pair<F>(
    objective: F,
    families: [(StateParameterization, Vec<Vec<f64>>); 2],
    cfg: &OptimizerConfig,
    kind: PowerKind,
    k: usize,
) -> (Candidate, BTreeMap<String, f64>)
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    let mut diags = BTreeMap::new();
    let mut cands = Vec::new();
    for (idx, (fam, starts)) in families.iter().enumerate() {
        let out = maximize_with_starts(&objective, fam, &seed_tag(cfg, kind, k, idx as u64), starts);
        diags.insert(format!("{}_value", fam.label()), out.best_value);
        diags.insert(format!("{}_converged_restarts", fam.label()), out.converged_count() as f64);
        cands.push(Candidate::from_outcome(&out, fam));
    }
    (best_of(cands), diags)
}

/// `sup_{sigma incoherent} C(Phi[sigma])`, attained at a basis state since
/// both measures are convex.
pub fn cohering_power(phi: &KrausChannel, measure: CoherenceMeasure, cfg: &OptimizerConfig) -> Result<PowerReport> {
    let d = square_dim(phi)?;
    let mut best: Option<Candidate> = None;
    for i in 0..d {
        let input = DensityMatrix::basis(d, i);
        let value = coherence(measure, &phi.apply(&input)?);
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(Candidate { value, state: input, family: "incoherent_vertex" });
        }
    }
    let best = best.expect("dimension is positive");
    let vertex = best.value;

    let fam = StateParameterization::Incoherent { dim: d };
    let cross_cfg = seed_tag(cfg, PowerKind::Cohering, 0, 0).with_restarts(cfg.restarts.min(8));
    let cross = maximize_with_starts(
        |r: &DensityMatrix| coherence(measure, &phi.apply(r).expect("dimension checked")),
        &fam,
        &cross_cfg,
        &[],
    );

    let mut report =
        PowerReport::new(PowerKind::Cohering, measure, 0, ExtendedReal::Finite(measure.max_value(d)), best, cfg);
    report.diag("interior_cross_check", cross.best_value);
    report.check("interior_cross_check", cross.best_value <= vertex + CROSS_CHECK_SLACK);
    Ok(report)
}

/// `sup_rho {C(Phi[rho]) - C(rho)}` over mixed and pure inputs.
pub fn generalized_cohering_power(
    phi: &KrausChannel,
    measure: CoherenceMeasure,
    cfg: &OptimizerConfig,
) -> Result<PowerReport> {
    let d = square_dim(phi)?;
    let mixed = StateParameterization::MixedState { dim: d };
    let pure = StateParameterization::PureState { dim: d };
    // basis states realize the plain cohering power, so the result dominates it
    let mixed_starts = (0..d).map(|i| mixed.encode_mixed(&DensityMatrix::basis(d, i))).collect::<Result<_>>()?;
    let pure_starts = (0..d).map(|i| pure.encode_pure(&PureState::basis(d, i))).collect::<Result<_>>()?;
    let objective = |r: &DensityMatrix| cohering_gain(phi, measure, r).expect("dimension checked");
    let (best, diags) =
        optimize_pair(objective, [(mixed, mixed_starts), (pure, pure_starts)], cfg, PowerKind::GeneralizedCohering, 0);
    let mut report = PowerReport::new(
        PowerKind::GeneralizedCohering,
        measure,
        0,
        ExtendedReal::Finite(measure.max_value(d)),
        best,
        cfg,
    );
    report.diagnostics.extend(diags);
    Ok(report)
}

/// Warm starts `rho_a ⊗ sigma_b` for the bipartite families, with
/// `sigma_b` in {|0><0|, |+_k><+_k|, I/k}.
fn product_starts(rho_a: &DensityMatrix, k: usize) -> Result<[(StateParameterization, Vec<Vec<f64>>); 2]> {
    let d = rho_a.dim();
    let mixed = StateParameterization::BipartiteMixed { dim_a: d, dim_b: k };
    let pure = StateParameterization::BipartitePure { dim_a: d, dim_b: k };
    let partners = [DensityMatrix::basis(k, 0), DensityMatrix::max_coherent(k), DensityMatrix::maximally_mixed(&[k])];
    let mixed_starts = partners.iter().map(|b| mixed.encode_mixed(&tensor(rho_a, b))).collect::<Result<_>>()?;
    let top = principal_vector(rho_a);
    let pure_starts = [PureState::basis(k, 0), PureState::max_coherent(k)]
        .iter()
        .map(|b| pure.encode_pure(&top.tensor(b)))
        .collect::<Result<_>>()?;
    Ok([(mixed, mixed_starts), (pure, pure_starts)])
}

/// Generalized cohering power of `Phi ⊗ 1_k` for every `k` in `1..=k_max`.
///
/// For `C_r` each value is checked against the single-system generalized
/// value; for `l1` the product construction
/// `[C(Phi rho_a) - C(rho_a)] (C(|+_k>) + 1)` is evaluated as well.
pub fn complete_cohering_power(
    phi: &KrausChannel,
    measure: CoherenceMeasure,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    let generalized = generalized_cohering_power(phi, measure, cfg)?;
    complete_cohering_from(phi, &generalized, k_max, cfg)
}

/// As [`complete_cohering_power`], reusing an already computed generalized
/// report.
pub fn complete_cohering_from(
    phi: &KrausChannel,
    generalized: &PowerReport,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    check_kmax(k_max)?;
    complete_cohering_over(phi, generalized, 1..=k_max, cfg)
}

/// Same, for the ancilla dimensions in `ks`.
pub fn complete_cohering_over(
    phi: &KrausChannel,
    generalized: &PowerReport,
    ks: RangeInclusive<usize>,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    let d = square_dim(phi)?;
    check_range(&ks)?;
    let measure = generalized.measure;
    let rho_a = &generalized.optimal_input;
    let single_gain = cohering_gain(phi, measure, rho_a)?;

    ks.into_par_iter()
        .map(|k| {
            let ext = phi.extend(k)?;
            let objective = |r: &DensityMatrix| {
                coherence(measure, &ext.apply(r).expect("dimension checked")) - coherence(measure, r)
            };
            let (best, diags) =
                optimize_pair(objective, product_starts(rho_a, k)?, cfg, PowerKind::CompleteCohering, k);
            let bound = match measure {
                CoherenceMeasure::RelEntropy => ExtendedReal::Finite(measure.max_value(d)),
                CoherenceMeasure::L1 => ExtendedReal::Infinity,
            };
            let mut report = PowerReport::new(PowerKind::CompleteCohering, measure, k, bound, best, cfg);
            report.diagnostics.extend(diags);
            report.diag("generalized_value", generalized.value);
            match measure {
                CoherenceMeasure::RelEntropy => {
                    let gap = report.value - generalized.value;
                    report.diag("gap_to_generalized", gap);
                    report.check("not_above_generalized", gap <= COMPLETE_COHERING_SLACK);
                }
                CoherenceMeasure::L1 => {
                    let formula = single_gain * (c_l1(&DensityMatrix::max_coherent(k)) + 1.0);
                    let direct = extended_cohering_gain(phi, measure, &tensor(rho_a, &DensityMatrix::max_coherent(k)))?;
                    report.diag("product_lower_bound", formula);
                    report.diag("product_direct", direct);
                    report.check("product_formula_consistent", (formula - direct).abs() <= 1e-8);
                }
            }
            Ok(report)
        })
        .collect()
}

/// `sup {C(rho) : Phi[rho] incoherent}` by penalty continuation on
/// `C(rho) - mu c_l1(Phi[rho])`, keeping only inputs that pass the final
/// feasibility gate.
pub fn decohering_power(phi: &KrausChannel, measure: CoherenceMeasure, cfg: &OptimizerConfig) -> Result<PowerReport> {
    let d = square_dim(phi)?;
    let families = [StateParameterization::MixedState { dim: d }, StateParameterization::PureState { dim: d }];

    let mut feasible_best: Option<Candidate> = None;
    let mut fallback: Option<Candidate> = None;
    let mut diags = BTreeMap::new();
    for (idx, fam) in families.iter().enumerate() {
        let fam_cfg = seed_tag(cfg, PowerKind::Decohering, 0, idx as u64);
        let mut params: Vec<Vec<f64>> = Vec::new();
        for (stage, &mu) in PENALTY_SCHEDULE.iter().enumerate() {
            let objective =
                |r: &DensityMatrix| coherence(measure, r) - mu * c_l1(&phi.apply(r).expect("dimension checked"));
            let out = if stage == 0 {
                maximize_with_starts(objective, fam, &fam_cfg, &[])
            } else {
                refine(objective, fam, &fam_cfg, &params)
            };
            params = out.restart_params;
        }
        let mut feasible_count = 0;
        for x in &params {
            let state = fam.decode(x)?;
            let residual = c_l1(&phi.apply(&state)?);
            let value = coherence(measure, &state);
            let cand = Candidate { value, state, family: fam.label() };
            if residual <= FEASIBILITY_TOL {
                feasible_count += 1;
                if feasible_best.as_ref().is_none_or(|b| value > b.value) {
                    feasible_best = Some(cand);
                }
            } else if fallback.as_ref().is_none_or(|b| residual < c_l1(&phi.apply(&b.state).expect("checked"))) {
                fallback = Some(cand);
            }
        }
        diags.insert(format!("{}_feasible_restarts", fam.label()), feasible_count as f64);
    }

    let feasible = feasible_best.is_some();
    let best = feasible_best.or(fallback.map(|c| Candidate { value: 0.0, ..c })).expect("at least one restart ran");
    let residual = c_l1(&phi.apply(&best.state)?);
    let mut report =
        PowerReport::new(PowerKind::Decohering, measure, 0, ExtendedReal::Finite(measure.max_value(d)), best, cfg);
    report.feasible = Some(feasible);
    report.diagnostics.extend(diags);
    report.diag("feasibility_residual", residual);
    report.diag("final_penalty", PENALTY_SCHEDULE[PENALTY_SCHEDULE.len() - 1]);
    Ok(report)
}

/// `sup_rho {C(rho) - C(Phi[rho])}`.
pub fn generalized_decohering_power(
    phi: &KrausChannel,
    measure: CoherenceMeasure,
    cfg: &OptimizerConfig,
) -> Result<PowerReport> {
    let d = square_dim(phi)?;
    let mixed = StateParameterization::MixedState { dim: d };
    let pure = StateParameterization::PureState { dim: d };
    let starts = [
        (mixed, vec![mixed.encode_mixed(&DensityMatrix::max_coherent(d))?]),
        (pure, vec![pure.encode_pure(&PureState::max_coherent(d))?]),
    ];
    let objective = |r: &DensityMatrix| -cohering_gain(phi, measure, r).expect("dimension checked");
    let (best, diags) = optimize_pair(objective, starts, cfg, PowerKind::GeneralizedDecohering, 0);
    let mut report = PowerReport::new(
        PowerKind::GeneralizedDecohering,
        measure,
        0,
        ExtendedReal::Finite(measure.max_value(d)),
        best,
        cfg,
    );
    report.diagnostics.extend(diags);
    Ok(report)
}

/// Generalized decohering power of `Phi ⊗ 1_k` for `k` in `1..=k_max`.
/// For `C_r` values are checked against `2 log2 d`.
pub fn complete_decohering_power(
    phi: &KrausChannel,
    measure: CoherenceMeasure,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    let generalized = generalized_decohering_power(phi, measure, cfg)?;
    complete_decohering_from(phi, &generalized, k_max, cfg)
}

/// As [`complete_decohering_power`], reusing a generalized decohering report.
pub fn complete_decohering_from(
    phi: &KrausChannel,
    generalized: &PowerReport,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    check_kmax(k_max)?;
    complete_decohering_over(phi, generalized, 1..=k_max, cfg)
}

/// Same, for the ancilla dimensions in `ks`.
pub fn complete_decohering_over(
    phi: &KrausChannel,
    generalized: &PowerReport,
    ks: RangeInclusive<usize>,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    let d = square_dim(phi)?;
    check_range(&ks)?;
    let measure = generalized.measure;
    let rho_a = &generalized.optimal_input;
    let bound = match measure {
        CoherenceMeasure::RelEntropy => ExtendedReal::Finite(2.0 * (d as f64).log2()),
        CoherenceMeasure::L1 => ExtendedReal::Infinity,
    };

    ks.into_par_iter()
        .map(|k| {
            let ext = phi.extend(k)?;
            let objective = |r: &DensityMatrix| {
                coherence(measure, r) - coherence(measure, &ext.apply(r).expect("dimension checked"))
            };
            let (best, diags) =
                optimize_pair(objective, product_starts(rho_a, k)?, cfg, PowerKind::CompleteDecohering, k);
            let marginal = partial_trace(&best.state, &[0])?;
            let mut report = PowerReport::new(PowerKind::CompleteDecohering, measure, k, bound, best, cfg);
            report.diagnostics.extend(diags);
            report.diag("generalized_value", generalized.value);
            report.diag("marginal_entropy_a", von_neumann_entropy(&marginal));
            if measure == CoherenceMeasure::RelEntropy {
                report.check("dimension_bound", bound.admits(report.value, DECOHERING_BOUND_SLACK));
            }
            Ok(report)
        })
        .collect()
}

/// Complete decohering power (C_r) with the input restricted to separable
/// states, searched first over products and then over mixtures of
/// `d * k` products seeded with the best product. Checked against `log2 d`.
pub fn separable_complete_decohering_power(
    phi: &KrausChannel,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    let generalized = generalized_decohering_power(phi, CoherenceMeasure::RelEntropy, cfg)?;
    separable_complete_decohering_from(phi, &generalized, k_max, cfg)
}

/// As [`separable_complete_decohering_power`], reusing a generalized
/// decohering report computed with the relative entropy of coherence.
pub fn separable_complete_decohering_from(
    phi: &KrausChannel,
    generalized: &PowerReport,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    check_kmax(k_max)?;
    separable_complete_decohering_over(phi, generalized, 1..=k_max, cfg)
}

/// Same, for the ancilla dimensions in `ks`.
pub fn separable_complete_decohering_over(
    phi: &KrausChannel,
    generalized: &PowerReport,
    ks: RangeInclusive<usize>,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    let d = square_dim(phi)?;
    check_range(&ks)?;
    let measure = CoherenceMeasure::RelEntropy;
    if generalized.measure != measure {
        return Err(Error::InvalidParameter("separable decohering power needs a rel-entropy report".into()));
    }
    let rho_a = &generalized.optimal_input;
    let bound = ExtendedReal::Finite((d as f64).log2());
    let kind = PowerKind::SeparableCompleteDecohering;

    ks.into_par_iter()
        .map(|k| {
            let ext = phi.extend(k)?;
            let objective =
                |r: &DensityMatrix| c_rel_entropy(r) - c_rel_entropy(&ext.apply(r).expect("dimension checked"));

            let product = StateParameterization::ProductAB { dim_a: d, dim_b: k };
            let seed = product.encode_product(rho_a, &DensityMatrix::basis(k, 0))?;
            let prod_out = maximize_with_starts(objective, &product, &seed_tag(cfg, kind, k, 0), &[seed]);

            let mixture = StateParameterization::separable(d, k);
            let a = partial_trace(&prod_out.best_state, &[0])?;
            let b = partial_trace(&prod_out.best_state, &[1])?;
            let seed = mixture.encode_product(&a, &b)?;
            let mix_out = maximize_with_starts(objective, &mixture, &seed_tag(cfg, kind, k, 1), &[seed]);

            let best = best_of(vec![
                Candidate::from_outcome(&prod_out, &product),
                Candidate::from_outcome(&mix_out, &mixture),
            ]);
            let mut report = PowerReport::new(kind, measure, k, bound, best, cfg);
            report.diag("product_ab_value", prod_out.best_value);
            report.diag("separable_mixture_value", mix_out.best_value);
            report.diag("separable_terms", (d * k) as f64);
            report.diag("generalized_value", generalized.value);
            report.diag("gap_to_generalized", report.value - generalized.value);
            report.check("dimension_bound", bound.admits(report.value, DECOHERING_BOUND_SLACK));
            Ok(report)
        })
        .collect()
}

/// Computes any power; single-system kinds return one report and ignore
/// `k_max`.
pub fn compute(
    kind: PowerKind,
    phi: &KrausChannel,
    measure: CoherenceMeasure,
    k_max: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<PowerReport>> {
    cfg.validate()?;
    match kind {
        PowerKind::Cohering => cohering_power(phi, measure, cfg).map(|r| vec![r]),
        PowerKind::GeneralizedCohering => generalized_cohering_power(phi, measure, cfg).map(|r| vec![r]),
        PowerKind::CompleteCohering => complete_cohering_power(phi, measure, k_max, cfg),
        PowerKind::Decohering => decohering_power(phi, measure, cfg).map(|r| vec![r]),
        PowerKind::GeneralizedDecohering => generalized_decohering_power(phi, measure, cfg).map(|r| vec![r]),
        PowerKind::CompleteDecohering => complete_decohering_power(phi, measure, k_max, cfg),
        PowerKind::SeparableCompleteDecohering => {
            if measure != CoherenceMeasure::RelEntropy {
                return Err(Error::InvalidParameter(
                    "separable complete decohering power is defined for rel-entropy only".into(),
                ));
            }
            separable_complete_decohering_power(phi, k_max, cfg)
        }
    }
}

/// Default ancilla range: up to 4 for qubits, keeping `d * k <= 16`.
pub fn default_k_max(d: usize) -> usize {
    (16 / d.max(1)).clamp(1, 4)
}

/// Single-letter bound on the coherence generating capacity, which is also
/// the capacity under maximally incoherent operations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CgenReport {
    pub cgen_upper_bound: f64,
    pub cgen_mio_value: f64,
    pub generalized: PowerReport,
}

pub fn cgen_report(phi: &KrausChannel, cfg: &OptimizerConfig) -> Result<CgenReport> {
    let generalized = generalized_cohering_power(phi, CoherenceMeasure::RelEntropy, cfg)?;
    Ok(CgenReport { cgen_upper_bound: generalized.value, cgen_mio_value: generalized.value, generalized })
}

pub fn cgen_upper_bound(phi: &KrausChannel, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(cgen_report(phi, cfg)?.cgen_upper_bound)
}

/// `sin t |0+> + cos t |1->` and `sin t |+0> + cos t |-1>`.
pub fn psi_phi_states(theta: f64) -> (PureState, PureState) {
    let zero = PureState::basis(2, 0);
    let one = PureState::basis(2, 1);
    let plus = PureState::max_coherent(2);
    let minus = PureState::max_coherent_with_phases(&[0.0, std::f64::consts::PI]);
    let combine = |a: PureState, b: PureState| {
        let v =
            a.amplitudes() * crate::quantum::c(theta.sin(), 0.0) + b.amplitudes() * crate::quantum::c(theta.cos(), 0.0);
        PureState::normalized(vec![2, 2], v).expect("orthogonal terms with unit total weight")
    };
    (combine(zero.tensor(&plus), one.tensor(&minus)), combine(plus.tensor(&zero), minus.tensor(&one)))
}

/// Post-erasure `C_r` of the two states above. Their pre-channel
/// coherences agree; that is verified before returning.
pub fn psi_phi_asymmetry(theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!("theta = {theta} outside (0, pi/2)")));
    }
    let (psi, phi_state) = psi_phi_states(theta);
    let (psi, phi_state) = (psi.to_density(), phi_state.to_density());
    let before = (c_rel_entropy(&psi) - c_rel_entropy(&phi_state)).abs();
    if before > 1e-9 {
        return Err(Error::InvalidState { check: "equal pre-channel coherence", residual: before });
    }
    let erasing = zoo::build(&zoo::ChannelSpec::Erasing { dim: 2, target: 0 })?;
    Ok((c_rel_entropy(&erasing.apply_on_first(&psi)?), c_rel_entropy(&erasing.apply_on_first(&phi_state)?)))
}
