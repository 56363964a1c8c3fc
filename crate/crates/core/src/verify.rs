//! Randomized cross-checking of recursion vs. series oracle vs. closed form.
//!
//! A sweep draws parameters per family from a seeded counter-based generator
//! (ChaCha8, one stream per target), rejects draws whose recursion tree comes
//! too close to a pole, then checks every admissible index up to `k_max` by
//! evaluating all applicable faces and comparing them pairwise. Domain
//! failures never abort a sweep; they become skipped outcomes with a
//! machine-readable reason.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closedforms::{self};
use crate::recursions::{
    self, direct_value_with, oracle_policy, pole_prescan, recurse, FamilyId, MemoTable,
    RecursionError, ALL_FAMILIES, UNITY_ORACLE_RELAXED_TARGET,
};
use crate::series::{classify, ConvergenceClass, SeriesError, TailMode};

/// What one sweep entry checks: a recursion family (three-way agreement) or
/// the standalone Choi gamma identity (two-sided residual).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckTarget {
    Family(FamilyId),
    ChoiIdentity,
}

/// All sweepable targets: the ten families plus the Choi identity.
pub fn all_targets() -> Vec<CheckTarget> {
    let mut targets: Vec<CheckTarget> =
        ALL_FAMILIES.iter().copied().map(CheckTarget::Family).collect();
    targets.push(CheckTarget::ChoiIdentity);
    targets
}

impl CheckTarget {
    pub fn name(&self) -> &'static str {
        match self {
            CheckTarget::Family(f) => f.name(),
            CheckTarget::ChoiIdentity => "choi-identity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        if name == "choi-identity" {
            Some(CheckTarget::ChoiIdentity)
        } else {
            FamilyId::from_name(name).map(CheckTarget::Family)
        }
    }

    /// Fixed stream index, stable across target subsets so a family sees the
    /// same draws whether swept alone or together with others.
    fn stream(&self) -> u64 {
        match self {
            CheckTarget::Family(f) => ALL_FAMILIES.iter().position(|g| g == f).unwrap() as u64,
            CheckTarget::ChoiIdentity => ALL_FAMILIES.len() as u64,
        }
    }

    pub fn k_values(&self, k_max: i32) -> Vec<i32> {
        match self {
            CheckTarget::Family(f) => match f {
                FamilyId::Srivastava => (0..=k_max).map(|k| -k).collect(),
                _ => (f.base_k()..=k_max).collect(),
            },
            CheckTarget::ChoiIdentity => (1..=k_max).collect(),
        }
    }
}

/// Sweep configuration. `parameter_box` overrides the per-family recommended
/// sampling intervals (entries applied positionally to the real-valued
/// parameters; a single entry applies to all of them); integer parameters
/// (Srivastava/Pfaff n, the Gauss j flag) are drawn separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub draws_per_family: u32,
    pub parameter_box: Option<Vec<(f64, f64)>>,
    pub pole_margin: f64,
    pub k_max: i32,
    pub s_min: f64,
    pub integer_param_max: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            draws_per_family: 50,
            parameter_box: None,
            pole_margin: 0.05,
            k_max: 8,
            s_min: 1.25,
            integer_param_max: 5,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.pole_margin <= 0.0 {
            return Err("pole_margin must be positive".into());
        }
        if self.k_max < 1 {
            return Err("k_max must be at least 1".into());
        }
        if let Some(boxes) = &self.parameter_box {
            if boxes.is_empty() || boxes.iter().any(|(lo, hi)| !(lo < hi)) {
                return Err("parameter_box intervals must be nonempty".into());
            }
        }
        Ok(())
    }
}

/// Recommended sampling interval for each real-valued parameter. Most
/// parameters live in (0.1, 3.0); the ones controlling the convergence
/// abscissa of a 3F2-at-unity definition are pushed up so the series oracle
/// stays applicable for every k up to the default k_max.
fn recommended_box(target: CheckTarget, index: usize) -> (f64, f64) {
    const DEFAULT: (f64, f64) = (0.1, 3.0);
    match target {
        CheckTarget::Family(FamilyId::Miller) => match index {
            0 | 1 => (0.1, 1.3),
            3 => (12.5, 15.5),
            _ => DEFAULT,
        },
        // Dixon trades off oracle coverage against recursion conditioning:
        // the defining series needs a > 2(b+c+k) - 2 while the step
        // coefficients grow like a^2/k and amplify the base's gamma-bracket
        // cancellation. Moderate a keeps the walk accurate through the k
        // where the oracle still converges; beyond that the oracle face is
        // skipped.
        CheckTarget::Family(FamilyId::Dixon) => match index {
            0 => (8.2, 10.2),
            _ => (0.25, 0.65),
        },
        CheckTarget::Family(FamilyId::WatsonLavoie) => match index {
            2 => (3.8, 6.0),
            _ => DEFAULT,
        },
        CheckTarget::Family(FamilyId::WatsonShift) => match index {
            2 => (11.8, 14.0),
            _ => DEFAULT,
        },
        CheckTarget::Family(FamilyId::Bailey) => match index {
            0 => (0.1, 1.5),
            1 => (0.1, 1.0),
            2 => (2.4, 4.0),
            _ => DEFAULT,
        },
        _ => DEFAULT,
    }
}

fn param_box(target: CheckTarget, index: usize, config: &SamplerConfig) -> (f64, f64) {
    match &config.parameter_box {
        Some(boxes) => *boxes.get(index).unwrap_or_else(|| boxes.last().unwrap()),
        None => recommended_box(target, index),
    }
}

fn draw_params(target: CheckTarget, config: &SamplerConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let names: &[&str] = match target {
        CheckTarget::Family(f) => f.param_names(),
        CheckTarget::ChoiIdentity => &["a", "b"],
    };
    names
        .iter()
        .enumerate()
        .map(|(i, name)| match *name {
            "n" => rng.random_range(0..=config.integer_param_max) as f64,
            "j" => rng.random_range(0..=1u32) as f64,
            _ => {
                let (lo, hi) = param_box(target, i, config);
                rng.random_range(lo..hi)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    OraclePreconditionUnmet,
    OracleNoConvergence,
    CoefficientPole,
    DegenerateBase,
    PoleProximity,
    CollapsedIndex,
    InvalidPoint,
}

fn reason_for(err: &RecursionError) -> SkipReason {
    match err {
        RecursionError::CoefficientPole { .. } => SkipReason::CoefficientPole,
        RecursionError::DegenerateBase { .. } => SkipReason::DegenerateBase,
        RecursionError::BaseGamma { .. } => SkipReason::PoleProximity,
        RecursionError::CollapsedIndex { .. } => SkipReason::CollapsedIndex,
        RecursionError::Series(SeriesError::NoConvergence { .. }) => {
            SkipReason::OracleNoConvergence
        }
        RecursionError::Series(_) => SkipReason::OraclePreconditionUnmet,
        _ => SkipReason::InvalidPoint,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One pairwise comparison between two evaluation faces.
#[derive(Debug, Clone, Serialize)]
pub struct PairDiff {
    pub pair: &'static str,
    pub abs_diff: f64,
    pub tolerance: f64,
    /// True when the pair was compared at the relaxed unity-oracle bound.
    pub relaxed: bool,
}

/// Everything recorded about one checked point.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub target: &'static str,
    pub k: i32,
    pub params: Vec<f64>,
    pub recursion_value: Option<f64>,
    pub oracle_value: Option<f64>,
    pub closedform_value: Option<f64>,
    pub oracle_error_estimate: Option<f64>,
    pub abs_diffs: Vec<PairDiff>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<SkipReason>,
}

/// Compute every applicable face of one point and compare them pairwise with
/// tolerance `max(tol_abs, tol_rel * magnitude)`. Total: domain failures are
/// converted to skipped outcomes, never raised.
pub fn check_point(
    target: CheckTarget,
    k: i32,
    params: &[f64],
    tol_abs: f64,
    tol_rel: f64,
    s_min: f64,
) -> CheckOutcome {
    check_point_with_memo(target, k, params, tol_abs, tol_rel, s_min, &MemoTable::new())
}

/// [`check_point`] reusing a caller-held memo table, so sweeps share base
/// values across the k range of one draw.
#[allow(clippy::too_many_arguments)]
pub fn check_point_with_memo(
    target: CheckTarget,
    k: i32,
    params: &[f64],
    tol_abs: f64,
    tol_rel: f64,
    s_min: f64,
    memo: &MemoTable,
) -> CheckOutcome {
    let mut outcome = CheckOutcome {
        target: target.name(),
        k,
        params: params.to_vec(),
        recursion_value: None,
        oracle_value: None,
        closedform_value: None,
        oracle_error_estimate: None,
        abs_diffs: Vec::new(),
        status: CheckStatus::Skipped,
        skip_reason: None,
    };
    let mut first_reason: Option<SkipReason> = None;
    let mut note_reason = |slot: &mut Option<SkipReason>, reason: SkipReason| {
        if slot.is_none() {
            *slot = Some(reason);
        }
    };

    match target {
        CheckTarget::Family(family) => {
            match recurse(family, k, params, memo) {
                Ok(v) => outcome.recursion_value = Some(v),
                Err(e) => note_reason(&mut first_reason, reason_for(&e)),
            }

            match oracle_face(family, k, params, s_min) {
                Ok((value, estimate)) => {
                    outcome.oracle_value = Some(value);
                    outcome.oracle_error_estimate = Some(estimate);
                }
                Err(reason) => note_reason(&mut first_reason, reason),
            }

            if let Some(result) = closedforms::evaluate_for_family(family, k, params) {
                match result {
                    Ok(v) => outcome.closedform_value = Some(v),
                    Err(_) => note_reason(&mut first_reason, SkipReason::PoleProximity),
                }
            }
        }
        CheckTarget::ChoiIdentity => {
            match closedforms::choi_identity_sides(params[0], params[1], k) {
                Ok((lhs, rhs)) => {
                    outcome.oracle_value = Some(lhs);
                    outcome.closedform_value = Some(rhs);
                }
                Err(_) => note_reason(&mut first_reason, SkipReason::PoleProximity),
            }
        }
    }

    let relaxed_oracle = outcome.oracle_error_estimate.is_some_and(|e| e > 1e-9);
    let faces = [
        (
            "recursion-oracle",
            outcome.recursion_value,
            outcome.oracle_value,
            true,
        ),
        (
            "recursion-closedform",
            outcome.recursion_value,
            outcome.closedform_value,
            false,
        ),
        (
            "oracle-closedform",
            outcome.oracle_value,
            outcome.closedform_value,
            true,
        ),
    ];
    let mut failed = false;
    let mut compared = 0;
    for (pair, left, right, involves_oracle) in faces {
        let (Some(x), Some(y)) = (left, right) else {
            continue;
        };
        compared += 1;
        let magnitude = x.abs().max(y.abs());
        let relaxed = involves_oracle && relaxed_oracle;
        let tolerance = if relaxed {
            UNITY_ORACLE_RELAXED_TARGET.max(tol_rel * magnitude)
        } else {
            tol_abs.max(tol_rel * magnitude)
        };
        let abs_diff = (x - y).abs();
        if abs_diff > tolerance {
            failed = true;
        }
        outcome.abs_diffs.push(PairDiff {
            pair,
            abs_diff,
            tolerance,
            relaxed,
        });
    }

    outcome.status = if failed {
        CheckStatus::Fail
    } else if compared >= 1 {
        CheckStatus::Pass
    } else {
        outcome.skip_reason = first_reason.or(Some(SkipReason::OraclePreconditionUnmet));
        CheckStatus::Skipped
    };
    outcome
}

/// The series-oracle face: classify, guard the unity abscissa, then evaluate
/// under the family's policy with the two-tier target.
fn oracle_face(
    family: FamilyId,
    k: i32,
    params: &[f64],
    s_min: f64,
) -> std::result::Result<(f64, f64), SkipReason> {
    let spec = recursions::defining_spec(family, k, params)
        .map_err(|_| SkipReason::OraclePreconditionUnmet)?;
    let class = classify(&spec);
    let algebraic = oracle_policy(family, 0.0).tail_mode == TailMode::Algebraic;
    match class {
        ConvergenceClass::Terminating => {}
        ConvergenceClass::AbsolutelyConvergent => {
            if algebraic && spec.balance() < s_min {
                return Err(SkipReason::OraclePreconditionUnmet);
            }
        }
        _ => return Err(SkipReason::OraclePreconditionUnmet),
    }
    let result = if algebraic {
        recursions::direct_value(family, k, params)
    } else {
        direct_value_with(family, k, params, &oracle_policy(family, 1e-12))
    };
    match result {
        Ok(eval) => Ok((eval.value, eval.abs_error_estimate)),
        Err(e) => Err(reason_for(&e)),
    }
}

/// Per-target aggregation of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct TargetReport {
    pub target: &'static str,
    pub draws: u32,
    pub rejected_draws: u32,
    pub attempted: u32,
    pub pass: u32,
    pub fail: u32,
    pub skipped: u32,
    pub worst_abs_diff: f64,
    pub skip_reasons: BTreeMap<String, u32>,
    pub failures: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub attempted: u32,
    pub pass: u32,
    pub fail: u32,
    pub skipped: u32,
}

/// Machine-readable sweep report. Contains no timestamps; the serialized
/// body is byte-identical for identical configurations.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub generator: &'static str,
    pub config: SamplerConfig,
    pub targets: Vec<TargetReport>,
    pub totals: Totals,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Default pairwise tolerances for sweep comparisons.
pub const SWEEP_TOL_ABS: f64 = 1e-8;
pub const SWEEP_TOL_REL: f64 = 1e-8;

/// Attempts per draw before the sampler gives up rejecting; the draw is then
/// checked as-is and surfaces as a skip.
const MAX_REJECTIONS_PER_DRAW: u32 = 1000;

/// Deterministic randomized sweep over the requested targets.
pub fn sweep(config: &SamplerConfig, targets: &[CheckTarget]) -> VerificationReport {
    let draw_sets: Vec<(CheckTarget, Vec<Vec<f64>>, u32)> = targets
        .iter()
        .map(|&target| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(target.stream());
            let mut rejected = 0u32;
            let mut draws = Vec::with_capacity(config.draws_per_family as usize);
            for _ in 0..config.draws_per_family {
                let mut attempts = 0;
                let params = loop {
                    let candidate = draw_params(target, config, &mut rng);
                    let accepted = match target {
                        CheckTarget::Family(family) => {
                            let far_k = match family {
                                FamilyId::Srivastava => -config.k_max,
                                _ => config.k_max.max(family.base_k()),
                            };
                            pole_prescan(family, far_k, &candidate, config.pole_margin).is_ok()
                        }
                        // The identity's numerator gamma arguments stay
                        // positive; pole-crossing denominators are part of
                        // what it must balance, so nothing to reject.
                        CheckTarget::ChoiIdentity => true,
                    };
                    if accepted {
                        break candidate;
                    }
                    rejected += 1;
                    attempts += 1;
                    if attempts >= MAX_REJECTIONS_PER_DRAW {
                        break candidate;
                    }
                };
                draws.push(params);
            }
            (target, draws, rejected)
        })
        .collect();

    let target_reports: Vec<TargetReport> = draw_sets
        .par_iter()
        .map(|(target, draws, rejected)| {
            let k_values = target.k_values(config.k_max);
            let outcomes: Vec<CheckOutcome> = draws
                .par_iter()
                .flat_map_iter(|params| {
                    let memo = MemoTable::new();
                    k_values
                        .iter()
                        .map(|&k| {
                            check_point_with_memo(
                                *target,
                                k,
                                params,
                                SWEEP_TOL_ABS,
                                SWEEP_TOL_REL,
                                config.s_min,
                                &memo,
                            )
                        })
                        .collect::<Vec<_>>()
                })
                .collect();

            let mut report = TargetReport {
                target: target.name(),
                draws: config.draws_per_family,
                rejected_draws: *rejected,
                attempted: outcomes.len() as u32,
                pass: 0,
                fail: 0,
                skipped: 0,
                worst_abs_diff: 0.0,
                skip_reasons: BTreeMap::new(),
                failures: Vec::new(),
            };
            for outcome in outcomes {
                match outcome.status {
                    CheckStatus::Pass => report.pass += 1,
                    CheckStatus::Fail => report.fail += 1,
                    CheckStatus::Skipped => {
                        report.skipped += 1;
                        let reason = outcome
                            .skip_reason
                            .map(|r| {
                                serde_json::to_value(r)
                                    .unwrap()
                                    .as_str()
                                    .unwrap()
                                    .to_owned()
                            })
                            .unwrap_or_else(|| "unknown".into());
                        *report.skip_reasons.entry(reason).or_insert(0) += 1;
                    }
                }
                for diff in &outcome.abs_diffs {
                    report.worst_abs_diff = report.worst_abs_diff.max(diff.abs_diff);
                }
                if outcome.status == CheckStatus::Fail {
                    report.failures.push(outcome);
                }
            }
            report.failures.sort_by(|a, b| {
                (a.k, a.params.iter().map(|p| p.to_bits()).collect::<Vec<_>>())
                    .cmp(&(b.k, b.params.iter().map(|p| p.to_bits()).collect()))
            });
            report
        })
        .collect();

    let totals = Totals {
        attempted: target_reports.iter().map(|t| t.attempted).sum(),
        pass: target_reports.iter().map(|t| t.pass).sum(),
        fail: target_reports.iter().map(|t| t.fail).sum(),
        skipped: target_reports.iter().map(|t| t.skipped).sum(),
    };

    VerificationReport {
        report_version: 1,
        generator: "chacha8",
        config: config.clone(),
        targets: target_reports,
        totals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(draws: u32) -> SamplerConfig {
        SamplerConfig {
            draws_per_family: draws,
            k_max: 4,
            ..SamplerConfig::default()
        }
    }

    #[test]
    fn check_point_three_way_pass() {
        let outcome = check_point(
            CheckTarget::Family(FamilyId::Gauss2ndDiag),
            3,
            &[0.7],
            1e-10,
            1e-9,
            1.25,
        );
        assert_eq!(outcome.status, CheckStatus::Pass);
        assert!(outcome.recursion_value.is_some());
        assert!(outcome.oracle_value.is_some());
        assert!(outcome.closedform_value.is_some());
        assert_eq!(outcome.abs_diffs.len(), 3);
    }

    #[test]
    fn check_point_skips_on_coefficient_pole() {
        // Kummer at b = a + 1 makes the (a-b+1) step denominator vanish at
        // the unshifted point, so recursion and closed form both drop out.
        let outcome = check_point(
            CheckTarget::Family(FamilyId::Kummer),
            5,
            &[0.5, 1.5],
            1e-10,
            1e-9,
            1.25,
        );
        assert_eq!(outcome.status, CheckStatus::Skipped);
        assert_eq!(outcome.skip_reason, Some(SkipReason::CoefficientPole));
    }

    #[test]
    fn check_point_exact_family_pass() {
        let outcome = check_point(
            CheckTarget::Family(FamilyId::PfaffSaalschutz),
            2,
            &[1.0, 0.5, 0.5, 0.25],
            1e-10,
            1e-9,
            1.25,
        );
        assert_eq!(outcome.status, CheckStatus::Pass);
    }

    #[test]
    fn check_point_choi_identity() {
        let outcome = check_point(CheckTarget::ChoiIdentity, 3, &[1.3, 0.4], 1e-10, 1e-9, 1.25);
        assert_eq!(outcome.status, CheckStatus::Pass);
        assert_eq!(outcome.abs_diffs.len(), 1);
        assert_eq!(outcome.abs_diffs[0].pair, "oracle-closedform");
    }

    #[test]
    fn sweep_is_deterministic() {
        let config = small_config(4);
        let targets = all_targets();
        let first = sweep(&config, &targets).to_json();
        let second = sweep(&config, &targets).to_json();
        assert_eq!(first, second);
    }

    #[test]
    fn sweep_with_zero_draws_is_empty() {
        let report = sweep(&small_config(0), &all_targets());
        assert_eq!(report.totals.attempted, 0);
        assert_eq!(report.totals.pass, 0);
        assert_eq!(report.totals.fail, 0);
        assert_eq!(report.totals.skipped, 0);
    }

    #[test]
    fn sweep_counts_are_consistent() {
        let config = small_config(3);
        let report = sweep(&config, &all_targets());
        for target_report in &report.targets {
            let target = CheckTarget::from_name(target_report.target).unwrap();
            let expected = config.draws_per_family * target.k_values(config.k_max).len() as u32;
            assert_eq!(target_report.attempted, expected, "{}", target_report.target);
            assert_eq!(
                target_report.pass + target_report.fail + target_report.skipped,
                target_report.attempted
            );
        }
    }

    #[test]
    fn sweep_has_no_failures_and_low_skip_rate_under_default_boxes() {
        let config = small_config(6);
        let report = sweep(&config, &all_targets());
        assert_eq!(report.totals.fail, 0, "{}", report.to_json());
        let skip_rate = report.totals.skipped as f64 / report.totals.attempted as f64;
        assert!(skip_rate < 0.20, "skip rate {skip_rate}");
    }

    #[test]
    fn zero_tolerance_reports_failure() {
        let outcome = check_point(
            CheckTarget::Family(FamilyId::WatsonLavoie),
            2,
            &[0.5, 0.7, 4.1],
            0.0,
            0.0,
            1.25,
        );
        assert_eq!(outcome.status, CheckStatus::Fail);
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::default().validate().is_ok());
        assert!(SamplerConfig {
            pole_margin: 0.0,
            ..SamplerConfig::default()
        }
        .validate()
        .is_err());
        assert!(SamplerConfig {
            parameter_box: Some(vec![(2.0, 1.0)]),
            ..SamplerConfig::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn target_round_trip() {
        for target in all_targets() {
            assert_eq!(CheckTarget::from_name(target.name()), Some(target));
        }
        assert_eq!(CheckTarget::from_name("nosuch"), None);
    }
}
