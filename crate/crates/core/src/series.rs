//! Definition-level evaluation of 2F1 and generalized pFq series.
//!
//! This is the independent oracle: everything else in the crate (recursions,
//! closed forms, contiguous relations) is ultimately checked against plain
//! term-by-term summation of the defining series, either in floating point
//! with an explicit tail bound or exactly in big-rational arithmetic for
//! terminating instances.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{is_nonpositive_int, Scalar};

/// A generalized hypergeometric series instance: upper and lower parameter
/// lists plus the argument.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSpec {
    upper: Vec<f64>,
    lower: Vec<f64>,
    z: f64,
}

/// Exact-domain counterpart of [`HypSpec`] for terminating sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactHypSpec {
    upper: Vec<BigRational>,
    lower: Vec<BigRational>,
    z: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvergenceClass {
    Terminating,
    AbsolutelyConvergent,
    ConditionallyConvergent,
    Divergent,
}

/// How the truncation tail is bounded when the series does not terminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// |term_N| r/(1-r) with r the worst of the next three term ratios; for
    /// |z| < 1.
    Geometric,
    /// |term_N| N/(s-1) with s = sum(lower) - sum(upper); for |z| = 1, s > 1.
    Algebraic,
    /// No tail model: the last included term is reported as the estimate.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationPolicy {
    pub max_terms: u64,
    pub target_abs_error: f64,
    pub tail_mode: TailMode,
}

impl Default for SummationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 2_000_000,
            target_abs_error: 1e-12,
            tail_mode: TailMode::Geometric,
        }
    }
}

impl SummationPolicy {
    /// Policy with the tail model matched to the argument: geometric inside
    /// the unit disk, algebraic on its boundary.
    pub fn for_argument(z: f64) -> Self {
        let tail_mode = if z.abs() < 1.0 {
            TailMode::Geometric
        } else {
            TailMode::Algebraic
        };
        Self {
            tail_mode,
            ..Self::default()
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target_abs_error = target;
        self
    }
}

/// Outcome of one floating series evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: u64,
    pub class: ConvergenceClass,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("parameters and argument must be finite")]
    NonFiniteParameter,
    #[error("lower parameter {value} is a nonpositive integer; the series hits a pole")]
    LowerParameterPole { value: f64 },
    #[error("an upper and a lower parameter are both nonpositive integers; rejected rather than interpreted by limits")]
    UpperLowerBothNonpositive,
    #[error("series class {class:?} is outside this operation's domain")]
    OutsideDomain { class: ConvergenceClass },
    #[error("series does not terminate")]
    NotTerminating,
    #[error("lower-parameter pole reached at m = {m} before the termination index {n}")]
    PoleBeforeTermination { m: u64, n: u64 },
    #[error("no convergence: {terms} terms summed, tail estimate {tail:e} above target {target:e}")]
    NoConvergence { terms: u64, tail: f64, target: f64 },
    #[error("term magnitude left the f64 range at m = {m}")]
    TermOverflow { m: u64 },
    #[error("pfaff transform requires a 2F1 spec with z < 1 and z != 0")]
    PfaffPrecondition,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

impl HypSpec {
    /// Validates the parameter lists. Nonpositive-integer lower parameters
    /// are rejected: with no terminating upper parameter the series hits the
    /// pole, and with one the instance is ambiguous and not used here.
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, z: f64) -> Result<Self> {
        if !z.is_finite()
            || upper.iter().any(|x| !x.is_finite())
            || lower.iter().any(|x| !x.is_finite())
        {
            return Err(SeriesError::NonFiniteParameter);
        }
        if let Some(&bad) = lower.iter().find(|&&x| is_nonpositive_int(x)) {
            if upper.iter().any(|&x| is_nonpositive_int(x)) {
                return Err(SeriesError::UpperLowerBothNonpositive);
            }
            return Err(SeriesError::LowerParameterPole { value: bad });
        }
        Ok(Self { upper, lower, z })
    }

    pub fn gauss(a: f64, b: f64, c: f64, z: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![c], z)
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn argument(&self) -> f64 {
        self.z
    }

    /// Termination index n: the series is the finite sum over m = 0..=n.
    /// Determined by the nonpositive-integer upper parameter of smallest
    /// magnitude.
    pub fn termination_index(&self) -> Option<u64> {
        self.upper
            .iter()
            .filter(|&&x| is_nonpositive_int(x))
            .map(|&x| (-x.round()) as u64)
            .min()
    }

    /// sum(lower) - sum(upper), the convergence abscissa at |z| = 1.
    pub fn balance(&self) -> f64 {
        self.lower.iter().sum::<f64>() - self.upper.iter().sum::<f64>()
    }
}

impl ExactHypSpec {
    pub fn new(
        upper: Vec<BigRational>,
        lower: Vec<BigRational>,
        z: BigRational,
    ) -> Result<Self> {
        let nonpos_int = |q: &BigRational| q.is_integer() && !q.is_positive();
        if let Some(bad) = lower.iter().find(|q| nonpos_int(q)) {
            if upper.iter().any(nonpos_int) {
                return Err(SeriesError::UpperLowerBothNonpositive);
            }
            return Err(SeriesError::LowerParameterPole {
                value: bad.to_f64(),
            });
        }
        Ok(Self { upper, lower, z })
    }

    pub fn termination_index(&self) -> Option<u64> {
        self.upper
            .iter()
            .filter(|q| q.is_integer() && !q.is_positive())
            .map(|q| Scalar::to_f64(&-q.clone()) as u64)
            .min()
    }

    /// Floating-point view of the same instance.
    pub fn to_float(&self) -> Result<HypSpec> {
        HypSpec::new(
            self.upper.iter().map(Scalar::to_f64).collect(),
            self.lower.iter().map(Scalar::to_f64).collect(),
            Scalar::to_f64(&self.z),
        )
    }
}

/// The convergence case analysis. Total on valid specs.
///
/// Terminating takes precedence. Otherwise: p <= q converges everywhere;
/// p = q+1 converges absolutely inside the unit disk, and on its boundary the
/// balance s = Re(sum lower - sum upper) decides (absolute for s > 0,
/// conditional for -1 < s <= 0 away from z = 1, divergent otherwise);
/// p > q+1 diverges for every z != 0.
pub fn classify(spec: &HypSpec) -> ConvergenceClass {
    if spec.termination_index().is_some() {
        return ConvergenceClass::Terminating;
    }
    if spec.z == 0.0 {
        return ConvergenceClass::AbsolutelyConvergent;
    }
    let p = spec.upper.len();
    let q = spec.lower.len();
    if p <= q {
        return ConvergenceClass::AbsolutelyConvergent;
    }
    if p > q + 1 {
        return ConvergenceClass::Divergent;
    }
    let abs_z = spec.z.abs();
    if abs_z < 1.0 {
        ConvergenceClass::AbsolutelyConvergent
    } else if abs_z == 1.0 {
        let s = spec.balance();
        if s > 0.0 {
            ConvergenceClass::AbsolutelyConvergent
        } else if s > -1.0 && spec.z != 1.0 {
            ConvergenceClass::ConditionallyConvergent
        } else {
            ConvergenceClass::Divergent
        }
    } else {
        ConvergenceClass::Divergent
    }
}

/// The factor turning term_m into term_{m+1}, without the argument:
/// prod(upper + m) / (prod(lower + m) * (m + 1)).
fn ratio_factor(spec: &HypSpec, m: u64) -> f64 {
    let m = m as f64;
    let num: f64 = spec.upper.iter().map(|a| a + m).product();
    let den: f64 = spec.lower.iter().map(|b| b + m).product::<f64>() * (m + 1.0);
    num / den
}

fn tail_estimate(spec: &HypSpec, policy: &SummationPolicy, term: f64, m: u64) -> f64 {
    match policy.tail_mode {
        TailMode::Geometric => {
            let r = spec.z.abs()
                * (0..3)
                    .map(|j| ratio_factor(spec, m + j).abs())
                    .fold(0.0f64, f64::max);
            if r < 1.0 {
                term.abs() * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        }
        TailMode::Algebraic => {
            let s = spec.balance();
            if s > 1.0 {
                term.abs() * m as f64 / (s - 1.0)
            } else {
                f64::INFINITY
            }
        }
        TailMode::None => term.abs(),
    }
}

/// Direct definitional summation with the running term recurrence
/// term_{m+1} = term_m * prod(upper+m)/prod(lower+m) * z/(m+1).
pub fn evaluate_series(spec: &HypSpec, policy: &SummationPolicy) -> Result<EvalResult> {
    let class = classify(spec);
    match class {
        ConvergenceClass::Terminating | ConvergenceClass::AbsolutelyConvergent => {}
        _ => return Err(SeriesError::OutsideDomain { class }),
    }

    let stop_index = spec.termination_index();
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut m = 0u64;

    loop {
        if stop_index == Some(m) {
            return Ok(EvalResult {
                value: sum,
                abs_error_estimate: 0.0,
                terms_used: m + 1,
                class,
            });
        }
        if m + 1 >= policy.max_terms {
            let tail = tail_estimate(spec, policy, term, m);
            if stop_index.is_none() && tail <= policy.target_abs_error {
                return Ok(EvalResult {
                    value: sum,
                    abs_error_estimate: tail,
                    terms_used: m + 1,
                    class,
                });
            }
            return Err(SeriesError::NoConvergence {
                terms: m + 1,
                tail,
                target: policy.target_abs_error,
            });
        }

        term *= ratio_factor(spec, m) * spec.z;
        sum += term;
        m += 1;
        if !term.is_finite() {
            return Err(SeriesError::TermOverflow { m });
        }

        if stop_index.is_none() && term.abs() < policy.target_abs_error {
            let tail = tail_estimate(spec, policy, term, m);
            if tail < policy.target_abs_error {
                return Ok(EvalResult {
                    value: sum,
                    abs_error_estimate: tail,
                    terms_used: m + 1,
                    class,
                });
            }
        }
    }
}

/// Exact finite sum of a terminating series with rational data.
pub fn evaluate_terminating_exact(spec: &ExactHypSpec) -> Result<BigRational> {
    let n = spec.termination_index().ok_or(SeriesError::NotTerminating)?;
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    for m in 0..n {
        let m_rat = <BigRational as Scalar>::from_int(m as i64);
        for b in &spec.lower {
            if (b.clone() + m_rat.clone()).is_zero() {
                return Err(SeriesError::PoleBeforeTermination { m, n });
            }
        }
        let mut factor = spec.z.clone();
        for a in &spec.upper {
            factor = factor * (a.clone() + m_rat.clone());
        }
        for b in &spec.lower {
            factor = factor / (b.clone() + m_rat.clone());
        }
        factor = factor / <BigRational as Scalar>::from_int(m as i64 + 1);
        term = term * factor;
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// Pfaff's argument transformation for a 2F1 spec:
/// F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)).
///
/// Returns the transformed spec and the scalar prefactor. Used to move
/// z = -1 instances to the absolutely convergent argument 1/2.
pub fn pfaff_transform_2f1(spec: &HypSpec) -> Result<(HypSpec, f64)> {
    if spec.upper.len() != 2 || spec.lower.len() != 1 || spec.z >= 1.0 || spec.z == 0.0 {
        return Err(SeriesError::PfaffPrecondition);
    }
    let (a, b, c) = (spec.upper[0], spec.upper[1], spec.lower[0]);
    let transformed = HypSpec::new(vec![a, c - b], vec![c], spec.z / (spec.z - 1.0))?;
    let prefactor = (1.0 - spec.z).powf(-a);
    Ok((transformed, prefactor))
}

/// Evaluate a 2F1 spec at z < 0 by routing through the Pfaff transform.
pub fn evaluate_2f1_via_pfaff(spec: &HypSpec, policy: &SummationPolicy) -> Result<EvalResult> {
    let (transformed, prefactor) = pfaff_transform_2f1(spec)?;
    let mut result = evaluate_series(&transformed, policy)?;
    result.value *= prefactor;
    result.abs_error_estimate *= prefactor.abs();
    Ok(result)
}
