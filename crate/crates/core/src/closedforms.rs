//! Closed-form identities obtained by induction from the recursions.
//!
//! Each evaluator here is a finite sum of gamma ratios or Pochhammer ratios
//! that must reproduce the corresponding recursion family exactly; the
//! gamma-ratio prefactors are assembled in signed-log space so the forms stay
//! finite for large k.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::recursions::FamilyId;
use crate::scalar::{is_nonpositive_int, Scalar, POLE_TOL};
use crate::series::{
    evaluate_series, evaluate_terminating_exact, ExactHypSpec, HypSpec, SeriesError,
    SummationPolicy, TailMode,
};
use crate::specialfun::{binomial, log_gamma_signed, pochhammer, reciprocal_gamma, SpecialFunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormId {
    /// `2F1(a, a+k; a+1; 1/2) = 2^a (2^{k-1} - sum)`, k >= 1.
    HalfArgumentPower,
    /// Choi's binomial-gamma sum for `2F1(a+k, b; a-b+1; -1)`, k >= 0.
    KummerChoi,
    /// The gamma identity fallout of inserting the Choi form into the Kummer
    /// recurrence, k >= 1; evaluated as a residual.
    ChoiGammaIdentity,
    /// The finite j-sum for `3F2(a, b, c+k+1; d+1, c; 1)`, k >= 0.
    MillerClosed,
    /// Pochhammer-ratio times terminating-3F2 form of the extended
    /// Pfaff-Saalschutz sum, k >= 0.
    PfaffClosed,
    /// The single gamma-ratio form of the extended Bailey sum, k >= 0.
    BaileyClosed,
}

pub const ALL_CLOSED_FORMS: [ClosedFormId; 6] = [
    ClosedFormId::HalfArgumentPower,
    ClosedFormId::KummerChoi,
    ClosedFormId::ChoiGammaIdentity,
    ClosedFormId::MillerClosed,
    ClosedFormId::PfaffClosed,
    ClosedFormId::BaileyClosed,
];

impl ClosedFormId {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormId::HalfArgumentPower => "half-argument-power",
            ClosedFormId::KummerChoi => "kummer-choi",
            ClosedFormId::ChoiGammaIdentity => "choi-identity",
            ClosedFormId::MillerClosed => "miller-closed",
            ClosedFormId::PfaffClosed => "pfaff-closed",
            ClosedFormId::BaileyClosed => "bailey-closed",
        }
    }

    pub fn min_k(&self) -> i32 {
        match self {
            ClosedFormId::HalfArgumentPower | ClosedFormId::ChoiGammaIdentity => 1,
            _ => 0,
        }
    }

    /// The recursion family this closed form must agree with, if any.
    pub fn family(&self) -> Option<FamilyId> {
        match self {
            ClosedFormId::HalfArgumentPower => Some(FamilyId::Gauss2ndDiag),
            ClosedFormId::KummerChoi => Some(FamilyId::Kummer),
            ClosedFormId::MillerClosed => Some(FamilyId::Miller),
            ClosedFormId::PfaffClosed => Some(FamilyId::PfaffSaalschutz),
            ClosedFormId::BaileyClosed => Some(FamilyId::Bailey),
            ClosedFormId::ChoiGammaIdentity => None,
        }
    }

    pub fn for_family(family: FamilyId) -> Option<ClosedFormId> {
        ALL_CLOSED_FORMS
            .iter()
            .copied()
            .find(|form| form.family() == Some(family))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("{form:?} is defined for k >= {min_k}, got {k}")]
    IndexOutOfRange {
        form: ClosedFormId,
        min_k: i32,
        k: i32,
    },
    #[error("{form:?}: factor {factor} vanishes")]
    PoleFactor {
        form: ClosedFormId,
        factor: &'static str,
    },
    #[error(transparent)]
    Gamma(#[from] SpecialFunError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, ClosedFormError>;

fn check_k(form: ClosedFormId, k: i32) -> Result<u32> {
    if k < form.min_k() {
        Err(ClosedFormError::IndexOutOfRange {
            form,
            min_k: form.min_k(),
            k,
        })
    } else {
        Ok(k as u32)
    }
}

/// prod Gamma(numer) / prod Gamma(denom) in signed-log space. A pole in a
/// denominator gamma sends the whole ratio to zero; a pole in a numerator
/// gamma is an error.
fn gamma_ratio(numer: &[f64], denom: &[f64]) -> Result<f64> {
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in numer {
        let (l, s) = log_gamma_signed(x)?;
        log += l;
        sign *= s;
    }
    for &x in denom {
        if is_nonpositive_int(x) {
            return Ok(0.0);
        }
        let (l, s) = log_gamma_signed(x)?;
        log -= l;
        sign *= s;
    }
    Ok(sign * log.exp())
}

/// `2F1(a, a+k; a+1; 1/2) = 2^a (2^{k-1} - sum_{i=1}^{k-1}
/// (k-1)! / ((i-1)! (k-i-1)! (a+i)))`, for k >= 1.
pub fn half_argument_power(a: f64, k: i32) -> Result<f64> {
    let form = ClosedFormId::HalfArgumentPower;
    let k = check_k(form, k)?;
    let mut sum = 0.0;
    for i in 1..k {
        if (a + i as f64).abs() < POLE_TOL {
            return Err(ClosedFormError::PoleFactor {
                form,
                factor: "a+i",
            });
        }
        // (k-1)! / ((i-1)! (k-i-1)!) = (k-1) * C(k-2, i-1)
        let weight = (k - 1) as f64 * binomial(k - 2, i - 1);
        sum += weight / (a + i as f64);
    }
    Ok(2f64.powf(a) * (2f64.powi(k as i32 - 1) - sum))
}

/// Signed-log accumulation of `sum_m sign_m exp(log_m)`, factored around the
/// largest magnitude so large-k sums stay in range.
struct LogSum {
    entries: Vec<(f64, f64)>,
}

impl LogSum {
    fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    fn push(&mut self, log: f64, sign: f64) {
        if sign != 0.0 {
            self.entries.push((log, sign));
        }
    }

    /// The sum times `sign_scale * exp(log_scale)`.
    fn total(&self, log_scale: f64, sign_scale: f64) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        let peak = self
            .entries
            .iter()
            .map(|(l, _)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        let reduced: f64 = self.entries.iter().map(|(l, s)| s * (l - peak).exp()).sum();
        sign_scale * reduced * (peak + log_scale).exp()
    }
}

/// Choi's closed form for the Kummer family:
/// `2F1(a+k, b; a-b+1; -1) = Gamma(1+a-b)/(2 Gamma(a+k)) *
///  sum_{m=0}^{k} C(k,m) Gamma((a+k+m)/2) / Gamma((a-k+m)/2 - b + 1)`.
pub fn kummer_choi(a: f64, b: f64, k: i32) -> Result<f64> {
    let form = ClosedFormId::KummerChoi;
    let k = check_k(form, k)?;
    if is_nonpositive_int(a + k as f64) {
        return Err(ClosedFormError::PoleFactor {
            form,
            factor: "Gamma(a+k)",
        });
    }
    let (lg_pre_num, s_pre_num) = log_gamma_signed(1.0 + a - b)?;
    let (lg_pre_den, s_pre_den) = log_gamma_signed(a + k as f64)?;
    let log_pre = lg_pre_num - 2f64.ln() - lg_pre_den;
    let sign_pre = s_pre_num * s_pre_den;

    let mut sum = LogSum::new();
    for m in 0..=k {
        let num_arg = (a + (k + m) as f64) / 2.0;
        let den_arg = (a + (m as f64 - k as f64)) / 2.0 - b + 1.0;
        let (lg_num, s_num) = log_gamma_signed(num_arg)?;
        let recip = reciprocal_gamma(den_arg);
        if recip == 0.0 {
            continue;
        }
        sum.push(
            binomial(k, m).ln() + lg_num + recip.abs().ln(),
            s_num * recip.signum(),
        );
    }
    Ok(sum.total(log_pre, sign_pre))
}

/// Both sides of the Choi gamma identity at (a, b, k >= 1):
/// LHS `Gamma((a+k+1)/2) / Gamma((a-k+1)/2 - b)` and the binomial-gamma sum
/// it must equal.
pub fn choi_identity_sides(a: f64, b: f64, k: i32) -> Result<(f64, f64)> {
    let form = ClosedFormId::ChoiGammaIdentity;
    let k = check_k(form, k)?;
    let kf = k as f64;

    let (lg_l, s_l) = log_gamma_signed((a + kf + 1.0) / 2.0)?;
    let recip_l = reciprocal_gamma((a - kf + 1.0) / 2.0 - b);
    let lhs = if recip_l == 0.0 {
        0.0
    } else {
        s_l * recip_l.signum() * (lg_l + recip_l.abs().ln()).exp()
    };

    let mut sum = LogSum::new();
    for m in 0..=k {
        let weight = a + (kf - 1.0) / 2.0
            - b * m as f64 / kf
            - (kf + 1.0) * (a + kf - 1.0) / (2.0 * (m as f64 + 1.0));
        if weight == 0.0 {
            continue;
        }
        let (lg, s) = log_gamma_signed((a + kf + m as f64) / 2.0)?;
        let recip = reciprocal_gamma((a - kf + m as f64) / 2.0 - b + 1.0);
        if recip == 0.0 {
            continue;
        }
        sum.push(
            binomial(k, m).ln() + weight.abs().ln() + lg + recip.abs().ln(),
            weight.signum() * s * recip.signum(),
        );
    }
    Ok((lhs, sum.total(0.0, 1.0)))
}

/// LHS minus RHS of the Choi gamma identity.
pub fn choi_identity_residual(a: f64, b: f64, k: i32) -> Result<f64> {
    let (lhs, rhs) = choi_identity_sides(a, b, k)?;
    Ok(lhs - rhs)
}

/// The finite j-sum for the Miller family,
/// `3F2(a, b, c+k+1; d+1, c; 1) =
///  (-1)^k Gamma(d+1) Gamma(d-a-b-k) / (c Gamma(d-a+1) Gamma(d-b+1)) *
///  sum_j (-1)^j (a+b-d+j+1)_{k-j} (a)_j (b)_j C(k,j) / (c+1)_j *
///  [a(b-c) - (b+j)c + (c+j)d]`.
pub fn miller_closed(a: f64, b: f64, c: f64, d: f64, k: i32) -> Result<f64> {
    let form = ClosedFormId::MillerClosed;
    let k = check_k(form, k)?;
    if c.abs() < POLE_TOL {
        return Err(ClosedFormError::PoleFactor { form, factor: "c" });
    }
    let prefactor = gamma_ratio(&[d + 1.0, d - a - b - k as f64], &[d - a + 1.0, d - b + 1.0])?
        / c
        * if k % 2 == 0 { 1.0 } else { -1.0 };

    let mut sum = 0.0;
    for j in 0..=k {
        let den = pochhammer(&(c + 1.0), j);
        if den.abs() < POLE_TOL {
            return Err(ClosedFormError::PoleFactor {
                form,
                factor: "(c+1)_j",
            });
        }
        let jf = j as f64;
        let term = pochhammer(&(a + b - d + jf + 1.0), k - j)
            * pochhammer(&a, j)
            * pochhammer(&b, j)
            * binomial(k, j)
            / den
            * (a * (b - c) - (b + jf) * c + (c + jf) * d);
        sum += if j % 2 == 0 { term } else { -term };
    }
    Ok(prefactor * sum)
}

/// Which bracket the hypergeometric repackaging of the Miller sum carries;
/// the two printed variants differ in this one factor and only one matches
/// the finite j-sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MillerBracket {
    /// `a(b-c) + c(d-b)`
    DMinusB,
    /// `a(b-c) + c(d-c)`
    DMinusC,
}

/// The repackaging of [`miller_closed`] as a pair of terminating 3F2 sums,
/// parameterized by the disputed bracket. Used to settle numerically which
/// variant is correct.
pub fn miller_hypergeometric_form(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    k: i32,
    bracket: MillerBracket,
) -> Result<f64> {
    let form = ClosedFormId::MillerClosed;
    let k = check_k(form, k)?;
    if c.abs() < POLE_TOL {
        return Err(ClosedFormError::PoleFactor { form, factor: "c" });
    }
    let kf = k as f64;
    let e = a + b - d + 1.0;
    let prefactor = gamma_ratio(&[d + 1.0, d - a - b - kf], &[d - a + 1.0, d - b + 1.0])?
        * pochhammer(&e, k)
        / c
        * if k % 2 == 0 { 1.0 } else { -1.0 };
    let bracket_value = match bracket {
        MillerBracket::DMinusB => a * (b - c) + c * (d - b),
        MillerBracket::DMinusC => a * (b - c) + c * (d - c),
    };
    let policy = SummationPolicy {
        tail_mode: TailMode::None,
        ..SummationPolicy::default()
    };
    let first = evaluate_series(&HypSpec::new(vec![-kf, a, b], vec![c + 1.0, e], 1.0)?, &policy)?
        .value;
    let mut total = bracket_value * first;
    if k >= 1 {
        let second = evaluate_series(
            &HypSpec::new(
                vec![1.0 - kf, a + 1.0, b + 1.0],
                vec![c + 2.0, e + 1.0],
                1.0,
            )?,
            &policy,
        )?
        .value;
        total += a * b * (c - d) * kf / ((c + 1.0) * e) * second;
    }
    Ok(prefactor * total)
}

/// The extended Pfaff-Saalschutz evaluation,
/// `3F2(-n, a, b; c+k, a+b+1-n-c; 1) =
///  (c-a)_n (c-b+k)_n / ((c+k)_n (c-a-b)_n) *
///  3F2(-k, -n, b; c-a, b-c-k-n+1; 1)`.
pub fn pfaff_closed(n: u32, a: f64, b: f64, c: f64, k: i32) -> Result<f64> {
    let form = ClosedFormId::PfaffClosed;
    let k = check_k(form, k)?;
    let den = pochhammer(&(c + k as f64), n) * pochhammer(&(c - a - b), n);
    if den.abs() < POLE_TOL {
        return Err(ClosedFormError::PoleFactor {
            form,
            factor: "(c+k)_n (c-a-b)_n",
        });
    }
    let ratio = pochhammer(&(c - a), n) * pochhammer(&(c - b + k as f64), n) / den;
    let correction = evaluate_series(
        &HypSpec::new(
            vec![-(k as f64), -(n as f64), b],
            vec![c - a, b - c - (k + n) as f64 + 1.0],
            1.0,
        )?,
        &SummationPolicy {
            tail_mode: TailMode::None,
            ..SummationPolicy::default()
        },
    )?
    .value;
    Ok(ratio * correction)
}

/// Exact-rational twin of [`pfaff_closed`].
pub fn pfaff_closed_exact(
    n: u32,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    k: i32,
) -> Result<BigRational> {
    let form = ClosedFormId::PfaffClosed;
    let k = check_k(form, k)?;
    let int = <BigRational as Scalar>::from_int;
    let kq = int(k as i64);
    let den = pochhammer(&(c.clone() + kq.clone()), n)
        * pochhammer(&(c.clone() - a.clone() - b.clone()), n);
    if den.is_zero() {
        return Err(ClosedFormError::PoleFactor {
            form,
            factor: "(c+k)_n (c-a-b)_n",
        });
    }
    let ratio = pochhammer(&(c.clone() - a.clone()), n)
        * pochhammer(&(c.clone() - b.clone() + kq.clone()), n)
        / den;
    let correction = evaluate_terminating_exact(&ExactHypSpec::new(
        vec![-kq.clone(), -int(n as i64), b.clone()],
        vec![
            c.clone() - a.clone(),
            b.clone() - c.clone() - kq - int(n as i64) + BigRational::one(),
        ],
        BigRational::one(),
    )?)?;
    Ok(ratio * correction)
}

/// The extended Bailey evaluation,
/// `3F2(a, b, c+1; 1+2c-b+k, c; 1) = [(a-2c)(b-c) + kc]
///  Gamma(2c-b+k+1) Gamma(2c-a-2b+k) / (c Gamma(2c-2b+k+1) Gamma(2c-a-b+k+1))`.
pub fn bailey_closed(a: f64, b: f64, c: f64, k: i32) -> Result<f64> {
    let form = ClosedFormId::BaileyClosed;
    let k = check_k(form, k)?;
    if c.abs() < POLE_TOL {
        return Err(ClosedFormError::PoleFactor { form, factor: "c" });
    }
    let kf = k as f64;
    let ratio = gamma_ratio(
        &[2.0 * c - b + kf + 1.0, 2.0 * c - a - 2.0 * b + kf],
        &[2.0 * c - 2.0 * b + kf + 1.0, 2.0 * c - a - b + kf + 1.0],
    )?;
    Ok(((a - 2.0 * c) * (b - c) + kf * c) / c * ratio)
}

/// Closed-form value matched to a recursion family's parameter layout, when
/// one exists for the family and index.
pub fn evaluate_for_family(family: FamilyId, k: i32, params: &[f64]) -> Option<Result<f64>> {
    let form = ClosedFormId::for_family(family)?;
    if k < form.min_k() {
        return None;
    }
    Some(match form {
        ClosedFormId::HalfArgumentPower => half_argument_power(params[0], k),
        ClosedFormId::KummerChoi => kummer_choi(params[0], params[1], k),
        ClosedFormId::MillerClosed => miller_closed(params[0], params[1], params[2], params[3], k),
        ClosedFormId::PfaffClosed => {
            pfaff_closed(params[0] as u32, params[1], params[2], params[3], k)
        }
        ClosedFormId::BaileyClosed => bailey_closed(params[0], params[1], params[2], k),
        ClosedFormId::ChoiGammaIdentity => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursions::{self, direct_value, kummer_theorem, MemoTable};
    use crate::scalar::parse_rational;
    use approx::assert_relative_eq;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn half_argument_power_values() {
        // k = 1 is the pure power 2^a.
        for a in [0.3, 1.0, 2.7] {
            assert_relative_eq!(
                half_argument_power(a, 1).unwrap(),
                2f64.powf(a),
                max_relative = 1e-14
            );
        }
        // 2^1 (2 - 1/(1+1)) = 3.
        assert_relative_eq!(
            half_argument_power(1.0, 2).unwrap(),
            3.0,
            max_relative = 1e-14
        );
        // Matches the series oracle at (0.7, 4).
        let oracle = direct_value(FamilyId::Gauss2ndDiag, 4, &[0.7]).unwrap();
        assert_relative_eq!(
            half_argument_power(0.7, 4).unwrap(),
            oracle.value,
            max_relative = 1e-10
        );
        assert!(half_argument_power(1.0, 0).is_err());
        assert!(half_argument_power(-2.0, 4).is_err());
    }

    #[test]
    fn kummer_choi_values() {
        // k = 0 collapses to the classical Kummer theorem: pi/4 at (1, 1/2).
        assert_relative_eq!(
            kummer_choi(1.0, 0.5, 0).unwrap(),
            std::f64::consts::FRAC_PI_4,
            max_relative = 1e-12
        );
        for (a, b) in [(0.7, 0.2), (2.3, 1.1), (1.6, 0.4)] {
            assert_relative_eq!(
                kummer_choi(a, b, 0).unwrap(),
                kummer_theorem(a, b).unwrap(),
                max_relative = 1e-11
            );
        }
        // Against the recursion engine at k = 3.
        let memo = MemoTable::new();
        let rec = recursions::recurse(FamilyId::Kummer, 3, &[0.9, 0.2], &memo).unwrap();
        assert_relative_eq!(kummer_choi(0.9, 0.2, 3).unwrap(), rec, max_relative = 1e-9);
    }

    #[test]
    fn choi_identity_residuals() {
        for (a, b, k) in [(1.3, 0.4, 1), (2.1, 0.7, 5), (0.5, 0.3, 10)] {
            let (lhs, rhs) = choi_identity_sides(a, b, k).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!(
                (lhs - rhs).abs() <= 1e-9 * scale,
                "residual {} at ({a}, {b}, {k})",
                lhs - rhs
            );
        }
        assert!(choi_identity_residual(1.0, 0.5, 0).is_err());
    }

    #[test]
    fn choi_identity_balances_through_denominator_pole() {
        // (a-k+1)/2 - b = 0 sends the LHS to zero via the reciprocal gamma;
        // the sum side must cancel to zero as well.
        let (a, k) = (1.5, 2);
        let b = (a - k as f64 + 1.0) / 2.0;
        let (lhs, rhs) = choi_identity_sides(a, b, k).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs.abs() < 1e-10, "rhs = {rhs}");
    }

    #[test]
    fn miller_closed_values() {
        // b = 0 telescopes to the unit series for every k.
        for k in 0..=5 {
            assert_relative_eq!(
                miller_closed(1.3, 0.0, 0.7, 2.1, k).unwrap(),
                1.0,
                max_relative = 1e-11
            );
        }
        // k = 0 is the Miller base value.
        let base = recursions::base_value(FamilyId::Miller, &[0.4, 0.6, 1.1, 3.2]).unwrap();
        assert_relative_eq!(
            miller_closed(0.4, 0.6, 1.1, 3.2, 0).unwrap(),
            base,
            max_relative = 1e-12
        );
        // Against the recursion engine at k = 3.
        let memo = MemoTable::new();
        let rec = recursions::recurse(FamilyId::Miller, 3, &[0.4, 0.6, 1.1, 3.2], &memo).unwrap();
        assert_relative_eq!(
            miller_closed(0.4, 0.6, 1.1, 3.2, 3).unwrap(),
            rec,
            max_relative = 1e-9
        );
    }

    #[test]
    fn miller_bracket_discrepancy_is_settled_numerically() {
        let (a, b, c, d, k) = (0.4, 0.6, 1.1, 3.2, 3);
        let ground_truth = miller_closed(a, b, c, d, k).unwrap();
        let with_d_minus_b =
            miller_hypergeometric_form(a, b, c, d, k, MillerBracket::DMinusB).unwrap();
        let with_d_minus_c =
            miller_hypergeometric_form(a, b, c, d, k, MillerBracket::DMinusC).unwrap();
        assert_relative_eq!(with_d_minus_b, ground_truth, max_relative = 1e-10);
        assert!(
            (with_d_minus_c - ground_truth).abs() > 1e-3 * ground_truth.abs(),
            "the d-c bracket should not match: {with_d_minus_c} vs {ground_truth}"
        );
    }

    #[test]
    fn pfaff_closed_values() {
        // k = 0, n = 1, a = b = 1/2, c = 1/4 -> -1/3.
        assert_relative_eq!(
            pfaff_closed(1, 0.5, 0.5, 0.25, 0).unwrap(),
            -1.0 / 3.0,
            max_relative = 1e-13
        );
        // n = 0 is the empty series.
        for k in 0..=4 {
            assert_relative_eq!(
                pfaff_closed(0, 0.37, 1.21, 0.83, k).unwrap(),
                1.0,
                max_relative = 1e-13
            );
        }
        // Exact equality with the exact defining sum at n = 2, k = 1.
        let (a, b, c) = (rat("1/3"), rat("1/5"), rat("1/7"));
        let closed = pfaff_closed_exact(2, &a, &b, &c, 1).unwrap();
        let defining = recursions::direct_value_exact(
            FamilyId::PfaffSaalschutz,
            1,
            &[rat("2"), a.clone(), b.clone(), c.clone()],
        )
        .unwrap();
        assert_eq!(closed, defining);
    }

    #[test]
    fn bailey_closed_values() {
        // a = 0, k = 0 reduces to 1.
        assert_relative_eq!(
            bailey_closed(0.0, 0.4, 1.1, 0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        // k = 0 against the Bailey base value.
        let base = recursions::base_value(FamilyId::Bailey, &[0.5, 0.3, 2.0]).unwrap();
        assert_relative_eq!(
            bailey_closed(0.5, 0.3, 2.0, 0).unwrap(),
            base,
            max_relative = 1e-12
        );
        // At integer c the k = 2 walk passes a degenerate lattice point
        // (vanishing c-1 weight on a singular child); the closed form and
        // the oracle still agree there.
        let closed_at_integer_c = bailey_closed(0.5, 0.3, 2.0, 2).unwrap();
        let oracle = direct_value(FamilyId::Bailey, 2, &[0.5, 0.3, 2.0]).unwrap();
        assert_relative_eq!(
            closed_at_integer_c,
            oracle.value,
            max_relative = 1e-8,
            epsilon = 1e-8
        );
        assert!(matches!(
            recursions::recurse(
                FamilyId::Bailey,
                2,
                &[0.5, 0.3, 2.0],
                &MemoTable::new()
            ),
            Err(recursions::RecursionError::CoefficientPole { factor: "c-1", .. })
        ));
        // Off the integer line all three routes agree.
        let memo = MemoTable::new();
        let rec = recursions::recurse(FamilyId::Bailey, 2, &[0.5, 0.3, 2.3], &memo).unwrap();
        let closed = bailey_closed(0.5, 0.3, 2.3, 2).unwrap();
        assert_relative_eq!(closed, rec, max_relative = 1e-10);
        let oracle = direct_value(FamilyId::Bailey, 2, &[0.5, 0.3, 2.3]).unwrap();
        assert_relative_eq!(closed, oracle.value, max_relative = 1e-8, epsilon = 1e-8);
    }

    #[test]
    fn family_mapping() {
        assert_eq!(
            ClosedFormId::for_family(FamilyId::Gauss2ndDiag),
            Some(ClosedFormId::HalfArgumentPower)
        );
        assert_eq!(ClosedFormId::for_family(FamilyId::Dixon), None);
        // k below the form's range yields no closed-form face.
        assert!(evaluate_for_family(FamilyId::Gauss2ndDiag, 0, &[0.7]).is_none());
        assert!(evaluate_for_family(FamilyId::Kummer, 0, &[0.7, 0.3]).is_some());
    }
}
