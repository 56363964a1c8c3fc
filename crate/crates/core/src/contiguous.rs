//! Catalog of the contiguous relations behind the recursion families, each
//! checkable as a residual at any parameter instantiation.
//!
//! A relation is stored as a list of (coefficient, parameter-shift) terms
//! summing to zero, so one evaluator covers the whole catalog, in floating
//! point via the series oracle or exactly for terminating rational
//! instantiations.

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::series::{
    evaluate_series, evaluate_terminating_exact, ExactHypSpec, HypSpec, SeriesError,
    SummationPolicy, TailMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationId {
    /// Beta-raising three-term 2F1 relation.
    Lebedev9_2_13,
    /// Elimination of two Lebedev relations into a single three-term form.
    LebedevCombined2F1,
    /// Derivative-based 2F1 relation behind the Kummer-family recurrence.
    KummerDerived,
    /// Gamma-raising three-term 3F2-at-unity relation.
    Andrews3_7_9,
    /// Combined 3F2 relation behind the Dixon-family recurrence.
    DixonCombined,
    /// Combined 3F2 relation behind the Watson-Lavoie recurrence.
    WatsonCombined,
    /// Beta-raising 3F2 relation composed with the shifted four-term form,
    /// behind the Watson-shift recurrence.
    Watson3_7Shifted,
    /// Four-term 3F2-at-unity relation behind the Bailey recurrence.
    Andrews3_7_14,
}

pub const ALL_RELATIONS: [RelationId; 8] = [
    RelationId::Lebedev9_2_13,
    RelationId::LebedevCombined2F1,
    RelationId::KummerDerived,
    RelationId::Andrews3_7_9,
    RelationId::DixonCombined,
    RelationId::WatsonCombined,
    RelationId::Watson3_7Shifted,
    RelationId::Andrews3_7_14,
];

/// Which series shape a relation instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// Three parameters plus a free argument z.
    TwoF1,
    /// Five parameters, argument fixed at 1.
    ThreeF2AtUnity,
}

impl RelationId {
    pub fn name(&self) -> &'static str {
        match self {
            RelationId::Lebedev9_2_13 => "lebedev-9-2-13",
            RelationId::LebedevCombined2F1 => "lebedev-combined-2f1",
            RelationId::KummerDerived => "kummer-derived",
            RelationId::Andrews3_7_9 => "andrews-3-7-9",
            RelationId::DixonCombined => "dixon-combined",
            RelationId::WatsonCombined => "watson-combined",
            RelationId::Watson3_7Shifted => "watson-3-7-shifted",
            RelationId::Andrews3_7_14 => "andrews-3-7-14",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ALL_RELATIONS.iter().copied().find(|r| r.name() == name)
    }

    pub fn kind(&self) -> RelationKind {
        match self {
            RelationId::Lebedev9_2_13
            | RelationId::LebedevCombined2F1
            | RelationId::KummerDerived => RelationKind::TwoF1,
            _ => RelationKind::ThreeF2AtUnity,
        }
    }

    /// Number of free parameters (excluding z for the 2F1 relations).
    pub fn arity(&self) -> usize {
        match self.kind() {
            RelationKind::TwoF1 => 3,
            RelationKind::ThreeF2AtUnity => 5,
        }
    }

    /// Human-readable statement, F denoting the relation's series shape.
    pub fn statement(&self) -> &'static str {
        match self {
            RelationId::Lebedev9_2_13 => {
                "F(a,b+1;c;z) = F(a,b;c;z) + (a z/c) F(a+1,b+1;c+1;z)"
            }
            RelationId::LebedevCombined2F1 => {
                "c F(a,b;c;z) - (c-a+1)(c-b)z/(c+1) F(a,b+1;c+2;z) = [c - (c-b)z] F(a,b+1;c+1;z)"
            }
            RelationId::KummerDerived => {
                "z(1-z)(a+1)b/c F(a+2,b+1;c+1;z) = (c-a-1) F(a,b;c;z) + (a+1-c+bz) F(a+1,b;c;z)"
            }
            RelationId::Andrews3_7_9 => {
                "F(a,b,c+1;d,e;1) = F(a,b,c;d,e;1) + (ab/(de)) F(a+1,b+1,c+1;d+1,e+1;1)"
            }
            RelationId::DixonCombined => {
                "de F(a,b,c;d,e;1) - (a+1)(d+e-a-b-c-2) F(a+2,b+1,c+1;d+1,e+1;1) \
                 = [(d-a-1)(e-a-1) - bc] F(a+1,b+1,c+1;d+1,e+1;1)"
            }
            RelationId::WatsonCombined => {
                "F(a,b,c;d,e+1;1) = F(a,b,c;d,e;1) - (abc/(d e (e+1))) F(a+1,b+1,c+1;d+1,e+2;1)"
            }
            RelationId::Watson3_7Shifted => {
                "F(a,b+1,c;d,e;1) = F(a,b,c;d,e;1) + (ac/(de)) [ \
                 (b+1)(d-a)(c+1)/(d(d+1)(e+1)) F(a+1,b+2,c+2;d+2,e+2;1) \
                 + F(a,b+1,c+1;d,e+1;1) ]"
            }
            RelationId::Andrews3_7_14 => {
                "e F(a,b,c;d,e;1) - (e-a) F(a,b+1,c+1;d+1,e+1;1) \
                 = (a(d-b)(d-c)/(d(d+1))) F(a+1,b+1,c+1;d+2,e+1;1)"
            }
        }
    }

    /// Where the relation comes from in the classical literature.
    pub fn source(&self) -> &'static str {
        match self {
            RelationId::Lebedev9_2_13 => "Lebedev, Special Functions, Eq. 9.2.13",
            RelationId::LebedevCombined2F1 => {
                "derived by eliminating between Lebedev Eqs. 9.2.7 and 9.2.14"
            }
            RelationId::KummerDerived => "derived from DLMF 15.5.20 with 15.5.1",
            RelationId::Andrews3_7_9 => "Andrews-Askey-Roy, Special Functions, Eq. 3.7.9",
            RelationId::DixonCombined => {
                "derived by eliminating between Andrews-Askey-Roy Eqs. 3.7.12 and 3.7.9"
            }
            RelationId::WatsonCombined => {
                "derived from the Andrews-Askey-Roy Sect. 3.7 contiguous relations"
            }
            RelationId::Watson3_7Shifted => {
                "derived from the Andrews-Askey-Roy Sect. 3.7 contiguous relations"
            }
            RelationId::Andrews3_7_14 => "Andrews-Askey-Roy, Special Functions, Eq. 3.7.14",
        }
    }
}

/// One hypergeometric term of a relation: a scalar coefficient and the
/// integer shifts applied to the base parameters (upper parameters first,
/// then lower).
pub struct RelationTerm<T> {
    pub coeff: T,
    pub shift: &'static [i32],
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContiguousError {
    #[error("{id:?} takes {expected} parameters, got {got}")]
    WrongArity {
        id: RelationId,
        expected: usize,
        got: usize,
    },
    #[error("{id:?} needs an argument z")]
    MissingArgument { id: RelationId },
    #[error("coefficient denominator {factor} vanishes in {id:?}")]
    CoefficientDenominator {
        id: RelationId,
        factor: &'static str,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, ContiguousError>;

/// The terms of a relation in `sum coeff_i F(params + shift_i) = 0` form.
/// Generic over the scalar domain so residuals can be taken exactly.
pub fn relation_terms<T: Scalar>(
    id: RelationId,
    params: &[T],
    z: Option<&T>,
) -> Result<Vec<RelationTerm<T>>> {
    if params.len() != id.arity() {
        return Err(ContiguousError::WrongArity {
            id,
            expected: id.arity(),
            got: params.len(),
        });
    }
    let one = T::one();
    let guard = |factor: T, name: &'static str| -> Result<T> {
        if factor.is_vanishing() {
            Err(ContiguousError::CoefficientDenominator { id, factor: name })
        } else {
            Ok(factor)
        }
    };

    let terms = match id {
        RelationId::Lebedev9_2_13 => {
            let z = z.ok_or(ContiguousError::MissingArgument { id })?.clone();
            let (a, c) = (params[0].clone(), params[2].clone());
            let c = guard(c, "c")?;
            vec![
                RelationTerm { coeff: T::one(), shift: &[0, 1, 0] },
                RelationTerm { coeff: -T::one(), shift: &[0, 0, 0] },
                RelationTerm { coeff: -(a * z / c), shift: &[1, 1, 1] },
            ]
        }
        RelationId::LebedevCombined2F1 => {
            let z = z.ok_or(ContiguousError::MissingArgument { id })?.clone();
            let (a, b, c) = (params[0].clone(), params[1].clone(), params[2].clone());
            let cp1 = guard(c.clone() + one.clone(), "c+1")?;
            let cmb = c.clone() - b;
            vec![
                RelationTerm { coeff: c.clone(), shift: &[0, 0, 0] },
                RelationTerm {
                    coeff: -((c.clone() - a + one) * cmb.clone() * z.clone() / cp1),
                    shift: &[0, 1, 2],
                },
                RelationTerm {
                    coeff: -(c - cmb * z),
                    shift: &[0, 1, 1],
                },
            ]
        }
        RelationId::KummerDerived => {
            let z = z.ok_or(ContiguousError::MissingArgument { id })?.clone();
            let (a, b, c) = (params[0].clone(), params[1].clone(), params[2].clone());
            let cg = guard(c.clone(), "c")?;
            vec![
                RelationTerm {
                    coeff: z.clone() * (one.clone() - z.clone()) * (a.clone() + one.clone()) * b.clone()
                        / cg,
                    shift: &[2, 1, 1],
                },
                RelationTerm {
                    coeff: -(c.clone() - a.clone() - one.clone()),
                    shift: &[0, 0, 0],
                },
                RelationTerm {
                    coeff: -(a + one - c + b * z),
                    shift: &[1, 0, 0],
                },
            ]
        }
        RelationId::Andrews3_7_9 => {
            let (a, b) = (params[0].clone(), params[1].clone());
            let d = guard(params[3].clone(), "d")?;
            let e = guard(params[4].clone(), "e")?;
            vec![
                RelationTerm { coeff: T::one(), shift: &[0, 0, 1, 0, 0] },
                RelationTerm { coeff: -T::one(), shift: &[0, 0, 0, 0, 0] },
                RelationTerm {
                    coeff: -(a * b / (d * e)),
                    shift: &[1, 1, 1, 1, 1],
                },
            ]
        }
        RelationId::DixonCombined => {
            let (a, b, c, d, e) = (
                params[0].clone(),
                params[1].clone(),
                params[2].clone(),
                params[3].clone(),
                params[4].clone(),
            );
            let two = T::from_int(2);
            vec![
                RelationTerm {
                    coeff: d.clone() * e.clone(),
                    shift: &[0, 0, 0, 0, 0],
                },
                RelationTerm {
                    coeff: -((a.clone() + one.clone())
                        * (d.clone() + e.clone() - a.clone() - b.clone() - c.clone() - two)),
                    shift: &[2, 1, 1, 1, 1],
                },
                RelationTerm {
                    coeff: -((d - a.clone() - one.clone()) * (e - a - one) - b * c),
                    shift: &[1, 1, 1, 1, 1],
                },
            ]
        }
        RelationId::WatsonCombined => {
            let (a, b, c) = (params[0].clone(), params[1].clone(), params[2].clone());
            let d = guard(params[3].clone(), "d")?;
            let e = guard(params[4].clone(), "e")?;
            let ep1 = guard(params[4].clone() + one, "e+1")?;
            vec![
                RelationTerm { coeff: T::one(), shift: &[0, 0, 0, 0, 1] },
                RelationTerm { coeff: -T::one(), shift: &[0, 0, 0, 0, 0] },
                RelationTerm {
                    coeff: a * b * c / (d * e * ep1),
                    shift: &[1, 1, 1, 1, 2],
                },
            ]
        }
        RelationId::Watson3_7Shifted => {
            let (a, b, c) = (params[0].clone(), params[1].clone(), params[2].clone());
            let d = guard(params[3].clone(), "d")?;
            let e = guard(params[4].clone(), "e")?;
            let dp1 = guard(params[3].clone() + one.clone(), "d+1")?;
            let ep1 = guard(params[4].clone() + one.clone(), "e+1")?;
            let outer = a.clone() * c.clone() / (d.clone() * e);
            let inner = (b + one.clone()) * (d.clone() - a) * (c + one) / (d * dp1 * ep1);
            vec![
                RelationTerm { coeff: T::one(), shift: &[0, 1, 0, 0, 0] },
                RelationTerm { coeff: -T::one(), shift: &[0, 0, 0, 0, 0] },
                RelationTerm {
                    coeff: -(outer.clone() * inner),
                    shift: &[1, 2, 2, 2, 2],
                },
                RelationTerm { coeff: -outer, shift: &[0, 1, 1, 0, 1] },
            ]
        }
        RelationId::Andrews3_7_14 => {
            let (a, b, c, e) = (
                params[0].clone(),
                params[1].clone(),
                params[2].clone(),
                params[4].clone(),
            );
            let d = guard(params[3].clone(), "d")?;
            let dp1 = guard(params[3].clone() + one, "d+1")?;
            vec![
                RelationTerm {
                    coeff: e.clone(),
                    shift: &[0, 0, 0, 0, 0],
                },
                RelationTerm {
                    coeff: -(e - a.clone()),
                    shift: &[0, 1, 1, 1, 1],
                },
                RelationTerm {
                    coeff: -(a * (d.clone() - b) * (d.clone() - c) / (d * dp1)),
                    shift: &[1, 1, 1, 2, 1],
                },
            ]
        }
    };
    Ok(terms)
}

fn shifted_spec(id: RelationId, params: &[f64], z: f64, shift: &[i32]) -> Result<HypSpec> {
    let spec = match id.kind() {
        RelationKind::TwoF1 => HypSpec::new(
            vec![params[0] + shift[0] as f64, params[1] + shift[1] as f64],
            vec![params[2] + shift[2] as f64],
            z,
        ),
        RelationKind::ThreeF2AtUnity => HypSpec::new(
            vec![
                params[0] + shift[0] as f64,
                params[1] + shift[1] as f64,
                params[2] + shift[2] as f64,
            ],
            vec![params[3] + shift[3] as f64, params[4] + shift[4] as f64],
            1.0,
        ),
    };
    Ok(spec?)
}

/// Result of one relation check: the signed residual and the magnitude of
/// the largest term, the natural scale for a relative comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationCheck {
    pub residual: f64,
    pub magnitude: f64,
}

/// Evaluate `sum coeff_i F_i` with every hypergeometric value computed by
/// the series oracle; a small |residual| certifies the instantiation.
/// 2F1 relations take their argument in `z`; 3F2 relations run at unit
/// argument and ignore it.
pub fn relation_residual(id: RelationId, params: &[f64], z: Option<f64>) -> Result<RelationCheck> {
    let terms = relation_terms(id, params, z.as_ref())?;
    let z = z.unwrap_or(1.0);
    let policy = match id.kind() {
        RelationKind::TwoF1 => SummationPolicy::for_argument(z),
        RelationKind::ThreeF2AtUnity => {
            SummationPolicy::for_argument(1.0).with_target(1e-10)
        }
    };
    let mut residual = 0.0;
    let mut magnitude: f64 = 0.0;
    for term in terms {
        let spec = shifted_spec(id, params, z, term.shift)?;
        let policy = if spec.termination_index().is_some() {
            SummationPolicy {
                tail_mode: TailMode::None,
                ..SummationPolicy::default()
            }
        } else {
            policy
        };
        let value = term.coeff * evaluate_series(&spec, &policy)?.value;
        residual += value;
        magnitude = magnitude.max(value.abs());
    }
    Ok(RelationCheck {
        residual,
        magnitude,
    })
}

/// Exact-rational residual for terminating instantiations; the relations are
/// termwise polynomial identities, so this must come out exactly zero.
pub fn relation_residual_exact(
    id: RelationId,
    params: &[BigRational],
    z: Option<&BigRational>,
) -> Result<BigRational> {
    let terms = relation_terms(id, params, z)?;
    let one = BigRational::from_integer(1.into());
    let z = z.cloned().unwrap_or(one);
    let mut residual = BigRational::from_integer(0.into());
    for term in terms {
        let shift_rat =
            |p: &BigRational, s: i32| p.clone() + <BigRational as Scalar>::from_int(s as i64);
        let spec = match id.kind() {
            RelationKind::TwoF1 => ExactHypSpec::new(
                vec![
                    shift_rat(&params[0], term.shift[0]),
                    shift_rat(&params[1], term.shift[1]),
                ],
                vec![shift_rat(&params[2], term.shift[2])],
                z.clone(),
            )?,
            RelationKind::ThreeF2AtUnity => ExactHypSpec::new(
                vec![
                    shift_rat(&params[0], term.shift[0]),
                    shift_rat(&params[1], term.shift[1]),
                    shift_rat(&params[2], term.shift[2]),
                ],
                vec![
                    shift_rat(&params[3], term.shift[3]),
                    shift_rat(&params[4], term.shift[4]),
                ],
                z.clone(),
            )?,
        };
        residual = residual + term.coeff * evaluate_terminating_exact(&spec)?;
    }
    Ok(residual)
}

/// Catalog entry: identity, shape, statement and provenance.
#[derive(Debug, Clone, Serialize)]
pub struct RelationInfo {
    pub id: RelationId,
    pub name: &'static str,
    pub kind: RelationKind,
    pub arity: usize,
    pub statement: &'static str,
    pub source: &'static str,
}

/// The complete relation catalog, one entry per [`RelationId`].
pub fn list_relations() -> Vec<RelationInfo> {
    ALL_RELATIONS
        .iter()
        .map(|&id| RelationInfo {
            id,
            name: id.name(),
            kind: id.kind(),
            arity: id.arity(),
            statement: id.statement(),
            source: id.source(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;
    use num_traits::Zero;

    fn rats(values: &[&str]) -> Vec<BigRational> {
        values.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn catalog_has_eight_documented_entries() {
        let catalog = list_relations();
        assert_eq!(catalog.len(), 8);
        for entry in &catalog {
            assert!(!entry.statement.is_empty());
            assert!(!entry.source.is_empty());
            assert_eq!(RelationId::from_name(entry.name), Some(entry.id));
        }
        let dixon = catalog
            .iter()
            .find(|e| e.id == RelationId::DixonCombined)
            .unwrap();
        assert!(dixon.source.contains("3.7.12"));
        let bailey = catalog
            .iter()
            .find(|e| e.id == RelationId::Andrews3_7_14)
            .unwrap();
        assert!(bailey.source.contains("3.7.14"));
    }

    #[test]
    fn lebedev_9_2_13_residual_at_log_instance() {
        // At (1, 1, 2), z = 1/2 every series has a logarithmic closed form:
        // F(1,2;2;1/2) = 2, F(1,1;2;1/2) = 2 ln 2, F(2,2;3;1/2) = 8 - 8 ln 2.
        let check =
            relation_residual(RelationId::Lebedev9_2_13, &[1.0, 1.0, 2.0], Some(0.5)).unwrap();
        assert!(check.residual.abs() < 1e-12, "residual {}", check.residual);

        let f = |u: Vec<f64>, l: Vec<f64>| {
            evaluate_series(
                &HypSpec::new(u, l, 0.5).unwrap(),
                &SummationPolicy::default(),
            )
            .unwrap()
            .value
        };
        let ln2 = std::f64::consts::LN_2;
        assert!((f(vec![1.0, 2.0], vec![2.0]) - 2.0).abs() < 1e-12);
        assert!((f(vec![1.0, 1.0], vec![2.0]) - 2.0 * ln2).abs() < 1e-12);
        assert!((f(vec![2.0, 2.0], vec![3.0]) - (8.0 - 8.0 * ln2)).abs() < 1e-11);
    }

    #[test]
    fn andrews_3_7_9_residual_example() {
        let check = relation_residual(
            RelationId::Andrews3_7_9,
            &[0.3, 0.5, 0.7, 2.0, 2.5],
            None,
        )
        .unwrap();
        assert!(
            check.residual.abs() < 1e-9 * check.magnitude.max(1.0),
            "residual {}",
            check.residual
        );
    }

    #[test]
    fn all_relations_vanish_exactly_on_terminating_rational_data() {
        // The first parameter is a nonpositive integer small enough that
        // every shifted term still terminates.
        for id in ALL_RELATIONS {
            let (params, z) = match id.kind() {
                RelationKind::TwoF1 => (
                    rats(&["-3", "5/7", "13/5"]),
                    Some(parse_rational("1/3").unwrap()),
                ),
                RelationKind::ThreeF2AtUnity => {
                    (rats(&["-3", "3/7", "5/9", "29/7", "31/6"]), None)
                }
            };
            let residual = relation_residual_exact(id, &params, z.as_ref()).unwrap();
            assert!(residual.is_zero(), "{id:?}: residual {residual}");
        }
    }

    #[test]
    fn float_residuals_on_terminating_data_match_exact_zero() {
        for id in ALL_RELATIONS {
            let (params, z) = match id.kind() {
                RelationKind::TwoF1 => (vec![-2.0, 5.0 / 7.0, 13.0 / 5.0], Some(1.0 / 3.0)),
                RelationKind::ThreeF2AtUnity => {
                    (vec![-2.0, 3.0 / 7.0, 5.0 / 9.0, 29.0 / 7.0, 31.0 / 6.0], None)
                }
            };
            let check = relation_residual(id, &params, z).unwrap();
            assert!(
                check.residual.abs() <= 1e-13 * check.magnitude.max(1.0),
                "{id:?}: residual {}",
                check.residual
            );
        }
    }

    #[test]
    fn arity_and_argument_validation() {
        assert!(matches!(
            relation_residual(RelationId::Lebedev9_2_13, &[1.0, 2.0], Some(0.5)),
            Err(ContiguousError::WrongArity { .. })
        ));
        assert!(matches!(
            relation_residual(RelationId::Lebedev9_2_13, &[1.0, 2.0, 3.0], None),
            Err(ContiguousError::MissingArgument { .. })
        ));
        assert!(matches!(
            relation_residual(RelationId::Andrews3_7_9, &[0.3, 0.5, 0.7, 0.0, 2.5], None),
            Err(ContiguousError::CoefficientDenominator { factor: "d", .. })
        ));
    }
}
