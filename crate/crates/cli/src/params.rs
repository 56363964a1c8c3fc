//! Parameter literal parsing and per-family argument assembly.
//!
//! Values arrive as strings so `p/q` rationals survive the command line
//! losslessly; decimal literals are also parsed exactly (scaled by a power
//! of ten), and everything carries a floating view for the non-exact paths.

use num_rational::BigRational;

use hyprec_core::recursions::FamilyId;
use hyprec_core::scalar::{parse_rational, rational_to_f64};

#[derive(Debug, Clone)]
pub struct ParamValue {
    pub text: String,
    pub float: f64,
    pub rational: Option<BigRational>,
}

/// Parse `p/q`, integer, or decimal literals. Decimals become exact
/// rationals (d.ddd = dddd / 10^k); anything else falls back to plain f64.
pub fn parse_value(text: &str) -> Result<ParamValue, String> {
    let trimmed = text.trim();
    if let Some(rational) = parse_rational(trimmed).or_else(|| parse_decimal(trimmed)) {
        return Ok(ParamValue {
            text: trimmed.to_owned(),
            float: rational_to_f64(&rational),
            rational: Some(rational),
        });
    }
    match trimmed.parse::<f64>() {
        Ok(float) if float.is_finite() => Ok(ParamValue {
            text: trimmed.to_owned(),
            float,
            rational: None,
        }),
        _ => Err(format!("cannot parse parameter value `{trimmed}`")),
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, frac_digits) = match text.split_once('.') {
        Some((whole, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            (format!("{whole}{frac}"), frac.len() as u32)
        }
        None => return None,
    };
    let numerator: num_bigint_like::BigInt = mantissa.parse().ok()?;
    let denominator = num_bigint_like::BigInt::from(10u8).pow(frac_digits);
    Some(BigRational::new(numerator, denominator))
}

// num-rational re-exports its integer type through the workspace dependency;
// alias it locally to keep the call sites readable.
mod num_bigint_like {
    pub use num_rational::BigRational as _;
    pub type BigInt = <num_rational::BigRational as num_traits::FromPrimitive>::Dummy;
}

/// One optional slot per parameter letter the families use.
#[derive(Debug, Default, Clone)]
pub struct RawParams {
    pub n: Option<String>,
    pub j: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub d: Option<String>,
}

impl RawParams {
    fn get(&self, name: &str) -> Option<&String> {
        match name {
            "n" => self.n.as_ref(),
            "j" => self.j.as_ref(),
            "a" => self.a.as_ref(),
            "b" => self.b.as_ref(),
            "c" => self.c.as_ref(),
            "d" => self.d.as_ref(),
            _ => None,
        }
    }

    fn provided(&self) -> Vec<&'static str> {
        [
            ("n", self.n.is_some()),
            ("j", self.j.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("c", self.c.is_some()),
            ("d", self.d.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, set)| set.then_some(name))
        .collect()
    }

    /// Resolve exactly the parameters the family declares, in declaration
    /// order; missing or stray parameters are usage errors.
    pub fn resolve(&self, family: FamilyId) -> Result<Vec<ParamValue>, String> {
        let names = family.param_names();
        for stray in self.provided() {
            if !names.contains(&stray) {
                return Err(format!(
                    "--{stray} does not apply to {}; it takes {:?}",
                    family.name(),
                    names
                ));
            }
        }
        names
            .iter()
            .map(|name| {
                let text = self.get(name).ok_or_else(|| {
                    format!("{} requires --{name} (takes {:?})", family.name(), names)
                })?;
                parse_value(text)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_floats() {
        let v = parse_value("1/2").unwrap();
        assert_eq!(v.float, 0.5);
        assert!(v.rational.is_some());

        let v = parse_value("0.25").unwrap();
        assert_eq!(v.float, 0.25);
        assert!(v.rational.is_some());

        let v = parse_value("1e-3").unwrap();
        assert_eq!(v.float, 1e-3);
        assert!(v.rational.is_none());

        assert!(parse_value("abc").is_err());
    }

    #[test]
    fn resolve_checks_arity() {
        let raw = RawParams {
            a: Some("0.3".into()),
            ..RawParams::default()
        };
        assert!(raw.resolve(FamilyId::Gauss2ndDiag).is_ok());
        assert!(raw.resolve(FamilyId::Kummer).is_err());

        let stray = RawParams {
            a: Some("0.3".into()),
            d: Some("1.0".into()),
            ..RawParams::default()
        };
        assert!(stray.resolve(FamilyId::Gauss2ndDiag).is_err());
    }
}
