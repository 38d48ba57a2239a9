use std::ops::Mul;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fraction_string, ln, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

/// A nonnegative weight, held either exactly or as a natural logarithm.
///
/// Exact weights back every verification; log weights back the samplers and
/// any ratio on graphs too large to enumerate. The two never mix.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Exact(Rational),
    Log(f64),
}

/// Tolerance attached to serialized float values.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

impl Weight {
    pub fn exact(value: Rational) -> Self {
        assert!(!value.is_negative(), "weights are nonnegative");
        Weight::Exact(value)
    }

    pub fn from_ln(ln_value: f64) -> Self {
        Weight::Log(ln_value)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Weight::Exact(_) => Mode::Rational,
            Weight::Log(_) => Mode::Float,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Weight::Exact(r) => Some(r),
            Weight::Log(_) => None,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            Weight::Exact(r) if r.is_zero() => f64::NEG_INFINITY,
            Weight::Exact(r) => ln(r),
            Weight::Log(l) => *l,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(r) => to_f64(r),
            Weight::Log(l) => l.exp(),
        }
    }

    pub fn try_mul(&self, other: &Weight) -> Result<Weight> {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Ok(Weight::Exact(a * b)),
            (Weight::Log(a), Weight::Log(b)) => Ok(Weight::Log(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_div(&self, other: &Weight) -> Result<Weight> {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Ok(Weight::Exact(a / b)),
            (Weight::Log(a), Weight::Log(b)) => Ok(Weight::Log(a - b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_add(&self, other: &Weight) -> Result<Weight> {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Ok(Weight::Exact(a + b)),
            (Weight::Log(a), Weight::Log(b)) => {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                if *hi == f64::NEG_INFINITY {
                    return Ok(Weight::Log(f64::NEG_INFINITY));
                }
                Ok(Weight::Log(hi + (lo - hi).exp().ln_1p()))
            }
            _ => Err(Error::ModeMismatch),
        }
    }
}

impl Mul for &Weight {
    type Output = Weight;

    /// Panics on mixed modes; use [`Weight::try_mul`] to handle that case.
    fn mul(self, rhs: &Weight) -> Weight {
        self.try_mul(rhs).expect("weights in different modes")
    }
}

impl From<Rational> for Weight {
    fn from(r: Rational) -> Self {
        Weight::exact(r)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Weight::Exact(r) => {
                let mut st = s.serialize_struct("Weight", 2)?;
                st.serialize_field("mode", &Mode::Rational)?;
                st.serialize_field("value", &fraction_string(r))?;
                st.end()
            }
            Weight::Log(l) => {
                let mut st = s.serialize_struct("Weight", 3)?;
                st.serialize_field("mode", &Mode::Float)?;
                st.serialize_field("value", &l.exp())?;
                st.serialize_field("tolerance", &FLOAT_TOLERANCE)?;
                st.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn modes_do_not_mix() {
        let a = Weight::exact(rat(1, 4));
        let b = Weight::from_ln(0.5f64.ln());
        assert!(matches!(a.try_mul(&b), Err(Error::ModeMismatch)));
        assert!(matches!(a.try_add(&b), Err(Error::ModeMismatch)));
        assert_eq!(a.try_add(&a).unwrap(), Weight::exact(rat(1, 2)));
        let sum = b.try_add(&b).unwrap();
        assert!((sum.to_f64() - 1.0).abs() < 1e-15);
        assert!(((&b * &b).to_f64() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn serializes_with_mode() {
        let j = serde_json::to_string(&Weight::exact(rat(3, 2))).unwrap();
        assert_eq!(j, r#"{"mode":"rational","value":"3/2"}"#);
        let j = serde_json::to_value(Weight::from_ln(0.0)).unwrap();
        assert_eq!(j["mode"], "float");
        assert_eq!(j["tolerance"], 1e-12);
    }
}
