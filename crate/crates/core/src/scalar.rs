//! Exact coefficients and the loop parameter.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficients of diagrams. Everything shipped is real and rational, so
/// complex conjugation is the identity on this type.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = || Error::ParseScalar(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
        None => Ok(Scalar::from_integer(BigInt::from_str(text).map_err(|_| bad())?)),
    }
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Natural logarithm of a positive rational, valid far outside the `f64`
/// range of the rational itself.
pub fn ln_positive(x: &Scalar) -> f64 {
    debug_assert!(x.is_positive());
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// The value of a closed loop, a rational strictly above 2.
#[derive(Clone, PartialEq, Eq)]
pub struct LoopParameter {
    delta: Scalar,
    inverse: Scalar,
    powers: Vec<Scalar>,
}

const CACHED_POWERS: usize = 65;

impl LoopParameter {
    pub fn new(delta: Scalar) -> Result<Self> {
        if delta <= int(2) {
            return Err(Error::BadLoopParameter(format_scalar(&delta)));
        }
        let mut powers = Vec::with_capacity(CACHED_POWERS);
        let mut acc = Scalar::one();
        for _ in 0..CACHED_POWERS {
            powers.push(acc.clone());
            acc *= &delta;
        }
        Ok(Self {
            inverse: delta.recip(),
            delta,
            powers,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_scalar(text)?)
    }

    pub fn value(&self) -> &Scalar {
        &self.delta
    }

    pub fn inverse(&self) -> &Scalar {
        &self.inverse
    }

    pub fn as_f64(&self) -> f64 {
        to_f64(&self.delta)
    }

    /// `delta^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Scalar {
        let n = k.unsigned_abs() as usize;
        let positive = if n < CACHED_POWERS {
            self.powers[n].clone()
        } else {
            num_traits::pow(self.delta.clone(), n)
        };
        if k >= 0 {
            positive
        } else {
            positive.recip()
        }
    }
}

impl fmt::Debug for LoopParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoopParameter({})", format_scalar(&self.delta))
    }
}

impl fmt::Display for LoopParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scalar(&self.delta))
    }
}

impl FromStr for LoopParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
