//! Scalar backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two families are
//! provided: IEEE floats (`f64`, `f32`) compared with an absolute tolerance,
//! and exact rationals ([`Rational`]) compared with tolerance zero.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Which arithmetic a computation ran in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rational" | "exact" => Ok(Backend::Rational),
            "float" | "f64" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected `rational` or `float`)")),
        }
    }
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    /// Absolute tolerance used for zero tests inside the geometric kernels.
    fn default_tol() -> Self;

    fn from_f64_lossy(x: f64) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// Square root. Exact for floats up to rounding; rationals go through `f64`.
    fn sqrt_lossy(&self) -> Self;

    /// Parses `"3/4"`, `"-0.125"`, `"1e-3"` and friends.
    fn parse_text(s: &str) -> Option<Self>;

    fn to_json(&self) -> Value;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer fits") / Self::from_i64(den).expect("integer fits")
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const BACKEND: Backend = Backend::Float;

            fn default_tol() -> Self {
                $tol
            }

            fn from_f64_lossy(x: f64) -> Self {
                x as $t
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn sqrt_lossy(&self) -> Self {
                self.sqrt()
            }

            fn parse_text(s: &str) -> Option<Self> {
                let s = s.trim();
                match s.split_once('/') {
                    Some((n, d)) => {
                        let n: $t = n.trim().parse().ok()?;
                        let d: $t = d.trim().parse().ok()?;
                        (d != 0.0).then(|| n / d)
                    }
                    None => s.parse().ok().filter(|x: &$t| x.is_finite()),
                }
            }

            fn to_json(&self) -> Value {
                serde_json::Number::from_f64(*self as f64)
                    .map(Value::Number)
                    .unwrap_or(Value::Null)
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Rational;

    fn default_tol() -> Self {
        BigRational::zero()
    }

    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn sqrt_lossy(&self) -> Self {
        if let Some(root) = exact_rational_sqrt(self) {
            return root;
        }
        Self::from_f64_lossy(self.to_f64_lossy().sqrt())
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

fn exact_rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Exact decimal/fraction parser: `"-7/3"`, `"0.125"`, `"1.5e-2"`, `"4"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if all_digits.is_empty() { "0" } else { &all_digits }, 10).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if sign < 0 { -value } else { value })
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Reads a scalar from a JSON number or string.
pub fn scalar_from_json<S: Scalar>(v: &Value) -> Option<S> {
    match v {
        Value::Number(n) => S::parse_text(&n.to_string()),
        Value::String(s) => S::parse_text(s),
        _ => None,
    }
}

pub fn max_scalar<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub fn min_scalar<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

#[inline]
pub fn near_zero<S: Scalar>(x: &S, tol: &S) -> bool {
    x.abs() <= *tol
}

#[inline]
pub fn near<S: Scalar>(a: &S, b: &S, tol: &S) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}
