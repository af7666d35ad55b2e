//! Scalar abstraction: one trait, two arithmetic modes.
//!
//! [`Scalar`] is implemented for `f64` (float mode) and for
//! [`num_rational::BigRational`] (exact mode). Exact mode is closed under the
//! four operations and has decidable, total comparisons; float mode flags
//! non-finite results through [`Scalar::is_finite_value`]. Division by an
//! exact zero never happens inside this crate: every division site checks
//! the denominator first and surfaces [`Error::SingularDenominator`].

use crate::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arithmetic mode selector for boundary code (CLI, config parsing).
///
/// Inside the library the mode is the type parameter itself, so mixing modes
/// in one computation is rejected at compile time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// Number type the whole crate is generic over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + num_traits::Num
    + Signed
    + 'static
{
    /// True for arbitrary-precision rationals, false for binary64.
    const EXACT: bool;

    fn mode() -> Mode {
        if Self::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    fn from_int(n: i64) -> Self;

    /// Exact in rational mode; correctly rounded quotient in float mode.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Parse a literal: `p/q`, plain decimals, and (float as well as exact)
    /// scientific notation like `1.5e-3`.
    fn parse_literal(s: &str) -> Result<Self, Error>;

    /// Rationals are always finite; floats report `f64::is_finite`.
    fn is_finite_value(&self) -> bool;

    fn to_f64_lossy(&self) -> f64;

    /// `sqrt` when it exists in this mode: any nonnegative float, or a
    /// perfect-square rational.
    fn try_sqrt(&self) -> Option<Self>;

    fn is_integer_value(&self) -> bool;

    /// The value as a `u32` when it is exactly an integer in range;
    /// `None` otherwise.
    fn as_u32_exact(&self) -> Option<u32>;

    /// Certified upper bound on `exp(self)`.
    fn exp_upper(&self) -> Self;

    /// Certified lower bound on `exp(self)` (nonnegative).
    fn exp_lower(&self) -> Self;

    /// Certified upper bound on `exp(self) - 1` for `self >= 0`.
    fn exp_m1_upper(&self) -> Self;

    /// Storage size of the value: bits of numerator plus denominator in
    /// exact mode, a flat 64 in float mode. Drives the orbit bit budget.
    fn bit_size(&self) -> u64;

    /// Canonical text form: `p/q` in exact mode, 17 significant digits in
    /// float mode.
    fn literal(&self) -> String;

    fn json_value(&self) -> serde_json::Value;

    /// `self^n` by binary exponentiation.
    fn powi(&self, n: u32) -> Self {
        num_traits::pow::pow(self.clone(), n as usize)
    }

    fn two() -> Self {
        Self::from_int(2)
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn parse_literal(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let v = if let Some((num, den)) = s.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidLiteral(s.to_string()))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidLiteral(s.to_string()))?;
            if d == 0.0 {
                return Err(Error::InvalidLiteral(s.to_string()));
            }
            n / d
        } else {
            s.parse()
                .map_err(|_| Error::InvalidLiteral(s.to_string()))?
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn try_sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else {
            None
        }
    }

    fn is_integer_value(&self) -> bool {
        self.is_finite() && self.fract() == 0.0
    }

    fn as_u32_exact(&self) -> Option<u32> {
        if self.is_integer_value() && *self >= 0.0 && *self <= u32::MAX as f64 {
            Some(*self as u32)
        } else {
            None
        }
    }

    fn exp_upper(&self) -> Self {
        // std exp is within 1 ulp; pad by 4 ulps either way.
        let e = self.exp();
        e * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }

    fn exp_lower(&self) -> Self {
        let e = self.exp();
        (e * (1.0 - 4.0 * f64::EPSILON) - f64::MIN_POSITIVE).max(0.0)
    }

    fn exp_m1_upper(&self) -> Self {
        debug_assert!(*self >= 0.0);
        let e = self.exp_m1();
        e * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }

    fn bit_size(&self) -> u64 {
        64
    }

    fn literal(&self) -> String {
        format!("{:.16e}", self)
    }

    fn json_value(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(format!("{}", self)))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator in from_ratio");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn parse_literal(s: &str) -> Result<Self, Error> {
        parse_rational(s)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        if &(&num * &num) == self.numer() && &(&den * &den) == self.denom() {
            Some(BigRational::new(num, den))
        } else {
            None
        }
    }

    fn is_integer_value(&self) -> bool {
        self.is_integer()
    }

    fn as_u32_exact(&self) -> Option<u32> {
        if self.is_integer() {
            self.numer().to_u32()
        } else {
            None
        }
    }

    fn exp_upper(&self) -> Self {
        rational_exp(self, true)
    }

    fn exp_lower(&self) -> Self {
        rational_exp(self, false)
    }

    fn exp_m1_upper(&self) -> Self {
        debug_assert!(!self.is_negative());
        if *self <= Self::one() {
            // exp(x) - 1 <= x + x^2 on [0, 1]
            self + self * self
        } else {
            self.exp_upper() - Self::one()
        }
    }

    fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn literal(&self) -> String {
        self.to_string()
    }

    fn json_value(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

/// Rational bounds on `exp(x)` by argument halving plus a Taylor tail bound.
///
/// For `0 <= t <= 1/2` and `N = 20`:
/// `sum_{k<=N} t^k/k! <= exp(t) <= sum_{k<=N} t^k/k! + 2 t^(N+1)/(N+1)!`,
/// since the tail is at most `t^(N+1)/(N+1)! * 1/(1-t)`. Squaring preserves
/// both bounds for positive values, and `exp(-x) = 1/exp(x)` swaps them.
fn rational_exp(x: &BigRational, upper: bool) -> BigRational {
    if x.is_negative() {
        let inv = rational_exp(&-x.clone(), !upper);
        // inv > 0 always: the lower bound below is >= 1 for t >= 0.
        return BigRational::one() / inv;
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut t = x.clone();
    let mut halvings = 0u32;
    while t > half {
        t /= BigInt::from(2);
        halvings += 1;
    }
    const N: u32 = 20;
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    for k in 1..=N {
        term = term * &t / BigInt::from(k);
        sum += &term;
    }
    if upper {
        term = term * &t / BigInt::from(N + 1);
        sum += term * BigInt::from(2);
    }
    for _ in 0..halvings {
        sum = &sum * &sum;
    }
    sum
}

/// Parse `p/q`, integers, decimals, and decimal-exponent forms into an exact
/// rational. Every accepted literal is represented exactly.
fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidLiteral(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    // [sign] digits [. digits] [eE [sign] digits]
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * ten.pow(scale as u32))
    } else {
        BigRational::new(n, ten.pow((-scale) as u32))
    })
}

/// Parse a literal in the given mode, for callers that dispatch at runtime.
pub fn parse_in_mode(s: &str, mode: Mode) -> Result<ScalarValue, Error> {
    match mode {
        Mode::Float => f64::parse_literal(s).map(ScalarValue::Float),
        Mode::Exact => BigRational::parse_literal(s).map(ScalarValue::Exact),
    }
}

/// A scalar together with its mode, for boundary code only.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Exact(BigRational),
    Float(f64),
}

impl ScalarValue {
    pub fn mode(&self) -> Mode {
        match self {
            ScalarValue::Exact(_) => Mode::Exact,
            ScalarValue::Float(_) => Mode::Float,
        }
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Exact(v) => write!(f, "{}", v),
            ScalarValue::Float(v) => write!(f, "{}", v),
        }
    }
}
