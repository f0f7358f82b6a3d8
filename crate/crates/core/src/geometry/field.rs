//! Scalar fields used for coordinates.
//!
//! Every algorithm in the crate is generic over [`Field`]. The default,
//! [`Rational`], is exact: arithmetic never rounds and equality is equality
//! of reduced fractions. [`Float64`] is the tolerance-based alternative for
//! polytopes that have no rational affinely-regular embedding (regular
//! pentagons and friends); its comparisons use a process-wide epsilon.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar from {0:?}")]
pub struct ParseScalarError(pub String);

/// Ordered field with the handful of operations the geometry code needs.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// Name reported in CLI output and reports ("exact" or "float").
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn from_f64_lossy(v: f64) -> Self;
    fn is_zero(&self) -> bool;
    /// Sign relative to zero (tolerance-aware for floats).
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError>;

    fn is_one(&self) -> bool {
        (self.clone() - &Self::one()).is_zero()
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Total order used for canonical sorting.
    fn compare(&self, other: &Self) -> Ordering {
        (self.clone() - other).sign()
    }

    /// Inner product `Σ aᵢ·bᵢ`.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let mut acc = Self::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += &(x.clone() * y);
            }
        }
        acc
    }
}

impl Field for Rational {
    const MODE: &'static str = "exact";

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64_lossy(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(Zero::zero)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sign(&self) -> Ordering {
        if Zero::is_zero(self) {
            Ordering::Equal
        } else if Signed::is_positive(self) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }

    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    // Accumulates over common denominators and reduces once.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let common = |v: &[Self]| v.iter().fold(BigInt::one(), |l, x| if x.denom().is_one() { l } else { l.lcm(x.denom()) });
        let (la, lb) = (common(a), common(b));
        let mut acc = BigInt::zero();
        for (x, y) in a.iter().zip(b) {
            if Zero::is_zero(x) || Zero::is_zero(y) {
                continue;
            }
            let xs = x.numer() * (&la / x.denom());
            let ys = y.numer() * (&lb / y.denom());
            acc += xs * ys;
        }
        BigRational::new(acc, la * lb)
    }
}

/// Parses `p`, `p/q`, or a plain decimal such as `-0.125` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(err());
        }
        let digits = format!("{int_digits}{frac}");
        let mut numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| err())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(numer, denom));
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

/// Formats an exact rational the way the JSON schemas expect (`p` or `p/q`).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Reduces a rational vector to a primitive integer vector with the same
/// direction (used for readable certificates).
pub fn primitive_integer_direction(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

static EPSILON_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Sets the comparison tolerance for [`Float64`]. Affects the whole process.
pub fn set_epsilon(eps: f64) {
    EPSILON_BITS.store(eps.to_bits(), AtomicOrdering::Relaxed);
}

pub fn epsilon() -> f64 {
    f64::from_bits(EPSILON_BITS.load(AtomicOrdering::Relaxed))
}

/// Double-precision scalar whose equality and sign tests are tolerant
/// up to [`epsilon`] (relative to magnitude once values exceed 1).
#[derive(Clone, Copy, Default)]
pub struct Float64(pub f64);

impl Float64 {
    fn scale(a: f64, b: f64) -> f64 {
        1f64.max(a.abs()).max(b.abs())
    }
}

impl PartialEq for Float64 {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= epsilon() * Self::scale(self.0, other.0)
    }
}

impl Debug for Float64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Debug::fmt(&self.0, f)
    }
}

impl Display for Float64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:tt) => {
        impl $tr for Float64 {
            type Output = Float64;
            fn $m(self, rhs: Float64) -> Float64 {
                Float64(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Float64> for Float64 {
            type Output = Float64;
            fn $m(self, rhs: &'a Float64) -> Float64 {
                Float64(self.0 $op rhs.0)
            }
        }
        impl<'a> $atr<&'a Float64> for Float64 {
            fn $am(&mut self, rhs: &'a Float64) {
                self.0 = self.0 $op rhs.0;
            }
        }
    };
}

float_binop!(Add, add, AddAssign, add_assign, +);
float_binop!(Sub, sub, SubAssign, sub_assign, -);
float_binop!(Mul, mul, MulAssign, mul_assign, *);
float_binop!(Div, div, DivAssign, div_assign, /);

impl Neg for Float64 {
    type Output = Float64;
    fn neg(self) -> Float64 {
        Float64(-self.0)
    }
}

impl Field for Float64 {
    const MODE: &'static str = "float";

    fn zero() -> Self {
        Float64(0.0)
    }

    fn one() -> Self {
        Float64(1.0)
    }

    fn from_i64(v: i64) -> Self {
        Float64(v as f64)
    }

    fn from_rational(r: &Rational) -> Self {
        Float64(ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
    }

    fn from_f64_lossy(v: f64) -> Self {
        Float64(v)
    }

    fn is_zero(&self) -> bool {
        self.0.abs() <= epsilon()
    }

    fn sign(&self) -> Ordering {
        if self.0 > epsilon() {
            Ordering::Greater
        } else if self.0 < -epsilon() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        if let Ok(r) = parse_rational(s) {
            return Ok(Self::from_rational(&r));
        }
        s.trim()
            .parse::<f64>()
            .map(Float64)
            .map_err(|_| ParseScalarError(s.to_string()))
    }

    fn compare(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
        }
    }
}

/// Shorthand for building exact rationals in tests and builders.
pub fn q(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&r), "-3/2");
    }

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn float_comparisons_are_tolerant() {
        let a = Float64(0.1 + 0.2);
        assert_eq!(a, Float64(0.3));
        assert!(Float64(1e-12).is_zero());
        assert!(!Float64(1e-6).is_zero());
        assert_eq!(Float64::parse_scalar("1/4").unwrap(), Float64(0.25));
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = vec![q(1, 2), q(-3, 4), q(0, 1)];
        let ints = primitive_integer_direction(&v);
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
