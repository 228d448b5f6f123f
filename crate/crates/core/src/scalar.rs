//! Scalar tower for kernel entries.
//!
//! Kernels and operator specs are generic over [`Scalar`]. Integer and rational
//! entries stay exact end to end; floating and complex entries are compared
//! with explicit tolerances. Every scalar names the [`FieldScalar`] its
//! normalized traces live in (`i64` traces are exact rationals).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Where normalized traces and moments of kernels over `Self` live.
    type Field: FieldScalar;

    /// Whether equality on this type is exact.
    const EXACT: bool;

    fn conj(&self) -> Self;

    fn into_field(self) -> Self::Field;

    fn to_c64(&self) -> Complex64;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact equality for exact types, `|a - b| <= tol` otherwise.
    fn near(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_c64() - other.to_c64()).norm() <= tol
        }
    }
}

pub trait FieldScalar: Scalar<Field = Self> + Div<Output = Self> {
    fn from_rational(r: &Rational) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn real_part(&self) -> f64 {
        self.to_c64().re
    }
}

impl Scalar for i64 {
    type Field = Rational;
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        *self
    }
    fn into_field(self) -> Rational {
        Rational::from_integer(BigInt::from(self))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self as f64, 0.0)
    }
}

impl Scalar for Rational {
    type Field = Rational;
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        self.clone()
    }
    fn into_field(self) -> Rational {
        self
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

impl FieldScalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Field = $t;
            const EXACT: bool = false;

            fn conj(&self) -> Self {
                *self
            }
            fn into_field(self) -> Self {
                self
            }
            fn to_c64(&self) -> Complex64 {
                Complex64::new(*self as f64, 0.0)
            }
        }

        impl FieldScalar for $t {
            fn from_rational(r: &Rational) -> Self {
                rational_to_f64(r) as $t
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Complex64 {
    type Field = Complex64;
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn into_field(self) -> Self {
        self
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl FieldScalar for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
}

/// Text form of a single entry in spec files.
pub trait ScalarText: Scalar {
    fn parse_entry(tok: &str) -> Option<Self>;
    fn format_entry(&self) -> String;
}

impl ScalarText for i64 {
    fn parse_entry(tok: &str) -> Option<Self> {
        tok.parse().ok()
    }
    fn format_entry(&self) -> String {
        self.to_string()
    }
}

impl ScalarText for f64 {
    fn parse_entry(tok: &str) -> Option<Self> {
        tok.parse().ok()
    }
    fn format_entry(&self) -> String {
        format!("{self:?}")
    }
}

impl ScalarText for Rational {
    fn parse_entry(tok: &str) -> Option<Self> {
        tok.parse().ok()
    }
    fn format_entry(&self) -> String {
        self.to_string()
    }
}

impl ScalarText for Complex64 {
    fn parse_entry(tok: &str) -> Option<Self> {
        match tok.split_once(',') {
            Some((re, im)) => Some(Complex64::new(re.parse().ok()?, im.parse().ok()?)),
            None => Some(Complex64::new(tok.parse().ok()?, 0.0)),
        }
    }
    fn format_entry(&self) -> String {
        format!("{:?},{:?}", self.re, self.im)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Both parts overflow f64; go through logarithms.
        let ln = bigint_ln(&r.numer().abs()) - bigint_ln(&r.denom().abs());
        let v = ln.exp();
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

/// Natural logarithm of a positive big integer.
pub fn bigint_ln(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("64-bit head").ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_traces_are_rational() {
        let t: Rational = 6i64.into_field() / Rational::from_count(4);
        assert_eq!(t, ratio(3, 2));
    }

    #[test]
    fn complex_entry_text() {
        let z = Complex64::parse_entry("1.5,-2").unwrap();
        assert_eq!(z, Complex64::new(1.5, -2.0));
        assert_eq!(Complex64::parse_entry(&z.format_entry()), Some(z));
        assert_eq!(Complex64::parse_entry("3"), Some(Complex64::new(3.0, 0.0)));
    }

    #[test]
    fn big_logarithm() {
        let x = BigInt::from(3u8).pow(2000);
        let expect = 2000.0 * 3f64.ln();
        assert!((bigint_ln(&x) - expect).abs() < 1e-9 * expect);
        assert!((bigint_ln(&BigInt::from(10)) - 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn near_is_exact_for_integers() {
        assert!(3i64.near(&3, 0.5));
        assert!(!3i64.near(&4, 10.0));
        assert!(1.0f64.near(&(1.0 + 1e-12), 1e-9));
    }
}
