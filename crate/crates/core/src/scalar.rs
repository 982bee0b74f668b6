//! Scalar abstractions shared by every tensor routine.
//!
//! Tensors are generic over [`Scalar`]; quantities that are always real
//! (row sums, radii, bounds) live in the associated [`Scalar::Real`] type.
//! Implementations are provided for `f32`, `f64`, `Complex<f32>`,
//! `Complex<f64>` and exact rationals over `i128`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Whether a scalar type can carry an imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Real,
    Complex,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Real => f.write_str("real"),
            ScalarKind::Complex => f.write_str("complex"),
        }
    }
}

pub trait Scalar:
    Copy
    + fmt::Debug
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
    type Real: Real;

    const KIND: ScalarKind;

    /// Absolute value (complex modulus for complex scalars).
    fn modulus(&self) -> Self::Real;

    fn from_real(re: Self::Real) -> Self;

    /// The value as a real number, if it has no imaginary part.
    fn as_real(&self) -> Option<Self::Real>;

    fn to_complex64(&self) -> Complex64;

    fn is_finite(&self) -> bool;
}

/// Totally ordered (on finite values) real scalars.
pub trait Real: Scalar<Real = Self> + PartialOrd + Div<Output = Self> {
    fn to_f64(&self) -> f64;

    fn is_nonnegative(&self) -> bool {
        *self >= Self::zero()
    }

    /// `self^exp` by repeated squaring.
    fn pow_u64(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base * base;
            }
        }
        acc
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const KIND: ScalarKind = ScalarKind::Real;

            fn modulus(&self) -> $t {
                self.abs()
            }
            fn from_real(re: $t) -> $t {
                re
            }
            fn as_real(&self) -> Option<$t> {
                Some(*self)
            }
            fn to_complex64(&self) -> Complex64 {
                Complex64::new(*self as f64, 0.0)
            }
            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
        }

        impl Real for $t {
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl Scalar for Complex<$t> {
            type Real = $t;
            const KIND: ScalarKind = ScalarKind::Complex;

            fn modulus(&self) -> $t {
                self.norm()
            }
            fn from_real(re: $t) -> Self {
                Complex::new(re, 0.0)
            }
            fn as_real(&self) -> Option<$t> {
                (self.im == 0.0).then_some(self.re)
            }
            fn to_complex64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }
            fn is_finite(&self) -> bool {
                self.re.is_finite() && self.im.is_finite()
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// Exact rational scalar. Arithmetic is checked only by `i128` overflow
/// semantics, so callers keep magnitudes well inside the `i128` range.
pub type Rational = Ratio<i128>;

impl Scalar for Rational {
    type Real = Rational;
    const KIND: ScalarKind = ScalarKind::Real;

    fn modulus(&self) -> Rational {
        if *self < Rational::zero() {
            -*self
        } else {
            *self
        }
    }
    fn from_real(re: Rational) -> Rational {
        re
    }
    fn as_real(&self) -> Option<Rational> {
        Some(*self)
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    fn is_finite(&self) -> bool {
        true
    }
}

impl Real for Rational {
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_modulus_and_realness() {
        let z = Complex64::new(3.0, -4.0);
        assert_eq!(z.modulus(), 5.0);
        assert_eq!(z.as_real(), None);
        assert_eq!(Complex64::new(2.0, 0.0).as_real(), Some(2.0));
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(3.0f64.pow_u64(0), 1.0);
        assert_eq!(3.0f64.pow_u64(5), 243.0);
        assert_eq!(Rational::new(2, 3).pow_u64(3), Rational::new(8, 27));
        assert_eq!(2.0f32.pow_u64(10), 1024.0);
    }

    #[test]
    fn rational_modulus() {
        assert_eq!(Rational::new(-5, 2).modulus(), Rational::new(5, 2));
        assert!(Rational::new(-1, 2).as_real().is_some());
    }
}
