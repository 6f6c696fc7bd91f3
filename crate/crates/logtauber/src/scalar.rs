//! Codomain scalar abstraction: the crate's numerics are generic over the
//! value type of the analyzed function, concretely `f64` or `Complex64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::funcspec::Codomain;

/// Scalar codomain of an analyzed function.
///
/// `modulus` plays the role of `|·|` in every two-sided bound; `re`/`im`
/// expose components for reports and componentwise medians.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    const CODOMAIN: Codomain;

    fn from_re(re: f64) -> Self;
    /// Builds a value from components. For the real scalar the imaginary
    /// part must be zero; callers guarantee this via codomain checks.
    fn from_re_im(re: f64, im: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn modulus(self) -> f64;
    fn is_finite_val(self) -> bool;
}

impl Scalar for f64 {
    const CODOMAIN: Codomain = Codomain::Real;

    fn from_re(re: f64) -> Self {
        re
    }
    fn from_re_im(re: f64, im: f64) -> Self {
        debug_assert_eq!(im, 0.0, "imaginary part fed to a real scalar");
        re
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite_val(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    const CODOMAIN: Codomain = Codomain::Complex;

    fn from_re(re: f64) -> Self {
        Complex64::new(re, 0.0)
    }
    fn from_re_im(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite_val(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
