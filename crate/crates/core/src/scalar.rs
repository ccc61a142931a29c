//! Scalar traits shared by the polynomial and matrix layers.
//!
//! Everything above this module is written against [`Ring`] and [`Field`]
//! rather than a concrete number type. The exact pipeline instantiates them
//! with [`crate::Rational`]; `f64` and `Ratio<i64>` also satisfy the bounds,
//! which is handy for quick experiments, but zero tests are only meaningful
//! for exact types.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// A commutative ring with by-reference arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl<T> Ring for T
where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>,
    for<'a> &'a T: Add<&'a T, Output = T>
        + Sub<&'a T, Output = T>
        + Mul<&'a T, Output = T>
        + Neg<Output = T>,
{
    #[inline]
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    #[inline]
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    #[inline]
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    #[inline]
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn div_ref(&self, rhs: &Self) -> Self;

    fn recip_ref(&self) -> Self {
        Self::one().div_ref(self)
    }
}

impl<T> Field for T
where
    T: Ring + Div<Output = T>,
    for<'a> &'a T: Div<&'a T, Output = T>,
{
    #[inline]
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn square<R: Ring>(x: &R) -> R {
        x.mul_ref(x)
    }

    #[test]
    fn generic_over_several_scalars() {
        assert_eq!(square(&3.0f64), 9.0);
        assert_eq!(square(&Ratio::new(2i64, 3)), Ratio::new(4, 9));
        assert_eq!(Ratio::new(2i64, 3).recip_ref(), Ratio::new(3, 2));
    }
}
