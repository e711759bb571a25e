use std::fmt;

use super::{CyclotomicScalar, HbarScalar, Rational};

/// Coefficient ring for polynomials and exterior objects.
///
/// Implemented by `CyclotomicScalar` (specialized deformation parameter) and
/// `HbarScalar` (formal deformation parameter). Mixed-order arithmetic is a
/// programming error and panics.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_of(order: u32) -> Self;
    fn one_of(order: u32) -> Self;
    fn from_cyclotomic(c: CyclotomicScalar) -> Self;
    fn field_order(&self) -> u32;
    fn is_zero_coeff(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times_cyclotomic(&self, c: &CyclotomicScalar) -> Self;
    /// Nonzero coefficients by power of the deformation parameter.
    fn hbar_terms(&self) -> Vec<(i64, CyclotomicScalar)>;

    fn times_rational(&self, q: &Rational) -> Self {
        self.times_cyclotomic(&CyclotomicScalar::from_rational(self.field_order(), q.clone()))
    }

    fn add_to(&mut self, rhs: &Self) {
        *self = self.plus(rhs);
    }
}

impl Coeff for CyclotomicScalar {
    fn zero_of(order: u32) -> Self {
        CyclotomicScalar::zero(order)
    }
    fn one_of(order: u32) -> Self {
        CyclotomicScalar::one(order)
    }
    fn from_cyclotomic(c: CyclotomicScalar) -> Self {
        c
    }
    fn field_order(&self) -> u32 {
        self.order()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn times_cyclotomic(&self, c: &CyclotomicScalar) -> Self {
        self * c
    }
    fn times_rational(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn hbar_terms(&self) -> Vec<(i64, CyclotomicScalar)> {
        if self.is_zero() {
            vec![]
        } else {
            vec![(0, self.clone())]
        }
    }
    fn add_to(&mut self, rhs: &Self) {
        *self += rhs;
    }
}

impl Coeff for HbarScalar {
    fn zero_of(order: u32) -> Self {
        HbarScalar::zero(order)
    }
    fn one_of(order: u32) -> Self {
        HbarScalar::one(order)
    }
    fn from_cyclotomic(c: CyclotomicScalar) -> Self {
        HbarScalar::constant(c)
    }
    fn field_order(&self) -> u32 {
        self.order()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn times_cyclotomic(&self, c: &CyclotomicScalar) -> Self {
        self.scale(c)
    }
    fn times_rational(&self, q: &Rational) -> Self {
        self.scale_rational(q)
    }
    fn hbar_terms(&self) -> Vec<(i64, CyclotomicScalar)> {
        self.terms().map(|(k, c)| (k, c.clone())).collect()
    }
}
