//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! An element is stored as its residue modulo the N-th cyclotomic
//! polynomial, i.e. as `phi(N)` rational coefficients in the power basis
//! `1, zeta, ..., zeta^(phi(N)-1)`. Reduction tables are computed once per
//! order and shared process-wide.

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, ScalarError};

/// Reduction data for one cyclotomic order.
#[derive(Debug)]
pub struct CycloContext {
    order: u32,
    degree: usize,
    /// Coefficients of Phi_N, lowest degree first (monic, length degree+1).
    minimal_poly: Vec<i64>,
    /// `powers[k]` is zeta^k reduced, for `k < max(2*degree - 1, order)`.
    powers: Vec<Vec<Rational>>,
}

impl CycloContext {
    fn build(order: u32) -> Self {
        let minimal_poly = cyclotomic_polynomial(order);
        let degree = minimal_poly.len() - 1;
        let span = (2 * degree).saturating_sub(1).max(order as usize);
        let mut powers = Vec::with_capacity(span);
        let mut current = vec![Rational::zero(); degree];
        current[0] = Rational::one();
        for _ in 0..span {
            powers.push(current.clone());
            // multiply by zeta and reduce
            let carry = current[degree - 1].clone();
            for i in (1..degree).rev() {
                current[i] = current[i - 1].clone();
            }
            current[0] = Rational::zero();
            if !carry.is_zero() {
                for (i, c) in minimal_poly.iter().take(degree).enumerate() {
                    current[i] -= &carry * Rational::from_integer(BigInt::from(*c));
                }
            }
        }
        CycloContext {
            order,
            degree,
            minimal_poly,
            powers,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Euler phi of the order, the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minimal_poly(&self) -> &[i64] {
        &self.minimal_poly
    }
}

static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static CycloContext>>> = OnceLock::new();

thread_local! {
    static LAST: Cell<Option<&'static CycloContext>> = const { Cell::new(None) };
}

/// Shared reduction context for `Q(zeta_order)`.
pub fn context(order: u32) -> &'static CycloContext {
    assert!(order > 0, "cyclotomic order must be positive");
    if let Some(ctx) = LAST.with(|c| c.get()) {
        if ctx.order == order {
            return ctx;
        }
    }
    let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let ctx = {
        let mut map = registry.lock().expect("cyclotomic registry poisoned");
        *map.entry(order)
            .or_insert_with(|| Box::leak(Box::new(CycloContext::build(order))))
    };
    LAST.with(|c| c.set(Some(ctx)));
    ctx
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// An element of Q(zeta_N), fully reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicScalar {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicScalar {
    pub fn zero(order: u32) -> Self {
        let d = context(order).degree;
        CyclotomicScalar {
            order,
            coeffs: vec![Rational::zero(); d],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, q: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(order: u32, num: i64, den: i64) -> Self {
        Self::from_rational(
            order,
            Rational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// Builds an element from (possibly unreduced) power-basis coefficients.
    pub fn from_coeffs(order: u32, coeffs: &[Rational]) -> Self {
        let ctx = context(order);
        let mut out = Self::zero(order);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = k % order as usize;
            add_scaled_power(&mut out.coeffs, ctx, e, c);
        }
        out
    }

    /// zeta_N^k, reduced.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let ctx = context(order);
        let e = k.rem_euclid(order as i64) as usize;
        let mut out = Self::zero(order);
        add_scaled_power(&mut out.coeffs, ctx, e, &Rational::one());
        out
    }

    /// The imaginary unit; requires 4 | order.
    pub fn imag_unit(order: u32) -> Result<Self, ScalarError> {
        if order % 4 != 0 {
            return Err(ScalarError::NotRepresentable {
                what: "i".into(),
                order,
            });
        }
        Ok(Self::root_of_unity(order, order as i64 / 4))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<i64> {
        let q = self.to_rational()?;
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.order != other.order {
            Err(ScalarError::OrderMismatch(self.order, other.order))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ctx = context(self.order);
        let d = ctx.degree;
        if d == 1 {
            return CyclotomicScalar {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut raw = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut out = vec![Rational::zero(); d];
        for (k, c) in raw.iter().enumerate() {
            if !c.is_zero() {
                add_scaled_power(&mut out, ctx, k, c);
            }
        }
        CyclotomicScalar {
            order: self.order,
            coeffs: out,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let ctx = context(self.order);
        if ctx.degree == 1 {
            return Ok(Self::from_rational(self.order, self.coeffs[0].recip()));
        }
        let modulus: Vec<Rational> = ctx
            .minimal_poly
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let a = trim(self.coeffs.clone());
        // invariant: s*a = r mod Phi
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
        while r1.len() != 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                // a and Phi share a factor: impossible for nonzero a
                return Err(ScalarError::DivisionByZero);
            }
        }
        let c = r1[0].recip();
        let coeffs: Vec<Rational> = s1.iter().map(|x| x * &c).collect();
        Ok(Self::from_coeffs(self.order, &coeffs))
    }

    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation zeta -> zeta^(-1).
    pub fn conj(&self) -> Self {
        let ctx = context(self.order);
        let n = self.order as usize;
        let mut out = Self::zero(self.order);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                add_scaled_power(&mut out.coeffs, ctx, (n - k % n) % n, c);
            }
        }
        out
    }

    /// Floating-point value under the embedding zeta -> exp(2 pi i / N).
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    /// Re-embeds into Q(zeta_M) for a multiple M of the current order.
    pub fn lift(&self, new_order: u32) -> Result<Self, ScalarError> {
        if new_order % self.order != 0 {
            return Err(ScalarError::OrderMismatch(self.order, new_order));
        }
        let step = (new_order / self.order) as usize;
        let mut raw = vec![Rational::zero(); step * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Ok(Self::from_coeffs(new_order, &raw))
    }
}

fn add_scaled_power(out: &mut [Rational], ctx: &CycloContext, e: usize, c: &Rational) {
    let e = e % ctx.order as usize;
    for (o, p) in out.iter_mut().zip(&ctx.powers[e]) {
        if !p.is_zero() {
            *o += c * p;
        }
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = &rem[rem.len() - 1] / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &c * y;
        }
        quot[k] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders in the literal syntax accepted by the polynomial parser,
/// e.g. `(1/2) - (1/2)*z4^1`.
impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let num = if abs.is_integer() {
                abs.to_integer().to_string()
            } else {
                format!("({}/{})", abs.numer(), abs.denom())
            };
            if k == 0 {
                write!(f, "{num}")?;
            } else if abs.is_one() {
                write!(f, "z{}^{}", self.order, k)?;
            } else {
                write!(f, "{num}*z{}^{}", self.order, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator impls panic on mismatched orders; use the `checked_*` methods
// where the orders are not known to agree.

impl Add for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: Self) -> CyclotomicScalar {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: Self) -> CyclotomicScalar {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: Self) -> CyclotomicScalar {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Add for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: Self) -> CyclotomicScalar {
        &self + &rhs
    }
}

impl Sub for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: Self) -> CyclotomicScalar {
        &self - &rhs
    }
}

impl Mul for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: Self) -> CyclotomicScalar {
        &self * &rhs
    }
}

impl Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        -&self
    }
}

impl AddAssign<&CyclotomicScalar> for CyclotomicScalar {
    fn add_assign(&mut self, rhs: &CyclotomicScalar) {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CyclotomicScalar> for CyclotomicScalar {
    fn sub_assign(&mut self, rhs: &CyclotomicScalar) {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CyclotomicScalar> for CyclotomicScalar {
    fn mul_assign(&mut self, rhs: &CyclotomicScalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(context(24).degree(), 8);
    }

    #[test]
    fn zeta3_minimal_relation() {
        let z = CyclotomicScalar::root_of_unity(3, 1);
        let s = &(&(&z * &z) + &z) + &CyclotomicScalar::one(3);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_one_plus_i() {
        // oracle: solve (1 + i)(a + b i) = 1, i.e. a - b = 1, a + b = 0
        let (a, b) = (q(1, 2), q(-1, 2));
        let i = CyclotomicScalar::imag_unit(4).unwrap();
        let x = &CyclotomicScalar::one(4) + &i;
        let inv = x.inv().unwrap();
        assert_eq!(inv.coeffs(), &[a, b]);
        assert!((&inv * &x).is_one());
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(
            CyclotomicScalar::root_of_unity(4, 2),
            CyclotomicScalar::from_int(4, -1)
        );
        assert_eq!(
            CyclotomicScalar::root_of_unity(2, 1),
            CyclotomicScalar::from_int(2, -1)
        );
        let p = &CyclotomicScalar::root_of_unity(3, 1) * &CyclotomicScalar::root_of_unity(3, 2);
        assert!(p.is_one());
        let z12 = CyclotomicScalar::root_of_unity(12, 5);
        assert!(z12.pow(12).unwrap().is_one());
        assert_eq!(z12.pow(-1).unwrap(), CyclotomicScalar::root_of_unity(12, 7));
    }

    #[test]
    fn mismatch_and_zero_division() {
        let a = CyclotomicScalar::one(3);
        let b = CyclotomicScalar::one(4);
        assert!(matches!(
            a.checked_add(&b),
            Err(ScalarError::OrderMismatch(3, 4))
        ));
        assert!(matches!(
            CyclotomicScalar::zero(5).inv(),
            Err(ScalarError::DivisionByZero)
        ));
        assert!(CyclotomicScalar::imag_unit(6).is_err());
    }

    #[test]
    fn conjugation_and_lift() {
        let i = CyclotomicScalar::imag_unit(4).unwrap();
        assert_eq!(i.conj(), -&i);
        let i12 = i.lift(12).unwrap();
        assert_eq!(i12, CyclotomicScalar::root_of_unity(12, 3));
        let (re, im) = CyclotomicScalar::root_of_unity(8, 1).to_complex();
        assert!((re - 0.5f64.sqrt()).abs() < 1e-12 && (im - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn display_literal() {
        let i = CyclotomicScalar::imag_unit(4).unwrap();
        let x = (&CyclotomicScalar::one(4) + &i).inv().unwrap();
        assert_eq!(x.to_string(), "(1/2) - (1/2)*z4^1");
        assert_eq!(CyclotomicScalar::zero(4).to_string(), "0");
    }
}
