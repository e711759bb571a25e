//! Truncated formal Laurent series in the deformation parameter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{CyclotomicScalar, Rational, ScalarError};

/// `sum_k c_k hbar^k` with `k >= lowest_exponent`.
///
/// `precision` is the exclusive bound on exponents whose coefficients are
/// known: `Some(p)` means the value is exact modulo `hbar^p`, `None` means
/// the series is a Laurent polynomial known exactly. Stored coefficients at
/// or beyond `precision` are discarded, trailing and leading zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HbarScalar {
    order: u32,
    lowest: i64,
    coeffs: Vec<CyclotomicScalar>,
    precision: Option<i64>,
}

impl HbarScalar {
    pub fn zero(order: u32) -> Self {
        HbarScalar {
            order,
            lowest: 0,
            coeffs: vec![],
            precision: None,
        }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(CyclotomicScalar::one(order))
    }

    pub fn constant(c: CyclotomicScalar) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * hbar^k`, exact.
    pub fn monomial(c: CyclotomicScalar, k: i64) -> Self {
        let order = c.order();
        Self::from_parts(order, k, vec![c], None)
    }

    /// The deformation parameter itself.
    pub fn hbar(order: u32) -> Self {
        Self::monomial(CyclotomicScalar::one(order), 1)
    }

    pub fn from_parts(
        order: u32,
        lowest: i64,
        coeffs: Vec<CyclotomicScalar>,
        precision: Option<i64>,
    ) -> Self {
        let mut s = HbarScalar {
            order,
            lowest,
            coeffs,
            precision,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(p) = self.precision {
            let keep = (p - self.lowest).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(CyclotomicScalar::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lowest += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lowest = 0;
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lowest)
        }
    }

    /// Highest stored exponent (`None` for zero).
    pub fn top_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lowest + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lowest == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Coefficient of `hbar^k` (zero when not stored).
    pub fn coeff(&self, k: i64) -> CyclotomicScalar {
        if k < self.lowest {
            return CyclotomicScalar::zero(self.order);
        }
        self.coeffs
            .get((k - self.lowest) as usize)
            .cloned()
            .unwrap_or_else(|| CyclotomicScalar::zero(self.order))
    }

    /// Iterates `(exponent, coefficient)` over stored nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CyclotomicScalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lowest + i as i64, c))
    }

    /// Drops all terms of exponent `>= bound` and records the truncation.
    pub fn truncate(&self, bound: i64) -> Self {
        let p = match self.precision {
            Some(p) => p.min(bound),
            None => bound,
        };
        Self::from_parts(self.order, self.lowest, self.coeffs.clone(), Some(p))
    }

    /// Drops terms of exponent `>= bound` without recording a precision.
    pub fn discard_above(&self, bound: i64) -> Self {
        let keep = (bound - self.lowest).max(0) as usize;
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(keep);
        Self::from_parts(self.order, self.lowest, coeffs, self.precision)
    }

    pub fn scale(&self, c: &CyclotomicScalar) -> Self {
        Self::from_parts(
            self.order,
            self.lowest,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.precision,
        )
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::from_parts(
            self.order,
            self.lowest,
            self.coeffs.iter().map(|x| x.scale(q)).collect(),
            self.precision,
        )
    }

    /// Multiplies by `hbar^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_parts(
            self.order,
            self.lowest + k,
            self.coeffs.clone(),
            self.precision.map(|p| p + k),
        )
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
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        if other.is_zero() && other.precision.is_none() {
            return self.clone();
        }
        if self.is_zero() && self.precision.is_none() {
            return if subtract { -other } else { other.clone() };
        }
        let lowest = if self.is_zero() {
            other.lowest
        } else if other.is_zero() {
            self.lowest
        } else {
            self.lowest.min(other.lowest)
        };
        let top = self
            .top_exponent()
            .into_iter()
            .chain(other.top_exponent())
            .max()
            .unwrap_or(lowest);
        let len = (top - lowest + 1).max(0) as usize;
        let mut coeffs = vec![CyclotomicScalar::zero(self.order); len];
        for (k, c) in self.terms() {
            coeffs[(k - lowest) as usize] += c;
        }
        for (k, c) in other.terms() {
            if subtract {
                coeffs[(k - lowest) as usize] -= c;
            } else {
                coeffs[(k - lowest) as usize] += c;
            }
        }
        let precision = min_precision(self.precision, other.precision);
        Self::from_parts(self.order, lowest, coeffs, precision)
    }

    /// Product; the result is known modulo `hbar^p` with
    /// `p = min(prec(a) + val(b), prec(b) + val(a))`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let pa = self
            .precision
            .and_then(|p| other.valuation().map(|v| p + v));
        let pb = other
            .precision
            .and_then(|p| self.valuation().map(|v| p + v));
        let precision = min_precision(pa, pb);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::from_parts(self.order, 0, vec![], precision));
        }
        let lowest = self.lowest + other.lowest;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = precision {
            len = len.min((p - lowest).max(0) as usize);
        }
        let mut coeffs = vec![CyclotomicScalar::zero(self.order); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Ok(Self::from_parts(self.order, lowest, coeffs, precision))
    }

    /// Inverse of a unit, computed to the given number of terms past the
    /// leading one when the input is exact; otherwise to the input's
    /// relative precision.
    ///
    /// The lowest exponent of the result is minus that of the input.
    pub fn invert(&self, terms: usize) -> Result<Self, ScalarError> {
        let v = self.valuation().ok_or(ScalarError::NotAUnit)?;
        let lead_inv = self.coeffs[0].inv()?;
        let rel = match self.precision {
            Some(p) => ((p - v).max(0) as usize).min(terms.max(1)),
            None => terms.max(1),
        };
        // a = hbar^v * u, u = u0 + u1 hbar + ...; solve u * w = 1 term by term
        let mut w: Vec<CyclotomicScalar> = Vec::with_capacity(rel);
        for k in 0..rel {
            let mut acc = if k == 0 {
                CyclotomicScalar::one(self.order)
            } else {
                CyclotomicScalar::zero(self.order)
            };
            for j in 1..=k {
                if let Some(u) = self.coeffs.get(j) {
                    if !u.is_zero() {
                        acc -= &(u * &w[k - j]);
                    }
                }
            }
            w.push(&acc * &lead_inv);
        }
        Ok(Self::from_parts(self.order, -v, w, Some(-v + rel as i64)))
    }

    pub fn checked_div(&self, other: &Self, terms: usize) -> Result<Self, ScalarError> {
        self.checked_mul(&other.invert(terms)?)
    }

    /// Substitutes `hbar = 1` (only meaningful for exact Laurent polynomials).
    pub fn evaluate_at_one(&self) -> CyclotomicScalar {
        let mut acc = CyclotomicScalar::zero(self.order);
        for c in &self.coeffs {
            acc += c;
        }
        acc
    }
}

fn min_precision(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl fmt::Debug for HbarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `(c0) + (c1)*h + (c2)*h^2 ...`, with `+ O(h^p)` when truncated.
impl fmt::Display for HbarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*h")?,
                _ => write!(f, "({c})*h^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(p) = self.precision {
            write!(f, " + O(h^{p})")?;
        }
        Ok(())
    }
}

impl Add for &HbarScalar {
    type Output = HbarScalar;
    fn add(self, rhs: Self) -> HbarScalar {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &HbarScalar {
    type Output = HbarScalar;
    fn sub(self, rhs: Self) -> HbarScalar {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &HbarScalar {
    type Output = HbarScalar;
    fn mul(self, rhs: Self) -> HbarScalar {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        HbarScalar {
            order: self.order,
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }
}

impl Add for HbarScalar {
    type Output = HbarScalar;
    fn add(self, rhs: Self) -> HbarScalar {
        &self + &rhs
    }
}

impl Sub for HbarScalar {
    type Output = HbarScalar;
    fn sub(self, rhs: Self) -> HbarScalar {
        &self - &rhs
    }
}

impl Mul for HbarScalar {
    type Output = HbarScalar;
    fn mul(self, rhs: Self) -> HbarScalar {
        &self * &rhs
    }
}

impl Neg for HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64, d: i64) -> CyclotomicScalar {
        CyclotomicScalar::from_frac(4, n, d)
    }

    fn series(coeffs: &[(i64, i64)]) -> HbarScalar {
        HbarScalar::from_parts(4, 0, coeffs.iter().map(|&(n, d)| c(n, d)).collect(), None)
    }

    #[test]
    fn geometric_series() {
        let a = series(&[(1, 1), (1, 1)]);
        let inv = a.invert(6).unwrap();
        for k in 0..6 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coeff(k), c(sign, 1));
        }
        assert_eq!(inv.precision(), Some(6));
        let prod = &a * &inv;
        assert_eq!(prod.precision(), Some(6));
        assert!(prod.is_one());
    }

    #[test]
    fn invert_hbar() {
        let h = HbarScalar::hbar(4);
        let inv = h.invert(3).unwrap();
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(inv.coeff(-1), c(1, 1));
        assert!((&h * &inv).is_one());
    }

    #[test]
    fn long_division_two_plus_three_hbar() {
        // oracle: w0 = 1/2, w_k = -(3/2) w_{k-1}
        let a = series(&[(2, 1), (3, 1)]);
        let inv = a.invert(4).unwrap();
        assert_eq!(inv.coeff(0), c(1, 2));
        assert_eq!(inv.coeff(1), c(-3, 4));
        assert_eq!(inv.coeff(2), c(9, 8));
        assert_eq!(inv.coeff(3), c(-27, 16));
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn precision_bookkeeping() {
        let a = series(&[(1, 1), (1, 1)]).truncate(3);
        let b = HbarScalar::hbar(4).shift(-2); // hbar^-1, exact
        let p = &a * &b;
        // (1 + h + O(h^3)) * h^-1 = h^-1 + 1 + O(h^2)
        assert_eq!(p.precision(), Some(2));
        assert_eq!(p.valuation(), Some(-1));
        let s = &a + &series(&[(0, 1), (0, 1), (0, 1), (5, 1)]);
        assert_eq!(s.precision(), Some(3));
        assert_eq!(s.top_exponent(), Some(1));
    }

    #[test]
    fn non_unit() {
        assert!(matches!(
            HbarScalar::zero(4).invert(3),
            Err(ScalarError::NotAUnit)
        ));
    }
}
