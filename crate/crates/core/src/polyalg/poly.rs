use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use smallvec::SmallVec;

use super::PolyError;
use crate::linalg::Matrix;
use crate::scalar::{rational, Coeff, CyclotomicScalar, HbarScalar, Rational};

/// Dense exponent vector, one entry per variable.
pub type Exponent = SmallVec<[u32; 6]>;

/// Sparse multivariate polynomial in `x0 .. x{n-1}` with sorted terms.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Exponent, C>,
}

/// Polynomials with formal-hbar coefficients.
pub type Polynomial = Poly<HbarScalar>;

/// Polynomials over Q(zeta_N) without a deformation parameter.
pub type CPoly = Poly<CyclotomicScalar>;

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Poly {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, &vec![0; nvars], c)
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, C::one_of(order))
    }

    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, &e, C::one_of(order))
    }

    pub fn monomial(nvars: usize, exp: &[u32], c: C) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = Self::zero(nvars, c.field_order());
        if !c.is_zero_coeff() {
            p.terms.insert(Exponent::from_slice(exp), c);
        }
        p
    }

    /// Sums the given terms, merging repeated exponents.
    pub fn from_terms(nvars: usize, order: u32, terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero(nvars, order);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> C {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| C::zero_of(self.order))
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: &C) {
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                x.add_to(c);
                if x.is_zero_coeff() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            Err(PolyError::VariableCount(self.nvars, other.nvars))
        } else if self.order != other.order {
            Err(PolyError::FieldOrder(self.order, other.order))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &c.negate());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut acc: HashMap<Exponent, C> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca.times(cb);
                match acc.get_mut(&e) {
                    Some(x) => x.add_to(&c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let mut out = Self::zero(self.nvars, self.order);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero_coeff()).collect();
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_terms(|x| x.times(c))
    }

    pub fn scale_cyclotomic(&self, c: &CyclotomicScalar) -> Self {
        self.map_terms(|x| x.times_cyclotomic(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map_terms(|x| x.times_rational(q))
    }

    fn map_terms(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            let y = f(c);
            if !y.is_zero_coeff() {
                out.terms.insert(e.clone(), y);
            }
        }
        out
    }

    /// Applies `f` to every coefficient, changing the coefficient type.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::<D>::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            let y = f(c);
            if !y.is_zero_coeff() {
                out.terms.insert(e.clone(), y);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.terms
                .insert(f, c.times_rational(&rational(e[i] as i64, 1)));
        }
        out
    }

    /// Mixed partial derivative `d^alpha`.
    pub fn derivative_multi(&self, alpha: &[u32]) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            if e.iter().zip(alpha).any(|(a, b)| a < b) {
                continue;
            }
            let mut factor: i64 = 1;
            let mut f = e.clone();
            for (k, &a) in alpha.iter().enumerate() {
                for j in 0..a {
                    factor *= (e[k] - j) as i64;
                }
                f[k] -= a;
            }
            out.terms.insert(f, c.times_rational(&rational(factor, 1)));
        }
        out
    }

    /// Keeps the terms of total degree `<= d`.
    pub fn truncate_degree(&self, d: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| e.iter().sum::<u32>() <= d);
        out
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| e.iter().sum::<u32>() == d);
        out
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (k, &x) in e.iter().enumerate() {
                m[k] = m[k].max(x);
            }
        }
        m
    }

    /// `x -> f(A x)` for an `n x m` matrix `A`; the result has `m` variables.
    pub fn compose_linear(&self, a: &Matrix) -> Result<Self, PolyError> {
        if a.rows() != self.nvars {
            return Err(PolyError::VariableCount(self.nvars, a.rows()));
        }
        let m = a.cols();
        let forms: Vec<Poly<C>> = (0..self.nvars)
            .map(|i| {
                let mut l = Poly::zero(m, self.order);
                for j in 0..m {
                    let x = a.get(i, j);
                    if !x.is_zero() {
                        let mut e = vec![0; m];
                        e[j] = 1;
                        l.add_term(Exponent::from_vec(e), &C::from_cyclotomic(x.clone()));
                    }
                }
                l
            })
            .collect();
        let maxe = self.max_exponents();
        let powers: Vec<Vec<Poly<C>>> = forms
            .iter()
            .zip(&maxe)
            .map(|(l, &k)| {
                let mut v = vec![Poly::one(m, self.order)];
                for j in 0..k as usize {
                    let next = &v[j] * l;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero(m, self.order);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            for (f, d) in t.terms {
                out.add_term(f, &d);
            }
        }
        Ok(out)
    }

    /// `f o A` for an invertible square matrix `A`.
    pub fn linear_substitute(&self, a: &Matrix) -> Result<Self, PolyError> {
        if !a.is_square() || a.rows() != self.nvars {
            return Err(PolyError::VariableCount(self.nvars, a.rows()));
        }
        if a.det().is_zero() {
            return Err(PolyError::Singular);
        }
        self.compose_linear(a)
    }

    /// Evaluates at a point given by cyclotomic coordinates.
    pub fn evaluate(&self, point: &[CyclotomicScalar]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut acc = C::zero_of(self.order);
        for (e, c) in &self.terms {
            let mut m = CyclotomicScalar::one(self.order);
            for (x, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    m = &m * x;
                }
            }
            acc.add_to(&c.times_cyclotomic(&m));
        }
        acc
    }
}

impl Poly<HbarScalar> {
    pub fn from_cyclotomic_poly(p: &CPoly) -> Self {
        p.map_coeffs(|c| HbarScalar::constant(c.clone()))
    }

    /// Coefficient of `hbar^k` as a polynomial over Q(zeta_N).
    pub fn hbar_coefficient(&self, k: i64) -> CPoly {
        self.map_coeffs(|c| c.coeff(k))
    }

    /// Smallest and largest power of hbar present.
    pub fn hbar_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.values().filter_map(HbarScalar::valuation).min()?;
        let hi = self.terms.values().filter_map(HbarScalar::top_exponent).max()?;
        Some((lo, hi))
    }

    /// Drops the hbar-powers `>= bound` from every coefficient.
    pub fn discard_hbar_above(&self, bound: i64) -> Self {
        self.map_terms(|c| c.discard_above(bound))
    }

    /// Smallest truncation order among the coefficients.
    pub fn precision(&self) -> Option<i64> {
        self.terms.values().filter_map(HbarScalar::precision).min()
    }

    /// Multiplies by `hbar^k`.
    pub fn shift_hbar(&self, k: i64) -> Self {
        self.map_terms(|c| c.shift(k))
    }
}

impl Poly<CyclotomicScalar> {
    pub fn to_hbar(&self) -> Polynomial {
        Polynomial::from_cyclotomic_poly(self)
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.map_terms(C::negate)
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Poly<C>) -> Poly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders in the syntax accepted by `parse_polynomial`, highest terms first.
impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            for (k, cc) in c.hbar_terms() {
                let (neg, body) = render_term(&cc, k, e);
                match (first, neg) {
                    (true, true) => write!(f, "-{body}")?,
                    (true, false) => write!(f, "{body}")?,
                    (false, true) => write!(f, " - {body}")?,
                    (false, false) => write!(f, " + {body}")?,
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn render_term(c: &CyclotomicScalar, k: i64, e: &[u32]) -> (bool, String) {
    let mut mono: Vec<String> = Vec::new();
    match k {
        0 => {}
        1 => mono.push("h".into()),
        _ => mono.push(format!("h^{k}")),
    }
    for (i, &x) in e.iter().enumerate() {
        match x {
            0 => {}
            1 => mono.push(format!("x{i}")),
            _ => mono.push(format!("x{i}^{x}")),
        }
    }
    let mono = mono.join("*");
    match c.to_rational() {
        Some(q) => {
            let neg = q < Rational::from_integer(0.into());
            let a = if neg { -q } else { q };
            let num = if a.is_integer() {
                a.to_integer().to_string()
            } else if mono.is_empty() {
                format!("{}/{}", a.numer(), a.denom())
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            let body = if mono.is_empty() {
                num
            } else if a == Rational::from_integer(1.into()) {
                mono
            } else {
                format!("{num}*{mono}")
            };
            (neg, body)
        }
        None => {
            if mono.is_empty() {
                (false, format!("({c})"))
            } else {
                (false, format!("({c})*{mono}"))
            }
        }
    }
}

/// All exponent vectors in `nvars` variables of total degree exactly `d`.
pub fn exponents_of_degree(nvars: usize, d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        let n = cur.len();
        if n == 0 {
            if left == 0 {
                out.push(Exponent::new());
            }
            return;
        }
        if i == n - 1 {
            cur[i] = left;
            out.push(Exponent::from_slice(cur));
            cur[i] = 0;
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All exponent vectors of total degree `<= d`, grouped by degree.
pub fn exponents_up_to(nvars: usize, d: u32) -> Vec<Exponent> {
    (0..=d).flat_map(|k| exponents_of_degree(nvars, k)).collect()
}

/// A random polynomial with at most `max_terms` terms of total degree
/// `<= max_degree` and small rational coefficients.
pub fn random_poly<C: Coeff, R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    order: u32,
    max_degree: u32,
    max_terms: usize,
) -> Poly<C> {
    let mut p = Poly::zero(nvars, order);
    let nterms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..nterms {
        let d = rng.gen_range(0..=max_degree);
        let mut e = vec![0u32; nvars];
        for _ in 0..d {
            if nvars > 0 {
                e[rng.gen_range(0..nvars)] += 1;
            }
        }
        let num = loop {
            let x = rng.gen_range(-5i64..=5);
            if x != 0 {
                break x;
            }
        };
        let den = rng.gen_range(1i64..=3);
        let c = CyclotomicScalar::from_frac(order, num, den);
        p.add_term(Exponent::from_vec(e), &C::from_cyclotomic(c));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> CPoly {
        CPoly::var(2, 4, i)
    }

    #[test]
    fn derivative_examples() {
        let f = &(&x(0) * &x(0)) * &x(1);
        let expect = (&x(0) * &x(1)).scale_rational(&rational(2, 1));
        assert_eq!(f.derivative(0), expect);
        let g = &x(0) * &x(1);
        assert_eq!(g.derivative(1).derivative(0), CPoly::one(2, 4));
        assert_eq!(f.derivative_multi(&[2, 1]), CPoly::constant(2, CyclotomicScalar::from_int(4, 2)));
    }

    #[test]
    fn difference_of_squares() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(1);
        assert_eq!(&a * &b, &(&x(0) * &x(0)) - &(&x(1) * &x(1)));
    }

    #[test]
    fn substitution_examples() {
        let f = &(&x(0) * &x(0)) + &x(0);
        let minus = Matrix::from_ints(4, &[&[-1, 0], &[0, -1]]);
        assert_eq!(f.linear_substitute(&minus).unwrap(), &(&x(0) * &x(0)) - &x(0));
        let swap = Matrix::from_ints(4, &[&[0, 1], &[1, 0]]);
        let g = &x(0) * &x(1);
        assert_eq!(g.linear_substitute(&swap).unwrap(), g);
        let singular = Matrix::from_ints(4, &[&[1, 1], &[1, 1]]);
        assert_eq!(g.linear_substitute(&singular), Err(PolyError::Singular));
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(exponents_of_degree(3, 2).len(), 6);
        assert_eq!(exponents_up_to(2, 3).len(), 10);
        assert_eq!(exponents_of_degree(0, 0).len(), 1);
    }

    #[test]
    fn display_is_stable() {
        let f = &(&x(0) * &x(0)).scale_rational(&rational(3, 1)) - &x(1).scale_rational(&rational(1, 2));
        assert_eq!(f.to_string(), "3*x0^2 - (1/2)*x1");
        assert_eq!(CPoly::zero(2, 4).to_string(), "0");
        let h = Polynomial::var(2, 4, 0).shift_hbar(1);
        assert_eq!(h.to_string(), "h*x0");
    }
}
