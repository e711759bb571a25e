//! The Moyal-Weyl star product for a constant Poisson bivector, star
//! commutators, and the star inverse square root.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyalg::{random_poly, Poly, Polynomial};
use crate::report::Check;
use crate::scalar::{rational, Coeff, CyclotomicScalar, HbarScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("dimension mismatch: polynomial has {0} variables, bivector acts on {1}")]
    Dimension(usize, usize),
    #[error("bivector matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("the imaginary unit is not in Q(zeta_{0}); use an order divisible by 4")]
    NoImaginaryUnit(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Constant bivector `Pi = Pi^{ij} d_i ^ d_j` on a vector space of
/// dimension `2n`, stored as its antisymmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantBivector {
    matrix: Matrix,
    symplectic: bool,
}

impl ConstantBivector {
    pub fn new(matrix: Matrix) -> Result<Self, StarError> {
        if !matrix.is_square() {
            return Err(StarError::NotAntisymmetric);
        }
        let n = matrix.rows();
        for i in 0..n {
            for j in 0..n {
                if matrix.get(i, j) != &-matrix.get(j, i) {
                    return Err(StarError::NotAntisymmetric);
                }
            }
        }
        let symplectic = !matrix.det().is_zero();
        Ok(ConstantBivector { matrix, symplectic })
    }

    /// Darboux bivector on `(x_0..x_{n-1}, p_0..p_{n-1})` with `{x_i, p_i} = 1`.
    pub fn standard(n: usize, order: u32) -> Self {
        let mut m = Matrix::zeros(order, 2 * n, 2 * n);
        for i in 0..n {
            m.set(i, n + i, CyclotomicScalar::one(order));
            m.set(n + i, i, CyclotomicScalar::from_int(order, -1));
        }
        ConstantBivector {
            matrix: m,
            symplectic: true,
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn order(&self) -> u32 {
        self.matrix.order()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }

    fn support(&self) -> Vec<(usize, usize, CyclotomicScalar)> {
        let n = self.dimension();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = self.matrix.get(i, j);
                if !x.is_zero() {
                    out.push((i, j, x.clone()));
                }
            }
        }
        out
    }

    fn check<C: Coeff>(&self, f: &Poly<C>) -> Result<(), StarError> {
        if f.nvars() != self.dimension() {
            Err(StarError::Dimension(f.nvars(), self.dimension()))
        } else {
            Ok(())
        }
    }

    /// Whether `g` preserves the bivector: `g Pi g^T = Pi`.
    pub fn is_preserved_by(&self, g: &Matrix) -> bool {
        g.mul(&self.matrix).mul(&g.transpose()) == self.matrix
    }
}

/// `Pi(df, dg) = Pi^{ij} d_i f d_j g`.
pub fn poisson_bracket<C: Coeff>(f: &Poly<C>, g: &Poly<C>, pi: &ConstantBivector) -> Result<Poly<C>, StarError> {
    pi.check(f)?;
    pi.check(g)?;
    let mut out = Poly::zero(f.nvars(), f.order());
    for (i, j, c) in pi.support() {
        let t = &f.derivative(i) * &g.derivative(j);
        out = &out + &t.scale_cyclotomic(&c);
    }
    Ok(out)
}

/// `sum_m c^m / m! Pi^{i1 j1} .. Pi^{im jm} d_{i1..im} f d_{j1..jm} g`
/// for an arbitrary deformation constant `c`; the series terminates.
pub fn moyal_product_with<C: Coeff>(
    f: &Poly<C>,
    g: &Poly<C>,
    pi: &ConstantBivector,
    c: &C,
) -> Result<Poly<C>, StarError> {
    pi.check(f)?;
    pi.check(g)?;
    let n = pi.dimension();
    let order = f.order();
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(n, order));
    }
    let support = pi.support();
    let fmax = f.max_exponents();
    let gmax = g.max_exponents();
    let mut fcache: HashMap<Vec<u32>, Poly<C>> = HashMap::new();
    let mut gcache: HashMap<Vec<u32>, Poly<C>> = HashMap::new();
    let mut out = Poly::zero(n, order);
    let mut cpow: Vec<C> = vec![C::one_of(order)];

    struct Walk<'a> {
        support: &'a [(usize, usize, CyclotomicScalar)],
        fmax: &'a [u32],
        gmax: &'a [u32],
    }
    // Each leaf is a matrix K of multiplicities over the support of Pi.
    fn rec<C: Coeff>(
        w: &Walk<'_>,
        s: usize,
        alpha: &mut Vec<u32>,
        beta: &mut Vec<u32>,
        m: u32,
        weight: CyclotomicScalar,
        leaves: &mut Vec<(Vec<u32>, Vec<u32>, u32, CyclotomicScalar)>,
    ) {
        if s == w.support.len() {
            leaves.push((alpha.clone(), beta.clone(), m, weight));
            return;
        }
        let (i, j, ref pij) = w.support[s];
        let room = (w.fmax[i] - alpha[i]).min(w.gmax[j] - beta[j]);
        let mut wt = weight;
        for k in 0..=room {
            if k > 0 {
                wt = &(&wt * pij) * &CyclotomicScalar::from_frac(pij.order(), 1, k as i64);
            }
            alpha[i] += k;
            beta[j] += k;
            rec::<C>(w, s + 1, alpha, beta, m + k, wt.clone(), leaves);
            alpha[i] -= k;
            beta[j] -= k;
        }
    }

    let walk = Walk {
        support: &support,
        fmax: &fmax,
        gmax: &gmax,
    };
    let mut leaves = Vec::new();
    rec::<C>(
        &walk,
        0,
        &mut vec![0; n],
        &mut vec![0; n],
        0,
        CyclotomicScalar::one(order),
        &mut leaves,
    );
    for (alpha, beta, m, weight) in leaves {
        let df = fcache
            .entry(alpha.clone())
            .or_insert_with(|| f.derivative_multi(&alpha))
            .clone();
        if df.is_zero() {
            continue;
        }
        let dg = gcache
            .entry(beta.clone())
            .or_insert_with(|| g.derivative_multi(&beta))
            .clone();
        if dg.is_zero() {
            continue;
        }
        while cpow.len() <= m as usize {
            let next = cpow.last().unwrap().times(c);
            cpow.push(next);
        }
        let k = cpow[m as usize].times_cyclotomic(&weight);
        out = &out + &(&df * &dg).scale(&k);
    }
    Ok(out)
}

/// The deformation constant `i hbar / 2`.
pub fn moyal_constant(order: u32) -> Result<HbarScalar, StarError> {
    let i = CyclotomicScalar::imag_unit(order).map_err(|_| StarError::NoImaginaryUnit(order))?;
    Ok(HbarScalar::monomial(i.scale(&rational(1, 2)), 1))
}

/// `f * g` with the Moyal product normalized by `i hbar / 2`.
pub fn moyal_product(f: &Polynomial, g: &Polynomial, pi: &ConstantBivector) -> Result<Polynomial, StarError> {
    moyal_product_with(f, g, pi, &moyal_constant(pi.order())?)
}

pub fn star_commutator(f: &Polynomial, g: &Polynomial, pi: &ConstantBivector) -> Result<Polynomial, StarError> {
    Ok(&moyal_product(f, g, pi)? - &moyal_product(g, f, pi)?)
}

/// `b` with `b * b * a = 1 mod hbar^{K+1}` for `a = 1 + O(hbar)`, built
/// order by order from `b = 1`.
pub fn star_inv_sqrt(a: &Polynomial, pi: &ConstantBivector, k: u32) -> Result<Polynomial, StarError> {
    pi.check(a)?;
    let n = pi.dimension();
    let order = a.order();
    let one = Polynomial::one(n, order);
    let negative = a.hbar_range().is_some_and(|(lo, _)| lo < 0);
    if negative || a.hbar_coefficient(0) != one.hbar_coefficient(0) {
        return Err(StarError::Precondition(
            "a - 1 must have strictly positive hbar-order".into(),
        ));
    }
    let bound = k as i64 + 1;
    let mul = |x: &Polynomial, y: &Polynomial| -> Result<Polynomial, StarError> {
        Ok(moyal_product(x, y, pi)?.discard_hbar_above(bound))
    };
    let mut b = one.clone();
    for step in 1..=k as i64 {
        let f = mul(&mul(&b, &b)?, a)?;
        let defect = f.hbar_coefficient(step);
        if defect.is_zero() {
            continue;
        }
        let correction = Polynomial::from_cyclotomic_poly(&defect.scale_rational(&rational(-1, 2))).shift_hbar(step);
        b = &b + &correction;
    }
    Ok(b)
}

/// Whether `x = 1 mod hbar^bound`.
pub fn is_one_modulo(x: &Polynomial, bound: i64) -> bool {
    let d = &x.discard_hbar_above(bound) - &Polynomial::one(x.nvars(), x.order());
    d.is_zero()
}

/// A random polynomial with exact rational coefficients.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, nvars: usize, order: u32, max_degree: u32, max_terms: usize) -> Polynomial {
    random_poly(rng, nvars, order, max_degree, max_terms)
}

/// Exact associativity on sampled triples.
pub fn verify_associativity(samples: &[(Polynomial, Polynomial, Polynomial)], pi: &ConstantBivector) -> Result<Check, StarError> {
    let mut check = Check::new("moyal-associativity", "(f*g)*h = f*(g*h)");
    for (f, g, h) in samples {
        let lhs = moyal_product(&moyal_product(f, g, pi)?, h, pi)?;
        let rhs = moyal_product(f, &moyal_product(g, h, pi)?, pi)?;
        check.record(lhs == rhs, || vec![("f", f.to_string()), ("g", g.to_string()), ("h", h.to_string())]);
    }
    Ok(check)
}

/// Order 0 of `f*g` is `fg`, order 1 is `(i/2) Pi(f,g)`, and the leading
/// term of `[f,g]` is `i hbar {f,g}`.
pub fn verify_low_orders(samples: &[(Polynomial, Polynomial)], pi: &ConstantBivector) -> Result<Check, StarError> {
    let order = pi.order();
    let i = CyclotomicScalar::imag_unit(order).map_err(|_| StarError::NoImaginaryUnit(order))?;
    let mut check = Check::new("moyal-low-orders", "f*g = fg + (i/2) hbar Pi(f,g) + O(hbar^2)");
    for (f, g) in samples {
        let (f0, g0) = (f.hbar_coefficient(0), g.hbar_coefficient(0));
        let p = moyal_product(&Polynomial::from_cyclotomic_poly(&f0), &Polynomial::from_cyclotomic_poly(&g0), pi)?;
        let ok0 = p.hbar_coefficient(0) == &f0 * &g0;
        let bracket = poisson_bracket(&f0, &g0, pi)?;
        let ok1 = p.hbar_coefficient(1) == bracket.scale_cyclotomic(&i.scale(&rational(1, 2)));
        let comm = star_commutator(&Polynomial::from_cyclotomic_poly(&f0), &Polynomial::from_cyclotomic_poly(&g0), pi)?;
        let ok2 = comm.hbar_coefficient(0).is_zero() && comm.hbar_coefficient(1) == bracket.scale_cyclotomic(&i);
        check.record(ok0 && ok1 && ok2, || vec![("f", f0.to_string()), ("g", g0.to_string())]);
    }
    Ok(check)
}

/// `[x_a, x_b] = i hbar Pi^{ab}` for all coordinate pairs.
pub fn verify_canonical_commutators(pi: &ConstantBivector) -> Result<Check, StarError> {
    let n = pi.dimension();
    let order = pi.order();
    let i_hbar = HbarScalar::monomial(CyclotomicScalar::imag_unit(order).map_err(|_| StarError::NoImaginaryUnit(order))?, 1);
    let mut check = Check::new("canonical-commutator", "[x, p] = i hbar");
    for a in 0..n {
        for b in 0..n {
            let comm = star_commutator(&Polynomial::var(n, order, a), &Polynomial::var(n, order, b), pi)?;
            let expect = Polynomial::constant(n, &i_hbar * &HbarScalar::constant(pi.matrix.get(a, b).clone()));
            check.record(comm == expect, || vec![("a", a.to_string()), ("b", b.to_string()), ("commutator", comm.to_string())]);
        }
    }
    Ok(check)
}

/// `b * b * a = 1 mod hbar^{k+1}` for `b = star_inv_sqrt(a)`.
pub fn verify_inv_sqrt(samples: &[Polynomial], pi: &ConstantBivector, k: u32) -> Result<Check, StarError> {
    let mut check = Check::new("star-inverse-square-root", "b * b * a = 1 mod hbar^{K+1}").with("hbar_order", k);
    for a in samples {
        let b = star_inv_sqrt(a, pi, k)?;
        let prod = moyal_product(&moyal_product(&b, &b, pi)?, a, pi)?;
        check.record(is_one_modulo(&prod, k as i64 + 1), || vec![("a", a.to_string()), ("b", b.to_string())]);
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2, 4).unwrap()
    }

    fn pi() -> ConstantBivector {
        ConstantBivector::standard(1, 4)
    }

    #[test]
    fn canonical_commutator() {
        assert_eq!(star_commutator(&p("x0"), &p("x1"), &pi()).unwrap(), p("i*h"));
        let f = p("x0^2 - 3*x1 + x0*x1");
        assert!(star_commutator(&f, &f, &pi()).unwrap().is_zero());
    }

    #[test]
    fn square_times_square() {
        let got = moyal_product(&p("x0^2"), &p("x1^2"), &pi()).unwrap();
        assert_eq!(got, p("x0^2*x1^2 + 2*i*h*x0*x1 - (1/2)*h^2"));
    }

    #[test]
    fn unit_is_neutral() {
        let f = p("x0^3*x1 - 2*h*x1 + 5");
        assert_eq!(moyal_product(&f, &p("1"), &pi()).unwrap(), f);
        assert_eq!(moyal_product(&p("1"), &f, &pi()).unwrap(), f);
    }

    #[test]
    fn commutator_matches_bracket() {
        let c = star_commutator(&p("x0^2"), &p("x1"), &pi()).unwrap();
        assert_eq!(c, p("2*i*h*x0"));
    }

    #[test]
    fn inverse_square_root_examples() {
        assert_eq!(star_inv_sqrt(&p("1"), &pi(), 4).unwrap(), p("1"));
        let a = p("1 + h*x0");
        let b = star_inv_sqrt(&a, &pi(), 1).unwrap();
        assert_eq!(b, p("1 - (1/2)*h*x0"));
        let bba = moyal_product(&moyal_product(&b, &b, &pi()).unwrap(), &a, &pi()).unwrap();
        assert!(is_one_modulo(&bba, 2));
        assert!(star_inv_sqrt(&p("2 + h"), &pi(), 2).is_err());
        assert!(star_inv_sqrt(&p("1 + x0"), &pi(), 2).is_err());
    }

    #[test]
    fn inverse_square_root_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let q = random_polynomial(&mut rng, 2, 4, 3, 3);
            let a = &Polynomial::one(2, 4) + &q.shift_hbar(1);
            let b = star_inv_sqrt(&a, &pi(), 4).unwrap();
            let bba = moyal_product(&moyal_product(&b, &b, &pi()).unwrap(), &a, &pi()).unwrap();
            assert!(is_one_modulo(&bba, 5));
        }
    }

    #[test]
    fn associativity_small_cases() {
        let samples = vec![
            (p("x0"), p("x1"), p("x0")),
            (p("3"), p("-2"), p("1/2")),
        ];
        assert!(verify_associativity(&samples, &pi()).unwrap().passed());
    }

    #[test]
    fn mismatched_dimension() {
        let f = parse_polynomial("x0", 3, 4).unwrap();
        assert_eq!(moyal_product(&f, &f, &pi()), Err(StarError::Dimension(3, 2)));
        assert!(ConstantBivector::new(Matrix::from_ints(4, &[&[0, 1], &[1, 0]])).is_err());
    }
}
