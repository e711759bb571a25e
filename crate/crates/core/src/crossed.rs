//! Crossed products `A x| G` of polynomial algebras by finite matrix groups,
//! with the pointwise or the Moyal product on the coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{sparse_from_terms, Eliminator, Matrix, SparseVec};
use crate::polyalg::{exponents_up_to, random_poly, CPoly, Exponent, Poly, Polynomial};
use crate::report::Check;
use crate::scalar::{rational, Coeff, CyclotomicScalar, HbarScalar};
use crate::star::{moyal_constant, moyal_product_with, poisson_bracket, ConstantBivector, StarError};
use crate::symgroup::{class_index, conjugacy_classes, MatrixGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossedError {
    #[error("element has {0} variables, group acts on {1}")]
    Dimension(usize, usize),
    #[error("group element {0} out of range")]
    NoSuchElement(usize),
    #[error(transparent)]
    Star(#[from] StarError),
}

/// `sum_g f_g delta_g`, with no zero components stored.
#[derive(Clone, PartialEq)]
pub struct CrossedElement<C: Coeff = HbarScalar> {
    nvars: usize,
    order: u32,
    components: BTreeMap<usize, Poly<C>>,
}

impl<C: Coeff> CrossedElement<C> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        CrossedElement {
            nvars,
            order,
            components: BTreeMap::new(),
        }
    }

    /// `f delta_g`.
    pub fn single(g: usize, f: Poly<C>) -> Self {
        let mut out = Self::zero(f.nvars(), f.order());
        out.add_component(g, &f);
        out
    }

    /// `delta_g`.
    pub fn delta(nvars: usize, order: u32, g: usize) -> Self {
        Self::single(g, Poly::one(nvars, order))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Poly<C>)> {
        self.components.iter().map(|(&g, f)| (g, f))
    }

    pub fn component(&self, g: usize) -> Poly<C> {
        self.components
            .get(&g)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars, self.order))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }

    pub fn add_component(&mut self, g: usize, f: &Poly<C>) {
        if f.is_zero() {
            return;
        }
        let entry = self
            .components
            .entry(g)
            .or_insert_with(|| Poly::zero(f.nvars(), f.order()));
        *entry = &*entry + f;
        if entry.is_zero() {
            self.components.remove(&g);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, f) in other.components() {
            out.add_component(g, f);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, f) in other.components() {
            out.add_component(g, &-f);
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (g, f) in self.components() {
            out.add_component(g, &f.scale(c));
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for CrossedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff> fmt::Display for CrossedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components().map(|(g, p)| format!("({p}) d{g}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The coefficient product: pointwise, or Moyal with deformation constant `c`.
#[derive(Clone, Debug)]
pub enum Product<'a, C: Coeff> {
    Pointwise,
    Moyal(&'a ConstantBivector, C),
}

/// Group action `g f = f o g^{-1}` on polynomials.
pub fn act<C: Coeff>(group: &MatrixGroup, g: usize, f: &Poly<C>) -> Poly<C> {
    if g == group.identity() {
        return f.clone();
    }
    f.linear_substitute(group.element(group.inverse(g)))
        .expect("group elements are invertible")
}

fn check<C: Coeff>(group: &MatrixGroup, a: &CrossedElement<C>) -> Result<(), CrossedError> {
    if a.nvars != group.dimension() {
        return Err(CrossedError::Dimension(a.nvars, group.dimension()));
    }
    if let Some(g) = a.support().find(|&g| g >= group.len()) {
        return Err(CrossedError::NoSuchElement(g));
    }
    Ok(())
}

/// `(f1 delta_g1)(f2 delta_g2) = (f1 * g1 f2) delta_{g1 g2}`.
pub fn crossed_multiply_with<C: Coeff>(
    group: &MatrixGroup,
    a: &CrossedElement<C>,
    b: &CrossedElement<C>,
    product: &Product<'_, C>,
) -> Result<CrossedElement<C>, CrossedError> {
    check(group, a)?;
    check(group, b)?;
    let mut out = CrossedElement::zero(a.nvars, a.order);
    for (g1, f1) in a.components() {
        for (g2, f2) in b.components() {
            let moved = act(group, g1, f2);
            let p = match product {
                Product::Pointwise => f1 * &moved,
                Product::Moyal(pi, c) => moyal_product_with(f1, &moved, pi, c)?,
            };
            out.add_component(group.multiply(g1, g2), &p);
        }
    }
    Ok(out)
}

/// Crossed product with the Moyal product when `pi` is given, pointwise otherwise.
pub fn crossed_multiply(
    group: &MatrixGroup,
    a: &CrossedElement,
    b: &CrossedElement,
    pi: Option<&ConstantBivector>,
) -> Result<CrossedElement, CrossedError> {
    let product = match pi {
        Some(pi) => Product::Moyal(pi, moyal_constant(pi.order())?),
        None => Product::Pointwise,
    };
    crossed_multiply_with(group, a, b, &product)
}

pub fn crossed_commutator(
    group: &MatrixGroup,
    a: &CrossedElement,
    b: &CrossedElement,
    pi: Option<&ConstantBivector>,
) -> Result<CrossedElement, CrossedError> {
    Ok(crossed_multiply(group, a, b, pi)?.sub(&crossed_multiply(group, b, a, pi)?))
}

pub fn random_crossed<R: Rng + ?Sized>(
    rng: &mut R,
    group: &MatrixGroup,
    max_degree: u32,
    max_terms: usize,
    max_components: usize,
) -> CrossedElement {
    let n = group.dimension();
    let order = group.field_order();
    let mut out = CrossedElement::zero(n, order);
    for _ in 0..rng.gen_range(1..=max_components.max(1)) {
        let g = rng.gen_range(0..group.len());
        let f: Polynomial = random_poly(rng, n, order, max_degree, max_terms);
        out.add_component(g, &f);
    }
    out
}

pub fn verify_crossed_associativity(
    group: &MatrixGroup,
    pi: Option<&ConstantBivector>,
    samples: &[(CrossedElement, CrossedElement, CrossedElement)],
) -> Result<Check, CrossedError> {
    let mut check = Check::new("crossed-associativity", "(ab)c = a(bc) in the crossed product");
    for (a, b, c) in samples {
        let lhs = crossed_multiply(group, &crossed_multiply(group, a, b, pi)?, c, pi)?;
        let rhs = crossed_multiply(group, a, &crossed_multiply(group, b, c, pi)?, pi)?;
        check.record(lhs == rhs, || vec![("a", a.to_string()), ("b", b.to_string()), ("c", c.to_string())]);
    }
    Ok(check)
}

/// Order 0 of the deformed product is the commutative crossed product and
/// order 1 is `(i/2) Pi(df1, d(g1 f2)) delta_{g1 g2}`; conjugating `f delta_e`
/// by `delta_g` gives `(g f) delta_e`.
pub fn verify_crossed_structure(
    group: &MatrixGroup,
    pi: &ConstantBivector,
    samples: &[(CrossedElement, CrossedElement)],
) -> Result<Check, CrossedError> {
    let order = group.field_order();
    let i = CyclotomicScalar::imag_unit(order).map_err(|_| StarError::NoImaginaryUnit(order))?;
    let half_i = i.scale(&rational(1, 2));
    let n = group.dimension();
    let mut check = Check::new("crossed-structure", "hbar expansion and equivariance of the deformed crossed product");
    for (a, b) in samples {
        let (a0, b0) = (classical_part(a), classical_part(b));
        let deformed = crossed_multiply(group, &a0, &b0, Some(pi))?;
        let plain = crossed_multiply(group, &a0, &b0, None)?;
        let mut first = CrossedElement::<CyclotomicScalar>::zero(n, order);
        for (g1, f1) in a0.components() {
            for (g2, f2) in b0.components() {
                let br = poisson_bracket(&f1.hbar_coefficient(0), &act(group, g1, &f2.hbar_coefficient(0)), pi)?;
                first.add_component(group.multiply(g1, g2), &br.scale_cyclotomic(&half_i));
            }
        }
        let ok0 = hbar_part(&deformed, 0) == hbar_part(&plain, 0);
        let ok1 = hbar_part(&deformed, 1) == first;
        let mut ok2 = true;
        for g in 0..group.len() {
            let f = a0.component(group.identity());
            let lhs = crossed_multiply(
                group,
                &crossed_multiply(group, &CrossedElement::delta(n, order, g), &CrossedElement::single(group.identity(), f.clone()), Some(pi))?,
                &CrossedElement::delta(n, order, group.inverse(g)),
                Some(pi),
            )?;
            ok2 &= lhs == CrossedElement::single(group.identity(), act(group, g, &f));
        }
        check.record(ok0 && ok1 && ok2, || vec![("a", a.to_string()), ("b", b.to_string())]);
    }
    Ok(check)
}

fn classical_part(a: &CrossedElement) -> CrossedElement {
    let mut out = CrossedElement::zero(a.nvars, a.order);
    for (g, f) in a.components() {
        out.add_component(g, &Polynomial::from_cyclotomic_poly(&f.hbar_coefficient(0)));
    }
    out
}

fn hbar_part(a: &CrossedElement, k: i64) -> CrossedElement<CyclotomicScalar> {
    let mut out = CrossedElement::zero(a.nvars, a.order);
    for (g, f) in a.components() {
        out.add_component(g, &f.hbar_coefficient(k));
    }
    out
}

/// Result of one commutator-span computation in the window `(D, K)`.
#[derive(Clone, Debug)]
pub struct CommutatorSpan {
    pub degree_cap: u32,
    pub hbar_cap: u32,
    /// Dimension of the truncation: group size times monomials of degree `<= D`.
    pub truncated_dim: usize,
    /// Commutators lying in the truncation, in echelon form.
    pub basis: Vec<CrossedElement<CyclotomicScalar>>,
}

impl CommutatorSpan {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.truncated_dim - self.rank()
    }
}

/// Basis of the commutators of the deformed crossed product that lie in
/// polynomial degree `<= D`.
///
/// The computation runs at `hbar = 1`: rescaling `x -> hbar^{1/2} x` makes
/// the product homogeneous, so the quotient dimensions over `C((hbar))` agree.
/// Commutators of the algebra generators `x_i delta_e` and `delta_g` with all
/// monomials `x^a delta_h` of degree `<= D + 2K` are spanned, and the span is
/// intersected with the degree `<= D` part by eliminating high degrees first.
pub fn commutator_subspace_basis(group: &MatrixGroup, pi: &ConstantBivector, degree_cap: u32, hbar_cap: u32) -> Result<CommutatorSpan, CrossedError> {
    let n = group.dimension();
    if pi.dimension() != n {
        return Err(StarError::Dimension(n, pi.dimension()).into());
    }
    let order = group.field_order();
    let i = CyclotomicScalar::imag_unit(order).map_err(|_| StarError::NoImaginaryUnit(order))?;
    let c = i.scale(&rational(1, 2));
    let product = Product::Moyal(pi, c);
    let window = degree_cap + 2 * hbar_cap;
    let classes = conjugacy_classes(group);
    let class_of = class_index(group, &classes);
    let monomials = exponents_up_to(n, window);
    let truncated_dim = group.len() * monomials.iter().filter(|e| degree(e) <= degree_cap).count();

    let mut generators: Vec<CrossedElement<CyclotomicScalar>> = (0..n)
        .map(|k| CrossedElement::single(group.identity(), CPoly::var(n, order, k)))
        .collect();
    generators.extend((0..group.len()).filter(|&g| g != group.identity()).map(|g| CrossedElement::delta(n, order, g)));

    let pairs: Vec<(usize, &Exponent)> = (0..group.len()).flat_map(|h| monomials.iter().map(move |e| (h, e))).collect();
    let commutators: Vec<CrossedElement<CyclotomicScalar>> = pairs
        .par_iter()
        .flat_map_iter(|&(h, e)| {
            let v = CrossedElement::single(h, CPoly::monomial(n, e, CyclotomicScalar::one(order)));
            generators
                .iter()
                .map(|s| {
                    let ab = crossed_multiply_with(group, s, &v, &product).expect("validated");
                    let ba = crossed_multiply_with(group, &v, s, &product).expect("validated");
                    ab.sub(&ba)
                })
                .filter(|c| !c.is_zero())
                .collect::<Vec<_>>()
        })
        .collect();
    let mut routed: BTreeMap<(usize, u32), Vec<CrossedElement<CyclotomicScalar>>> = BTreeMap::new();
    for c in commutators {
        let (g, f) = c.components().next().expect("nonzero");
        let e = f.terms().next().expect("nonzero").0;
        routed.entry((class_of[g], degree(e) % 2)).or_default().push(c);
    }
    let results: Vec<Vec<CrossedElement<CyclotomicScalar>>> = routed
        .par_iter()
        .map(|(&(class, parity), comms)| {
            let mut columns: Vec<(usize, Exponent)> = Vec::new();
            for &h in &classes[class].members {
                for e in monomials.iter().filter(|e| degree(e) % 2 == parity) {
                    columns.push((h, e.clone()));
                }
            }
            columns.sort_by(|a, b| degree(&b.1).cmp(&degree(&a.1)).then_with(|| a.cmp(b)));
            let index: HashMap<(usize, Exponent), usize> = columns.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
            let mut elim = Eliminator::new(order);
            for comm in comms {
                let mut terms = Vec::new();
                let mut inside = true;
                for (g, f) in comm.components() {
                    for (exp, x) in f.terms() {
                        match index.get(&(g, exp.clone())) {
                            Some(&k) => terms.push((k, x.clone())),
                            None => inside = false,
                        }
                    }
                }
                if inside {
                    elim.insert(sparse_from_terms(terms));
                }
            }
            elim.basis()
                .filter(|row| degree(&columns[row[0].0].1) <= degree_cap)
                .map(|row| to_element(n, order, &columns, row))
                .collect()
        })
        .collect();
    Ok(CommutatorSpan {
        degree_cap,
        hbar_cap,
        truncated_dim,
        basis: results.into_iter().flatten().collect(),
    })
}

fn degree(e: &Exponent) -> u32 {
    e.iter().sum()
}

fn to_element(n: usize, order: u32, columns: &[(usize, Exponent)], row: &SparseVec) -> CrossedElement<CyclotomicScalar> {
    let mut out = CrossedElement::zero(n, order);
    for (k, x) in row {
        let (h, e) = &columns[*k];
        out.add_component(*h, &CPoly::monomial(n, e, x.clone()));
    }
    out
}

/// Checks that every group element preserves the bivector.
pub fn preserves_bivector(group: &MatrixGroup, pi: &ConstantBivector) -> bool {
    group.elements().iter().all(|g: &Matrix| pi.is_preserved_by(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_polynomial;
    use crate::symgroup::generate_group;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z2() -> MatrixGroup {
        generate_group(4, 2, &[Matrix::from_ints(4, &[&[-1, 0], &[0, -1]])], 8).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2, 4).unwrap()
    }

    #[test]
    fn delta_products() {
        let g = z2();
        let d1 = CrossedElement::delta(2, 4, 1);
        let prod = crossed_multiply(&g, &d1, &d1, None).unwrap();
        assert_eq!(prod, CrossedElement::delta(2, 4, 0));
    }

    #[test]
    fn twisted_monomial_product() {
        let g = z2();
        let pi = ConstantBivector::standard(1, 4);
        let a = CrossedElement::single(1, p("x0"));
        let b = CrossedElement::single(0, p("x0"));
        let prod = crossed_multiply(&g, &a, &b, Some(&pi)).unwrap();
        assert_eq!(prod, CrossedElement::single(1, p("-x0^2")));
    }

    #[test]
    fn untwisted_component_is_moyal() {
        let g = z2();
        let pi = ConstantBivector::standard(1, 4);
        let (f, h) = (p("x0^2 + x1"), p("x1^2"));
        let prod = crossed_multiply(&g, &CrossedElement::single(0, f.clone()), &CrossedElement::single(0, h.clone()), Some(&pi)).unwrap();
        assert_eq!(prod, CrossedElement::single(0, crate::star::moyal_product(&f, &h, &pi).unwrap()));
    }

    #[test]
    fn random_associativity_and_structure() {
        let g = z2();
        let pi = ConstantBivector::standard(1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let triples: Vec<_> = (0..10)
            .map(|_| (random_crossed(&mut rng, &g, 3, 3, 2), random_crossed(&mut rng, &g, 3, 3, 2), random_crossed(&mut rng, &g, 3, 3, 2)))
            .collect();
        assert!(verify_crossed_associativity(&g, Some(&pi), &triples).unwrap().passed());
        assert!(verify_crossed_associativity(&g, None, &triples).unwrap().passed());
        let pairs: Vec<_> = triples.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
        assert!(verify_crossed_structure(&g, &pi, &pairs).unwrap().passed());
    }

    #[test]
    fn hbar_is_a_commutator() {
        let trivial = generate_group(4, 2, &[], 1).unwrap();
        let pi = ConstantBivector::standard(1, 4);
        let c = crossed_commutator(&trivial, &CrossedElement::single(0, p("x0")), &CrossedElement::single(0, p("x1")), Some(&pi)).unwrap();
        assert_eq!(c, CrossedElement::single(0, p("i*h")));
        let span = commutator_subspace_basis(&trivial, &pi, 2, 2).unwrap();
        assert_eq!(span.quotient_dim(), 0);
    }

    #[test]
    fn self_commutator_vanishes() {
        let g = z2();
        let pi = ConstantBivector::standard(1, 4);
        let a = CrossedElement::single(1, p("x0 + x1^2"));
        assert!(crossed_commutator(&g, &a, &a, Some(&pi)).unwrap().is_zero());
    }

    #[test]
    fn z2_quotient_is_stable() {
        let g = z2();
        let pi = ConstantBivector::standard(1, 4);
        let small = commutator_subspace_basis(&g, &pi, 2, 2).unwrap();
        let large = commutator_subspace_basis(&g, &pi, 4, 4).unwrap();
        assert_eq!(small.quotient_dim(), 1);
        assert_eq!(large.quotient_dim(), 1);
    }
}
