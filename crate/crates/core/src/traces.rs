//! Twisted trace functionals on the Weyl algebra of a symplectic vector
//! space, their assembly into traces on the crossed product, and the
//! brute-force dimension of the trace space.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::crossed::{act, commutator_subspace_basis, crossed_multiply, CrossedElement, CrossedError};
use crate::linalg::Matrix;
use crate::polyalg::{Polynomial, CPoly};
use crate::report::Check;
use crate::scalar::{rational, CyclotomicScalar, HbarScalar};
use crate::star::{moyal_product, ConstantBivector, StarError};
use crate::symgroup::{class_index, conjugacy_classes, fixed_subspace_decomposition, ConjClassData, FixedSpaceData, MatrixGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("group element {0} does not preserve the bivector")]
    NotSymplectic(usize),
    #[error("fixed space of element {0} has dimension {1}; the integral over it has no polynomial model")]
    NeedsIntegral(usize, usize),
    #[error("weight on class {0} whose fixed space is nonzero: not traceable in the polynomial model")]
    NotTraceable(usize),
    #[error("eigenvalue signatures of element {0} do not add up to half the codimension")]
    Signature(usize),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
}

/// Data of the twisted trace attached to one group element.
#[derive(Clone, Debug)]
pub struct TwistedTraceSpec {
    pub element: usize,
    pub fixed: FixedSpaceData,
    /// Complex determinant `det(1 - g_perp^{-1})` over the complex
    /// structure fixed by the bivector.
    pub det: CyclotomicScalar,
    /// Kernel of the second-order operator: the trace is
    /// `(1/det) exp(hbar Q^{ab} d_a d_b) f` evaluated on the fixed space.
    pub kernel: Matrix,
}

impl TwistedTraceSpec {
    pub fn fixed_dim(&self) -> usize {
        self.fixed.fixed_dim()
    }

    pub fn is_admissible(&self) -> bool {
        self.fixed_dim() == 0
    }
}

/// Sesquilinear form `H(u, v) = -i u Pi conj(v)^T` on covectors.
fn hermitian(pi: &Matrix, i: &CyclotomicScalar, u: &[CyclotomicScalar], v: &[CyclotomicScalar]) -> CyclotomicScalar {
    let vbar: Vec<CyclotomicScalar> = v.iter().map(CyclotomicScalar::conj).collect();
    let w = pi.mul_vec(&vbar);
    let mut acc = CyclotomicScalar::zero(pi.order());
    for (a, b) in u.iter().zip(&w) {
        acc = &acc + &(a * b);
    }
    -(&acc * i)
}

fn real_part(x: &CyclotomicScalar) -> CyclotomicScalar {
    (x + &x.conj()).scale(&rational(1, 2))
}

/// Number of positive directions of a Hermitian form on a span, by
/// congruence diagonalization.
fn positive_index(vectors: Vec<Vec<CyclotomicScalar>>, form: impl Fn(&[CyclotomicScalar], &[CyclotomicScalar]) -> CyclotomicScalar) -> usize {
    let order = vectors.first().map_or(1, |v| v[0].order());
    let mut rest = vectors;
    let mut positive = 0;
    loop {
        let Some(pick) = (0..rest.len()).find(|&j| !form(&rest[j], &rest[j]).is_zero()).or_else(|| {
            let mut found = None;
            'outer: for j in 0..rest.len() {
                for m in j + 1..rest.len() {
                    let h = form(&rest[j], &rest[m]);
                    if h.is_zero() {
                        continue;
                    }
                    let t = if real_part(&h).is_zero() {
                        CyclotomicScalar::imag_unit(order).expect("order divisible by 4")
                    } else {
                        CyclotomicScalar::one(order)
                    };
                    let combined: Vec<CyclotomicScalar> = rest[j].iter().zip(&rest[m]).map(|(a, b)| a + &(&t * b)).collect();
                    rest[j] = combined;
                    found = Some(j);
                    break 'outer;
                }
            }
            found
        }) else {
            return positive;
        };
        let v = rest.swap_remove(pick);
        let hvv = form(&v, &v);
        if hvv.to_complex().0 > 0.0 {
            positive += 1;
        }
        let inv = hvv.inv().expect("nonzero");
        rest = rest
            .into_iter()
            .map(|w| {
                let c = &form(&w, &v) * &inv;
                w.iter().zip(&v).map(|(a, b)| a - &(&c * b)).collect()
            })
            .collect();
    }
}

pub fn twisted_trace_spec(group: &MatrixGroup, pi: &ConstantBivector, element: usize) -> Result<TwistedTraceSpec, TraceError> {
    let order = group.field_order();
    let n = group.dimension();
    let g = group.element(element);
    if !pi.is_preserved_by(g) {
        return Err(TraceError::NotSymplectic(element));
    }
    let i = CyclotomicScalar::imag_unit(order).map_err(|_| StarError::NoImaginaryUnit(order))?;
    let fixed = fixed_subspace_decomposition(g);
    let g_inv = group.element(group.inverse(element));
    let id = Matrix::identity(order, n);

    let mut det = CyclotomicScalar::one(order);
    let mut total = 0;
    let g_inv_t = g_inv.transpose();
    for k in 1..order as i64 {
        let lambda = CyclotomicScalar::root_of_unity(order, k);
        let left = g_inv_t.sub(&id.scale(&lambda)).kernel();
        if left.is_empty() {
            continue;
        }
        let p = positive_index(left, |u, v| hermitian(pi.matrix(), &i, u, v));
        total += p;
        let factor = &CyclotomicScalar::one(order) - &lambda;
        det = &det * &factor.pow(p as i64).expect("nonzero");
    }
    if 2 * total != fixed.codimension() {
        return Err(TraceError::Signature(element));
    }

    let one_minus = id.sub(g_inv);
    let group_inverse = one_minus.add(&fixed.projector).inverse().expect("complementary").sub(&fixed.projector);
    let kernel = group_inverse
        .mul(&id.add(g_inv))
        .mul(pi.matrix())
        .scale(&(-i.scale(&rational(1, 4))));
    Ok(TwistedTraceSpec {
        element,
        fixed,
        det,
        kernel,
    })
}

/// `(1/det) [exp(hbar Q^{ab} d_a d_b) f](P x)` as a polynomial on the ambient
/// space, constant along the perpendicular directions.
pub fn partial_weyl_trace(f: &Polynomial, spec: &TwistedTraceSpec) -> Polynomial {
    let n = f.nvars();
    let order = f.order();
    let mut term = f.clone();
    let mut acc = f.clone();
    let mut m = 0i64;
    while !term.is_zero() {
        m += 1;
        let mut next = Polynomial::zero(n, order);
        for a in 0..n {
            for b in 0..n {
                let q = spec.kernel.get(a, b);
                if q.is_zero() {
                    continue;
                }
                let d = term.derivative(a).derivative(b);
                if !d.is_zero() {
                    next = &next + &d.scale_cyclotomic(q);
                }
            }
        }
        term = next.scale(&HbarScalar::monomial(CyclotomicScalar::from_frac(order, 1, m), 1));
        acc = &acc + &term;
    }
    let restricted = acc.compose_linear(&spec.fixed.projector).expect("square projector");
    restricted.scale_cyclotomic(&spec.det.inv().expect("nonzero determinant"))
}

/// The partial trace written in the coordinates of the fixed-space basis.
pub fn partial_trace_on_fixed_space(f: &Polynomial, spec: &TwistedTraceSpec) -> Polynomial {
    let basis = Matrix::from_columns(f.order(), f.nvars(), &spec.fixed.fixed_basis);
    partial_weyl_trace(f, spec).compose_linear(&basis).expect("basis columns")
}

pub fn full_twisted_trace(f: &Polynomial, spec: &TwistedTraceSpec) -> Result<HbarScalar, TraceError> {
    if !spec.is_admissible() {
        return Err(TraceError::NeedsIntegral(spec.element, spec.fixed_dim()));
    }
    Ok(partial_weyl_trace(f, spec).constant_term())
}

/// Specs for every group element, grouped by conjugacy class.
#[derive(Clone, Debug)]
pub struct TraceTable {
    pub classes: Vec<ConjClassData>,
    pub class_of: Vec<usize>,
    pub specs: Vec<TwistedTraceSpec>,
}

impl TraceTable {
    pub fn new(group: &MatrixGroup, pi: &ConstantBivector) -> Result<Self, TraceError> {
        let classes = conjugacy_classes(group);
        let class_of = class_index(group, &classes);
        let specs = (0..group.len())
            .map(|g| twisted_trace_spec(group, pi, g))
            .collect::<Result<_, _>>()?;
        Ok(TraceTable { classes, class_of, specs })
    }

    pub fn admissible_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&c| self.specs[self.classes[c].representative].is_admissible())
            .collect()
    }
}

/// Weights `kappa_c` per conjugacy class; missing classes weigh zero.
pub type TraceWeights = BTreeMap<usize, HbarScalar>;

/// `sum_g kappa_{[g]} tau_g(f_g)`.
pub fn assemble_trace(table: &TraceTable, a: &CrossedElement, weights: &TraceWeights) -> Result<HbarScalar, TraceError> {
    let mut acc = HbarScalar::zero(a.order());
    for (g, f) in a.components() {
        let c = table.class_of[g];
        let Some(w) = weights.get(&c).filter(|w| !w.is_zero()) else {
            continue;
        };
        if !table.specs[g].is_admissible() {
            return Err(TraceError::NotTraceable(c));
        }
        acc = &acc + &(w * &full_twisted_trace(f, &table.specs[g])?);
    }
    Ok(acc)
}

/// `tau_g(f * f') = tau_g(f' * g f)` on admissible elements.
pub fn verify_twisted_trace_axioms(
    group: &MatrixGroup,
    pi: &ConstantBivector,
    table: &TraceTable,
    pairs: &[(Polynomial, Polynomial)],
) -> Result<Check, TraceError> {
    let mut check = Check::new("twisted-trace-cyclicity", "tau_g(f * f') = tau_g(f' * g f)");
    for spec in table.specs.iter().filter(|s| s.is_admissible()) {
        let g = spec.element;
        for (f, h) in pairs {
            let lhs = full_twisted_trace(&moyal_product(f, h, pi)?, spec)?;
            let rhs = full_twisted_trace(&moyal_product(h, &act(group, g, f), pi)?, spec)?;
            check.record(lhs == rhs, || vec![("element", g.to_string()), ("f", f.to_string()), ("f'", h.to_string())]);
        }
    }
    Ok(check)
}

/// `T_{h g h^{-1}}(h f) o h = T_g(f)` for the partial traces, hence
/// `tau_g(f) = tau_{h g h^{-1}}(h f)` whenever the fixed space is zero.
pub fn verify_conjugation_axiom(group: &MatrixGroup, table: &TraceTable, samples: &[Polynomial]) -> Check {
    let mut check = Check::new("twisted-trace-conjugation", "tau_g(f) = tau_{hgh^-1}(h f)");
    for g in 0..group.len() {
        for h in 0..group.len() {
            let conj = group.conjugate(h, g);
            for f in samples {
                let lhs = partial_weyl_trace(&act(group, h, f), &table.specs[conj])
                    .linear_substitute(group.element(h))
                    .expect("invertible");
                let rhs = partial_weyl_trace(f, &table.specs[g]);
                check.record(lhs == rhs, || vec![("g", g.to_string()), ("h", h.to_string()), ("f", f.to_string())]);
            }
        }
    }
    check
}

/// `tr(a * b) = tr(b * a)` for the trace with the given weights.
pub fn verify_assembled_trace(
    group: &MatrixGroup,
    pi: &ConstantBivector,
    table: &TraceTable,
    weights: &TraceWeights,
    pairs: &[(CrossedElement, CrossedElement)],
) -> Result<Check, TraceError> {
    let mut check = Check::new("assembled-trace", "tr(a * b) = tr(b * a)");
    for (a, b) in pairs {
        let lhs = assemble_trace(table, &crossed_multiply(group, a, b, Some(pi))?, weights)?;
        let rhs = assemble_trace(table, &crossed_multiply(group, b, a, Some(pi))?, weights)?;
        check.record(lhs == rhs, || vec![("a", a.to_string()), ("b", b.to_string())]);
    }
    Ok(check)
}

/// The unit-weight traces of distinct admissible classes separate the
/// elements `delta_g`, so they are linearly independent.
pub fn verify_independence(table: &TraceTable, nvars: usize, order: u32) -> Result<Check, TraceError> {
    let mut check = Check::new("trace-independence", "traces of distinct admissible classes are independent");
    let admissible = table.admissible_classes();
    for &c in &admissible {
        let weights = TraceWeights::from([(c, HbarScalar::one(order))]);
        for &d in &admissible {
            let delta = CrossedElement::delta(nvars, order, table.classes[d].representative);
            let value = assemble_trace(table, &delta, &weights)?;
            check.record((c == d) != value.is_zero(), || vec![("class", c.to_string()), ("probe", d.to_string())]);
        }
    }
    Ok(check.with("admissible_classes", admissible.len()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSpaceDimension {
    pub degree_cap: u32,
    pub hbar_cap: u32,
    pub window: usize,
    pub enlarged_window: usize,
    /// The stabilized codimension, `None` when the two windows disagree.
    pub dimension: Option<usize>,
    /// Classes whose fixed space is zero.
    pub polynomial_prediction: usize,
    /// All conjugacy classes, the count for compactly supported functions.
    pub compact_support_prediction: usize,
}

pub fn trace_space_dimension(group: &MatrixGroup, pi: &ConstantBivector, degree_cap: u32, hbar_cap: u32) -> Result<TraceSpaceDimension, TraceError> {
    let small = commutator_subspace_basis(group, pi, degree_cap, hbar_cap)?.quotient_dim();
    let large = commutator_subspace_basis(group, pi, degree_cap + 2, hbar_cap + 2)?.quotient_dim();
    let classes = conjugacy_classes(group);
    let polynomial_prediction = classes
        .iter()
        .filter(|c| fixed_subspace_decomposition(group.element(c.representative)).fixed_dim() == 0)
        .count();
    Ok(TraceSpaceDimension {
        degree_cap,
        hbar_cap,
        window: small,
        enlarged_window: large,
        dimension: (small == large).then_some(small),
        polynomial_prediction,
        compact_support_prediction: classes.len(),
    })
}

/// `tau_g` on all monomials of degree `<= cap`.
pub fn monomial_traces(spec: &TwistedTraceSpec, nvars: usize, order: u32, cap: u32) -> Vec<(CPoly, Polynomial)> {
    crate::polyalg::exponents_up_to(nvars, cap)
        .into_iter()
        .map(|e| {
            let m = CPoly::monomial(nvars, &e, CyclotomicScalar::one(order));
            let t = partial_weyl_trace(&m.to_hbar(), spec);
            (m, t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_polynomial;
    use crate::symgroup::generate_group;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2, 4).unwrap()
    }

    fn z2() -> MatrixGroup {
        generate_group(4, 2, &[Matrix::from_ints(4, &[&[-1, 0], &[0, -1]])], 8).unwrap()
    }

    fn z4() -> MatrixGroup {
        generate_group(4, 2, &[Matrix::from_ints(4, &[&[0, 1], &[-1, 0]])], 8).unwrap()
    }

    fn pi() -> ConstantBivector {
        ConstantBivector::standard(1, 4)
    }

    #[test]
    fn minus_one_traces() {
        let spec = twisted_trace_spec(&z2(), &pi(), 1).unwrap();
        assert!(spec.kernel.is_zero());
        assert_eq!(full_twisted_trace(&p("1"), &spec).unwrap(), HbarScalar::constant(CyclotomicScalar::from_frac(4, 1, 2)));
        assert!(full_twisted_trace(&p("x0^2 + x1^2"), &spec).unwrap().is_zero());
        assert!(full_twisted_trace(&p("x0"), &spec).unwrap().is_zero());
        let id = twisted_trace_spec(&z2(), &pi(), 0).unwrap();
        assert_eq!(full_twisted_trace(&p("1"), &id), Err(TraceError::NeedsIntegral(0, 2)));
    }

    #[test]
    fn quarter_turn_traces() {
        let g = z4();
        let r = g.index_of(&Matrix::from_ints(4, &[&[0, 1], &[-1, 0]])).unwrap();
        let spec = twisted_trace_spec(&g, &pi(), r).unwrap();
        assert_eq!(full_twisted_trace(&p("1"), &spec).unwrap(), HbarScalar::constant(parse_scalar_("(1 - i)/2")));
        assert_eq!(full_twisted_trace(&p("x0^2 + x1^2"), &spec).unwrap(), p("-(1 + i)/2*h").constant_term());
    }

    fn parse_scalar_(s: &str) -> CyclotomicScalar {
        crate::polyalg::parse_scalar(s, 4).unwrap()
    }

    #[test]
    fn axioms_hold() {
        for g in [z2(), z4()] {
            let table = TraceTable::new(&g, &pi()).unwrap();
            let pairs = vec![(p("x0^2*x1 + 3"), p("x1^3 - x0")), (p("x0*x1"), p("x0^2 - 2*x1^2")), (p("1"), p("1"))];
            assert!(verify_twisted_trace_axioms(&g, &pi(), &table, &pairs).unwrap().passed());
            let samples: Vec<_> = pairs.iter().map(|(a, _)| a.clone()).collect();
            assert!(verify_conjugation_axiom(&g, &table, &samples).passed());
            assert!(verify_independence(&table, 2, 4).unwrap().passed());
        }
    }

    #[test]
    fn assembled_trace_examples() {
        let g = z2();
        let table = TraceTable::new(&g, &pi()).unwrap();
        let weights = TraceWeights::from([(1, HbarScalar::one(4))]);
        let delta = CrossedElement::delta(2, 4, 1);
        assert_eq!(assemble_trace(&table, &delta, &weights).unwrap(), HbarScalar::constant(CyclotomicScalar::from_frac(4, 1, 2)));
        let identity = CrossedElement::single(0, p("x0^2"));
        assert!(assemble_trace(&table, &identity, &weights).unwrap().is_zero());
        let bad = TraceWeights::from([(0, HbarScalar::one(4))]);
        assert_eq!(assemble_trace(&table, &identity, &bad), Err(TraceError::NotTraceable(0)));
    }

    #[test]
    fn trace_space_dimensions() {
        let d = trace_space_dimension(&z2(), &pi(), 2, 2).unwrap();
        assert_eq!((d.dimension, d.polynomial_prediction, d.compact_support_prediction), (Some(1), 1, 2));
        let d = trace_space_dimension(&z4(), &pi(), 2, 2).unwrap();
        assert_eq!((d.dimension, d.polynomial_prediction, d.compact_support_prediction), (Some(3), 3, 4));
        let trivial = generate_group(4, 2, &[], 1).unwrap();
        assert_eq!(trace_space_dimension(&trivial, &pi(), 2, 2).unwrap().dimension, Some(0));
    }
}
