use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use super::poly::Poly;
use crate::linalg::Matrix;
use crate::scalar::{Coeff, CyclotomicScalar};

/// Marker for the two kinds of exterior objects.
pub trait ExteriorKind: Clone + PartialEq + Send + Sync + 'static {
    const SYMBOL: &'static str;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Forms;

#[derive(Clone, Debug, PartialEq)]
pub struct Vectors;

impl ExteriorKind for Forms {
    const SYMBOL: &'static str = "dx";
}

impl ExteriorKind for Vectors {
    const SYMBOL: &'static str = "D";
}

/// Homogeneous element of degree `k` with polynomial coefficients, stored
/// on the basis `e_{i1} ^ ... ^ e_{ik}` with `i1 < ... < ik`.
#[derive(Clone, PartialEq)]
pub struct Exterior<C: Coeff, K: ExteriorKind> {
    nvars: usize,
    order: u32,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Poly<C>>,
    kind: PhantomData<K>,
}

pub type DiffForm<C = CyclotomicScalar> = Exterior<C, Forms>;
pub type MultiVector<C = CyclotomicScalar> = Exterior<C, Vectors>;

/// Sign and merged index list of `e_a ^ e_b`, or `None` when they overlap.
pub fn merge_indices(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((inversions % 2 == 1, merged))
}

impl<C: Coeff, K: ExteriorKind> Exterior<C, K> {
    pub fn zero(nvars: usize, order: u32, degree: usize) -> Self {
        Exterior {
            nvars,
            order,
            degree,
            comps: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// `f e_I` for a strictly increasing index list `I`.
    pub fn basis(nvars: usize, indices: &[usize], f: Poly<C>) -> Self {
        assert!(indices.windows(2).all(|w| w[0] < w[1]), "indices must increase");
        assert!(indices.iter().all(|&i| i < nvars));
        let mut out = Self::zero(nvars, f.order(), indices.len());
        if !f.is_zero() {
            out.comps.insert(indices.to_vec(), f);
        }
        out
    }

    /// Degree-0 object with the given function.
    pub fn function(f: Poly<C>) -> Self {
        Self::basis(f.nvars(), &[], f)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly<C>)> {
        self.comps.iter()
    }

    pub fn component(&self, indices: &[usize]) -> Poly<C> {
        self.comps
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars, self.order))
    }

    fn add_component(&mut self, indices: Vec<usize>, f: &Poly<C>) {
        if f.is_zero() {
            return;
        }
        let entry = self
            .comps
            .entry(indices.clone())
            .or_insert_with(|| Poly::zero(f.nvars(), f.order()));
        *entry = &*entry + f;
        if entry.is_zero() {
            self.comps.remove(&indices);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding objects of different degree");
        let mut out = self.clone();
        for (i, f) in &other.comps {
            out.add_component(i.clone(), f);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_components(|f| -f)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_components(|f| f.scale(c))
    }

    pub fn scale_cyclotomic(&self, c: &CyclotomicScalar) -> Self {
        self.map_components(|f| f.scale_cyclotomic(c))
    }

    pub fn multiply_function(&self, g: &Poly<C>) -> Self {
        self.map_components(|f| f * g)
    }

    fn map_components(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.degree);
        for (i, p) in &self.comps {
            out.add_component(i.clone(), &f(p));
        }
        out
    }

    /// Graded-commutative product with standard Koszul signs; objects past
    /// the ambient dimension are zero.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars, self.order, self.degree + other.degree);
        for (a, f) in &self.comps {
            for (b, g) in &other.comps {
                if let Some((neg, merged)) = merge_indices(a, b) {
                    let p = f * g;
                    out.add_component(merged, &if neg { -p } else { p });
                }
            }
        }
        out
    }

    /// Contraction with the basis element dual to `e_i` from the left.
    pub fn interior_basis(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.degree.saturating_sub(1));
        for (idx, f) in &self.comps {
            if let Some(pos) = idx.iter().position(|&j| j == i) {
                let mut rest = idx.clone();
                rest.remove(pos);
                out.add_component(rest, &if pos % 2 == 1 { -f } else { f.clone() });
            }
        }
        out
    }

    /// Applies `g` to every component's polynomial in place of the old one.
    pub fn map_polynomials(&self, g: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        self.map_components(g)
    }

    /// Maximal total polynomial degree over all components.
    pub fn polynomial_degree(&self) -> Option<u32> {
        self.comps.values().filter_map(Poly::total_degree).max()
    }
}

impl<C: Coeff> Exterior<C, Forms> {
    /// `d(f dx_I) = sum_j (d_j f) dx_j ^ dx_I`.
    pub fn de_rham_d(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.degree + 1);
        for (idx, f) in &self.comps {
            for j in 0..self.nvars {
                let df = f.derivative(j);
                if df.is_zero() {
                    continue;
                }
                if let Some((neg, merged)) = merge_indices(&[j], idx) {
                    out.add_component(merged, &if neg { -df } else { df });
                }
            }
        }
        out
    }

    /// Contraction `i_X` with a vector field.
    pub fn contract(&self, x: &MultiVector<C>) -> Self {
        assert_eq!(x.degree, 1, "contraction needs a vector field");
        let mut out = Self::zero(self.nvars, self.order, self.degree.saturating_sub(1));
        for (idx, g) in &x.comps {
            out = out.add(&self.interior_basis(idx[0]).multiply_function(g));
        }
        out
    }

    /// Contraction `i_Pi` with a constant bivector `Pi^{ab} d_a ^ d_b / 2`,
    /// normalized so that `i_Pi(df ^ dg) = Pi^{ab} d_a f d_b g`.
    pub fn contract_bivector(&self, pi: &Matrix) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.degree.saturating_sub(2));
        for a in 0..self.nvars {
            for b in a + 1..self.nvars {
                let c = pi.get(a, b);
                if c.is_zero() {
                    continue;
                }
                let t = self.interior_basis(a).interior_basis(b).scale_cyclotomic(c);
                out = out.add(&t);
            }
        }
        out
    }
}

impl<C: Coeff> Exterior<C, Vectors> {
    /// The vector field `sum_i X^i d_i` from its components.
    pub fn vector_field(components: &[Poly<C>]) -> Self {
        let n = components.len();
        let order = components.first().map_or(1, Poly::order);
        let mut out = Self::zero(n, order, 1);
        for (i, f) in components.iter().enumerate() {
            out.add_component(vec![i], f);
        }
        out
    }
}

impl<C: Coeff, K: ExteriorKind> fmt::Debug for Exterior<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff, K: ExteriorKind> fmt::Display for Exterior<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, p) in &self.comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let basis: Vec<String> = idx.iter().map(|i| format!("{}{i}", K::SYMBOL)).collect();
            if basis.is_empty() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p}) {}", basis.join("^"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::CPoly;

    fn x(i: usize) -> CPoly {
        CPoly::var(2, 4, i)
    }

    #[test]
    fn exterior_derivative_of_x_dy() {
        let w = DiffForm::basis(2, &[1], x(0));
        let dw = w.de_rham_d();
        assert_eq!(dw, DiffForm::basis(2, &[0, 1], CPoly::one(2, 4)));
        assert!(dw.de_rham_d().is_zero());
    }

    #[test]
    fn contraction_with_coordinate_field() {
        let w = DiffForm::basis(2, &[0, 1], CPoly::one(2, 4));
        let dx = MultiVector::vector_field(&[CPoly::one(2, 4), CPoly::zero(2, 4)]);
        assert_eq!(w.contract(&dx), DiffForm::basis(2, &[1], CPoly::one(2, 4)));
    }

    #[test]
    fn wedge_of_euler_fields() {
        let a = MultiVector::basis(2, &[0], x(0));
        let b = MultiVector::basis(2, &[1], x(1));
        assert_eq!(a.wedge(&b), MultiVector::basis(2, &[0, 1], &x(0) * &x(1)));
        assert_eq!(b.wedge(&a), MultiVector::basis(2, &[0, 1], -(&x(0) * &x(1))));
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn bivector_contraction_gives_bracket() {
        let pi = Matrix::from_ints(4, &[&[0, 1], &[-1, 0]]);
        let w = DiffForm::basis(2, &[0, 1], CPoly::one(2, 4));
        assert_eq!(w.contract_bivector(&pi), DiffForm::function(CPoly::one(2, 4)));
    }
}
