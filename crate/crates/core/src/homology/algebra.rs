use std::fmt;

use crate::linalg::{dense_to_sparse, sparse_from_terms, Matrix, SparseVec};
use crate::polyalg::{exponents_up_to, Exponent};
use crate::scalar::CyclotomicScalar;

use super::HomologyError;

/// A finite-dimensional unital algebra given by structure constants on a
/// basis, optionally with an automorphism of finite order.
#[derive(Clone)]
pub struct FiniteDimAlgebra {
    order: u32,
    labels: Vec<String>,
    table: Vec<Vec<SparseVec>>,
    unit: SparseVec,
    alpha: Option<(Matrix, usize)>,
}

impl fmt::Debug for FiniteDimAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteDimAlgebra({})", self.labels.join(", "))
    }
}

impl FiniteDimAlgebra {
    /// `constants[i][j]` is the coordinate vector of `e_i e_j`.
    pub fn from_structure(
        order: u32,
        labels: Vec<String>,
        constants: Vec<Vec<Vec<CyclotomicScalar>>>,
        unit: Vec<CyclotomicScalar>,
    ) -> Result<Self, HomologyError> {
        let d = labels.len();
        if constants.len() != d || constants.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) || unit.len() != d {
            return Err(HomologyError::Shape(format!("structure constants must be {d} x {d} x {d}")));
        }
        let table = constants
            .iter()
            .map(|row| row.iter().map(|v| dense_to_sparse(v)).collect())
            .collect();
        let a = FiniteDimAlgebra {
            order,
            labels,
            table,
            unit: dense_to_sparse(&unit),
            alpha: None,
        };
        a.validate()?;
        Ok(a)
    }

    fn from_table(order: u32, labels: Vec<String>, table: Vec<Vec<SparseVec>>, unit: SparseVec) -> Self {
        FiniteDimAlgebra {
            order,
            labels,
            table,
            unit,
            alpha: None,
        }
    }

    /// The field `Q(zeta_N)` itself.
    pub fn ground_field(order: u32) -> Self {
        let one = vec![(0, CyclotomicScalar::one(order))];
        Self::from_table(order, vec!["1".into()], vec![vec![one.clone()]], one)
    }

    /// `M_n` with basis `E_ij` in row-major order.
    pub fn matrix(n: usize, order: u32) -> Self {
        Self::matrices_over(&Self::ground_field(order), n)
    }

    /// `M_n(A)` with basis `E_ij (x) e_m`, index `(i n + j) dim A + m`.
    pub fn matrices_over(a: &FiniteDimAlgebra, n: usize) -> Self {
        let d = a.dim();
        let idx = |i: usize, j: usize, m: usize| (i * n + j) * d + m;
        let mut labels = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for m in 0..d {
                    labels.push(if d == 1 { format!("E{i}{j}") } else { format!("E{i}{j}*{}", a.labels[m]) });
                }
            }
        }
        let size = n * n * d;
        let mut table = vec![vec![Vec::new(); size]; size];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        for m in 0..d {
                            for p in 0..d {
                                table[idx(i, j, m)][idx(k, l, p)] = if j == k {
                                    a.table[m][p].iter().map(|(q, c)| (idx(i, l, *q), c.clone())).collect()
                                } else {
                                    Vec::new()
                                };
                            }
                        }
                    }
                }
            }
        }
        let mut unit = Vec::new();
        for i in 0..n {
            for (q, c) in &a.unit {
                unit.push((idx(i, i, *q), c.clone()));
            }
        }
        unit.sort_by_key(|t| t.0);
        Self::from_table(a.order, labels, table, unit)
    }

    /// Group algebra from a multiplication table.
    pub fn group_algebra(table: &[Vec<usize>], identity: usize, order: u32) -> Self {
        let g = table.len();
        let labels = (0..g).map(|i| format!("d{i}")).collect();
        let t = (0..g)
            .map(|i| (0..g).map(|j| vec![(table[i][j], CyclotomicScalar::one(order))]).collect())
            .collect();
        Self::from_table(order, labels, t, vec![(identity, CyclotomicScalar::one(order))])
    }

    /// Group algebra of the cyclic group of order `m`.
    pub fn cyclic_group_algebra(m: usize, order: u32) -> Self {
        let table: Vec<Vec<usize>> = (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect();
        Self::group_algebra(&table, 0, order)
    }

    /// Polynomials in `nvars` variables modulo all monomials of degree `> cap`.
    pub fn truncated_polynomial(nvars: usize, cap: u32, order: u32) -> Self {
        let basis: Vec<Exponent> = exponents_up_to(nvars, cap);
        let labels = basis
            .iter()
            .map(|e| {
                let parts: Vec<String> = e.iter().enumerate().filter(|(_, &p)| p > 0).map(|(i, p)| format!("x{i}^{p}")).collect();
                if parts.is_empty() { "1".into() } else { parts.join("*") }
            })
            .collect();
        let pos = |e: &Exponent| basis.iter().position(|b| b == e);
        let table = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let s: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        pos(&s).map_or_else(Vec::new, |k| vec![(k, CyclotomicScalar::one(order))])
                    })
                    .collect()
            })
            .collect();
        let zero: Exponent = std::iter::repeat(0).take(nvars).collect();
        Self::from_table(order, labels, table, vec![(pos(&zero).expect("unit"), CyclotomicScalar::one(order))])
    }

    /// `C[S] x| G` for a permutation action of a group on a finite set, with
    /// basis `e_s delta_g` at index `s |G| + g` and product
    /// `(e_s d_g)(e_t d_h) = [s = g t] e_s d_{gh}`.
    pub fn crossed_product_functions(npoints: usize, group_table: &[Vec<usize>], identity: usize, action: &[Vec<usize>], order: u32) -> Self {
        let ng = group_table.len();
        let idx = |s: usize, g: usize| s * ng + g;
        let mut labels = Vec::new();
        for s in 0..npoints {
            for g in 0..ng {
                labels.push(format!("e{s}d{g}"));
            }
        }
        let size = npoints * ng;
        let mut table = vec![vec![Vec::new(); size]; size];
        for s in 0..npoints {
            for g in 0..ng {
                for t in 0..npoints {
                    for h in 0..ng {
                        if action[g][t] == s {
                            table[idx(s, g)][idx(t, h)] = vec![(idx(s, group_table[g][h]), CyclotomicScalar::one(order))];
                        }
                    }
                }
            }
        }
        let unit = (0..npoints).map(|s| (idx(s, identity), CyclotomicScalar::one(order))).collect();
        Self::from_table(order, labels, table, unit)
    }

    /// Attaches an automorphism, given on coordinates (column `i` is the
    /// image of `e_i`); its order is computed.
    pub fn with_automorphism(mut self, alpha: Matrix) -> Result<Self, HomologyError> {
        let d = self.dim();
        if alpha.rows() != d || alpha.cols() != d {
            return Err(HomologyError::Shape(format!("automorphism must be {d} x {d}")));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = alpha.mul_vec(&self.to_dense(&self.table[i][j]));
                let rhs = self.mul(&alpha.column(i), &alpha.column(j));
                if lhs != rhs {
                    return Err(HomologyError::NotAutomorphism);
                }
            }
        }
        let mut r = 1;
        let mut p = alpha.clone();
        while !p.is_identity() {
            p = p.mul(&alpha);
            r += 1;
            if r > 64 {
                return Err(HomologyError::NotAutomorphism);
            }
        }
        self.alpha = Some((alpha, r));
        Ok(self)
    }

    /// The same algebra with the automorphism dropped.
    pub fn untwisted(&self) -> Self {
        Self { alpha: None, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), HomologyError> {
        let d = self.dim();
        let unit = self.to_dense(&self.unit);
        for i in 0..d {
            let e = self.basis_vector(i);
            if self.mul(&unit, &e) != e || self.mul(&e, &unit) != e {
                return Err(HomologyError::NotUnital);
            }
            for j in 0..d {
                let ij = self.to_dense(&self.table[i][j]);
                for k in 0..d {
                    let lhs = self.mul(&ij, &self.basis_vector(k));
                    let rhs = self.mul(&e, &self.to_dense(&self.table[j][k]));
                    if lhs != rhs {
                        return Err(HomologyError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn automorphism(&self) -> Option<&Matrix> {
        self.alpha.as_ref().map(|(m, _)| m)
    }

    /// Order `r` of the automorphism, 1 without one.
    pub fn automorphism_order(&self) -> usize {
        self.alpha.as_ref().map_or(1, |(_, r)| *r)
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    /// `alpha(e_i)` as a sparse vector.
    pub fn alpha_basis(&self, i: usize) -> SparseVec {
        match &self.alpha {
            Some((m, _)) => dense_to_sparse(&m.column(i)),
            None => vec![(i, CyclotomicScalar::one(self.order))],
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<CyclotomicScalar> {
        let mut v = vec![CyclotomicScalar::zero(self.order); self.dim()];
        v[i] = CyclotomicScalar::one(self.order);
        v
    }

    pub fn to_dense(&self, v: &SparseVec) -> Vec<CyclotomicScalar> {
        crate::linalg::sparse_to_dense(self.order, self.dim(), v)
    }

    pub fn mul(&self, u: &[CyclotomicScalar], v: &[CyclotomicScalar]) -> Vec<CyclotomicScalar> {
        let mut terms = Vec::new();
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    terms.push((*k, &ab * c));
                }
            }
        }
        self.to_dense(&sparse_from_terms(terms))
    }

    pub fn mul_sparse(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, a) in u {
            for (j, b) in v {
                let ab = a * b;
                for (k, c) in &self.table[*i][*j] {
                    terms.push((*k, &ab * c));
                }
            }
        }
        sparse_from_terms(terms)
    }

    /// Whether the product is commutative on basis elements.
    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.table[i][j] == self.table[j][i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_algebras_validate() {
        FiniteDimAlgebra::matrix(2, 1).validate().unwrap();
        FiniteDimAlgebra::cyclic_group_algebra(3, 3).validate().unwrap();
        FiniteDimAlgebra::truncated_polynomial(2, 2, 1).validate().unwrap();
        FiniteDimAlgebra::matrices_over(&FiniteDimAlgebra::cyclic_group_algebra(2, 1), 2).validate().unwrap();
        let swap = vec![vec![0, 1], vec![1, 0]];
        let table = vec![vec![0, 1], vec![1, 0]];
        FiniteDimAlgebra::crossed_product_functions(2, &table, 0, &swap, 1).validate().unwrap();
    }

    #[test]
    fn automorphism_order() {
        let a = FiniteDimAlgebra::cyclic_group_algebra(2, 1)
            .with_automorphism(Matrix::from_ints(1, &[&[1, 0], &[0, -1]]))
            .unwrap();
        assert_eq!(a.automorphism_order(), 2);
        let bad = FiniteDimAlgebra::cyclic_group_algebra(2, 1).with_automorphism(Matrix::from_ints(1, &[&[1, 0], &[0, 2]]));
        assert!(bad.is_err());
    }

    #[test]
    fn rejects_non_associative_constants() {
        let o = |v: &[i64]| v.iter().map(|&x| CyclotomicScalar::from_int(1, x)).collect::<Vec<_>>();
        let constants = vec![vec![o(&[1, 0]), o(&[0, 1])], vec![o(&[0, 1]), o(&[1, 1])]];
        let ok = FiniteDimAlgebra::from_structure(1, vec!["1".into(), "u".into()], constants, o(&[1, 0]));
        assert!(ok.is_ok());
        let constants = vec![vec![o(&[1, 0]), o(&[0, 1])], vec![o(&[0, 1]), o(&[0, 0])]];
        assert!(FiniteDimAlgebra::from_structure(1, vec!["1".into(), "u".into()], constants.clone(), o(&[1, 0])).is_ok());
        let mut broken = constants;
        broken[0][0] = o(&[0, 1]);
        assert!(FiniteDimAlgebra::from_structure(1, vec!["1".into(), "u".into()], broken, o(&[1, 0])).is_err());
    }
}
